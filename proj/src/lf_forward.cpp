#include "tmca/lf_forward.hpp"

#include <cstddef>
#include <string>

#include "tmca/parallel.hpp"

namespace tmca {

LightField::LightField(int spatial_rows, int spatial_cols, int views_y, int views_x, double fill)
    : spatial_rows(spatial_rows), spatial_cols(spatial_cols), views_y(views_y), views_x(views_x),
      samples(static_cast<std::size_t>(spatial_rows) * spatial_cols * views_y * views_x, fill) {
  if (spatial_rows < 0 || spatial_cols < 0) throw DimensionError("LightField: negative dimension");
  if (views_y < 1 || views_x < 1 || views_y % 2 == 0 || views_x % 2 == 0) {
    throw DimensionError("LightField: angular sizes must be odd and positive");
  }
}

void LightFieldGeometry::validate() const {
  if (sensor.rows < 1 || sensor.cols < 1) {
    throw DimensionError("LightFieldGeometry: empty sensor");
  }
  if (views_y < 1 || views_x < 1 || views_y % 2 == 0 || views_x % 2 == 0) {
    throw DimensionError("LightFieldGeometry: angular sizes must be odd and positive");
  }
  if (shear_step < 1) {
    throw DimensionError("LightFieldGeometry: shear_step must be >= 1");
  }
}

namespace {

void check_codes(const ApertureSequence& aperture, const ShutterSequence& shutter,
                 const LightFieldGeometry& geom) {
  geom.validate();
  aperture.validate();
  shutter.validate();
  if (aperture.num_slots() != shutter.num_slots()) {
    throw DimensionError("lf_forward: aperture and shutter slot counts differ");
  }
  if (shutter.shape() != geom.sensor) {
    throw DimensionError("lf_forward: shutter shape differs from sensor shape");
  }
  if (aperture.shape() != geom.aperture_shape()) {
    throw DimensionError("lf_forward: aperture shape must be sensor plus shear margin (" +
                         std::to_string(geom.aperture_shape().rows) + "x" +
                         std::to_string(geom.aperture_shape().cols) + ")");
  }
}

void check_lightfield(const LightField& lf, const LightFieldGeometry& geom) {
  if (lf.spatial_shape() != geom.sensor || lf.views_y != geom.views_y ||
      lf.views_x != geom.views_x) {
    throw DimensionError("lf_forward: light field dimensions differ from geometry");
  }
}

}  // namespace

Snapshot lf_simulate(const LightField& lf, const ApertureSequence& aperture,
                     const ShutterSequence& shutter, const LightFieldGeometry& geom) {
  check_codes(aperture, shutter, geom);
  check_lightfield(lf, geom);

  const int d = geom.shear_step;
  Snapshot out(geom.sensor.rows, geom.sensor.cols);
  parallel_for(0, geom.sensor.rows, [&](int my) {
    for (int mx = 0; mx < geom.sensor.cols; ++mx) {
      double acc = 0.0;
      for (int k = 0; k < shutter.num_slots(); ++k) {
        if (!shutter.slots[static_cast<std::size_t>(k)](my, mx)) continue;
        const BinaryMask& t = aperture.slots[static_cast<std::size_t>(k)];
        // Index my + d*vy with vy the 0-based view index equals the sheared
        // lookup m + d*v + margin for the symmetric view offset v.
        for (int vy = 0; vy < lf.views_y; ++vy) {
          for (int vx = 0; vx < lf.views_x; ++vx) {
            if (t(my + d * vy, mx + d * vx)) {
              acc += lf.at(my, mx, vy, vx);
            }
          }
        }
      }
      out(my, mx) = acc;
    }
  });
  return out;
}

EquivalentApertureLF lf_equivalent_aperture(const ApertureSequence& aperture,
                                            const ShutterSequence& shutter,
                                            const LightFieldGeometry& geom) {
  check_codes(aperture, shutter, geom);

  const int d = geom.shear_step;
  EquivalentApertureLF t_hat;
  t_hat.spatial_rows = geom.sensor.rows;
  t_hat.spatial_cols = geom.sensor.cols;
  t_hat.views_y = geom.views_y;
  t_hat.views_x = geom.views_x;
  t_hat.values.assign(static_cast<std::size_t>(geom.sensor.rows) * geom.sensor.cols *
                          geom.views_y * geom.views_x,
                      0.0);
  parallel_for(0, geom.sensor.rows, [&](int my) {
    for (int mx = 0; mx < geom.sensor.cols; ++mx) {
      for (int vy = 0; vy < geom.views_y; ++vy) {
        for (int vx = 0; vx < geom.views_x; ++vx) {
          double acc = 0.0;
          for (int k = 0; k < shutter.num_slots(); ++k) {
            if (shutter.slots[static_cast<std::size_t>(k)](my, mx) &&
                aperture.slots[static_cast<std::size_t>(k)](my + d * vy, mx + d * vx)) {
              acc += 1.0;
            }
          }
          t_hat.at(my, mx, vy, vx) = acc;
        }
      }
    }
  });
  return t_hat;
}

Snapshot lf_apply_equivalent(const EquivalentApertureLF& t_hat, const LightField& lf) {
  if (t_hat.spatial_rows != lf.spatial_rows || t_hat.spatial_cols != lf.spatial_cols ||
      t_hat.views_y != lf.views_y || t_hat.views_x != lf.views_x) {
    throw DimensionError("lf_apply_equivalent: dimensions differ");
  }
  Snapshot out(lf.spatial_rows, lf.spatial_cols);
  parallel_for(0, lf.spatial_rows, [&](int my) {
    for (int mx = 0; mx < lf.spatial_cols; ++mx) {
      double acc = 0.0;
      for (int vy = 0; vy < lf.views_y; ++vy) {
        for (int vx = 0; vx < lf.views_x; ++vx) {
          acc += t_hat.at(my, mx, vy, vx) * lf.at(my, mx, vy, vx);
        }
      }
      out(my, mx) = acc;
    }
  });
  return out;
}

MeasurementMatrix lf_assemble_matrix(const ApertureSequence& aperture,
                                     const ShutterSequence& shutter,
                                     const LightFieldGeometry& geom, std::int64_t max_entries) {
  check_codes(aperture, shutter, geom);

  const std::int64_t rows = static_cast<std::int64_t>(geom.sensor.rows) * geom.sensor.cols;
  const std::int64_t cols = rows * geom.views_y * geom.views_x;
  if (rows * cols > max_entries) {
    throw CapacityError("lf_assemble_matrix: " + std::to_string(rows * cols) +
                        " entries exceed cap " + std::to_string(max_entries));
  }

  const EquivalentApertureLF t_hat = lf_equivalent_aperture(aperture, shutter, geom);
  MeasurementMatrix m(static_cast<int>(rows), static_cast<int>(cols), geom.sensor);
  for (int vy = 0; vy < geom.views_y; ++vy) {
    for (int vx = 0; vx < geom.views_x; ++vx) {
      for (int my = 0; my < geom.sensor.rows; ++my) {
        for (int mx = 0; mx < geom.sensor.cols; ++mx) {
          const int row = my * geom.sensor.cols + mx;
          const int col =
              ((vy * geom.views_x + vx) * geom.sensor.rows + my) * geom.sensor.cols + mx;
          m.at(row, col) = t_hat.at(my, mx, vy, vx);
        }
      }
    }
  }
  return m;
}

std::vector<double> lf_vectorize(const LightField& lf) {
  std::vector<double> v(lf.size(), 0.0);
  std::size_t idx = 0;
  for (int vy = 0; vy < lf.views_y; ++vy) {
    for (int vx = 0; vx < lf.views_x; ++vx) {
      for (int my = 0; my < lf.spatial_rows; ++my) {
        for (int mx = 0; mx < lf.spatial_cols; ++mx) {
          v[idx++] = lf.at(my, mx, vy, vx);
        }
      }
    }
  }
  return v;
}

LightField lf_from_vector(std::span<const double> v, const LightFieldGeometry& geom) {
  geom.validate();
  LightField lf(geom.sensor.rows, geom.sensor.cols, geom.views_y, geom.views_x);
  if (v.size() != lf.size()) {
    throw DimensionError("lf_from_vector: vector length does not match geometry");
  }
  std::size_t idx = 0;
  for (int vy = 0; vy < geom.views_y; ++vy) {
    for (int vx = 0; vx < geom.views_x; ++vx) {
      for (int my = 0; my < geom.sensor.rows; ++my) {
        for (int mx = 0; mx < geom.sensor.cols; ++mx) {
          lf.at(my, mx, vy, vx) = v[idx++];
        }
      }
    }
  }
  return lf;
}

}  // namespace tmca
