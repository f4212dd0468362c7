// tmca: simulate, analyze, reconstruct and design codes for
// time-multiplexed coded aperture imaging (light-field and spectral).
//
// Exit codes: 0 success, 1 internal/solver error, 2 usage/validation error.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmca/codeopt.hpp"
#include "tmca/conditioning.hpp"
#include "tmca/core_model.hpp"
#include "tmca/io.hpp"
#include "tmca/metrics.hpp"
#include "tmca/parallel.hpp"
#include "tmca/phantoms.hpp"
#include "tmca/recon.hpp"
#include "tmca/rng.hpp"
#include "tmca/system.hpp"

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T, typename Conv>
std::vector<T> parse_list(const std::string& text, const Conv& conv, const char* what) {
  std::vector<T> out;
  std::string token;
  const auto flush = [&] {
    if (token.empty()) return;
    try {
      out.push_back(conv(token));
    } catch (const std::exception&) {
      throw tmca::InvalidInputError(std::string("cannot parse ") + what + " list entry '" +
                                    token + "'");
    }
    token.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return out;
}

std::vector<int> parse_dims(const std::string& text) {
  return parse_list<int>(text, [](const std::string& s) { return std::stoi(s); }, "integer");
}

std::vector<double> parse_doubles(const std::string& text) {
  return parse_list<double>(text, [](const std::string& s) { return std::stod(s); }, "number");
}

struct SystemFlags {
  std::string system;
  std::string dims_text;
  int shear_step = 1;
  int dispersion_step = 1;
  std::string kappa_text;

  void add_to(CLI::App* cmd, bool required = true) {
    auto* sys = cmd->add_option("--system", system, "Imaging system: hs or lf");
    auto* dims = cmd->add_option(
        "--dims", dims_text, "Scene dims: hs = M,N,L; lf = My,Mx,Uy,Ux");
    if (required) {
      sys->required();
      dims->required();
    }
    cmd->add_option("--shear-step", shear_step, "LF: aperture shift in pixels per view index");
    cmd->add_option("--dispersion-step", dispersion_step, "HS: pixel shift per band");
    cmd->add_option("--kappa", kappa_text, "HS: comma-separated per-band sensor response");
  }

  tmca::SystemDims build() const {
    const std::vector<int> dims = parse_dims(dims_text);
    if (system == "hs") {
      if (dims.size() != 3) throw tmca::InvalidInputError("hs dims must be M,N,L");
      tmca::HsSystemDims hs;
      hs.scene_spatial = {dims[0], dims[1]};
      hs.spectral.bands = dims[2];
      hs.spectral.dispersion_step = dispersion_step;
      if (!kappa_text.empty()) hs.spectral.sensor_response = parse_doubles(kappa_text);
      hs.spectral.validate();
      return hs;
    }
    if (system == "lf") {
      if (dims.size() != 4) throw tmca::InvalidInputError("lf dims must be My,Mx,Uy,Ux");
      tmca::LfSystemDims lf;
      lf.geometry.sensor = {dims[0], dims[1]};
      lf.geometry.views_y = dims[2];
      lf.geometry.views_x = dims[3];
      lf.geometry.shear_step = shear_step;
      lf.geometry.validate();
      return lf;
    }
    throw tmca::InvalidInputError("--system must be hs or lf");
  }

  json meta() const {
    json m;
    m["system"] = system;
    m["dims"] = parse_dims(dims_text);
    if (system == "lf") m["shear_step"] = shear_step;
    if (system == "hs") {
      m["dispersion_step"] = dispersion_step;
      if (!kappa_text.empty()) m["kappa"] = parse_doubles(kappa_text);
    }
    return m;
  }
};

tmca::SystemDims dims_from_meta(const json& meta) {
  SystemFlags flags;
  flags.system = meta.at("system").get<std::string>();
  std::string dims_text;
  for (const auto& d : meta.at("dims")) {
    if (!dims_text.empty()) dims_text += ',';
    dims_text += std::to_string(d.get<int>());
  }
  flags.dims_text = dims_text;
  if (meta.contains("shear_step")) flags.shear_step = meta["shear_step"].get<int>();
  if (meta.contains("dispersion_step")) {
    flags.dispersion_step = meta["dispersion_step"].get<int>();
  }
  if (meta.contains("kappa")) {
    std::string k;
    for (const auto& v : meta["kappa"]) {
      if (!k.empty()) k += ',';
      k += format_double(v.get<double>());
    }
    flags.kappa_text = k;
  }
  return flags.build();
}

void write_csv(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw tmca::IoError("cannot open file for writing: " + path);
  out << contents;
  if (!out) throw tmca::IoError("write failed: " + path);
}

json metrics_json(const tmca::MetricReport& r) {
  json j;
  j["rmse"] = r.rmse;
  j["rmse_conventional"] = r.rmse_conventional;
  j["uiqi"] = r.uiqi;
  j["sam_degrees"] = r.sam_degrees;
  j["sam_skipped_pixels"] = r.sam_skipped_pixels;
  j["ergas"] = r.ergas;
  j["dd"] = r.dd;
  if (std::isinf(r.psnr)) {
    j["psnr"] = r.psnr > 0 ? "inf" : "-inf";
  } else {
    j["psnr"] = r.psnr;
  }
  j["ssim"] = r.ssim;
  return j;
}

// ---------------------------------------------------------------- commands

int cmd_gen_phantom(const std::string& kind, const std::string& dims_text, int levels,
                    std::uint64_t seed, const std::string& out) {
  const std::vector<int> dims = parse_dims(dims_text);
  const tmca::PhantomKind k = tmca::phantom_kind_from_name(kind);
  tmca::TensorFile t;
  if (dims.size() == 3) {
    t = tensor_from_cube(tmca::gen_phantom_cube(k, dims[0], dims[1], dims[2], seed, levels));
  } else if (dims.size() == 4) {
    t = tensor_from_lightfield(
        tmca::gen_phantom_lightfield(k, dims[0], dims[1], dims[2], dims[3], seed, levels));
  } else {
    throw tmca::InvalidInputError("gen-phantom: dims must have 3 (cube) or 4 (light field) axes");
  }
  t.meta["command"] = "gen-phantom";
  t.meta["kind"] = kind;
  t.meta["levels"] = levels;
  t.meta["seed"] = seed;
  tmca::write_tensor(out, t);
  return 0;
}

void add_noise(tmca::Snapshot& snap, double sigma, std::uint64_t seed) {
  if (sigma <= 0.0) return;
  tmca::Rng rng(tmca::mix_seed(seed, 0x6e6f6973));
  for (double& v : snap.values()) v += sigma * rng.gaussian();
}

int cmd_simulate_hs(const std::string& scene, const std::string& aperture,
                    const std::string& shutter, int dispersion_step,
                    const std::string& kappa_text, double noise_sigma, std::uint64_t seed,
                    const std::string& out) {
  const tmca::SpectralCube cube = cube_from_tensor(tmca::read_tensor(scene));
  const tmca::ApertureSequence ap = aperture_from_tensor(tmca::read_tensor(aperture));
  const tmca::ShutterSequence sh = shutter_from_tensor(tmca::read_tensor(shutter));
  tmca::SpectralConfig cfg;
  cfg.bands = cube.bands;
  cfg.dispersion_step = dispersion_step;
  if (!kappa_text.empty()) cfg.sensor_response = parse_doubles(kappa_text);
  tmca::Snapshot snap = hs_simulate(cube, ap, sh, cfg);
  add_noise(snap, noise_sigma, seed);
  tmca::TensorFile t = tensor_from_image(snap);
  t.meta["command"] = "simulate-hs";
  t.meta["dispersion_step"] = dispersion_step;
  if (!kappa_text.empty()) t.meta["kappa"] = parse_doubles(kappa_text);
  t.meta["noise_sigma"] = noise_sigma;
  t.meta["seed"] = seed;
  tmca::write_tensor(out, t);
  return 0;
}

int cmd_simulate_lf(const std::string& scene, const std::string& aperture,
                    const std::string& shutter, int shear_step, double noise_sigma,
                    std::uint64_t seed, const std::string& out) {
  const tmca::LightField lf = lightfield_from_tensor(tmca::read_tensor(scene));
  const tmca::ApertureSequence ap = aperture_from_tensor(tmca::read_tensor(aperture));
  const tmca::ShutterSequence sh = shutter_from_tensor(tmca::read_tensor(shutter));
  tmca::LightFieldGeometry geom;
  geom.sensor = lf.spatial_shape();
  geom.views_y = lf.views_y;
  geom.views_x = lf.views_x;
  geom.shear_step = shear_step;
  tmca::Snapshot snap = lf_simulate(lf, ap, sh, geom);
  add_noise(snap, noise_sigma, seed);
  tmca::TensorFile t = tensor_from_image(snap);
  t.meta["command"] = "simulate-lf";
  t.meta["shear_step"] = shear_step;
  t.meta["noise_sigma"] = noise_sigma;
  t.meta["seed"] = seed;
  tmca::write_tensor(out, t);
  return 0;
}

int cmd_assemble(const SystemFlags& flags, const std::string& aperture,
                 const std::string& shutter, std::int64_t capacity_cap, std::uint64_t seed,
                 const std::string& out) {
  const tmca::SystemDims dims = flags.build();
  const tmca::ApertureSequence ap = aperture_from_tensor(tmca::read_tensor(aperture));
  const tmca::ShutterSequence sh = shutter_from_tensor(tmca::read_tensor(shutter));
  const tmca::MeasurementMatrix m = assemble_system_matrix(dims, ap, sh, capacity_cap);
  tmca::TensorFile t = tensor_from_matrix(m);
  json meta = flags.meta();
  meta["command"] = "assemble";
  meta["capacity_cap"] = capacity_cap;
  meta["seed"] = seed;
  meta["sensor_rows"] = t.meta["sensor_rows"];
  meta["sensor_cols"] = t.meta["sensor_cols"];
  t.meta = meta;
  tmca::write_tensor(out, t);
  return 0;
}

int cmd_spectrum(const std::string& matrix_path, int eigen_cap, const std::string& csv_out) {
  const tmca::MeasurementMatrix m = matrix_from_tensor(tmca::read_tensor(matrix_path));
  tmca::SpectrumOptions opts;
  opts.max_gram_dim = eigen_cap;
  const tmca::SpectrumReport report = spectrum(m, opts);
  if (!csv_out.empty()) {
    std::string csv = "eig_index,value\n";
    for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
      csv += std::to_string(i) + "," + format_double(report.eigenvalues[i]) + "\n";
    }
    write_csv(csv_out, csv);
  }
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["num_eigenvalues"] = report.eigenvalues.size();
  j["spread_ratio"] = report.spread_ratio;
  j["near_zero_count"] = report.near_zero_count;
  j["coherence"] = report.coherence;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_study(const SystemFlags& flags, const std::string& k_list_text, int seeds,
              std::uint64_t seed, bool k1_open_shutter, int eigen_cap,
              const std::string& csv_out, const std::string& summary_out) {
  tmca::StudyConfig config;
  config.dims = flags.build();
  for (int k : parse_dims(k_list_text)) config.slot_counts.push_back(k);
  config.num_seeds = seeds;
  config.base_seed = seed;
  config.open_shutter_when_single_slot = k1_open_shutter;
  config.spectrum_options.max_gram_dim = eigen_cap;

  const std::vector<tmca::StudyRow> rows = conditioning_study(config);
  if (!csv_out.empty()) {
    std::string csv = "system,K,seed,eig_index,value\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.report.eigenvalues.size(); ++i) {
        csv += flags.system + "," + std::to_string(row.num_slots) + "," +
               std::to_string(row.seed_index) + "," + std::to_string(i) + "," +
               format_double(row.report.eigenvalues[i]) + "\n";
      }
    }
    write_csv(csv_out, csv);
  }

  const std::vector<tmca::StudySummary> summaries = summarize_study(rows);
  std::string csv =
      "system,K,median_spread_ratio,median_near_zero_count,median_coherence,"
      "median_cum_energy_q25\n";
  for (const auto& s : summaries) {
    const std::size_t n = s.median_decay_profile.size();
    const double q25 = n == 0 ? 0.0 : s.median_decay_profile[(n - 1) / 4];
    csv += flags.system + "," + std::to_string(s.num_slots) + "," +
           format_double(s.median_spread_ratio) + "," +
           format_double(s.median_near_zero_count) + "," + format_double(s.median_coherence) +
           "," + format_double(q25) + "\n";
  }
  if (!summary_out.empty()) {
    write_csv(summary_out, csv);
  }
  std::cout << csv;
  return 0;
}

int cmd_reconstruct(const std::string& matrix_path, const SystemFlags& flags,
                    const std::string& aperture, const std::string& shutter,
                    const std::string& snapshot_path, const tmca::AdmmConfig& admm,
                    bool log_progress, std::uint64_t seed, const std::string& out,
                    const std::string& trace_out) {
  tmca::MeasurementMatrix m;
  tmca::SystemDims dims;
  if (!matrix_path.empty()) {
    const tmca::TensorFile t = tmca::read_tensor(matrix_path);
    m = matrix_from_tensor(t);
    if (!flags.system.empty()) {
      dims = flags.build();
    } else if (t.meta.contains("system")) {
      dims = dims_from_meta(t.meta);
    } else {
      throw tmca::InvalidInputError(
          "reconstruct: matrix file carries no system meta; pass --system/--dims");
    }
  } else {
    if (flags.system.empty()) {
      throw tmca::InvalidInputError("reconstruct: need either --matrix or --system/--dims");
    }
    dims = flags.build();
    if (aperture.empty() || shutter.empty()) {
      throw tmca::InvalidInputError("reconstruct: --aperture and --shutter required without --matrix");
    }
    const tmca::ApertureSequence ap = aperture_from_tensor(tmca::read_tensor(aperture));
    const tmca::ShutterSequence sh = shutter_from_tensor(tmca::read_tensor(shutter));
    m = assemble_system_matrix(dims, ap, sh);
  }

  const tmca::Snapshot snap = image_from_tensor(tmca::read_tensor(snapshot_path));
  const tmca::SceneLayout layout = scene_layout(dims);

  tmca::AdmmLogger logger;
  if (log_progress) {
    logger = [](const tmca::AdmmIterStats& s) {
      std::fprintf(stderr, "iter=%d objective=%.17g r_primal=%.17g r_dual=%.17g\n", s.iteration,
                   s.objective, s.primal_residual, s.dual_residual);
    };
  }
  const tmca::ReconResult result = admm_tv(m, snap, admm, layout, {}, logger);

  tmca::TensorFile t;
  if (std::holds_alternative<tmca::HsSystemDims>(dims)) {
    const auto& hs = std::get<tmca::HsSystemDims>(dims);
    t = tensor_from_cube(
        tmca::hs_from_vector(result.estimate, hs.scene_spatial, hs.spectral.bands));
  } else {
    const auto& lf = std::get<tmca::LfSystemDims>(dims);
    t = tensor_from_lightfield(tmca::lf_from_vector(result.estimate, lf.geometry));
  }
  t.meta["command"] = "reconstruct";
  t.meta["tv_weight"] = admm.tv_weight;
  t.meta["tv_weight_used"] = result.tv_weight_used;
  t.meta["rho"] = admm.rho;
  t.meta["max_iters"] = admm.max_iters;
  t.meta["abs_tol"] = admm.abs_tol;
  t.meta["rel_tol"] = admm.rel_tol;
  t.meta["cg_max_iters"] = admm.cg_max_iters;
  t.meta["cg_tol"] = admm.cg_tol;
  t.meta["seed"] = seed;
  t.meta["iterations_used"] = result.iterations_used;
  t.meta["converged"] = result.converged;
  tmca::write_tensor(out, t);

  if (!trace_out.empty()) {
    std::string csv = "iter,objective,r_primal,r_dual\n";
    for (int i = 0; i < result.iterations_used; ++i) {
      csv += std::to_string(i + 1) + "," + format_double(result.objective_trace[i]) + "," +
             format_double(result.primal_residuals[i]) + "," +
             format_double(result.dual_residuals[i]) + "\n";
    }
    write_csv(trace_out, csv);
  }
  return 0;
}

int cmd_optimize(const SystemFlags& flags, int slots, const std::string& objective_name,
                 int steps, double lr, double beta, double binarization_weight,
                 double softmax_sharpness, std::uint64_t seed, const std::string& out_aperture,
                 const std::string& out_shutter, const std::string& trace_out) {
  const tmca::SystemDims dims = flags.build();
  tmca::SurrogateObjective objective;
  if (objective_name == "gram-identity") {
    objective.kind = tmca::SurrogateKind::gram_identity;
  } else if (objective_name == "coherence-softmax") {
    objective.kind = tmca::SurrogateKind::coherence_softmax;
  } else {
    throw tmca::InvalidInputError("optimize: unknown objective '" + objective_name + "'");
  }
  objective.binarization_weight = binarization_weight;
  objective.softmax_sharpness = softmax_sharpness;

  const tmca::CodeParams init = random_code_params(dims, slots, beta, seed);
  const tmca::OptimizeResult result = optimize_codes(init, objective, dims, steps, lr);

  json meta = flags.meta();
  meta["command"] = "optimize";
  meta["slots"] = slots;
  meta["objective"] = objective_name;
  meta["steps"] = steps;
  meta["lr"] = lr;
  meta["beta"] = beta;
  meta["binarization_weight"] = binarization_weight;
  meta["softmax_sharpness"] = softmax_sharpness;
  meta["seed"] = seed;
  meta["diverged"] = result.diverged;

  tmca::TensorFile ap = tensor_from_aperture(result.aperture);
  for (auto& [k, v] : meta.items()) ap.meta[k] = v;
  tmca::write_tensor(out_aperture, ap);
  tmca::TensorFile sh = tensor_from_shutter(result.shutter);
  for (auto& [k, v] : meta.items()) sh.meta[k] = v;
  tmca::write_tensor(out_shutter, sh);

  if (!trace_out.empty()) {
    std::string csv = "step,relaxed_obj,quantized_obj\n";
    for (const auto& row : result.trace) {
      csv += std::to_string(row.step) + "," + format_double(row.relaxed_objective) + "," +
             format_double(row.quantized_objective) + "\n";
    }
    write_csv(trace_out, csv);
  }
  if (result.diverged) {
    throw tmca::SolverError("optimize: objective became non-finite; wrote last finite codes");
  }
  return 0;
}

tmca::ChannelView view_any(const tmca::TensorFile& t, tmca::SpectralCube& cube,
                           tmca::LightField& lf, tmca::Image& img) {
  if (t.shape.size() == 2) {
    img = image_from_tensor(t);
    return tmca::ChannelView::of(img);
  }
  if (t.shape.size() == 3) {
    cube = cube_from_tensor(t);
    return tmca::ChannelView::of(cube);
  }
  if (t.shape.size() == 4) {
    lf = lightfield_from_tensor(t);
    return tmca::ChannelView::of(lf);
  }
  throw tmca::InvalidInputError("metrics: tensors must have rank 2, 3 or 4");
}

int cmd_metrics(const std::string& reference, const std::string& estimate,
                std::optional<double> peak, const std::string& csv_out) {
  tmca::SpectralCube ref_cube, est_cube;
  tmca::LightField ref_lf, est_lf;
  tmca::Image ref_img, est_img;
  const tmca::TensorFile ref_t = tmca::read_tensor(reference);
  const tmca::TensorFile est_t = tmca::read_tensor(estimate);
  const tmca::ChannelView ref = view_any(ref_t, ref_cube, ref_lf, ref_img);
  const tmca::ChannelView est = view_any(est_t, est_cube, est_lf, est_img);

  const tmca::MetricReport report = tmca::compute_metrics(ref, est, peak);
  const json j = metrics_json(report);
  std::cout << j.dump() << "\n";
  if (!csv_out.empty()) {
    std::string csv = "metric,value\n";
    for (const auto& [key, value] : j.items()) {
      csv += key + "," +
             (value.is_string() ? value.get<std::string>()
                                : format_double(value.get<double>())) +
             "\n";
    }
    write_csv(csv_out, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-multiplexed coded aperture imaging toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int threads = 0;

  // gen-phantom
  auto* gen = app.add_subcommand("gen-phantom", "Generate a seeded test scene");
  std::string gen_kind = "blocks";
  std::string gen_dims;
  int gen_levels = 5;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "blocks | gauss | spectra-ramp");
  gen->add_option("--dims", gen_dims, "M,N,L for a cube or My,Mx,Uy,Ux for a light field")
      ->required();
  gen->add_option("--levels", gen_levels, "Palette size for blocks");
  gen->add_option("--out", gen_out, "Output scene file")->required();

  // simulate-hs
  auto* sim_hs = app.add_subcommand("simulate-hs", "Spectral coded exposure from a cube");
  std::string sh_scene, sh_ap, sh_sh, sh_kappa, sh_out;
  int sh_step = 1;
  double sh_noise = 0.0;
  sim_hs->add_option("--scene", sh_scene)->required();
  sim_hs->add_option("--aperture", sh_ap)->required();
  sim_hs->add_option("--shutter", sh_sh)->required();
  sim_hs->add_option("--dispersion-step", sh_step);
  sim_hs->add_option("--kappa", sh_kappa, "Comma-separated per-band response");
  sim_hs->add_option("--noise-sigma", sh_noise, "Additive Gaussian noise after the forward model");
  sim_hs->add_option("--out", sh_out)->required();

  // simulate-lf
  auto* sim_lf = app.add_subcommand("simulate-lf", "Light-field coded exposure");
  std::string sl_scene, sl_ap, sl_sh, sl_out;
  int sl_step = 1;
  double sl_noise = 0.0;
  sim_lf->add_option("--scene", sl_scene)->required();
  sim_lf->add_option("--aperture", sl_ap)->required();
  sim_lf->add_option("--shutter", sl_sh)->required();
  sim_lf->add_option("--shear-step", sl_step);
  sim_lf->add_option("--noise-sigma", sl_noise);
  sim_lf->add_option("--out", sl_out)->required();

  // assemble
  auto* assemble = app.add_subcommand("assemble", "Assemble the dense measurement matrix");
  SystemFlags as_flags;
  as_flags.add_to(assemble);
  std::string as_ap, as_sh, as_out;
  std::int64_t as_cap = tmca::kDefaultMatrixEntryCap;
  assemble->add_option("--aperture", as_ap)->required();
  assemble->add_option("--shutter", as_sh)->required();
  assemble->add_option("--capacity-cap", as_cap, "Max dense entries");
  assemble->add_option("--out", as_out)->required();

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "Gram eigenvalue spectrum of a matrix file");
  std::string sp_matrix, sp_csv;
  int sp_cap = 2048;
  spec->add_option("--matrix", sp_matrix)->required();
  spec->add_option("--eigen-cap", sp_cap, "Max Gram dimension");
  spec->add_option("--csv-out", sp_csv, "Per-eigenvalue CSV output");

  // study
  auto* study = app.add_subcommand("study", "Seeded conditioning study over K");
  SystemFlags st_flags;
  st_flags.add_to(study);
  std::string st_klist = "1,8";
  int st_seeds = 20;
  bool st_k1_open = false;
  int st_cap = 2048;
  std::string st_csv, st_summary;
  study->add_option("--k-list", st_klist, "Comma-separated slot counts");
  study->add_option("--seeds", st_seeds, "Seeds per K");
  study->add_flag("--k1-open-shutter", st_k1_open,
                  "Keep the shutter open at K=1 (plain coded-aperture baseline)");
  study->add_option("--eigen-cap", st_cap);
  study->add_option("--csv-out", st_csv, "Long-form eigenvalue CSV");
  study->add_option("--summary-out", st_summary, "Per-K summary CSV");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "ADMM-TV reconstruction from a snapshot");
  SystemFlags rc_flags;
  rc_flags.add_to(rec, /*required=*/false);
  std::string rc_matrix, rc_ap, rc_sh, rc_snapshot, rc_out, rc_trace;
  tmca::AdmmConfig rc_admm;
  bool rc_log = false;
  rec->add_option("--matrix", rc_matrix, "Matrix file (alternative to --system/--dims + codes)");
  rec->add_option("--aperture", rc_ap);
  rec->add_option("--shutter", rc_sh);
  rec->add_option("--snapshot", rc_snapshot)->required();
  rec->add_option("--tv-weight", rc_admm.tv_weight, "TV weight; negative = auto scale");
  rec->add_option("--rho", rc_admm.rho);
  rec->add_option("--max-iters", rc_admm.max_iters);
  rec->add_option("--abs-tol", rc_admm.abs_tol);
  rec->add_option("--rel-tol", rc_admm.rel_tol);
  rec->add_option("--cg-max-iters", rc_admm.cg_max_iters);
  rec->add_option("--cg-tol", rc_admm.cg_tol);
  rec->add_flag("--log-progress", rc_log, "key=value iteration log on stderr");
  rec->add_option("--out", rc_out)->required();
  rec->add_option("--trace-out", rc_trace, "Iteration trace CSV");

  // optimize
  auto* opt = app.add_subcommand("optimize", "Design binary codes by relaxed gradient descent");
  SystemFlags op_flags;
  op_flags.add_to(opt);
  int op_slots = 4;
  std::string op_objective = "gram-identity";
  int op_steps = 500;
  double op_lr = 0.05;
  double op_beta = 4.0;
  double op_binweight = 0.0;
  double op_sharpness = 100.0;
  std::string op_out_ap, op_out_sh, op_trace;
  opt->add_option("--slots", op_slots, "Number of time slots K")->required();
  opt->add_option("--objective", op_objective, "gram-identity | coherence-softmax");
  opt->add_option("--steps", op_steps);
  opt->add_option("--lr", op_lr);
  opt->add_option("--beta", op_beta, "Sigmoid slope of the relaxation");
  opt->add_option("--binarization-weight", op_binweight);
  opt->add_option("--softmax-sharpness", op_sharpness);
  opt->add_option("--out-aperture", op_out_ap)->required();
  opt->add_option("--out-shutter", op_out_sh)->required();
  opt->add_option("--trace-out", op_trace);

  // metrics
  auto* met = app.add_subcommand("metrics", "Quality metrics between two scene files");
  std::string mt_ref, mt_est, mt_csv;
  double mt_peak = -1.0;
  met->add_option("--reference", mt_ref)->required();
  met->add_option("--estimate", mt_est)->required();
  met->add_option("--peak", mt_peak, "Peak value for PSNR/SSIM (default: reference max)");
  met->add_option("--csv-out", mt_csv);

  for (auto* cmd : app.get_subcommands({})) {
    cmd->add_option("--seed", seed, "Seed for every random draw");
    cmd->add_option("--threads", threads, "Worker thread cap (0 = auto)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    tmca::set_max_threads(threads);
    if (gen->parsed()) return cmd_gen_phantom(gen_kind, gen_dims, gen_levels, seed, gen_out);
    if (sim_hs->parsed()) {
      return cmd_simulate_hs(sh_scene, sh_ap, sh_sh, sh_step, sh_kappa, sh_noise, seed, sh_out);
    }
    if (sim_lf->parsed()) {
      return cmd_simulate_lf(sl_scene, sl_ap, sl_sh, sl_step, sl_noise, seed, sl_out);
    }
    if (assemble->parsed()) return cmd_assemble(as_flags, as_ap, as_sh, as_cap, seed, as_out);
    if (spec->parsed()) return cmd_spectrum(sp_matrix, sp_cap, sp_csv);
    if (study->parsed()) {
      return cmd_study(st_flags, st_klist, st_seeds, seed, st_k1_open, st_cap, st_csv,
                       st_summary);
    }
    if (rec->parsed()) {
      return cmd_reconstruct(rc_matrix, rc_flags, rc_ap, rc_sh, rc_snapshot, rc_admm, rc_log,
                             seed, rc_out, rc_trace);
    }
    if (opt->parsed()) {
      return cmd_optimize(op_flags, op_slots, op_objective, op_steps, op_lr, op_beta,
                          op_binweight, op_sharpness, seed, op_out_ap, op_out_sh, op_trace);
    }
    if (met->parsed()) {
      std::optional<double> peak;
      if (mt_peak >= 0.0) peak = mt_peak;
      return cmd_metrics(mt_ref, mt_est, peak, mt_csv);
    }
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const tmca::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tmca::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tmca::Error& e) {
    // Dimension, invalid input, capacity, parse: caller-fixable.
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
