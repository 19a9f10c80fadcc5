// lesion-locus: approximate lesion localization in dermoscopy images.
//
// Subcommands: deframe, threshold, fuse, localize, sweep, fit-area.
// Exit codes: 0 success, 1 I/O or manifest error, 2 pipeline stage error,
// 64 usage error.

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "locus/eval.hpp"
#include "locus/ground_truth.hpp"
#include "locus/io.hpp"
#include "locus/localize.hpp"
#include "locus/manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitStage = 2;
constexpr int kExitUsage = 64;

json to_json(const locus::BoundingBox& b) {
  return {{"left", b.left}, {"top", b.top}, {"right", b.right}, {"bottom", b.bottom}};
}

json to_json(const locus::CropRect& r) {
  return {{"top", r.top}, {"bottom", r.bottom}, {"left", r.left}, {"right", r.right}};
}

json thresholds_json(const std::vector<locus::ThresholdResult>& thresholds) {
  json arr = json::array();
  for (const auto& t : thresholds)
    arr.push_back({{"method", locus::method_name(t.method)}, {"t", t.t}});
  return arr;
}

void draw_box(locus::RgbImage& img, const locus::BoundingBox& box, std::uint8_t r, std::uint8_t g,
              std::uint8_t b, int thickness = 2) {
  auto put = [&](locus::Index y, locus::Index x) {
    if (y < 0 || y >= img.height() || x < 0 || x >= img.width()) return;
    img.r(y, x) = r;
    img.g(y, x) = g;
    img.b(y, x) = b;
  };
  for (int t = 0; t < thickness; ++t) {
    for (locus::Index x = box.left; x <= box.right; ++x) {
      put(box.top + t, x);
      put(box.bottom - t, x);
    }
    for (locus::Index y = box.top; y <= box.bottom; ++y) {
      put(y, box.left + t);
      put(y, box.right - t);
    }
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw locus::IoError("cannot write " + path.string());
  out << text;
}

struct CommonFlags {
  locus::FrameParams frame;
  locus::FusionParams fusion;
  std::string methods = "Otsu-Kapur-Huang-Sahoo";
  std::string expansion = "none";
  std::string policy = "fraction:0.05";
  std::string out_dir = ".";

  void add_frame(CLI::App* cmd) {
    cmd->add_option("--black-lightness", frame.black_lightness,
                    "lightness below which a pixel is black")
        ->check(CLI::Range(0, 255));
    cmd->add_option("--black-row-fraction", frame.black_row_fraction,
                    "black-pixel fraction that marks a frame line");
    cmd->add_option("--max-frame-fraction", frame.max_frame_fraction,
                    "per-side cap on frame removal");
  }
  void add_fusion(CLI::App* cmd) {
    cmd->add_option("--methods", methods, "ensemble, e.g. Otsu-Kapur-Huang-Sahoo");
    cmd->add_option("--gamma", fusion.gamma, "weight decay rate");
    cmd->add_option("--beta-sp", fusion.beta_sp, "spatial weight for refinement");
    cmd->add_option("--k-max", fusion.k_max, "refinement sweeps");
  }
  void add_out(CLI::App* cmd) { cmd->add_option("--out-dir", out_dir, "output directory"); }

  locus::LocalizeConfig make_config() const {
    locus::LocalizeConfig cfg{frame, locus::EnsembleSpec::parse(methods), fusion,
                              locus::ExpansionSpec::parse(expansion), parse_policy(policy)};
    return cfg;
  }

  static locus::ComponentPolicy parse_policy(const std::string& text) {
    if (text == "all") return locus::ComponentPolicy::all();
    if (text == "largest") return locus::ComponentPolicy::largest();
    if (text.rfind("fraction:", 0) == 0) {
      locus::ComponentPolicy p;
      p.kind = locus::ComponentPolicy::Kind::ComponentsAboveFraction;
      try {
        p.fraction = std::stod(text.substr(9));
      } catch (const std::invalid_argument&) {
        throw locus::ParseError("bad policy fraction: " + text);
      }
      return p;
    }
    throw locus::ParseError("unknown policy: " + text);
  }
};

int default_jobs() {
  if (const char* env = std::getenv("LESION_LOCUS_JOBS")) {
    const int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return 1;
}

int run_deframe(const std::string& image_path, const CommonFlags& flags) {
  locus::RgbImage img;
  try {
    img = locus::read_image(image_path);
  } catch (const locus::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    auto [cropped, rect] = locus::remove_black_frame(img, flags.frame);
    fs::create_directories(flags.out_dir);
    locus::write_rgb_png((fs::path(flags.out_dir) / "deframed.png").string(), cropped);
    write_text(fs::path(flags.out_dir) / "crop.json", json(to_json(rect)).dump(2) + "\n");
    return 0;
  } catch (const locus::FrameConsumesImage& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  } catch (const locus::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

int run_threshold(const std::string& image_path, const CommonFlags& flags, bool deframe) {
  locus::EnsembleSpec spec = locus::EnsembleSpec::parse(flags.methods);
  try {
    locus::RgbImage img = locus::read_image(image_path);
    if (deframe) img = locus::remove_black_frame(img, flags.frame).first;
    const locus::Histogram h = locus::histogram(locus::extract_blue_channel(img));
    json out;
    for (const auto& r : locus::compute_ensemble(h, spec)) out[locus::method_name(r.method)] = r.t;
    std::cout << out.dump(2) << "\n";
    return 0;
  } catch (const locus::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const locus::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const locus::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
}

int run_fuse(const std::string& image_path, const CommonFlags& flags, bool deframe) {
  locus::EnsembleSpec spec = locus::EnsembleSpec::parse(flags.methods);
  try {
    locus::RgbImage img = locus::read_image(image_path);
    if (deframe) img = locus::remove_black_frame(img, flags.frame).first;
    const locus::FuseResult result =
        locus::fuse(locus::extract_blue_channel(img), spec, flags.fusion);
    fs::create_directories(flags.out_dir);
    locus::write_mask_png((fs::path(flags.out_dir) / "mask.png").string(), result.mask);
    json out;
    out["thresholds"] = thresholds_json(result.thresholds);
    out["t_bar"] = result.weights.t_bar;
    json beta = json::array();
    for (locus::Index i = 0; i < result.weights.beta.size(); ++i)
      beta.push_back(result.weights.beta(i));
    out["beta"] = beta;
    write_text(fs::path(flags.out_dir) / "fuse.json", out.dump(2) + "\n");
    return 0;
  } catch (const locus::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const locus::Error& e) {
    std::cerr << "error: " << e.stage() << ": " << e.what() << "\n";
    return kExitStage;
  }
}

int run_localize(const std::string& image_path, const CommonFlags& flags,
                 const std::string& ground_truth_path) {
  const locus::LocalizeConfig cfg = flags.make_config();
  locus::RgbImage img;
  try {
    img = locus::read_image(image_path);
  } catch (const locus::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    const locus::LocalizationResult result = locus::localize(img, cfg);

    json out;
    out["crop"] = to_json(result.crop);
    out["thresholds"] = thresholds_json(result.thresholds);
    out["initial_box"] = to_json(result.initial_box);
    out["expanded_box"] = to_json(result.expanded_box);

    locus::RgbImage overlay = img;
    draw_box(overlay, result.initial_box, 255, 0, 0);
    draw_box(overlay, result.expanded_box, 0, 255, 0);
    if (!ground_truth_path.empty()) {
      const locus::GroundTruth gt =
          locus::load_ground_truth(ground_truth_path, img.width(), img.height());
      draw_box(overlay, gt.manual_box, 0, 0, 255);
      out["ground_truth_box"] = to_json(gt.manual_box);
      out["epsilon_initial"] = locus::hance_error(result.initial_box, gt.manual_box);
      out["epsilon_expanded"] = locus::hance_error(result.expanded_box, gt.manual_box);
    }

    fs::create_directories(flags.out_dir);
    write_text(fs::path(flags.out_dir) / "result.json", out.dump(2) + "\n");
    locus::write_rgb_png((fs::path(flags.out_dir) / "overlay.png").string(), overlay);
    return 0;
  } catch (const locus::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const locus::Error& e) {
    std::cerr << "error at stage " << e.stage() << ": " << e.what() << "\n";
    return kExitStage;
  }
}

int run_sweep(const std::string& manifest_path, const CommonFlags& flags,
              const std::string& sizes_text, const std::string& expansions_text, bool individual,
              int jobs) {
  std::set<int> sizes;
  {
    std::istringstream ss(sizes_text);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) sizes.insert(std::stoi(tok));
  }
  std::vector<locus::ExpansionSpec> expansions;
  {
    std::istringstream ss(expansions_text);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) expansions.push_back(locus::ExpansionSpec::parse(tok));
  }
  const locus::ComponentPolicy policy = CommonFlags::parse_policy(flags.policy);

  try {
    const locus::Manifest manifest = locus::load_manifest(manifest_path);
    const std::vector<locus::DatasetImage> dataset = locus::load_dataset(manifest);

    std::vector<locus::EnsembleSpec> ensembles = locus::enumerate_ensembles(sizes);
    if (individual)
      for (const auto& single : locus::enumerate_ensembles({1})) ensembles.push_back(single);

    const locus::SweepResult result =
        locus::sweep(dataset, ensembles, expansions, flags.frame, flags.fusion, policy, jobs);

    fs::create_directories(flags.out_dir);
    std::ostringstream csv;
    csv << "ensemble,expansion,mu_ei,sigma_ei,mu_ex,sigma_ex,mu_s,sigma_s,failures\n";
    csv << std::fixed << std::setprecision(2);
    for (const auto& row : result.rows)
      csv << row.ensemble << "," << row.expansion << "," << row.mu_ei << "," << row.sigma_ei << ","
          << row.mu_ex << "," << row.sigma_ex << "," << row.mu_s << "," << row.sigma_s << ","
          << row.failures << "\n";
    write_text(fs::path(flags.out_dir) / "sweep.csv", csv.str());

    json jrows = json::array();
    for (const auto& row : result.rows)
      jrows.push_back({{"ensemble", row.ensemble},
                       {"expansion", row.expansion},
                       {"mu_ei", row.mu_ei},
                       {"sigma_ei", row.sigma_ei},
                       {"mu_ex", row.mu_ex},
                       {"sigma_ex", row.sigma_ex},
                       {"mu_s", row.mu_s},
                       {"sigma_s", row.sigma_s},
                       {"failures", row.failures}});
    json jrecords = json::array();
    for (const auto& rec : result.records)
      jrecords.push_back({{"image", rec.image_id},
                          {"ensemble", rec.ensemble},
                          {"expansion", rec.expansion},
                          {"epsilon_initial", rec.epsilon_initial},
                          {"epsilon_expanded", rec.epsilon_expanded},
                          {"size_reduction", rec.size_reduction},
                          {"area_automatic_box", rec.area_automatic_box},
                          {"area_manual_box", rec.area_manual_box},
                          {"area_manual_border", rec.area_manual_border},
                          {"area_fusion_output", rec.area_fusion_output}});
    json out = {{"rows", jrows}, {"images", jrecords}, {"failed", result.failed_images}};
    write_text(fs::path(flags.out_dir) / "sweep.json", out.dump(2) + "\n");
    return 0;
  } catch (const locus::ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const locus::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const locus::Error& e) {
    std::cerr << "error at stage " << e.stage() << ": " << e.what() << "\n";
    return kExitStage;
  }
}

int run_fit_area(const std::string& sweep_path, const CommonFlags& flags,
                 const std::string& ensemble, const std::string& expansion) {
  try {
    std::ifstream in(sweep_path);
    if (!in) throw locus::IoError("cannot open " + sweep_path);
    json data = json::parse(in, nullptr, false);
    if (data.is_discarded()) throw locus::ParseError("invalid JSON in " + sweep_path);

    std::vector<std::pair<double, double>> box_pairs, fusion_pairs;
    std::string want_ensemble = ensemble, want_expansion = expansion;
    if (!data.contains("images") || data["images"].empty())
      throw locus::ParseError("no per-image records in " + sweep_path);
    // Fall back to the first record's configuration when the requested one is
    // absent from the sweep.
    bool found = false;
    for (const auto& rec : data["images"])
      if (rec["ensemble"] == want_ensemble && rec["expansion"] == want_expansion) found = true;
    if (!found) {
      want_ensemble = data["images"][0]["ensemble"];
      want_expansion = data["images"][0]["expansion"];
    }
    for (const auto& rec : data["images"]) {
      if (rec["ensemble"] != want_ensemble || rec["expansion"] != want_expansion) continue;
      const double border = rec["area_manual_border"].get<double>();
      box_pairs.emplace_back(rec["area_automatic_box"].get<double>(), border);
      fusion_pairs.emplace_back(rec["area_fusion_output"].get<double>(), border);
    }

    const locus::LineModel box_model = locus::fit_line(box_pairs);
    const locus::LineModel fusion_model = locus::fit_line(fusion_pairs);
    const locus::PctErrorStats box_err = locus::area_estimate_errors(box_model, box_pairs);
    const locus::PctErrorStats fusion_err = locus::area_estimate_errors(fusion_model, fusion_pairs);

    json out = {{"ensemble", want_ensemble},
                {"expansion", want_expansion},
                {"box",
                 {{"slope", box_model.slope},
                  {"intercept", box_model.intercept},
                  {"mean_pct", box_err.mean_pct},
                  {"std_pct", box_err.std_pct}}},
                {"fusion",
                 {{"slope", fusion_model.slope},
                  {"intercept", fusion_model.intercept},
                  {"mean_pct", fusion_err.mean_pct},
                  {"std_pct", fusion_err.std_pct}}}};
    fs::create_directories(flags.out_dir);
    write_text(fs::path(flags.out_dir) / "fit.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
  } catch (const locus::DegenerateFit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  } catch (const locus::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate lesion localization in dermoscopy images"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string image_path, ground_truth_path, manifest_path, sweep_path;
  std::string sizes = "3,4,5,6";
  std::string expansions =
      "nonadaptive:2,nonadaptive:4,nonadaptive:6,nonadaptive:8,"
      "adaptive:4,adaptive:6,adaptive:8,adaptive:10";
  std::string fit_ensemble = "Otsu-Kapur-Huang-Sahoo";
  std::string fit_expansion = "nonadaptive:2";
  bool deframe_first = false;
  bool individual = false;
  int jobs = default_jobs();

  auto* deframe = app.add_subcommand("deframe", "remove the black digitization frame");
  deframe->add_option("image", image_path, "input PNG or PPM")->required();
  flags.add_frame(deframe);
  flags.add_out(deframe);

  auto* threshold = app.add_subcommand("threshold", "print per-method thresholds as JSON");
  threshold->add_option("image", image_path)->required();
  threshold->add_flag("--deframe", deframe_first, "remove the black frame first");
  flags.add_frame(threshold);
  flags.add_fusion(threshold);

  auto* fuse = app.add_subcommand("fuse", "write the fused ensemble mask");
  fuse->add_option("image", image_path)->required();
  fuse->add_flag("--deframe", deframe_first, "remove the black frame first");
  flags.add_frame(fuse);
  flags.add_fusion(fuse);
  flags.add_out(fuse);

  auto* localize = app.add_subcommand("localize", "run the full localization pipeline");
  localize->add_option("image", image_path)->required();
  localize->add_option("--expansion", flags.expansion, "none | nonadaptive:P | adaptive:G");
  localize->add_option("--policy", flags.policy, "all | largest | fraction:F");
  localize->add_option("--ground-truth", ground_truth_path, "mask PNG or points CSV");
  flags.add_frame(localize);
  flags.add_fusion(localize);
  flags.add_out(localize);

  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate ensembles and expansions over a dataset");
  sweep_cmd->add_option("--manifest", manifest_path, "CSV manifest")->required();
  sweep_cmd->add_option("--sizes", sizes, "ensemble sizes, e.g. 3,4,5,6");
  sweep_cmd->add_option("--expansions", expansions, "comma-separated expansion specs");
  sweep_cmd->add_flag("--individual", individual, "also evaluate single-method ensembles");
  sweep_cmd->add_option("--policy", flags.policy);
  sweep_cmd->add_option("--jobs", jobs, "worker threads");
  flags.add_frame(sweep_cmd);
  flags.add_fusion(sweep_cmd);
  flags.add_out(sweep_cmd);

  auto* fit = app.add_subcommand("fit-area", "fit lesion-area models from a sweep");
  fit->add_option("--sweep", sweep_path, "sweep.json from the sweep subcommand")->required();
  fit->add_option("--ensemble", fit_ensemble, "configuration to fit");
  fit->add_option("--expansion", fit_expansion);
  flags.add_out(fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (deframe->parsed()) return run_deframe(image_path, flags);
    if (threshold->parsed()) return run_threshold(image_path, flags, deframe_first);
    if (fuse->parsed()) return run_fuse(image_path, flags, deframe_first);
    if (localize->parsed()) return run_localize(image_path, flags, ground_truth_path);
    if (sweep_cmd->parsed())
      return run_sweep(manifest_path, flags, sizes, expansions, individual, jobs);
    if (fit->parsed()) return run_fit_area(sweep_path, flags, fit_ensemble, fit_expansion);
  } catch (const locus::ParseError& e) {
    // Bad flag values (methods, expansion, policy) are usage errors.
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
