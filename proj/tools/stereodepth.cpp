// stereodepth: depth maps from rectified stereo pairs, plus a synthetic
// evaluation mode.
//
//   stereodepth --left L.ppm --right R.ppm --out depth.pgm [--emit-disparity]
//   stereodepth eval --scene scene.txt

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "stereodepth/stereodepth.hpp"

namespace sd = stereodepth;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string left_path;
  std::string right_path;
  std::string out_path;
  double tolerance_fraction = 0.025;
  std::optional<int> max_disparity;  // unset: min(64, width - 1)
  bool emit_disparity = false;
  std::string scene_path;
  unsigned threads = 1;
};

struct UsageError {
  std::string message;
};

fs::path disparity_path_for(const fs::path& out) {
  fs::path p = out;
  p.replace_extension();
  p += ".disparity.pgm";
  return p;
}

sd::MatchConfig match_config(const RunConfig& cfg, int width) {
  if (!(cfg.tolerance_fraction >= 0.0 && cfg.tolerance_fraction <= 1.0)) {
    throw UsageError{"--tolerance: " + std::to_string(cfg.tolerance_fraction) + " is outside [0, 1]"};
  }
  if (cfg.max_disparity) {
    if (*cfg.max_disparity < 1) throw UsageError{"--max-disparity: must be at least 1"};
    if (*cfg.max_disparity >= width) {
      throw UsageError{"--max-disparity: " + std::to_string(*cfg.max_disparity) + " must be below image width " +
                       std::to_string(width)};
    }
    return sd::MatchConfig{cfg.tolerance_fraction, *cfg.max_disparity};
  }
  if (width < 2) throw UsageError{"image width " + std::to_string(width) + " leaves no disparity range"};
  return sd::MatchConfig::for_width(width, cfg.tolerance_fraction);
}

sd::RgbImage load(const std::string& flag, const std::string& path) {
  try {
    return sd::read_ppm(sd::read_file(path));
  } catch (const sd::Error& e) {
    throw UsageError{flag + " " + path + ": " + e.what()};
  }
}

int run_depth(const RunConfig& cfg) {
  sd::RgbImage left = load("--left", cfg.left_path);
  sd::RgbImage right = load("--right", cfg.right_path);
  if (!left.same_shape(right)) {
    throw UsageError{"dimension mismatch: --left " + cfg.left_path + " is " + std::to_string(left.width()) + "x" +
                     std::to_string(left.height()) + ", --right " + cfg.right_path + " is " +
                     std::to_string(right.width()) + "x" + std::to_string(right.height())};
  }
  const sd::StereoPair pair = sd::make_pair(std::move(left), std::move(right));
  const sd::MatchConfig match = match_config(cfg, pair.width());

  const sd::DisparityMap disparity = sd::match_pair(pair, match, cfg.threads);
  const sd::Bytes depth_bytes = sd::write_pgm(sd::render(sd::disparity_to_depth(disparity)));
  std::optional<sd::Bytes> disparity_bytes;
  if (cfg.emit_disparity) disparity_bytes = sd::write_pgm(sd::disparity_to_gray(disparity));

  sd::write_file_atomic(cfg.out_path, depth_bytes);
  if (disparity_bytes) sd::write_file_atomic(disparity_path_for(cfg.out_path), *disparity_bytes);
  return 0;
}

int run_eval(const RunConfig& cfg) {
  sd::SyntheticScene scene;
  try {
    const sd::Bytes text = sd::read_file(cfg.scene_path);
    scene = sd::parse_scene(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()));
  } catch (const sd::Error& e) {
    throw UsageError{"--scene " + cfg.scene_path + ": " + e.what()};
  }
  std::optional<sd::SyntheticPair> generated;
  try {
    generated = sd::generate_pair(scene);
  } catch (const sd::Error& e) {
    throw UsageError{"--scene " + cfg.scene_path + ": " + e.what()};
  }
  const sd::MatchConfig match = match_config(cfg, scene.width);
  const sd::DisparityMap result = sd::match_pair(generated->pair, match, cfg.threads);
  const sd::EvalReport report = sd::evaluate(result, generated->truth);

  std::printf("density=%.6f\n", report.density);
  std::printf("bad_pixel_rate=%.6f\n", report.bad_pixel_rate);
  std::printf("mean_abs_disparity_error=%.6f\n", report.mean_abs_disparity_error);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth maps from rectified stereo pairs by pixel-to-pixel SAD matching"};
  app.require_subcommand(0, 1);

  RunConfig cfg;
  int max_disparity = 0;
  app.add_option("--left", cfg.left_path, "Left image (binary PPM, maxval 255)");
  app.add_option("--right", cfg.right_path, "Right image (binary PPM, maxval 255)");
  app.add_option("--out", cfg.out_path, "Output depth map (binary PGM)");
  app.add_option("--tolerance", cfg.tolerance_fraction, "Match tolerance as a fraction of the maximum SAD (765)")
      ->capture_default_str();
  auto* max_disp_opt =
      app.add_option("--max-disparity", max_disparity, "Disparity search range in pixels (default min(64, width - 1))");
  app.add_flag("--emit-disparity", cfg.emit_disparity, "Also write <out>.disparity.pgm (255 = unmatched)");
  app.add_option("--threads", cfg.threads, "Worker threads for row matching (0 = all cores)")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Match a synthetic scene and report accuracy against ground truth");
  eval->add_option("--scene", cfg.scene_path, "Scene description file")->required();
  eval->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "stereodepth: " << e.what() << "\n";
    return 1;
  }
  if (*max_disp_opt) cfg.max_disparity = max_disparity;
  if (cfg.threads == 0) cfg.threads = std::max(1u, std::thread::hardware_concurrency());

  try {
    if (*eval) return run_eval(cfg);
    for (const auto& [flag, value] : {std::pair{"--left", &cfg.left_path}, std::pair{"--right", &cfg.right_path},
                                      std::pair{"--out", &cfg.out_path}}) {
      if (value->empty()) throw UsageError{std::string(flag) + " is required"};
    }
    return run_depth(cfg);
  } catch (const UsageError& e) {
    std::cerr << "stereodepth: " << e.message << "\n";
  } catch (const std::exception& e) {
    std::cerr << "stereodepth: " << e.what() << "\n";
  }
  return 1;
}
