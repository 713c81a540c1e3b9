#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 I/O error.

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "statedge/statedge.hpp"

namespace statedge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;

namespace detail {

inline std::optional<ImageFileFormat> parse_format(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "pgm") return ImageFileFormat::PgmBinary;
  if (name == "pgm-ascii") return ImageFileFormat::PgmAscii;
  if (name == "png") return ImageFileFormat::Png;
  throw std::invalid_argument("unknown format '" + name + "'");
}

inline std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

struct DetectorFlags {
  std::string detector{"stddev"};
  double tau{kDefaultTau};
  int median{3};
  bool no_median{false};
  std::optional<double> sobel_threshold;
  CannyParams canny{};

  void add_to(CLI::App& cmd) {
    cmd.add_option("--tau", tau, "stddev detector threshold (useful band 4-9)")
        ->capture_default_str();
    cmd.add_option("--median", median, "median pre-filter kernel size (odd, >= 3)")
        ->capture_default_str();
    cmd.add_flag("--no-median", no_median, "skip the median pre-filter");
    cmd.add_option("--sobel-threshold", sobel_threshold, "Sobel magnitude threshold");
    cmd.add_option("--sigma", canny.sigma, "Canny Gaussian sigma")->capture_default_str();
    cmd.add_option("--low", canny.low, "Canny low threshold")->capture_default_str();
    cmd.add_option("--high", canny.high, "Canny high threshold")->capture_default_str();
  }

  DetectorConfig config(DetectorKind kind) const {
    DetectorConfig cfg;
    cfg.kind = kind;
    cfg.tau = tau;
    cfg.pre_median = !no_median;
    cfg.median_k = median;
    cfg.sobel_threshold = sobel_threshold;
    cfg.canny = canny;
    return cfg;
  }
};

}  // namespace detail

/// Runs the tool on argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Window standard deviation edge detection with Sobel/Canny baselines", "statedge"};
  app.require_subcommand(1);

  std::string in_path, out_path, format_name;

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "run one detector and write the edge map");
  detail::DetectorFlags detect_flags;
  detect_cmd->add_option("--in", in_path, "input image (PGM or PNG)")->required();
  detect_cmd->add_option("--out", out_path, "output edge map")->required();
  detect_cmd->add_option("--detector", detect_flags.detector, "stddev | sobel | canny")
      ->check(CLI::IsMember({"stddev", "sobel", "canny"}))
      ->capture_default_str();
  detect_cmd->add_option("--format", format_name, "output format: pgm | pgm-ascii | png");
  detect_flags.add_to(*detect_cmd);

  // noise
  auto* noise_cmd = app.add_subcommand("noise", "add salt-and-pepper noise");
  NoiseSpec noise_spec;
  noise_cmd->add_option("--in", in_path, "input image")->required();
  noise_cmd->add_option("--out", out_path, "output image")->required();
  noise_cmd->add_option("--density", noise_spec.density, "fraction of corrupted pixels")
      ->capture_default_str();
  noise_cmd->add_option("--salt-ratio", noise_spec.salt_ratio, "share of corrupted pixels set to 255")
      ->capture_default_str();
  noise_cmd->add_option("--seed", noise_spec.seed, "mt19937_64 seed")->capture_default_str();
  noise_cmd->add_option("--format", format_name, "output format: pgm | pgm-ascii | png");

  // denoise
  auto* denoise_cmd = app.add_subcommand("denoise", "median filter");
  int kernel = 3;
  denoise_cmd->add_option("--in", in_path, "input image")->required();
  denoise_cmd->add_option("--out", out_path, "output image")->required();
  denoise_cmd->add_option("--k", kernel, "odd kernel size >= 3")->capture_default_str();
  denoise_cmd->add_option("--format", format_name, "output format: pgm | pgm-ascii | png");

  // compare
  auto* compare_cmd =
      app.add_subcommand("compare", "run all detectors, write a montage and optional scores");
  detail::DetectorFlags compare_flags;
  compare_flags.sobel_threshold = 100.0;
  std::string truth_path, csv_path;
  std::size_t radius = 1;
  compare_cmd->add_option("--in", in_path, "input image")->required();
  compare_cmd->add_option("--out", out_path, "montage: original | sobel | canny | stddev")
      ->required();
  compare_cmd->add_option("--truth", truth_path, "ground-truth edge mask (nonzero = edge)");
  compare_cmd->add_option("--csv", csv_path, "write scores here instead of stdout");
  compare_cmd->add_option("--radius", radius, "match tolerance (Chebyshev)")->capture_default_str();
  compare_cmd->add_option("--format", format_name, "output format: pgm | pgm-ascii | png");
  compare_flags.add_to(*compare_cmd);

  // table1
  auto* table_cmd = app.add_subcommand("table1", "recompute the reference window table");
  double table_tau = kDefaultTau;
  table_cmd->add_option("--tau", table_tau, "edge threshold")->capture_default_str();

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic scene and its ground truth");
  std::string kind_name = "vstep", truth_out;
  std::size_t width = 128, height = 128;
  SyntheticParams synth_params;
  int low = 0, high = 255;
  synth_cmd->add_option("--kind", kind_name,
                        "constant | vstep | hstep | diagonal | checkerboard | glyph | composite")
      ->capture_default_str();
  synth_cmd->add_option("--width", width)->capture_default_str();
  synth_cmd->add_option("--height", height)->capture_default_str();
  synth_cmd->add_option("--low", low)->check(CLI::Range(0, 255))->capture_default_str();
  synth_cmd->add_option("--high", high)->check(CLI::Range(0, 255))->capture_default_str();
  synth_cmd->add_option("--boundary", synth_params.boundary, "step position (0 = middle)");
  synth_cmd->add_option("--cell", synth_params.cell, "checkerboard cell size")->capture_default_str();
  synth_cmd->add_option("--scale", synth_params.glyph_scale, "glyph scale")->capture_default_str();
  synth_cmd->add_option("--text", synth_params.text, "glyph text")->capture_default_str();
  synth_cmd->add_option("--out", out_path, "image output")->required();
  synth_cmd->add_option("--truth-out", truth_out, "ground-truth mask output");
  synth_cmd->add_option("--format", format_name, "output format: pgm | pgm-ascii | png");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    const auto out_format = detail::parse_format(format_name);

    if (detect_cmd->parsed()) {
      const auto kind = *parse_detector_kind(detect_flags.detector);
      if (kind == DetectorKind::Sobel && !detect_flags.sobel_threshold) {
        throw std::invalid_argument("--sobel-threshold is required for the sobel detector");
      }
      const auto cfg = detect_flags.config(kind);
      validate(cfg);
      const auto img = load_image_file(in_path);
      const auto edges = detect(img, cfg);
      save_image_file(edge_map_to_image(edges), out_path, out_format);
      out << "detector: " << to_string(cfg.kind) << "\n"
          << "parameters: " << describe_parameters(cfg) << "\n"
          << "size: " << img.width() << "x" << img.height() << "\n"
          << "edges: " << edges.count() << "\n"
          << "edge fraction: " << detail::fixed4(static_cast<double>(edges.count()) / edges.size())
          << "\n";
      return kExitOk;
    }

    if (noise_cmd->parsed()) {
      validate(noise_spec);
      const auto img = load_image_file(in_path);
      const auto noisy = add_salt_pepper(img, noise_spec);
      save_image_file(noisy, out_path, out_format);
      std::size_t changed = 0;
      for (std::size_t i = 0; i < img.size(); ++i) changed += img.pixels()[i] != noisy.pixels()[i];
      out << "density: " << detail::fixed4(noise_spec.density) << "\n"
          << "salt ratio: " << detail::fixed4(noise_spec.salt_ratio) << "\n"
          << "seed: " << noise_spec.seed << "\n"
          << "changed pixels: " << changed << "\n";
      return kExitOk;
    }

    if (denoise_cmd->parsed()) {
      validate_median_kernel(kernel);
      const auto img = load_image_file(in_path);
      const auto filtered = median_filter(img, kernel);
      save_image_file(filtered, out_path, out_format);
      std::size_t changed = 0;
      for (std::size_t i = 0; i < img.size(); ++i) {
        changed += img.pixels()[i] != filtered.pixels()[i];
      }
      out << "k: " << kernel << "\n"
          << "changed pixels: " << changed << "\n";
      return kExitOk;
    }

    if (compare_cmd->parsed()) {
      const auto stddev_cfg = compare_flags.config(DetectorKind::StdDev);
      const auto sobel_cfg = compare_flags.config(DetectorKind::Sobel);
      const auto canny_cfg = compare_flags.config(DetectorKind::Canny);
      validate(stddev_cfg);
      validate(sobel_cfg);
      validate(canny_cfg);

      const auto img = load_image_file(in_path);
      std::optional<EdgeMap> truth;
      if (!truth_path.empty()) {
        truth = image_to_edge_map(load_image_file(truth_path));
        if (truth->width() != img.width() || truth->height() != img.height()) {
          throw std::invalid_argument("ground truth dimensions do not match the input image");
        }
      }

      const DetectorConfig configs[] = {sobel_cfg, canny_cfg, stddev_cfg};
      std::vector<GrayImage> panels{img};
      std::vector<EdgeMap> maps;
      for (const auto& cfg : configs) {
        maps.push_back(detect(img, cfg));
        panels.push_back(edge_map_to_image(maps.back()));
      }
      const std::vector<std::string> labels{"original", "sobel", "canny", "stddev"};
      const auto m = montage(panels, labels);
      save_image_file(m.image, out_path, out_format);

      out << "montage: " << m.image.width() << "x" << m.image.height() << "\n";
      for (std::size_t i = 0; i < m.panels.size(); ++i) {
        const auto& p = m.panels[i];
        out << "  " << p.label << ": columns " << p.first_col << "-" << p.first_col + p.width - 1;
        if (i > 0) out << ", " << maps[i - 1].count() << " edges";
        out << "\n";
      }

      if (truth) {
        std::ostringstream csv;
        csv << kCsvHeader << "\n";
        for (std::size_t i = 0; i < maps.size(); ++i) {
          csv << to_csv_row(score(maps[i], *truth, radius, configs[i])) << "\n";
        }
        if (csv_path.empty()) {
          out << csv.str();
        } else {
          const auto text = csv.str();
          write_file(csv_path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
        }
      }
      return kExitOk;
    }

    if (table_cmd->parsed()) {
      validate_tau(table_tau);
      const auto rows = table1_report(table_tau);
      std::size_t passed = 0;
      std::size_t edges = 0;
      out << "upper_left  origin  stddev    expected  edge(tau=" << detail::fixed4(table_tau)
          << ")  status\n";
      for (const auto& r : rows) {
        const bool ok = r.matches();
        passed += ok;
        edges += r.is_edge;
        std::ostringstream origin;
        origin << "(" << r.row << "," << r.col << ")";
        out << std::setw(10) << static_cast<int>(r.upper_left) << "  " << std::left << std::setw(6)
            << origin.str() << std::right << "  " << std::setw(8) << detail::fixed4(r.stddev)
            << "  " << std::setw(9) << detail::fixed4(r.expected) << "  " << std::setw(15)
            << (r.is_edge ? "yes" : "no") << "  " << (ok ? "PASS" : "FAIL") << "\n";
      }
      out << passed << "/" << rows.size() << " PASS, " << edges << " edge rows\n";
      return passed == rows.size() ? kExitOk : kExitUsage;
    }

    if (synth_cmd->parsed()) {
      synth_params.low = static_cast<std::uint8_t>(low);
      synth_params.high = static_cast<std::uint8_t>(high);
      const auto scene = make_synthetic(kind_name, width, height, synth_params);
      save_image_file(scene.image, out_path, out_format);
      if (!truth_out.empty()) save_image_file(edge_map_to_image(scene.truth), truth_out, out_format);
      out << "kind: " << kind_name << "\n"
          << "size: " << width << "x" << height << "\n"
          << "truth edges: " << scene.truth.count() << "\n";
      return kExitOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace statedge::cli
