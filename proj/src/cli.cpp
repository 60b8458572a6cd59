#include "chanvese/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "chanvese/image_io.hpp"
#include "chanvese/levelset.hpp"

namespace chanvese::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

InitSpec parse_init_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw UsageError("malformed --init '" + text + "': expected circle:cx,cy,r or mask:path");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  InitSpec spec;
  if (kind == "mask") {
    if (rest.empty()) throw UsageError("malformed --init '" + text + "': empty mask path");
    spec.kind = InitSpec::Kind::Mask;
    spec.mask_path = rest;
    return spec;
  }
  if (kind != "circle")
    throw UsageError("malformed --init '" + text + "': unknown kind '" + kind + "'");

  std::vector<double> values;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw UsageError("unparsable number '" + item + "' in --init '" + text + "'");
    values.push_back(v);
  }
  if (values.size() != 3)
    throw UsageError("malformed --init '" + text + "': circle needs exactly cx,cy,r");
  spec.kind = InitSpec::Kind::Circle;
  spec.cx = values[0];
  spec.cy = values[1];
  spec.r = values[2];
  return spec;
}

std::optional<CliConfig> parse_config(int argc, const char* const* argv, std::ostream& out) {
  CliConfig cfg;
  SolverParams& p = cfg.params;
  CLI::App app{"Region-based active-contour segmentation of grayscale images", "chanvese"};

  std::string input, out_dir = ".", ground_truth;
  std::vector<std::string> init;
  double smooth = 0.0;

  app.add_option("--input", input, "Input image (PGM P2/P5 or 8-bit PNG)")->required();
  app.add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  app.add_option("--lambda1", p.lambda1, "Inside fit weight")->capture_default_str();
  app.add_option("--lambda2", p.lambda2, "Outside fit weight")->capture_default_str();
  app.add_option("--mu", p.mu, "Contour length weight")->capture_default_str();
  app.add_option("--nu", p.nu, "Inside area weight")->capture_default_str();
  app.add_option("--tau", p.tau, "Time step")->capture_default_str();
  app.add_option("--dx", p.dx, "Grid spacing along x")->capture_default_str();
  app.add_option("--dy", p.dy, "Grid spacing along y")->capture_default_str();
  app.add_option("--max-iters", p.max_iters, "Iteration budget")->capture_default_str();
  app.add_option("--band", p.band_width, "Narrow-band half width for curvature")->capture_default_str();
  app.add_option("--reinit-every", p.reinit_every, "Reinitialize every N iterations (0 = never)")
      ->capture_default_str();
  app.add_option("--reinit-sweeps", p.reinit_sweeps, "Sweeps per reinitialization")
      ->capture_default_str();
  app.add_option("--tol", p.convergence_tol, "Allowed fraction of changed mask pixels")
      ->capture_default_str();
  app.add_option("--window", p.convergence_window, "Consecutive converged checks required")
      ->capture_default_str();
  app.add_option("--check-every", p.convergence_interval, "Iterations between convergence checks")
      ->capture_default_str();
  std::map<std::string, BoundaryMode> boundaries{{"replicate", BoundaryMode::Replicate},
                                                 {"periodic", BoundaryMode::Periodic}};
  app.add_option("--boundary", p.boundary, "Boundary handling")
      ->transform(CLI::CheckedTransformer(boundaries, CLI::ignore_case))
      ->default_str("replicate");
  app.add_option("--init", init, "circle:cx,cy,r | mask:path (default: centred circle)");
  app.add_option("--smooth", smooth, "Gaussian pre-smoothing sigma");
  app.add_option("--ground-truth", ground_truth, "Ground-truth mask for metrics.json");
  app.add_flag("--baseline", cfg.baseline, "Also report an Otsu threshold baseline");
  app.add_option("--overlay-every", cfg.overlay_every, "Write overlay_<iter>.png every N iterations");
  std::map<std::string, OtsuPolarity> polarities{{"inside", OtsuPolarity::BrightInside},
                                                 {"outside", OtsuPolarity::DarkInside}};
  app.add_option("--otsu-bright", cfg.otsu_polarity, "Whether bright Otsu pixels are inside")
      ->transform(CLI::CheckedTransformer(polarities, CLI::ignore_case))
      ->default_str("inside");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::RequiredError& e) {
    throw UsageError(std::string("missing required input: ") + e.what());
  } catch (const CLI::ExtrasError& e) {
    throw UsageError(std::string("unknown argument: ") + e.what());
  } catch (const CLI::ConversionError& e) {
    throw UsageError(std::string("unparsable value: ") + e.what());
  } catch (const CLI::ValidationError& e) {
    throw UsageError(std::string("invalid value: ") + e.what());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (init.size() > 1)
    throw UsageError("--init given " + std::to_string(init.size()) +
                     " times; initializations are mutually exclusive");
  if (!init.empty()) cfg.init = parse_init_spec(init.front());
  if (app.count("--smooth")) cfg.smooth_sigma = smooth;
  if (!ground_truth.empty()) cfg.ground_truth = fs::path(ground_truth);
  if (cfg.overlay_every < 0) throw UsageError("--overlay-every must be >= 0");
  cfg.input = input;
  cfg.out_dir = out_dir;
  return cfg;
}

std::string format_energy_csv(const EnergyTrace& trace) {
  std::string s = "iter,fit_inside,fit_outside,length,area,total\n";
  char buf[192];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const EnergyRecord& r = trace[i];
    std::snprintf(buf, sizeof buf, "%zu,%.6g,%.6g,%.6g,%.6g,%.6g\n", i + 1, r.fit_inside,
                  r.fit_outside, r.length_term, r.area_term, r.total);
    s += buf;
  }
  return s;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw IoError("error while writing '" + path.string() + "'");
}

json report_json(const MetricsReport& r, bool with_truth) {
  json j;
  j["inside_count"] = r.inside_count;
  j["outside_count"] = r.outside_count;
  if (with_truth) {
    j["dice"] = r.dice;
    j["iou"] = r.iou;
    j["pixel_accuracy"] = r.pixel_accuracy;
  }
  return j;
}

LevelSetField initial_level_set(const CliConfig& cfg, int width, int height) {
  switch (cfg.init.kind) {
    case InitSpec::Kind::Circle:
      return sdf_circle(width, height, cfg.init.cx, cfg.init.cy, cfg.init.r);
    case InitSpec::Kind::Mask: {
      const SegmentationMask m = load_mask(cfg.init.mask_path);
      if (m.width() != width || m.height() != height)
        throw DimensionError("initial mask '" + cfg.init.mask_path.string() +
                             "' does not match the input image size");
      return sdf_from_mask(m);
    }
    case InitSpec::Kind::DefaultCircle:
      break;
  }
  return sdf_circle(width, height, width / 2.0, height / 2.0, 0.1 * std::min(width, height));
}

}  // namespace

int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  const SolverParams params = cfl_check(cfg.params);

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.out_dir.string() + "': " + ec.message());

  GrayImage raw = load_image(cfg.input);
  if (cfg.smooth_sigma) raw = gaussian_smooth(raw, *cfg.smooth_sigma);
  const GrayImage img = normalize(raw);

  std::optional<SegmentationMask> truth;
  if (cfg.ground_truth) {
    truth = load_mask(*cfg.ground_truth);
    require_same_shape(*truth, img, "ground truth");
  }

  const LevelSetField phi0 = initial_level_set(cfg, img.width(), img.height());

  IterationObserver observer;
  if (cfg.overlay_every > 0) {
    save_overlay(img, extract_contour(phi0), cfg.out_dir / "overlay_0.png");
    observer = [&](int it, const LevelSetField& phi) {
      if (it % cfg.overlay_every == 0)
        save_overlay(img, extract_contour(phi), cfg.out_dir / ("overlay_" + std::to_string(it) + ".png"));
    };
  }

  const SegmentationResult result = chanvese::run(img, phi0, params, observer);

  save_mask(result.mask, cfg.out_dir / "mask.pgm");
  save_overlay(img, result.contours, cfg.out_dir / "overlay.png");
  write_text(cfg.out_dir / "energy.csv", format_energy_csv(result.trace));

  if (truth || cfg.baseline) {
    const SegmentationMask& reference = truth ? *truth : result.mask;
    json metrics;
    json cv = report_json(evaluate(result.mask, reference), truth.has_value());
    cv["iterations"] = result.iterations;
    cv["converged"] = result.converged;
    cv["u"] = result.u;
    cv["v"] = result.v;
    metrics["chan_vese"] = cv;
    if (cfg.baseline) {
      try {
        const SegmentationMask otsu = otsu_threshold(img, cfg.otsu_polarity);
        json o = report_json(evaluate(otsu, reference), truth.has_value());
        o["threshold"] = otsu_level(histogram256(img));
        metrics["otsu"] = o;
      } catch (const DegenerateInputError& e) {
        metrics["otsu"] = json{{"error", std::string("degenerate input: ") + e.what()}};
      }
    }
    write_text(cfg.out_dir / "metrics.json", metrics.dump(2) + "\n");
  }

  out << "iterations: " << result.iterations << (result.converged ? " (converged)" : "") << "\n"
      << "u = " << result.u << ", v = " << result.v << "\n"
      << "inside pixels: " << result.mask.count_inside() << "\n"
      << "outputs written to " << cfg.out_dir.string() << "\n";
  return kOk;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const std::optional<CliConfig> cfg = parse_config(argc, argv, out);
    if (!cfg) return kOk;
    return run(*cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for the list of options.\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kIo;
  } catch (const CflError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kParameter;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kParameter;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kParameter;
  } catch (const NumericalInstabilityError& e) {
    err << "numerical instability: " << e.what() << "\n";
    return kNumerical;
  } catch (const DegenerateInputError& e) {
    err << "degenerate input: " << e.what() << "\n";
    return kDegenerate;
  }
}

}  // namespace chanvese::cli
