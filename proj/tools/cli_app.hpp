#ifndef ERT_TOOLS_CLI_APP_HPP
#define ERT_TOOLS_CLI_APP_HPP

// Subcommand driver for the `ert` binary. Exit codes: 0 success, 1 invalid
// configuration or input files, 2 failures during computation. Errors go to
// the error stream as "ERROR <exit code>: <tag>: <message>".
//
// Option precedence: command-line flags, then a --config file (TOML/INI, keys
// named like the long flags), then built-in defaults.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ert/ert.hpp"

namespace ert::cli {

struct RunConfig {
  double alpha = 0.5;
  int n_s = 180;
  int n_L = 200;
  int image_n = 128;
  int verify_grid = 512;
  std::string phantom_path;
  std::string canonical;
  std::string sino_path;
  std::string out_dir = "out";
  std::string mode = "normal";
  int panels = 16;
  int nodes = 8;
  double eps_L = 0.02;
  bool supersample = false;
  bool binary = false;
  int workers = 1;
};

namespace detail {

namespace fs = std::filesystem;

inline void require_count(const char* name, int v, int minimum) {
  if (v < minimum) {
    throw ConfigError(std::string(name) + " must be >= " + std::to_string(minimum) + ", got " + std::to_string(v));
  }
}

inline void prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory '" + dir + "'");
  const fs::path probe = fs::path(dir) / ".ert_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory '" + dir + "' is not writable");
  }
  fs::remove(probe, ec);
}

inline void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(what) + " '" + path + "' does not exist");
}

inline std::string out_path(const RunConfig& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

inline void validate_common(const RunConfig& c) {
  ScanGeometry{c.alpha};
  require_count("--workers", c.workers, 1);
  require_count("--panels", c.panels, 1);
  require_count("--nodes", c.nodes, 1);
  if (!(c.eps_L > 0.0 && c.eps_L < 0.5)) throw ConfigError("--eps-l must lie in (0, 0.5)");
}

inline Phantom load_phantom(const RunConfig& c, const ScanGeometry& g) {
  if (!c.phantom_path.empty() && !c.canonical.empty()) {
    throw ConfigError("give either --phantom or --canonical, not both");
  }
  if (!c.phantom_path.empty()) return read_phantom(c.phantom_path);
  if (!c.canonical.empty()) return phantoms::by_name(c.canonical, g);
  throw ConfigError("a phantom is required: --phantom <file.json> or --canonical <name>");
}

inline void check_phantom_source(const RunConfig& c) {
  if (!c.phantom_path.empty()) require_file(c.phantom_path, "phantom file");
}

inline SinogramSpec sinogram_spec(const RunConfig& c) {
  SinogramSpec s;
  s.n_s = c.n_s;
  s.n_L = c.n_L;
  s.eps_fraction = c.eps_L;
  s.quadrature = {c.panels, c.nodes};
  s.workers = c.workers;
  return s;
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline void write_image(const ImageGrid& img, const RunConfig& c, const std::string& stem, nlohmann::json meta) {
  write_csv(img, out_path(c, stem + ".csv"));
  const ValueRange r = write_pgm(img, out_path(c, stem));
  meta["image"] = {{"n", img.n()}, {"extent", img.extent()}, {"min", r.min}, {"max", r.max}};
  write_json(meta, out_path(c, stem + ".meta.json"));
}

inline nlohmann::json sinogram_meta(const Sinogram& s) {
  return {{"alpha", s.geometry().alpha()}, {"n_s", s.n_s()},     {"n_L", s.n_L()},
          {"L_min", s.L_min()},            {"L_max", s.L_max()}};
}

}  // namespace detail

inline void cmd_phantom(const RunConfig& c, std::ostream& out) {
  detail::validate_common(c);
  detail::require_count("--n", c.image_n, 4);
  detail::check_phantom_source(c);
  detail::prepare_out_dir(c.out_dir);
  const ScanGeometry g(c.alpha);
  const Phantom p = detail::load_phantom(c, g);
  RasterSpec spec = raster_spec(g, c.image_n, c.supersample);
  spec.workers = c.workers;
  const ImageGrid img = rasterize(p, spec);
  write_phantom(p, detail::out_path(c, "phantom.json"));
  detail::write_image(img, c, "phantom", {{"alpha", c.alpha}, {"supersample", c.supersample}});
  out << "wrote " << detail::out_path(c, "phantom.csv") << '\n';
}

inline Sinogram run_forward(const RunConfig& c) {
  const ScanGeometry g(c.alpha);
  const Phantom p = detail::load_phantom(c, g);
  return forward(p, g, detail::sinogram_spec(c));
}

inline void cmd_forward(const RunConfig& c, std::ostream& out) {
  detail::validate_common(c);
  detail::require_count("--ns", c.n_s, 4);
  detail::require_count("--nl", c.n_L, 4);
  detail::check_phantom_source(c);
  detail::prepare_out_dir(c.out_dir);
  const Sinogram sino = run_forward(c);
  const std::string file = detail::out_path(c, c.binary ? "run.sino.bin" : "run.sino.txt");
  write_sinogram(sino, file);
  nlohmann::json meta = detail::sinogram_meta(sino);
  meta["eps_fraction"] = c.eps_L;
  meta["quadrature"] = {{"panels", c.panels}, {"nodes", c.nodes}};
  meta["phantom"] = c.phantom_path.empty() ? "canonical:" + c.canonical : c.phantom_path;
  meta["sinogram"] = file;
  detail::write_json(meta, detail::out_path(c, "run.meta.json"));
  out << "wrote " << file << '\n';
}

inline void cmd_adjoint(const RunConfig& c, std::ostream& out) {
  detail::require_count("--workers", c.workers, 1);
  detail::require_count("--n", c.image_n, 4);
  if (c.sino_path.empty()) throw ConfigError("--sino is required");
  sinogram_format(c.sino_path);
  detail::require_file(c.sino_path, "sinogram file");
  detail::prepare_out_dir(c.out_dir);
  const Sinogram sino = read_sinogram(c.sino_path);
  const ImageGrid img = adjoint(sino, ImageSpec{c.image_n, c.workers});
  nlohmann::json meta = detail::sinogram_meta(sino);
  meta["sinogram"] = c.sino_path;
  detail::write_image(img, c, "adjoint", meta);
  out << "wrote " << detail::out_path(c, "adjoint.csv") << '\n';
}

inline void cmd_recon(const RunConfig& c, std::ostream& out) {
  if (c.mode != "normal" && c.mode != "lambda") throw ConfigError("--mode must be 'normal' or 'lambda'");
  detail::require_count("--n", c.image_n, 4);
  const bool from_file = !c.sino_path.empty();
  if (from_file) {
    detail::require_count("--workers", c.workers, 1);
    sinogram_format(c.sino_path);
    detail::require_file(c.sino_path, "sinogram file");
  } else {
    detail::validate_common(c);
    detail::require_count("--ns", c.n_s, 4);
    detail::require_count("--nl", c.n_L, 4);
    detail::check_phantom_source(c);
  }
  detail::prepare_out_dir(c.out_dir);
  const Sinogram sino = from_file ? read_sinogram(c.sino_path) : run_forward(c);
  const ImageSpec spec{c.image_n, c.workers};
  const ImageGrid img = c.mode == "lambda" ? lambda_reconstruct(sino, spec) : adjoint(sino, spec);
  nlohmann::json meta = detail::sinogram_meta(sino);
  meta["mode"] = c.mode;
  const std::string stem = "recon_" + c.mode;
  detail::write_image(img, c, stem, meta);
  out << "wrote " << detail::out_path(c, stem + ".csv") << '\n';
}

inline VerificationReport cmd_verify(const RunConfig& c, std::ostream& out) {
  ScanGeometry{c.alpha};
  detail::require_count("--grid", c.verify_grid, 4);
  detail::require_count("--workers", c.workers, 1);
  detail::prepare_out_dir(c.out_dir);
  BolkerGrid grid;
  grid.n_L = c.verify_grid;
  grid.n_phi = c.verify_grid;
  grid.workers = c.workers;
  const VerificationReport r = run_verification(c.alpha, grid);
  detail::write_json(to_json(r), detail::out_path(c, "certificate.json"));
  {
    std::ofstream txt(detail::out_path(c, "certificate.txt"));
    if (!txt) throw ConfigError("cannot write certificate.txt");
    txt << to_text(r);
  }
  out << to_text(r);
  return r;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elliptical Radon transform: forward model, backprojection, local reconstruction and "
               "microlocal certificates"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);
  RunConfig c;

  auto add_alpha = [&](CLI::App* s) {
    s->add_option("--alpha", c.alpha, "Half angular separation of emitter and receiver (radians)")
        ->capture_default_str();
  };
  auto add_out = [&](CLI::App* s) {
    s->add_option("-o,--out", c.out_dir, "Output directory")->capture_default_str();
    s->add_option("--workers", c.workers, "Maximum worker threads")->capture_default_str();
  };
  auto add_phantom = [&](CLI::App* s) {
    s->add_option("--phantom", c.phantom_path, "Phantom description (JSON)");
    s->add_option("--canonical", c.canonical,
                  "Built-in phantom: centered_disk, offset_disk, two_disk, gaussian");
  };
  auto add_sino_grid = [&](CLI::App* s) {
    s->add_option("--ns", c.n_s, "Number of s samples")->capture_default_str();
    s->add_option("--nl", c.n_L, "Number of L samples")->capture_default_str();
    s->add_option("--eps-l", c.eps_L, "L-grid end margin as a fraction of the admissible range")
        ->capture_default_str();
    s->add_option("--panels", c.panels, "Gauss-Legendre panels per phi window")->capture_default_str();
    s->add_option("--nodes", c.nodes, "Gauss-Legendre nodes per panel")->capture_default_str();
  };
  auto add_image = [&](CLI::App* s) {
    s->add_option("--n", c.image_n, "Image pixels per side")->capture_default_str();
  };

  auto* phantom = app.add_subcommand("phantom", "Rasterize a phantom");
  add_alpha(phantom);
  add_phantom(phantom);
  add_image(phantom);
  phantom->add_flag("--supersample", c.supersample, "4x4 supersampling on boundary pixels");
  add_out(phantom);

  auto* fwd = app.add_subcommand("forward", "Compute the sinogram of a phantom");
  add_alpha(fwd);
  add_phantom(fwd);
  add_sino_grid(fwd);
  fwd->add_flag("--binary", c.binary, "Write run.sino.bin instead of run.sino.txt");
  add_out(fwd);

  auto* adj = app.add_subcommand("adjoint", "Backproject a sinogram file");
  adj->add_option("--sino", c.sino_path, "Input sinogram (.sino.txt or .sino.bin)");
  add_image(adj);
  add_out(adj);

  auto* recon = app.add_subcommand("recon", "Normal-operator or lambda-type reconstruction");
  recon->add_option("--mode", c.mode, "normal | lambda")->capture_default_str();
  recon->add_option("--sino", c.sino_path, "Input sinogram; otherwise computed from the phantom");
  add_alpha(recon);
  add_phantom(recon);
  add_sino_grid(recon);
  add_image(recon);
  add_out(recon);

  auto* verify = app.add_subcommand("verify", "Run the microlocal certificate suite");
  add_alpha(verify);
  verify->add_option("--grid", c.verify_grid, "Grid points per axis")->capture_default_str();
  add_out(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ERROR 1: config: " << e.what() << '\n';
    return 1;
  }

  try {
    if (phantom->parsed()) cmd_phantom(c, out);
    if (fwd->parsed()) cmd_forward(c, out);
    if (adj->parsed()) cmd_adjoint(c, out);
    if (recon->parsed()) cmd_recon(c, out);
    if (verify->parsed()) cmd_verify(c, out);
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::config ? 1 : 2;
    err << "ERROR " << code << ": " << e.code() << ": " << e.what() << '\n';
    return code;
  } catch (const std::exception& e) {
    err << "ERROR 2: internal: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace ert::cli

#endif  // ERT_TOOLS_CLI_APP_HPP
