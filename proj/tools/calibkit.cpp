#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "calibkit/commands.hpp"
#include "calibkit/form_io.hpp"
#include "calibkit/grassmann.hpp"

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw calib::cli::UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw calib::cli::UsageError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw calib::cli::UsageError("cannot write " + path);
  out << text;
}

std::string csv_path(const std::string& out) {
  const auto dot = out.find_last_of('.');
  const auto slash = out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot) + ".csv";
  return out + ".csv";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace calib;
  CLI::App app{"calibrated geometry toolkit"};
  app.require_subcommand(1);

  std::optional<std::string> family, algebra, form, frame_path, config_path, out_path;
  std::optional<int> m, n, trials, threads, max_iters;
  std::optional<double> phase, tol, cluster_tol;
  std::optional<std::uint64_t> seed;
  bool json = false, basis = false;

  app.add_option("--family", family, "associative|coassociative|cayley|special_lagrangian|cartan|spinor|custom");
  app.add_option("--m", m, "complex dimension (special_lagrangian)");
  app.add_option("--phase", phase, "phase angle (special_lagrangian)");
  app.add_option("--algebra", algebra, "su2|su3|su4 (cartan)");
  app.add_option("--n", n, "ambient dimension for --form");
  app.add_option("--form", form, "form literal such as \"e123 + e145\", or AltForm JSON");
  app.add_option("--frame", frame_path, "JSON file with the plane frame as an array of columns");
  app.add_option("--seed", seed, "random plane seed (check) or master seed (search, comass, eds, sff)");
  app.add_option("--trials", trials, "number of starts");
  app.add_option("--threads", threads, "worker threads (results do not depend on it)");
  app.add_option("--max-iters", max_iters, "iteration cap per start");
  app.add_option("--tol", tol, "criticality tolerance");
  app.add_option("--cluster-tol", cluster_tol, "clustering tolerance for critical values");
  app.add_flag("--json", json, "machine-readable output");
  app.add_flag("--basis", basis, "module: include the orthonormal basis");
  app.add_option("--config", config_path, "JSON file with defaults");
  app.add_option("--out", out_path, "also write the JSON report here (search: CSV next to it)");
  app.fallthrough();

  for (const char* name : {"module", "check", "search", "comass", "eds", "sff", "spinor"}) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kUsage;
  }

  try {
    cli::RunConfig cfg;
    cfg.command = app.get_subcommands().front()->get_name();
    if (config_path) cfg = cli::config_from_json(read_json_file(*config_path), cfg);
    if (family) cfg.calibration.family = family_from_name(*family);
    if (m) cfg.calibration.m = *m;
    if (phase) cfg.calibration.phase = *phase;
    if (algebra) cfg.calibration.algebra = *algebra;
    if (form) {
      if (!family) cfg.calibration.family = Family::custom;
      cfg.calibration.form = form->starts_with("{") ? form_from_json(nlohmann::json::parse(*form)) : parse_form_literal(*form, n.value_or(0));
    }
    if (frame_path) cfg.frame = frame_from_json(read_json_file(*frame_path));
    if (seed) cfg.seed = *seed;
    if (trials) cfg.params.trials = *trials;
    if (threads) cfg.params.threads = *threads;
    if (max_iters) cfg.params.max_iters = *max_iters;
    if (tol) cfg.tol = *tol;
    if (cluster_tol) cfg.cluster_tol = *cluster_tol;
    if (basis) cfg.show_basis = true;

    const cli::CommandResult res = cli::run(cfg);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    const std::string body = res.report.dump(2) + "\n";
    std::cout << (json ? body : cli::format_text(res.report));
    if (out_path) {
      write_file(*out_path, body);
      if (!res.csv.empty()) write_file(csv_path(*out_path), res.csv);
    }
    if (res.exit_code == cli::kNumerical && res.report.contains("error")) std::cerr << "error: " << res.report["error"].get<std::string>() << "\n";
    return res.exit_code;
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kNumerical;
  }
}
