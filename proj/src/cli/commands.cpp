#include "calibkit/commands.hpp"

#include <cmath>
#include <sstream>

#include "calibkit/critical.hpp"
#include "calibkit/eds.hpp"
#include "calibkit/form_io.hpp"

namespace calib::cli {

namespace {

AltForm calibration_of(const RunConfig& cfg) {
  try {
    return build_calibration(cfg.calibration);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

OrientedPlane literal_plane(const RunConfig& cfg, const AltForm& phi, CommandResult& res) {
  const Eigen::MatrixXd& f = *cfg.frame;
  if (f.rows() != phi.dim() || f.cols() != phi.degree()) {
    throw UsageError("frame is " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) + ", form needs " + std::to_string(phi.dim()) +
                     "x" + std::to_string(phi.degree()));
  }
  const double defect = orthonormality_defect(f);
  if (defect > 1e-6) res.warnings.push_back("frame not orthonormal (defect " + std::to_string(defect) + "); re-orthonormalized");
  if (defect > 1e-12) return OrientedPlane::orthonormalized(f);
  return OrientedPlane(f);
}

SearchParams search_params(const RunConfig& cfg) {
  SearchParams p = cfg.params;
  if (cfg.seed) p.master_seed = *cfg.seed;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

// Literal frame, else search for a plane with phi > 0.
std::optional<OrientedPlane> plane_or_search(const RunConfig& cfg, const AltForm& phi, CommandResult& res) {
  if (cfg.frame) return literal_plane(cfg, phi, res);
  return find_calibrated_plane(phi, search_params(cfg));
}

CommandResult numerical_failure(std::string what) {
  CommandResult r;
  r.exit_code = kNumerical;
  r.report = {{"error", std::move(what)}};
  return r;
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j, RunConfig base) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    if (j.contains("family")) base.calibration.family = family_from_name(j.at("family").get<std::string>());
    if (j.contains("m")) base.calibration.m = j.at("m").get<int>();
    if (j.contains("phase")) base.calibration.phase = j.at("phase").get<double>();
    if (j.contains("algebra")) base.calibration.algebra = j.at("algebra").get<std::string>();
    if (j.contains("form")) {
      const auto& f = j.at("form");
      base.calibration.form = f.is_string() ? parse_form_literal(f.get<std::string>(), j.value("n", 0)) : form_from_json(f);
    }
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tol")) base.tol = j.at("tol").get<double>();
    if (j.contains("cluster_tol")) base.cluster_tol = j.at("cluster_tol").get<double>();
    if (j.contains("basis")) base.show_basis = j.at("basis").get<bool>();
    base.params = params_from_json(j, base.params);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
  return base;
}

CommandResult cmd_module(const RunConfig& cfg) {
  const AltForm phi = calibration_of(cfg);
  const FormModule mod = phi_module(phi);
  CommandResult res;
  const int n = phi.dim();
  res.report = {{"family", family_name(cfg.calibration.family)},
                {"n", n},
                {"p", phi.degree()},
                {"dim_phi", mod.rank()},
                {"dim_stab", n * (n - 1) / 2 - mod.rank()}};
  if (cfg.show_basis) {
    nlohmann::json basis = nlohmann::json::array();
    for (const AltForm& g : mod.basis()) basis.push_back(form_to_json(g.pruned(1e-14)));
    res.report["basis"] = basis;
  }
  return res;
}

CommandResult cmd_check(const RunConfig& cfg) {
  const AltForm phi = calibration_of(cfg);
  CommandResult res;
  OrientedPlane xi;
  if (cfg.frame) {
    xi = literal_plane(cfg, phi, res);
  } else if (cfg.seed) {
    xi = random_plane(phi.dim(), phi.degree(), *cfg.seed);
  } else {
    throw UsageError("check needs --frame or --seed");
  }
  if (!(cfg.tol > 0.0)) throw UsageError("tol must be positive");
  const CriticalityReport rep = is_critical(xi, phi, cfg.tol);
  res.report = report_to_json(rep);
  res.report["frame"] = frame_to_json(xi.frame());
  res.exit_code = rep.is_critical ? kOk : kNegative;
  return res;
}

CommandResult cmd_search(const RunConfig& cfg) {
  const AltForm phi = calibration_of(cfg);
  const SearchParams p = search_params(cfg);
  if (!(cfg.cluster_tol > 0.0)) throw UsageError("cluster_tol must be positive");
  const CriticalCatalog cat = critical_spectrum(phi, p.trials, p, cfg.cluster_tol);
  CommandResult res;
  res.report = catalog_to_json(cat);
  res.report["calibration"] = spec_to_json(cfg.calibration);
  res.csv = catalog_to_csv(cat);
  if (cat.planes.empty()) res.exit_code = kNumerical;
  return res;
}

CommandResult cmd_comass(const RunConfig& cfg) {
  const AltForm phi = calibration_of(cfg);
  const SearchParams p = search_params(cfg);
  const ComassResult c = comass_search(phi, p.trials, p);
  CommandResult res;
  res.report = {{"comass", c.value},
                {"trial", c.trial},
                {"converged", c.converged},
                {"frame", frame_to_json(c.plane.frame())},
                {"params", params_to_json(p)}};
  return res;
}

CommandResult cmd_eds(const RunConfig& cfg) {
  const AltForm phi = calibration_of(cfg);
  CommandResult res;
  const auto xi = plane_or_search(cfg, phi, res);
  if (!xi) return numerical_failure("no critical plane found");
  const FormModule mod = phi_module(phi);
  FlagReport flag;
  try {
    flag = cartan_test(*xi, mod);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const DualIdealCheck dual = hodge_dual_ideal_check(phi, *xi);
  res.report = flag_report_to_json(flag);
  res.report["critical_value"] = evaluate(phi, *xi);
  res.report["codim_p"] = dual.codim_p;
  res.report["codim_dual"] = dual.codim_dual;
  res.report["dual_equal"] = dual.equal;
  res.exit_code = flag.involutive_at_flag ? kOk : kNegative;
  return res;
}

CommandResult cmd_sff(const RunConfig& cfg) {
  const AltForm phi = calibration_of(cfg);
  CommandResult res;
  const auto xi = plane_or_search(cfg, phi, res);
  if (!xi) return numerical_failure("no critical plane found");
  SffResult s;
  try {
    s = sff_space(*xi, phi, cfg.tol);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  res.report = {{"dim", static_cast<int>(s.basis.size())},
                {"all_trace_free", s.all_trace_free},
                {"max_trace", s.max_trace},
                {"critical_value", s.critical_value},
                {"frame", frame_to_json(xi->frame())}};
  res.exit_code = s.all_trace_free ? kOk : kNegative;
  return res;
}

CommandResult cmd_spinor(const RunConfig&) {
  const CliffordModel cl = build_clifford();
  const Eigen::VectorXd x = Eigen::VectorXd::Unit(8, 0);
  nlohmann::json norms = nlohmann::json::array();
  double off_degree = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const double nk = norm(spinor_square(cl, x, k));
    norms.push_back(nk);
    if (k != 0 && k != 4 && k != 8) off_degree = std::max(off_degree, nk);
  }
  const AltForm phi4 = spinor_square(cl, x, 4);
  const double phi0 = spinor_square(cl, x, 0).at(0);
  const double vol_defect = distance(spinor_square(cl, x, 8), AltForm::volume(8));
  const PsiForms psi = psi_forms(cl, x);
  double gamma_defect = 0.0;
  for (std::size_t j = 0; j < psi.psi.size(); ++j) gamma_defect = std::max(gamma_defect, distance(psi.gamma[j], 2.0 * psi.psi[j]));
  const FormModule mod = phi_module(phi4);
  const double span_distance = subspace_distance(psi.span, mod);
  CommandResult res;
  res.report = {{"norms", norms},
                {"phi0", phi0},
                {"vol_defect", vol_defect},
                {"N", static_cast<int>(psi.psi.size())},
                {"span_rank", psi.span.rank()},
                {"span_distance", span_distance},
                {"gamma_defect", gamma_defect},
                {"dim_phi", mod.rank()},
                {"dim_stab", 28 - mod.rank()},
                {"self_dual_defect", distance(hodge_star(phi4), phi4)}};
  const bool ok = off_degree < 1e-10 && std::abs(phi0 - 1.0) < 1e-10 && vol_defect < 1e-10 && psi.psi.size() == 7 && span_distance < 1e-9 &&
                  gamma_defect < 1e-10;
  res.exit_code = ok ? kOk : kNegative;
  return res;
}

CommandResult run(const RunConfig& cfg) {
  try {
    if (cfg.command == "module") return cmd_module(cfg);
    if (cfg.command == "check") return cmd_check(cfg);
    if (cfg.command == "search") return cmd_search(cfg);
    if (cfg.command == "comass") return cmd_comass(cfg);
    if (cfg.command == "eds") return cmd_eds(cfg);
    if (cfg.command == "sff") return cmd_sff(cfg);
    if (cfg.command == "spinor") return cmd_spinor(cfg);
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::runtime_error& e) {
    return numerical_failure(e.what());
  }
  throw UsageError("unknown command '" + cfg.command + "'");
}

std::string format_text(const nlohmann::json& report) {
  std::ostringstream os;
  if (!report.is_object()) return report.dump() + "\n";
  for (const auto& [k, v] : report.items()) {
    if (k == "planes" || k == "frame" || k == "basis") {
      os << k << ": " << (v.is_array() ? std::to_string(v.size()) + " entries" : v.dump()) << '\n';
    } else {
      os << k << ": " << v.dump() << '\n';
    }
  }
  return os.str();
}

}  // namespace calib::cli
