#include "calibkit/critical.hpp"

#include <cmath>
#include <stdexcept>

#include "calibkit/linalg.hpp"

namespace calib {

nlohmann::json report_to_json(const CriticalityReport& r) {
  return {{"residual_cousin", r.residual_cousin},
          {"residual_module", r.residual_module},
          {"residual_rho", r.residual_rho},
          {"value", r.value},
          {"is_critical", r.is_critical}};
}

CriticalityReport report_from_json(const nlohmann::json& j) {
  CriticalityReport r;
  r.residual_cousin = j.at("residual_cousin").get<double>();
  r.residual_module = j.at("residual_module").get<double>();
  r.residual_rho = j.at("residual_rho").get<double>();
  r.value = j.at("value").get<double>();
  r.is_critical = j.at("is_critical").get<bool>();
  if (j.contains("tol")) r.tol = j.at("tol").get<double>();
  r.module_verdict = r.residual_module < kVerdictSlack * r.tol;
  r.rho_verdict = r.residual_rho < kVerdictSlack * r.tol;
  return r;
}

AltForm p_map(const SkewMap& theta, const AltForm& phi) { return so_action(theta, phi); }

Eigen::MatrixXd p_matrix(const AltForm& phi) {
  const int n = phi.dim();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(binomial(n, phi.degree())), n * (n - 1) / 2);
  int col = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) m.col(col++) = so_action(SkewMap::generator(n, i, j), phi).to_vector();
  }
  return m;
}

FormModule phi_module(const AltForm& phi, double rel_cutoff) {
  const int n = phi.dim();
  std::vector<AltForm> images;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) images.push_back(so_action(SkewMap::generator(n, i, j), phi));
  }
  return FormModule::span_of(n, phi.degree(), images, rel_cutoff);
}

int stabilizer_dim(const AltForm& phi, double rel_cutoff) {
  const int n = phi.dim();
  return n * (n - 1) / 2 - linalg::rank(p_matrix(phi), rel_cutoff);
}

std::vector<SkewMap> stabilizer_algebra(const AltForm& phi, double rel_cutoff) {
  const Eigen::MatrixXd ker = linalg::null_space(p_matrix(phi), rel_cutoff);
  std::vector<SkewMap> out;
  for (Eigen::Index k = 0; k < ker.cols(); ++k) out.push_back(SkewMap::from_coords(phi.dim(), ker.col(k)));
  return out;
}

Eigen::MatrixXd cousin_matrix(const FormEvaluator& phi, const OrientedPlane& xi) {
  Eigen::MatrixXd w;
  phi.value_and_gradient(xi.frame(), w);
  return xi.normal_frame().transpose() * w;
}

double annihilator_check(const OrientedPlane& xi, const FormModule& module) {
  if (module.rank() > 0 && module.degree() != xi.p()) throw DimensionError("module degree does not match the plane");
  double worst = 0.0;
  for (const AltForm& g : module.basis()) worst = std::max(worst, std::abs(evaluate(g, xi)));
  return worst;
}

VectorN rho_product(const AltForm& phi, const std::vector<VectorN>& vs) {
  const int p = phi.degree();
  if (p < 1) throw DimensionError("rho needs a form of positive degree");
  if (static_cast<int>(vs.size()) != p - 1) throw DimensionError("rho takes p-1 vectors");
  // v_p _| .. v_2 _| phi evaluated at eps_k is phi(v_2, .., v_p, eps_k).
  AltForm psi = phi;
  for (const VectorN& v : vs) {
    if (v.size() != phi.dim()) throw DimensionError("vector dimension does not match the form");
    psi = interior(v, psi);
  }
  const double sign = ((p - 1) % 2 == 0) ? 1.0 : -1.0;
  VectorN out = VectorN::Zero(phi.dim());
  for (const auto& [m, c] : psi.terms()) out(__builtin_ctz(m)) = sign * c;
  return out;
}

RhoClosure rho_closure(const OrientedPlane& xi, const AltForm& phi, double tol) {
  if (phi.degree() != xi.p() || phi.dim() != xi.dim()) throw DimensionError("plane does not match the form");
  const int p = xi.p();
  const Eigen::MatrixXd nf = xi.normal_frame();
  RhoClosure out;
  for (int a = 0; a < p; ++a) {
    std::vector<VectorN> vs;
    for (int b = 0; b < p; ++b) {
      if (b != a) vs.push_back(xi.column(b));
    }
    const VectorN r = rho_product(phi, vs);
    out.residual = std::max(out.residual, (nf.transpose() * r).norm());
    if (a == 0) out.value_defect = (r - evaluate(phi, xi) * xi.column(0)).norm();
  }
  out.closed = out.residual < tol && out.value_defect < tol;
  return out;
}

bool rho_closed(const OrientedPlane& xi, const AltForm& phi, double tol) { return rho_closure(xi, phi, tol).closed; }

CriticalityTester::CriticalityTester(const AltForm& phi) : eval_(phi), module_(phi_module(phi)) {
  for (const AltForm& g : module_.basis()) module_evals_.emplace_back(g);
}

double CriticalityTester::module_residual(const OrientedPlane& xi) const {
  double worst = 0.0;
  for (const FormEvaluator& g : module_evals_) worst = std::max(worst, std::abs(g.value(xi)));
  return worst;
}

CriticalityReport CriticalityTester::check(const OrientedPlane& xi, double tol) const {
  CriticalityReport r;
  r.tol = tol;
  Eigen::MatrixXd w;
  r.value = eval_.value_and_gradient(xi.frame(), w);
  const Eigen::MatrixXd g = xi.normal_frame().transpose() * w;
  r.residual_cousin = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
  r.residual_module = module_residual(xi);
  r.residual_rho = rho_closure(xi, eval_.form(), tol).residual;
  r.is_critical = r.residual_cousin < tol;
  r.module_verdict = r.residual_module < kVerdictSlack * tol;
  r.rho_verdict = r.residual_rho < kVerdictSlack * tol;
  return r;
}

CriticalityReport is_critical(const OrientedPlane& xi, const AltForm& phi, double tol) { return CriticalityTester(phi).check(xi, tol); }

SffElement::SffElement(int codim, int p, const Eigen::VectorXd& packed) : SffElement(codim, p) {
  if (packed.size() != packed_size(codim, p)) throw DimensionError("packed second fundamental form has the wrong length");
  for (Eigen::Index i = 0; i < packed.size(); ++i) packed_[static_cast<std::size_t>(i)] = packed(i);
}

int SffElement::slot_of(int p, int s, int a, int b) {
  if (a > b) std::swap(a, b);
  return s * (p * (p + 1) / 2) + a * p - a * (a - 1) / 2 + (b - a);
}

double SffElement::trace(int s) const {
  double t = 0.0;
  for (int a = 0; a < p_; ++a) t += (*this)(s, a, a);
  return t;
}

std::vector<double> double_cousins(const FormEvaluator& phi, const OrientedPlane& xi) {
  const int p = xi.p(), q = xi.dim() - xi.p();
  const Eigen::MatrixXd nf = xi.normal_frame();
  std::vector<double> out(static_cast<std::size_t>(p * p * q * q), 0.0);
  Eigen::MatrixXd f = xi.frame();
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      if (a == b) continue;
      for (int s = 0; s < q; ++s) {
        for (int t = 0; t < q; ++t) {
          f.col(a) = nf.col(s);
          f.col(b) = nf.col(t);
          out[static_cast<std::size_t>(((a * p + b) * q + s) * q + t)] = phi.value(f);
          f.col(a) = xi.column(a);
          f.col(b) = xi.column(b);
        }
      }
    }
  }
  return out;
}

Eigen::MatrixXd sff_system(const OrientedPlane& xi, const AltForm& phi) {
  const FormEvaluator ev(phi);
  const int p = xi.p(), q = xi.dim() - xi.p();
  const double phi_o = ev.value(xi);
  const std::vector<double> dc = double_cousins(ev, xi);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(q * p * p, SffElement::packed_size(q, p));
  for (int s = 0; s < q; ++s) {
    for (int a = 0; a < p; ++a) {
      for (int c = 0; c < p; ++c) {
        const int row = (s * p + a) * p + c;
        m(row, SffElement::slot_of(p, s, a, c)) += phi_o;
        for (int b = 0; b < p; ++b) {
          if (b == a) continue;
          for (int t = 0; t < q; ++t) m(row, SffElement::slot_of(p, t, b, c)) -= dc[static_cast<std::size_t>(((a * p + b) * q + s) * q + t)];
        }
      }
    }
  }
  return m;
}

SffResult sff_space(const OrientedPlane& xi, const AltForm& phi, double tol) {
  const CriticalityReport rep = is_critical(xi, phi, tol);
  if (!rep.is_critical) throw std::invalid_argument("sff_space needs a critical plane");
  const int p = xi.p(), q = xi.dim() - xi.p();
  const Eigen::MatrixXd ker = linalg::null_space(sff_system(xi, phi), 1e-9);
  SffResult out;
  out.critical_value = rep.value;
  for (Eigen::Index k = 0; k < ker.cols(); ++k) {
    SffElement h(q, p, ker.col(k));
    for (int s = 0; s < q; ++s) out.max_trace = std::max(out.max_trace, std::abs(h.trace(s)));
    out.basis.push_back(std::move(h));
  }
  out.all_trace_free = out.max_trace < 1e-10;
  return out;
}

}  // namespace calib
