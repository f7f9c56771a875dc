#include "calibkit/eds.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "calibkit/critical.hpp"
#include "calibkit/evaluator.hpp"
#include "calibkit/linalg.hpp"

namespace calib {

namespace {

std::vector<FormEvaluator> evaluators(const FormModule& phi) {
  std::vector<FormEvaluator> out;
  for (const AltForm& g : phi.basis()) out.emplace_back(g);
  return out;
}

// Row vector w with <w, v> = gamma(f_1, .., f_{p-1}, v).
Eigen::RowVectorXd last_slot_row(const FormEvaluator& g, const Eigen::MatrixXd& first) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(first.rows(), first.cols() + 1);
  f.leftCols(first.cols()) = first;
  Eigen::MatrixXd w;
  g.value_and_gradient(f, w);
  return w.col(first.cols()).transpose();
}

void require_integral(const OrientedPlane& xi, const std::vector<FormEvaluator>& gs) {
  for (const FormEvaluator& g : gs) {
    if (std::abs(g.value(xi)) > kIntegralTol) throw std::invalid_argument("plane is not an integral element of the ideal");
  }
}

}  // namespace

PolarSpace polar_space(const Eigen::MatrixXd& e, const FormModule& phi) {
  const int n = static_cast<int>(e.rows()), k = static_cast<int>(e.cols()), p = phi.degree();
  if (n != phi.dim()) throw DimensionError("flag element does not match the module");
  if (k > p) throw DimensionError("polar space needs dim E <= p");
  PolarSpace out;
  if (k < p - 1 || phi.rank() == 0) {
    out.basis = Eigen::MatrixXd::Identity(n, n);
    return out;
  }
  const std::vector<FormEvaluator> gs = evaluators(phi);
  Eigen::MatrixXd m;
  if (k == p - 1) {
    m.resize(static_cast<Eigen::Index>(gs.size()), n);
    for (std::size_t i = 0; i < gs.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = last_slot_row(gs[i], e);
  } else {
    for (const FormEvaluator& g : gs) {
      if (std::abs(g.value(e)) > kIntegralTol) throw std::invalid_argument("polar space of a p-plane needs an integral element");
    }
    m.resize(static_cast<Eigen::Index>(gs.size()) * p, n);
    Eigen::MatrixXd rest(n, p - 1);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      for (int a = 0; a < p; ++a) {
        for (int b = 0, c = 0; b < p; ++b) {
          if (b != a) rest.col(c++) = e.col(b);
        }
        m.row(static_cast<Eigen::Index>(i) * p + a) = last_slot_row(gs[i], rest);
      }
    }
  }
  out.basis = linalg::null_space(m, kPolarCutoff);
  out.codim = n - static_cast<int>(out.basis.cols());
  return out;
}

Eigen::MatrixXd integral_jacobian_fd(const OrientedPlane& xi, const FormModule& phi, double step) {
  const int p = xi.p(), q = xi.dim() - xi.p();
  const std::vector<FormEvaluator> gs = evaluators(phi);
  const Eigen::MatrixXd nf = xi.normal_frame();
  Eigen::MatrixXd j(static_cast<Eigen::Index>(gs.size()), p * q);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const double base = gs[i].value(xi);
    Eigen::MatrixXd f = xi.frame();
    for (int a = 0; a < p; ++a) {
      for (int s = 0; s < q; ++s) {
        f.col(a) += step * nf.col(s);
        j(static_cast<Eigen::Index>(i), s + a * q) = (gs[i].value(f) - base) / step;
        f.col(a) = xi.column(a);
      }
    }
  }
  return j;
}

Eigen::MatrixXd integral_jacobian_exact(const OrientedPlane& xi, const FormModule& phi) {
  const int p = xi.p(), q = xi.dim() - xi.p();
  const std::vector<FormEvaluator> gs = evaluators(phi);
  Eigen::MatrixXd j(static_cast<Eigen::Index>(gs.size()), p * q);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Eigen::MatrixXd g = cousin_matrix(gs[i], xi);
    j.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(g.data(), g.size());
  }
  return j;
}

IntegralCodim integral_element_rank(const OrientedPlane& xi, const FormModule& phi) {
  if (xi.dim() != phi.dim() || (phi.rank() > 0 && xi.p() != phi.degree())) throw DimensionError("plane does not match the module");
  require_integral(xi, evaluators(phi));
  IntegralCodim out;
  const Eigen::MatrixXd jfd = integral_jacobian_fd(xi, phi);
  const Eigen::MatrixXd jex = integral_jacobian_exact(xi, phi);
  out.rank_fd = linalg::rank(jfd, kJacobianCutoff);
  out.rank_exact = linalg::rank(jex, kJacobianCutoff);
  out.singular = out.rank_fd != out.rank_exact;
  if (jfd.size() > 0) out.singular_values = Eigen::BDCSVD<Eigen::MatrixXd>(jfd).singularValues();
  return out;
}

int integral_element_codim(const OrientedPlane& xi, const FormModule& phi) { return integral_element_rank(xi, phi).rank_fd; }

namespace {

std::vector<int> polar_codims(const Eigen::MatrixXd& frame, const FormModule& phi) {
  std::vector<int> out;
  for (int a = 1; a < frame.cols(); ++a) out.push_back(polar_space(frame.leftCols(a), phi).codim);
  return out;
}

int sum(const std::vector<int>& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

}  // namespace

FlagReport cartan_test(const OrientedPlane& xi, const FormModule& phi, int random_frames, std::uint64_t seed) {
  FlagReport r;
  r.n = xi.dim();
  r.p = xi.p();
  r.frame = xi.frame();
  const IntegralCodim ic = integral_element_rank(xi, phi);
  r.actual_codim = ic.rank_fd;
  r.singular = ic.singular;
  r.polar_codims = polar_codims(r.frame, phi);
  r.cartan_bound = sum(r.polar_codims);
  r.involutive_at_flag = r.actual_codim == r.cartan_bound;
  r.max_bound_random = r.cartan_bound;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < random_frames; ++k) {
    Eigen::MatrixXd g(r.p, r.p);
    for (int j = 0; j < r.p; ++j) {
      for (int i = 0; i < r.p; ++i) g(i, j) = gauss(rng);
    }
    Eigen::MatrixXd o = linalg::orthonormal_columns(g);
    if (o.determinant() < 0) o.col(0) *= -1.0;
    r.max_bound_random = std::max(r.max_bound_random, sum(polar_codims(r.frame * o, phi)));
  }
  return r;
}

nlohmann::json flag_report_to_json(const FlagReport& r) {
  return {{"n", r.n},
          {"p", r.p},
          {"polar_codims", r.polar_codims},
          {"cartan_bound", r.cartan_bound},
          {"actual_codim", r.actual_codim},
          {"singular", r.singular},
          {"involutive_at_flag", r.involutive_at_flag},
          {"max_bound_random", r.max_bound_random},
          {"frame", frame_to_json(r.frame)}};
}

DualIdealCheck hodge_dual_ideal_check(const AltForm& phi, const OrientedPlane& xi) {
  DualIdealCheck out;
  out.codim_p = integral_element_codim(xi, phi_module(phi));
  out.codim_dual = integral_element_codim(OrientedPlane(xi.normal_frame()), phi_module(hodge_star(phi)));
  out.equal = out.codim_p == out.codim_dual;
  return out;
}

std::optional<OrientedPlane> find_calibrated_plane(const AltForm& phi, const SearchParams& params) {
  const CriticalityTester tester(phi);
  for (int t = 0; t < params.trials; ++t) {
    const OrientedPlane start = random_plane(phi.dim(), phi.degree(), trial_seed(params.master_seed, static_cast<std::uint64_t>(t)));
    AscentResult r = ascend(tester, start, params, Sense::maximize);
    if (r.converged && r.report.value > 0.0) return r.plane;
  }
  return std::nullopt;
}

DualIdealCheck hodge_dual_ideal_check(const AltForm& phi, const SearchParams& params) {
  const auto xi = find_calibrated_plane(phi, params);
  if (!xi) throw std::runtime_error("no critical plane found");
  return hodge_dual_ideal_check(phi, *xi);
}

}  // namespace calib
