#pragma once

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "calibkit/evaluator.hpp"
#include "calibkit/exterior.hpp"
#include "calibkit/form_module.hpp"
#include "calibkit/plane.hpp"

namespace calib {

inline constexpr double kDefaultCriticalTol = 1e-8;
// Slack between the first-cousin residual and the two other residuals.
inline constexpr double kVerdictSlack = 10.0;

struct CriticalityReport {
  double residual_cousin = 0.0;  // max_{s,a} |phi^a_s|
  double residual_module = 0.0;  // max over the module basis of |gamma(xi)|
  double residual_rho = 0.0;     // max_a |normal part of rho(e_1 .. e_a^ .. e_p)|
  double value = 0.0;            // phi(xi)
  double tol = kDefaultCriticalTol;
  bool is_critical = false;      // residual_cousin < tol
  bool module_verdict = false;   // residual_module < slack * tol
  bool rho_verdict = false;      // residual_rho < slack * tol
};

nlohmann::json report_to_json(const CriticalityReport& r);
CriticalityReport report_from_json(const nlohmann::json& j);

// The derivation action theta.phi.
AltForm p_map(const SkewMap& theta, const AltForm& phi);
// Matrix of theta -> theta.phi: C(n,p) rows, one column per generator
// e_i (x) e^j - e_j (x) e^i (i < j, lexicographic).
Eigen::MatrixXd p_matrix(const AltForm& phi);

FormModule phi_module(const AltForm& phi, double rel_cutoff = 1e-9);
int stabilizer_dim(const AltForm& phi, double rel_cutoff = 1e-9);
// Orthonormal basis (in generator coordinates) of ker P.
std::vector<SkewMap> stabilizer_algebra(const AltForm& phi, double rel_cutoff = 1e-9);

// G[s][a] = phi(e_1, .., v_s at slot a, .., e_p) with {v_s} = xi.normal_frame().
Eigen::MatrixXd cousin_matrix(const FormEvaluator& phi, const OrientedPlane& xi);

// max |gamma(xi)| over the basis of `module`.
double annihilator_check(const OrientedPlane& xi, const FormModule& module);

// rho(v_2, .., v_p): component k is phi(eps_k, v_2, .., v_p). Computed by
// repeated interior products.
VectorN rho_product(const AltForm& phi, const std::vector<VectorN>& vs);

struct RhoClosure {
  bool closed = false;
  double residual = 0.0;       // max normal component over the (p-1)-subsets
  double value_defect = 0.0;   // |rho(e_2..e_p) - phi_o e_1|
};

RhoClosure rho_closure(const OrientedPlane& xi, const AltForm& phi, double tol = kDefaultCriticalTol);
bool rho_closed(const OrientedPlane& xi, const AltForm& phi, double tol = kDefaultCriticalTol);

// Precomputes the module and evaluators so that many planes can be tested
// against one form.
class CriticalityTester {
 public:
  explicit CriticalityTester(const AltForm& phi);

  const AltForm& form() const { return eval_.form(); }
  const FormEvaluator& evaluator() const { return eval_; }
  const FormModule& module() const { return module_; }

  CriticalityReport check(const OrientedPlane& xi, double tol = kDefaultCriticalTol) const;
  double module_residual(const OrientedPlane& xi) const;

 private:
  FormEvaluator eval_;
  FormModule module_;
  std::vector<FormEvaluator> module_evals_;
};

CriticalityReport is_critical(const OrientedPlane& xi, const AltForm& phi, double tol = kDefaultCriticalTol);

// h^s_{ab} for s over the normal frame and a <= b, packed.
class SffElement {
 public:
  SffElement(int codim, int p) : q_(codim), p_(p), packed_(static_cast<std::size_t>(codim * p * (p + 1) / 2), 0.0) {}
  SffElement(int codim, int p, const Eigen::VectorXd& packed);

  int codim() const { return q_; }
  int p() const { return p_; }
  double operator()(int s, int a, int b) const { return packed_[slot(s, a, b)]; }
  double& at(int s, int a, int b) { return packed_[slot(s, a, b)]; }
  double trace(int s) const;
  Eigen::VectorXd packed() const { return Eigen::Map<const Eigen::VectorXd>(packed_.data(), static_cast<Eigen::Index>(packed_.size())); }

  static int packed_size(int codim, int p) { return codim * p * (p + 1) / 2; }
  static int slot_of(int p, int s, int a, int b);

 private:
  int q_, p_;
  std::vector<double> packed_;
  std::size_t slot(int s, int a, int b) const { return static_cast<std::size_t>(slot_of(p_, s, a, b)); }
};

struct SffResult {
  std::vector<SffElement> basis;
  bool all_trace_free = false;
  double max_trace = 0.0;
  double critical_value = 0.0;
};

// phi^{ab}_{st}: phi(e_1..e_p) with slot a <- v_s and slot b <- v_t (0 if
// a == b). Index ((a*p + b)*q + s)*q + t.
std::vector<double> double_cousins(const FormEvaluator& phi, const OrientedPlane& xi);

// Solutions h of phi_o h^s_{ac} = sum_{b,t} phi^{ab}_{st} h^t_{bc}. Throws
// std::invalid_argument unless xi is critical at `tol`.
SffResult sff_space(const OrientedPlane& xi, const AltForm& phi, double tol = kDefaultCriticalTol);
// The coefficient matrix of that system over the packed unknowns.
Eigen::MatrixXd sff_system(const OrientedPlane& xi, const AltForm& phi);

}  // namespace calib
