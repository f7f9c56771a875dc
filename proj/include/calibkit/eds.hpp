#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "calibkit/exterior.hpp"
#include "calibkit/form_module.hpp"
#include "calibkit/grassmann.hpp"
#include "calibkit/plane.hpp"

namespace calib {

// Algebraic ideal generated by a module Phi of p-forms, at one point.

inline constexpr double kPolarCutoff = 1e-6;
inline constexpr double kJacobianCutoff = 1e-4;
inline constexpr double kJacobianStep = 1e-6;
inline constexpr double kIntegralTol = 1e-8;

struct PolarSpace {
  Eigen::MatrixXd basis;  // n x dim H, orthonormal
  int codim = 0;
};

// H(E) for a k-dimensional E (columns of `e`), k <= p. For k < p-1 this is
// all of R^n; for k = p-1 the kernel of v -> (gamma(e_1..e_{p-1}, v))_gamma;
// for k = p (E integral) the common kernel of v -> gamma(e_1..^e_a..e_p, v).
PolarSpace polar_space(const Eigen::MatrixXd& e, const FormModule& phi);

struct IntegralCodim {
  int rank_fd = 0;     // finite-difference Jacobian
  int rank_exact = 0;  // sum_a gamma(e_1, .., A e_a, .., e_p)
  bool singular = false;
  Eigen::VectorXd singular_values;  // of the finite-difference Jacobian
};

// Rows: module basis; columns: A = v_s (x) e^a, index s + a * (n-p).
Eigen::MatrixXd integral_jacobian_fd(const OrientedPlane& xi, const FormModule& phi, double step = kJacobianStep);
Eigen::MatrixXd integral_jacobian_exact(const OrientedPlane& xi, const FormModule& phi);

// Throws std::invalid_argument unless every gamma(xi) vanishes.
IntegralCodim integral_element_rank(const OrientedPlane& xi, const FormModule& phi);
int integral_element_codim(const OrientedPlane& xi, const FormModule& phi);

struct FlagReport {
  int n = 0;
  int p = 0;
  Eigen::MatrixXd frame;          // E_a = span of the first a columns
  std::vector<int> polar_codims;  // c_1 .. c_{p-1}
  int cartan_bound = 0;
  int actual_codim = 0;
  bool singular = false;
  bool involutive_at_flag = false;
  int max_bound_random = 0;       // max bound over random in-plane frames
};

FlagReport cartan_test(const OrientedPlane& xi, const FormModule& phi, int random_frames = 50, std::uint64_t seed = 0);
nlohmann::json flag_report_to_json(const FlagReport& r);

struct DualIdealCheck {
  int codim_p = 0;
  int codim_dual = 0;
  bool equal = false;
};

// Compares the ideal of phi at xi with the ideal of *phi at the normal plane.
DualIdealCheck hodge_dual_ideal_check(const AltForm& phi, const OrientedPlane& xi);
// Same, at a calibrated plane found by ascent; throws std::runtime_error if
// none is found within params.trials starts.
DualIdealCheck hodge_dual_ideal_check(const AltForm& phi, const SearchParams& params);

// First trial (in index order) whose maximizing ascent converges with
// phi(xi) > 0.
std::optional<OrientedPlane> find_calibrated_plane(const AltForm& phi, const SearchParams& params);

}  // namespace calib
