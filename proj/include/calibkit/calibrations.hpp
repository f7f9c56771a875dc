#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "calibkit/clifford.hpp"
#include "calibkit/exterior.hpp"
#include "calibkit/form_module.hpp"
#include "calibkit/lie.hpp"

namespace calib {

enum class Family { associative, coassociative, cayley, special_lagrangian, cartan, spinor, custom };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct CalibrationSpec {
  Family family = Family::associative;
  int m = 3;                    // special Lagrangian: complex dimension
  double phase = 0.0;           // special Lagrangian: Re(e^{i phase} Upsilon)
  std::string algebra = "su3";  // cartan
  std::optional<AltForm> form;  // custom

  // (n, p) determined by the family.
  std::pair<int, int> shape() const;
};

nlohmann::json spec_to_json(const CalibrationSpec& s);
CalibrationSpec spec_from_json(const nlohmann::json& j);

// phi = e123 + e145 + e167 + e246 - e257 - e347 - e356 on R^7.
AltForm associative_form();
AltForm coassociative_form();
// e^0 ^ phi + *_7 phi on R^8 = R (+) R^7, coordinates (x0, x1..x7).
AltForm cayley_form();

struct SpecialLagrangian {
  AltForm calib;       // Re(e^{i phase} Upsilon)
  AltForm sigma;       // sum_j dx^j ^ dy^j
  AltForm im_upsilon;  // Im(e^{i phase} Upsilon)
  FormModule phi_w;    // span{Re dz^J ^ sigma, Im dz^J ^ sigma : |J| = m-2}
};

// Real coordinates interleaved (x1, y1, ..., xm, ym); 2 <= m <= 4.
SpecialLagrangian special_lagrangian(int m, double phase = 0.0);

// phi(u, v, w) = c <u, [v, w]> with c = 1/|<a, [b, c]>| on an orthonormal
// basis (a, b, c) of the highest-root su(2).
double cartan_normalization(const LieAlgebraData& g);
AltForm cartan_three_form(const LieAlgebraData& g);

// Degree-k component of 16 x o x for a unit x in S+ (coordinates w.r.t.
// CliffordModel::s_plus).
AltForm spinor_square(const CliffordModel& cl, const Eigen::VectorXd& x, int k);

struct PsiForms {
  std::vector<Eigen::VectorXd> spinors;  // x_0 = x, x_1..x_7 (S+ coordinates)
  std::vector<AltForm> psi;              // degree-4 part of 16 x_j o x_0
  std::vector<AltForm> gamma;            // degree-4 part of 16 (x_j o x_0 + x_0 o x_j)
  FormModule span;                       // span of the psi
};

PsiForms psi_forms(const CliffordModel& cl, const Eigen::VectorXd& x);

// The calibration named by `s` (for `spinor`, spinor_square of the
// first S+ basis vector, degree 4).
AltForm build_calibration(const CalibrationSpec& s);

}  // namespace calib
