#include "calibkit/calibrations.hpp"

#include <cmath>
#include <stdexcept>

#include "calibkit/form_io.hpp"
#include "calibkit/linalg.hpp"

namespace calib {

namespace {

struct ComplexForm {
  AltForm re;
  AltForm im;
};

ComplexForm cwedge(const ComplexForm& a, const ComplexForm& b) {
  return {wedge(a.re, b.re) - wedge(a.im, b.im), wedge(a.re, b.im) + wedge(a.im, b.re)};
}

// dz^j = dx^j + i dy^j with x^j at 2j, y^j at 2j+1.
ComplexForm dz(int n, int j) { return {AltForm::basis(n, {2 * j}), AltForm::basis(n, {2 * j + 1})}; }

ComplexForm dz_product(int n, const std::vector<int>& js) {
  ComplexForm out{AltForm::constant(n, 1.0), AltForm(n, 0)};
  for (int j : js) out = cwedge(out, dz(n, j));
  return out;
}

AltForm shift_into_r8(const AltForm& a7) {
  CoeffMap m;
  for (const auto& [k, c] : a7.terms()) m.emplace(k << 1, c);
  return AltForm(8, a7.degree(), std::move(m));
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::associative: return "associative";
    case Family::coassociative: return "coassociative";
    case Family::cayley: return "cayley";
    case Family::special_lagrangian: return "special_lagrangian";
    case Family::cartan: return "cartan";
    case Family::spinor: return "spinor";
    case Family::custom: return "custom";
  }
  return "custom";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::associative, Family::coassociative, Family::cayley, Family::special_lagrangian, Family::cartan, Family::spinor,
                   Family::custom}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown calibration family '" + name + "'");
}

std::pair<int, int> CalibrationSpec::shape() const {
  switch (family) {
    case Family::associative: return {7, 3};
    case Family::coassociative: return {7, 4};
    case Family::cayley:
    case Family::spinor: return {8, 4};
    case Family::special_lagrangian: return {2 * m, m};
    case Family::cartan: return {lie_algebra_by_name(algebra).dim, 3};
    case Family::custom:
      if (!form) throw std::invalid_argument("custom calibration needs a form");
      return {form->dim(), form->degree()};
  }
  return {0, 0};
}

nlohmann::json spec_to_json(const CalibrationSpec& s) {
  nlohmann::json j{{"family", family_name(s.family)}};
  if (s.family == Family::special_lagrangian) {
    j["m"] = s.m;
    j["phase"] = s.phase;
  }
  if (s.family == Family::cartan) j["algebra"] = s.algebra;
  if (s.family == Family::custom && s.form) j["form"] = form_to_json(*s.form);
  return j;
}

CalibrationSpec spec_from_json(const nlohmann::json& j) {
  CalibrationSpec s;
  try {
    s.family = family_from_name(j.at("family").get<std::string>());
    if (j.contains("m")) s.m = j.at("m").get<int>();
    if (j.contains("phase")) s.phase = j.at("phase").get<double>();
    if (j.contains("algebra")) s.algebra = j.at("algebra").get<std::string>();
    if (j.contains("form")) {
      const auto& f = j.at("form");
      s.form = f.is_string() ? parse_form_literal(f.get<std::string>(), j.value("n", 0)) : form_from_json(f);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed calibration spec: ") + e.what());
  }
  if (s.family == Family::custom && !s.form) throw std::invalid_argument("custom calibration needs a form");
  return s;
}

AltForm associative_form() {
  const int n = 7;
  return AltForm::basis(n, {0, 1, 2}) + AltForm::basis(n, {0, 3, 4}) + AltForm::basis(n, {0, 5, 6}) + AltForm::basis(n, {1, 3, 5}) -
         AltForm::basis(n, {1, 4, 6}) - AltForm::basis(n, {2, 3, 6}) - AltForm::basis(n, {2, 4, 5});
}

AltForm coassociative_form() { return hodge_star(associative_form()); }

AltForm cayley_form() {
  const AltForm e0 = AltForm::basis(8, {0});
  return wedge(e0, shift_into_r8(associative_form())) + shift_into_r8(coassociative_form());
}

SpecialLagrangian special_lagrangian(int m, double phase) {
  if (m < 2 || m > 4) throw std::invalid_argument("special Lagrangian calibration supported for 2 <= m <= 4");
  const int n = 2 * m;
  std::vector<int> all(m);
  for (int j = 0; j < m; ++j) all[j] = j;
  const ComplexForm upsilon = dz_product(n, all);
  const double c = std::cos(phase), s = std::sin(phase);

  SpecialLagrangian out;
  out.calib = (c * upsilon.re - s * upsilon.im).pruned(1e-15);
  out.im_upsilon = (s * upsilon.re + c * upsilon.im).pruned(1e-15);
  out.sigma = AltForm(n, 2);
  for (int j = 0; j < m; ++j) out.sigma = out.sigma + AltForm::basis(n, {2 * j, 2 * j + 1});

  std::vector<AltForm> gens;
  // All subsets J of size m-2, by bitmask.
  for (Mask jm = 0; jm < (Mask{1} << m); ++jm) {
    if (mask::count(jm) != m - 2) continue;
    const ComplexForm dzj = dz_product(n, mask::indices(jm));
    gens.push_back(wedge(dzj.re, out.sigma));
    gens.push_back(wedge(dzj.im, out.sigma));
  }
  out.phi_w = FormModule::span_of(n, m, gens);
  return out;
}

double cartan_normalization(const LieAlgebraData& g) {
  if (g.highest_root_triple.cols() != 3) throw std::invalid_argument("Lie algebra data lacks a highest-root su(2)");
  const Eigen::MatrixXd t = linalg::orthonormal_columns(g.highest_root_triple);
  const double v = t.col(0).dot(g.bracket(t.col(1), t.col(2)));
  if (std::abs(v) < 1e-12) throw std::invalid_argument("highest-root triple is not a subalgebra");
  return 1.0 / std::abs(v);
}

AltForm cartan_three_form(const LieAlgebraData& g) {
  const LieCheck chk = check_lie_algebra(g);
  if (chk.antisymmetry > 1e-10 || chk.jacobi > 1e-10) throw std::invalid_argument("structure constants fail antisymmetry or Jacobi");
  if (chk.invariance > 1e-10) throw std::invalid_argument("inner product is not ad-invariant");
  const double c = cartan_normalization(g);
  CoeffMap m;
  for (int i = 0; i < g.dim; ++i) {
    for (int j = i + 1; j < g.dim; ++j) {
      for (int k = j + 1; k < g.dim; ++k) {
        // <x_i, [x_j, x_k]> = c^i_{jk}
        const double v = c * g.c(j, k, i);
        if (std::abs(v) > 1e-14) m.emplace((Mask{1} << i) | (Mask{1} << j) | (Mask{1} << k), v);
      }
    }
  }
  return AltForm(g.dim, 3, std::move(m));
}

AltForm spinor_square(const CliffordModel& cl, const Eigen::VectorXd& x, int k) {
  if (x.size() != 8) throw DimensionError("S+ coordinates have 8 components");
  if (std::abs(x.norm() - 1.0) > 1e-12) throw std::invalid_argument("spinor must have unit length");
  if (k < 0 || k > 8) throw DimensionError("degree must lie in [0, 8]");
  const Eigen::VectorXd pinor = cl.s_plus * x;
  return cl.component(pinor, pinor, k).pruned(1e-14);
}

PsiForms psi_forms(const CliffordModel& cl, const Eigen::VectorXd& x) {
  if (x.size() != 8) throw DimensionError("S+ coordinates have 8 components");
  if (std::abs(x.norm() - 1.0) > 1e-12) throw std::invalid_argument("spinor must have unit length");
  const Eigen::MatrixXd basis = linalg::orthogonal_completion(x);
  PsiForms out;
  const Eigen::VectorXd x0 = cl.s_plus * x;
  for (int j = 0; j < 8; ++j) out.spinors.push_back(basis.col(j));
  for (int j = 1; j < 8; ++j) {
    const Eigen::VectorXd xj = cl.s_plus * basis.col(j);
    const AltForm psi = cl.component(xj, x0, 4);
    out.psi.push_back(psi);
    out.gamma.push_back(psi + cl.component(x0, xj, 4));
  }
  out.span = FormModule::span_of(8, 4, out.psi);
  return out;
}

AltForm build_calibration(const CalibrationSpec& s) {
  switch (s.family) {
    case Family::associative: return associative_form();
    case Family::coassociative: return coassociative_form();
    case Family::cayley: return cayley_form();
    case Family::special_lagrangian: return special_lagrangian(s.m, s.phase).calib;
    case Family::cartan: return cartan_three_form(lie_algebra_by_name(s.algebra));
    case Family::spinor: {
      const CliffordModel cl = build_clifford();
      return spinor_square(cl, Eigen::VectorXd::Unit(8, 0), 4);
    }
    case Family::custom:
      if (!s.form) throw std::invalid_argument("custom calibration needs a form");
      return *s.form;
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace calib
