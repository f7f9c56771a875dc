#include <doctest.h>

#include <cmath>

#include "calibkit/calibrations.hpp"
#include "calibkit/evaluator.hpp"
#include "calibkit/exterior.hpp"
#include "calibkit/grassmann.hpp"
#include "calibkit/linalg.hpp"
#include "support.hpp"

using namespace calib;
using testsupport::random_form;

TEST_CASE("wedge of basis covectors") {
  const AltForm e1 = AltForm::basis(4, {0}), e2 = AltForm::basis(4, {1});
  const AltForm w = wedge(e1, e2);
  CHECK(w.degree() == 2);
  CHECK(w.coefficient({0, 1}) == 1.0);
  CHECK(w.coefficient({1, 0}) == -1.0);
  CHECK(approx_equal(wedge(e2, e1), -w));
  CHECK(wedge(e1, e1).is_zero());
}

TEST_CASE("wedge beyond top degree is zero") {
  const AltForm a = AltForm::basis(3, {0, 1}), b = AltForm::basis(3, {1, 2});
  const AltForm w = wedge(a, b);
  CHECK(w.is_zero());
  CHECK_THROWS_AS(wedge(AltForm::basis(3, {0}), AltForm::basis(4, {0})), DimensionError);
}

TEST_CASE("wedge agrees with the antisymmetrization oracle") {
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testsupport::uniform_int(2, 6);
    const int p = testsupport::uniform_int(0, std::min(3, n));
    const int q = testsupport::uniform_int(0, std::min(3, n - p));
    const AltForm a = random_form(n, p, 0.7), b = random_form(n, q, 0.7);
    const AltForm expect = testsupport::form_from_oracle(n, p + q, [&](const auto& vs) { return testsupport::wedge_oracle(a, b, vs); });
    CHECK(distance(wedge(a, b), expect) < 1e-12);
  }
}

TEST_CASE("phi ^ e1 in R^7 and its dual") {
  const AltForm w = wedge(associative_form(), AltForm::basis(7, {0}));
  CHECK(w.degree() == 4);
  const AltForm s = hodge_star(w).pruned(1e-14);
  CHECK(s.size() == 4);
  const AltForm expect = testsupport::form_from_oracle(7, 4, [&](const auto& vs) {
    return testsupport::wedge_oracle(associative_form(), AltForm::basis(7, {0}), vs);
  });
  CHECK(distance(w, expect) < 1e-12);
}

TEST_CASE("graded commutativity") {
  for (int trial = 0; trial < 40; ++trial) {
    const int n = testsupport::uniform_int(2, 8);
    const int p = testsupport::uniform_int(0, n), q = testsupport::uniform_int(0, n - p);
    const AltForm a = random_form(n, p, 0.5), b = random_form(n, q, 0.5);
    const double sign = (p * q) % 2 ? -1.0 : 1.0;
    CHECK(distance(wedge(a, b), sign * wedge(b, a)) < 1e-12);
  }
}

TEST_CASE("hodge star basics") {
  CHECK(approx_equal(hodge_star(AltForm::constant(5, 1.0)), AltForm::volume(5)));
  CHECK(approx_equal(hodge_star(AltForm::volume(5)), AltForm::constant(5, 1.0)));
  // *e^1 = e^{23} in R^3; *e^2 = -e^{13} = e^{31}.
  CHECK(approx_equal(hodge_star(AltForm::basis(3, {0})), AltForm::basis(3, {1, 2})));
  CHECK(approx_equal(hodge_star(AltForm::basis(3, {1})), AltForm::basis(3, {0, 2}, -1.0)));
}

TEST_CASE("hodge involution for all 1 <= p <= n <= 8") {
  for (int n = 1; n <= 8; ++n) {
    for (int p = 1; p <= n; ++p) {
      const AltForm a = random_form(n, p);
      const double sign = (p * (n - p)) % 2 ? -1.0 : 1.0;
      CHECK(distance(hodge_star(hodge_star(a)), sign * a) < 1e-12);
    }
  }
}

TEST_CASE("metric compatibility: <a,b> vol = a ^ *b") {
  for (int trial = 0; trial < 40; ++trial) {
    const int n = testsupport::uniform_int(1, 8), p = testsupport::uniform_int(0, n);
    const AltForm a = random_form(n, p), b = random_form(n, p);
    const AltForm top = wedge(a, hodge_star(b));
    CHECK(std::abs(top.at((Mask{1} << n) - 1) - inner(a, b)) < 1e-12);
  }
}

TEST_CASE("interior product") {
  const AltForm e12 = AltForm::basis(4, {0, 1});
  CHECK(approx_equal(interior(Eigen::VectorXd::Unit(4, 0), e12), AltForm::basis(4, {1})));
  CHECK(approx_equal(interior(Eigen::VectorXd::Unit(4, 1), e12), AltForm::basis(4, {0}, -1.0)));
  CHECK(interior(Eigen::VectorXd::Unit(4, 2), e12).is_zero());
  CHECK_THROWS(interior(Eigen::VectorXd::Unit(4, 0), AltForm::constant(4, 1.0)));
  CHECK_THROWS_AS(interior(Eigen::VectorXd::Unit(3, 0), e12), DimensionError);
}

TEST_CASE("interior agrees with slot insertion") {
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testsupport::uniform_int(2, 7), p = testsupport::uniform_int(1, std::min(4, n));
    const AltForm a = random_form(n, p);
    const Eigen::VectorXd v = testsupport::random_vector(n);
    std::vector<Eigen::VectorXd> rest;
    for (int k = 1; k < p; ++k) rest.push_back(testsupport::random_vector(n));
    std::vector<Eigen::VectorXd> full{v};
    full.insert(full.end(), rest.begin(), rest.end());
    CHECK(std::abs(testsupport::dense_eval(interior(v, a), rest) - testsupport::dense_eval(a, full)) < 1e-10);
  }
}

TEST_CASE("interior e_1 of the associative form has comass one") {
  const AltForm omega = interior(Eigen::VectorXd::Unit(7, 0), associative_form());
  CHECK(omega.degree() == 2);
  SearchParams sp;
  sp.trials = 10;
  CHECK(comass_estimate(omega, 10, sp) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("permuted tuples pick up the permutation sign") {
  for (int trial = 0; trial < 50; ++trial) {
    const int n = testsupport::uniform_int(3, 8), p = testsupport::uniform_int(2, std::min(5, n));
    const AltForm a = random_form(n, p);
    const auto& masks = lex_masks(n, p);
    const Mask m = masks[static_cast<std::size_t>(testsupport::uniform_int(0, static_cast<int>(masks.size()) - 1))];
    std::vector<int> idx = mask::indices(m);
    std::shuffle(idx.begin(), idx.end(), testsupport::rng());
    CHECK(a.coefficient(idx) == doctest::Approx(testsupport::perm_sign(idx) * a.at(m)));
    idx[1] = idx[0];
    CHECK(a.coefficient(idx) == 0.0);
  }
}

TEST_CASE("constructor rejects malformed keys") {
  CoeffMap bad;
  bad.emplace(Mask{0b111}, 1.0);
  CHECK_THROWS(AltForm(4, 2, bad));
  CoeffMap outside;
  outside.emplace(Mask{0b10001}, 1.0);
  CHECK_THROWS(AltForm(4, 2, outside));
  CHECK_THROWS(AltForm::basis(4, {1, 0}));
}

TEST_CASE("evaluate: pairing, conventions and orientation") {
  CHECK(evaluate(AltForm::basis(3, {0, 1, 2}), OrientedPlane::coordinate(3, {0, 1, 2})) == 1.0);
  CHECK(evaluate(associative_form(), OrientedPlane::coordinate(7, {0, 1, 2})) == doctest::Approx(1.0));
  for (int trial = 0; trial < 20; ++trial) {
    const int n = testsupport::uniform_int(2, 8), p = testsupport::uniform_int(1, std::min(4, n));
    const AltForm a = random_form(n, p);
    const OrientedPlane xi = testsupport::random_plane(n, p);
    CHECK(evaluate(a, xi.reversed()) == doctest::Approx(-evaluate(a, xi)));
    CHECK(evaluate(a, xi) == doctest::Approx(testsupport::dense_eval(a, xi.frame())));
  }
  CHECK_THROWS_AS(evaluate(AltForm::basis(4, {0, 1}), OrientedPlane::coordinate(4, {0, 1, 2})), DimensionError);
}

TEST_CASE("so_action example: rotation in the 1-3 plane") {
  // theta = e_1 (x) e^3 - e_3 (x) e^1
  const SkewMap theta = SkewMap::generator(4, 0, 2);
  CHECK(theta(0, 2) == 1.0);
  CHECK(theta(2, 0) == -1.0);
  const AltForm r = so_action(theta, AltForm::basis(4, {0, 1}));
  CHECK(approx_equal(r, AltForm::basis(4, {1, 2}, -1.0)));
  CHECK(so_action(SkewMap(4), AltForm::basis(4, {0, 1})).is_zero());
}

TEST_CASE("so_action is a derivation") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = testsupport::uniform_int(3, 7), p = testsupport::uniform_int(0, 3), q = testsupport::uniform_int(0, n - p > 3 ? 3 : n - p);
    const AltForm a = random_form(n, p), b = random_form(n, q);
    const SkewMap t = testsupport::random_skew(n);
    CHECK(distance(so_action(t, wedge(a, b)), wedge(so_action(t, a), b) + wedge(a, so_action(t, b))) < 1e-10);
  }
}

TEST_CASE("so_action matches the finite-difference derivative of evaluate") {
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testsupport::uniform_int(3, 8), p = testsupport::uniform_int(1, std::min(4, n));
    const AltForm a = random_form(n, p);
    const SkewMap t = testsupport::random_skew(n);
    const OrientedPlane xi = testsupport::random_plane(n, p);
    const double h = 1e-5;
    const Eigen::MatrixXd gp = linalg::expm_skew(h * t.matrix()), gm = linalg::expm_skew(-h * t.matrix());
    const double fd = (evaluate(a, xi.transformed(gp)) - evaluate(a, xi.transformed(gm))) / (2 * h);
    CHECK(std::abs(fd - evaluate(so_action(t, a), xi)) < 1e-6);
  }
}

TEST_CASE("skew maps") {
  const Eigen::MatrixXd m = testsupport::random_matrix(5, 5);
  const SkewMap s = SkewMap::from_matrix(m - m.transpose());
  CHECK((s.matrix() - (m - m.transpose())).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS(SkewMap::from_matrix(m));
  const SkewMap back = SkewMap::from_coords(5, s.coords());
  CHECK((back.matrix() - s.matrix()).norm() == 0.0);
  const Eigen::MatrixXd g = linalg::expm_skew(s.matrix());
  CHECK((g.transpose() * g - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("vector coordinates round-trip") {
  const AltForm a = random_form(6, 3);
  CHECK(distance(AltForm::from_vector(6, 3, a.to_vector()), a) == 0.0);
  CHECK(a.to_vector().norm() == doctest::Approx(norm(a)));
  CHECK(binomial(8, 4) == 70);
  CHECK(lex_rank(4, 2, 0b0011) == 0);
  CHECK(lex_rank(4, 2, 0b1100) == 5);
}
