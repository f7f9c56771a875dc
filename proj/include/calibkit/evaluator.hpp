#pragma once

#include <Eigen/Dense>

#include "calibkit/exterior.hpp"
#include "calibkit/kernels.hpp"
#include "calibkit/plane.hpp"

namespace calib {

// A form together with its packed term table, for repeated evaluation.
class FormEvaluator {
 public:
  explicit FormEvaluator(AltForm form) : form_(std::move(form)), table_(kernels::TermTable::build(form_)) {}

  const AltForm& form() const { return form_; }
  int dim() const { return form_.dim(); }
  int degree() const { return form_.degree(); }

  // phi(columns of `frame`); the columns need not be orthonormal.
  double value(const Eigen::MatrixXd& frame) const {
    check(frame);
    return kernels::eval(table_, frame.data(), static_cast<int>(frame.rows()));
  }
  double value(const OrientedPlane& xi) const { return value(xi.frame()); }

  // Returns phi(frame); `grad` receives d phi / d frame (n x p). Column a of
  // the result is the vector w_a with <u, w_a> = phi(.., u at slot a, ..).
  double value_and_gradient(const Eigen::MatrixXd& frame, Eigen::MatrixXd& grad) const {
    check(frame);
    grad.resize(frame.rows(), frame.cols());
    return kernels::eval_grad(table_, frame.data(), static_cast<int>(frame.rows()), grad.data());
  }

 private:
  void check(const Eigen::MatrixXd& frame) const {
    if (frame.rows() != form_.dim() || frame.cols() != form_.degree()) {
      throw DimensionError("frame shape does not match the form's (n, p)");
    }
  }

  AltForm form_;
  kernels::TermTable table_;
};

inline double evaluate(const AltForm& a, const OrientedPlane& xi) { return FormEvaluator(a).value(xi); }

}  // namespace calib
