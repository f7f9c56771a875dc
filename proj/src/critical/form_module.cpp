#include "calibkit/form_module.hpp"

#include <stdexcept>

#include "calibkit/linalg.hpp"

namespace calib {

FormModule FormModule::span_of(int n, int p, const std::vector<AltForm>& forms, double rel_cutoff) {
  const auto rows = static_cast<Eigen::Index>(binomial(n, p));
  Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(forms.size()));
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (forms[i].dim() != n || forms[i].degree() != p) throw DimensionError("form does not match module shape");
    m.col(static_cast<Eigen::Index>(i)) = forms[i].to_vector();
  }
  FormModule out(n, p);
  if (m.cols() > 0 && m.cwiseAbs().maxCoeff() > 0.0) out.coords_ = linalg::range_basis(m, rel_cutoff);
  return out;
}

FormModule FormModule::from_orthonormal_coords(int n, int p, Eigen::MatrixXd coords) {
  if (coords.rows() != static_cast<Eigen::Index>(binomial(n, p))) throw DimensionError("coordinate rows must be C(n, p)");
  const Eigen::MatrixXd gram = coords.transpose() * coords;
  if ((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("module coordinates are not orthonormal");
  }
  FormModule out(n, p);
  out.coords_ = std::move(coords);
  return out;
}

std::vector<AltForm> FormModule::basis() const {
  std::vector<AltForm> out;
  out.reserve(static_cast<std::size_t>(rank()));
  for (int i = 0; i < rank(); ++i) out.push_back(basis_form(i));
  return out;
}

AltForm FormModule::basis_form(int i) const {
  if (i < 0 || i >= rank()) throw std::out_of_range("module basis index");
  return AltForm::from_vector(n_, p_, coords_.col(i));
}

FormModule FormModule::plus(const FormModule& other, double rel_cutoff) const {
  if (other.n_ != n_ || other.p_ != p_) throw DimensionError("modules of different shape");
  Eigen::MatrixXd m(coords_.rows(), rank() + other.rank());
  m << coords_, other.coords_;
  FormModule out(n_, p_);
  if (m.cols() > 0) out.coords_ = linalg::range_basis(m, rel_cutoff);
  return out;
}

FormModule FormModule::hodge_dual() const {
  // The Hodge star is an isometry, so the starred basis stays orthonormal.
  FormModule out(n_, n_ - p_);
  out.coords_.resize(out.coords_.rows(), rank());
  for (int i = 0; i < rank(); ++i) out.coords_.col(i) = hodge_star(basis_form(i)).to_vector();
  return out;
}

double subspace_distance(const FormModule& a, const FormModule& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) throw DimensionError("modules of different shape");
  return linalg::subspace_distance(a.coords(), b.coords());
}

}  // namespace calib
