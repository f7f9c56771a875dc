#pragma once

#include <vector>

#include <Eigen/Dense>

#include "calibkit/exterior.hpp"

namespace calib {

// A subspace of Lambda^p (R^n)*, held as an orthonormal basis.
class FormModule {
 public:
  FormModule() = default;
  FormModule(int n, int p) : n_(n), p_(p), coords_(static_cast<Eigen::Index>(binomial(n, p)), 0) {}

  // Orthonormalized span of `forms`; singular values <= rel_cutoff * s_max
  // are discarded.
  static FormModule span_of(int n, int p, const std::vector<AltForm>& forms, double rel_cutoff = 1e-9);
  // Columns of `coords` must be orthonormal coordinate vectors.
  static FormModule from_orthonormal_coords(int n, int p, Eigen::MatrixXd coords);

  int dim() const { return n_; }
  int degree() const { return p_; }
  int rank() const { return static_cast<int>(coords_.cols()); }
  std::vector<AltForm> basis() const;
  AltForm basis_form(int i) const;
  // C(n,p) x rank, orthonormal columns.
  const Eigen::MatrixXd& coords() const { return coords_; }

  // Direct sum with another module of the same (n, p), re-orthonormalized.
  FormModule plus(const FormModule& other, double rel_cutoff = 1e-9) const;
  FormModule hodge_dual() const;

 private:
  int n_ = 0;
  int p_ = 0;
  Eigen::MatrixXd coords_;
};

// Spectral-norm distance between the orthogonal projectors; 1 when the
// ranks differ.
double subspace_distance(const FormModule& a, const FormModule& b);

}  // namespace calib
