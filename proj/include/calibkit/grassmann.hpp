#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "calibkit/critical.hpp"
#include "calibkit/exterior.hpp"
#include "calibkit/plane.hpp"

namespace calib {

struct SearchParams {
  int max_iters = 5000;
  double step_init = 0.1;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double grad_tol = 1e-10;
  int trials = 20;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0: hardware concurrency; never affects results

  // Throws std::invalid_argument if a field is out of range.
  void validate() const;
};

nlohmann::json params_to_json(const SearchParams& p);
// Fields absent from `j` keep the values of `base`.
SearchParams params_from_json(const nlohmann::json& j, SearchParams base = {});

enum class Sense { maximize, minimize, critical };
std::string sense_name(Sense s);

// Schedule-independent per-trial seed.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

// Haar-distributed oriented p-plane.
OrientedPlane random_plane(int n, int p, std::uint64_t seed);

// G[s][a] = phi(e_1, .., v_s at slot a, .., e_p), (n-p) x p.
Eigen::MatrixXd riemann_gradient(const AltForm& phi, const OrientedPlane& xi);

// QR retraction of xi along the tangent vector given in normal-frame
// coordinates: span of F + t N X, diag(R) >= 0.
OrientedPlane retract(const OrientedPlane& xi, const Eigen::MatrixXd& x, double t);

// Matrix of the linearization of G at xi over tangent vectors X (q x p),
// both flattened column-major. Symmetric.
Eigen::MatrixXd hessian_matrix(const FormEvaluator& phi, const OrientedPlane& xi);

struct AscentResult {
  OrientedPlane plane;
  CriticalityReport report;
  int iterations = 0;
  bool converged = false;  // max |G| < grad_tol
  std::vector<double> history;  // phi after each accepted step
};

AscentResult ascend(const AltForm& phi, const OrientedPlane& start, const SearchParams& params, Sense sense);
AscentResult ascend(const CriticalityTester& tester, const OrientedPlane& start, const SearchParams& params, Sense sense);

struct ComassResult {
  double value = 0.0;
  OrientedPlane plane;
  int trial = -1;
  int converged = 0;
};

ComassResult comass_search(const AltForm& phi, int trials, const SearchParams& params);
double comass_estimate(const AltForm& phi, int trials, const SearchParams& params);

struct CatalogEntry {
  int trial = 0;
  std::uint64_t seed = 0;
  OrientedPlane plane;
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct Cluster {
  double center = 0.0;
  int count = 0;
};

struct CriticalCatalog {
  std::vector<CatalogEntry> entries;  // every trial, in trial order
  std::vector<OrientedPlane> planes;  // converged planes only
  std::vector<double> values;
  std::vector<double> residuals;
  std::vector<Cluster> clusters;      // of |value|, ascending
  SearchParams params;
  int trials = 0;
  double cluster_tol = 1e-4;
};

CriticalCatalog critical_spectrum(const AltForm& phi, int trials, const SearchParams& params, double cluster_tol = 1e-4);

// 1-d single linkage: a new cluster starts at every gap larger than tol.
std::vector<Cluster> cluster_values(std::vector<double> values, double tol);

nlohmann::json catalog_to_json(const CriticalCatalog& c);
std::string catalog_to_csv(const CriticalCatalog& c);
nlohmann::json frame_to_json(const Eigen::MatrixXd& f);
Eigen::MatrixXd frame_from_json(const nlohmann::json& j);

// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace calib
