#include "calibkit/grassmann.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "calibkit/linalg.hpp"

namespace calib {

namespace {

// Below this first-cousin size the value no longer resolves the Armijo
// decrease, so value ascent hands over to residual minimization.
constexpr double kPolishSwitch = 1e-6;
constexpr double kPinvCutoff = 1e-6;
constexpr double kMaxStep = 1.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

struct Point {
  OrientedPlane xi;
  double f = 0.0;
  Eigen::MatrixXd g;
};

Point at(const FormEvaluator& ev, OrientedPlane xi) {
  Point pt;
  Eigen::MatrixXd w;
  pt.f = ev.value_and_gradient(xi.frame(), w);
  pt.g = xi.normal_frame().transpose() * w;
  pt.xi = std::move(xi);
  return pt;
}

Eigen::VectorXd flat(const Eigen::MatrixXd& m) { return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()); }

Eigen::MatrixXd unflat(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

}  // namespace

void SearchParams::validate() const {
  if (max_iters <= 0) throw std::invalid_argument("max_iters must be positive");
  if (!(step_init > 0.0)) throw std::invalid_argument("step_init must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw std::invalid_argument("armijo_c must lie in (0, 1)");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("shrink must lie in (0, 1)");
  if (!(grad_tol > 0.0 && grad_tol < 1e-6)) throw std::invalid_argument("grad_tol must lie in (0, 1e-6)");
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  if (threads < 0) throw std::invalid_argument("threads must be non-negative");
}

nlohmann::json params_to_json(const SearchParams& p) {
  return {{"max_iters", p.max_iters}, {"step_init", p.step_init}, {"armijo_c", p.armijo_c}, {"shrink", p.shrink},
          {"grad_tol", p.grad_tol},   {"trials", p.trials},       {"master_seed", p.master_seed}};
}

SearchParams params_from_json(const nlohmann::json& j, SearchParams base) {
  if (j.contains("max_iters")) base.max_iters = j.at("max_iters").get<int>();
  if (j.contains("step_init")) base.step_init = j.at("step_init").get<double>();
  if (j.contains("armijo_c")) base.armijo_c = j.at("armijo_c").get<double>();
  if (j.contains("shrink")) base.shrink = j.at("shrink").get<double>();
  if (j.contains("grad_tol")) base.grad_tol = j.at("grad_tol").get<double>();
  if (j.contains("trials")) base.trials = j.at("trials").get<int>();
  if (j.contains("master_seed")) base.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("threads")) base.threads = j.at("threads").get<int>();
  return base;
}

std::string sense_name(Sense s) {
  switch (s) {
    case Sense::maximize: return "maximize";
    case Sense::minimize: return "minimize";
    case Sense::critical: return "critical";
  }
  return "critical";
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) { return splitmix64(master_seed ^ splitmix64(trial + 1)); }

OrientedPlane random_plane(int n, int p, std::uint64_t seed) {
  if (p > n || p < 0 || n <= 0) throw DimensionError("random_plane needs 0 <= p <= n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(n, p);
  // Column-major fill, fixed order.
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = gauss(rng);
  }
  return OrientedPlane::orthonormalized(a);
}

Eigen::MatrixXd riemann_gradient(const AltForm& phi, const OrientedPlane& xi) { return cousin_matrix(FormEvaluator(phi), xi); }

OrientedPlane retract(const OrientedPlane& xi, const Eigen::MatrixXd& x, double t) {
  if (x.size() == 0 || t == 0.0) return xi;
  return OrientedPlane::orthonormalized(xi.frame() + t * xi.normal_frame() * x);
}

Eigen::MatrixXd hessian_matrix(const FormEvaluator& phi, const OrientedPlane& xi) {
  const int p = xi.p(), q = xi.dim() - xi.p();
  const double phi_o = phi.value(xi);
  const std::vector<double> dc = double_cousins(phi, xi);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(q * p, q * p);
  for (int a = 0; a < p; ++a) {
    for (int s = 0; s < q; ++s) {
      const int row = s + a * q;
      h(row, row) = -phi_o;
      for (int b = 0; b < p; ++b) {
        if (b == a) continue;
        for (int t = 0; t < q; ++t) h(row, t + b * q) = dc[static_cast<std::size_t>(((a * p + b) * q + s) * q + t)];
      }
    }
  }
  return h;
}

AscentResult ascend(const AltForm& phi, const OrientedPlane& start, const SearchParams& params, Sense sense) {
  return ascend(CriticalityTester(phi), start, params, sense);
}

AscentResult ascend(const CriticalityTester& tester, const OrientedPlane& start, const SearchParams& params, Sense sense) {
  const FormEvaluator& ev = tester.evaluator();
  if (start.dim() != ev.dim() || start.p() != ev.degree()) throw DimensionError("start plane does not match the form");
  const double sign = sense == Sense::minimize ? -1.0 : 1.0;
  AscentResult res;
  Point cur = at(ev, start);
  bool polishing = sense == Sense::critical;
  double t_try = params.step_init;
  int it = 0;
  for (; it < params.max_iters; ++it) {
    const double gmax = max_abs(cur.g);
    if (gmax < params.grad_tol) {
      res.converged = true;
      break;
    }
    if (!polishing && gmax < kPolishSwitch) polishing = true;

    if (!polishing) {
      // Armijo ascent on sign * phi along sign * G.
      const double slope = cur.g.squaredNorm();
      double t = t_try;
      bool accepted = false;
      while (t > 1e-14) {
        Point cand = at(ev, retract(cur.xi, sign * cur.g, t));
        if (sign * (cand.f - cur.f) >= params.armijo_c * t * slope) {
          cur = std::move(cand);
          accepted = true;
          break;
        }
        t *= params.shrink;
      }
      if (!accepted) {
        polishing = true;
        continue;
      }
      t_try = std::min(2.0 * t, 1.0);
      res.history.push_back(cur.f);
      continue;
    }

    // Minimize h = |G|^2 / 2. Its gradient is L(G); the Gauss-Newton step
    // solves L X = -G in the least-squares sense.
    const Eigen::Index q = cur.g.rows(), p = cur.g.cols();
    const Eigen::MatrixXd hess = hessian_matrix(ev, cur.xi);
    const Eigen::VectorXd g = flat(cur.g);
    const Eigen::VectorXd lg = hess * g;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(hess, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sinv = svd.singularValues();
    const double smax = sinv.size() ? sinv(0) : 0.0;
    for (Eigen::Index i = 0; i < sinv.size(); ++i) sinv(i) = sinv(i) > kPinvCutoff * smax ? 1.0 / sinv(i) : 0.0;
    Eigen::VectorXd x = -(svd.matrixV() * (sinv.asDiagonal() * (svd.matrixU().transpose() * g)));
    double dh = lg.dot(x);
    if (!(dh < 0.0)) {
      x = -lg;
      dh = -lg.squaredNorm();
    }
    if (!(dh < 0.0)) break;
    if (x.norm() > kMaxStep) {
      const double s = kMaxStep / x.norm();
      x *= s;
      dh *= s;
    }
    const double h0 = 0.5 * cur.g.squaredNorm();
    const Eigen::MatrixXd xm = unflat(x, q, p);
    double t = 1.0;
    bool accepted = false;
    while (t > 1e-12) {
      Point cand = at(ev, retract(cur.xi, xm, t));
      if (0.5 * cand.g.squaredNorm() <= h0 + params.armijo_c * t * dh) {
        cur = std::move(cand);
        accepted = true;
        break;
      }
      t *= params.shrink;
    }
    if (!accepted) break;
    res.history.push_back(cur.f);
  }
  res.iterations = it;
  if (!res.converged) res.converged = max_abs(cur.g) < params.grad_tol;
  res.report = tester.check(cur.xi, std::max(kDefaultCriticalTol, params.grad_tol));
  res.plane = std::move(cur.xi);
  return res;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

ComassResult comass_search(const AltForm& phi, int trials, const SearchParams& params) {
  params.validate();
  const CriticalityTester tester(phi);
  std::vector<AscentResult> runs(static_cast<std::size_t>(trials));
  parallel_for(trials, params.threads, [&](int t) {
    const OrientedPlane start = random_plane(phi.dim(), phi.degree(), trial_seed(params.master_seed, static_cast<std::uint64_t>(t)));
    runs[static_cast<std::size_t>(t)] = ascend(tester, start, params, Sense::maximize);
  });
  ComassResult out;
  for (int t = 0; t < trials; ++t) {
    const AscentResult& r = runs[static_cast<std::size_t>(t)];
    if (r.converged) ++out.converged;
    if (out.trial < 0 || r.report.value > out.value) {
      out.value = r.report.value;
      out.plane = r.plane;
      out.trial = t;
    }
  }
  return out;
}

double comass_estimate(const AltForm& phi, int trials, const SearchParams& params) { return comass_search(phi, trials, params).value; }

std::vector<Cluster> cluster_values(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<Cluster> out;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && values[i] - values[i - 1] > tol) {
      out.back().center = sum / out.back().count;
      sum = 0.0;
    }
    if (i == 0 || values[i] - values[i - 1] > tol) out.push_back({0.0, 0});
    sum += values[i];
    ++out.back().count;
  }
  if (!out.empty()) out.back().center = sum / out.back().count;
  return out;
}

CriticalCatalog critical_spectrum(const AltForm& phi, int trials, const SearchParams& params, double cluster_tol) {
  params.validate();
  if (!(cluster_tol > 0.0)) throw std::invalid_argument("cluster_tol must be positive");
  const CriticalityTester tester(phi);
  CriticalCatalog cat;
  cat.params = params;
  cat.trials = trials;
  cat.cluster_tol = cluster_tol;
  cat.entries.resize(static_cast<std::size_t>(trials));
  parallel_for(trials, params.threads, [&](int t) {
    CatalogEntry& e = cat.entries[static_cast<std::size_t>(t)];
    e.trial = t;
    e.seed = trial_seed(params.master_seed, static_cast<std::uint64_t>(t));
    AscentResult r = ascend(tester, random_plane(phi.dim(), phi.degree(), e.seed), params, Sense::critical);
    e.plane = std::move(r.plane);
    e.value = r.report.value;
    e.residual = r.report.residual_cousin;
    e.iterations = r.iterations;
    e.converged = r.converged && r.report.residual_cousin < 10.0 * params.grad_tol;
  });
  std::vector<double> mags;
  for (const CatalogEntry& e : cat.entries) {
    if (!e.converged) continue;
    cat.planes.push_back(e.plane);
    cat.values.push_back(e.value);
    cat.residuals.push_back(e.residual);
    mags.push_back(std::abs(e.value));
  }
  cat.clusters = cluster_values(std::move(mags), cluster_tol);
  return cat;
}

nlohmann::json frame_to_json(const Eigen::MatrixXd& f) {
  nlohmann::json cols = nlohmann::json::array();
  for (Eigen::Index j = 0; j < f.cols(); ++j) {
    nlohmann::json col = nlohmann::json::array();
    for (Eigen::Index i = 0; i < f.rows(); ++i) col.push_back(f(i, j));
    cols.push_back(std::move(col));
  }
  return cols;
}

Eigen::MatrixXd frame_from_json(const nlohmann::json& j) {
  const nlohmann::json& cols = j.is_object() ? j.at("frame") : j;
  if (!cols.is_array() || cols.empty()) throw std::invalid_argument("frame must be a non-empty array of columns");
  const auto p = static_cast<Eigen::Index>(cols.size());
  const auto n = static_cast<Eigen::Index>(cols.at(0).size());
  Eigen::MatrixXd f(n, p);
  for (Eigen::Index c = 0; c < p; ++c) {
    const auto& col = cols.at(static_cast<std::size_t>(c));
    if (!col.is_array() || static_cast<Eigen::Index>(col.size()) != n) throw std::invalid_argument("frame columns must have equal length");
    for (Eigen::Index r = 0; r < n; ++r) f(r, c) = col.at(static_cast<std::size_t>(r)).get<double>();
  }
  return f;
}

nlohmann::json catalog_to_json(const CriticalCatalog& c) {
  nlohmann::json planes = nlohmann::json::array();
  for (const CatalogEntry& e : c.entries) {
    if (!e.converged) continue;
    planes.push_back({{"trial", e.trial}, {"seed", e.seed}, {"value", e.value}, {"residual", e.residual}, {"frame", frame_to_json(e.plane.frame())}});
  }
  nlohmann::json clusters = nlohmann::json::array();
  for (const Cluster& cl : c.clusters) clusters.push_back({{"center", cl.center}, {"count", cl.count}});
  return {{"params", params_to_json(c.params)},
          {"trials", c.trials},
          {"cluster_tol", c.cluster_tol},
          {"converged", static_cast<int>(c.planes.size())},
          {"clusters", clusters},
          {"planes", planes}};
}

std::string catalog_to_csv(const CriticalCatalog& c) {
  std::ostringstream os;
  os.precision(17);
  os << "trial,seed,value,residual,iterations,converged\n";
  for (const CatalogEntry& e : c.entries) {
    os << e.trial << ',' << e.seed << ',' << e.value << ',' << e.residual << ',' << e.iterations << ',' << (e.converged ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace calib
