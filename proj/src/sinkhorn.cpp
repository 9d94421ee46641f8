#include "emd/sinkhorn.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "emd/errors.hpp"

namespace emd {

const char* to_string(Precision p) { return p == Precision::binary32 ? "f32" : "f64"; }

Precision precision_from_string(const std::string& s) {
  if (s == "f32") return Precision::binary32;
  if (s == "f64") return Precision::binary64;
  raise(errc::bad_params, "precision must be f32 or f64, got '" + s + "'");
}

namespace {

template <typename T>
bool all_finite(const std::vector<T>& v) {
  for (T x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// The whole iteration runs in T scalars, including building K: binary32 mode
// genuinely accumulates in float instead of rounding double results.
template <typename T>
SinkhornResult run(const std::vector<double>& p, const std::vector<double>& q,
                   const CostMatrix& m, const SinkhornConfig& cfg) {
  const int n = m.n();
  const size_t nn = static_cast<size_t>(n) * n;
  const T lam = static_cast<T>(cfg.lambda);

  std::vector<T> kmat(nn), km(nn);  // K = exp(-lambda*M - 1) and K .* M
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const T mij = static_cast<T>(m.at(i, j));
      const T k = std::exp(-lam * mij - T(1));
      kmat[static_cast<size_t>(i) * n + j] = k;
      km[static_cast<size_t>(i) * n + j] = k * mij;
    }
  }

  std::vector<T> tp(n), tq(n);
  for (int i = 0; i < n; ++i) tp[i] = static_cast<T>(p[i]);
  for (int i = 0; i < n; ++i) tq[i] = static_cast<T>(q[i]);

  std::vector<T> u(n, T(1)), ktu(n), ratio(n), kr(n), unew(n);
  auto transpose_apply = [&](const std::vector<T>& x, std::vector<T>& out) {
    std::fill(out.begin(), out.end(), T(0));
    for (int i = 0; i < n; ++i) {
      const T xi = x[i];
      const T* row = &kmat[static_cast<size_t>(i) * n];
      for (int j = 0; j < n; ++j) out[j] += row[j] * xi;
    }
  };

  SinkhornResult res;
  const T tol = static_cast<T>(cfg.tol);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    transpose_apply(u, ktu);                                // K' u
    for (int j = 0; j < n; ++j) ratio[j] = tq[j] / ktu[j];  // q ./ K'u
    for (int i = 0; i < n; ++i) {                           // K (q ./ K'u)
      const T* row = &kmat[static_cast<size_t>(i) * n];
      T s = T(0);
      for (int j = 0; j < n; ++j) s += row[j] * ratio[j];
      kr[i] = s;
    }
    for (int i = 0; i < n; ++i) unew[i] = tp[i] / kr[i];
    res.iterations = it;

    if (!all_finite(ktu) || !all_finite(kr) || !all_finite(unew)) {
      res.numerically_degenerate = true;
      u = unew;  // tainted on purpose; the caller sees the flag
      break;
    }
    T dmax = T(0), umax = T(0);
    for (int i = 0; i < n; ++i) {
      const T d = std::abs(unew[i] - u[i]);
      if (d > dmax) dmax = d;
      const T a = std::abs(unew[i]);
      if (a > umax) umax = a;
    }
    u = unew;
    if (dmax < tol * umax) {
      res.converged = true;
      break;
    }
  }

  transpose_apply(u, ktu);
  std::vector<T> v(n);
  for (int j = 0; j < n; ++j) v[j] = tq[j] / ktu[j];
  if (!all_finite(v)) res.numerically_degenerate = true;
  if (res.numerically_degenerate) res.converged = false;

  T sd = T(0);
  for (int i = 0; i < n; ++i) {
    const T* row = &km[static_cast<size_t>(i) * n];
    T s = T(0);
    for (int j = 0; j < n; ++j) s += row[j] * v[j];
    sd += u[i] * s;
  }
  res.distance = static_cast<double>(sd);

  res.subgradient.resize(n);
  for (int i = 0; i < n; ++i)
    res.subgradient[i] = static_cast<double>(std::log(u[i]) / lam);

  SquareMatrix plan(n);
  for (int i = 0; i < n; ++i) {
    const T* row = &kmat[static_cast<size_t>(i) * n];
    for (int j = 0; j < n; ++j) {
      double t = static_cast<double>(u[i] * row[j] * v[j]);
      if (t < 0.0) {
        t = 0.0;
        ++res.clamped_entries;
      }
      plan.at(i, j) = t;
    }
  }
  res.plan = TransportPlan{std::move(plan)};

  double merr = 0.0;
  {
    const auto rows = res.plan.row_sums();
    const auto cols = res.plan.col_sums();
    for (int i = 0; i < n; ++i) merr = std::max(merr, std::abs(rows[i] - p[i]));
    for (int j = 0; j < n; ++j) merr = std::max(merr, std::abs(cols[j] - q[j]));
  }
  res.marginal_error = merr;
  return res;
}

}  // namespace

SinkhornResult sinkhorn(const std::vector<double>& p, const std::vector<double>& q,
                        const CostMatrix& m, const SinkhornConfig& cfg) {
  if (!(cfg.lambda > 0.0)) raise(errc::bad_params, "lambda must be positive");
  if (cfg.max_iter < 1) raise(errc::bad_params, "max_iter must be >= 1");
  if (!(cfg.tol > 0.0)) raise(errc::bad_params, "tol must be positive");
  if (static_cast<int>(p.size()) != m.n() || static_cast<int>(q.size()) != m.n())
    raise(errc::shape_mismatch, "p, q and the cost matrix must agree in size");
  for (size_t i = 0; i < p.size(); ++i)
    if (!(p[i] > 0.0))
      raise(errc::zero_entry, "p[" + std::to_string(i) + "] <= 0; apply epsilon_smooth first");
  for (size_t i = 0; i < q.size(); ++i)
    if (!(q[i] > 0.0))
      raise(errc::zero_entry, "q[" + std::to_string(i) + "] <= 0; apply epsilon_smooth first");

  return cfg.precision == Precision::binary32 ? run<float>(p, q, m, cfg)
                                              : run<double>(p, q, m, cfg);
}

Distribution epsilon_smooth(const Distribution& d, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) raise(errc::bad_eps, "eps must be positive");
  std::vector<double> out = d.values();
  for (double& v : out) v += eps;
  return normalize_l1(Distribution(std::move(out)));
}

}  // namespace emd
