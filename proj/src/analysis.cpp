#include "emd/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "emd/distribution.hpp"
#include "emd/io.hpp"
#include "emd/oracle.hpp"
#include "parallel.hpp"

namespace emd {
namespace {

void check_grid(const SweepGrid& grid) {
  if (grid.lambdas.empty() || grid.iter_caps.empty() || grid.precisions.empty())
    raise(errc::bad_params, "sweep grid must be non-empty");
  for (size_t i = 0; i < grid.lambdas.size(); ++i) {
    if (!(grid.lambdas[i] > 0.0)) raise(errc::bad_params, "lambdas must be positive");
    if (i > 0 && !(grid.lambdas[i] > grid.lambdas[i - 1]))
      raise(errc::bad_params, "lambdas must be strictly increasing");
  }
}

}  // namespace

double cosine_angle(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    raise(errc::shape_mismatch, "vectors must have equal nonzero length");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (double x : a) ma += x;
  for (double x : b) mb += x;
  ma /= n;
  mb /= n;

  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - ma, y = b[i] - mb;
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0)
    raise(errc::zero_vector, "gradient is zero after projecting out the mean");
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  c = std::min(1.0, std::max(-1.0, c));
  return std::acos(c) * 180.0 / std::numbers::pi;
}

ExactReference exact_reference_from_matrix(const std::vector<double>& p,
                                           const std::vector<double>& q, const CostMatrix& m) {
  ExactReference ref;
  ref.value = exact_emd(p, q, m).value;

  // Projected central differences of the oracle value along the zero-sum
  // directions (delta_jk - 1/N); 2N extra solves.
  const int n = m.n();
  const double h = 1e-6;
  ref.grad.resize(n);
  for (int k = 0; k < n; ++k) {
    std::vector<double> hi = p, lo = p;
    for (int j = 0; j < n; ++j) {
      const double dir = (j == k ? 1.0 : 0.0) - 1.0 / n;
      hi[j] += h * dir;
      lo[j] -= h * dir;
      hi[j] = std::max(hi[j], 0.0);
      lo[j] = std::max(lo[j], 0.0);
    }
    // Rescale so the mass matches q again after the clamp.
    auto rescale = [&](std::vector<double>& v) {
      double s = 0.0, target = 0.0;
      for (double x : v) s += x;
      for (double x : q) target += x;
      for (double& x : v) x *= target / s;
    };
    rescale(hi);
    rescale(lo);
    ref.grad[k] = (exact_emd(hi, q, m).value - exact_emd(lo, q, m).value) / (2.0 * h);
  }
  return ref;
}

std::vector<SweepRow> run_lambda_sweep(const std::vector<double>& p, const std::vector<double>& q,
                                       const CostMatrix& m, const SweepGrid& grid,
                                       const ExactReference& exact, int jobs) {
  check_grid(grid);
  const size_t cells =
      grid.precisions.size() * grid.iter_caps.size() * grid.lambdas.size();
  std::vector<SweepRow> rows(cells);

  detail::parallel_for(jobs, cells, [&](size_t idx) {
    const size_t nl = grid.lambdas.size();
    const size_t nc = grid.iter_caps.size();
    SweepRow& row = rows[idx];
    row.precision = grid.precisions[idx / (nc * nl)];
    row.iter_cap = grid.iter_caps[(idx / nl) % nc];
    row.lambda = grid.lambdas[idx % nl];
    row.exact = exact.value;
    try {
      SinkhornConfig cfg;
      cfg.lambda = row.lambda;
      cfg.max_iter = row.iter_cap;
      cfg.precision = row.precision;
      const SinkhornResult r = sinkhorn(p, q, m, cfg);
      row.sd = r.distance;
      row.converged = r.converged;
      row.marginal_err = r.marginal_error;
      row.degenerate = r.numerically_degenerate;
      row.ratio = exact.value > 0.0 ? r.distance / exact.value
                                    : std::numeric_limits<double>::quiet_NaN();
      bool grad_finite = true;
      for (double g : r.subgradient) grad_finite = grad_finite && std::isfinite(g);
      if (!grad_finite) {
        row.angle_deg = std::numeric_limits<double>::quiet_NaN();
      } else {
        try {
          row.angle_deg = cosine_angle(r.subgradient, exact.grad);
        } catch (const Error&) {
          row.angle_deg = std::numeric_limits<double>::quiet_NaN();
        }
      }
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    }
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "lambda,precision,iter_cap,sd,exact,ratio,angle_deg,converged,marginal_err\n";
  for (const auto& r : rows) {
    out << format_sig17(r.lambda) << ',' << to_string(r.precision) << ',' << r.iter_cap << ','
        << format_sig17(r.sd) << ',' << format_sig17(r.exact) << ',' << format_sig17(r.ratio)
        << ',' << format_sig17(r.angle_deg) << ',' << (r.converged ? 1 : 0) << ','
        << format_sig17(r.marginal_err) << '\n';
  }
}

GradientProfiles gradient_profiles(const std::vector<double>& p, const std::vector<double>& q,
                                   const ChainMetric& metric, const std::vector<double>& lambdas,
                                   double eps) {
  const int n = metric.n_bins();
  if (static_cast<int>(p.size()) != n || static_cast<int>(q.size()) != n)
    raise(errc::length_mismatch, "profiles need distributions matching the metric");

  GradientProfiles out;
  out.lambdas = lambdas;
  out.mse.resize(n);
  for (int i = 0; i < n; ++i) out.mse[i] = 2.0 * (p[i] - q[i]);
  out.emd1 = chain_emd_grad(p, q, metric, 1.0);
  out.emd2 = chain_emd_grad(p, q, metric, 2.0);

  const CostMatrix m = to_cost_matrix(metric);
  std::vector<double> sp = p, sq = q;
  if (eps > 0.0) {
    sp = epsilon_smooth(Distribution(p), eps).values();
    sq = epsilon_smooth(Distribution(q), eps).values();
  }
  for (double lambda : lambdas) {
    SinkhornConfig cfg;
    cfg.lambda = lambda;
    cfg.max_iter = 10000;
    out.sd.push_back(sinkhorn(sp, sq, m, cfg).subgradient);
  }
  return out;
}

void write_profiles_csv(std::ostream& out, const GradientProfiles& profiles) {
  out << "bin,mse,emd1,emd2";
  for (double l : profiles.lambdas) out << ",sd_lambda_" << format_shortest(l);
  out << '\n';
  for (size_t i = 0; i < profiles.mse.size(); ++i) {
    out << i << ',' << format_sig17(profiles.mse[i]) << ',' << format_sig17(profiles.emd1[i])
        << ',' << format_sig17(profiles.emd2[i]);
    for (const auto& col : profiles.sd) out << ',' << format_sig17(col[i]);
    out << '\n';
  }
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) raise(errc::bad_params, "need 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double step = (std::log(hi) - std::log(lo)) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = std::exp(std::log(lo) + step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace emd
