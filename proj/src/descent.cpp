#include "emd/descent.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "parallel.hpp"

namespace emd {
namespace {

struct LossOps {
  std::function<double(const std::vector<double>&)> err1;  // rho=1 distance, the reported error
  std::function<double(const std::vector<double>&)> loss;  // the descended EMD^rho
  std::function<std::vector<double>(const std::vector<double>&)> grad;
};

bool finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// rate * gradient with its sum pinned to zero. Two correction passes leave a
// residual of order sqrt(N) * eps * |step|, which keeps the total mass within
// 1e-6 even through the huge-rate opening epochs.
void build_step(double rate, const std::vector<double>& g, std::vector<double>& step) {
  const size_t n = g.size();
  step.resize(n);
  for (size_t i = 0; i < n; ++i) step[i] = rate * g[i];
  for (int pass = 0; pass < 2; ++pass) {
    double mean = 0.0;
    for (double x : step) mean += x;
    mean /= static_cast<double>(n);
    for (double& x : step) x -= mean;
  }
}

DescentTrace drive(const std::vector<double>& p0, const DescentConfig& cfg, const LossOps& ops) {
  if (!(cfg.initial_rate > 0.0)) raise(errc::bad_params, "initial_rate must be positive");
  if (!(cfg.backtrack_factor > 1.0)) raise(errc::bad_params, "backtrack_factor must exceed 1");
  if (cfg.epochs < 1) raise(errc::bad_params, "epochs must be >= 1");

  DescentTrace trace;
  trace.records.reserve(cfg.epochs + 1);
  std::vector<double> p = p0;
  double rate = cfg.initial_rate;
  const double factor = cfg.backtrack_factor;

  double gate = std::numeric_limits<double>::quiet_NaN();
  auto record = [&](double err) {
    double mass = 0.0, lo = p[0];
    for (double x : p) {
      mass += x;
      if (x < lo) lo = x;
    }
    trace.records.push_back({err, rate, mass, lo, gate});
  };

  if (!finite(p)) {
    trace.non_finite = true;
    record(std::numeric_limits<double>::quiet_NaN());
    return trace;
  }
  gate = ops.loss(p);
  if (!std::isfinite(gate)) {
    trace.non_finite = true;
    record(ops.err1(p));
    return trace;
  }
  record(ops.err1(p));

  // rho = 1 yields a subgradient, for which a line search is meaningless: the
  // step is always applied and only the rate adapts (grow on improvement,
  // shrink otherwise). The smooth rho > 1 losses get a genuine backtracking
  // search instead: largest ladder step that does not increase the loss,
  // rejected steps are undone.
  const bool subgradient_mode = cfg.loss == DescentLoss::emd_rho1;

  std::vector<double> step(p.size()), cand(p.size()), best(p.size());
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const std::vector<double> g = ops.grad(p);

    // Single steps p - r * g, all taken from the epoch's starting point.
    auto candidate_loss = [&](double r) {
      build_step(r, g, step);
      for (size_t i = 0; i < p.size(); ++i) cand[i] = p[i] - step[i];
      if (!finite(cand)) return std::numeric_limits<double>::infinity();
      return ops.loss(cand);
    };

    if (subgradient_mode) {
      const double ce = candidate_loss(rate);
      if (std::isfinite(ce)) {
        p.swap(cand);
        if (ce < gate) {
          if (rate * factor <= cfg.rate_ceiling) {
            rate *= factor;
          } else {
            rate = cfg.rate_ceiling;
            ++trace.ceiling_hits;
          }
        } else {
          rate = std::max(rate / factor, cfg.rate_floor);
          if (rate == cfg.rate_floor) ++trace.stalls;
        }
        gate = ce;
      } else {
        // Candidate left the finite range: skip the step, shrink the rate.
        rate = std::max(rate / factor, cfg.rate_floor);
        if (rate == cfg.rate_floor) ++trace.stalls;
      }
    } else {
      double ce = candidate_loss(rate);
      if (std::isfinite(ce) && ce <= gate) {
        // Climb to the largest ladder rate whose single step still does not
        // increase the loss relative to the epoch start.
        best.swap(cand);
        double best_loss = ce;
        while (rate * factor <= cfg.rate_ceiling) {
          const double up = candidate_loss(rate * factor);
          if (!std::isfinite(up) || up > gate) break;
          rate *= factor;
          best.swap(cand);
          best_loss = up;
        }
        p.swap(best);
        gate = best_loss;
      } else {
        bool accepted = false;
        while (rate > cfg.rate_floor) {
          rate = std::max(rate / factor, cfg.rate_floor);
          ce = candidate_loss(rate);
          if (std::isfinite(ce) && ce <= gate) {
            p.swap(cand);
            gate = ce;
            accepted = true;
            break;
          }
        }
        if (!accepted) ++trace.stalls;  // wedged: no ladder step is acceptable
      }
    }

    record(ops.err1(p));
    if (!std::isfinite(trace.records.back().emd_error)) {
      trace.non_finite = true;
      break;
    }
  }
  return trace;
}

}  // namespace

DescentTrace run_descent(const std::vector<double>& p0, const std::vector<double>& q,
                         const ChainMetric& metric, const DescentConfig& cfg) {
  const double rho = cfg.loss == DescentLoss::emd_rho1 ? 1.0 : 2.0;
  LossOps ops{
      [&](const std::vector<double>& p) { return detail::chain_emd_drifting(p, q, metric, 1.0); },
      [&, rho](const std::vector<double>& p) { return detail::chain_emd_drifting(p, q, metric, rho); },
      [&, rho](const std::vector<double>& p) {
        return detail::chain_emd_grad_drifting(p, q, metric, rho);
      },
  };
  return drive(p0, cfg, ops);
}

DescentTrace run_descent(const std::vector<double>& p0, const std::vector<double>& q,
                         const MetricTree& tree, const DescentConfig& cfg) {
  const double rho = cfg.loss == DescentLoss::emd_rho1 ? 1.0 : 2.0;
  LossOps ops{
      [&](const std::vector<double>& p) { return detail::tree_emd_drifting(tree, p, q, 1.0); },
      [&, rho](const std::vector<double>& p) { return detail::tree_emd_drifting(tree, p, q, rho); },
      [&, rho](const std::vector<double>& p) {
        return detail::tree_emd_grad_drifting(tree, p, q, rho);
      },
  };
  return drive(p0, cfg, ops);
}

BatchResult run_batch(const RandomInstanceSpec& spec, const DescentConfig& cfg, int runs,
                      int jobs) {
  if (runs < 1) raise(errc::bad_params, "runs must be >= 1");
  const ChainMetric metric = ChainMetric::unit(spec.n_bins);

  BatchResult out;
  out.runs.resize(runs);
  detail::parallel_for(jobs, static_cast<size_t>(runs), [&](size_t r) {
    RandomInstanceSpec s = spec;
    s.seed = spec.seed + r;
    const auto [p, q] = generate_pair(s);
    out.runs[r] = run_descent(p.values(), q.values(), metric, cfg);
  });

  size_t included = 0;
  out.mean.assign(cfg.epochs + 1, DescentRecord{});
  for (int r = 0; r < runs; ++r) {
    if (out.runs[r].non_finite) {
      out.excluded_seeds.push_back(spec.seed + r);
      continue;
    }
    ++included;
    for (size_t t = 0; t < out.mean.size(); ++t) {
      out.mean[t].emd_error += out.runs[r].records[t].emd_error;
      out.mean[t].learning_rate += out.runs[r].records[t].learning_rate;
      out.mean[t].total_mass += out.runs[r].records[t].total_mass;
      out.mean[t].min_entry += out.runs[r].records[t].min_entry;
      out.mean[t].loss_value += out.runs[r].records[t].loss_value;
    }
  }
  if (included > 0) {
    for (auto& rec : out.mean) {
      rec.emd_error /= included;
      rec.learning_rate /= included;
      rec.total_mass /= included;
      rec.min_entry /= included;
      rec.loss_value /= included;
    }
  }
  return out;
}

}  // namespace emd
