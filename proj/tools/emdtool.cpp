// emdtool: closed-form EMD on chains and trees, an exact min-cost-flow oracle,
// a precision-parametric Sinkhorn-Knopp solver, and the sweep/descent drivers.
// Machine-readable results go to stdout, diagnostics to stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emd/analysis.hpp"
#include "emd/chain.hpp"
#include "emd/descent.hpp"
#include "emd/distribution.hpp"
#include "emd/io.hpp"
#include "emd/oracle.hpp"
#include "emd/rng.hpp"
#include "emd/sinkhorn.hpp"
#include "emd/tree.hpp"

namespace {

// Exit code 2 signals numerical degeneracy under --strict.
struct StrictDegeneracy : std::runtime_error {
  StrictDegeneracy() : std::runtime_error("numerically degenerate result under --strict") {}
};

emd::Error with_file(const std::string& path, const emd::Error& e) {
  return emd::Error(e.code(), path + ": " + e.raw());
}

// Distributions are l1-normalized at the CLI boundary; the library kernels
// themselves require already-normalized inputs.
emd::Distribution load_normalized(const std::string& path) {
  try {
    return emd::normalize_l1(emd::load_distribution_file(path));
  } catch (const emd::Error& e) {
    throw with_file(path, e);
  }
}

emd::MetricTree load_tree_checked(const std::string& path, bool allow_zero_cost) {
  try {
    return emd::load_tree(emd::read_text_file(path), allow_zero_cost);
  } catch (const emd::Error& e) {
    throw with_file(path, e);
  }
}

emd::ChainMetric load_chain_checked(const std::string& path) {
  try {
    return emd::load_chain_metric_file(path);
  } catch (const emd::Error& e) {
    throw with_file(path, e);
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw emd::Error(emd::errc::parse_error, "cannot write '" + path + "'");
  return out;
}

// Shared metric flags: exactly one of --tree / --chain / --matrix, or none for
// a unit-cost chain over the distribution length.
struct MetricFlags {
  std::string tree_path, chain_path, matrix_path;
  bool allow_zero_cost = false;

  void add_to(CLI::App* cmd, bool with_matrix = true) {
    auto* t = cmd->add_option("--tree", tree_path, "tree metric file (child parent cost)");
    auto* c = cmd->add_option("--chain", chain_path, "chain metric file (one cost per line)");
    t->excludes(c);
    c->excludes(t);
    if (with_matrix) {
      auto* m = cmd->add_option("--matrix", matrix_path, "dense cost matrix CSV");
      m->excludes(t)->excludes(c);
      t->excludes(m);
      c->excludes(m);
    }
    cmd->add_flag("--allow-zero-cost", allow_zero_cost, "permit zero-cost tree edges");
  }
};

void print_value(double v) { std::cout << emd::format_shortest(v) << '\n'; }

void print_vector(const std::vector<double>& v) {
  for (double x : v) std::cout << emd::format_shortest(x) << '\n';
}

int run_check(int cases, uint64_t seed) {
  int matched = 0;
  int failed = 0;
  for (int i = 0; i < cases; ++i) {
    emd::Xoshiro256pp rng(seed + static_cast<uint64_t>(i) * 7919);
    const bool tree_case = i % 2 == 1;
    double closed = 0.0, oracle = 0.0;
    if (!tree_case) {
      const int n = 2 + static_cast<int>(rng.below(15));
      std::vector<double> costs(n - 1);
      for (auto& c : costs) c = rng.uniform(0.1, 2.0);
      const emd::ChainMetric metric{costs};
      const auto [p, q] =
          emd::generate_pair({n, emd::Setting::easy, seed ^ (0x9e37u + i)});
      closed = emd::chain_emd(p.values(), q.values(), metric, 1.0);
      oracle = emd::exact_emd(p.values(), q.values(), emd::to_cost_matrix(metric)).value;
    } else {
      const int leaves = 2 + static_cast<int>(rng.below(11));
      const int depth = 2 + static_cast<int>(rng.below(4));
      const auto tree = emd::generate_random_tree(leaves, depth, {0.1, 2.0}, seed + i);
      const auto [p, q] =
          emd::generate_pair({leaves, emd::Setting::easy, seed ^ (0x1234u + i)});
      closed = emd::tree_emd(tree, p.values(), q.values(), 1.0);
      oracle = emd::exact_emd(p.values(), q.values(), emd::tree_to_cost_matrix(tree)).value;
    }
    if (std::abs(closed - oracle) <= 1e-9) {
      ++matched;
    } else {
      ++failed;
      std::cerr << "case " << i << ": closed form " << emd::format_shortest(closed)
                << " vs oracle " << emd::format_shortest(oracle) << '\n';
    }
  }
  std::cout << matched << '/' << cases << " oracle matches\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"earth mover's distances on chain- and tree-connected spaces"};
  app.require_subcommand(1);

  try {
    // ---- dist / grad ----------------------------------------------------
    for (const bool grad_mode : {false, true}) {
      auto* cmd = app.add_subcommand(grad_mode ? "grad" : "dist",
                                     grad_mode ? "mass-preserving gradient of EMD^rho"
                                               : "closed-form EMD^rho distance");
      auto pp = std::make_shared<std::string>();
      auto qq = std::make_shared<std::string>();
      auto flags = std::make_shared<MetricFlags>();
      auto r = std::make_shared<double>(1.0);
      cmd->add_option("--p", *pp, "source distribution file")->required();
      cmd->add_option("--q", *qq, "target distribution file")->required();
      cmd->add_option("--rho", *r, "relaxation exponent (>= 1)")->capture_default_str();
      flags->add_to(cmd, false);
      cmd->footer(grad_mode
                      ? "Example: emdtool grad --tree h.tree --p p.txt --q q.txt --rho 2"
                      : "Example: emdtool dist --tree h.tree --p p.txt --q q.txt --rho 2");
      cmd->callback([pp, qq, flags, r, grad_mode] {
        const auto p = load_normalized(*pp);
        const auto q = load_normalized(*qq);
        if (!flags->tree_path.empty()) {
          const auto tree = load_tree_checked(flags->tree_path, flags->allow_zero_cost);
          if (grad_mode)
            print_vector(emd::tree_emd_grad(tree, p.values(), q.values(), *r));
          else
            print_value(emd::tree_emd(tree, p.values(), q.values(), *r));
        } else {
          const auto metric = flags->chain_path.empty()
                                  ? emd::ChainMetric::unit(p.size())
                                  : load_chain_checked(flags->chain_path);
          if (grad_mode)
            print_vector(emd::chain_emd_grad(p.values(), q.values(), metric, *r));
          else
            print_value(emd::chain_emd(p.values(), q.values(), metric, *r));
        }
      });
    }

    // ---- hessian ---------------------------------------------------------
    {
      auto* cmd = app.add_subcommand("hessian", "Hessian of the rho=2 chain distance (CSV)");
      auto chain_path = std::make_shared<std::string>();
      auto n = std::make_shared<int>(0);
      cmd->add_option("--chain", *chain_path, "chain metric file; unit costs when omitted");
      cmd->add_option("--n", *n, "bin count (required without --chain)");
      cmd->footer("Example: emdtool hessian --n 4");
      cmd->callback([chain_path, n] {
        if (chain_path->empty() && *n < 2)
          throw emd::Error(emd::errc::bad_params, "--n must be >= 2 when --chain is omitted");
        emd::ChainMetric metric = chain_path->empty()
                                      ? emd::ChainMetric::unit(*n)
                                      : load_chain_checked(*chain_path);
        emd::write_matrix_csv(std::cout,
                              emd::chain_emd2_hessian(metric, metric.n_bins()));
      });
    }

    // ---- oracle ----------------------------------------------------------
    {
      auto* cmd = app.add_subcommand("oracle", "exact EMD via min-cost flow");
      auto pp = std::make_shared<std::string>();
      auto qq = std::make_shared<std::string>();
      auto flags = std::make_shared<MetricFlags>();
      auto plan_path = std::make_shared<std::string>();
      auto cap = std::make_shared<int>(256);
      cmd->add_option("--p", *pp)->required();
      cmd->add_option("--q", *qq)->required();
      flags->add_to(cmd);
      cmd->add_option("--plan", *plan_path, "write the optimal plan as CSV");
      cmd->add_option("--cap", *cap, "size cap")->capture_default_str();
      cmd->footer("Example: emdtool oracle --p p.txt --q q.txt --matrix m.csv");
      cmd->callback([pp, qq, flags, plan_path, cap] {
        const auto p = load_normalized(*pp);
        const auto q = load_normalized(*qq);
        std::optional<emd::CostMatrix> m;
        if (!flags->tree_path.empty())
          m = emd::tree_to_cost_matrix(load_tree_checked(flags->tree_path, flags->allow_zero_cost));
        else if (!flags->chain_path.empty())
          m = emd::to_cost_matrix(load_chain_checked(flags->chain_path));
        else if (!flags->matrix_path.empty())
          m = emd::load_cost_matrix_file(flags->matrix_path);
        else
          m = emd::to_cost_matrix(emd::ChainMetric::unit(p.size()));
        const auto result = emd::exact_emd(p.values(), q.values(), *m, *cap);
        if (!plan_path->empty()) {
          auto out = open_output(*plan_path);
          emd::write_matrix_csv(out, result.plan.flows);
        }
        print_value(result.value);
      });
    }

    // ---- sinkhorn ----------------------------------------------------------
    {
      auto* cmd = app.add_subcommand("sinkhorn", "Sinkhorn-Knopp distance and gradient");
      auto pp = std::make_shared<std::string>();
      auto qq = std::make_shared<std::string>();
      auto flags = std::make_shared<MetricFlags>();
      auto lambda = std::make_shared<double>(1.0);
      auto max_iter = std::make_shared<int>(1000);
      auto tol = std::make_shared<double>(1e-9);
      auto precision = std::make_shared<std::string>("f64");
      auto eps = std::make_shared<double>(0.0);
      auto strict = std::make_shared<bool>(false);
      auto grad_out = std::make_shared<std::string>();
      cmd->add_option("--p", *pp)->required();
      cmd->add_option("--q", *qq)->required();
      flags->add_to(cmd);
      cmd->add_option("--lambda", *lambda, "regularization factor")->required();
      cmd->add_option("--max-iter", *max_iter)->capture_default_str();
      cmd->add_option("--tol", *tol, "relative sup-norm change of u")->capture_default_str();
      cmd->add_option("--precision", *precision, "f32 or f64")->capture_default_str();
      cmd->add_option("--eps", *eps, "epsilon smoothing before the solve");
      cmd->add_option("--grad-out", *grad_out, "write the subgradient, one value per line");
      cmd->add_flag("--strict", *strict, "exit 2 on numerical degeneracy");
      cmd->footer("Example: emdtool sinkhorn --p p.txt --q q.txt --chain m.txt --lambda 10");
      cmd->callback([pp, qq, flags, lambda, max_iter, tol, precision, eps, strict, grad_out] {
        auto p = load_normalized(*pp);
        auto q = load_normalized(*qq);
        if (*eps > 0.0) {
          p = emd::epsilon_smooth(p, *eps);
          q = emd::epsilon_smooth(q, *eps);
        }
        std::optional<emd::CostMatrix> m;
        if (!flags->tree_path.empty())
          m = emd::tree_to_cost_matrix(load_tree_checked(flags->tree_path, flags->allow_zero_cost));
        else if (!flags->chain_path.empty())
          m = emd::to_cost_matrix(load_chain_checked(flags->chain_path));
        else if (!flags->matrix_path.empty())
          m = emd::load_cost_matrix_file(flags->matrix_path);
        else
          m = emd::to_cost_matrix(emd::ChainMetric::unit(p.size()));
        emd::SinkhornConfig cfg;
        cfg.lambda = *lambda;
        cfg.max_iter = *max_iter;
        cfg.tol = *tol;
        cfg.precision = emd::precision_from_string(*precision);
        const auto r = emd::sinkhorn(p.values(), q.values(), *m, cfg);
        if (!grad_out->empty()) {
          auto out = open_output(*grad_out);
          for (double g : r.subgradient) out << emd::format_shortest(g) << '\n';
        }
        std::cout << "distance,iterations,converged,marginal_error\n"
                  << emd::format_sig17(r.distance) << ',' << r.iterations << ','
                  << (r.converged ? 1 : 0) << ',' << emd::format_sig17(r.marginal_error)
                  << '\n';
        if (r.numerically_degenerate) {
          std::cerr << "warning: numerically degenerate result\n";
          if (*strict) throw StrictDegeneracy();
        }
      });
    }

    // ---- sweep -------------------------------------------------------------
    {
      auto* cmd = app.add_subcommand("sweep", "lambda/precision/iteration stability sweep (CSV)");
      auto pp = std::make_shared<std::string>();
      auto qq = std::make_shared<std::string>();
      auto flags = std::make_shared<MetricFlags>();
      auto lo = std::make_shared<double>(0.1);
      auto hi = std::make_shared<double>(100.0);
      auto steps = std::make_shared<int>(40);
      auto caps = std::make_shared<std::vector<int>>(std::vector<int>{10000});
      auto precisions = std::make_shared<std::vector<std::string>>(
          std::vector<std::string>{"f64", "f32"});
      auto eps = std::make_shared<double>(0.0);
      auto out_path = std::make_shared<std::string>();
      auto jobs = std::make_shared<int>(1);
      auto strict = std::make_shared<bool>(false);
      cmd->add_option("--p", *pp)->required();
      cmd->add_option("--q", *qq)->required();
      flags->add_to(cmd);
      cmd->add_option("--lambda-min", *lo)->capture_default_str();
      cmd->add_option("--lambda-max", *hi)->capture_default_str();
      cmd->add_option("--lambda-steps", *steps)->capture_default_str();
      cmd->add_option("--iter-caps", *caps, "comma-separated caps")->delimiter(',');
      cmd->add_option("--precisions", *precisions, "subset of f32,f64")->delimiter(',');
      cmd->add_option("--eps", *eps, "epsilon smoothing before the sweep");
      cmd->add_option("--out", *out_path, "output CSV path (stdout when omitted)");
      cmd->add_option("--jobs", *jobs, "parallel cells")->capture_default_str();
      cmd->add_flag("--strict", *strict, "exit 2 if any cell is degenerate");
      cmd->footer("Example: emdtool sweep --p p.txt --q q.txt --tree h.tree --out sweep.csv");
      cmd->callback([pp, qq, flags, lo, hi, steps, caps, precisions, eps, out_path, jobs,
                     strict] {
        auto p = load_normalized(*pp);
        auto q = load_normalized(*qq);
        if (*eps > 0.0) {
          p = emd::epsilon_smooth(p, *eps);
          q = emd::epsilon_smooth(q, *eps);
        }
        std::optional<emd::CostMatrix> m;
        emd::ExactReference ref;
        // Closed-form reference when the metric is chain- or tree-induced;
        // finite differences of the oracle otherwise.
        if (!flags->tree_path.empty()) {
          const auto tree = load_tree_checked(flags->tree_path, flags->allow_zero_cost);
          m = emd::tree_to_cost_matrix(tree);
          ref.value = emd::exact_emd(p.values(), q.values(), *m).value;
          ref.grad = emd::tree_emd_grad(tree, p.values(), q.values(), 1.0);
        } else if (!flags->matrix_path.empty()) {
          m = emd::load_cost_matrix_file(flags->matrix_path);
          ref = emd::exact_reference_from_matrix(p.values(), q.values(), *m);
        } else {
          const auto metric = flags->chain_path.empty()
                                  ? emd::ChainMetric::unit(p.size())
                                  : load_chain_checked(flags->chain_path);
          m = emd::to_cost_matrix(metric);
          ref.value = emd::exact_emd(p.values(), q.values(), *m).value;
          ref.grad = emd::chain_emd_grad(p.values(), q.values(), metric, 1.0);
        }
        emd::SweepGrid grid;
        grid.lambdas = emd::log_spaced(*lo, *hi, *steps);
        grid.iter_caps = *caps;
        for (const auto& s : *precisions) grid.precisions.push_back(emd::precision_from_string(s));
        const auto rows = emd::run_lambda_sweep(p.values(), q.values(), *m, grid, ref, *jobs);
        if (out_path->empty()) {
          emd::write_sweep_csv(std::cout, rows);
        } else {
          auto out = open_output(*out_path);
          emd::write_sweep_csv(out, rows);
        }
        bool any_degenerate = false;
        for (const auto& r : rows) any_degenerate = any_degenerate || r.degenerate || r.failed;
        if (any_degenerate) {
          std::cerr << "warning: degenerate cells in sweep\n";
          if (*strict) throw StrictDegeneracy();
        }
      });
    }

    // ---- profiles ------------------------------------------------------------
    {
      auto* cmd = app.add_subcommand("profiles", "per-bin gradient columns for MSE/EMD/EMD2/SD");
      auto pp = std::make_shared<std::string>();
      auto qq = std::make_shared<std::string>();
      auto chain_path = std::make_shared<std::string>();
      auto lambdas = std::make_shared<std::vector<double>>(std::vector<double>{0.5, 1.0, 10.0});
      auto eps = std::make_shared<double>(0.0);
      auto out_path = std::make_shared<std::string>();
      cmd->add_option("--p", *pp)->required();
      cmd->add_option("--q", *qq)->required();
      cmd->add_option("--chain", *chain_path, "chain metric file; unit costs when omitted");
      cmd->add_option("--lambdas", *lambdas, "Sinkhorn lambda columns")->delimiter(',');
      cmd->add_option("--eps", *eps, "epsilon smoothing for the Sinkhorn columns");
      cmd->add_option("--out", *out_path, "output CSV path (stdout when omitted)");
      cmd->footer("Example: emdtool profiles --p p.txt --q q.txt --lambdas 0.5,1,10");
      cmd->callback([pp, qq, chain_path, lambdas, eps, out_path] {
        const auto p = load_normalized(*pp);
        const auto q = load_normalized(*qq);
        const auto metric = chain_path->empty() ? emd::ChainMetric::unit(p.size())
                                                : load_chain_checked(*chain_path);
        const auto prof = emd::gradient_profiles(p.values(), q.values(), metric, *lambdas, *eps);
        if (out_path->empty()) {
          emd::write_profiles_csv(std::cout, prof);
        } else {
          auto out = open_output(*out_path);
          emd::write_profiles_csv(out, prof);
        }
      });
    }

    // ---- descent -------------------------------------------------------------
    {
      auto* cmd = app.add_subcommand("descent", "toy gradient-descent transport experiment");
      auto setting = std::make_shared<std::string>("easy");
      auto n = std::make_shared<int>(64);
      auto loss = std::make_shared<std::string>("emd2");
      auto epochs = std::make_shared<int>(2000);
      auto runs = std::make_shared<int>(64);
      auto seed = std::make_shared<uint64_t>(0);
      auto rate = std::make_shared<double>(1048576.0);
      auto factor = std::make_shared<double>(1.4142135623730951);
      auto out_path = std::make_shared<std::string>();
      auto run_dir = std::make_shared<std::string>();
      auto jobs = std::make_shared<int>(1);
      cmd->add_option("--setting", *setting, "easy or hard")->capture_default_str();
      cmd->add_option("--n", *n, "bins")->capture_default_str();
      cmd->add_option("--loss", *loss, "emd1 or emd2")->capture_default_str();
      cmd->add_option("--epochs", *epochs)->capture_default_str();
      cmd->add_option("--runs", *runs)->capture_default_str();
      cmd->add_option("--seed", *seed)->capture_default_str();
      cmd->add_option("--initial-rate", *rate)->capture_default_str();
      cmd->add_option("--factor", *factor, "line-search scaling")->capture_default_str();
      cmd->add_option("--out", *out_path, "aggregated CSV path (stdout when omitted)");
      cmd->add_option("--run-dir", *run_dir, "directory for per-run CSVs");
      cmd->add_option("--jobs", *jobs)->capture_default_str();
      cmd->footer("Example: emdtool descent --setting hard --loss emd1 --runs 64");
      cmd->callback([setting, n, loss, epochs, runs, seed, rate, factor, out_path, run_dir,
                     jobs] {
        emd::RandomInstanceSpec spec;
        spec.n_bins = *n;
        spec.seed = *seed;
        if (*setting == "easy")
          spec.setting = emd::Setting::easy;
        else if (*setting == "hard")
          spec.setting = emd::Setting::hard;
        else
          throw emd::Error(emd::errc::bad_params, "--setting must be easy or hard");
        emd::DescentConfig cfg;
        cfg.epochs = *epochs;
        cfg.initial_rate = *rate;
        cfg.backtrack_factor = *factor;
        if (*loss == "emd1")
          cfg.loss = emd::DescentLoss::emd_rho1;
        else if (*loss == "emd2")
          cfg.loss = emd::DescentLoss::emd_rho2;
        else
          throw emd::Error(emd::errc::bad_params, "--loss must be emd1 or emd2");

        const auto batch = emd::run_batch(spec, cfg, *runs, *jobs);
        auto write_mean = [&](std::ostream& out) {
          out << "epoch,mean_error,mean_rate,mean_mass\n";
          for (size_t t = 0; t < batch.mean.size(); ++t)
            out << t << ',' << emd::format_sig17(batch.mean[t].emd_error) << ','
                << emd::format_sig17(batch.mean[t].learning_rate) << ','
                << emd::format_sig17(batch.mean[t].total_mass) << '\n';
        };
        if (out_path->empty()) {
          write_mean(std::cout);
        } else {
          auto out = open_output(*out_path);
          write_mean(out);
        }
        if (!run_dir->empty()) {
          std::filesystem::create_directories(*run_dir);
          for (size_t r = 0; r < batch.runs.size(); ++r) {
            auto out = open_output(*run_dir + "/run_" + std::to_string(*seed + r) + ".csv");
            out << "epoch,error,rate,mass,min_entry,loss\n";
            const auto& recs = batch.runs[r].records;
            for (size_t t = 0; t < recs.size(); ++t)
              out << t << ',' << emd::format_sig17(recs[t].emd_error) << ','
                  << emd::format_sig17(recs[t].learning_rate) << ','
                  << emd::format_sig17(recs[t].total_mass) << ','
                  << emd::format_sig17(recs[t].min_entry) << ','
                  << emd::format_sig17(recs[t].loss_value) << '\n';
          }
        }
        for (uint64_t s : batch.excluded_seeds)
          std::cerr << "warning: run with seed " << s << " went non-finite and was excluded\n";
      });
    }

    // ---- gen-tree --------------------------------------------------------------
    {
      auto* cmd = app.add_subcommand("gen-tree", "deterministic random metric tree");
      auto leaves = std::make_shared<int>(32);
      auto depth = std::make_shared<int>(8);
      auto cost_min = std::make_shared<double>(1.0);
      auto cost_max = std::make_shared<double>(1.0);
      auto seed = std::make_shared<uint64_t>(0);
      auto out_path = std::make_shared<std::string>();
      cmd->add_option("--leaves", *leaves)->capture_default_str();
      cmd->add_option("--max-depth", *depth)->capture_default_str();
      cmd->add_option("--cost-min", *cost_min)->capture_default_str();
      cmd->add_option("--cost-max", *cost_max)->capture_default_str();
      cmd->add_option("--seed", *seed)->capture_default_str();
      cmd->add_option("--out", *out_path, "tree file path (stdout when omitted)");
      cmd->footer("Example: emdtool gen-tree --leaves 1030 --max-depth 12 --seed 7");
      cmd->callback([leaves, depth, cost_min, cost_max, seed, out_path] {
        const auto tree =
            emd::generate_random_tree(*leaves, *depth, {*cost_min, *cost_max}, *seed);
        if (out_path->empty()) {
          std::cout << emd::save_tree(tree);
        } else {
          auto out = open_output(*out_path);
          out << emd::save_tree(tree);
        }
      });
    }

    // ---- check ----------------------------------------------------------------
    {
      auto* cmd = app.add_subcommand("check", "closed form vs oracle self-test battery");
      auto cases = std::make_shared<int>(200);
      auto seed = std::make_shared<uint64_t>(1);
      auto rc = std::make_shared<int>(0);
      cmd->add_option("--cases", *cases)->capture_default_str();
      cmd->add_option("--seed", *seed)->capture_default_str();
      cmd->footer("Example: emdtool check --cases 200 --seed 1");
      cmd->callback([cases, seed, rc] {
        *rc = run_check(*cases, *seed);
        if (*rc != 0) throw emd::Error(emd::errc::solver_failure, "oracle mismatches found");
      });
    }

    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const StrictDegeneracy&) {
    return 2;
  } catch (const emd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
