#include "cli.hpp"

#include "entrywise/csv.hpp"
#include "entrywise/diagnostics.hpp"
#include "entrywise/ensembles.hpp"
#include "entrywise/estimators.hpp"
#include "entrywise/experiments.hpp"
#include "entrywise/grid.hpp"
#include "entrywise/runner.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace entrywise::cli {

namespace {

struct ModelFlags {
  std::size_t n = 0;
  double sigma = 1.0;
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
  double p_factor = 10.0;
  std::size_t r = 5;
  bool no_self_loops = false;
  std::uint64_t membership_seed = kDefaultMembershipSeed;
  std::uint64_t seed = 1;
};

void add_z2_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--n", f.n, "Dimension")->required()->check(CLI::PositiveNumber);
  app->add_option("--sigma", f.sigma, "Noise level")->capture_default_str()->check(CLI::NonNegativeNumber);
}

void add_sbm_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--n", f.n, "Number of vertices")->required()->check(CLI::PositiveNumber);
  app->add_option("--a", f.a, "Within-block rate: p = a log n / n")->required();
  app->add_option("--b", f.b, "Across-block rate: q = b log n / n")->required();
  app->add_flag("--no-self-loops", f.no_self_loops, "Exclude the diagonal");
  app->add_option("--membership-seed", f.membership_seed, "Seed of the planted label permutation")
      ->capture_default_str();
}

void add_nmc_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--n", f.n, "Rows and columns of M*")->required()->check(CLI::PositiveNumber);
  app->add_option("--r", f.r, "Rank")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--sigma", f.sigma, "Noise standard deviation")->capture_default_str()->check(CLI::NonNegativeNumber);
  app->add_option("--p", f.p, "Observation probability (overrides --p-factor)")->check(CLI::Range(0.0, 1.0));
  app->add_option("--p-factor", f.p_factor, "p = factor log n / n, capped at 1")->capture_default_str();
}

void add_seed(CLI::App* app, ModelFlags& f) {
  app->add_option("--seed", f.seed, "Master seed")->capture_default_str();
}

Z2Sync z2_spec(const ModelFlags& f) {
  Z2Sync s = make_z2(f.n, f.sigma);
  validate(s);
  return s;
}

Sbm2 sbm2_spec(const ModelFlags& f) {
  Sbm2 s = make_sbm2(f.n, f.a, f.b, f.membership_seed);
  s.self_loops = !f.no_self_loops;
  validate(s);
  return s;
}

Sbm3 sbm3_spec(const ModelFlags& f) {
  Sbm3 s = make_sbm3(f.n, f.a, f.b, f.membership_seed);
  s.self_loops = !f.no_self_loops;
  validate(s);
  return s;
}

Nmc nmc_spec(const ModelFlags& f) {
  const double n = static_cast<double>(f.n);
  const double p = f.p > 0.0 ? f.p : std::min(1.0, f.p_factor * std::log(n) / n);
  auto signal = std::make_shared<const RectMatrix>(
      planted_lowrank(f.n, f.r, planted_scale(f.n), trial_seed(f.seed, 0, 0, 0)));
  Nmc s = make_nmc(signal, p, f.sigma, f.r);
  validate(s);
  return s;
}

// Noise stream for the single instance a command works on; matches trial 0
// of cell 0 in the experiment drivers.
Seed noise_seed(const ModelFlags& f) { return trial_seed(f.seed, 0, 0, 1); }

void print(std::ostream& out, const std::string& key, double value) { out << key << '=' << format_double(value) << '\n'; }
void print(std::ostream& out, const std::string& key, const std::string& value) { out << key << '=' << value << '\n'; }

void print_values(std::ostream& out, const std::string& key, const Vector& v) {
  out << key << '=';
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_double(v[i]);
  out << '\n';
}

void print_label_estimate(std::ostream& out, const LabelEstimate& est, std::span<const int> truth) {
  const double rate = misclassification(est.labels, truth);
  print(out, "exact_recovery", rate == 0.0 ? "1" : "0");
  print(out, "misclassification", rate);
  print(out, "margin", est.margin.value_or(std::nan("")));
  print(out, "source_eigen_index", static_cast<double>(est.source_eigen_index));
  print_values(out, "eigenvalues", est.eigenvalues);
  print(out, "ambiguous", est.ambiguous ? "1" : "0");
}

void print_tail(std::ostream& out, const TailAudit& t) {
  out << t.name << " pass=" << (t.pass ? 1 : 0) << " bound=" << format_double(t.bound)
      << " empirical=" << format_double(t.empirical) << " std_error=" << format_double(t.std_error)
      << " samples=" << t.samples << " (" << t.parameters << ")\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entrywise eigenvector perturbation: sampling, spectral estimators, diagnostics, experiments",
               "entrywise"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Report timings on stderr");
  EigenOptions eig;
  app.add_option("--tol", eig.tol, "Eigensolver relative residual tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iter", eig.max_iter, "Eigensolver matrix-vector product cap (0: 5 n)")->capture_default_str();

  ModelFlags flags;
  std::string output;
  std::function<void()> action;

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw one instance and write it as a text entry list");
  sample_cmd->require_subcommand(1);
  auto add_output = [&](CLI::App* c) { c->add_option("-o,--output", output, "Output file (default: stdout)"); };
  auto write_sample = [&](const EnsembleSpec& spec) {
    const Sample s = sample(spec, noise_seed(flags));
    if (output.empty()) {
      write_instance(out, spec, s);
    } else {
      std::ofstream f(output);
      if (!f) throw std::runtime_error("cannot open " + output);
      write_instance(f, spec, s);
    }
  };
  {
    auto* c = sample_cmd->add_subcommand("z2", "Spiked Wigner Y = x x^T + sigma W");
    add_z2_flags(c, flags), add_seed(c, flags), add_output(c);
    c->callback([&] { action = [&] { write_sample(z2_spec(flags)); }; });
    c = sample_cmd->add_subcommand("sbm", "Two-block stochastic block model");
    add_sbm_flags(c, flags), add_seed(c, flags), add_output(c);
    c->callback([&] { action = [&] { write_sample(sbm2_spec(flags)); }; });
    c = sample_cmd->add_subcommand("sbm3", "Three-block stochastic block model");
    add_sbm_flags(c, flags), add_seed(c, flags), add_output(c);
    c->callback([&] { action = [&] { write_sample(sbm3_spec(flags)); }; });
    c = sample_cmd->add_subcommand("nmc", "Noisy matrix completion with a planted low-rank M*");
    add_nmc_flags(c, flags), add_seed(c, flags), add_output(c);
    c->callback([&] { action = [&] { write_sample(nmc_spec(flags)); }; });
  }

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Run a spectral estimator on one sampled instance");
  estimate_cmd->require_subcommand(1);
  bool centered = false;
  {
    auto* c = estimate_cmd->add_subcommand("z2", "Signs of the leading eigenvector of Y");
    add_z2_flags(c, flags), add_seed(c, flags);
    c->callback([&] {
      action = [&] {
        const Z2Sync spec = z2_spec(flags);
        const SymmetricMatrix y = sample_z2(spec, noise_seed(flags));
        print(out, "model", describe(spec));
        print_label_estimate(out, z2_estimate(y, spec.x, eig), spec.x);
      };
    });
    c = estimate_cmd->add_subcommand("sbm", "Signs of the second eigenvector of A");
    add_sbm_flags(c, flags), add_seed(c, flags);
    c->add_flag("--centered", centered, "Use the leading eigenvector of A - (d/n) 1 1^T");
    c->callback([&] {
      action = [&] {
        const Sbm2 spec = sbm2_spec(flags);
        const SymmetricMatrix a = sample_sbm2(spec, noise_seed(flags));
        print(out, "model", describe(spec));
        print_label_estimate(out, sbm_estimate(a, spec.labels, SbmOptions{centered}, eig), spec.labels);
      };
    });
    c = estimate_cmd->add_subcommand("sbm3", "Embedding by eigenvectors 2 and 3 with per-node separation");
    add_sbm_flags(c, flags), add_seed(c, flags);
    c->callback([&] {
      action = [&] {
        const Sbm3 spec = sbm3_spec(flags);
        const SymmetricMatrix a = sample_sbm3(spec, noise_seed(flags));
        const Sbm3Embedding emb = sbm3_embed(a, spec, eig);
        std::size_t positive = 0;
        for (Eigen::Index i = 0; i < emb.separation.size(); ++i) positive += emb.separation[i] > 0.0;
        print(out, "model", describe(spec));
        print(out, "positive_fraction", static_cast<double>(positive) / static_cast<double>(spec.n));
        print(out, "min_separation", emb.separation.minCoeff());
        print_values(out, "eigenvalues", emb.eigenvalues);
      };
    });
    c = estimate_cmd->add_subcommand("nmc", "Rank-r truncated SVD of the rescaled observations");
    add_nmc_flags(c, flags), add_seed(c, flags);
    c->callback([&] {
      action = [&] {
        const Nmc spec = nmc_spec(flags);
        const RectMatrix m = sample_nmc(spec, noise_seed(flags));
        const CompletionEstimate est = nmc_estimate(m, spec.rank, eig);
        double max_err = 0.0, frob_sq = 0.0;
        const Matrix diff = est.reconstruction() - spec.signal->dense();
        max_err = diff.cwiseAbs().maxCoeff();
        frob_sq = diff.squaredNorm();
        print(out, "model", describe(spec));
        print(out, "observed", static_cast<double>(m.triplets().size()));
        print_values(out, "singular_values", est.values);
        print(out, "rank_deficient", est.rank_deficient ? "1" : "0");
        print(out, "max_err", max_err);
        print(out, "rmse", std::sqrt(frob_sq) / static_cast<double>(flags.n));
      };
    });
  }

  // diagnose
  auto* diagnose_cmd = app.add_subcommand("diagnose", "Entrywise error diagnostics on one sampled instance");
  diagnose_cmd->require_subcommand(1);
  std::string model = "sbm";
  std::size_t loo_index = 0;
  std::size_t probes = 0;
  {
    auto* c = diagnose_cmd->add_subcommand("perturbation", "Errors of u against u* and A u*/lambda*");
    c->add_option("--model", model, "z2 or sbm")->check(CLI::IsMember({"z2", "sbm"}))->capture_default_str();
    c->add_option("--n", flags.n, "Dimension")->required()->check(CLI::PositiveNumber);
    c->add_option("--sigma", flags.sigma, "z2 noise level")->capture_default_str();
    c->add_option("--a", flags.a, "sbm within-block rate");
    c->add_option("--b", flags.b, "sbm across-block rate");
    add_seed(c, flags);
    c->callback([&] {
      action = [&] {
        EnsembleSpec spec = model == "z2" ? EnsembleSpec{z2_spec(flags)} : EnsembleSpec{sbm2_spec(flags)};
        const PopulationModel pop = population(spec, eig);
        const SymmetricMatrix a = sample(spec, noise_seed(flags)).symmetric();
        const SpectralSubspace sub = top_eigenpairs(a, pop.subspace.rank(), pop.subspace.window_start, eig);
        const PerturbationReport r = perturbation_report(sub, pop, a);
        print(out, "model", describe(spec));
        print(out, "err_raw", r.err_raw);
        print(out, "err_linearization_vs_truth", r.err_linearization_vs_truth);
        print(out, "err_residual", r.err_residual);
        print(out, "subspace_err_truth", r.subspace_err_truth);
        print(out, "subspace_err_linearization", r.subspace_err_linearization);
        print(out, "u_two_to_inf", r.u_two_to_inf);
        print(out, "margin", r.margin);
      };
    });
    c = diagnose_cmd->add_subcommand("nmc", "Entrywise and Frobenius errors with the two ratio statistics");
    add_nmc_flags(c, flags), add_seed(c, flags);
    c->callback([&] {
      action = [&] {
        const Nmc spec = nmc_spec(flags);
        const PopulationModel pop = population(spec, eig);
        const RectMatrix m = sample_nmc(spec, noise_seed(flags));
        const NmcReport r = nmc_report(nmc_estimate(m, spec.rank, eig), *spec.signal, pop);
        print(out, "model", describe(spec));
        print(out, "max_err", r.max_err);
        print(out, "frob_err", r.frob_err);
        print(out, "vec_max_err", r.vec_max_err);
        print(out, "vec_frob_err", r.vec_frob_err);
        print(out, "eta", r.eta);
        print(out, "r_mat", r.r_mat);
        print(out, "r_vec", r.r_vec);
        print(out, "degenerate", r.degenerate ? "1" : "0");
      };
    });
    c = diagnose_cmd->add_subcommand("loo", "Leave-one-out distances (dense, n <= 512)");
    add_sbm_flags(c, flags), add_seed(c, flags);
    auto* m_opt = c->add_option("--m", loo_index, "Index to remove (zero-based)");
    c->add_option("--probes", probes, "Remove this many seeded random indices instead")->excludes(m_opt);
    c->callback([&] {
      action = [&] {
        const Sbm2 spec = sbm2_spec(flags);
        const PopulationModel pop = population(spec);
        const SymmetricMatrix a = sample_sbm2(spec, noise_seed(flags));
        std::vector<std::size_t> indices{loo_index};
        if (probes > 0) {
          indices.clear();
          Rng rng(trial_seed(flags.seed, 0, 0, 2));
          for (std::size_t k = 0; k < probes; ++k) indices.push_back(rng.next_u64() % spec.n);
        }
        print(out, "model", describe(spec));
        for (std::size_t m : indices) {
          const LeaveOneOutProbe p = leave_one_out_probe(a, pop, m);
          out << "m=" << m << " dist_u=" << format_double(p.dist_u)
              << " subspace_dist=" << format_double(p.subspace_dist) << " u_inf=" << format_double(p.u_inf)
              << " dist_over_u_inf=" << format_double(p.dist_u / p.u_inf) << '\n';
        }
      };
    });
  }

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "Assumption checks and Monte Carlo tail-bound audits");
  audit_cmd->require_subcommand(1);
  std::string preset_name = "all";
  double c1 = 0.0;
  {
    auto* c = audit_cmd->add_subcommand("assumptions", "Incoherence and scaling conditions for z2 or sbm");
    c->add_option("--model", model, "z2 or sbm")->check(CLI::IsMember({"z2", "sbm"}))->capture_default_str();
    c->add_option("--n", flags.n, "Dimension")->required()->check(CLI::PositiveNumber);
    c->add_option("--sigma", flags.sigma, "z2 noise level")->capture_default_str();
    c->add_option("--a", flags.a, "sbm within-block rate");
    c->add_option("--b", flags.b, "sbm across-block rate");
    c->add_option("--c1", c1, "sbm spectral concentration constant (default 2 sqrt((a+b)/2))");
    c->callback([&] {
      action = [&] {
        EnsembleSpec spec = model == "z2" ? EnsembleSpec{z2_spec(flags)} : EnsembleSpec{sbm2_spec(flags)};
        const AssumptionAudit r = audit(spec, c1 > 0.0 ? std::optional<double>(c1) : std::nullopt);
        print(out, "model", describe(spec));
        print(out, "gamma", r.gamma);
        print(out, "phi_gamma", r.phi(r.gamma));
        print(out, "incoherence_lhs", r.incoherence_lhs);
        print(out, "incoherence_rhs", r.incoherence_rhs);
        print(out, "incoherence_ok", r.incoherence_ok ? "1" : "0");
        print(out, "scaling_value", r.scaling_value);
        print(out, "scaling_ok", r.scaling_ok ? "1" : "0");
      };
    });
    c = audit_cmd->add_subcommand("tails", "Monte Carlo frequency against the analytic tail bound");
    std::vector<std::string> choices = tail_audit_presets();
    choices.push_back("all");
    c->add_option("--preset", preset_name, "Shipped configuration or 'all'")
        ->check(CLI::IsMember(choices))
        ->capture_default_str();
    add_seed(c, flags);
    c->callback([&] {
      action = [&] {
        const auto names = preset_name == "all" ? tail_audit_presets() : std::vector<std::string>{preset_name};
        bool all_pass = true;
        for (const auto& name : names) {
          const TailAudit t = run_tail_audit_preset(name, flags.seed);
          print_tail(out, t);
          all_pass = all_pass && t.pass;
        }
        out << (all_pass ? "PASS" : "FAIL") << '\n';
      };
    });
  }

  // experiment
  auto* experiment_cmd = app.add_subcommand("experiment", "Seeded Monte Carlo grids written as CSV");
  experiment_cmd->require_subcommand(1);
  bool paper_scale = false, desk_scale = false;
  std::string config;
  std::uint64_t exp_seed = 0;
  std::size_t threads = 0, trials = 0;
  for (const char* kind : {"z2-phase", "sbm-phase", "sbm-miscl", "sbm-linearization", "nmc-ratios", "audits"}) {
    auto* c = experiment_cmd->add_subcommand(kind, std::string("Run the ") + kind + " grid");
    auto* paper = c->add_flag("--paper-scale", paper_scale, "Full-size grid (slow)");
    auto* desk = c->add_flag("--desk-scale", desk_scale, "Coarser grid with fewer trials (default)");
    paper->excludes(desk);
    c->add_option("--config", config, "JSON grid file (overrides the presets)")
        ->check(CLI::ExistingFile)
        ->excludes(paper)
        ->excludes(desk);
    c->add_option("--seed", exp_seed, "Master seed (overrides the grid's)");
    c->add_option("--trials", trials, "Trials per cell (overrides the grid's)")->check(CLI::PositiveNumber);
    c->add_option("--threads", threads, "Worker threads (default: ENTRYWISE_THREADS or all cores)");
    c->add_option("-o,--output", output, "Output directory (overrides the grid's)");
    c->callback([&, kind] {
      action = [&, kind] {
        const ExperimentKind k = parse_experiment_kind(kind);
        GridSpec grid;
        if (!config.empty()) {
          std::ifstream f(config);
          std::stringstream text;
          text << f.rdbuf();
          grid = grid_from_json(text.str());
          if (grid.kind != k)
            throw std::invalid_argument("config is for " + to_string(grid.kind) + ", not " + kind);
        } else {
          grid = preset(k, paper_scale ? Scale::kPaper : Scale::kDesk);
        }
        if (exp_seed != 0) grid.master_seed = exp_seed;
        if (trials != 0) grid.trials = trials;
        if (!output.empty()) grid.output = output;
        const auto start = std::chrono::steady_clock::now();
        const auto files = run_experiment(grid, grid.output, RunOptions{threads, eig});
        for (const auto& f : files) out << "wrote " << f.string() << '\n';
        if (verbose) {
          const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
          err << kind << ": " << grid.cells() << " cells x " << grid.trials << " trials in " << elapsed.count()
              << " s\n";
        }
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    if (action) action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace entrywise::cli
