#pragma once

#include "entrywise/eigensolver.hpp"
#include "entrywise/grid.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace entrywise {

struct RunOptions {
  // 0 picks default_threads(). Output never depends on this.
  std::size_t threads = 0;
  EigenOptions eigen;
};

// Each driver validates the grid kind, runs every (cell, trial) pair on the
// worker pool and writes one CSV. Trial t of cell c draws its randomness from
// trial_seed(master_seed, c, t, purpose).

// n,sigma,boundary,trials,successes,proportion,status
void run_z2_phase(const GridSpec& grid, std::ostream& csv, const RunOptions& options = {});
// n,a,b,trials,successes,proportion,status
void run_sbm_phase(const GridSpec& grid, std::ostream& csv, const RunOptions& options = {});
// n,a,b,trials,mean_rate,log_mean_rate_over_log_n,theory_exponent,status
void run_sbm_misclassification(const GridSpec& grid, std::ostream& csv, const RunOptions& options = {});
// One row per (cell, trial) with the perturbation report, plus a histogram of
// sqrt(n) u2 (sign-aligned with the planted labels) for trial 0 of cell 0.
void run_sbm_linearization(const GridSpec& grid, std::ostream& report, std::ostream& histogram,
                           const RunOptions& options = {});
// n,p,r,sigma,trials,max_err,frob_err,vec_max_err,vec_frob_err,eta,r_mat,r_vec,degenerate
void run_nmc_ratios(const GridSpec& grid, std::ostream& csv, const RunOptions& options = {});
// audit,parameters,pass,bound,empirical,std_error,samples
void run_audits(const GridSpec& grid, std::ostream& csv, const RunOptions& options = {});

// Dispatches on grid.kind and writes <dir>/<kind>.csv (and
// <dir>/sbm-linearization-histogram.csv). Creates `dir` if needed.
std::vector<std::filesystem::path> run_experiment(const GridSpec& grid, const std::filesystem::path& dir,
                                                  const RunOptions& options = {});

// Empty when an SBM cell is runnable, else a short reason used in the status
// column ("skipped:b<=0", "skipped:a<=b", "skipped:p>1", "skipped:n-odd").
std::string sbm_cell_status(std::size_t n, double a, double b);

// sqrt(n / (2 log n)).
double z2_boundary(double n);

}  // namespace entrywise
