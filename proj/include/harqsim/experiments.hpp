#ifndef HARQSIM_EXPERIMENTS_HPP
#define HARQSIM_EXPERIMENTS_HPP

#include <string>

#include "harqsim/config.hpp"

namespace harqsim {

/// Parallel index loop with a deterministic result layout (workers pull an
/// atomic counter; callers write into per-index slots).
void parallel_for_indexed(int count, int threads, const std::function<void(int)>& fn);

/// Analytical (GA, IPLA) and simulated (exact, dominant-subset) throughput
/// curves for every (radius, exponent) combination; one table per
/// combination plus a manifest. Returns the written file names.
std::vector<std::string> run_dlt_curves(const RunConfig& cfg, const std::string& out_dir);

/// Theoretical-vs-empirical quantile pairs for each configured attempt count
/// and approximation, one table.
std::vector<std::string> run_qq(const RunConfig& cfg, const std::string& out_dir);

/// Policy/user-count sweep of the system simulation: per-trial rows plus an
/// aggregated table with confidence intervals.
std::vector<std::string> run_simulate(const RunConfig& cfg, const std::string& out_dir,
                                      const std::string& trace_file = "");

struct RateOptResult {
    std::string approx;
    double r_star = 0.0;
    double s_at_r_star = 0.0;
    unsigned flags = 0;
};

/// Single rate decision for the configured geometry and approximation.
RateOptResult rate_opt_result(const RunConfig& cfg);

/// Optional artifacts of `rate-opt` (underlying curve dump + manifest).
std::vector<std::string> run_rate_opt(const RunConfig& cfg, const std::string& out_dir);

/// Single-link SINR parameterization used by the curve/qq/rate-opt commands
/// (|w0|^2 = 1 convention).
SinrModel single_link_model(const RunConfig& cfg, double radius_m, double alpha_override = -1.0);

} // namespace harqsim

#endif
