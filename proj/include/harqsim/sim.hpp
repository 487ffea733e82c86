#ifndef HARQSIM_SIM_HPP
#define HARQSIM_SIM_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "harqsim/geometry.hpp"
#include "harqsim/mac.hpp"

namespace harqsim {

// ---------------------------------------------------------------------------
// small statistics helpers shared by the experiments and their tests
// ---------------------------------------------------------------------------

double mean(std::span<const double> v);
double sample_sd(std::span<const double> v);
/// Two-sided 95% halfwidth, Student-t across trials.
double ci95_halfwidth(std::span<const double> v);
double student_t_975(int dof);

/// One-sample Kolmogorov-Smirnov statistic of `samples` against a CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Same, for already-sorted samples (not modified).
double ks_statistic_sorted(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Linear-interpolation empirical quantile of sorted samples.
double empirical_quantile(std::span<const double> sorted, double p);

// ---------------------------------------------------------------------------
// rate-decision table
// ---------------------------------------------------------------------------

/// Interpolated scheduler backend for the two expected-throughput policies.
///
/// All CDFs involved are scale families: gamma(n) under either approximation
/// equals beta * sum_{i<=n} 1/G_i with G_i ~ Gamma(shape, 1) and
/// beta = s/Lbar resp. s/sigma_Z^2. The table stores Fhat_n on a log-u grid
/// per shape and the induced R*(beta), S*(beta) curves, making one decision
/// a pair of interpolations instead of dozens of numerical inversions.
/// Accuracy against the direct optimizer is covered by tests.
class RateTable : public RateProvider {
public:
    RateTable(int interferer_count, int n_max, double snr_linear, double beta_lo, double beta_hi,
              const QuadratureConfig& q, const SearchConfig& search, int points_per_decade = 32);

    std::pair<double, double> decide(ApproxKind kind, double desired_power,
                                     const CellUser& user) const override;

    /// Scale-free CDF Fhat_n(u) for the given shape (power-tail extrapolated
    /// beyond the tabulated range).
    double cdf(int shape, int n, double u) const;
    /// Decision for a raw scale ratio beta.
    std::pair<double, double> decide_beta(ApproxKind kind, double beta) const;

private:
    struct ShapeTable {
        int shape = 0;
        double u_lo = 0.0, u_hi = 0.0;
        double log_u_lo = 0.0, step = 0.0;
        std::vector<std::vector<double>> f;  // [n-1][grid]
        std::vector<double> tail_mass;       // 1 - F(u_hi) per n
    };
    struct BetaTable {
        double log_b_lo = 0.0, step = 0.0;
        std::vector<double> r_star, s_star;
    };

    const ShapeTable& table_for(int shape) const;
    const BetaTable& beta_for(ApproxKind kind) const;
    void build_shape(ShapeTable& t, int shape, const QuadratureConfig& q);
    void build_beta(BetaTable& b, int shape, double beta_lo, double beta_hi,
                    const SearchConfig& search);
    double dlt_from_table(const ShapeTable& t, double rate, double beta) const;

    int n_max_;
    int pts_per_decade_;
    double snr_linear_;
    ShapeTable ga_, ipla_;
    BetaTable beta_ga_, beta_ipla_;
};

// ---------------------------------------------------------------------------
// experiments
// ---------------------------------------------------------------------------

/// i.i.d. samples of the Chase-combined effective SINR after n attempts with
/// exact per-interferer fading (no distribution approximation); the desired
/// gain is pinned by model.desired_power (the |w0|^2 = 1 convention).
std::vector<double> empirical_effective_sinr(const SinrModel& model, int n_attempts,
                                             std::size_t samples, Rng& rng);

struct QqPoint {
    double p = 0.0;
    double theoretical = 0.0;
    double empirical = 0.0;
};

/// Paired quantiles: theoretical via bisection on the Gil-Pelaez CDF,
/// empirical via order statistics of `samples` (sorted internally).
std::vector<QqPoint> qq_data(std::vector<double> samples, const CfSpec& spec,
                             std::span<const double> probabilities, const QuadratureConfig& q);

struct SimDltCurves {
    std::vector<double> rates;
    std::vector<double> exact, exact_se;
    std::vector<double> dominant, dominant_se;  // strongest-interferer subset
    int dominant_kept = 3;
};

/// Monte Carlo delay-limited throughput over a rate grid, with the
/// dominant-interferer variant computed from the same fading draws so the
/// two curves are pathwise coupled.
SimDltCurves single_link_dlt_sim(const SinrModel& model, std::span<const double> rates,
                                 std::size_t processes, int n_max, int dominant_kept, Rng& rng);

/// Mean delivered rate of repeated fixed-rate HARQ processes (exact draws).
double mc_dlt_at_rate(const SinrModel& model, double rate, std::size_t processes, int n_max,
                      Rng& rng);

// ---------------------------------------------------------------------------
// system-level scenario
// ---------------------------------------------------------------------------

enum class RateEvalMode { Table, Direct };

struct ScenarioConfig {
    CellTopology topology = default_topology();
    int n_users = 1;
    std::vector<double> user_radii_m = {150.0, 200.0, 250.0, 300.0, 400.0};
    double single_user_radius_m = 250.0;
    int n_max = 4;
    double rho_db = 43.0;
    PolicyKind policy = PolicyKind::IplaBased;
    std::uint64_t horizon = 200000;
    int trials = 20;
    std::uint64_t seed = 1;
    double t_c = 1000.0;
    PfUpdateMode pf_mode = PfUpdateMode::PerSlot;
    int isinr_delay = 1;
    double pf_warm_start = 1e-3;
    double fairness_floor = 1e-6;
    RateEvalMode rate_eval = RateEvalMode::Table;
    int table_points_per_decade = 32;
    int threads = 0;  // 0 -> hardware concurrency
    QuadratureConfig quadrature;
    SearchConfig search;

    double snr_linear() const;
    void validate() const;
};

struct MetricsReport {
    double system_dlt = 0.0;
    double fairness = 0.0;
    double system_dlt_ci = 0.0;   // 95% halfwidth across trials
    double fairness_ci = 0.0;
    std::vector<double> per_trial_dlt;
    std::vector<double> per_trial_fairness;
    std::vector<double> per_user_throughput;  // mean across trials, user index
    int trials = 0;
    bool fairness_floored = false;
};

/// Radii for n users: the configured list cycled (n must be a multiple of
/// its length), or the single-user default.
std::vector<double> scenario_radii(const ScenarioConfig& cfg);

/// Run `trials` independent home-cell simulations and aggregate. A cached
/// RateProvider may be supplied to share decision tables across calls;
/// otherwise one is built per call when the policy needs it.
MetricsReport run_scenario(const ScenarioConfig& cfg, const RateProvider* provider = nullptr,
                           const TraceSink& trace = {});

/// Build the rate table matching a scenario (beta range derived from the
/// topology and radii with generous fading margins).
std::shared_ptr<RateTable> build_rate_table(const ScenarioConfig& cfg);

} // namespace harqsim

#endif
