#ifndef HARQSIM_DLT_HPP
#define HARQSIM_DLT_HPP

#include <iosfwd>
#include <vector>

#include "harqsim/cfmath.hpp"

namespace harqsim {

struct SearchConfig {
    double r_max = 12.0;       // bits/s/Hz search ceiling
    double grid_step = 0.1;
    double golden_tol = 1e-3;  // refinement resolution

    void validate() const;
};

namespace decision_flag {
inline constexpr unsigned kHitRateCap = 1u << 0;
inline constexpr unsigned kNonUnimodal = 1u << 1;
inline constexpr unsigned kColdStartFallback = 1u << 2;
}

struct RateDecision {
    double r_star = 0.0;
    double s_at_r_star = 0.0;
    ApproxKind approx = ApproxKind::IPLA;
    double search_resolution = 0.0;
    unsigned flags = 0;
};

struct DltCurve {
    std::vector<double> rates;
    std::vector<double> values;
    int n_max = 0;
    ApproxKind approx = ApproxKind::IPLA;
};

/// P_out(n, R) = F_{gamma(n)}(2^R - 1); 1 for n = 0 when R > 0, 0 for R = 0.
/// The attempt count is spec.attempts.
double outage_probability(const CfSpec& spec, double rate, const QuadratureConfig& q);

/// Delay-limited throughput S(R) = sum_{i=1..n_max} (R/i)[P_out(i-1,R) - P_out(i,R)],
/// one CDF inversion per term. spec.attempts is ignored.
double dlt(const CfSpec& spec, double rate, int n_max, const QuadratureConfig& q);

/// Same quantity through the single-integral form
/// sum_i (R/(i pi)) Int Im{ e^{-jt(2^R-1)} (phi^i - phi^(i-1)) / t } dt;
/// kept as an independent numerical route for cross-checks.
double dlt_integral_form(const CfSpec& spec, double rate, int n_max, const QuadratureConfig& q);

DltCurve dlt_curve(const CfSpec& spec, double r_max, double r_step, int n_max,
                   const QuadratureConfig& q);

/// Coarse grid search over [0, r_max] refined by golden section inside the
/// winning bracket. Flags non-unimodal grids (global grid max still returned)
/// and decisions that touch the rate ceiling.
RateDecision optimize_rate(const CfSpec& spec, int n_max, const QuadratureConfig& q,
                           const SearchConfig& search);

/// Rows "approx,R,S_R,n_max". Header written by the caller.
void append_curve_csv(std::ostream& os, const DltCurve& curve);

} // namespace harqsim

#endif
