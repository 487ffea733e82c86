#include "harqsim/dlt.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace harqsim {

namespace {

constexpr double kPi = std::numbers::pi;

// Union-bound throughput ceiling: S(R) <= R (1 - F_n(x)) and the event
// {gamma(n) > x} needs at least one attempt above x/n, so
// 1 - F_n(x) <= n P(G_shape < n b / x). Lets the optimizer skip rates whose
// throughput cannot reach 1e-12 without paying for a long quadrature.
bool dlt_negligible(const CfSpec& spec, int n_max, double rate, double x) {
    const double y = static_cast<double>(n_max) * spec.rate_scale() / x;
    if (y >= 0.05) return false;
    const int a = spec.shape();
    const double log_p = a * std::log(y) - std::lgamma(static_cast<double>(a) + 1.0);
    const double bound = rate * n_max * 1.1 * std::exp(log_p);
    return bound < 1e-12;
}

} // namespace

void SearchConfig::validate() const {
    if (!(r_max > 0.0)) throw std::invalid_argument("search: r_max must be > 0");
    if (!(grid_step > 0.0) || grid_step > r_max)
        throw std::invalid_argument("search: grid_step must lie in (0, r_max]");
    if (!(golden_tol > 0.0)) throw std::invalid_argument("search: golden_tol must be > 0");
}

double outage_probability(const CfSpec& spec, double rate, const QuadratureConfig& q) {
    spec.validate();
    if (rate < 0.0) throw std::invalid_argument("outage: rate must be >= 0");
    if (rate == 0.0) return 0.0;
    if (spec.attempts == 0) return 1.0;
    return gil_pelaez_cdf(spec, std::exp2(rate) - 1.0, q);
}

double dlt(const CfSpec& spec, double rate, int n_max, const QuadratureConfig& q) {
    spec.validate();
    if (n_max < 1) throw std::invalid_argument("dlt: n_max must be >= 1");
    if (rate < 0.0) throw std::invalid_argument("dlt: rate must be >= 0");
    if (rate == 0.0) return 0.0;

    const double x = std::exp2(rate) - 1.0;
    if (dlt_negligible(spec, n_max, rate, x)) return 0.0;

    double sum = 0.0;
    double p_prev = 1.0;  // P_out(0, R) = 1
    CfSpec s = spec;
    for (int i = 1; i <= n_max; ++i) {
        s.attempts = i;
        const double p = gil_pelaez_cdf(s, x, q);
        sum += rate / static_cast<double>(i) * (p_prev - p);
        p_prev = p;
    }
    return sum;
}

double dlt_integral_form(const CfSpec& spec, double rate, int n_max, const QuadratureConfig& q) {
    spec.validate();
    if (n_max < 1) throw std::invalid_argument("dlt: n_max must be >= 1");
    if (rate < 0.0) throw std::invalid_argument("dlt: rate must be >= 0");
    if (rate == 0.0) return 0.0;

    const double x = std::exp2(rate) - 1.0;
    double sum = 0.0;
    for (int i = 1; i <= n_max; ++i)
        sum += rate / (static_cast<double>(i) * kPi) * cf_difference_integral(spec, i, x, q);
    return sum;
}

DltCurve dlt_curve(const CfSpec& spec, double r_max, double r_step, int n_max,
                   const QuadratureConfig& q) {
    if (!(r_max > 0.0) || !(r_step > 0.0)) throw std::invalid_argument("dlt_curve: empty rate grid");
    DltCurve c;
    c.n_max = n_max;
    c.approx = spec.kind;
    const int count = static_cast<int>(std::floor(r_max / r_step + 1e-9)) + 1;
    c.rates.reserve(count);
    c.values.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double r = k * r_step;
        c.rates.push_back(r);
        c.values.push_back(dlt(spec, r, n_max, q));
    }
    return c;
}

RateDecision optimize_rate(const CfSpec& spec, int n_max, const QuadratureConfig& q,
                           const SearchConfig& search) {
    search.validate();
    const auto S = [&](double r) { return dlt(spec, r, n_max, q); };

    const int count = static_cast<int>(std::floor(search.r_max / search.grid_step + 1e-9)) + 1;
    std::vector<double> val(count);
    int best = 0;
    for (int k = 0; k < count; ++k) {
        val[k] = S(k * search.grid_step);
        if (val[k] > val[best]) best = k;
    }

    RateDecision d;
    d.approx = spec.kind;
    d.search_resolution = search.golden_tol;

    // quasi-concavity is an observation, not a theorem; count strict interior
    // maxima and fall back to the global grid max when there are several
    const double cmp_tol = 1e-6;
    int n_local_max = 0;
    for (int k = 1; k + 1 < count; ++k)
        if (val[k] > val[k - 1] + cmp_tol && val[k] > val[k + 1] + cmp_tol) ++n_local_max;
    if (n_local_max > 1) d.flags |= decision_flag::kNonUnimodal;
    if (best == count - 1) d.flags |= decision_flag::kHitRateCap;

    double lo = std::max(0.0, (best - 1) * search.grid_step);
    double hi = std::min(search.r_max, (best + 1) * search.grid_step);

    // golden-section maximization inside the winning bracket
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c1 = b - kInvPhi * (b - a);
    double c2 = a + kInvPhi * (b - a);
    double f1 = S(c1), f2 = S(c2);
    while (b - a > search.golden_tol) {
        if (f1 >= f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - kInvPhi * (b - a);
            f1 = S(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + kInvPhi * (b - a);
            f2 = S(c2);
        }
    }
    const double r_mid = 0.5 * (a + b);
    const double s_mid = S(r_mid);

    d.r_star = r_mid;
    d.s_at_r_star = s_mid;
    // grid values already computed; keep whichever candidate actually won
    if (val[best] > s_mid) {
        d.r_star = best * search.grid_step;
        d.s_at_r_star = val[best];
    }
    return d;
}

void append_curve_csv(std::ostream& os, const DltCurve& curve) {
    for (std::size_t i = 0; i < curve.rates.size(); ++i)
        os << to_string(curve.approx) << ',' << curve.rates[i] << ',' << curve.values[i] << ','
           << curve.n_max << '\n';
}

} // namespace harqsim
