#ifndef HARQSIM_CFMATH_HPP
#define HARQSIM_CFMATH_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>

namespace harqsim {

enum class ApproxKind { GA, IPLA };

const char* to_string(ApproxKind k);

/// Thrown when a quadrature or root bracket fails to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_error(achieved) {}
    double achieved_error;
};

/// Parameters of the single-attempt SINR characteristic function under one
/// of the two interference approximations, plus the Chase-combining
/// exponent. `scale` is sigma_Z^2 = sum L^(k) + 1/rho for GA and
/// Lbar = (1/K) sum L^(k) for IPLA.
struct CfSpec {
    ApproxKind kind = ApproxKind::IPLA;
    double desired_power = 1.0;   // s
    double scale = 1.0;
    int interferer_count = 1;     // K, used by IPLA only
    int attempts = 1;             // n

    /// Inverse-gamma shape of the approximated per-attempt SINR.
    int shape() const { return kind == ApproxKind::GA ? 1 : interferer_count; }
    /// Inverse-gamma scale s/sigma_Z^2 resp. s/Lbar.
    double rate_scale() const { return desired_power / scale; }

    void validate() const;
};

struct QuadratureConfig {
    double t_min = 1e-10;          // lower guard of the semi-infinite integral
    double t_max_cap = 1e6;        // absolute upper cutoff
    double tail_epsilon = 1e-12;   // |phi(t)|/t truncation threshold
    double abs_tol = 1e-8;
    double rel_tol = 1e-10;
    std::size_t max_subdivisions = 400000;  // panel budget per integral
    bool use_cf_cache = true;      // interpolated CF inside the quadrature loop

    void validate() const;
};

// --- modified Bessel functions of the second kind, complex argument ---

/// K_nu(z) for integer nu >= 0 and Re(z) > 0. Power series for |z| <= 2,
/// an adaptive quadrature of the cosh integral representation for
/// 2 < |z| < 20, the large-argument asymptotic series for |z| >= 20;
/// orders above one by upward recurrence from K_0, K_1.
/// Throws std::domain_error unless Re(z) > 0, std::overflow_error when the
/// result leaves the representable range.
std::complex<double> bessel_k(int nu, std::complex<double> z);

/// e^z K_nu(z); well scaled across the whole operational range.
std::complex<double> bessel_k_scaled(int nu, std::complex<double> z);

// --- characteristic functions ---

/// CF of the single-attempt SINR at frequency t > 0 under spec's
/// approximation: sqrt(-4jst/sigma^2) K_1(sqrt(-4jst/sigma^2)) for GA and
/// 2(-jst/Lbar)^(K/2)/(K-1)! K_K(sqrt(-4jst/Lbar)) for IPLA.
std::complex<double> cf_single_attempt(const CfSpec& spec, double t);

/// CF of the Chase-combined SINR after spec.attempts i.i.d. attempts;
/// exactly 1 for attempts == 0.
std::complex<double> cf_effective(const CfSpec& spec, double t);

/// CF of an inverse-gamma(shape, 1) variable evaluated at the scaled
/// frequency v = sqrt(4t): the scale-free kernel both approximations map
/// onto. Exposed for the interpolation cache and its tests.
std::complex<double> inv_gamma_cf_kernel(int shape, double v);

// --- Gil-Pelaez inversion ---

struct GilPelaezResult {
    double cdf = 0.0;        // clamped to [0, 1]
    double cdf_raw = 0.0;    // before clamping
    double abs_error = 0.0;  // quadrature error estimate
    bool converged = false;
    std::size_t panels = 0;
    double t_upper = 0.0;    // truncation point actually used
};

/// F_{gamma(n)}(x) = 1/2 - (1/pi) Int_0^inf Im(e^{-jtx} phi(t)/t) dt,
/// adaptive Gauss-Kronrod panels sized against the e^{-jtx} oscillation.
GilPelaezResult gil_pelaez_cdf_ex(const CfSpec& spec, double x, const QuadratureConfig& q);

/// Convenience wrapper; throws NumericError (carrying the achieved error
/// estimate) when the panel budget is exhausted above tolerance.
double gil_pelaez_cdf(const CfSpec& spec, double x, const QuadratureConfig& q);

/// Int_{t_min}^inf Im(e^{-jtx} (phi^n(t) - phi^(n-1)(t)) / t) dt with the
/// oscillatory tail of the n=1 term completed analytically; building block
/// of the single-integral throughput form.
double cf_difference_integral(const CfSpec& spec, int n, double x, const QuadratureConfig& q);

} // namespace harqsim

#endif
