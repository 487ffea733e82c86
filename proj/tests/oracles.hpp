// Test-side reference implementations, independent of the library's
// evaluation paths: a second integral representation for Bessel K, the
// closed-form inverse-gamma CDF, and a brute-force characteristic function.
#ifndef HARQSIM_TESTS_ORACLES_HPP
#define HARQSIM_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

// e^z K_nu(z) via K_nu(z) = sqrt(pi/2z) e^-z / Gamma(nu+1/2) *
//   Int_0^inf e^-u u^(nu-1/2) (1 + u/2z)^(nu-1/2) du
// (substituted u = s^2 to remove the endpoint singularity), composite
// Simpson. Distinct from the library's cosh-integral / series / asymptotic
// paths on purpose.
inline std::complex<double> bessel_k_scaled(int nu, std::complex<double> z, int panels = 32768) {
    const double s_max = 12.0;
    const double h = s_max / panels;
    const double p = nu - 0.5;
    const std::complex<double> inv2z = 0.5 / z;
    auto f = [&](double s) -> std::complex<double> {
        const double s2 = s * s;
        // 2 e^{-s^2} s^{2 nu} (1 + s^2/(2z))^{nu - 1/2}
        const std::complex<double> pw = std::exp(p * std::log(1.0 + s2 * inv2z));
        return 2.0 * std::exp(-s2) * std::pow(s, 2 * nu) * pw;
    };
    std::complex<double> acc = f(0.0) + f(s_max);
    for (int i = 1; i < panels; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    const std::complex<double> integral = acc * (h / 3.0);
    return std::sqrt(std::numbers::pi / (2.0 * z)) / std::tgamma(nu + 0.5) * integral;
}

inline std::complex<double> bessel_k(int nu, std::complex<double> z, int panels = 32768) {
    return std::exp(-z) * bessel_k_scaled(nu, z, panels);
}

// Regularized upper incomplete gamma Q(a, y) for integer a:
// Q(a,y) = e^-y sum_{k<a} y^k / k!   (exact finite sum)
inline double upper_gamma_regularized(int a, double y) {
    if (y <= 0.0) return 1.0;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < a; ++k) {
        term *= y / k;
        sum += term;
    }
    const double lg = -y + std::log(sum);
    return lg < -745.0 ? 0.0 : std::exp(lg) > 1.0 ? 1.0 : std::exp(lg);
}

// CDF of InvGamma(shape, scale): F(x) = Q(shape, scale/x)
inline double inv_gamma_cdf(int shape, double scale, double x) {
    if (x <= 0.0) return 0.0;
    return upper_gamma_regularized(shape, scale / x);
}

// Characteristic function of InvGamma(shape, scale) by direct quadrature of
// E exp(j t scale / G), G ~ Gamma(shape, 1) (adaptive Simpson on a fixed
// fine grid; the integrand decays like g^{shape-1} e^{-g}).
inline std::complex<double> inv_gamma_cf(int shape, double scale, double t, int panels = 400000) {
    const double g_max = 60.0;
    const double h = g_max / panels;
    double lgamma_s = std::lgamma(shape);
    auto f = [&](double g) -> std::complex<double> {
        if (g <= 0.0) return {0.0, 0.0};
        const double dens = std::exp((shape - 1) * std::log(g) - g - lgamma_s);
        const double phase = t * scale / g;
        return dens * std::complex<double>{std::cos(phase), std::sin(phase)};
    };
    std::complex<double> acc = f(0.0) + f(g_max);
    for (int i = 1; i < panels; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

} // namespace oracle

#endif
