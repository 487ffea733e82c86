#include "harqsim/cfmath.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "harqsim/channel.hpp"
#include "oracles.hpp"

using namespace harqsim;
using cplx = std::complex<double>;

namespace {

double rel_err(cplx got, cplx want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

// piecewise-linear CDF view refined until neighboring values differ by at
// most max_jump; good enough to evaluate a KS statistic far below its
// tolerance
struct InterpCdf {
    std::vector<double> x, f;

    InterpCdf(const CfSpec& spec, const QuadratureConfig& q, double lo, double hi,
              double max_jump) {
        x = {lo, hi};
        f = {gil_pelaez_cdf(spec, lo, q), gil_pelaez_cdf(spec, hi, q)};
        for (std::size_t i = 0; i + 1 < x.size();) {
            if (f[i + 1] - f[i] > max_jump && x[i + 1] - x[i] > 1e-9 * x[i + 1]) {
                const double m = std::sqrt(x[i] * x[i + 1]);
                x.insert(x.begin() + i + 1, m);
                f.insert(f.begin() + i + 1, gil_pelaez_cdf(spec, m, q));
            } else {
                ++i;
            }
        }
    }

    double operator()(double v) const {
        if (v <= x.front()) return 0.0;
        if (v >= x.back()) return 1.0;
        const auto it = std::upper_bound(x.begin(), x.end(), v);
        const std::size_t i = it - x.begin() - 1;
        const double w = (v - x[i]) / (x[i + 1] - x[i]);
        return f[i] * (1.0 - w) + f[i + 1] * w;
    }
};

} // namespace

TEST_CASE("bessel K at classic real arguments") {
    CHECK(rel_err(bessel_k(0, {1.0, 0.0}), {0.421024438240708, 0.0}) < 1e-12);
    CHECK(rel_err(bessel_k(1, {1.0, 0.0}), {0.601907230197235, 0.0}) < 1e-12);
    // and against the independent integral-representation oracle
    CHECK(rel_err(bessel_k(0, {1.0, 0.0}), oracle::bessel_k(0, {1.0, 0.0})) < 1e-10);
    CHECK(rel_err(bessel_k(1, {1.0, 0.0}), oracle::bessel_k(1, {1.0, 0.0})) < 1e-10);
}

TEST_CASE("bessel K matches the oracle across bands, orders and arguments") {
    const double args[] = {0.0, -std::numbers::pi / 4.0};
    for (double arg : args) {
        for (double mag = 1e-6; mag < 1.5e3; mag *= 11.0) {
            const cplx z = std::polar(mag, arg);
            for (int nu : {0, 1, 2, 5, 8}) {
                const cplx got = bessel_k_scaled(nu, z);
                const cplx want = oracle::bessel_k_scaled(nu, z);
                INFO("nu=", nu, " |z|=", mag, " arg=", arg);
                CHECK(rel_err(got, want) < 1e-8);
            }
        }
    }
}

TEST_CASE("bessel K upward recurrence identity at sampled complex points") {
    // K_{v+1}(z) = K_{v-1}(z) + (2v/z) K_v(z)
    for (const cplx z : {cplx{0.7, -0.3}, cplx{3.0, -3.0}, cplx{12.0, 5.0}, cplx{40.0, -40.0}}) {
        for (int nu = 1; nu <= 11; ++nu) {
            const cplx lhs = bessel_k_scaled(nu + 1, z);
            const cplx rhs = bessel_k_scaled(nu - 1, z) + (2.0 * nu / z) * bessel_k_scaled(nu, z);
            CHECK(rel_err(lhs, rhs) < 1e-10);
        }
    }
}

TEST_CASE("bessel K scaled/unscaled consistency and domain errors") {
    const cplx z{5.0, -2.0};
    CHECK(rel_err(bessel_k_scaled(3, z), std::exp(z) * bessel_k(3, z)) < 1e-12);
    CHECK_THROWS_AS(bessel_k(0, {-1.0, 0.5}), std::domain_error);
    CHECK_THROWS_AS(bessel_k(0, {0.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(bessel_k(-1, {1.0, 0.0}), std::domain_error);
}

TEST_CASE("bessel K is continuous across evaluation-band boundaries") {
    for (double mag : {2.0, 20.0}) {
        for (double arg : {0.0, -std::numbers::pi / 4.0}) {
            const cplx below = bessel_k_scaled(1, std::polar(mag * (1.0 - 1e-9), arg));
            const cplx above = bessel_k_scaled(1, std::polar(mag * (1.0 + 1e-9), arg));
            CHECK(rel_err(below, above) < 1e-7);
        }
    }
}

TEST_CASE("single-attempt CF tends to 1 at the origin and stays in the unit disk") {
    CfSpec ga{ApproxKind::GA, 2.3, 0.7, 1, 1};
    CfSpec ipla{ApproxKind::IPLA, 1.0, 0.2, 6, 1};
    CHECK(std::abs(cf_single_attempt(ga, 1e-12) - 1.0) < 1e-4);
    CHECK(std::abs(cf_single_attempt(ipla, 1e-12) - 1.0) < 1e-4);
    for (double t = 1e-8; t < 1e5; t *= 7.7) {
        CHECK(std::abs(cf_single_attempt(ga, t)) <= 1.0 + 1e-12);
        CHECK(std::abs(cf_single_attempt(ipla, t)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("IPLA with K=1 coincides with GA of the same scale") {
    CfSpec ga{ApproxKind::GA, 1.7, 0.45, 1, 1};
    CfSpec ipla{ApproxKind::IPLA, 1.7, 0.45, 1, 1};
    for (double t = 1e-6; t < 1e4; t *= 3.1) {
        const cplx a = cf_single_attempt(ga, t);
        const cplx b = cf_single_attempt(ipla, t);
        CHECK(std::abs(a - b) < 1e-14);
    }
}

TEST_CASE("IPLA CF matches a direct quadrature of the inverse-gamma density") {
    // K=6, s=1, Lbar=0.2, t=3.7 (the quadrature oracle needs shape >= 4 for
    // its uniform grid to resolve the phase near g = 0)
    CfSpec spec{ApproxKind::IPLA, 1.0, 0.2, 6, 1};
    const cplx got = cf_single_attempt(spec, 3.7);
    const cplx want = oracle::inv_gamma_cf(6, 5.0, 3.7);
    CHECK(std::abs(got - want) < 1e-6);
}

TEST_CASE("effective CF: empty product, squaring, modulus ordering") {
    CfSpec spec{ApproxKind::IPLA, 1.0, 0.25, 4, 0};
    CHECK(cf_effective(spec, 0.37) == cplx{1.0, 0.0});
    for (double t : {0.31, 2.9, 17.0}) {
        CfSpec s1 = spec, s2 = spec;
        s1.attempts = 1;
        s2.attempts = 2;
        const cplx a = cf_effective(s1, t);
        CHECK(std::abs(cf_effective(s2, t) - a * a) < 1e-14);
        double prev = 1.0;
        for (int n = 1; n <= 6; ++n) {
            CfSpec sn = spec;
            sn.attempts = n;
            const double m = std::abs(cf_effective(sn, t));
            CHECK(m <= prev + 1e-12);
            prev = m;
        }
    }
}

TEST_CASE("Gil-Pelaez inversion reproduces the closed-form inverse-gamma CDF") {
    QuadratureConfig q;
    for (int K : {1, 3, 6}) {
        CfSpec spec{ApproxKind::IPLA, 1.3, 0.37, K, 1};
        const double b = spec.rate_scale();
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double x = b / K * std::pow(10.0, -1.5 + 3.2 * i / 49.0);
            const double got = gil_pelaez_cdf(spec, x, q);
            const double want = oracle::inv_gamma_cdf(K, b, x);
            worst = std::max(worst, std::abs(got - want));
        }
        INFO("K=", K);
        CHECK(worst < 1e-6);
    }
    // GA against exp(-b/x) explicitly
    CfSpec ga{ApproxKind::GA, 2.0, 0.8, 6, 1};
    const double b = ga.rate_scale();
    for (double x : {0.1 * b, b, 7.0 * b, 300.0 * b})
        CHECK(std::abs(gil_pelaez_cdf(ga, x, q) - std::exp(-b / x)) < 1e-6);
}

TEST_CASE("Gil-Pelaez limits, monotonicity, and raw-value sanity") {
    QuadratureConfig q;
    CfSpec spec{ApproxKind::IPLA, 1.0, 1.0 / 6.0, 6, 3};
    const double b = spec.rate_scale();
    CHECK(gil_pelaez_cdf(spec, b * 1e-4, q) < 1e-8);
    CHECK(gil_pelaez_cdf(spec, b * 1e5, q) > 1.0 - 1e-5);
    double prev = -1.0;
    for (double x = 0.05 * b; x < 40.0 * b; x *= 1.31) {
        const GilPelaezResult r = gil_pelaez_cdf_ex(spec, x, q);
        CHECK(r.converged);
        CHECK(r.cdf_raw > -2.0 * q.abs_tol - 1e-9);
        CHECK(r.cdf_raw < 1.0 + 2.0 * q.abs_tol + 1e-9);
        CHECK(r.cdf >= prev - 2.0 * q.abs_tol);
        prev = r.cdf;
    }
}

TEST_CASE("quadrature with and without the CF interpolation cache agree") {
    QuadratureConfig direct;
    direct.use_cf_cache = false;
    QuadratureConfig cached;
    for (int K : {1, 6}) {
        CfSpec spec{ApproxKind::IPLA, 0.9, 0.21, K, 2};
        for (double x : {0.3, 3.0, 33.0}) {
            const double a = gil_pelaez_cdf(spec, x, cached);
            const double bx = gil_pelaez_cdf(spec, x, direct);
            CHECK(std::abs(a - bx) < 3e-8);
        }
    }
}

TEST_CASE("exhausted panel budget reports the achieved error") {
    QuadratureConfig q;
    q.max_subdivisions = 70;
    q.abs_tol = 1e-13;
    CfSpec spec{ApproxKind::IPLA, 1.0, 1.0 / 6.0, 6, 1};
    const GilPelaezResult r = gil_pelaez_cdf_ex(spec, 2000.0, q);
    if (!r.converged) {
        CHECK(r.abs_error > 0.0);
        CHECK_THROWS_AS(gil_pelaez_cdf(spec, 2000.0, q), NumericError);
    }
}

TEST_CASE("n >= 2 inversion matches the empirical CDF of summed draws") {
    // sum of n i.i.d. InvGamma(6, b) samples vs the CF-product inversion
    const int n = 2;
    const double b = 9.22;
    Rng rng(2024);
    std::vector<double> samples(1000000);
    for (auto& s : samples) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            double g = 0.0;
            for (int k = 0; k < 6; ++k) g += rng.exponential();
            acc += b / g;
        }
        s = acc;
    }
    std::sort(samples.begin(), samples.end());
    CfSpec spec{ApproxKind::IPLA, b, 1.0, 6, n};
    QuadratureConfig q;
    const InterpCdf cdf(spec, q, samples.front() * 0.9, samples.back() * 1.1, 5e-4);
    double d = 0.0;
    const double m = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max((i + 1.0) / m - f, f - i / m));
    }
    CHECK(d < 0.005);
}
