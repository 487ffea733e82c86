#include "harqsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

using namespace harqsim;

TEST_CASE("effective coefficient is CN(0,1)") {
    Rng rng(11);
    const int n = 1000000;
    double sum_mag2 = 0.0, sum_re = 0.0, sum_im = 0.0;
    int below_one = 0;
    for (int i = 0; i < n; ++i) {
        const auto w = draw_effective_coefficient(rng);
        sum_mag2 += std::norm(w);
        sum_re += w.real();
        sum_im += w.imag();
        if (std::norm(w) < 1.0) ++below_one;
    }
    CHECK(sum_mag2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(sum_re / n) < 0.005);
    CHECK(std::abs(sum_im / n) < 0.005);
    // |w|^2 ~ Exp(1): CDF at 1 is 1 - e^-1
    CHECK(below_one / static_cast<double>(n) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(0.008));
}

TEST_CASE("per-process fading draw: counts, quasi-static desired link, independence") {
    Rng rng(5);
    const FadingDraw d = draw_harq_fading(6, 4, rng);
    CHECK(d.attempts() == 4);
    std::size_t coeffs = 0;
    for (const auto& row : d.w_ici) coeffs += row.size();
    CHECK(coeffs == 24);  // plus w0 makes 25 draws per process

    // w0 is a single value shared by all attempts by construction; check the
    // attempt rows decorrelate instead
    const int trials = 100000;
    double s1 = 0.0, s2 = 0.0, s12 = 0.0, sq1 = 0.0, sq2 = 0.0;
    for (int i = 0; i < trials; ++i) {
        const FadingDraw f = draw_harq_fading(3, 2, rng);
        const double a = std::norm(f.w_ici[0][1]);
        const double b = std::norm(f.w_ici[1][1]);
        s1 += a;
        s2 += b;
        s12 += a * b;
        sq1 += a * a;
        sq2 += b * b;
    }
    const double m1 = s1 / trials, m2 = s2 / trials;
    const double cov = s12 / trials - m1 * m2;
    const double v1 = sq1 / trials - m1 * m1, v2 = sq2 / trials - m2 * m2;
    CHECK(std::abs(cov / std::sqrt(v1 * v2)) < 0.01);
}

TEST_CASE("instantaneous SINR in closed situations") {
    SinrModel m;
    m.desired_power = 1.0;
    m.ici_pathloss = {0.5, 0.5};
    m.snr_linear = 10.0;

    FadingDraw d;
    d.w0 = {1.0, 0.0};
    d.w_ici = {{{0.0, 0.0}, {0.0, 0.0}}};
    CHECK(instantaneous_sinr(m, d, 0) == doctest::Approx(10.0));  // noise only

    SinrModel m2;
    m2.desired_power = 1.0;
    m2.ici_pathloss = {1.0};
    m2.snr_linear = 1e18;
    FadingDraw d2;
    d2.w0 = {1.0, 0.0};
    d2.w_ici = {{{1.0, 0.0}}};
    CHECK(instantaneous_sinr(m2, d2, 0) == doctest::Approx(1.0));
}

TEST_CASE("seeded draw reproduces and SINR matches an independent recomputation") {
    SinrModel m;
    m.desired_power = 0.0127675;
    m.ici_pathloss = {4.7e-4, 2.7e-4, 2.7e-4, 1.3e-4, 1.3e-4, 1.0e-4};
    m.snr_linear = std::pow(10.0, 4.3);

    Rng a(1234), b(1234);
    const FadingDraw da = draw_harq_fading(6, 4, a);
    const FadingDraw db = draw_harq_fading(6, 4, b);
    CHECK(da.w0 == db.w0);
    for (int i = 0; i < 4; ++i) {
        double x = 0.0;
        for (int k = 0; k < 6; ++k) {
            CHECK(da.w_ici[i][k] == db.w_ici[i][k]);
            x += m.ici_pathloss[k] * std::norm(da.w_ici[i][k]);
        }
        const double want = m.desired_power / (x + 1.0 / m.snr_linear);
        CHECK(instantaneous_sinr(m, da, i) == doctest::Approx(want).epsilon(1e-15));
    }
}

TEST_CASE("Chase combining adds per-attempt SINRs exactly") {
    SinrModel m;
    m.desired_power = 2.0;
    m.ici_pathloss = {0.3, 0.1};
    m.snr_linear = 100.0;
    Rng rng(3);
    const FadingDraw d = draw_harq_fading(2, 4, rng);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        acc += instantaneous_sinr(m, d, i);
        CHECK(effective_sinr(m, d, i + 1) == doctest::Approx(acc).epsilon(1e-15));
    }
}

TEST_CASE("aggregate interference has the right mean and K=1 is exponential") {
    SinrModel m;
    m.desired_power = 1.0;
    m.ici_pathloss = {4.7e-4, 2.7e-4, 2.7e-4, 1.3e-4, 1.3e-4, 1.0e-4};
    m.snr_linear = 1e6;
    Rng rng(17);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const FadingDraw d = draw_harq_fading(6, 1, rng);
        const double x = aggregate_interference(m, d, 0);
        sum += x;
        sumsq += x * x;
    }
    const double mean_x = sum / n;
    const double sd = std::sqrt(sumsq / n - mean_x * mean_x);
    double l_total = 0.0;
    for (double l : m.ici_pathloss) l_total += l;
    CHECK(std::abs(mean_x - l_total) < 3.0 * sd / std::sqrt(static_cast<double>(n)));

    // single interferer: X / L ~ Exp(1)
    SinrModel k1;
    k1.desired_power = 1.0;
    k1.ici_pathloss = {0.37};
    k1.snr_linear = 1e6;
    std::vector<double> xs(100000);
    for (auto& x : xs) {
        const FadingDraw d = draw_harq_fading(1, 1, rng);
        x = aggregate_interference(k1, d, 0) / 0.37;
    }
    std::sort(xs.begin(), xs.end());
    double dstat = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = 1.0 - std::exp(-xs[i]);
        dstat = std::max(dstat, std::max((i + 1.0) / xs.size() - f, f - i * 1.0 / xs.size()));
    }
    CHECK(dstat <= 0.01);
}

TEST_CASE("explicit RBF vector reduces to a CN(0,1) effective coefficient") {
    Rng rng(29);
    std::vector<double> mags(100000);
    for (std::size_t i = 0; i < mags.size(); ++i) {
        const RbfVector beam = draw_rbf_vector(4, rng);
        double norm = 0.0;
        for (double a : beam.amplitude) norm += a;
        REQUIRE(norm == doctest::Approx(1.0));
        mags[i] = std::norm(effective_coefficient_via_rbf(beam, rng));
    }
    std::sort(mags.begin(), mags.end());
    double dstat = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i) {
        const double f = 1.0 - std::exp(-mags[i]);
        dstat = std::max(dstat, std::max((i + 1.0) / mags.size() - f, f - i * 1.0 / mags.size()));
    }
    CHECK(dstat <= 0.01);
}
