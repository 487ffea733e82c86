#include "harqsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace harqsim {

std::uint64_t Rng::mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::next() {
    // splitmix64 sequence: fast, equidistributed enough for these
    // experiments, and trivially portable
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform_angle() {
    return (2.0 * uniform() - 1.0) * std::numbers::pi;
}

double Rng::exponential() {
    return -std::log(uniform_pos());
}

std::complex<double> draw_effective_coefficient(Rng& rng) {
    const double mag = std::sqrt(rng.exponential());
    const double ph = rng.uniform_angle();
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

RbfVector draw_rbf_vector(int n_antennas, Rng& rng) {
    if (n_antennas < 1) throw std::invalid_argument("rbf: need at least one antenna");
    RbfVector v;
    v.amplitude.assign(n_antennas, 1.0 / n_antennas);
    v.phase_rad.resize(n_antennas);
    for (auto& p : v.phase_rad) p = rng.uniform_angle();
    return v;
}

std::complex<double> effective_coefficient_via_rbf(const RbfVector& v, Rng& rng) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t m = 0; m < v.amplitude.size(); ++m) {
        const std::complex<double> weight =
            std::sqrt(v.amplitude[m]) *
            std::complex<double>{std::cos(v.phase_rad[m]), std::sin(v.phase_rad[m])};
        acc += weight * draw_effective_coefficient(rng);
    }
    return acc;
}

FadingDraw draw_harq_fading(int n_interferers, int n_attempts, Rng& rng) {
    if (n_attempts < 1) throw std::invalid_argument("fading: n_attempts must be >= 1");
    FadingDraw d;
    d.w0 = draw_effective_coefficient(rng);
    d.w_ici.resize(n_attempts);
    for (auto& row : d.w_ici) {
        row.resize(n_interferers);
        for (auto& w : row) w = draw_effective_coefficient(rng);
    }
    return d;
}

double SinrModel::ici_pathloss_sum() const {
    return std::accumulate(ici_pathloss.begin(), ici_pathloss.end(), 0.0);
}

double SinrModel::ici_pathloss_mean() const {
    return ici_pathloss_sum() / static_cast<double>(ici_pathloss.size());
}

double aggregate_interference(const SinrModel& model, const FadingDraw& draw, int attempt) {
    const auto& row = draw.w_ici.at(attempt);
    double x = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) x += model.ici_pathloss[k] * std::norm(row[k]);
    return x;
}

double instantaneous_sinr(const SinrModel& model, const FadingDraw& draw, int attempt) {
    return model.desired_power /
           (aggregate_interference(model, draw, attempt) + 1.0 / model.snr_linear);
}

double effective_sinr(const SinrModel& model, const FadingDraw& draw, int n_attempts) {
    double acc = 0.0;
    for (int i = 0; i < n_attempts; ++i) acc += instantaneous_sinr(model, draw, i);
    return acc;
}

} // namespace harqsim
