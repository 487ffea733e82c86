#ifndef HARQSIM_CHANNEL_HPP
#define HARQSIM_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace harqsim {

/// Deterministic 64-bit generator with explicit stream derivation so that
/// every Monte Carlo trial gets an independent, reproducible sequence.
/// (xoshiro-free: a splitmix-seeded mt19937_64 kept behind this wrapper so
/// draws do not depend on libstdc++ distribution internals.)
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed)) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : state_(mix(mix(seed) + 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1] (safe as a log argument).
    double uniform_pos() { return 1.0 - uniform(); }

    /// Uniform on [-pi, pi].
    double uniform_angle();

    /// Standard exponential, mean 1.
    double exponential() ;

    std::uint64_t next();

private:
    static std::uint64_t mix(std::uint64_t z);
    std::uint64_t state_;
};

/// One circularly-symmetric complex Gaussian sample, zero mean, unit
/// variance (real/imag independent N(0, 1/2)). Box-Muller on the wrapped
/// uniforms, so the byte stream is platform-stable.
std::complex<double> draw_effective_coefficient(Rng& rng);

/// Random-beamforming weight vector; only used by the validation path that
/// checks the isotropy reduction. The simulator proper samples effective
/// coefficients directly.
struct RbfVector {
    std::vector<double> amplitude;   // a_m, sum to 1
    std::vector<double> phase_rad;   // uniform on [-pi, pi]
};

RbfVector draw_rbf_vector(int n_antennas, Rng& rng);

/// Effective coefficient obtained the long way round: inner product of an
/// explicit RBF vector with an i.i.d. CN(0,1) channel vector. Distributed
/// CN(0,1) regardless of the amplitude profile.
std::complex<double> effective_coefficient_via_rbf(const RbfVector& v, Rng& rng);

/// Fading state of one HARQ process: the desired-link coefficient is drawn
/// once (quasi-static channel, beam kept across retransmissions); every
/// interferer coefficient is redrawn per transmission attempt.
struct FadingDraw {
    std::complex<double> w0;
    std::vector<std::vector<std::complex<double>>> w_ici;  // [attempt][interferer]

    int attempts() const { return static_cast<int>(w_ici.size()); }
};

FadingDraw draw_harq_fading(int n_interferers, int n_attempts, Rng& rng);

/// Static SINR parameterization of one link: desired power s, interferer
/// path losses, and linear transmit SNR.
struct SinrModel {
    double desired_power = 0.0;          // s = L^(0) |w^(0)|^2
    std::vector<double> ici_pathloss;    // L^(k), k = 1..K
    double snr_linear = 0.0;             // rho

    double ici_pathloss_sum() const;
    double ici_pathloss_mean() const;
    /// sigma_Z^2 = sum L^(k) + 1/rho
    double gaussian_scale() const { return ici_pathloss_sum() + 1.0 / snr_linear; }
};

/// Aggregate ICI power sum_k L^(k) |w^(k)|^2 for one attempt of a draw.
double aggregate_interference(const SinrModel& model, const FadingDraw& draw, int attempt);

/// gamma_i = s / (X_i + 1/rho)
double instantaneous_sinr(const SinrModel& model, const FadingDraw& draw, int attempt);

/// Chase-combined effective SINR after the first n attempts of a draw.
double effective_sinr(const SinrModel& model, const FadingDraw& draw, int n_attempts);

} // namespace harqsim

#endif
