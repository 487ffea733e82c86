#ifndef HARQSIM_MAC_HPP
#define HARQSIM_MAC_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "harqsim/channel.hpp"
#include "harqsim/geometry.hpp"
#include "harqsim/policies.hpp"

namespace harqsim {

enum class HarqOutcome { InProgress, Success, Drop };

/// One Chase-combining retransmission process. SINRs add across attempts;
/// the packet succeeds at the first attempt n with log2(1 + gamma(n)) >= R
/// and is dropped after n_max failed attempts.
struct HarqProcess {
    int user = 0;
    double r_source = 0.0;
    int n_max = 4;
    int attempt = 0;          // attempts executed so far
    double gamma_acc = 0.0;   // accumulated effective SINR
    double w0_mag2 = 1.0;     // desired gain, fixed for the process lifetime
    HarqOutcome outcome = HarqOutcome::InProgress;
};

HarqProcess make_process(int user, double r_source, int n_max, double w0_mag2);

/// Apply one attempt's SINR. Throws std::logic_error on a finished process.
void harq_step(HarqProcess& proc, double gamma_i);

/// R/n for Success after n attempts, 0 for Drop. Throws while in progress.
double delivered_rate(const HarqProcess& proc);

/// Proportional-fair scheduler state: exponentially averaged per-user
/// throughput over a t_c-slot window.
struct PfState {
    std::vector<double> avg_throughput;
    double window_slots = 1000.0;
    std::uint64_t slot = 0;

    static PfState init(int n_users, double t_c, double warm_start = 1e-3);
};

/// argmax_u r_eff[u] / T[u]; ties break to the lowest user id.
int pf_select(const PfState& pf, std::span<const double> r_eff);

/// T[u*] <- (1 - 1/t_c) T[u*] + (1/t_c) delivered; everyone else decays.
/// Slots with no completed delivery use delivered = 0.
void pf_update(PfState& pf, int selected, double delivered);

enum class PfUpdateMode {
    PerSlot,     // non-selected users decay every slot of a process
    PerProcess,  // one update per completed process
};

/// Static link data of one home-cell user.
struct CellUser {
    double home_gain = 0.0;          // L^(0)
    std::vector<double> ici_gain;    // L^(k), k = 1..K
    double ici_sum = 0.0;
    double ici_mean = 0.0;
};

CellUser make_cell_user(const UserGeometry& g);

struct CellConfig {
    int n_max = 4;
    double snr_linear = 19952.62314968879;  // 43 dB
    double t_c = 1000.0;
    PfUpdateMode pf_mode = PfUpdateMode::PerSlot;
    int isinr_delay = 1;
    double pf_warm_start = 1e-3;
};

/// Source of (r_source, r_eff) for the expected-throughput policies; either
/// the direct optimizer or an interpolation table.
class RateProvider {
public:
    virtual ~RateProvider() = default;
    virtual std::pair<double, double> decide(ApproxKind kind, double desired_power,
                                             const CellUser& user) const = 0;
};

/// Direct per-decision optimization (memoized), the reference provider.
class DirectRateProvider : public RateProvider {
public:
    DirectRateProvider(int n_max, double snr_linear, QuadratureConfig q, SearchConfig s)
        : n_max_(n_max), snr_linear_(snr_linear), quad_(q), search_(s) {}
    std::pair<double, double> decide(ApproxKind kind, double desired_power,
                                     const CellUser& user) const override;

private:
    int n_max_;
    double snr_linear_;
    QuadratureConfig quad_;
    SearchConfig search_;
};

struct TraceRow {
    std::uint64_t slot = 0;
    int user = 0;
    int attempt = 0;
    double gamma_acc = 0.0;
    char outcome = 'P';  // P in progress, S success, D drop
    double r_source = 0.0;
};

using TraceSink = std::function<void(const TraceRow&)>;

struct CellRunResult {
    std::vector<double> throughput;        // delivered bits per slot, per user
    std::vector<double> pf_average;        // final scheduler EMA
    std::vector<std::uint64_t> scheduled;  // processes granted per user
    std::uint64_t slots = 0;
    std::uint64_t processes = 0;
    std::uint64_t drops = 0;
    double delivered_bits = 0.0;
    bool cold_start_fallback = false;
};

/// The cross-layer loop: per process boundary, (1) rate selection for every
/// user, (2) effective-rate mapping, (3) PF selection, (4) HARQ transmission
/// of the winner until success or drop; scheduling only at process
/// boundaries. Runs at least `horizon` slots (the last process completes).
CellRunResult run_cell_procedure(const CellConfig& cfg, const std::vector<CellUser>& users,
                                 PolicyKind policy, const RateProvider* expected_rater,
                                 std::uint64_t horizon, Rng& rng, const TraceSink& trace = {});

} // namespace harqsim

#endif
