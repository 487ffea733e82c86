#ifndef HARQSIM_POLICIES_HPP
#define HARQSIM_POLICIES_HPP

#include <optional>
#include <span>
#include <string_view>

#include "harqsim/channel.hpp"
#include "harqsim/dlt.hpp"

namespace harqsim {

/// The five cross-layer policies: a rate-selection rule paired with its
/// effective-rate mapping for the scheduler.
enum class PolicyKind { GenieOpt, InstSinr, AvgInterference, GaBased, IplaBased };

const char* to_string(PolicyKind k);
std::optional<PolicyKind> policy_from_string(std::string_view name);

struct PolicyDecision {
    int user = 0;
    double r_source = 0.0;  // transmitted rate R*_u
    double r_eff = 0.0;     // scheduling-metric rate R_eff,u
    unsigned flags = 0;     // decision_flag bits
};

/// CF parameterization implied by a link model: sigma_Z^2 = sum L + 1/rho
/// for GA, Lbar = mean L for IPLA.
CfSpec make_cf_spec(ApproxKind kind, const SinrModel& model);

/// Perfect knowledge of the current interference gains |w^(k)(t1)|^2:
/// transmit at capacity, no outage, effective rate = source rate.
PolicyDecision rs_genie(const SinrModel& model, std::span<const double> ici_gain_now);

/// Rate from a stale interference observation |w^(k)(t1-delta)|^2. Without
/// history (cold start) the decision falls back to the average-interference
/// rule and is flagged.
PolicyDecision rs_inst_sinr(const SinrModel& model, std::span<const double> ici_gain_stale,
                            int delay_slots);

/// Rate against the mean aggregate interference Xbar = sum L^(k).
PolicyDecision rs_avg_x(const SinrModel& model);

/// Throughput-optimal rate under the Gaussian approximation; effective rate
/// is the expected throughput S_GA(R*).
PolicyDecision rs_ga(const SinrModel& model, int n_max, const QuadratureConfig& q,
                     const SearchConfig& search);

/// Throughput-optimal rate under the identical-path-loss approximation;
/// effective rate is S_IPLA(R*).
PolicyDecision rs_ipla(const SinrModel& model, int n_max, const QuadratureConfig& q,
                       const SearchConfig& search);

/// Shared memo for the two optimizing policies, keyed on the quantized
/// (kind, s, scale, K, n_max) tuple; safe for concurrent use.
void clear_rate_memo();

} // namespace harqsim

#endif
