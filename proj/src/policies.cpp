#include "harqsim/policies.hpp"

#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace harqsim {

const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::GenieOpt: return "genie";
        case PolicyKind::InstSinr: return "isinr";
        case PolicyKind::AvgInterference: return "avgx";
        case PolicyKind::GaBased: return "ga";
        case PolicyKind::IplaBased: return "ipla";
    }
    return "?";
}

std::optional<PolicyKind> policy_from_string(std::string_view name) {
    if (name == "genie") return PolicyKind::GenieOpt;
    if (name == "isinr") return PolicyKind::InstSinr;
    if (name == "avgx") return PolicyKind::AvgInterference;
    if (name == "ga") return PolicyKind::GaBased;
    if (name == "ipla") return PolicyKind::IplaBased;
    return std::nullopt;
}

CfSpec make_cf_spec(ApproxKind kind, const SinrModel& model) {
    CfSpec spec;
    spec.kind = kind;
    spec.desired_power = model.desired_power;
    spec.interferer_count = static_cast<int>(model.ici_pathloss.size());
    spec.scale = kind == ApproxKind::GA ? model.gaussian_scale() : model.ici_pathloss_mean();
    return spec;
}

namespace {

double capacity(double s, double denom) { return std::log2(1.0 + s / denom); }

struct MemoKey {
    std::int64_t kind, s, scale, k, n_max;
    bool operator==(const MemoKey&) const = default;
};

struct MemoHash {
    std::size_t operator()(const MemoKey& m) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::int64_t v : {m.kind, m.s, m.scale, m.k, m.n_max}) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

std::mutex g_memo_mu;
std::unordered_map<MemoKey, RateDecision, MemoHash> g_memo;

std::int64_t quantize(double v) { return static_cast<std::int64_t>(std::llround(v * 1e6)); }

RateDecision optimize_memoized(const CfSpec& spec, int n_max, const QuadratureConfig& q,
                               const SearchConfig& search) {
    const MemoKey key{static_cast<std::int64_t>(spec.kind), quantize(spec.desired_power),
                      quantize(spec.scale), spec.interferer_count, n_max};
    {
        std::lock_guard<std::mutex> lock(g_memo_mu);
        auto it = g_memo.find(key);
        if (it != g_memo.end()) return it->second;
    }
    const RateDecision d = optimize_rate(spec, n_max, q, search);
    std::lock_guard<std::mutex> lock(g_memo_mu);
    if (g_memo.size() > 500000) g_memo.clear();
    g_memo.emplace(key, d);
    return d;
}

} // namespace

void clear_rate_memo() {
    std::lock_guard<std::mutex> lock(g_memo_mu);
    g_memo.clear();
}

PolicyDecision rs_genie(const SinrModel& model, std::span<const double> ici_gain_now) {
    if (ici_gain_now.size() != model.ici_pathloss.size())
        throw std::invalid_argument("rs_genie: gain vector size mismatch");
    double x = 0.0;
    for (std::size_t k = 0; k < ici_gain_now.size(); ++k)
        x += model.ici_pathloss[k] * ici_gain_now[k];
    PolicyDecision d;
    d.r_source = capacity(model.desired_power, x + 1.0 / model.snr_linear);
    d.r_eff = d.r_source;
    return d;
}

PolicyDecision rs_inst_sinr(const SinrModel& model, std::span<const double> ici_gain_stale,
                            int delay_slots) {
    if (delay_slots < 0) throw std::invalid_argument("rs_inst_sinr: delay must be >= 0");
    if (ici_gain_stale.empty()) {
        PolicyDecision d = rs_avg_x(model);
        d.flags |= decision_flag::kColdStartFallback;
        return d;
    }
    if (ici_gain_stale.size() != model.ici_pathloss.size())
        throw std::invalid_argument("rs_inst_sinr: gain vector size mismatch");
    double x = 0.0;
    for (std::size_t k = 0; k < ici_gain_stale.size(); ++k)
        x += model.ici_pathloss[k] * ici_gain_stale[k];
    PolicyDecision d;
    d.r_source = capacity(model.desired_power, x + 1.0 / model.snr_linear);
    d.r_eff = d.r_source;
    return d;
}

PolicyDecision rs_avg_x(const SinrModel& model) {
    PolicyDecision d;
    d.r_source = capacity(model.desired_power, model.gaussian_scale());
    d.r_eff = d.r_source;
    return d;
}

PolicyDecision rs_ga(const SinrModel& model, int n_max, const QuadratureConfig& q,
                     const SearchConfig& search) {
    const CfSpec spec = make_cf_spec(ApproxKind::GA, model);
    const RateDecision r = optimize_memoized(spec, n_max, q, search);
    PolicyDecision d;
    d.r_source = r.r_star;
    d.r_eff = r.s_at_r_star;
    d.flags = r.flags;
    return d;
}

PolicyDecision rs_ipla(const SinrModel& model, int n_max, const QuadratureConfig& q,
                       const SearchConfig& search) {
    const CfSpec spec = make_cf_spec(ApproxKind::IPLA, model);
    const RateDecision r = optimize_memoized(spec, n_max, q, search);
    PolicyDecision d;
    d.r_source = r.r_star;
    d.r_eff = r.s_at_r_star;
    d.flags = r.flags;
    return d;
}

} // namespace harqsim
