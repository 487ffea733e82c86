#include "harqsim/mac.hpp"

#include <cmath>
#include <stdexcept>

namespace harqsim {

HarqProcess make_process(int user, double r_source, int n_max, double w0_mag2) {
    if (r_source < 0.0) throw std::invalid_argument("harq: r_source must be >= 0");
    if (n_max < 1) throw std::invalid_argument("harq: n_max must be >= 1");
    HarqProcess p;
    p.user = user;
    p.r_source = r_source;
    p.n_max = n_max;
    p.w0_mag2 = w0_mag2;
    return p;
}

void harq_step(HarqProcess& proc, double gamma_i) {
    if (proc.outcome != HarqOutcome::InProgress)
        throw std::logic_error("harq_step: process already finished");
    if (gamma_i < 0.0) throw std::invalid_argument("harq_step: negative SINR");
    proc.gamma_acc += gamma_i;
    proc.attempt += 1;
    // threshold test log2(1 + gamma(n)) >= R, evaluated in the linear domain
    if (proc.gamma_acc >= std::exp2(proc.r_source) - 1.0)
        proc.outcome = HarqOutcome::Success;
    else if (proc.attempt >= proc.n_max)
        proc.outcome = HarqOutcome::Drop;
}

double delivered_rate(const HarqProcess& proc) {
    switch (proc.outcome) {
        case HarqOutcome::Success: return proc.r_source / static_cast<double>(proc.attempt);
        case HarqOutcome::Drop: return 0.0;
        case HarqOutcome::InProgress: break;
    }
    throw std::logic_error("delivered_rate: process still in progress");
}

PfState PfState::init(int n_users, double t_c, double warm_start) {
    if (n_users < 1) throw std::invalid_argument("pf: need at least one user");
    if (t_c < 1.0) throw std::invalid_argument("pf: t_c must be >= 1");
    if (!(warm_start > 0.0)) throw std::invalid_argument("pf: warm start must be > 0");
    PfState s;
    s.avg_throughput.assign(n_users, warm_start);
    s.window_slots = t_c;
    return s;
}

int pf_select(const PfState& pf, std::span<const double> r_eff) {
    if (r_eff.size() != pf.avg_throughput.size())
        throw std::invalid_argument("pf_select: size mismatch");
    int best = 0;
    double best_ratio = r_eff[0] / pf.avg_throughput[0];
    for (std::size_t u = 1; u < r_eff.size(); ++u) {
        const double ratio = r_eff[u] / pf.avg_throughput[u];
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = static_cast<int>(u);
        }
    }
    return best;
}

void pf_update(PfState& pf, int selected, double delivered) {
    const double keep = 1.0 - 1.0 / pf.window_slots;
    for (auto& t : pf.avg_throughput) t *= keep;
    pf.avg_throughput.at(selected) += delivered / pf.window_slots;
    pf.slot += 1;
}

CellUser make_cell_user(const UserGeometry& g) {
    CellUser u;
    u.home_gain = g.pathloss.at(0);
    u.ici_gain.assign(g.pathloss.begin() + 1, g.pathloss.end());
    u.ici_sum = g.ici_gain_sum();
    u.ici_mean = g.ici_gain_mean();
    return u;
}

std::pair<double, double> DirectRateProvider::decide(ApproxKind kind, double desired_power,
                                                     const CellUser& user) const {
    SinrModel m;
    m.desired_power = desired_power;
    m.ici_pathloss = user.ici_gain;
    m.snr_linear = snr_linear_;
    const PolicyDecision d = kind == ApproxKind::GA ? rs_ga(m, n_max_, quad_, search_)
                                                    : rs_ipla(m, n_max_, quad_, search_);
    return {d.r_source, d.r_eff};
}

namespace {

double draw_aggregate_ici(const CellUser& u, Rng& rng) {
    // |w|^2 of a CN(0,1) coefficient is Exp(1); sampling the magnitudes
    // directly is distribution-identical to drawing the coefficients
    double x = 0.0;
    for (double l : u.ici_gain) x += l * rng.exponential();
    return x;
}

} // namespace

CellRunResult run_cell_procedure(const CellConfig& cfg, const std::vector<CellUser>& users,
                                 PolicyKind policy, const RateProvider* expected_rater,
                                 std::uint64_t horizon, Rng& rng, const TraceSink& trace) {
    const int n = static_cast<int>(users.size());
    if (n < 1) throw std::invalid_argument("run_cell_procedure: no users");
    if (horizon < 1) throw std::invalid_argument("run_cell_procedure: horizon must be >= 1");
    if ((policy == PolicyKind::GaBased || policy == PolicyKind::IplaBased) && !expected_rater)
        throw std::invalid_argument("run_cell_procedure: policy needs a rate provider");

    const double inv_rho = 1.0 / cfg.snr_linear;
    PfState pf = PfState::init(n, cfg.t_c, cfg.pf_warm_start);

    CellRunResult res;
    res.throughput.assign(n, 0.0);
    res.scheduled.assign(n, 0);
    std::vector<double> bits(n, 0.0);

    std::vector<double> r_src(n), r_eff(n), w0sq(n);
    std::vector<double> x_now(n), x_prev(n), x_cur(n);
    bool have_history = false;
    const bool track_world = policy == PolicyKind::InstSinr;

    std::uint64_t slot = 0;
    while (slot < horizon) {
        // Step 1/2: rate selection + effective rate for every user.
        // Draw order per decision instant: w0 gains in user order, then any
        // interference gains in user order (keeps runs bit-reproducible).
        for (int u = 0; u < n; ++u) w0sq[u] = rng.exponential();

        switch (policy) {
            case PolicyKind::GenieOpt:
                for (int u = 0; u < n; ++u) x_now[u] = draw_aggregate_ici(users[u], rng);
                for (int u = 0; u < n; ++u) {
                    const double s = users[u].home_gain * w0sq[u];
                    r_src[u] = std::log2(1.0 + s / (x_now[u] + inv_rho));
                    r_eff[u] = r_src[u];
                }
                break;
            case PolicyKind::InstSinr:
                for (int u = 0; u < n; ++u) {
                    const double s = users[u].home_gain * w0sq[u];
                    if (!have_history) {
                        r_src[u] = std::log2(1.0 + s / (users[u].ici_sum + inv_rho));
                        res.cold_start_fallback = true;
                    } else {
                        r_src[u] = std::log2(1.0 + s / (x_prev[u] + inv_rho));
                    }
                    r_eff[u] = r_src[u];
                }
                break;
            case PolicyKind::AvgInterference:
                for (int u = 0; u < n; ++u) {
                    const double s = users[u].home_gain * w0sq[u];
                    r_src[u] = std::log2(1.0 + s / (users[u].ici_sum + inv_rho));
                    r_eff[u] = r_src[u];
                }
                break;
            case PolicyKind::GaBased:
            case PolicyKind::IplaBased: {
                const ApproxKind kind =
                    policy == PolicyKind::GaBased ? ApproxKind::GA : ApproxKind::IPLA;
                for (int u = 0; u < n; ++u) {
                    const double s = users[u].home_gain * w0sq[u];
                    std::tie(r_src[u], r_eff[u]) = expected_rater->decide(kind, s, users[u]);
                }
                break;
            }
        }

        // Step 3: proportional-fair selection on effective rates.
        const int sel = pf_select(pf, r_eff);
        res.scheduled[sel] += 1;
        res.processes += 1;

        // Step 4: HARQ transmission of the scheduled user.
        if (policy == PolicyKind::GenieOpt) {
            // capacity under perfectly known interference: one attempt, no outage
            const double delivered = r_src[sel];
            pf_update(pf, sel, delivered);
            slot += 1;
            bits[sel] += delivered;
            if (trace) trace({slot, sel, 1, std::exp2(delivered) - 1.0, 'S', r_src[sel]});
        } else {
            HarqProcess proc = make_process(sel, r_src[sel], cfg.n_max, w0sq[sel]);
            const double s_sel = users[sel].home_gain * w0sq[sel];
            while (proc.outcome == HarqOutcome::InProgress) {
                double x;
                if (track_world) {
                    for (int u = 0; u < n; ++u) x_cur[u] = draw_aggregate_ici(users[u], rng);
                    x = x_cur[sel];
                } else {
                    x = draw_aggregate_ici(users[sel], rng);
                }
                harq_step(proc, s_sel / (x + inv_rho));
                slot += 1;
                const bool terminal = proc.outcome != HarqOutcome::InProgress;
                if (cfg.pf_mode == PfUpdateMode::PerSlot)
                    pf_update(pf, sel, terminal ? delivered_rate(proc) : 0.0);
                else if (terminal)
                    pf_update(pf, sel, delivered_rate(proc));
                if (track_world) {
                    x_prev = x_cur;
                    have_history = true;
                }
                if (trace)
                    trace({slot, sel, proc.attempt, proc.gamma_acc,
                           terminal ? (proc.outcome == HarqOutcome::Success ? 'S' : 'D') : 'P',
                           proc.r_source});
            }
            if (proc.outcome == HarqOutcome::Success)
                bits[sel] += proc.r_source;
            else
                res.drops += 1;
        }
    }

    res.slots = slot;
    res.pf_average = pf.avg_throughput;
    for (int u = 0; u < n; ++u) res.throughput[u] = bits[u] / static_cast<double>(slot);
    for (double b : bits) res.delivered_bits += b;
    return res;
}

} // namespace harqsim
