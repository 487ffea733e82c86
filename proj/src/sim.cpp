#include "harqsim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace harqsim {

// ---------------------------------------------------------------------------
// statistics
// ---------------------------------------------------------------------------

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean of empty set");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double student_t_975(int dof) {
    static const double t[31] = {0.0,    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                 2.306,  2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
                                 2.120,  2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069,
                                 2.064,  2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (dof < 1) throw std::invalid_argument("t quantile: dof must be >= 1");
    if (dof <= 30) return t[dof];
    // interpolate in 1/dof towards the normal quantile
    const double q30 = t[30], qinf = 1.959964;
    return qinf + (q30 - qinf) * (30.0 / dof);
}

double ci95_halfwidth(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    return student_t_975(static_cast<int>(v.size()) - 1) * sample_sd(v) /
           std::sqrt(static_cast<double>(v.size()));
}

double ks_statistic_sorted(std::span<const double> sorted,
                           const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted.size());
    if (sorted.empty()) throw std::invalid_argument("ks: empty sample");
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max(d, std::max((i + 1.0) / n - f, f - static_cast<double>(i) / n));
    }
    return d;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    return ks_statistic_sorted(samples, cdf);
}

double empirical_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0,1]");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(i);
    return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

namespace {

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

// grid + golden-section maximizer shared by the beta tables
std::pair<double, double> maximize_rate(const std::function<double(double)>& S,
                                        const SearchConfig& search) {
    const int count = static_cast<int>(std::floor(search.r_max / search.grid_step + 1e-9)) + 1;
    int best = 0;
    double best_val = 0.0;
    for (int k = 0; k < count; ++k) {
        const double v = S(k * search.grid_step);
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    double a = std::max(0.0, (best - 1) * search.grid_step);
    double b = std::min(search.r_max, (best + 1) * search.grid_step);
    constexpr double kInvPhi = 0.6180339887498949;
    double c1 = b - kInvPhi * (b - a), c2 = a + kInvPhi * (b - a);
    double f1 = S(c1), f2 = S(c2);
    while (b - a > search.golden_tol) {
        if (f1 >= f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - kInvPhi * (b - a);
            f1 = S(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + kInvPhi * (b - a);
            f2 = S(c2);
        }
    }
    const double r = 0.5 * (a + b);
    const double v = S(r);
    if (best_val > v) return {best * search.grid_step, best_val};
    return {r, v};
}

} // namespace

// ---------------------------------------------------------------------------
// RateTable
// ---------------------------------------------------------------------------

RateTable::RateTable(int interferer_count, int n_max, double snr_linear, double beta_lo,
                     double beta_hi, const QuadratureConfig& q, const SearchConfig& search,
                     int points_per_decade)
    : n_max_(n_max), pts_per_decade_(points_per_decade), snr_linear_(snr_linear) {
    if (n_max < 1 || interferer_count < 1 || points_per_decade < 8)
        throw std::invalid_argument("rate table: bad parameters");
    if (!(beta_lo > 0.0) || !(beta_hi > beta_lo))
        throw std::invalid_argument("rate table: bad beta range");
    build_shape(ga_, 1, q);
    if (interferer_count == 1) {
        ipla_ = ga_;
    } else {
        build_shape(ipla_, interferer_count, q);
    }
    build_beta(beta_ga_, 1, beta_lo, beta_hi, search);
    build_beta(beta_ipla_, interferer_count, beta_lo, beta_hi, search);
}

void RateTable::build_shape(ShapeTable& t, int shape, const QuadratureConfig& q) {
    t.shape = shape;
    CfSpec spec;
    spec.kind = ApproxKind::IPLA;  // scale-free kernel; shape carries everything
    spec.desired_power = 1.0;
    spec.scale = 1.0;
    spec.interferer_count = shape;

    // lower edge: below u_lo even the single-attempt CDF is < 1e-13
    double u_lo = 1.0;
    spec.attempts = 1;
    while (u_lo > 1e-8 && gil_pelaez_cdf_ex(spec, u_lo, q).cdf > 1e-13) u_lo *= 0.5;
    t.u_lo = u_lo;
    t.u_hi = 2048.0;
    t.log_u_lo = std::log(t.u_lo);
    t.step = std::numbers::ln10 / static_cast<double>(pts_per_decade_);
    const int count =
        static_cast<int>(std::ceil((std::log(t.u_hi) - t.log_u_lo) / t.step)) + 1;

    t.f.assign(n_max_, std::vector<double>(count, 0.0));
    std::vector<std::pair<int, int>> work;
    for (int n = 0; n < n_max_; ++n)
        for (int j = 0; j < count; ++j) work.emplace_back(n, j);
    parallel_for(static_cast<int>(work.size()), 0, [&](int w) {
        const auto [n, j] = work[w];
        CfSpec s = spec;
        s.attempts = n + 1;
        const double u = std::exp(t.log_u_lo + j * t.step);
        t.f[n][j] = gil_pelaez_cdf_ex(s, u, q).cdf;
    });
    // scrub quadrature noise: each CDF is monotone in u and in -n
    t.tail_mass.assign(n_max_, 0.0);
    for (int n = 0; n < n_max_; ++n) {
        double run = 0.0;
        for (auto& v : t.f[n]) {
            run = std::max(run, std::min(v, 1.0));
            v = run;
        }
        t.tail_mass[n] = 1.0 - t.f[n].back();
    }
}

double RateTable::cdf(int shape, int n, double u) const {
    const ShapeTable& t = table_for(shape);
    if (n < 1 || n > n_max_) throw std::invalid_argument("rate table: n out of range");
    const auto& f = t.f[n - 1];
    if (u <= t.u_lo) return 0.0;
    if (u >= t.u_hi)
        return 1.0 - t.tail_mass[n - 1] * std::pow(t.u_hi / u, static_cast<double>(shape));
    const double pos = (std::log(u) - t.log_u_lo) / t.step;
    const int i = std::min(static_cast<int>(pos), static_cast<int>(f.size()) - 2);
    const double x = pos - i;
    // Catmull-Rom on the uniform log grid
    const double p0 = f[std::max(i - 1, 0)];
    const double p1 = f[i];
    const double p2 = f[i + 1];
    const double p3 = f[std::min(i + 2, static_cast<int>(f.size()) - 1)];
    const double v = p1 + 0.5 * x * (p2 - p0 + x * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                                    x * (3.0 * (p1 - p2) + p3 - p0)));
    return std::clamp(v, 0.0, 1.0);
}

double RateTable::dlt_from_table(const ShapeTable& t, double rate, double beta) const {
    if (rate <= 0.0) return 0.0;
    const double x = (std::exp2(rate) - 1.0) / beta;
    double sum = 0.0, p_prev = 1.0;
    for (int i = 1; i <= n_max_; ++i) {
        const double p = cdf(t.shape, i, x);
        sum += rate / static_cast<double>(i) * (p_prev - p);
        p_prev = p;
    }
    return sum;
}

void RateTable::build_beta(BetaTable& b, int shape, double beta_lo, double beta_hi,
                           const SearchConfig& search) {
    const ShapeTable& t = table_for(shape);
    b.log_b_lo = std::log(beta_lo);
    b.step = std::numbers::ln10 / static_cast<double>(pts_per_decade_);
    const int count =
        static_cast<int>(std::ceil((std::log(beta_hi) - b.log_b_lo) / b.step)) + 1;
    b.r_star.assign(count, 0.0);
    b.s_star.assign(count, 0.0);
    parallel_for(count, 0, [&](int j) {
        const double beta = std::exp(b.log_b_lo + j * b.step);
        const auto S = [&](double r) { return dlt_from_table(t, r, beta); };
        std::tie(b.r_star[j], b.s_star[j]) = maximize_rate(S, search);
    });
}

const RateTable::ShapeTable& RateTable::table_for(int shape) const {
    if (shape == ga_.shape) return ga_;
    if (shape == ipla_.shape) return ipla_;
    throw std::invalid_argument("rate table: unknown shape");
}

const RateTable::BetaTable& RateTable::beta_for(ApproxKind kind) const {
    return kind == ApproxKind::GA ? beta_ga_ : beta_ipla_;
}

std::pair<double, double> RateTable::decide_beta(ApproxKind kind, double beta) const {
    const BetaTable& b = beta_for(kind);
    const int count = static_cast<int>(b.r_star.size());
    if (!(beta > 0.0)) return {0.0, 0.0};
    const double lb = std::log(beta);
    if (lb <= b.log_b_lo) {
        // R* ~ beta in this regime: scale the edge decision linearly
        const double f = beta / std::exp(b.log_b_lo);
        return {b.r_star.front() * f, b.s_star.front() * f};
    }
    const double pos = (lb - b.log_b_lo) / b.step;
    if (pos >= count - 1) return {b.r_star.back(), b.s_star.back()};
    const int i = static_cast<int>(pos);
    const double x = pos - i;
    return {b.r_star[i] * (1.0 - x) + b.r_star[i + 1] * x,
            b.s_star[i] * (1.0 - x) + b.s_star[i + 1] * x};
}

std::pair<double, double> RateTable::decide(ApproxKind kind, double desired_power,
                                            const CellUser& user) const {
    const double scale =
        kind == ApproxKind::GA ? user.ici_sum + 1.0 / snr_linear_ : user.ici_mean;
    return decide_beta(kind, desired_power / scale);
}

// ---------------------------------------------------------------------------
// single-link experiments
// ---------------------------------------------------------------------------

std::vector<double> empirical_effective_sinr(const SinrModel& model, int n_attempts,
                                             std::size_t samples, Rng& rng) {
    if (n_attempts < 1) throw std::invalid_argument("empirical sinr: n must be >= 1");
    std::vector<double> out(samples);
    const double inv_rho = 1.0 / model.snr_linear;
    for (auto& g : out) {
        double acc = 0.0;
        for (int i = 0; i < n_attempts; ++i) {
            double x = 0.0;
            for (double l : model.ici_pathloss) x += l * rng.exponential();
            acc += model.desired_power / (x + inv_rho);
        }
        g = acc;
    }
    return out;
}

std::vector<QqPoint> qq_data(std::vector<double> samples, const CfSpec& spec,
                             std::span<const double> probabilities, const QuadratureConfig& q) {
    if (samples.empty()) throw std::invalid_argument("qq: empty sample");
    for (double p : probabilities)
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("qq: probabilities must be in (0,1)");
    std::sort(samples.begin(), samples.end());

    const auto F = [&](double x) { return gil_pelaez_cdf(spec, x, q); };

    double p_lo = 1.0, p_hi = 0.0;
    for (double p : probabilities) {
        p_lo = std::min(p_lo, p);
        p_hi = std::max(p_hi, p);
    }

    // coarse monotone grid of the CDF, then bisection polish per quantile
    const double b = spec.rate_scale();
    double lo = b * 1e-3, hi = b * 1e3;
    for (int i = 0; i < 60 && F(lo) > 0.5 * p_lo; ++i) lo *= 0.25;
    for (int i = 0; i < 60 && F(hi) < 1.0 - 0.5 * (1.0 - p_hi); ++i) hi *= 4.0;

    std::vector<double> gx, gf;
    const int grid_n = 160;
    const double lr = std::log(hi / lo) / (grid_n - 1);
    for (int i = 0; i < grid_n; ++i) {
        const double x = lo * std::exp(lr * i);
        gx.push_back(x);
        gf.push_back(i == 0 ? F(x) : std::max(F(x), gf.back()));
    }

    std::vector<QqPoint> out;
    out.reserve(probabilities.size());
    for (double p : probabilities) {
        const auto it = std::lower_bound(gf.begin(), gf.end(), p);
        double a, c;
        if (it == gf.begin()) {
            a = gx.front() * 1e-6;
            c = gx.front();
        } else if (it == gf.end()) {
            a = gx.back();
            c = gx.back() * 1e6;
        } else {
            const std::size_t j = static_cast<std::size_t>(it - gf.begin());
            a = gx[j - 1];
            c = gx[j];
        }
        int iters = 0;
        while (c - a > 1e-7 * c && ++iters <= 80) {
            const double m = 0.5 * (a + c);
            if (F(m) < p)
                a = m;
            else
                c = m;
        }
        if (iters > 80)
            throw NumericError("qq: quantile bisection did not converge", c - a);
        QqPoint pt;
        pt.p = p;
        pt.theoretical = 0.5 * (a + c);
        pt.empirical = empirical_quantile(samples, p);
        out.push_back(pt);
    }
    return out;
}

SimDltCurves single_link_dlt_sim(const SinrModel& model, std::span<const double> rates,
                                 std::size_t processes, int n_max, int dominant_kept, Rng& rng) {
    if (processes == 0) throw std::invalid_argument("dlt sim: need processes >= 1");
    const int k = static_cast<int>(model.ici_pathloss.size());
    if (dominant_kept < 1 || dominant_kept > k)
        throw std::invalid_argument("dlt sim: dominant subset out of range");

    // strongest interferers by path loss
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return model.ici_pathloss[a] > model.ici_pathloss[b]; });
    std::vector<bool> keep(k, false);
    for (int i = 0; i < dominant_kept; ++i) keep[order[i]] = true;

    SimDltCurves out;
    out.rates.assign(rates.begin(), rates.end());
    out.dominant_kept = dominant_kept;
    const std::size_t nr = rates.size();
    std::vector<double> sum_e(nr, 0.0), sq_e(nr, 0.0), sum_d(nr, 0.0), sq_d(nr, 0.0);
    std::vector<double> thr(nr);
    for (std::size_t i = 0; i < nr; ++i) thr[i] = std::exp2(rates[i]) - 1.0;

    const double inv_rho = 1.0 / model.snr_linear;
    std::vector<double> g_exact(n_max), g_dom(n_max);
    for (std::size_t p = 0; p < processes; ++p) {
        double acc_e = 0.0, acc_d = 0.0;
        for (int a = 0; a < n_max; ++a) {
            double x_e = 0.0, x_d = 0.0;
            for (int j = 0; j < k; ++j) {
                const double w = rng.exponential();
                const double c = model.ici_pathloss[j] * w;
                x_e += c;
                if (keep[j]) x_d += c;  // same draw: curves stay pathwise coupled
            }
            acc_e += model.desired_power / (x_e + inv_rho);
            acc_d += model.desired_power / (x_d + inv_rho);
            g_exact[a] = acc_e;
            g_dom[a] = acc_d;
        }
        for (std::size_t i = 0; i < nr; ++i) {
            const double x = thr[i];
            double de = 0.0, dd = 0.0;
            for (int a = 0; a < n_max; ++a)
                if (g_exact[a] >= x) {
                    de = rates[i] / (a + 1.0);
                    break;
                }
            for (int a = 0; a < n_max; ++a)
                if (g_dom[a] >= x) {
                    dd = rates[i] / (a + 1.0);
                    break;
                }
            sum_e[i] += de;
            sq_e[i] += de * de;
            sum_d[i] += dd;
            sq_d[i] += dd * dd;
        }
    }
    const double n = static_cast<double>(processes);
    out.exact.resize(nr);
    out.exact_se.resize(nr);
    out.dominant.resize(nr);
    out.dominant_se.resize(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        out.exact[i] = sum_e[i] / n;
        out.dominant[i] = sum_d[i] / n;
        out.exact_se[i] = std::sqrt(std::max(sq_e[i] / n - out.exact[i] * out.exact[i], 0.0) / n);
        out.dominant_se[i] =
            std::sqrt(std::max(sq_d[i] / n - out.dominant[i] * out.dominant[i], 0.0) / n);
    }
    return out;
}

double mc_dlt_at_rate(const SinrModel& model, double rate, std::size_t processes, int n_max,
                      Rng& rng) {
    if (rate <= 0.0) return 0.0;
    const double x = std::exp2(rate) - 1.0;
    const double inv_rho = 1.0 / model.snr_linear;
    double sum = 0.0;
    for (std::size_t p = 0; p < processes; ++p) {
        double acc = 0.0;
        for (int a = 0; a < n_max; ++a) {
            double xi = 0.0;
            for (double l : model.ici_pathloss) xi += l * rng.exponential();
            acc += model.desired_power / (xi + inv_rho);
            if (acc >= x) {
                sum += rate / (a + 1.0);
                break;
            }
        }
    }
    return sum / static_cast<double>(processes);
}

// ---------------------------------------------------------------------------
// system scenario
// ---------------------------------------------------------------------------

double ScenarioConfig::snr_linear() const { return std::pow(10.0, rho_db / 10.0); }

void ScenarioConfig::validate() const {
    topology.validate();
    quadrature.validate();
    search.validate();
    if (n_users < 1) throw std::invalid_argument("scenario.n_users: must be >= 1");
    if (n_users > 1 && user_radii_m.empty())
        throw std::invalid_argument("scenario.user_radii_m: empty");
    if (n_users > 1 && n_users % static_cast<int>(user_radii_m.size()) != 0)
        throw std::invalid_argument(
            "scenario.n_users: must be a multiple of the user radii list length");
    if (trials < 1) throw std::invalid_argument("scenario.trials: must be >= 1");
    if (horizon < 1) throw std::invalid_argument("scenario.horizon: must be >= 1");
    if (n_max < 1) throw std::invalid_argument("scenario.n_max: must be >= 1");
    if (!(t_c >= 1.0)) throw std::invalid_argument("scenario.t_c: must be >= 1");
    if (!(fairness_floor > 0.0)) throw std::invalid_argument("scenario.fairness_floor: must be > 0");
    if (isinr_delay != 1)
        throw std::invalid_argument("scenario.isinr_delay: only a one-slot delay is modeled");
    for (double r : user_radii_m)
        if (!(r > 0.0)) throw std::invalid_argument("scenario.user_radii_m: radii must be > 0");
}

std::vector<double> scenario_radii(const ScenarioConfig& cfg) {
    std::vector<double> radii(cfg.n_users);
    if (cfg.n_users == 1) {
        radii[0] = cfg.single_user_radius_m;
    } else {
        for (int u = 0; u < cfg.n_users; ++u)
            radii[u] = cfg.user_radii_m[u % cfg.user_radii_m.size()];
    }
    return radii;
}

std::shared_ptr<RateTable> build_rate_table(const ScenarioConfig& cfg) {
    cfg.validate();
    const double rho = cfg.snr_linear();
    std::vector<double> radii = cfg.user_radii_m;
    radii.push_back(cfg.single_user_radius_m);
    double ratio_lo = std::numeric_limits<double>::max(), ratio_hi = 0.0;
    for (double r : radii) {
        for (int i = 0; i < 64; ++i) {
            const double theta = -std::numbers::pi + 2.0 * std::numbers::pi * (i + 0.5) / 64.0;
            const UserGeometry g = build_user(cfg.topology, r, theta);
            const double l0 = g.home_gain();
            for (double scale : {g.ici_gain_mean(), g.ici_gain_sum() + 1.0 / rho}) {
                ratio_lo = std::min(ratio_lo, l0 / scale);
                ratio_hi = std::max(ratio_hi, l0 / scale);
            }
        }
    }
    // fading spans |w0|^2 ~ Exp(1); pad both ends well past plausible draws
    return std::make_shared<RateTable>(cfg.topology.interferer_count(), cfg.n_max, rho,
                                       ratio_lo * 1e-7, ratio_hi * 1e3, cfg.quadrature,
                                       cfg.search, cfg.table_points_per_decade);
}

MetricsReport run_scenario(const ScenarioConfig& cfg, const RateProvider* provider,
                           const TraceSink& trace) {
    cfg.validate();
    const std::vector<double> radii = scenario_radii(cfg);
    const double rho = cfg.snr_linear();

    std::shared_ptr<RateTable> table;
    std::unique_ptr<DirectRateProvider> direct;
    const bool needs_rater =
        cfg.policy == PolicyKind::GaBased || cfg.policy == PolicyKind::IplaBased;
    if (needs_rater && !provider) {
        if (cfg.rate_eval == RateEvalMode::Table) {
            table = build_rate_table(cfg);
            provider = table.get();
        } else {
            direct = std::make_unique<DirectRateProvider>(cfg.n_max, rho, cfg.quadrature,
                                                          cfg.search);
            provider = direct.get();
        }
    }

    CellConfig cell;
    cell.n_max = cfg.n_max;
    cell.snr_linear = rho;
    cell.t_c = cfg.t_c;
    cell.pf_mode = cfg.pf_mode;
    cell.isinr_delay = cfg.isinr_delay;
    cell.pf_warm_start = cfg.pf_warm_start;

    struct TrialOut {
        double dlt = 0.0, fm = 0.0;
        std::vector<double> per_user;
        bool floored = false;
    };
    std::vector<TrialOut> results(cfg.trials);

    parallel_for(cfg.trials, cfg.threads, [&](int trial) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(trial));
        // user angles first, in user order, then the cell run consumes the stream
        std::vector<CellUser> users;
        users.reserve(cfg.n_users);
        for (int u = 0; u < cfg.n_users; ++u) {
            const double theta = rng.uniform_angle();
            users.push_back(make_cell_user(build_user(cfg.topology, radii[u], theta)));
        }
        const CellRunResult r =
            run_cell_procedure(cell, users, cfg.policy, provider, cfg.horizon, rng,
                               trial == 0 ? trace : TraceSink{});
        TrialOut& out = results[trial];
        out.dlt = r.delivered_bits / static_cast<double>(r.slots);
        out.per_user = r.throughput;
        out.fm = 0.0;
        for (double t : r.throughput) {
            if (t < cfg.fairness_floor) out.floored = true;
            out.fm += std::log(std::max(t, cfg.fairness_floor));
        }
    });

    MetricsReport rep;
    rep.trials = cfg.trials;
    rep.per_trial_dlt.reserve(cfg.trials);
    rep.per_trial_fairness.reserve(cfg.trials);
    rep.per_user_throughput.assign(cfg.n_users, 0.0);
    for (const auto& r : results) {
        rep.per_trial_dlt.push_back(r.dlt);
        rep.per_trial_fairness.push_back(r.fm);
        rep.fairness_floored = rep.fairness_floored || r.floored;
        for (int u = 0; u < cfg.n_users; ++u) rep.per_user_throughput[u] += r.per_user[u];
    }
    for (auto& t : rep.per_user_throughput) t /= static_cast<double>(cfg.trials);
    rep.system_dlt = mean(rep.per_trial_dlt);
    rep.fairness = mean(rep.per_trial_fairness);
    rep.system_dlt_ci = ci95_halfwidth(rep.per_trial_dlt);
    rep.fairness_ci = ci95_halfwidth(rep.per_trial_fairness);
    return rep;
}

} // namespace harqsim
