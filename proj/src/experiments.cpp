#include "harqsim/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <map>
#include <thread>

#include "harqsim/dlt.hpp"

namespace harqsim {

namespace fs = std::filesystem;

void parallel_for_indexed(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// csv/json table with a fixed column layout; string columns are quoted in
// json output, everything else is numeric
class TableWriter {
public:
    TableWriter(std::vector<std::string> columns, std::vector<bool> is_string)
        : cols_(std::move(columns)), is_string_(std::move(is_string)) {}

    void row(std::vector<std::string> values) { rows_.push_back(std::move(values)); }

    std::string filename(const std::string& stem, const std::string& format) const {
        return stem + "." + format;
    }

    void write(const fs::path& dir, const std::string& stem, const std::string& format) const {
        std::ofstream out(dir / filename(stem, format));
        if (!out) throw std::runtime_error("cannot write output file in " + dir.string());
        if (format == "csv") {
            for (std::size_t c = 0; c < cols_.size(); ++c)
                out << cols_[c] << (c + 1 < cols_.size() ? ',' : '\n');
            for (const auto& r : rows_) {
                for (std::size_t c = 0; c < r.size(); ++c)
                    out << r[c] << (c + 1 < r.size() ? ',' : '\n');
            }
        } else {
            out << "[\n";
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                out << "  {";
                for (std::size_t c = 0; c < cols_.size(); ++c) {
                    out << '"' << cols_[c] << "\": ";
                    if (is_string_[c])
                        out << '"' << rows_[i][c] << '"';
                    else
                        out << rows_[i][c];
                    if (c + 1 < cols_.size()) out << ", ";
                }
                out << (i + 1 < rows_.size() ? "},\n" : "}\n");
            }
            out << "]\n";
        }
    }

private:
    std::vector<std::string> cols_;
    std::vector<bool> is_string_;
    std::vector<std::vector<std::string>> rows_;
};

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const RunConfig& cfg, const fs::path& dir, const std::string& command,
                    const std::vector<std::string>& files) {
    std::ofstream out(dir / "manifest.ini");
    if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
    out << "[meta]\n";
    out << "command = " << command << "\n";
    out << "timestamp = " << iso_timestamp() << "\n";
    std::string names;
    for (std::size_t i = 0; i < files.size(); ++i) names += (i ? "," : "") + files[i];
    out << "files = " << names << "\n\n";
    out << emit_config(cfg);
}

fs::path prepare_dir(const std::string& out_dir) {
    fs::path dir(out_dir.empty() ? "." : out_dir);
    fs::create_directories(dir);
    return dir;
}

std::string trim_num(double v) {
    // short form for file names: 250, 2.5, ...
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

SinrModel single_link_model(const RunConfig& cfg, double radius_m, double alpha_override) {
    const CellTopology topo = make_topology(cfg, alpha_override);
    const UserGeometry g =
        build_user(topo, radius_m, cfg.user_theta_deg * std::numbers::pi / 180.0);
    SinrModel m;
    m.desired_power = g.home_gain();  // |w0|^2 = 1
    m.ici_pathloss.assign(g.pathloss.begin() + 1, g.pathloss.end());
    m.snr_linear = std::pow(10.0, cfg.rho_db / 10.0);
    return m;
}

std::vector<std::string> run_dlt_curves(const RunConfig& cfg, const std::string& out_dir) {
    validate_config(cfg);
    const fs::path dir = prepare_dir(out_dir);

    struct Combo {
        double r, alpha;
    };
    std::vector<Combo> combos;
    for (double r : cfg.r_list_m)
        for (double a : cfg.alpha_list) combos.push_back({r, a});

    std::vector<double> rates;
    for (double r = 0.0; r <= cfg.search.r_max + 1e-9; r += cfg.rate_step) rates.push_back(r);

    std::vector<std::string> files(combos.size());
    std::vector<TableWriter> tables(
        combos.size(), TableWriter({"approx", "R", "S_R", "n_max"}, {true, false, false, false}));

    parallel_for_indexed(static_cast<int>(combos.size()), cfg.threads, [&](int idx) {
        const Combo& cb = combos[idx];
        const SinrModel model = single_link_model(cfg, cb.r, cb.alpha);

        TableWriter& tw = tables[idx];
        for (ApproxKind kind : {ApproxKind::GA, ApproxKind::IPLA}) {
            const CfSpec spec = make_cf_spec(kind, model);
            for (double r : rates)
                tw.row({to_string(kind), fmt(r), fmt(dlt(spec, r, cfg.n_max, cfg.quadrature)),
                        std::to_string(cfg.n_max)});
        }
        Rng rng(cfg.seed, 0x1000 + static_cast<std::uint64_t>(idx));
        const SimDltCurves sim = single_link_dlt_sim(model, rates, cfg.sim_processes, cfg.n_max,
                                                     cfg.dominant_kept, rng);
        for (std::size_t i = 0; i < rates.size(); ++i)
            tw.row({"sim_exact", fmt(rates[i]), fmt(sim.exact[i]), std::to_string(cfg.n_max)});
        for (std::size_t i = 0; i < rates.size(); ++i)
            tw.row({"sim_dom" + std::to_string(cfg.dominant_kept), fmt(rates[i]),
                    fmt(sim.dominant[i]), std::to_string(cfg.n_max)});

        const std::string stem = "dlt_r" + trim_num(cb.r) + "_alpha" + trim_num(cb.alpha);
        files[idx] = tw.filename(stem, cfg.format);
        tw.write(dir, stem, cfg.format);
    });

    write_manifest(cfg, dir, "dlt-curve", files);
    return files;
}

std::vector<std::string> run_qq(const RunConfig& cfg, const std::string& out_dir) {
    validate_config(cfg);
    const fs::path dir = prepare_dir(out_dir);
    const SinrModel model = single_link_model(cfg, cfg.single_user_radius_m);

    std::vector<double> probs;
    for (int i = 0; i < cfg.prob_count; ++i)
        probs.push_back(cfg.prob_count == 1 ? cfg.prob_lo
                                            : cfg.prob_lo + (cfg.prob_hi - cfg.prob_lo) * i /
                                                  (cfg.prob_count - 1.0));

    struct Series {
        int n;
        ApproxKind kind;
        std::vector<QqPoint> pts;
    };
    std::vector<Series> series;
    for (int n : cfg.qq_n_list)
        for (const auto& a : cfg.qq_approx_list)
            series.push_back({n, a == "ga" ? ApproxKind::GA : ApproxKind::IPLA, {}});

    // empirical samples shared by both approximations at each n
    std::map<int, std::vector<double>> samples;
    for (int n : cfg.qq_n_list) {
        if (samples.count(n)) continue;
        Rng rng(cfg.seed, 0x2000 + static_cast<std::uint64_t>(n));
        samples[n] = empirical_effective_sinr(model, n, cfg.qq_samples, rng);
    }

    parallel_for_indexed(static_cast<int>(series.size()), cfg.threads, [&](int i) {
        Series& s = series[i];
        CfSpec spec = make_cf_spec(s.kind, model);
        spec.attempts = s.n;
        s.pts = qq_data(samples[s.n], spec, probs, cfg.quadrature);
    });

    TableWriter tw({"p", "theoretical_q", "empirical_q", "approx", "n"},
                   {false, false, false, true, false});
    for (const auto& s : series)
        for (const auto& p : s.pts)
            tw.row({fmt(p.p), fmt(p.theoretical), fmt(p.empirical), to_string(s.kind),
                    std::to_string(s.n)});
    tw.write(dir, "qq", cfg.format);

    const std::vector<std::string> files{tw.filename("qq", cfg.format)};
    write_manifest(cfg, dir, "qq", files);
    return files;
}

std::vector<std::string> run_simulate(const RunConfig& cfg, const std::string& out_dir,
                                      const std::string& trace_file) {
    validate_config(cfg);
    const fs::path dir = prepare_dir(out_dir);

    ScenarioConfig base = make_scenario(cfg);

    bool any_expected = false;
    for (const auto& p : cfg.policies) {
        const PolicyKind k = *policy_from_string(p);
        any_expected |= k == PolicyKind::GaBased || k == PolicyKind::IplaBased;
    }

    std::shared_ptr<RateTable> table;
    std::unique_ptr<DirectRateProvider> direct;
    const RateProvider* provider = nullptr;
    if (any_expected) {
        ScenarioConfig probe = base;
        probe.n_users = static_cast<int>(base.user_radii_m.size());
        probe.policy = PolicyKind::IplaBased;
        if (base.rate_eval == RateEvalMode::Table) {
            table = build_rate_table(probe);
            provider = table.get();
        } else {
            direct = std::make_unique<DirectRateProvider>(base.n_max, base.snr_linear(),
                                                          base.quadrature, base.search);
            provider = direct.get();
        }
    }

    TableWriter results({"policy", "n_users", "trial", "system_dlt", "fairness"},
                        {true, false, false, false, false});
    TableWriter agg({"policy", "n_users", "trials", "system_dlt_mean", "system_dlt_ci95",
                     "fairness_mean", "fairness_ci95", "fairness_floored"},
                    {true, false, false, false, false, false, false, false});

    std::ofstream trace_out;
    TraceSink sink;
    bool first_point = true;
    if (!trace_file.empty()) {
        trace_out.open(trace_file);
        if (!trace_out) throw std::runtime_error("cannot open trace file " + trace_file);
        trace_out << "trial,slot,cell,user,attempt,gamma_acc,outcome\n";
    }

    for (int n_users : cfg.users_list) {
        for (const auto& pol : cfg.policies) {
            ScenarioConfig s = base;
            s.n_users = n_users;
            s.policy = *policy_from_string(pol);
            if (trace_out.is_open() && first_point) {
                sink = [&](const TraceRow& r) {
                    trace_out << 0 << ',' << r.slot << ",0," << r.user << ',' << r.attempt << ','
                              << fmt(r.gamma_acc) << ',' << r.outcome << '\n';
                };
            } else {
                sink = {};
            }
            const MetricsReport rep = run_scenario(s, provider, sink);
            first_point = false;
            for (int t = 0; t < rep.trials; ++t)
                results.row({pol, std::to_string(n_users), std::to_string(t),
                             fmt(rep.per_trial_dlt[t]), fmt(rep.per_trial_fairness[t])});
            agg.row({pol, std::to_string(n_users), std::to_string(rep.trials),
                     fmt(rep.system_dlt), fmt(rep.system_dlt_ci), fmt(rep.fairness),
                     fmt(rep.fairness_ci), rep.fairness_floored ? "1" : "0"});
        }
    }

    results.write(dir, "results", cfg.format);
    agg.write(dir, "aggregate", cfg.format);
    std::vector<std::string> files{results.filename("results", cfg.format),
                                   agg.filename("aggregate", cfg.format)};
    if (trace_out.is_open()) files.push_back(trace_file);
    write_manifest(cfg, dir, "simulate", files);
    return files;
}

RateOptResult rate_opt_result(const RunConfig& cfg) {
    validate_config(cfg);
    const SinrModel model = single_link_model(cfg, cfg.rate_opt_r_m);
    const ApproxKind kind = cfg.rate_opt_approx == "ga" ? ApproxKind::GA : ApproxKind::IPLA;
    const CfSpec spec = make_cf_spec(kind, model);
    const RateDecision d = optimize_rate(spec, cfg.n_max, cfg.quadrature, cfg.search);
    return {cfg.rate_opt_approx, d.r_star, d.s_at_r_star, d.flags};
}

std::vector<std::string> run_rate_opt(const RunConfig& cfg, const std::string& out_dir) {
    validate_config(cfg);
    const fs::path dir = prepare_dir(out_dir);
    std::vector<std::string> files;
    if (cfg.rate_opt_dump_curve) {
        const SinrModel model = single_link_model(cfg, cfg.rate_opt_r_m);
        const ApproxKind kind = cfg.rate_opt_approx == "ga" ? ApproxKind::GA : ApproxKind::IPLA;
        const CfSpec spec = make_cf_spec(kind, model);
        const DltCurve c =
            dlt_curve(spec, cfg.search.r_max, cfg.rate_step, cfg.n_max, cfg.quadrature);
        TableWriter tw({"approx", "R", "S_R", "n_max"}, {true, false, false, false});
        for (std::size_t i = 0; i < c.rates.size(); ++i)
            tw.row({to_string(kind), fmt(c.rates[i]), fmt(c.values[i]), std::to_string(c.n_max)});
        tw.write(dir, "rate_opt_curve", cfg.format);
        files.push_back(tw.filename("rate_opt_curve", cfg.format));
    }
    write_manifest(cfg, dir, "rate-opt", files);
    return files;
}

} // namespace harqsim
