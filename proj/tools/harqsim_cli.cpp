// Command-line front end; talks to the engine exclusively through the
// shared-library C interface in harqsim.h.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "harqsim.h"

namespace {

struct ConfigHandle {
    harqsim_config* ptr;
    ConfigHandle() : ptr(harqsim_config_create()) {}
    ~ConfigHandle() { harqsim_config_destroy(ptr); }
    ConfigHandle(const ConfigHandle&) = delete;
    ConfigHandle& operator=(const ConfigHandle&) = delete;
};

int report(int rc, const char* where) {
    if (rc != HARQSIM_OK)
        std::fprintf(stderr, "harqsim: %s: %s (%s)\n", where, harqsim_last_error(),
                     harqsim_status_name(rc));
    return rc;
}

// key/value pairs collected from flags, applied after the config file
struct Override {
    std::string key, value;
};

int apply_overrides(harqsim_config* cfg, const std::vector<Override>& ovs) {
    for (const auto& o : ovs)
        if (int rc = harqsim_config_set(cfg, o.key.c_str(), o.value.c_str()))
            return report(rc, o.key.c_str());
    return HARQSIM_OK;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-cell HARQ link adaptation and user scheduling simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", format;
    std::string seed;
    app.add_option("--config", config_path, "config file (sectioned key=value)");
    app.add_option("--seed", seed, "base RNG seed");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--format", format, "output table format: csv|json");

    std::vector<Override> ovs;
    auto opt = [&ovs](CLI::App* cmd, const char* flag, const char* key, const char* help) {
        auto holder = std::make_shared<std::string>();
        cmd->add_option_function<std::string>(
               flag, [&ovs, key, holder](const std::string& v) { ovs.push_back({key, v}); }, help)
            ->expected(1);
    };

    CLI::App* dlt = app.add_subcommand("dlt-curve",
                                       "throughput-vs-rate curves (analytical + simulated)");
    opt(dlt, "--r", "dlt_curve.r_list_m", "user distances in meters, comma list");
    opt(dlt, "--alpha", "dlt_curve.alpha_list", "path-loss exponents, comma list");
    opt(dlt, "--rstep", "dlt_curve.rate_step", "rate grid step");
    opt(dlt, "--rmax", "search.r_max", "rate grid ceiling");
    opt(dlt, "--processes", "dlt_curve.sim_processes", "Monte Carlo processes per point");
    opt(dlt, "--nmax", "harq.n_max", "max transmission attempts");

    CLI::App* qq = app.add_subcommand("qq", "theoretical vs empirical SINR quantiles");
    opt(qq, "--samples", "qq.samples", "empirical sample count");
    opt(qq, "--approx", "qq.approx_list", "approximations: ga,ipla");
    opt(qq, "--n", "qq.n_list", "attempt counts, comma list");
    opt(qq, "--r", "scenario.single_user_radius_m", "user distance in meters");

    CLI::App* sim = app.add_subcommand("simulate", "system-level policy comparison sweep");
    opt(sim, "--users", "simulate.users_list", "user counts, comma list");
    opt(sim, "--policies", "simulate.policies", "policies: genie,isinr,avgx,ga,ipla");
    opt(sim, "--horizon", "scenario.horizon", "slots per trial");
    opt(sim, "--trials", "scenario.trials", "independent trials");
    opt(sim, "--threads", "scenario.threads", "worker threads (0 = auto)");
    std::string trace_file;
    sim->add_option("--trace", trace_file, "per-slot trace CSV (first point, trial 0)");

    CLI::App* ropt = app.add_subcommand("rate-opt", "single rate decision for one geometry");
    opt(ropt, "--approx", "rate_opt.approx", "approximation: ga|ipla");
    opt(ropt, "--r", "rate_opt.user_radius_m", "user distance in meters");
    opt(ropt, "--theta", "scenario.user_theta_deg", "user angle in degrees");
    opt(ropt, "--nmax", "harq.n_max", "max transmission attempts");
    bool dump_curve = false;
    ropt->add_flag("--dump-curve", dump_curve, "also write the throughput curve");

    CLI11_PARSE(app, argc, argv);

    ConfigHandle cfg;
    if (!config_path.empty())
        if (int rc = report(harqsim_config_load_file(cfg.ptr, config_path.c_str()), "--config"))
            return rc;
    if (!seed.empty())
        if (int rc = report(harqsim_config_set(cfg.ptr, "run.seed", seed.c_str()), "--seed"))
            return rc;
    if (!format.empty())
        if (int rc = report(harqsim_config_set(cfg.ptr, "run.format", format.c_str()), "--format"))
            return rc;
    if (int rc = apply_overrides(cfg.ptr, ovs)) return rc;

    if (dlt->parsed())
        return report(harqsim_run_dlt_curves(cfg.ptr, out_dir.c_str()), "dlt-curve");
    if (qq->parsed()) return report(harqsim_run_qq(cfg.ptr, out_dir.c_str()), "qq");
    if (sim->parsed())
        return report(harqsim_run_simulate(cfg.ptr, out_dir.c_str(),
                                           trace_file.empty() ? nullptr : trace_file.c_str()),
                      "simulate");
    if (ropt->parsed()) {
        if (dump_curve)
            if (int rc = report(harqsim_config_set(cfg.ptr, "rate_opt.dump_curve", "true"),
                                "--dump-curve"))
                return rc;
        char approx[16], radius[40];
        if (int rc = report(harqsim_config_get(cfg.ptr, "rate_opt.approx", approx, sizeof approx),
                            "rate-opt"))
            return rc;
        if (int rc = report(
                harqsim_config_get(cfg.ptr, "rate_opt.user_radius_m", radius, sizeof radius),
                "rate-opt"))
            return rc;
        double r_star = 0.0, s_star = 0.0;
        if (int rc = report(
                harqsim_rate_opt(cfg.ptr, approx, std::stod(radius), &r_star, &s_star), "rate-opt"))
            return rc;
        std::printf("approx=%s r_m=%s r_star=%.6f s_at_r_star=%.6f\n", approx, radius, r_star,
                    s_star);
        if (dump_curve)
            return report(harqsim_run_rate_opt(cfg.ptr, out_dir.c_str()), "rate-opt");
        return 0;
    }
    return 0;
}
