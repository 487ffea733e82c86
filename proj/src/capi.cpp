#include "harqsim.h"

#include <cstring>
#include <fstream>
#include <string>

#include "harqsim/experiments.hpp"

using namespace harqsim;

struct harqsim_config {
    RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return HARQSIM_OK;
    } catch (const ConfigError& e) {
        return fail(HARQSIM_ERR_CONFIG, e.what());
    } catch (const NumericError& e) {
        return fail(HARQSIM_ERR_NUMERIC, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(HARQSIM_ERR_CONFIG, e.what());
    } catch (const std::domain_error& e) {
        return fail(HARQSIM_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(HARQSIM_ERR_RUNTIME, e.what());
    }
}

int require(bool ok, const char* what) { return ok ? HARQSIM_OK : fail(HARQSIM_ERR_CONFIG, what); }

RunConfig with_single_link(const harqsim_config* cfg, const char* approx, double radius) {
    RunConfig c = cfg->cfg;
    c.rate_opt_approx = approx;
    c.rate_opt_r_m = radius;
    return c;
}

} // namespace

extern "C" {

const char* harqsim_version(void) { return "1.0.0"; }

const char* harqsim_status_name(int status) {
    switch (status) {
        case HARQSIM_OK: return "ok";
        case HARQSIM_ERR_RUNTIME: return "runtime-error";
        case HARQSIM_ERR_CONFIG: return "config-error";
        case HARQSIM_ERR_NUMERIC: return "numeric-error";
    }
    return "unknown";
}

const char* harqsim_last_error(void) { return g_last_error.c_str(); }

harqsim_config* harqsim_config_create(void) { return new harqsim_config{}; }

harqsim_config* harqsim_config_clone(const harqsim_config* cfg) {
    return cfg ? new harqsim_config{cfg->cfg} : nullptr;
}

void harqsim_config_destroy(harqsim_config* cfg) { delete cfg; }

int harqsim_config_load_file(harqsim_config* cfg, const char* path) {
    if (int rc = require(cfg && path, "null argument")) return rc;
    return guarded([&] {
        RunConfig base = cfg->cfg;
        cfg->cfg = load_config_file(path);
        (void)base;
    });
}

int harqsim_config_set(harqsim_config* cfg, const char* key, const char* value) {
    if (int rc = require(cfg && key && value, "null argument")) return rc;
    return guarded([&] { config_set(cfg->cfg, key, value); });
}

int harqsim_config_get(const harqsim_config* cfg, const char* key, char* buf, size_t buflen) {
    if (int rc = require(cfg && key && buf && buflen > 0, "null argument")) return rc;
    return guarded([&] {
        const std::string v = config_get(cfg->cfg, key);
        if (v.size() + 1 > buflen) throw std::invalid_argument("buffer too small");
        std::memcpy(buf, v.c_str(), v.size() + 1);
    });
}

int harqsim_config_write_file(const harqsim_config* cfg, const char* path) {
    if (int rc = require(cfg && path, "null argument")) return rc;
    return guarded([&] {
        std::ofstream out(path);
        if (!out) throw std::runtime_error(std::string("cannot write ") + path);
        out << emit_config(cfg->cfg);
    });
}

int harqsim_config_validate(const harqsim_config* cfg) {
    if (int rc = require(cfg != nullptr, "null argument")) return rc;
    return guarded([&] { validate_config(cfg->cfg); });
}

int harqsim_rate_opt(const harqsim_config* cfg, const char* approx, double user_radius_m,
                     double* r_star, double* s_at_r_star) {
    if (int rc = require(cfg && approx && r_star && s_at_r_star, "null argument")) return rc;
    return guarded([&] {
        const RateOptResult r = rate_opt_result(with_single_link(cfg, approx, user_radius_m));
        *r_star = r.r_star;
        *s_at_r_star = r.s_at_r_star;
    });
}

int harqsim_dlt(const harqsim_config* cfg, const char* approx, double user_radius_m, double rate,
                double* value) {
    if (int rc = require(cfg && approx && value, "null argument")) return rc;
    return guarded([&] {
        const RunConfig c = with_single_link(cfg, approx, user_radius_m);
        validate_config(c);
        const SinrModel m = single_link_model(c, user_radius_m);
        const ApproxKind kind = std::string(approx) == "ga" ? ApproxKind::GA : ApproxKind::IPLA;
        *value = dlt(make_cf_spec(kind, m), rate, c.n_max, c.quadrature);
    });
}

int harqsim_outage(const harqsim_config* cfg, const char* approx, double user_radius_m,
                   int attempts, double rate, double* value) {
    if (int rc = require(cfg && approx && value, "null argument")) return rc;
    if (int rc = require(attempts >= 0, "attempts must be >= 0")) return rc;
    return guarded([&] {
        const RunConfig c = with_single_link(cfg, approx, user_radius_m);
        validate_config(c);
        const SinrModel m = single_link_model(c, user_radius_m);
        const ApproxKind kind = std::string(approx) == "ga" ? ApproxKind::GA : ApproxKind::IPLA;
        CfSpec spec = make_cf_spec(kind, m);
        spec.attempts = attempts;
        *value = outage_probability(spec, rate, c.quadrature);
    });
}

int harqsim_run_dlt_curves(const harqsim_config* cfg, const char* out_dir) {
    if (int rc = require(cfg && out_dir, "null argument")) return rc;
    return guarded([&] { run_dlt_curves(cfg->cfg, out_dir); });
}

int harqsim_run_qq(const harqsim_config* cfg, const char* out_dir) {
    if (int rc = require(cfg && out_dir, "null argument")) return rc;
    return guarded([&] { run_qq(cfg->cfg, out_dir); });
}

int harqsim_run_simulate(const harqsim_config* cfg, const char* out_dir, const char* trace_file) {
    if (int rc = require(cfg && out_dir, "null argument")) return rc;
    return guarded([&] { run_simulate(cfg->cfg, out_dir, trace_file ? trace_file : ""); });
}

int harqsim_run_rate_opt(const harqsim_config* cfg, const char* out_dir) {
    if (int rc = require(cfg && out_dir, "null argument")) return rc;
    return guarded([&] { run_rate_opt(cfg->cfg, out_dir); });
}

} // extern "C"
