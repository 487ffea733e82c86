#include "harqsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace harqsim {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& path) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(path + ": expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& v, const std::string& path) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return i;
    } catch (const std::exception&) {
        throw ConfigError(path + ": expected an integer, got '" + v + "'");
    }
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(v);
    while (std::getline(ss, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += f(v[i]);
    }
    return out;
}

struct Field {
    std::string section, key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

#define F_DOUBLE(sec, key, expr)                                                        \
    Field{sec, key, [](const RunConfig& c) { return fmt_double(c.expr); },              \
          [](RunConfig& c, const std::string& v) { c.expr = parse_double(v, sec "." key); }}

#define F_INT(sec, key, expr)                                                           \
    Field{sec, key, [](const RunConfig& c) { return std::to_string(c.expr); },          \
          [](RunConfig& c, const std::string& v) {                                      \
              c.expr = static_cast<decltype(c.expr)>(parse_int(v, sec "." key));        \
          }}

#define F_STRING(sec, key, expr)                                         \
    Field{sec, key, [](const RunConfig& c) { return c.expr; },           \
          [](RunConfig& c, const std::string& v) { c.expr = trim(v); }}

#define F_BOOL(sec, key, expr)                                                             \
    Field{sec, key, [](const RunConfig& c) { return c.expr ? "true" : "false"; },          \
          [](RunConfig& c, const std::string& v) {                                         \
              if (v == "true" || v == "1")                                                 \
                  c.expr = true;                                                           \
              else if (v == "false" || v == "0")                                           \
                  c.expr = false;                                                          \
              else                                                                         \
                  throw ConfigError(sec "." key ": expected true/false, got '" + v + "'"); \
          }}

#define F_DLIST(sec, key, expr)                                                              \
    Field{sec, key,                                                                         \
          [](const RunConfig& c) {                                                          \
              return join<double>(c.expr, [](const double& d) { return fmt_double(d); });   \
          },                                                                                \
          [](RunConfig& c, const std::string& v) {                                          \
              c.expr.clear();                                                               \
              for (const auto& item : split_list(v))                                        \
                  c.expr.push_back(parse_double(item, sec "." key));                        \
          }}

#define F_ILIST(sec, key, expr)                                                            \
    Field{sec, key,                                                                        \
          [](const RunConfig& c) {                                                         \
              return join<int>(c.expr, [](const int& d) { return std::to_string(d); });    \
          },                                                                               \
          [](RunConfig& c, const std::string& v) {                                         \
              c.expr.clear();                                                              \
              for (const auto& item : split_list(v))                                       \
                  c.expr.push_back(static_cast<int>(parse_int(item, sec "." key)));        \
          }}

#define F_SLIST(sec, key, expr)                                                          \
    Field{sec, key,                                                                      \
          [](const RunConfig& c) {                                                       \
              return join<std::string>(c.expr, [](const std::string& s) { return s; }); \
          },                                                                             \
          [](RunConfig& c, const std::string& v) { c.expr = split_list(v); }}

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        F_INT("run", "seed", seed),
        F_STRING("run", "format", format),
        F_DLIST("geometry", "bs_distance_m", bs_distance_m),
        F_DLIST("geometry", "bs_angle_deg", bs_angle_deg),
        F_DOUBLE("geometry", "pl0_db", pl0_db),
        F_DOUBLE("geometry", "ref_distance_m", ref_distance_m),
        F_DOUBLE("geometry", "pathloss_exponent", pathloss_exponent),
        F_DOUBLE("geometry", "min_user_distance_m", min_user_distance_m),
        F_DOUBLE("channel", "rho_db", rho_db),
        F_INT("harq", "n_max", n_max),
        F_DOUBLE("mac", "t_c", t_c),
        F_STRING("mac", "pf_update", pf_update),
        F_DOUBLE("mac", "pf_warm_start", pf_warm_start),
        F_INT("mac", "isinr_delay", isinr_delay),
        F_DOUBLE("quadrature", "t_min", quadrature.t_min),
        F_DOUBLE("quadrature", "t_max_cap", quadrature.t_max_cap),
        F_DOUBLE("quadrature", "tail_epsilon", quadrature.tail_epsilon),
        F_DOUBLE("quadrature", "abs_tol", quadrature.abs_tol),
        F_DOUBLE("quadrature", "rel_tol", quadrature.rel_tol),
        F_INT("quadrature", "max_subdivisions", quadrature.max_subdivisions),
        F_DOUBLE("search", "r_max", search.r_max),
        F_DOUBLE("search", "grid_step", search.grid_step),
        F_DOUBLE("search", "golden_tol", search.golden_tol),
        F_INT("scenario", "n_users", n_users),
        F_DLIST("scenario", "user_radii_m", user_radii_m),
        F_DOUBLE("scenario", "single_user_radius_m", single_user_radius_m),
        F_DOUBLE("scenario", "user_theta_deg", user_theta_deg),
        F_INT("scenario", "horizon", horizon),
        F_INT("scenario", "trials", trials),
        F_STRING("scenario", "policy", policy),
        F_DOUBLE("scenario", "fairness_floor", fairness_floor),
        F_STRING("scenario", "rate_eval", rate_eval),
        F_INT("scenario", "table_points_per_decade", table_points_per_decade),
        F_INT("scenario", "threads", threads),
        F_DLIST("dlt_curve", "r_list_m", r_list_m),
        F_DLIST("dlt_curve", "alpha_list", alpha_list),
        F_DOUBLE("dlt_curve", "rate_step", rate_step),
        F_INT("dlt_curve", "sim_processes", sim_processes),
        F_INT("dlt_curve", "dominant_kept", dominant_kept),
        F_INT("qq", "samples", qq_samples),
        F_ILIST("qq", "n_list", qq_n_list),
        F_SLIST("qq", "approx_list", qq_approx_list),
        F_DOUBLE("qq", "prob_lo", prob_lo),
        F_DOUBLE("qq", "prob_hi", prob_hi),
        F_INT("qq", "prob_count", prob_count),
        F_ILIST("simulate", "users_list", users_list),
        F_SLIST("simulate", "policies", policies),
        F_STRING("rate_opt", "approx", rate_opt_approx),
        F_DOUBLE("rate_opt", "user_radius_m", rate_opt_r_m),
        F_BOOL("rate_opt", "dump_curve", rate_opt_dump_curve),
    };
    return f;
}

const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : fields())
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

} // namespace

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section == "meta") continue;  // manifest bookkeeping, not configuration
        const Field* f = find_field(section, key);
        if (!f)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + section +
                              "." + key + "'");
        f->set(cfg, value);
    }
    return cfg;
}

void config_set(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos)
        throw ConfigError("config key must be 'section.key': '" + dotted_key + "'");
    const Field* f = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
    if (!f) throw ConfigError("unknown key '" + dotted_key + "'");
    f->set(cfg, trim(value));
}

std::string config_get(const RunConfig& cfg, const std::string& dotted_key) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos)
        throw ConfigError("config key must be 'section.key': '" + dotted_key + "'");
    const Field* f = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
    if (!f) throw ConfigError("unknown key '" + dotted_key + "'");
    return f->get(cfg);
}

std::string emit_config(const RunConfig& cfg) {
    std::string out;
    std::string section;
    for (const auto& f : fields()) {
        if (f.section != section) {
            if (!out.empty()) out += '\n';
            out += "[" + f.section + "]\n";
            section = f.section;
        }
        out += f.key + " = " + f.get(cfg) + "\n";
    }
    return out;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("run.format: must be csv or json");
    if (cfg.bs_distance_m.empty() || cfg.bs_distance_m.size() != cfg.bs_angle_deg.size())
        throw ConfigError("geometry.bs_distance_m/bs_angle_deg: lists must match and be non-empty");
    if (cfg.pf_update != "per_slot" && cfg.pf_update != "per_process")
        throw ConfigError("mac.pf_update: must be per_slot or per_process");
    if (cfg.rate_eval != "table" && cfg.rate_eval != "direct")
        throw ConfigError("scenario.rate_eval: must be table or direct");
    if (!policy_from_string(cfg.policy))
        throw ConfigError("scenario.policy: unknown policy '" + cfg.policy + "'");
    for (const auto& p : cfg.policies)
        if (!policy_from_string(p)) throw ConfigError("simulate.policies: unknown policy '" + p + "'");
    for (const auto& a : cfg.qq_approx_list)
        if (a != "ga" && a != "ipla") throw ConfigError("qq.approx_list: must be ga or ipla");
    if (cfg.rate_opt_approx != "ga" && cfg.rate_opt_approx != "ipla")
        throw ConfigError("rate_opt.approx: must be ga or ipla");
    if (!(cfg.prob_lo > 0.0 && cfg.prob_hi < 1.0 && cfg.prob_lo <= cfg.prob_hi))
        throw ConfigError("qq.prob_lo/prob_hi: need 0 < lo <= hi < 1");
    if (cfg.prob_count < 1) throw ConfigError("qq.prob_count: must be >= 1");
    for (int n : cfg.qq_n_list)
        if (n < 1 || n > cfg.n_max) throw ConfigError("qq.n_list: entries must lie in 1..n_max");
    if (cfg.qq_samples < 1000) throw ConfigError("qq.samples: need at least 1000");
    if (cfg.dominant_kept < 1 ||
        cfg.dominant_kept > static_cast<int>(cfg.bs_distance_m.size()))
        throw ConfigError("dlt_curve.dominant_kept: out of range");
    if (!(cfg.rate_step > 0.0)) throw ConfigError("dlt_curve.rate_step: empty rate grid");
    if (cfg.sim_processes < 1) throw ConfigError("dlt_curve.sim_processes: must be >= 1");
    if (cfg.r_list_m.empty()) throw ConfigError("dlt_curve.r_list_m: empty");
    if (cfg.alpha_list.empty()) throw ConfigError("dlt_curve.alpha_list: empty");
    for (double r : cfg.r_list_m)
        if (!(r > 0.0)) throw ConfigError("dlt_curve.r_list_m: radii must be > 0");
    for (double a : cfg.alpha_list)
        if (!(a > 0.0)) throw ConfigError("dlt_curve.alpha_list: exponents must be > 0");
    if (!(cfg.rate_opt_r_m > 0.0)) throw ConfigError("rate_opt.user_radius_m: must be > 0");
    if (cfg.users_list.empty()) throw ConfigError("simulate.users_list: empty");
    if (cfg.policies.empty()) throw ConfigError("simulate.policies: empty");
    try {
        make_topology(cfg).validate();
        cfg.quadrature.validate();
        cfg.search.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

CellTopology make_topology(const RunConfig& cfg, double alpha_override) {
    CellTopology t;
    t.bs_distance_m.assign(1, 0.0);
    t.bs_angle_rad.assign(1, 0.0);
    for (std::size_t k = 0; k < cfg.bs_distance_m.size(); ++k) {
        t.bs_distance_m.push_back(cfg.bs_distance_m[k]);
        t.bs_angle_rad.push_back(cfg.bs_angle_deg[k] * std::numbers::pi / 180.0);
    }
    t.pl0_db = cfg.pl0_db;
    t.ref_distance_m = cfg.ref_distance_m;
    t.pathloss_exponent = alpha_override > 0.0 ? alpha_override : cfg.pathloss_exponent;
    t.min_user_distance_m = cfg.min_user_distance_m;
    return t;
}

ScenarioConfig make_scenario(const RunConfig& cfg) {
    ScenarioConfig s;
    s.topology = make_topology(cfg);
    s.n_users = cfg.n_users;
    s.user_radii_m = cfg.user_radii_m;
    s.single_user_radius_m = cfg.single_user_radius_m;
    s.n_max = cfg.n_max;
    s.rho_db = cfg.rho_db;
    s.policy = *policy_from_string(cfg.policy);
    s.horizon = cfg.horizon;
    s.trials = cfg.trials;
    s.seed = cfg.seed;
    s.t_c = cfg.t_c;
    s.pf_mode = cfg.pf_update == "per_slot" ? PfUpdateMode::PerSlot : PfUpdateMode::PerProcess;
    s.isinr_delay = cfg.isinr_delay;
    s.pf_warm_start = cfg.pf_warm_start;
    s.fairness_floor = cfg.fairness_floor;
    s.rate_eval = cfg.rate_eval == "table" ? RateEvalMode::Table : RateEvalMode::Direct;
    s.table_points_per_decade = cfg.table_points_per_decade;
    s.threads = cfg.threads;
    s.quadrature = cfg.quadrature;
    s.search = cfg.search;
    return s;
}

} // namespace harqsim
