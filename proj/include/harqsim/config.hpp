#ifndef HARQSIM_CONFIG_HPP
#define HARQSIM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "harqsim/sim.hpp"

namespace harqsim {

/// Configuration error carrying the offending "section.key" path; maps to
/// exit code 2 at the tool boundary.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat, typed view of the sectioned key=value config file. All dB and
/// degree quantities live here; conversion to linear/radians happens when
/// domain structs are built, and nowhere else.
struct RunConfig {
    // [run]
    std::uint64_t seed = 1;
    std::string format = "csv";  // csv | json

    // [geometry]
    std::vector<double> bs_distance_m{1000, 1000, 1000, 1000, 1000, 1000};
    std::vector<double> bs_angle_deg{150, 90, 30, -30, -90, -150};
    double pl0_db = 37.0;
    double ref_distance_m = 1000.0;
    double pathloss_exponent = 3.0;
    double min_user_distance_m = 1.0;

    // [channel]
    double rho_db = 43.0;

    // [harq]
    int n_max = 4;

    // [mac]
    double t_c = 1000.0;
    std::string pf_update = "per_slot";  // per_slot | per_process
    double pf_warm_start = 1e-3;
    int isinr_delay = 1;

    // [quadrature]
    QuadratureConfig quadrature;

    // [search]
    SearchConfig search;

    // [scenario]
    int n_users = 25;
    std::vector<double> user_radii_m{150, 200, 250, 300, 400};
    double single_user_radius_m = 250.0;
    double user_theta_deg = 90.0;  // single-link experiment angle
    std::uint64_t horizon = 200000;
    int trials = 20;
    std::string policy = "ipla";
    double fairness_floor = 1e-6;
    std::string rate_eval = "table";  // table | direct
    int table_points_per_decade = 32;
    int threads = 0;

    // [dlt_curve]
    std::vector<double> r_list_m{150, 250, 400};
    std::vector<double> alpha_list{3.0};
    double rate_step = 0.1;
    std::uint64_t sim_processes = 100000;
    int dominant_kept = 3;

    // [qq]
    std::uint64_t qq_samples = 100000;
    std::vector<int> qq_n_list{1, 2, 3, 4};
    std::vector<std::string> qq_approx_list{"ga", "ipla"};
    double prob_lo = 0.01;
    double prob_hi = 0.99;
    int prob_count = 99;

    // [simulate]
    std::vector<int> users_list{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    std::vector<std::string> policies{"genie", "isinr", "avgx", "ga", "ipla"};

    // [rate_opt]
    std::string rate_opt_approx = "ipla";
    double rate_opt_r_m = 250.0;
    bool rate_opt_dump_curve = false;
};

/// Parse a config file; unknown sections or keys are rejected.
RunConfig load_config_file(const std::string& path);
/// Apply one "section.key" override (same grammar as the file).
void config_set(RunConfig& cfg, const std::string& dotted_key, const std::string& value);
/// Read one value back in its file representation.
std::string config_get(const RunConfig& cfg, const std::string& dotted_key);
/// Serialize in canonical section/key order.
std::string emit_config(const RunConfig& cfg);
/// Cross-field validation (enum values, list constraints). Throws ConfigError.
void validate_config(const RunConfig& cfg);

/// Domain-struct builders (the dB/degree -> linear/radian boundary).
CellTopology make_topology(const RunConfig& cfg, double alpha_override = -1.0);
ScenarioConfig make_scenario(const RunConfig& cfg);

} // namespace harqsim

#endif
