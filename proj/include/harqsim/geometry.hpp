#ifndef HARQSIM_GEOMETRY_HPP
#define HARQSIM_GEOMETRY_HPP

#include <vector>

namespace harqsim {

/// Fixed base-station layout plus the path-loss model parameters shared by
/// every experiment. Index 0 is the home BS (distance 0); indices 1..K are
/// the interfering BSs.
struct CellTopology {
    std::vector<double> bs_distance_m;   // D^(k), k = 0..K, bs_distance_m[0] == 0
    std::vector<double> bs_angle_rad;    // psi^(k), normalized to (-pi, pi]
    double pl0_db = 37.0;                // path loss at reference distance, dB
    double ref_distance_m = 1000.0;      // d0
    double pathloss_exponent = 3.0;      // alpha
    double min_user_distance_m = 1.0;    // clamp to avoid the d->0 singularity

    int interferer_count() const { return static_cast<int>(bs_distance_m.size()) - 1; }

    /// Throws std::invalid_argument if any structural invariant is broken.
    void validate() const;
};

/// One-tier hexagonal layout used throughout: six interferers at 1000 m,
/// angles {5pi/6, pi/2, pi/6, -pi/6, -pi/2, -5pi/6}, PL0 = 37 dB at 1 km,
/// exponent 3.
CellTopology default_topology();

/// A user's position and the resulting per-BS link gains.
struct UserGeometry {
    double radius_m = 0.0;               // distance from home BS
    double angle_rad = 0.0;
    std::vector<double> distance_m;      // d^(k), k = 0..K; distance_m[0] == radius
    std::vector<double> pathloss;        // linear power gain L^(k), k = 0..K

    double home_gain() const { return pathloss[0]; }
    /// Sum of interferer gains, sum_{k>=1} L^(k).
    double ici_gain_sum() const;
    /// Mean interferer gain, (1/K) sum_{k>=1} L^(k).
    double ici_gain_mean() const;
};

/// Map an angle to the canonical interval (-pi, pi].
double normalize_angle(double rad);

/// Distance between a user at polar (r, theta) and a BS at (D, psi),
/// both measured from the home BS.
double distance_to_bs(double r, double theta, double bs_distance, double bs_angle);

/// Linear power gain 10^(-pl0_db/10) * (d0/d)^alpha. Throws on d <= 0.
double pathloss_gain(double distance, double pl0_db, double ref_distance, double exponent);

/// Populate distances and path losses for all BSs of `topo`. The radius is
/// clamped below at topo.min_user_distance_m.
UserGeometry build_user(const CellTopology& topo, double radius_m, double angle_rad);

} // namespace harqsim

#endif
