#include "harqsim/geometry.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace harqsim {

void CellTopology::validate() const {
    if (bs_distance_m.empty() || bs_distance_m.size() != bs_angle_rad.size())
        throw std::invalid_argument("geometry: bs_distance/bs_angle size mismatch");
    if (interferer_count() < 1)
        throw std::invalid_argument("geometry: need at least one interfering BS");
    if (bs_distance_m[0] != 0.0)
        throw std::invalid_argument("geometry: home BS must sit at distance 0");
    for (std::size_t k = 1; k < bs_distance_m.size(); ++k)
        if (!(bs_distance_m[k] > 0.0))
            throw std::invalid_argument("geometry: interferer distance must be > 0 (bs " +
                                        std::to_string(k) + ")");
    if (!(pathloss_exponent > 0.0)) throw std::invalid_argument("geometry: alpha must be > 0");
    if (!(ref_distance_m > 0.0)) throw std::invalid_argument("geometry: d0 must be > 0");
    if (!(min_user_distance_m > 0.0))
        throw std::invalid_argument("geometry: min user distance must be > 0");
}

CellTopology default_topology() {
    CellTopology t;
    t.bs_distance_m.assign(7, 1000.0);
    t.bs_distance_m[0] = 0.0;
    t.bs_angle_rad = {0.0,
                      5.0 * std::numbers::pi / 6.0,
                      std::numbers::pi / 2.0,
                      std::numbers::pi / 6.0,
                      -std::numbers::pi / 6.0,
                      -std::numbers::pi / 2.0,
                      -5.0 * std::numbers::pi / 6.0};
    return t;
}

double UserGeometry::ici_gain_sum() const {
    return std::accumulate(pathloss.begin() + 1, pathloss.end(), 0.0);
}

double UserGeometry::ici_gain_mean() const {
    return ici_gain_sum() / static_cast<double>(pathloss.size() - 1);
}

double normalize_angle(double rad) {
    const double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(rad, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

double distance_to_bs(double r, double theta, double bs_distance, double bs_angle) {
    // law of cosines; the max(.,0) guards roundoff when the points coincide
    const double c = std::cos(theta - bs_angle);
    const double sq = r * r + bs_distance * bs_distance - 2.0 * r * bs_distance * c;
    return std::sqrt(std::max(sq, 0.0));
}

double pathloss_gain(double distance, double pl0_db, double ref_distance, double exponent) {
    if (!(distance > 0.0))
        throw std::invalid_argument("pathloss: distance must be > 0");
    return std::pow(10.0, -pl0_db / 10.0) * std::pow(ref_distance / distance, exponent);
}

UserGeometry build_user(const CellTopology& topo, double radius_m, double angle_rad) {
    topo.validate();
    UserGeometry u;
    u.radius_m = std::max(radius_m, topo.min_user_distance_m);
    u.angle_rad = normalize_angle(angle_rad);
    const std::size_t n = topo.bs_distance_m.size();
    u.distance_m.resize(n);
    u.pathloss.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        u.distance_m[k] = distance_to_bs(u.radius_m, u.angle_rad, topo.bs_distance_m[k],
                                         normalize_angle(topo.bs_angle_rad[k]));
        u.pathloss[k] = pathloss_gain(u.distance_m[k], topo.pl0_db, topo.ref_distance_m,
                                      topo.pathloss_exponent);
    }
    return u;
}

} // namespace harqsim
