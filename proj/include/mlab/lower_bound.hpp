#ifndef MLAB_LOWER_BOUND_HPP
#define MLAB_LOWER_BOUND_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "mlab/geometry.hpp"
#include "mlab/manifold.hpp"

namespace mlab {

// two-point family for risk lower bounds: a flat-top saucer and the same
// saucer with a spherical bump of height gamma pushed into its top sheet
struct LeCamPair {
    ManifoldModel M0;  // saucer
    ManifoldModel M1;  // bump
    double kappa = 1.0;
    double gamma = 0.0;
    int d = 1;
    int D = 2;
};

struct DiscreteDistribution {
    std::vector<double> weights;
};

// validates nonnegative weights summing to 1 within 1e-12
DiscreteDistribution make_discrete(std::vector<double> weights);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  // (log x, log y)
};

// gamma = 0 is allowed and makes the two models identical
LeCamPair build_lecam_pair(double kappa, double gamma, int d, int D);

// Hausdorff distance between the pair via their section profiles (exact
// reduction for surfaces of revolution); expected gamma within 2*delta_net
double pair_hausdorff(const LeCamPair& pair, double delta_net);

// volume of the region covered by exactly one of the two sigma-tubes,
// integrated over a box that provably contains it
McEstimate symmetric_difference_volume(const LeCamPair& pair, double sigma, long long n_mc,
                                       std::uint64_t seed);

// lower estimate of the L1 distance between the two observation densities:
// mass each model places outside the other's support (exact membership, no
// density estimation). When proxy_out is given it also receives the
// support-difference proxy c_star * V(sym diff) / V(tube 0) of the same
// order; c_star scales the proxy only.
McEstimate l1_distance_bound(const LeCamPair& pair, double sigma, long long n_mc,
                             std::uint64_t seed, McEstimate* proxy_out = nullptr,
                             double c_star = 1.0);

// explicit n-fold product enumeration vs the closed form
// 2(1 - [1 - h^2/2]^n); returns (enumerated, closed_form)
std::pair<double, double> hellinger_product_identity(const DiscreteDistribution& p,
                                                     const DiscreteDistribution& q, int n);

// (1/8)(1 - l1/2)^(2n)
double affinity_product_bound(double l1, long long n);

// gamma * affinity_product_bound(l1, n)
double lecam_risk_bound(double gamma, double l1, long long n);

// least-squares line through (log x, log y); slope estimates the exponent
ScalingFit fit_scaling_exponent(const std::vector<double>& xs, const std::vector<double>& ys);

// checks the L1 estimate against the geometric floor
// C_star * omega_D * (H/2)^D - 3 * std_error, H = pair Hausdorff distance
bool calibration_check(const LeCamPair& pair, double sigma, double C_star, long long n_mc,
                       std::uint64_t seed);

// discrete-distribution utilities (shared support assumed)
double l1_distance(const DiscreteDistribution& p, const DiscreteDistribution& q);
double hellinger_sq(const DiscreteDistribution& p, const DiscreteDistribution& q);
double affinity(const DiscreteDistribution& p, const DiscreteDistribution& q);

// exact affinity of the n-fold products by enumeration (same budget rules as
// hellinger_product_identity)
double product_affinity(const DiscreteDistribution& p, const DiscreteDistribution& q, int n);

}  // namespace mlab

#endif
