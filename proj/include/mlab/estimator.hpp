#ifndef MLAB_ESTIMATOR_HPP
#define MLAB_ESTIMATOR_HPP

#include <cstdint>

#include "mlab/geometry.hpp"

namespace mlab {

// union-of-balls support estimator configuration; the raster width must stay
// fine relative to the ball radius (h <= epsilon/5)
struct EstimatorConfig {
    double epsilon = 0.0;  // ball radius
    double C = 1.5;        // rate constant used to derive epsilon from n
    double h = 0.0;        // raster cell width
    BoundingBox box;
};

EstimatorConfig make_estimator_config(double epsilon, double C, double h, BoundingBox box);

// union of epsilon-balls around the data, rasterized, with the exact
// distance-to-complement field and its maximum sigma_hat
struct SupportEstimate {
    PointSet data;
    double epsilon = 0.0;
    DistanceField field;
    double sigma_hat = 0.0;
};

// level set {field >= max(0, sigma_hat - 2*epsilon)} as a cell-center cloud
struct ManifoldEstimate {
    PointSet points;
    double epsilon_used = 0.0;
    double sigma_hat = 0.0;
};

// ball radius schedule C * (ln n / n)^(1/D); warns once on stderr when C is
// at or below the support-capture threshold (2 * 2^D / omega_D)^(1/D)
double choose_epsilon(long long n, int D, double C);

// rasterizes the union of balls by splatting each ball onto the grid (cell
// centers within epsilon of a data point), then runs the exact distance
// transform; requires the box to contain every data ball
SupportEstimate estimate_support(const PointSet& Y, const EstimatorConfig& cfg);

ManifoldEstimate extract_manifold(const SupportEstimate& S);

// choose_epsilon -> estimate_support -> extract_manifold; n and D are passed
// explicitly and checked against Y as a config cross-check
ManifoldEstimate estimate(const PointSet& Y, long long n, int D, double C, double h,
                          const BoundingBox& box);

}  // namespace mlab

#endif
