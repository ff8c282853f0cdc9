#ifndef MLAB_SAMPLING_HPP
#define MLAB_SAMPLING_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "mlab/geometry.hpp"
#include "mlab/manifold.hpp"

namespace mlab {

// observation model: a latent point drawn uniformly on the manifold plus an
// offset drawn uniformly on the normal disc of half-width sigma
struct NoiseModel {
    double sigma = 0.0;
    ManifoldModel manifold;
};

// validates 0 < sigma < reach bound (otherwise the support is not a tube)
NoiseModel make_noise_model(const ManifoldModel& M, double sigma);

struct ObservationSet {
    PointSet Y;
    PointSet latent;  // the manifold points xi_i, same order as Y; kept for diagnostics
    long long n = 0;
    std::uint64_t seed = 0;
    NoiseModel model;
};

struct DensityEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double ball_radius = 0.0;
};

// volume of the Euclidean ball of the given radius in `dim` dimensions
double ball_volume(int dim, double radius);

// axis-aligned box that contains the support (manifold thickened by sigma)
BoundingBox support_bounding_box(const NoiseModel& model);

// Monte Carlo volume of the support, for normalizing density ratios
McEstimate support_volume(const NoiseModel& model, long long n_samples, std::uint64_t seed);

// n independent draws from the uniform surface measure
PointSet sample_manifold_uniform(const ManifoldModel& M, long long n, std::uint64_t seed);

// one offset uniform on the normal disc of half-width sigma at xi (xi must lie
// on the manifold); the returned point is the offset Z, not xi + Z
Point sample_fiber_noise(const ManifoldModel& M, const Point& xi, double sigma, std::uint64_t seed);

// n observations Y_i = xi_i + Z_i, retaining the latent xi_i
ObservationSet sample_observations(const NoiseModel& model, long long n, std::uint64_t seed);

// density of the observation distribution at y, estimated as the fraction of
// fresh draws landing in the ball B(y, eps_loc) divided by the ball volume
DensityEstimate empirical_density(const NoiseModel& model, const Point& y, double eps_loc,
                                  long long n_mc, std::uint64_t seed);

// min and max over the grid of estimated density / uniform density on the
// support; one shared pool of n_mc draws is counted against every grid point
std::pair<double, double> density_ratio_bounds(const NoiseModel& model, const PointSet& grid,
                                               double eps_loc, long long n_mc, std::uint64_t seed);

// CSV with header y_1..y_D, plus xi_1..xi_D when the latent points are kept
void write_observations_csv(const std::string& path, const ObservationSet& obs);
void write_points_csv(const std::string& path, const PointSet& pts);

// reads the y_* columns back; accepts files with or without the xi_* block;
// errors carry "path:line:" prefixes
PointSet read_points_csv(const std::string& path);

}  // namespace mlab

#endif
