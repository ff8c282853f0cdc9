#ifndef MLAB_MANIFOLD_HPP
#define MLAB_MANIFOLD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mlab/geometry.hpp"
#include "mlab/rng.hpp"

namespace mlab {

enum class ManifoldKind { circle, sphere, saucer, bump };

// 2-D section profile of a rotationally symmetric manifold, stored as line
// and circular-arc branches in the (s, v) half-plane (s = ||u|| >= 0). The
// saucer/bump manifolds are surfaces of revolution of such a profile, so
// distance and projection queries reduce exactly to this curve.
struct SectionBranch {
    bool is_arc = false;
    // line: p0 -> p1
    double p0s = 0, p0v = 0, p1s = 0, p1v = 0;
    // arc: center + radius, angles swept linearly from a0 to a1
    double cs = 0, cv = 0, r = 0, a0 = 0, a1 = 0;
    double length = 0;
};

struct SectionCurve {
    std::vector<SectionBranch> branches;
    std::vector<double> cum_length;  // cumulative length at branch ends
    double total_length = 0;
    // cached scan polyline for bracketing the global minimum (200 samples,
    // then golden-section refinement to 1e-10)
    std::vector<double> scan_t, scan_s, scan_v;

    void finalize();
    void eval(double t, double& s, double& v) const;
    void tangent(double t, double& ts, double& tv) const;  // unit tangent
};

struct ManifoldModel {
    ManifoldKind kind = ManifoldKind::circle;
    int d = 1;           // intrinsic dimension
    int D = 2;           // ambient dimension
    double R = 1.0;      // radius (circle/sphere)
    double kappa = 1.0;  // profile sphere radius (saucer/bump)
    double gamma = 0.0;  // bump height
    double reach_bound = 1.0;
    SectionCurve section;  // populated for saucer/bump

    bool has_section() const { return kind == ManifoldKind::saucer || kind == ManifoldKind::bump; }
};

struct Frame {
    Point base;
    std::vector<std::vector<double>> tangent_basis;  // d unit vectors
    std::vector<std::vector<double>> normal_basis;   // D-d unit vectors
};

ManifoldModel make_circle(double R);
ManifoldModel make_sphere(int d, int D, double R);
ManifoldModel make_saucer(double kappa, int d, int D);
ManifoldModel make_bump(double kappa, double gamma, int d, int D);

// profile height of the flat-top saucer: kappa for s <= 1, quarter-circle
// roll-off sqrt(kappa^2 - (s-1)^2) for 1 < s <= 1+kappa
double saucer_height(double kappa, double s);

// three-branch perturbed profile; equals saucer_height beyond
// w = sqrt(4*gamma*kappa - gamma^2)
double bump_height(double kappa, double gamma, double s);

// nearest point of M; errors when the minimizer is not unique (symmetry
// center, equidistant sheets)
Point project(const ManifoldModel& M, const Point& y);

// orthonormal tangent/normal bases at a point on M (tolerance 1e-8)
Frame frame_at(const ManifoldModel& M, const Point& x);

// finite covering set: every point of M lies within delta_net of the result;
// deterministic for a fixed seed, self-checked by random probing
PointSet dense_net(const ManifoldModel& M, double delta_net, std::uint64_t seed);

double distance_to_manifold(const ManifoldModel& M, const Point& y);

// one draw from the uniform surface measure (consumed by the sampling module
// and by dense_net's probe verification)
Point uniform_point(const ManifoldModel& M, Rng& rng);

// same draw plus the frame at the sampled point, built from the sampled
// parameter directly (no nearest-point search); the observation sampler's
// inner loop uses this
struct SurfaceSample {
    Point x;
    Frame frame;
};
SurfaceSample uniform_point_with_frame(const ManifoldModel& M, Rng& rng);

// net of the 2-D section profile at the given spacing (saucer/bump only);
// Hausdorff between rotationally symmetric manifolds equals Hausdorff between
// their profiles, so pair comparisons run on these
PointSet section_net(const ManifoldModel& M, double delta_net);

// flat key=value description used in experiment config echoes
std::string model_to_config_string(const ManifoldModel& M);

}  // namespace mlab

#endif
