#include "mlab/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kScanPoints = 200;     // coarse bracket scan of the profile
constexpr double kGoldenTol = 1e-10; // refinement tolerance in arc length

template <typename F>
double golden_min(const F& f, double a, double b, double tol) {
    const double inv_phi = 0.61803398874989484820;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

double sq(double x) { return x * x; }

}  // namespace

void SectionCurve::finalize() {
    cum_length.clear();
    total_length = 0;
    for (auto& br : branches) {
        br.length = br.is_arc ? br.r * std::abs(br.a1 - br.a0)
                              : std::hypot(br.p1s - br.p0s, br.p1v - br.p0v);
        total_length += br.length;
        cum_length.push_back(total_length);
    }
    scan_t.resize(kScanPoints);
    scan_s.resize(kScanPoints);
    scan_v.resize(kScanPoints);
    for (int k = 0; k < kScanPoints; ++k) {
        double t = total_length * static_cast<double>(k) / (kScanPoints - 1);
        scan_t[static_cast<std::size_t>(k)] = t;
        eval(t, scan_s[static_cast<std::size_t>(k)], scan_v[static_cast<std::size_t>(k)]);
    }
}

void SectionCurve::eval(double t, double& s, double& v) const {
    t = std::clamp(t, 0.0, total_length);
    std::size_t i = static_cast<std::size_t>(
        std::lower_bound(cum_length.begin(), cum_length.end(), t) - cum_length.begin());
    if (i >= branches.size()) i = branches.size() - 1;
    const SectionBranch& br = branches[i];
    double t0 = i == 0 ? 0.0 : cum_length[i - 1];
    double frac = br.length > 0 ? (t - t0) / br.length : 0.0;
    if (br.is_arc) {
        double ang = br.a0 + (br.a1 - br.a0) * frac;
        s = br.cs + br.r * std::cos(ang);
        v = br.cv + br.r * std::sin(ang);
    } else {
        s = br.p0s + (br.p1s - br.p0s) * frac;
        v = br.p0v + (br.p1v - br.p0v) * frac;
    }
}

void SectionCurve::tangent(double t, double& ts, double& tv) const {
    t = std::clamp(t, 0.0, total_length);
    std::size_t i = static_cast<std::size_t>(
        std::lower_bound(cum_length.begin(), cum_length.end(), t) - cum_length.begin());
    if (i >= branches.size()) i = branches.size() - 1;
    const SectionBranch& br = branches[i];
    if (br.is_arc) {
        double t0 = i == 0 ? 0.0 : cum_length[i - 1];
        double frac = br.length > 0 ? (t - t0) / br.length : 0.0;
        double ang = br.a0 + (br.a1 - br.a0) * frac;
        double sign = br.a1 >= br.a0 ? 1.0 : -1.0;
        ts = -std::sin(ang) * sign;
        tv = std::cos(ang) * sign;
    } else {
        double len = br.length > 0 ? br.length : 1.0;
        ts = (br.p1s - br.p0s) / len;
        tv = (br.p1v - br.p0v) / len;
    }
}

namespace {

void add_line(SectionCurve& c, double s0, double v0, double s1, double v1) {
    if (std::hypot(s1 - s0, v1 - v0) < 1e-15) return;
    SectionBranch br;
    br.is_arc = false;
    br.p0s = s0;
    br.p0v = v0;
    br.p1s = s1;
    br.p1v = v1;
    c.branches.push_back(br);
}

void add_arc(SectionCurve& c, double cs, double cv, double r, double a0, double a1) {
    if (r * std::abs(a1 - a0) < 1e-15) return;
    SectionBranch br;
    br.is_arc = true;
    br.cs = cs;
    br.cv = cv;
    br.r = r;
    br.a0 = a0;
    br.a1 = a1;
    c.branches.push_back(br);
}

// profile from the top pole (0, h(0)) down to the bottom pole (0, -kappa)
SectionCurve build_section(double kappa, double gamma) {
    SectionCurve c;
    if (gamma > 0) {
        double w = std::sqrt(gamma * (4.0 * kappa - gamma));
        double phi_a = std::asin(1.0 - gamma / (2.0 * kappa));
        // raised cap around (0, gamma), then the matching valley arc that
        // rejoins the flat top at s = w
        add_arc(c, 0.0, gamma, kappa, kPi / 2.0, phi_a);
        double psi0 = std::atan2(gamma / (2.0 * kappa) - 1.0, -w / (2.0 * kappa));
        add_arc(c, w, 2.0 * kappa, kappa, psi0, -kPi / 2.0);
        add_line(c, w, kappa, 1.0, kappa);
    } else {
        add_line(c, 0.0, kappa, 1.0, kappa);
    }
    // rim roll-off and the mirror flat sheet
    add_arc(c, 1.0, 0.0, kappa, kPi / 2.0, -kPi / 2.0);
    add_line(c, 1.0, -kappa, 0.0, -kappa);
    c.finalize();
    return c;
}

struct SectionHit {
    double t = 0;
    double s = 0;
    double v = 0;
    double d2 = std::numeric_limits<double>::infinity();
};

// all refined local minima of squared distance from (sy, vy) to the profile,
// bracketed on the cached scan and polished by golden section
std::vector<SectionHit> section_minima(const SectionCurve& C, double sy, double vy) {
    const int n = kScanPoints;
    std::vector<double> d2(static_cast<std::size_t>(n));
    double best_coarse = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        d2[static_cast<std::size_t>(k)] =
            sq(sy - C.scan_s[static_cast<std::size_t>(k)]) + sq(vy - C.scan_v[static_cast<std::size_t>(k)]);
        best_coarse = std::min(best_coarse, d2[static_cast<std::size_t>(k)]);
    }
    // candidates farther than the scan resolution from the best cannot hide
    // the global minimum or a near-tie
    double dt = C.total_length / (n - 1);
    double keep = sq(std::sqrt(best_coarse) + 2.0 * dt);
    auto objective = [&](double t) {
        double s, v;
        C.eval(t, s, v);
        return sq(sy - s) + sq(vy - v);
    };
    std::vector<SectionHit> hits;
    for (int k = 0; k < n; ++k) {
        bool is_min = true;
        if (k > 0 && d2[static_cast<std::size_t>(k - 1)] < d2[static_cast<std::size_t>(k)]) is_min = false;
        if (k + 1 < n && d2[static_cast<std::size_t>(k + 1)] < d2[static_cast<std::size_t>(k)]) is_min = false;
        if (!is_min || d2[static_cast<std::size_t>(k)] > keep) continue;
        double lo = C.scan_t[static_cast<std::size_t>(std::max(0, k - 1))];
        double hi = C.scan_t[static_cast<std::size_t>(std::min(n - 1, k + 1))];
        SectionHit h;
        h.t = golden_min(objective, lo, hi, kGoldenTol);
        C.eval(h.t, h.s, h.v);
        h.d2 = sq(sy - h.s) + sq(vy - h.v);
        // merge with an already-found minimum refined from a neighboring cell
        bool merged = false;
        for (SectionHit& prev : hits) {
            if (std::hypot(prev.s - h.s, prev.v - h.v) < 10.0 * kGoldenTol + 1e-12) {
                if (h.d2 < prev.d2) prev = h;
                merged = true;
                break;
            }
        }
        if (!merged) hits.push_back(h);
    }
    std::sort(hits.begin(), hits.end(), [](const SectionHit& a, const SectionHit& b) { return a.d2 < b.d2; });
    return hits;
}

void check_common(int d, int D) {
    if (d < 1 || d >= D) throw ConfigError("need 0 < d < D");
}

// split an ambient point into radial/height/extra parts for profile manifolds
void split_coords(const ManifoldModel& M, const Point& y, double& sy, double& vy, double& z2) {
    if (y.dim() != M.D) throw ConfigError("point dimension does not match the model");
    double su = 0;
    for (int i = 0; i < M.d; ++i) su += sq(y[i]);
    sy = std::sqrt(su);
    vy = y[M.d];
    z2 = 0;
    for (int i = M.d + 1; i < M.D; ++i) z2 += sq(y[i]);
}

std::vector<double> unit_u(const ManifoldModel& M, const Point& y, double sy) {
    std::vector<double> u(static_cast<std::size_t>(M.d), 0.0);
    if (sy > 1e-12) {
        for (int i = 0; i < M.d; ++i) u[static_cast<std::size_t>(i)] = y[i] / sy;
    } else {
        u[0] = 1.0;
    }
    return u;
}

double norm_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// extend an orthonormal set to `count` extra orthonormal vectors in R^dim
std::vector<std::vector<double>> complete_basis(const std::vector<std::vector<double>>& given,
                                                int dim, int count) {
    std::vector<std::vector<double>> have = given;
    std::vector<std::vector<double>> added;
    for (int e = 0; e < dim && static_cast<int>(added.size()) < count; ++e) {
        std::vector<double> cand(static_cast<std::size_t>(dim), 0.0);
        cand[static_cast<std::size_t>(e)] = 1.0;
        for (const auto& b : have) {
            double dot = 0;
            for (int i = 0; i < dim; ++i) dot += cand[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
            for (int i = 0; i < dim; ++i) cand[static_cast<std::size_t>(i)] -= dot * b[static_cast<std::size_t>(i)];
        }
        double nrm = norm_of(cand);
        if (nrm < 1e-8) continue;
        for (double& x : cand) x /= nrm;
        have.push_back(cand);
        added.push_back(cand);
    }
    if (static_cast<int>(added.size()) != count) throw ConfigError("failed to complete orthonormal basis");
    return added;
}

std::vector<double> embed(const std::vector<double>& small, int offset, int D) {
    std::vector<double> full(static_cast<std::size_t>(D), 0.0);
    for (std::size_t i = 0; i < small.size(); ++i) full[static_cast<std::size_t>(offset) + i] = small[i];
    return full;
}

std::vector<double> axis_vector(int axis, int D) {
    std::vector<double> e(static_cast<std::size_t>(D), 0.0);
    e[static_cast<std::size_t>(axis)] = 1.0;
    return e;
}

Frame sphere_frame_impl(const ManifoldModel& M, const Point& x) {
    Frame F;
    F.base = x;
    double su = 0;
    for (int i = 0; i <= M.d; ++i) su += sq(x[i]);
    double r = std::sqrt(su);
    std::vector<double> radial(static_cast<std::size_t>(M.d) + 1);
    for (int i = 0; i <= M.d; ++i) radial[static_cast<std::size_t>(i)] = x[i] / r;
    auto tang = complete_basis({radial}, M.d + 1, M.d);
    for (const auto& t : tang) F.tangent_basis.push_back(embed(t, 0, M.D));
    F.normal_basis.push_back(embed(radial, 0, M.D));
    for (int i = M.d + 1; i < M.D; ++i) F.normal_basis.push_back(axis_vector(i, M.D));
    return F;
}

// frame at a profile pole (s = 0): the cap is flat or spherical there, so the
// tangent space is exactly the u-plane
Frame pole_frame_impl(const ManifoldModel& M, const Point& x) {
    Frame F;
    F.base = x;
    for (int i = 0; i < M.d; ++i) F.tangent_basis.push_back(axis_vector(i, M.D));
    for (int i = M.d; i < M.D; ++i) F.normal_basis.push_back(axis_vector(i, M.D));
    return F;
}

// frame at a revolved profile point with radial direction u_hat and profile
// parameter t
Frame section_frame_impl(const ManifoldModel& M, const Point& x,
                         const std::vector<double>& u_hat, double t) {
    Frame F;
    F.base = x;
    double ts, tv;
    M.section.tangent(t, ts, tv);
    std::vector<double> t1(static_cast<std::size_t>(M.D), 0.0);
    std::vector<double> n1(static_cast<std::size_t>(M.D), 0.0);
    for (int i = 0; i < M.d; ++i) {
        t1[static_cast<std::size_t>(i)] = ts * u_hat[static_cast<std::size_t>(i)];
        n1[static_cast<std::size_t>(i)] = -tv * u_hat[static_cast<std::size_t>(i)];
    }
    t1[static_cast<std::size_t>(M.d)] = tv;
    n1[static_cast<std::size_t>(M.d)] = ts;
    F.tangent_basis.push_back(t1);
    if (M.d > 1) {
        // revolution directions: complement of u-hat within the u-plane
        auto ang = complete_basis({u_hat}, M.d, M.d - 1);
        for (const auto& a : ang) F.tangent_basis.push_back(embed(a, 0, M.D));
    }
    F.normal_basis.push_back(n1);
    for (int i = M.d + 1; i < M.D; ++i) F.normal_basis.push_back(axis_vector(i, M.D));
    return F;
}

}  // namespace

ManifoldModel make_circle(double R) {
    if (!(R > 0)) throw ConfigError("circle radius must be positive");
    ManifoldModel M;
    M.kind = ManifoldKind::circle;
    M.d = 1;
    M.D = 2;
    M.R = R;
    M.reach_bound = R;
    return M;
}

ManifoldModel make_sphere(int d, int D, double R) {
    check_common(d, D);
    if (!(R > 0)) throw ConfigError("sphere radius must be positive");
    ManifoldModel M;
    M.kind = ManifoldKind::sphere;
    M.d = d;
    M.D = D;
    M.R = R;
    M.reach_bound = R;
    return M;
}

ManifoldModel make_saucer(double kappa, int d, int D) {
    check_common(d, D);
    if (!(kappa > 0)) throw ConfigError("profile radius kappa must be positive");
    ManifoldModel M;
    M.kind = ManifoldKind::saucer;
    M.d = d;
    M.D = D;
    M.kappa = kappa;
    M.reach_bound = kappa;
    M.section = build_section(kappa, 0.0);
    return M;
}

ManifoldModel make_bump(double kappa, double gamma, int d, int D) {
    check_common(d, D);
    if (!(kappa > 0)) throw ConfigError("profile radius kappa must be positive");
    if (gamma < 0) throw ConfigError("bump height must be nonnegative");
    if (gamma >= kappa) throw ConfigError("perturbation exceeds reach budget");
    double w = std::sqrt(gamma * (4.0 * kappa - gamma));
    if (w > 1.0) throw ConfigError("bump wider than the flat profile region");
    ManifoldModel M;
    M.kind = ManifoldKind::bump;
    M.d = d;
    M.D = D;
    M.kappa = kappa;
    M.gamma = gamma;
    M.reach_bound = kappa;
    M.section = build_section(kappa, gamma);
    return M;
}

double saucer_height(double kappa, double s) {
    if (!(kappa > 0)) throw ConfigError("profile radius kappa must be positive");
    if (s < 0 || s > 1.0 + kappa) throw ConfigError("profile argument outside [0, 1+kappa]");
    if (s <= 1.0) return kappa;
    return std::sqrt(sq(kappa) - sq(s - 1.0));
}

double bump_height(double kappa, double gamma, double s) {
    if (!(kappa > 0)) throw ConfigError("profile radius kappa must be positive");
    if (gamma < 0) throw ConfigError("bump height must be nonnegative");
    if (gamma >= kappa) throw ConfigError("perturbation exceeds reach budget");
    if (s < 0 || s > 1.0 + kappa) throw ConfigError("profile argument outside [0, 1+kappa]");
    if (gamma == 0) return saucer_height(kappa, s);
    double w = std::sqrt(gamma * (4.0 * kappa - gamma));
    if (w > 1.0) throw ConfigError("bump wider than the flat profile region");
    if (s <= 0.5 * w) return gamma + std::sqrt(sq(kappa) - sq(s));
    if (s <= w) return 2.0 * kappa - std::sqrt(sq(kappa) - sq(s - w));
    return saucer_height(kappa, s);
}

double distance_to_manifold(const ManifoldModel& M, const Point& y) {
    switch (M.kind) {
        case ManifoldKind::circle: {
            if (y.dim() != 2) throw ConfigError("point dimension does not match the model");
            return std::abs(std::hypot(y[0], y[1]) - M.R);
        }
        case ManifoldKind::sphere: {
            // sphere occupies the first d+1 coordinates
            if (y.dim() != M.D) throw ConfigError("point dimension does not match the model");
            double su = 0;
            for (int i = 0; i <= M.d; ++i) su += sq(y[i]);
            double z2 = 0;
            for (int i = M.d + 1; i < M.D; ++i) z2 += sq(y[i]);
            return std::sqrt(sq(std::sqrt(su) - M.R) + z2);
        }
        case ManifoldKind::saucer:
        case ManifoldKind::bump: {
            double sy, vy, z2;
            split_coords(M, y, sy, vy, z2);
            auto hits = section_minima(M.section, sy, vy);
            return std::sqrt(hits.front().d2 + z2);
        }
    }
    throw ConfigError("unknown manifold kind");
}

Point project(const ManifoldModel& M, const Point& y) {
    switch (M.kind) {
        case ManifoldKind::circle: {
            if (y.dim() != 2) throw ConfigError("point dimension does not match the model");
            double r = std::hypot(y[0], y[1]);
            if (r < 1e-12) throw ConfigError("non-unique projection");
            return Point{y[0] * M.R / r, y[1] * M.R / r};
        }
        case ManifoldKind::sphere: {
            if (y.dim() != M.D) throw ConfigError("point dimension does not match the model");
            double su = 0;
            for (int i = 0; i <= M.d; ++i) su += sq(y[i]);
            double r = std::sqrt(su);
            if (r < 1e-12) throw ConfigError("non-unique projection");
            Point out;
            out.coords.assign(static_cast<std::size_t>(M.D), 0.0);
            for (int i = 0; i <= M.d; ++i) out.coords[static_cast<std::size_t>(i)] = y[i] * M.R / r;
            return out;
        }
        case ManifoldKind::saucer:
        case ManifoldKind::bump: {
            double sy, vy, z2;
            split_coords(M, y, sy, vy, z2);
            (void)z2;
            auto hits = section_minima(M.section, sy, vy);
            const SectionHit& best = hits.front();
            for (std::size_t i = 1; i < hits.size(); ++i) {
                bool tie = std::sqrt(hits[i].d2) - std::sqrt(best.d2) <= 1e-9;
                bool distinct = std::hypot(hits[i].s - best.s, hits[i].v - best.v) > 1e-6;
                if (tie && distinct) throw ConfigError("non-unique projection");
            }
            if (sy < 1e-12 && best.s > 1e-9) throw ConfigError("non-unique projection");
            Point out;
            out.coords.assign(static_cast<std::size_t>(M.D), 0.0);
            std::vector<double> u = unit_u(M, y, sy);
            for (int i = 0; i < M.d; ++i) out.coords[static_cast<std::size_t>(i)] = best.s * u[static_cast<std::size_t>(i)];
            out.coords[static_cast<std::size_t>(M.d)] = best.v;
            return out;
        }
    }
    throw ConfigError("unknown manifold kind");
}

Frame frame_at(const ManifoldModel& M, const Point& x) {
    if (distance_to_manifold(M, x) > 1e-8) throw ConfigError("point is not on the manifold");
    Frame F;
    F.base = x;
    switch (M.kind) {
        case ManifoldKind::circle: {
            double r = std::hypot(x[0], x[1]);
            double c = x[0] / r, s = x[1] / r;
            F.tangent_basis = {{-s, c}};
            F.normal_basis = {{c, s}};
            return F;
        }
        case ManifoldKind::sphere:
            return sphere_frame_impl(M, x);
        case ManifoldKind::saucer:
        case ManifoldKind::bump: {
            double sy, vy, z2;
            split_coords(M, x, sy, vy, z2);
            (void)z2;
            if (sy < 1e-9) return pole_frame_impl(M, x);
            auto hits = section_minima(M.section, sy, vy);
            return section_frame_impl(M, x, unit_u(M, x, sy), hits.front().t);
        }
    }
    throw ConfigError("unknown manifold kind");
}

namespace {

// surface measure of a revolved profile factorizes as s(t)^{d-1} dt dOmega:
// propose arc-length-uniform t, accept with probability (s/s_max)^{d-1},
// then draw the revolution direction omega on S^{d-1}
void sample_profile(const ManifoldModel& M, Rng& rng, double& t, double& s, double& v,
                    std::vector<double>& omega) {
    const double s_max = 1.0 + M.kappa;
    for (;;) {
        t = rng.uniform() * M.section.total_length;
        M.section.eval(t, s, v);
        if (M.d == 1) break;
        if (rng.uniform() < std::pow(s / s_max, M.d - 1)) break;
    }
    if (M.d == 1) {
        omega.assign(1, rng.uniform() < 0.5 ? -1.0 : 1.0);
    } else {
        omega = rng.unit_vector(M.d);
    }
}

Point profile_point(const ManifoldModel& M, double s, double v, const std::vector<double>& omega) {
    Point p;
    p.coords.assign(static_cast<std::size_t>(M.D), 0.0);
    for (int i = 0; i < M.d; ++i) p.coords[static_cast<std::size_t>(i)] = s * omega[static_cast<std::size_t>(i)];
    p.coords[static_cast<std::size_t>(M.d)] = v;
    return p;
}

}  // namespace

Point uniform_point(const ManifoldModel& M, Rng& rng) {
    switch (M.kind) {
        case ManifoldKind::circle: {
            double th = 2.0 * kPi * rng.uniform();
            return Point{M.R * std::cos(th), M.R * std::sin(th)};
        }
        case ManifoldKind::sphere: {
            std::vector<double> w = rng.unit_vector(M.d + 1);
            Point p;
            p.coords.assign(static_cast<std::size_t>(M.D), 0.0);
            for (int i = 0; i <= M.d; ++i) p.coords[static_cast<std::size_t>(i)] = M.R * w[static_cast<std::size_t>(i)];
            return p;
        }
        case ManifoldKind::saucer:
        case ManifoldKind::bump: {
            double t, s, v;
            std::vector<double> omega;
            sample_profile(M, rng, t, s, v, omega);
            return profile_point(M, s, v, omega);
        }
    }
    throw ConfigError("unknown manifold kind");
}

SurfaceSample uniform_point_with_frame(const ManifoldModel& M, Rng& rng) {
    SurfaceSample out;
    switch (M.kind) {
        case ManifoldKind::circle: {
            double th = 2.0 * kPi * rng.uniform();
            double c = std::cos(th), s = std::sin(th);
            out.x = Point{M.R * c, M.R * s};
            out.frame.base = out.x;
            out.frame.tangent_basis = {{-s, c}};
            out.frame.normal_basis = {{c, s}};
            return out;
        }
        case ManifoldKind::sphere: {
            out.x = uniform_point(M, rng);
            out.frame = sphere_frame_impl(M, out.x);
            return out;
        }
        case ManifoldKind::saucer:
        case ManifoldKind::bump: {
            double t, s, v;
            std::vector<double> omega;
            sample_profile(M, rng, t, s, v, omega);
            out.x = profile_point(M, s, v, omega);
            if (s < 1e-9) {
                out.frame = pole_frame_impl(M, out.x);
            } else {
                out.frame = section_frame_impl(M, out.x, omega, t);
            }
            return out;
        }
    }
    throw ConfigError("unknown manifold kind");
}

namespace {

// covering net of the sphere s^d (radius r, embedded in R^{d+1}) built from
// recursive colatitude bands; per-level spacing delta/sqrt(d) keeps the total
// covering radius at delta/2
void sphere_net_rec(int d, double r, double delta, Rng& rng, std::vector<std::vector<double>>& out) {
    if (r < delta * 1e-6) {
        out.push_back(std::vector<double>(static_cast<std::size_t>(d) + 1, 0.0));
        return;
    }
    double spacing = delta / std::sqrt(static_cast<double>(d));
    if (d == 1) {
        int m = std::max(4, static_cast<int>(std::ceil(2.0 * kPi * r / spacing)));
        double phase = rng.uniform() * 2.0 * kPi / m;
        for (int k = 0; k < m; ++k) {
            double th = phase + 2.0 * kPi * k / m;
            out.push_back({r * std::cos(th), r * std::sin(th)});
        }
        return;
    }
    int nb = std::max(2, static_cast<int>(std::ceil(kPi * r / spacing)));
    for (int i = 0; i < nb; ++i) {
        double theta = (i + 0.5) * kPi / nb;
        double ring_r = r * std::sin(theta);
        double height = r * std::cos(theta);
        std::vector<std::vector<double>> ring;
        sphere_net_rec(d - 1, ring_r, delta, rng, ring);
        for (auto& q : ring) {
            q.push_back(height);
            out.push_back(q);
        }
    }
    // the poles themselves
    std::vector<double> pole(static_cast<std::size_t>(d) + 1, 0.0);
    pole[static_cast<std::size_t>(d)] = r;
    out.push_back(pole);
    pole[static_cast<std::size_t>(d)] = -r;
    out.push_back(pole);
}

}  // namespace

PointSet section_net(const ManifoldModel& M, double delta_net) {
    if (!M.has_section()) throw ConfigError("model has no 2-D profile");
    if (!(delta_net > 0)) throw ConfigError("net spacing must be positive");
    PointSet net(2);
    const double L = M.section.total_length;
    int m = std::max(2, static_cast<int>(std::ceil(L / delta_net)) + 1);
    for (int k = 0; k < m; ++k) {
        double s, v;
        M.section.eval(L * k / (m - 1), s, v);
        net.add(Point{s, v});
    }
    return net;
}

PointSet dense_net(const ManifoldModel& M, double delta_net, std::uint64_t seed) {
    if (!(delta_net > 0)) throw ConfigError("net spacing must be positive");
    Rng rng(substream_seed(seed, 0xD511));
    PointSet net(M.D);
    switch (M.kind) {
        case ManifoldKind::circle: {
            int m = std::max(3, static_cast<int>(std::ceil(2.0 * kPi * M.R / delta_net)));
            double phase = rng.uniform() * 2.0 * kPi / m;
            for (int k = 0; k < m; ++k) {
                double th = phase + 2.0 * kPi * k / m;
                net.add(Point{M.R * std::cos(th), M.R * std::sin(th)});
            }
            break;
        }
        case ManifoldKind::sphere: {
            std::vector<std::vector<double>> pts;
            sphere_net_rec(M.d, M.R, delta_net, rng, pts);
            for (auto& q : pts) {
                q.resize(static_cast<std::size_t>(M.D), 0.0);
                net.add(Point(std::move(q)));
            }
            break;
        }
        case ManifoldKind::saucer:
        case ManifoldKind::bump: {
            const double L = M.section.total_length;
            if (M.d == 1) {
                // closed profile curve of length 2L (mirror halves joined at
                // the poles); equal arc spacing with a random phase
                int m = std::max(4, static_cast<int>(std::ceil(2.0 * L / delta_net)));
                double phase = rng.uniform() * 2.0 * L / m;
                for (int k = 0; k < m; ++k) {
                    double tau = std::fmod(phase + 2.0 * L * k / m, 2.0 * L);
                    double s, v;
                    if (tau <= L) {
                        M.section.eval(tau, s, v);
                        net.add(Point{s, v});
                    } else {
                        M.section.eval(2.0 * L - tau, s, v);
                        net.add(Point{-s, v});
                    }
                }
            } else {
                double spacing = delta_net / std::sqrt(2.0);
                int m_sec = std::max(2, static_cast<int>(std::ceil(L / spacing)));
                for (int i = 0; i < m_sec; ++i) {
                    double s, v;
                    M.section.eval(L * (i + 0.5) / m_sec, s, v);
                    std::vector<std::vector<double>> ring;
                    sphere_net_rec(M.d - 1, s, spacing, rng, ring);
                    for (auto& q : ring) {
                        Point p;
                        p.coords.assign(static_cast<std::size_t>(M.D), 0.0);
                        for (int j = 0; j < M.d; ++j) p.coords[static_cast<std::size_t>(j)] = q[static_cast<std::size_t>(j)];
                        p.coords[static_cast<std::size_t>(M.d)] = v;
                        net.add(std::move(p));
                    }
                }
                // both poles of the profile
                double s0, v_top, v_bot;
                M.section.eval(0.0, s0, v_top);
                M.section.eval(L, s0, v_bot);
                Point top, bot;
                top.coords.assign(static_cast<std::size_t>(M.D), 0.0);
                bot.coords.assign(static_cast<std::size_t>(M.D), 0.0);
                top.coords[static_cast<std::size_t>(M.d)] = v_top;
                bot.coords[static_cast<std::size_t>(M.d)] = v_bot;
                net.add(top);
                net.add(bot);
            }
            break;
        }
    }
    // self-check by random probing; a violating probe joins the net
    const int probes = 2048;
    for (int i = 0; i < probes; ++i) {
        Point p = uniform_point(M, rng);
        if (min_distance(net, p) > delta_net) net.add(p);
    }
    return net;
}

std::string model_to_config_string(const ManifoldModel& M) {
    std::ostringstream os;
    os.precision(17);
    switch (M.kind) {
        case ManifoldKind::circle:
            os << "model = circle\nR = " << M.R << "\n";
            break;
        case ManifoldKind::sphere:
            os << "model = sphere\nR = " << M.R << "\n";
            break;
        case ManifoldKind::saucer:
            os << "model = saucer\nkappa = " << M.kappa << "\n";
            break;
        case ManifoldKind::bump:
            os << "model = bump\nkappa = " << M.kappa << "\ngamma = " << M.gamma << "\n";
            break;
    }
    os << "d = " << M.d << "\nD = " << M.D << "\n";
    return os.str();
}

}  // namespace mlab
