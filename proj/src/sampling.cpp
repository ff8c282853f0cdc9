#include "mlab/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <vector>

#include "mlab/rng.hpp"

namespace mlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_noise(const ManifoldModel& M, double sigma) {
    if (!(sigma >= 0)) throw ConfigError("noise width must be nonnegative");
    if (sigma >= M.reach_bound) throw ConfigError("noise exceeds reach");
}

// one observation from the model given an already-built RNG stream
Point draw_observation(const NoiseModel& model, Rng& rng, Point* latent) {
    const ManifoldModel& M = model.manifold;
    SurfaceSample ss = uniform_point_with_frame(M, rng);
    std::vector<double> c = rng.in_ball(M.D - M.d, model.sigma);
    Point y = ss.x;
    for (std::size_t k = 0; k < ss.frame.normal_basis.size(); ++k) {
        const std::vector<double>& nu = ss.frame.normal_basis[k];
        for (int i = 0; i < M.D; ++i) y.coords[static_cast<std::size_t>(i)] += c[k] * nu[static_cast<std::size_t>(i)];
    }
    if (latent) *latent = ss.x;
    return y;
}

}  // namespace

NoiseModel make_noise_model(const ManifoldModel& M, double sigma) {
    if (!(sigma > 0)) throw ConfigError("noise width must be positive");
    check_noise(M, sigma);
    NoiseModel model;
    model.sigma = sigma;
    model.manifold = M;
    return model;
}

double ball_volume(int dim, double radius) {
    if (dim < 0 || !(radius >= 0)) throw ConfigError("ball_volume needs dim >= 0 and radius >= 0");
    if (dim == 0) return 1.0;
    return std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0) * std::pow(radius, dim);
}

BoundingBox support_bounding_box(const NoiseModel& model) {
    const ManifoldModel& M = model.manifold;
    const double s = model.sigma;
    BoundingBox box;
    box.lower.coords.assign(static_cast<std::size_t>(M.D), -s);
    box.upper.coords.assign(static_cast<std::size_t>(M.D), s);
    switch (M.kind) {
        case ManifoldKind::circle:
        case ManifoldKind::sphere:
            for (int i = 0; i <= M.d; ++i) {
                box.lower.coords[static_cast<std::size_t>(i)] = -(M.R + s);
                box.upper.coords[static_cast<std::size_t>(i)] = M.R + s;
            }
            break;
        case ManifoldKind::saucer:
        case ManifoldKind::bump: {
            double r = 1.0 + M.kappa + s;
            for (int i = 0; i < M.d; ++i) {
                box.lower.coords[static_cast<std::size_t>(i)] = -r;
                box.upper.coords[static_cast<std::size_t>(i)] = r;
            }
            box.lower.coords[static_cast<std::size_t>(M.d)] = -(M.kappa + s);
            box.upper.coords[static_cast<std::size_t>(M.d)] = M.kappa + M.gamma + s;
            break;
        }
    }
    return box;
}

McEstimate support_volume(const NoiseModel& model, long long n_samples, std::uint64_t seed) {
    check_noise(model.manifold, model.sigma);
    const ManifoldModel& M = model.manifold;
    const double s = model.sigma;
    MembershipFn inside = [&M, s](const Point& y) { return distance_to_manifold(M, y) <= s; };
    return mc_volume(inside, support_bounding_box(model), n_samples, seed);
}

PointSet sample_manifold_uniform(const ManifoldModel& M, long long n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("need at least one sample");
    Rng rng(seed);
    PointSet out;
    out.ambient_dim = M.D;
    out.points.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) out.add(uniform_point(M, rng));
    return out;
}

Point sample_fiber_noise(const ManifoldModel& M, const Point& xi, double sigma, std::uint64_t seed) {
    check_noise(M, sigma);
    Frame F = frame_at(M, xi);  // also validates that xi lies on the manifold
    Rng rng(seed);
    std::vector<double> c = rng.in_ball(M.D - M.d, sigma);
    Point z;
    z.coords.assign(static_cast<std::size_t>(M.D), 0.0);
    for (std::size_t k = 0; k < F.normal_basis.size(); ++k)
        for (int i = 0; i < M.D; ++i) z.coords[static_cast<std::size_t>(i)] += c[k] * F.normal_basis[k][static_cast<std::size_t>(i)];
    return z;
}

ObservationSet sample_observations(const NoiseModel& model, long long n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("need at least one sample");
    if (!(model.sigma > 0)) throw ConfigError("noise width must be positive");
    check_noise(model.manifold, model.sigma);
    ObservationSet obs;
    obs.n = n;
    obs.seed = seed;
    obs.model = model;
    obs.Y.ambient_dim = model.manifold.D;
    obs.latent.ambient_dim = model.manifold.D;
    obs.Y.points.reserve(static_cast<std::size_t>(n));
    obs.latent.points.reserve(static_cast<std::size_t>(n));
    Rng rng(seed);
    for (long long i = 0; i < n; ++i) {
        Point xi;
        Point y = draw_observation(model, rng, &xi);
        obs.Y.add(y);
        obs.latent.add(xi);
    }
    return obs;
}

DensityEstimate empirical_density(const NoiseModel& model, const Point& y, double eps_loc,
                                  long long n_mc, std::uint64_t seed) {
    if (!(eps_loc > 0)) throw ConfigError("ball radius must be positive");
    if (n_mc < 1) throw ConfigError("need at least one sample");
    check_noise(model.manifold, model.sigma);
    Rng rng(seed);
    long long hits = 0;
    const double r2 = eps_loc * eps_loc;
    for (long long i = 0; i < n_mc; ++i) {
        Point obs = draw_observation(model, rng, nullptr);
        if (dist2(obs, y) <= r2) ++hits;
    }
    double frac = static_cast<double>(hits) / static_cast<double>(n_mc);
    double vol = ball_volume(model.manifold.D, eps_loc);
    DensityEstimate est;
    est.value = frac / vol;
    est.std_error = std::sqrt(frac * (1.0 - frac) / static_cast<double>(n_mc)) / vol;
    est.ball_radius = eps_loc;
    return est;
}

std::pair<double, double> density_ratio_bounds(const NoiseModel& model, const PointSet& grid,
                                               double eps_loc, long long n_mc, std::uint64_t seed) {
    if (grid.empty()) throw ConfigError("grid must be nonempty");
    if (!(eps_loc > 0)) throw ConfigError("ball radius must be positive");
    if (n_mc < 1) throw ConfigError("need at least one sample");
    check_noise(model.manifold, model.sigma);

    // one pool of draws, counted against every grid point
    Rng rng(substream_seed(seed, 0));
    std::vector<Point> pool;
    pool.reserve(static_cast<std::size_t>(n_mc));
    for (long long i = 0; i < n_mc; ++i) pool.push_back(draw_observation(model, rng, nullptr));

    McEstimate vol = support_volume(model, n_mc, substream_seed(seed, 1));
    if (!(vol.value > 0)) throw ConfigError("support volume estimate is zero; raise n_mc");

    const double r2 = eps_loc * eps_loc;
    const double ball = ball_volume(model.manifold.D, eps_loc);
    double lo = 0, hi = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        long long hits = 0;
        for (const Point& p : pool)
            if (dist2(p, grid.points[g]) <= r2) ++hits;
        double q = static_cast<double>(hits) / static_cast<double>(n_mc) / ball;
        double ratio = q * vol.value;  // q / (1 / V(support))
        if (g == 0 || ratio < lo) lo = ratio;
        if (g == 0 || ratio > hi) hi = ratio;
    }
    return {lo, hi};
}

namespace {

void write_csv_rows(std::FILE* f, const ObservationSet* obs, const PointSet& pts) {
    int D = pts.ambient_dim;
    for (int i = 0; i < D; ++i) std::fprintf(f, "%sy_%d", i ? "," : "", i + 1);
    if (obs && !obs->latent.empty())
        for (int i = 0; i < D; ++i) std::fprintf(f, ",xi_%d", i + 1);
    std::fprintf(f, "\n");
    for (std::size_t r = 0; r < pts.size(); ++r) {
        for (int i = 0; i < D; ++i)
            std::fprintf(f, "%s%.17g", i ? "," : "", pts.points[r][i]);
        if (obs && !obs->latent.empty())
            for (int i = 0; i < D; ++i)
                std::fprintf(f, ",%.17g", obs->latent.points[r][i]);
        std::fprintf(f, "\n");
    }
}

void write_csv_file(const std::string& path, const ObservationSet* obs, const PointSet& pts) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ConfigError("cannot open file for writing: " + path);
    write_csv_rows(f, obs, pts);
    std::fclose(f);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

void write_observations_csv(const std::string& path, const ObservationSet& obs) {
    if (!obs.latent.empty() && obs.latent.size() != obs.Y.size())
        throw ConfigError("latent block must be empty or match the observations");
    write_csv_file(path, &obs, obs.Y);
}

void write_points_csv(const std::string& path, const PointSet& pts) {
    write_csv_file(path, nullptr, pts);
}

PointSet read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    auto fail = [&path](long long line_no, const std::string& msg) {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": " + msg);
    };

    std::string line;
    long long line_no = 0;
    // header: y_1..y_D, optionally followed by xi_1..xi_D
    if (!std::getline(in, line)) fail(1, "empty file (missing header)");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> head = split_csv(line);
    int D = 0;
    while (D < static_cast<int>(head.size()) && head[static_cast<std::size_t>(D)] == "y_" + std::to_string(D + 1)) ++D;
    if (D == 0) fail(line_no, "bad header: expected columns y_1..y_D");
    std::size_t cols = static_cast<std::size_t>(D);
    if (head.size() > cols) {
        for (int i = 0; i < D; ++i)
            if (cols + static_cast<std::size_t>(i) >= head.size() ||
                head[cols + static_cast<std::size_t>(i)] != "xi_" + std::to_string(i + 1))
                fail(line_no, "bad header: expected columns y_1..y_D optionally followed by xi_1..xi_D");
        cols += static_cast<std::size_t>(D);
        if (head.size() != cols) fail(line_no, "bad header: trailing columns after xi block");
    }

    PointSet pts;
    pts.ambient_dim = D;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv(line);
        if (fields.size() != cols)
            fail(line_no, "expected " + std::to_string(cols) + " fields, got " + std::to_string(fields.size()));
        Point p;
        p.coords.resize(static_cast<std::size_t>(D));
        for (int i = 0; i < D; ++i) {
            const std::string& s = fields[static_cast<std::size_t>(i)];
            const char* c = s.c_str();
            char* end = nullptr;
            double v = std::strtod(c, &end);
            if (end == c || end != c + s.size() || !std::isfinite(v))
                fail(line_no, "field " + std::to_string(i + 1) + " is not a finite number: '" + s + "'");
            p.coords[static_cast<std::size_t>(i)] = v;
        }
        pts.add(p);
    }
    if (pts.empty()) fail(line_no, "no data rows");
    return pts;
}

}  // namespace mlab
