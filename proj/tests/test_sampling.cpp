#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mlab/geometry.hpp"
#include "mlab/manifold.hpp"
#include "mlab/rng.hpp"
#include "mlab/sampling.hpp"

using namespace mlab;

namespace {

// 99.9% chi-square quantile with 19 degrees of freedom (20 equal bins)
const double kChi2Crit19 = 43.82019596451753;
// 99.9% Kolmogorov-Smirnov critical constant: D_n <= c / sqrt(n)
const double kKsCrit = 1.9494746035204051;

double ks_stat_against_uniform(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double f = std::clamp(v[i], 0.0, 1.0);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string caught_message(const std::string& path) {
    try {
        read_points_csv(path);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("noise model validation") {
    ManifoldModel circle = make_circle(1.0);
    NoiseModel model = make_noise_model(circle, 0.3);
    CHECK(model.sigma == 0.3);
    CHECK_THROWS_WITH_AS(make_noise_model(circle, -0.1), "noise width must be positive",
                         ConfigError);
    CHECK_THROWS_WITH_AS(make_noise_model(circle, 0.0), "noise width must be positive",
                         ConfigError);
    CHECK_THROWS_WITH_AS(make_noise_model(circle, 1.0), "noise exceeds reach", ConfigError);
    CHECK_THROWS_WITH_AS(make_noise_model(circle, 1.5), "noise exceeds reach", ConfigError);
}

TEST_CASE("ball volumes") {
    CHECK(ball_volume(0, 1.0) == doctest::Approx(1.0));
    CHECK(ball_volume(1, 2.0) == doctest::Approx(4.0));
    CHECK(ball_volume(2, 1.0) == doctest::Approx(3.14159265358979324));
    CHECK(ball_volume(3, 1.0) == doctest::Approx(4.18879020478639098));
    CHECK_THROWS_WITH_AS(ball_volume(-1, 1.0), "ball_volume needs dim >= 0 and radius >= 0",
                         ConfigError);
}

TEST_CASE("uniform circle angles pass a 20-bin chi-square test") {
    ManifoldModel circle = make_circle(1.0);
    const long long n = 100000;
    PointSet pts = sample_manifold_uniform(circle, n, 11);
    std::vector<long long> counts(20, 0);
    for (const Point& p : pts.points) {
        double angle = std::atan2(p[1], p[0]);  // [-pi, pi]
        int bin = static_cast<int>((angle + 3.14159265358979324) / (2.0 * 3.14159265358979324) * 20.0);
        bin = std::clamp(bin, 0, 19);
        ++counts[static_cast<std::size_t>(bin)];
    }
    double expected = static_cast<double>(n) / 20.0;
    double chi2 = 0.0;
    for (long long c : counts) {
        double diff = static_cast<double>(c) - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < kChi2Crit19);
}

TEST_CASE("uniform sphere draws are centered and on the surface") {
    ManifoldModel sphere = make_sphere(2, 3, 1.0);
    const long long n = 100000;
    PointSet pts = sample_manifold_uniform(sphere, n, 13);
    double mean[3] = {0.0, 0.0, 0.0};
    for (const Point& p : pts.points) {
        CHECK(std::abs(std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) - 1.0) <= 1e-12);
        for (int j = 0; j < 3; ++j) mean[j] += p[j];
    }
    double bound = 4.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(mean[j] / static_cast<double>(n)) <= bound);
    CHECK_THROWS_WITH_AS(sample_manifold_uniform(sphere, 0, 1), "need at least one sample",
                         ConfigError);
}

TEST_CASE("fiber noise is perpendicular and bounded") {
    ManifoldModel circle = make_circle(1.0);
    const double sigma = 0.25;
    for (int rep = 0; rep < 1000; ++rep) {
        Point z = sample_fiber_noise(circle, Point{1.0, 0.0}, sigma, 100 + rep);
        // tangent at (1,0) is (0,1): the offset must be radial
        CHECK(std::abs(z[1]) <= 1e-9);
        CHECK(std::sqrt(z[0] * z[0] + z[1] * z[1]) <= sigma + 1e-12);
    }
    CHECK_THROWS_WITH_AS(sample_fiber_noise(circle, Point{2.0, 0.0}, sigma, 1),
                         "point is not on the manifold", ConfigError);
    CHECK_THROWS_WITH_AS(sample_fiber_noise(circle, Point{1.0, 0.0}, -0.25, 1),
                         "noise width must be nonnegative", ConfigError);
    // zero width is legal here and returns the zero offset
    Point z0 = sample_fiber_noise(circle, Point{1.0, 0.0}, 0.0, 1);
    CHECK(std::abs(z0[0]) <= 1e-15);
    CHECK(std::abs(z0[1]) <= 1e-15);
}

TEST_CASE("radial law of the noise on a codimension-1 model") {
    // for D-d = 1 the radial distance over sigma is uniform on [0,1]
    ManifoldModel circle = make_circle(1.0);
    NoiseModel model = make_noise_model(circle, 0.3);
    const long long n = 100000;
    ObservationSet obs = sample_observations(model, n, 17);
    REQUIRE(obs.latent.size() == obs.Y.size());
    std::vector<double> u;
    u.reserve(static_cast<std::size_t>(n));
    double max_dev = 0.0;
    for (std::size_t i = 0; i < obs.Y.size(); ++i) {
        double r = dist(obs.Y.points[i], obs.latent.points[i]);
        u.push_back(r / model.sigma);
        // perpendicularity: for the circle the offset is radial, so the
        // nearest manifold point to Y is the latent point itself
        max_dev = std::max(max_dev, std::abs(dist(obs.Y.points[i], obs.latent.points[i]) -
                                             std::abs(std::sqrt(dist2(obs.Y.points[i], Point{0.0, 0.0})) - 1.0)));
    }
    CHECK(max_dev <= 1e-12);
    CHECK(ks_stat_against_uniform(u) <= kKsCrit / std::sqrt(static_cast<double>(n)));
    // extremes: the largest offset approaches sigma from below
    double max_u = *std::max_element(u.begin(), u.end());
    CHECK(max_u <= 1.0 + 1e-12);
    CHECK(max_u >= 1.0 - 10.0 / static_cast<double>(n));
}

TEST_CASE("radial law of the noise on a codimension-2 model") {
    // for D-d = 2 the squared radial distance over sigma^2 is uniform
    ManifoldModel saucer = make_saucer(1.0, 1, 3);
    NoiseModel model = make_noise_model(saucer, 0.2);
    const long long n = 100000;
    ObservationSet obs = sample_observations(model, n, 19);
    std::vector<double> u;
    u.reserve(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < obs.Y.size(); ++i) {
        double r = dist(obs.Y.points[i], obs.latent.points[i]);
        u.push_back(r * r / (model.sigma * model.sigma));
    }
    CHECK(ks_stat_against_uniform(u) <= kKsCrit / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("offsets are orthogonal to the tangent space") {
    ManifoldModel saucer = make_saucer(1.0, 1, 3);
    NoiseModel model = make_noise_model(saucer, 0.2);
    ObservationSet obs = sample_observations(model, 2000, 23);
    for (std::size_t i = 0; i < obs.Y.size(); ++i) {
        Frame f = frame_at(saucer, obs.latent.points[i]);
        double proj = 0.0;
        for (int j = 0; j < 3; ++j)
            proj += (obs.Y.points[i][j] - obs.latent.points[i][j]) * f.tangent_basis[0][static_cast<std::size_t>(j)];
        CHECK(std::abs(proj) <= 1e-9);
    }
}

TEST_CASE("observations stay inside the tube and project back to the latent point") {
    ManifoldModel circle = make_circle(1.0);
    NoiseModel model = make_noise_model(circle, 0.3);
    ObservationSet obs = sample_observations(model, 2000, 29);
    for (std::size_t i = 0; i < obs.Y.size(); ++i) {
        CHECK(distance_to_manifold(circle, obs.Y.points[i]) <= model.sigma + 1e-12);
        Point back = project(circle, obs.Y.points[i]);
        CHECK(dist(back, obs.latent.points[i]) <= 1e-8);
    }
}

TEST_CASE("vanishing noise width collapses the offsets") {
    ManifoldModel circle = make_circle(1.0);
    NoiseModel model = make_noise_model(circle, 1e-12);
    ObservationSet obs = sample_observations(model, 500, 31);
    for (std::size_t i = 0; i < obs.Y.size(); ++i)
        CHECK(dist(obs.Y.points[i], obs.latent.points[i]) <= 1e-12);
}

TEST_CASE("observation sampling is reproducible per seed") {
    ManifoldModel saucer = make_saucer(1.0, 2, 3);
    NoiseModel model = make_noise_model(saucer, 0.2);
    ObservationSet a = sample_observations(model, 300, 37);
    ObservationSet b = sample_observations(model, 300, 37);
    ObservationSet c = sample_observations(model, 300, 38);
    REQUIRE(a.Y.size() == b.Y.size());
    bool identical = true;
    for (std::size_t i = 0; i < a.Y.size(); ++i)
        for (int j = 0; j < 3; ++j)
            if (a.Y.points[i][j] != b.Y.points[i][j]) identical = false;
    CHECK(identical);
    bool differs = false;
    for (std::size_t i = 0; i < c.Y.size() && !differs; ++i)
        if (a.Y.points[i][0] != c.Y.points[i][0]) differs = true;
    CHECK(differs);
}

TEST_CASE("support bounding box contains the observations") {
    ManifoldModel circle = make_circle(1.0);
    NoiseModel model = make_noise_model(circle, 0.2);
    BoundingBox box = support_bounding_box(model);
    CHECK(box.lower[0] == doctest::Approx(-1.2));
    CHECK(box.upper[1] == doctest::Approx(1.2));
    ObservationSet obs = sample_observations(model, 10000, 41);
    for (const Point& y : obs.Y.points) CHECK(box.contains(y));

    ManifoldModel saucer = make_saucer(1.0, 1, 3);
    NoiseModel sm = make_noise_model(saucer, 0.15);
    BoundingBox sbox = support_bounding_box(sm);
    ObservationSet sobs = sample_observations(sm, 10000, 43);
    for (const Point& y : sobs.Y.points) CHECK(sbox.contains(y));
}

TEST_CASE("support volume of the circle tube matches the annulus area") {
    ManifoldModel circle = make_circle(1.0);
    NoiseModel model = make_noise_model(circle, 0.2);
    McEstimate vol = support_volume(model, 200000, 47);
    double annulus = 3.14159265358979324 * (1.2 * 1.2 - 0.8 * 0.8);
    CHECK(std::abs(vol.value - annulus) <= 3.0 * vol.std_error);
}

TEST_CASE("empirical density matches the circle closed form") {
    // q(y) = 1 / (4 pi sigma r) inside the tube around the unit circle
    ManifoldModel circle = make_circle(1.0);
    NoiseModel model = make_noise_model(circle, 0.3);
    for (double r : {0.85, 1.0, 1.05, 1.2}) {
        Point y{r, 0.0};
        DensityEstimate est = empirical_density(model, y, 0.05, 400000, 53);
        double analytic = 1.0 / (4.0 * 3.14159265358979324 * model.sigma * r);
        CHECK(est.std_error > 0.0);
        CHECK(std::abs(est.value - analytic) <= 3.0 * est.std_error + 1e-3);
    }
    // far outside the support the density estimate is exactly zero
    DensityEstimate zero = empirical_density(model, Point{5.0, 5.0}, 0.05, 10000, 57);
    CHECK(zero.value == 0.0);
}

TEST_CASE("empirical density integrates to one over a covering grid") {
    ManifoldModel circle = make_circle(1.0);
    NoiseModel model = make_noise_model(circle, 0.3);
    const double h = 0.1;
    const double eps_loc = 0.05;
    double total = 0.0;
    int idx = 0;
    for (int i = 0; i < 28; ++i) {
        for (int j = 0; j < 28; ++j) {
            Point c{-1.4 + (i + 0.5) * h, -1.4 + (j + 0.5) * h};
            DensityEstimate est = empirical_density(model, c, eps_loc, 20000, 1000 + idx);
            total += est.value * h * h;
            ++idx;
        }
    }
    CHECK(std::abs(total - 1.0) <= 0.05);
}

TEST_CASE("density ratio bounds on the circle tube are moderate") {
    ManifoldModel circle = make_circle(1.0);
    NoiseModel model = make_noise_model(circle, 0.3);
    Rng rng(61);
    PointSet grid(2);
    for (int i = 0; i < 200; ++i) {
        double r = 1.0 + rng.uniform(-0.24, 0.24);
        double th = rng.uniform(0.0, 6.283185307179586);
        grid.add(Point{r * std::cos(th), r * std::sin(th)});
    }
    auto bounds = density_ratio_bounds(model, grid, 0.05, 200000, 67);
    CHECK(bounds.first <= bounds.second);
    // analytic ratio is 1/r over this grid, hence within [0.8, 1.32]
    CHECK(bounds.first >= 0.6);
    CHECK(bounds.second <= 1.6);
    // the coarse two-sided pin used by the lower-bound calibration
    CHECK(bounds.first >= 0.2);
    CHECK(bounds.second <= 5.0);
}

TEST_CASE("observation CSV round trip preserves every bit") {
    ManifoldModel circle = make_circle(1.0);
    NoiseModel model = make_noise_model(circle, 0.3);
    ObservationSet obs = sample_observations(model, 50, 71);
    std::string path = temp_path("mlab_obs_roundtrip.csv");
    write_observations_csv(path, obs);
    PointSet back = read_points_csv(path);
    REQUIRE(back.size() == obs.Y.size());
    CHECK(back.ambient_dim == 2);
    for (std::size_t i = 0; i < back.size(); ++i)
        for (int j = 0; j < 2; ++j) CHECK(back.points[i][j] == obs.Y.points[i][j]);
    std::filesystem::remove(path);

    PointSet pts(3);
    pts.add(Point{0.1, -0.2, 3.0e-17});
    pts.add(Point{1.0 / 3.0, 2.0 / 7.0, -5.5});
    std::string path2 = temp_path("mlab_pts_roundtrip.csv");
    write_points_csv(path2, pts);
    PointSet back2 = read_points_csv(path2);
    REQUIRE(back2.size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) CHECK(back2.points[i][j] == pts.points[i][j]);
    std::filesystem::remove(path2);
}

TEST_CASE("malformed CSV inputs carry line-numbered diagnostics") {
    std::string path = temp_path("mlab_bad.csv");

    write_text_file(path, "");
    std::string msg = caught_message(path);
    CHECK(msg.find("empty file (missing header)") != std::string::npos);

    write_text_file(path, "a,b\n1,2\n");
    msg = caught_message(path);
    CHECK(msg.find("bad header: expected columns y_1..y_D") != std::string::npos);
    CHECK(msg.find(":1:") != std::string::npos);

    write_text_file(path, "y_1,y_2\n1.0\n");
    msg = caught_message(path);
    CHECK(msg.find("expected 2 fields, got 1") != std::string::npos);
    CHECK(msg.find(":2:") != std::string::npos);

    write_text_file(path, "y_1,y_2\n1.0,2.0\n3.0,oops\n");
    msg = caught_message(path);
    CHECK(msg.find("not a finite number") != std::string::npos);
    CHECK(msg.find("oops") != std::string::npos);
    CHECK(msg.find(":3:") != std::string::npos);

    write_text_file(path, "y_1,y_2\n");
    msg = caught_message(path);
    CHECK(msg.find("no data rows") != std::string::npos);

    // a latent block after the observation columns is accepted and ignored
    write_text_file(path, "y_1,y_2,xi_1,xi_2\n1.0,2.0,0.9,1.9\n");
    PointSet ok = read_points_csv(path);
    CHECK(ok.ambient_dim == 2);
    CHECK(ok.points[0][1] == 2.0);

    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_points_csv(temp_path("mlab_missing_file.csv")), ConfigError);
}
