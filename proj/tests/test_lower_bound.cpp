#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mlab/geometry.hpp"
#include "mlab/lower_bound.hpp"
#include "mlab/manifold.hpp"
#include "mlab/rng.hpp"

using namespace mlab;

namespace {

DiscreteDistribution random_distribution(Rng& rng, int k) {
    std::vector<double> w(static_cast<std::size_t>(k));
    double sum = 0.0;
    for (double& x : w) {
        x = -std::log(rng.uniform() + 1e-300);
        sum += x;
    }
    for (double& x : w) x /= sum;
    // renormalize exactly enough for the 1e-12 constructor check
    double s2 = 0.0;
    for (double x : w) s2 += x;
    w.back() += 1.0 - s2;
    return make_discrete(w);
}

double profile_height(const ManifoldModel& M, double s) {
    if (M.kind == ManifoldKind::bump) return bump_height(M.kappa, M.gamma, s);
    return saucer_height(M.kappa, s);
}

// upper/lower envelope of the tube column {x = u} over the top profile sheet:
// extremum over |t| <= sigma of height(|u+t|) +- sqrt(sigma^2 - t^2)
double column_envelope(const ManifoldModel& M, double u, double sigma, bool upper) {
    const int m = 2000;
    double best = upper ? -1e300 : 1e300;
    for (int i = 0; i <= m; ++i) {
        double t = -sigma + 2.0 * sigma * i / m;
        double s = std::abs(u + t);
        if (s > 1.0 + M.kappa) continue;
        double f = profile_height(M, s);
        double half = std::sqrt(std::max(0.0, sigma * sigma - t * t));
        if (upper)
            best = std::max(best, f + half);
        else
            best = std::min(best, f - half);
    }
    return best;
}

double interval_symdiff_length(double lo0, double hi0, double lo1, double hi1) {
    double len0 = std::max(0.0, hi0 - lo0);
    double len1 = std::max(0.0, hi1 - lo1);
    double inter = std::max(0.0, std::min(hi0, hi1) - std::max(lo0, lo1));
    return len0 + len1 - 2.0 * inter;
}

// deterministic quadrature of the symmetric difference of the two tubes in
// the planar case: per vertical column the tube sections near the top sheet
// are intervals, so the area is a 1-D integral of interval differences
double symdiff_quadrature(const LeCamPair& pair, double sigma, double du) {
    double w = std::sqrt(pair.gamma * (4.0 * pair.kappa - pair.gamma));
    double u_max = w + sigma;
    int cols = static_cast<int>(std::ceil(2.0 * u_max / du));
    double area = 0.0;
    for (int i = 0; i < cols; ++i) {
        double u = -u_max + (i + 0.5) * du;
        double lo0 = column_envelope(pair.M0, u, sigma, false);
        double hi0 = column_envelope(pair.M0, u, sigma, true);
        double lo1 = column_envelope(pair.M1, u, sigma, false);
        double hi1 = column_envelope(pair.M1, u, sigma, true);
        area += interval_symdiff_length(lo0, hi0, lo1, hi1) * du;
    }
    return area;
}

}  // namespace

TEST_CASE("discrete distribution construction") {
    DiscreteDistribution p = make_discrete({0.5, 0.5});
    CHECK(p.weights.size() == 2);
    CHECK_THROWS_WITH_AS(make_discrete({}), "distribution needs at least one outcome", ConfigError);
    CHECK_THROWS_WITH_AS(make_discrete({0.7, -0.1, 0.4}),
                         "distribution weights must be nonnegative", ConfigError);
    CHECK_THROWS_WITH_AS(make_discrete({0.5, 0.6}), "distribution weights must sum to 1",
                         ConfigError);
}

TEST_CASE("two-point pair construction") {
    LeCamPair pair = build_lecam_pair(1.0, 0.1, 1, 2);
    CHECK(pair.M0.kind == ManifoldKind::saucer);
    CHECK(pair.M1.kind == ManifoldKind::bump);
    CHECK(pair.gamma == 0.1);
    CHECK(pair.M0.reach_bound == 1.0);
    CHECK(pair.M1.reach_bound == 1.0);
    // the apex gap is the bump height
    CHECK(bump_height(1.0, 0.1, 0.0) - saucer_height(1.0, 0.0) == doctest::Approx(0.1));

    CHECK_NOTHROW(build_lecam_pair(1.0, 0.0, 1, 2));
    CHECK_NOTHROW(build_lecam_pair(1.0, 0.05, 2, 3));
    CHECK_THROWS_WITH_AS(build_lecam_pair(1.0, 1.0, 1, 2), "need 0 <= gamma < kappa", ConfigError);
    CHECK_THROWS_WITH_AS(build_lecam_pair(1.0, -0.1, 1, 2), "need 0 <= gamma < kappa", ConfigError);
    CHECK_THROWS_WITH_AS(build_lecam_pair(0.0, 0.1, 1, 2), "profile radius kappa must be positive",
                         ConfigError);
}

TEST_CASE("pair Hausdorff distance recovers the bump height") {
    for (double gamma : {0.02, 0.05, 0.1}) {
        LeCamPair pair = build_lecam_pair(1.0, gamma, 1, 2);
        double delta = gamma / 20.0;
        double h = pair_hausdorff(pair, delta);
        CHECK(std::abs(h - gamma) <= 2.0 * delta);
    }
    // identical models at gamma = 0
    LeCamPair same = build_lecam_pair(1.0, 0.0, 1, 2);
    CHECK(pair_hausdorff(same, 0.005) <= 0.01);

    LeCamPair pair = build_lecam_pair(1.0, 0.1, 1, 2);
    CHECK_THROWS_WITH_AS(pair_hausdorff(pair, 0.05),
                         "net spacing too coarse: need delta_net <= gamma/10", ConfigError);
    CHECK_THROWS_WITH_AS(pair_hausdorff(pair, 0.0), "net spacing must be positive", ConfigError);
}

TEST_CASE("pair Hausdorff matches the profile height gap") {
    // independent oracle: for these graphs the directed gap is largest at the
    // apex, where the heights differ by exactly gamma
    LeCamPair pair = build_lecam_pair(0.8, 0.04, 1, 2);
    double sup_gap = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        double s = 1.8 * i / 4000.0;
        sup_gap = std::max(sup_gap, bump_height(0.8, 0.04, s) - saucer_height(0.8, s));
    }
    CHECK(sup_gap == doctest::Approx(0.04).epsilon(1e-12));
    double h = pair_hausdorff(pair, 0.002);
    CHECK(std::abs(h - sup_gap) <= 0.004);
}

TEST_CASE("symmetric difference volume agrees with a deterministic quadrature") {
    LeCamPair pair = build_lecam_pair(1.0, 0.05, 1, 2);
    const double sigma = 0.3;
    McEstimate mc = symmetric_difference_volume(pair, sigma, 400000, 2025);
    double oracle = symdiff_quadrature(pair, sigma, 1e-3);
    CHECK(mc.std_error > 0.0);
    CHECK(std::abs(mc.value - oracle) <= 3.0 * mc.std_error + 1e-4);
}

TEST_CASE("symmetric difference volume grows with the bump height") {
    const double sigma = 0.3;
    McEstimate prev;
    bool first = true;
    for (double gamma : {0.02, 0.05, 0.1}) {
        LeCamPair pair = build_lecam_pair(1.0, gamma, 1, 2);
        McEstimate cur = symmetric_difference_volume(pair, sigma, 200000, 77);
        CHECK(cur.value > 0.0);
        if (!first) CHECK(cur.value >= prev.value - 3.0 * (cur.std_error + prev.std_error));
        prev = cur;
        first = false;
    }
    // identical tubes have an empty symmetric difference
    LeCamPair same = build_lecam_pair(1.0, 0.0, 1, 2);
    McEstimate zero = symmetric_difference_volume(same, sigma, 50000, 78);
    CHECK(zero.value == 0.0);

    LeCamPair pair = build_lecam_pair(1.0, 0.1, 1, 2);
    CHECK_THROWS_WITH_AS(symmetric_difference_volume(pair, 0.95, 1000, 1),
                         "need sigma < kappa - gamma", ConfigError);
}

TEST_CASE("l1 lower estimate vanishes for identical models and scales with gamma") {
    const double sigma = 0.3;
    LeCamPair same = build_lecam_pair(1.0, 0.0, 1, 2);
    McEstimate zero = l1_distance_bound(same, sigma, 20000, 5);
    CHECK(zero.value == 0.0);
    CHECK(zero.std_error == 0.0);

    LeCamPair small = build_lecam_pair(1.0, 0.02, 1, 2);
    LeCamPair large = build_lecam_pair(1.0, 0.16, 1, 2);
    McEstimate lo = l1_distance_bound(small, sigma, 40000, 6);
    McEstimate hi = l1_distance_bound(large, sigma, 40000, 7);
    CHECK(lo.value > 0.0);
    CHECK(hi.value > lo.value + 3.0 * (lo.std_error + hi.std_error));
    CHECK(hi.value <= 2.0);
}

TEST_CASE("l1 estimate tracks the thin-sliver prediction") {
    // each tube holds exclusive mass ~ (sliver area gamma*w) / (tube area
    // 2*sigma*L), so the two-sided total is close to gamma*w/(sigma*L)
    const double sigma = 0.3;
    const double gamma = 0.05;
    LeCamPair pair = build_lecam_pair(1.0, gamma, 1, 2);
    McEstimate est = l1_distance_bound(pair, sigma, 200000, 8);
    double w = std::sqrt(gamma * (4.0 - gamma));
    double profile_len = 4.0 + 2.0 * 3.14159265358979324;  // flat caps plus rim circle
    double predicted = gamma * w / (sigma * profile_len);
    CHECK(est.value >= 0.5 * predicted);
    CHECK(est.value <= 2.0 * predicted);
}

TEST_CASE("support-difference proxy stays within a constant of the direct estimate") {
    const double sigma = 0.3;
    for (double gamma : {0.04, 0.08, 0.16}) {
        LeCamPair pair = build_lecam_pair(1.0, gamma, 1, 2);
        McEstimate proxy;
        McEstimate direct = l1_distance_bound(pair, sigma, 60000, 9, &proxy);
        CHECK(proxy.value > 0.0);
        double ratio = direct.value / proxy.value;
        CHECK(ratio >= 0.2);
        CHECK(ratio <= 5.0);
    }
    // the proxy constant is a pure scale factor
    LeCamPair pair = build_lecam_pair(1.0, 0.08, 1, 2);
    McEstimate p1, p2;
    l1_distance_bound(pair, sigma, 20000, 10, &p1, 1.0);
    l1_distance_bound(pair, sigma, 20000, 10, &p2, 2.0);
    CHECK(p2.value == 2.0 * p1.value);
}

TEST_CASE("four-outcome product enumeration matches the closed form") {
    DiscreteDistribution p = make_discrete({0.5, 0.5});
    DiscreteDistribution q = make_discrete({0.9, 0.1});
    auto [lhs, rhs] = hellinger_product_identity(p, q, 2);
    // hand enumeration: (0.25,0.25,0.25,0.25) vs (0.81,0.09,0.09,0.01)
    // gives 0.16 + 0.04 + 0.04 + 0.16 = 0.4
    CHECK(lhs == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(std::abs(lhs - rhs) <= 1e-10);
}

TEST_CASE("product identity holds for random pairs and all small n") {
    Rng rng(101);
    for (int rep = 0; rep < 50; ++rep) {
        int k = 2 + static_cast<int>(rng.uniform() * 4.0);
        DiscreteDistribution p = random_distribution(rng, k);
        DiscreteDistribution q = random_distribution(rng, k);
        for (int n = 1; n <= 4; ++n) {
            auto [lhs, rhs] = hellinger_product_identity(p, q, n);
            CHECK(std::abs(lhs - rhs) <= 1e-10);
        }
    }
    // disjoint supports max out the squared Hellinger distance at 2
    DiscreteDistribution a = make_discrete({1.0, 0.0});
    DiscreteDistribution b = make_discrete({0.0, 1.0});
    CHECK(hellinger_sq(a, b) == doctest::Approx(2.0));
    for (int n = 1; n <= 3; ++n) {
        auto [lhs, rhs] = hellinger_product_identity(a, b, n);
        CHECK(lhs == doctest::Approx(2.0));
        CHECK(rhs == doctest::Approx(2.0));
    }
}

TEST_CASE("product enumeration budget") {
    DiscreteDistribution p = make_discrete({0.5, 0.5});
    DiscreteDistribution q = make_discrete({0.4, 0.6});
    CHECK_NOTHROW(hellinger_product_identity(p, q, 6));
    CHECK_THROWS_WITH_AS(hellinger_product_identity(p, q, 7), "enumeration budget exceeded",
                         BudgetError);
    CHECK_THROWS_WITH_AS(hellinger_product_identity(p, q, 0), "need n >= 1", ConfigError);

    std::vector<double> big(101, 1.0 / 101.0);
    double s = 0.0;
    for (double x : big) s += x;
    big.back() += 1.0 - s;
    DiscreteDistribution u = make_discrete(big);
    CHECK_THROWS_WITH_AS(hellinger_product_identity(u, u, 3), "enumeration budget exceeded",
                         BudgetError);

    DiscreteDistribution three = make_discrete({0.2, 0.3, 0.5});
    CHECK_THROWS_WITH_AS(l1_distance(p, three), "distributions must share a nonempty support",
                         ConfigError);
}

TEST_CASE("distance sandwich and affinity identity on random pairs") {
    Rng rng(103);
    for (int rep = 0; rep < 1000; ++rep) {
        int k = 2 + static_cast<int>(rng.uniform() * 5.0);
        DiscreteDistribution p = random_distribution(rng, k);
        DiscreteDistribution q = random_distribution(rng, k);
        double l1 = l1_distance(p, q);
        double h2 = hellinger_sq(p, q);
        CHECK(h2 <= l1 + 1e-12);
        CHECK(l1 <= 2.0 * std::sqrt(h2) + 1e-12);
        CHECK(affinity(p, q) == doctest::Approx(1.0 - l1 / 2.0).epsilon(1e-12));
    }

    // the l1 distance can exceed the Hellinger distance (so only the
    // two-sided sandwich above is available, not l1 <= h)
    DiscreteDistribution p = make_discrete({0.5, 0.5});
    DiscreteDistribution q = make_discrete({0.9, 0.1});
    double l1 = l1_distance(p, q);
    double h = std::sqrt(hellinger_sq(p, q));
    CHECK(l1 == doctest::Approx(0.8));
    CHECK(l1 > h);
    CHECK(l1 <= 2.0 * h);
}

TEST_CASE("product affinity dominates the closed-form bound") {
    Rng rng(107);
    for (int rep = 0; rep < 100; ++rep) {
        int k = 2 + static_cast<int>(rng.uniform() * 3.0);
        DiscreteDistribution p = random_distribution(rng, k);
        DiscreteDistribution q = random_distribution(rng, k);
        double l1 = l1_distance(p, q);
        for (int n = 1; n <= 4; ++n)
            CHECK(product_affinity(p, q, n) >= affinity_product_bound(l1, n) - 1e-12);
    }
}

TEST_CASE("affinity product bound arithmetic") {
    CHECK(affinity_product_bound(0.0, 1) == doctest::Approx(0.125));
    CHECK(affinity_product_bound(0.0, 1000) == doctest::Approx(0.125));
    CHECK(affinity_product_bound(2.0, 3) == 0.0);
    CHECK(affinity_product_bound(0.5, 2) == doctest::Approx(0.125 * std::pow(0.75, 4)));
    // decreasing in both arguments
    CHECK(affinity_product_bound(0.6, 2) < affinity_product_bound(0.5, 2));
    CHECK(affinity_product_bound(0.5, 3) < affinity_product_bound(0.5, 2));
    CHECK_THROWS_WITH_AS(affinity_product_bound(-0.1, 1), "need 0 <= l1 <= 2", ConfigError);
    CHECK_THROWS_WITH_AS(affinity_product_bound(2.1, 1), "need 0 <= l1 <= 2", ConfigError);
    CHECK_THROWS_WITH_AS(affinity_product_bound(0.5, 0), "need n >= 1", ConfigError);
}

TEST_CASE("risk bound arithmetic and the matched rate sequence") {
    CHECK(lecam_risk_bound(0.1, 0.0, 5) == doctest::Approx(0.1 / 8.0));
    CHECK(lecam_risk_bound(0.0, 0.5, 5) == 0.0);
    CHECK(lecam_risk_bound(0.1, 0.5, 5) <= 0.1);
    CHECK_THROWS_WITH_AS(lecam_risk_bound(-0.1, 0.5, 5), "need gamma >= 0", ConfigError);

    // with gamma(n) = n^(-2/(d+2)) and l1 ~ c * gamma^((d+2)/2) = c/n, the
    // bound stays a fixed fraction of gamma: the lower-bound rate mechanism
    const double c = 0.6;
    const int d = 1;
    for (long long n : {100LL, 316LL, 1000LL, 3162LL, 10000LL, 31623LL, 100000LL}) {
        double gamma = std::pow(static_cast<double>(n), -2.0 / (d + 2));
        double l1 = std::min(2.0, c * std::pow(gamma, (d + 2) / 2.0));
        double bound = lecam_risk_bound(gamma, l1, n);
        CHECK(bound >= 0.01 * gamma);
        CHECK(bound <= gamma);
    }
}

TEST_CASE("scaling exponent fits") {
    std::vector<double> xs = {1.0, 2.0, 4.0, 8.0};
    std::vector<double> quad, root;
    for (double x : xs) {
        quad.push_back(3.0 * x * x);
        root.push_back(std::sqrt(x));
    }
    ScalingFit f2 = fit_scaling_exponent(xs, quad);
    CHECK(f2.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f2.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f2.r_squared == doctest::Approx(1.0));
    CHECK(f2.points.size() == 4);

    ScalingFit fh = fit_scaling_exponent(xs, root);
    CHECK(fh.slope == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(fit_scaling_exponent({1.0, 2.0}, {1.0, 2.0}), "need at least 3 points",
                         ConfigError);
    CHECK_THROWS_WITH_AS(fit_scaling_exponent({1.0, 2.0, 3.0}, {1.0, 2.0}),
                         "x and y lists must have equal length", ConfigError);
    CHECK_THROWS_WITH_AS(fit_scaling_exponent({1.0, 2.0, 3.0}, {1.0, -2.0, 3.0}),
                         "scaling fit needs strictly positive values", ConfigError);
    CHECK_THROWS_WITH_AS(fit_scaling_exponent({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}),
                         "scaling fit needs at least two distinct x values", ConfigError);
}

TEST_CASE("calibration check against the geometric floor") {
    LeCamPair pair = build_lecam_pair(1.0, 0.1, 1, 2);
    CHECK(calibration_check(pair, 0.3, 0.7, 100000, 11));
    // an absurdly large density-ratio constant must fail the check
    CHECK_FALSE(calibration_check(pair, 0.3, 100.0, 100000, 11));
    CHECK_THROWS_WITH_AS(calibration_check(pair, 0.3, 0.0, 1000, 1),
                         "density ratio constant must be positive", ConfigError);

    LeCamPair same = build_lecam_pair(1.0, 0.0, 1, 2);
    CHECK(calibration_check(same, 0.3, 0.7, 20000, 12));
}
