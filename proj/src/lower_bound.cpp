#include "mlab/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mlab/parallel.hpp"
#include "mlab/rng.hpp"
#include "mlab/sampling.hpp"

namespace mlab {

namespace {

void check_shared_support(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    if (p.weights.empty() || p.weights.size() != q.weights.size())
        throw ConfigError("distributions must share a nonempty support");
}

void check_enumeration_budget(std::size_t k, int n) {
    if (n < 1) throw ConfigError("need n >= 1");
    if (n > 6 || std::pow(static_cast<double>(k), n) > 1e6 + 0.5)
        throw BudgetError("enumeration budget exceeded");
}

// walks all k^n product outcomes; fn receives (prod p, prod q)
template <typename Fn>
void for_each_product(const DiscreteDistribution& p, const DiscreteDistribution& q, int n, Fn fn) {
    std::size_t k = p.weights.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        double pp = 1.0, qp = 1.0;
        for (int j = 0; j < n; ++j) {
            pp *= p.weights[idx[static_cast<std::size_t>(j)]];
            qp *= q.weights[idx[static_cast<std::size_t>(j)]];
        }
        fn(pp, qp);
        int j = n - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == k) idx[static_cast<std::size_t>(j--)] = 0;
        if (j < 0) break;
    }
}

// fraction of n draws from `from` that land strictly outside the sigma-tube
// of `other`; batched with substreams so the schedule cannot change the count
double outside_fraction(const NoiseModel& from, const ManifoldModel& other, double sigma,
                        long long n, std::uint64_t seed) {
    const long long batch = 1 << 13;
    const long long n_batches = (n + batch - 1) / batch;
    std::vector<long long> counts(static_cast<std::size_t>(n_batches), 0);
    parallel_for(n_batches, resolve_threads(0), [&](long long b) {
        long long lo = b * batch;
        long long hi = std::min(n, lo + batch);
        ObservationSet obs = sample_observations(from, hi - lo, substream_seed(seed, static_cast<std::uint64_t>(b)));
        long long c = 0;
        for (const Point& y : obs.Y.points)
            if (distance_to_manifold(other, y) > sigma) ++c;
        counts[static_cast<std::size_t>(b)] = c;
    });
    long long total = 0;
    for (long long c : counts) total += c;
    return static_cast<double>(total) / static_cast<double>(n);
}

}  // namespace

DiscreteDistribution make_discrete(std::vector<double> weights) {
    if (weights.empty()) throw ConfigError("distribution needs at least one outcome");
    double sum = 0;
    for (double w : weights) {
        if (w < 0) throw ConfigError("distribution weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("distribution weights must sum to 1");
    DiscreteDistribution d;
    d.weights = std::move(weights);
    return d;
}

LeCamPair build_lecam_pair(double kappa, double gamma, int d, int D) {
    if (!(kappa > 0)) throw ConfigError("profile radius kappa must be positive");
    if (!(gamma >= 0) || gamma >= kappa) throw ConfigError("need 0 <= gamma < kappa");
    LeCamPair pair;
    pair.kappa = kappa;
    pair.gamma = gamma;
    pair.d = d;
    pair.D = D;
    pair.M0 = make_saucer(kappa, d, D);
    pair.M1 = make_bump(kappa, gamma, d, D);
    // construction self-check: the profiles must differ by exactly gamma at
    // the axis
    double apex_gap = bump_height(kappa, gamma, 0.0) - saucer_height(kappa, 0.0);
    if (std::abs(apex_gap - gamma) > 1e-12)
        throw std::logic_error("pair construction self-check failed: apex gap != gamma");
    return pair;
}

double pair_hausdorff(const LeCamPair& pair, double delta_net) {
    if (!(delta_net > 0)) throw ConfigError("net spacing must be positive");
    if (pair.gamma > 0 && delta_net > pair.gamma / 10.0 + 1e-15)
        throw ConfigError("net spacing too coarse: need delta_net <= gamma/10");
    PointSet a = section_net(pair.M0, delta_net);
    PointSet b = section_net(pair.M1, delta_net);
    return hausdorff(a, b);
}

McEstimate symmetric_difference_volume(const LeCamPair& pair, double sigma, long long n_mc,
                                       std::uint64_t seed) {
    if (!(sigma > 0)) throw ConfigError("noise width must be positive");
    if (!(sigma < pair.kappa - pair.gamma)) throw ConfigError("need sigma < kappa - gamma");
    // the tubes coincide wherever the profiles do, so the symmetric
    // difference lives inside {||u|| <= w + sigma} x [kappa - sigma,
    // kappa + gamma + sigma], padded by sigma in the off-plane coordinates
    double w = std::sqrt(pair.gamma * (4.0 * pair.kappa - pair.gamma));
    BoundingBox box;
    box.lower.coords.assign(static_cast<std::size_t>(pair.D), -sigma);
    box.upper.coords.assign(static_cast<std::size_t>(pair.D), sigma);
    for (int i = 0; i < pair.d; ++i) {
        box.lower.coords[static_cast<std::size_t>(i)] = -(w + sigma);
        box.upper.coords[static_cast<std::size_t>(i)] = w + sigma;
    }
    box.lower.coords[static_cast<std::size_t>(pair.d)] = pair.kappa - sigma;
    box.upper.coords[static_cast<std::size_t>(pair.d)] = pair.kappa + pair.gamma + sigma;

    const ManifoldModel& M0 = pair.M0;
    const ManifoldModel& M1 = pair.M1;
    MembershipFn one_tube_only = [&M0, &M1, sigma](const Point& y) {
        bool in0 = distance_to_manifold(M0, y) <= sigma;
        bool in1 = distance_to_manifold(M1, y) <= sigma;
        return in0 != in1;
    };
    return mc_volume(one_tube_only, box, n_mc, seed);
}

McEstimate l1_distance_bound(const LeCamPair& pair, double sigma, long long n_mc,
                             std::uint64_t seed, McEstimate* proxy_out, double c_star) {
    if (!(sigma > 0)) throw ConfigError("noise width must be positive");
    if (!(sigma < pair.kappa - pair.gamma)) throw ConfigError("need sigma < kappa - gamma");
    if (n_mc < 1) throw ConfigError("need at least one sample");

    NoiseModel model0 = make_noise_model(pair.M0, sigma);
    NoiseModel model1 = make_noise_model(pair.M1, sigma);
    // int |q0 - q1| >= Q0(S0 \ S1) + Q1(S1 \ S0): each term is the mass one
    // model puts where the other's density vanishes, measured by exact
    // membership, so gamma = 0 gives exactly zero
    double f0 = outside_fraction(model0, pair.M1, sigma, n_mc, substream_seed(seed, 0, 1));
    double f1 = outside_fraction(model1, pair.M0, sigma, n_mc, substream_seed(seed, 0, 2));
    double se0 = std::sqrt(f0 * (1.0 - f0) / static_cast<double>(n_mc));
    double se1 = std::sqrt(f1 * (1.0 - f1) / static_cast<double>(n_mc));

    McEstimate direct;
    direct.value = f0 + f1;
    direct.std_error = std::sqrt(se0 * se0 + se1 * se1);
    direct.samples = 2 * n_mc;

    if (proxy_out) {
        if (!(c_star > 0)) throw ConfigError("proxy constant must be positive");
        McEstimate sym = symmetric_difference_volume(pair, sigma, n_mc, substream_seed(seed, 0, 3));
        McEstimate tube = support_volume(model0, n_mc, substream_seed(seed, 0, 4));
        if (!(tube.value > 0)) throw ConfigError("tube volume estimate is zero; raise n_mc");
        McEstimate proxy;
        proxy.value = c_star * sym.value / tube.value;
        // first-order error propagation for the ratio of independent estimates
        double rel_sym = sym.value > 0 ? sym.std_error / sym.value : 0.0;
        double rel_tube = tube.std_error / tube.value;
        if (sym.value > 0)
            proxy.std_error = proxy.value * std::sqrt(rel_sym * rel_sym + rel_tube * rel_tube);
        else
            proxy.std_error = c_star * sym.std_error / tube.value;
        proxy.samples = sym.samples + tube.samples;
        *proxy_out = proxy;
    }
    return direct;
}

std::pair<double, double> hellinger_product_identity(const DiscreteDistribution& p,
                                                     const DiscreteDistribution& q, int n) {
    check_shared_support(p, q);
    check_enumeration_budget(p.weights.size(), n);
    double lhs = 0.0;
    for_each_product(p, q, n, [&lhs](double pp, double qp) {
        double diff = std::sqrt(pp) - std::sqrt(qp);
        lhs += diff * diff;
    });
    double rhs = 2.0 * (1.0 - std::pow(1.0 - hellinger_sq(p, q) / 2.0, n));
    return {lhs, rhs};
}

double affinity_product_bound(double l1, long long n) {
    if (!(l1 >= 0) || !(l1 <= 2)) throw ConfigError("need 0 <= l1 <= 2");
    if (n < 1) throw ConfigError("need n >= 1");
    return 0.125 * std::pow(1.0 - l1 / 2.0, 2.0 * static_cast<double>(n));
}

double lecam_risk_bound(double gamma, double l1, long long n) {
    if (!(gamma >= 0)) throw ConfigError("need gamma >= 0");
    return gamma * affinity_product_bound(l1, n);
}

ScalingFit fit_scaling_exponent(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw ConfigError("x and y lists must have equal length");
    if (xs.size() < 3) throw ConfigError("need at least 3 points");
    ScalingFit fit;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0) || !(ys[i] > 0)) throw ConfigError("scaling fit needs strictly positive values");
        fit.points.emplace_back(std::log(xs[i]), std::log(ys[i]));
        sx += fit.points.back().first;
        sy += fit.points.back().second;
    }
    double n = static_cast<double>(xs.size());
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& pt : fit.points) {
        sxx += (pt.first - mx) * (pt.first - mx);
        sxy += (pt.first - mx) * (pt.second - my);
        syy += (pt.second - my) * (pt.second - my);
    }
    if (!(sxx > 0)) throw ConfigError("scaling fit needs at least two distinct x values");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (const auto& pt : fit.points) {
        double r = pt.second - (fit.intercept + fit.slope * pt.first);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    fit.r_squared = std::min(1.0, std::max(0.0, fit.r_squared));
    return fit;
}

bool calibration_check(const LeCamPair& pair, double sigma, double C_star, long long n_mc,
                       std::uint64_t seed) {
    if (!(C_star > 0)) throw ConfigError("density ratio constant must be positive");
    double delta_net = pair.gamma > 0 ? pair.gamma / 20.0 : pair.kappa / 100.0;
    double H = pair_hausdorff(pair, delta_net);
    McEstimate l1 = l1_distance_bound(pair, sigma, n_mc, seed);
    double floor = C_star * ball_volume(pair.D, 1.0) * std::pow(H / 2.0, pair.D);
    return l1.value >= floor - 3.0 * l1.std_error;
}

double l1_distance(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    check_shared_support(p, q);
    double s = 0;
    for (std::size_t i = 0; i < p.weights.size(); ++i) s += std::abs(p.weights[i] - q.weights[i]);
    return s;
}

double hellinger_sq(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    check_shared_support(p, q);
    double s = 0;
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
        double diff = std::sqrt(p.weights[i]) - std::sqrt(q.weights[i]);
        s += diff * diff;
    }
    return s;
}

double affinity(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    check_shared_support(p, q);
    double s = 0;
    for (std::size_t i = 0; i < p.weights.size(); ++i) s += std::min(p.weights[i], q.weights[i]);
    return s;
}

double product_affinity(const DiscreteDistribution& p, const DiscreteDistribution& q, int n) {
    check_shared_support(p, q);
    check_enumeration_budget(p.weights.size(), n);
    double s = 0;
    for_each_product(p, q, n, [&s](double pp, double qp) { s += std::min(pp, qp); });
    return s;
}

}  // namespace mlab
