#include "mlab/estimator.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <vector>

#include "mlab/sampling.hpp"

namespace mlab {

EstimatorConfig make_estimator_config(double epsilon, double C, double h, BoundingBox box) {
    if (!(epsilon > 0)) throw ConfigError("ball radius epsilon must be positive");
    if (!(C > 0)) throw ConfigError("rate constant C must be positive");
    if (!(h > 0)) throw ConfigError("grid width must be positive");
    if (h > epsilon / 5.0 * (1.0 + 1e-12))
        throw ConfigError("grid width must satisfy h <= epsilon/5");
    box.validate();
    EstimatorConfig cfg;
    cfg.epsilon = epsilon;
    cfg.C = C;
    cfg.h = h;
    cfg.box = std::move(box);
    return cfg;
}

double choose_epsilon(long long n, int D, double C) {
    if (n < 2) throw ConfigError("need n >= 2 to choose a ball radius");
    if (D < 1) throw ConfigError("ambient dimension must be positive");
    if (!(C > 0)) throw ConfigError("rate constant C must be positive");
    // support capture needs C strictly above (2 / (chi * omega_D))^(1/D)
    // with chi = 2^-D; warn once so experiment logs stay readable
    double threshold = std::pow(2.0 * std::pow(2.0, D) / ball_volume(D, 1.0), 1.0 / D);
    static std::atomic<bool> warned{false};
    if (C <= threshold && !warned.exchange(true)) {
        std::fprintf(stderr,
                     "warning: rate constant C=%.6g is at or below the support-capture "
                     "threshold %.6g for D=%d; coverage guarantees may not hold\n",
                     C, threshold, D);
    }
    double ln_n = std::log(static_cast<double>(n));
    return C * std::pow(ln_n / static_cast<double>(n), 1.0 / D);
}

SupportEstimate estimate_support(const PointSet& Y, const EstimatorConfig& cfg) {
    if (Y.empty()) throw ConfigError("need at least one data point");
    const int D = Y.ambient_dim;
    if (D < 1 || D > 3) throw ConfigError("support estimation handles 1 <= D <= 3");
    if (cfg.box.dim() != D) throw ConfigError("box dimension must match the data");
    const double eps = cfg.epsilon;
    for (const Point& y : Y.points) {
        if (y.dim() != D) throw ConfigError("inconsistent point dimensions");
        for (int j = 0; j < D; ++j)
            if (y[j] - eps < cfg.box.lower[j] || y[j] + eps > cfg.box.upper[j])
                throw ConfigError("box must contain every data ball (point +- epsilon)");
    }

    SupportEstimate S;
    S.data = Y;
    S.epsilon = eps;
    DistanceField& field = S.field;
    field.box = cfg.box;
    field.h = cfg.h;
    field.shape.resize(static_cast<std::size_t>(D));
    std::int64_t total = 1;
    for (int i = 0; i < D; ++i) {
        std::int64_t n = static_cast<std::int64_t>(std::ceil((cfg.box.upper[i] - cfg.box.lower[i]) / cfg.h));
        n = std::max<std::int64_t>(n, 1);
        field.shape[static_cast<std::size_t>(i)] = static_cast<int>(n);
        total *= n;
        if (total > (std::int64_t{1} << 26)) throw BudgetError("grid too large");
    }
    field.inside.assign(static_cast<std::size_t>(total), 0);

    // splat each data ball: mark every cell whose center lies within epsilon;
    // the union over points equals the membership predicate exactly
    const double r2 = eps * eps;
    std::vector<int> lo(static_cast<std::size_t>(D)), hi(static_cast<std::size_t>(D));
    std::vector<int> idx(static_cast<std::size_t>(D));
    Point center;
    center.coords.resize(static_cast<std::size_t>(D));
    for (const Point& y : Y.points) {
        bool empty_range = false;
        for (int j = 0; j < D; ++j) {
            double a = (y[j] - eps - cfg.box.lower[j]) / cfg.h - 0.5;
            double b = (y[j] + eps - cfg.box.lower[j]) / cfg.h - 0.5;
            lo[static_cast<std::size_t>(j)] = std::max(0, static_cast<int>(std::ceil(a)));
            hi[static_cast<std::size_t>(j)] =
                std::min(field.shape[static_cast<std::size_t>(j)] - 1, static_cast<int>(std::floor(b)));
            if (lo[static_cast<std::size_t>(j)] > hi[static_cast<std::size_t>(j)]) {
                empty_range = true;
                break;
            }
        }
        if (empty_range) continue;
        idx = lo;
        for (;;) {
            for (int j = 0; j < D; ++j)
                center.coords[static_cast<std::size_t>(j)] =
                    cfg.box.lower[j] + (static_cast<double>(idx[static_cast<std::size_t>(j)]) + 0.5) * cfg.h;
            if (dist2(center, y) <= r2) field.inside[field.flat_index(idx)] = 1;
            int j = D - 1;
            while (j >= 0) {
                std::size_t ju = static_cast<std::size_t>(j);
                if (++idx[ju] <= hi[ju]) break;
                idx[ju] = lo[ju];
                --j;
            }
            if (j < 0) break;
        }
    }

    detail::edt_fill(field);
    S.sigma_hat = field.max_value();
    return S;
}

ManifoldEstimate extract_manifold(const SupportEstimate& S) {
    ManifoldEstimate est;
    est.epsilon_used = S.epsilon;
    est.sigma_hat = S.sigma_hat;
    est.points.ambient_dim = S.field.box.dim();
    double threshold = std::max(0.0, S.sigma_hat - 2.0 * S.epsilon);
    for (std::size_t i = 0; i < S.field.cell_count(); ++i) {
        if (S.field.inside[i] && S.field.values[i] >= threshold)
            est.points.add(S.field.cell_center(i));
    }
    if (est.points.empty())
        throw std::logic_error("level set unexpectedly empty: the argmax cell must qualify");
    return est;
}

ManifoldEstimate estimate(const PointSet& Y, long long n, int D, double C, double h,
                          const BoundingBox& box) {
    if (n != static_cast<long long>(Y.size())) throw ConfigError("n must match the number of data points");
    if (D != Y.ambient_dim) throw ConfigError("D must match the data dimension");
    double eps = choose_epsilon(n, D, C);
    EstimatorConfig cfg = make_estimator_config(eps, C, h, box);
    return extract_manifold(estimate_support(Y, cfg));
}

}  // namespace mlab
