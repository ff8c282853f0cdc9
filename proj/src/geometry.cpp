#include "mlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mlab/parallel.hpp"
#include "mlab/rng.hpp"

namespace mlab {

double BoundingBox::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= upper[i] - lower[i];
    return v;
}

bool BoundingBox::contains(const Point& p) const {
    for (int i = 0; i < dim(); ++i) {
        if (p[i] < lower[i] || p[i] > upper[i]) return false;
    }
    return true;
}

void BoundingBox::validate() const {
    if (lower.dim() == 0 || lower.dim() != upper.dim()) {
        throw ConfigError("bounding box dimensions do not match");
    }
    for (int i = 0; i < dim(); ++i) {
        if (!(lower[i] < upper[i])) throw ConfigError("degenerate bounding box");
    }
}

double dist2(const Point& a, const Point& b) {
    double s = 0.0;
    const int n = a.dim();
    for (int i = 0; i < n; ++i) {
        double d = a.coords[i] - b.coords[i];
        s += d * d;
    }
    return s;
}

double dist(const Point& a, const Point& b) { return std::sqrt(dist2(a, b)); }

namespace {

void check_pair(const PointSet& A, const PointSet& B) {
    if (A.empty() || B.empty()) throw ConfigError("empty point set");
    if (A.ambient_dim != B.ambient_dim) throw ConfigError("point sets have different ambient dimensions");
}

// min over B of dist2 to a, ties by lowest point index
double nearest2_brute(const PointSet& B, const Point& a) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& b : B.points) {
        double d2 = dist2(a, b);
        if (d2 < best) best = d2;
    }
    return best;
}

// Uniform bucket grid over the points of B. Queries expand Chebyshev rings
// around the start cell and stop one ring past the provable bound, so the
// true nearest neighbor is always scanned and the min matches brute force
// bit for bit.
class BucketGrid {
  public:
    explicit BucketGrid(const PointSet& B) : pts_(B) {
        const int D = B.ambient_dim;
        lo_.assign(D, std::numeric_limits<double>::infinity());
        hi_.assign(D, -std::numeric_limits<double>::infinity());
        for (const Point& p : B.points) {
            for (int i = 0; i < D; ++i) {
                lo_[i] = std::min(lo_[i], p[i]);
                hi_[i] = std::max(hi_[i], p[i]);
            }
        }
        double max_extent = 0.0;
        for (int i = 0; i < D; ++i) max_extent = std::max(max_extent, hi_[i] - lo_[i]);
        int per_dim = static_cast<int>(std::llround(std::pow(static_cast<double>(B.size()), 1.0 / D)));
        per_dim = std::clamp(per_dim, 1, 256);
        cell_ = max_extent > 0.0 ? max_extent / per_dim : 1.0;
        shape_.assign(D, 1);
        std::size_t total = 1;
        for (int i = 0; i < D; ++i) {
            shape_[i] = std::max(1, static_cast<int>(std::floor((hi_[i] - lo_[i]) / cell_)) + 1);
            total *= static_cast<std::size_t>(shape_[i]);
        }
        buckets_.assign(total, {});
        for (std::size_t k = 0; k < B.size(); ++k) {
            buckets_[bucket_of(B.points[k])].push_back(static_cast<int>(k));
        }
    }

    double nearest2(const Point& a) const {
        const int D = pts_.ambient_dim;
        std::vector<int> c(D);
        for (int i = 0; i < D; ++i) {
            c[i] = std::clamp(static_cast<int>(std::floor((a[i] - lo_[i]) / cell_)), 0, shape_[i] - 1);
        }
        double best = std::numeric_limits<double>::infinity();
        int max_ring = 0;
        for (int i = 0; i < D; ++i) max_ring = std::max(max_ring, std::max(c[i], shape_[i] - 1 - c[i]));
        bool done = false;
        for (int ring = 0; ring <= max_ring; ++ring) {
            scan_ring(a, c, ring, best);
            if (done) break;  // one extra ring past the bound was just scanned
            if (best < std::numeric_limits<double>::infinity()) {
                double safe = static_cast<double>(ring) * cell_;
                if (safe * safe > best) done = true;
            }
        }
        return best;
    }

  private:
    std::size_t bucket_of(const Point& p) const {
        std::size_t idx = 0;
        for (int i = 0; i < pts_.ambient_dim; ++i) {
            int ci = std::clamp(static_cast<int>(std::floor((p[i] - lo_[i]) / cell_)), 0, shape_[i] - 1);
            idx = idx * static_cast<std::size_t>(shape_[i]) + static_cast<std::size_t>(ci);
        }
        return idx;
    }

    // visit every cell at Chebyshev distance exactly `ring` from c
    void scan_ring(const Point& a, const std::vector<int>& c, int ring, double& best) const {
        const int D = pts_.ambient_dim;
        std::vector<int> idx(D);
        std::function<void(int, bool)> rec = [&](int dim, bool boundary) {
            if (dim == D) {
                if (!boundary) return;
                std::size_t flat = 0;
                for (int i = 0; i < D; ++i) flat = flat * static_cast<std::size_t>(shape_[i]) + static_cast<std::size_t>(idx[i]);
                for (int k : buckets_[flat]) {
                    double d2 = dist2(a, pts_.points[static_cast<std::size_t>(k)]);
                    if (d2 < best) best = d2;
                }
                return;
            }
            for (int o = -ring; o <= ring; ++o) {
                int v = c[dim] + o;
                if (v < 0 || v >= shape_[dim]) continue;
                idx[dim] = v;
                rec(dim + 1, boundary || std::abs(o) == ring);
            }
        };
        rec(0, ring == 0);
        (void)a;
    }

    const PointSet& pts_;
    std::vector<double> lo_, hi_;
    std::vector<int> shape_;
    double cell_ = 1.0;
    std::vector<std::vector<int>> buckets_;
};

}  // namespace

namespace detail {

double directed_hausdorff_brute(const PointSet& A, const PointSet& B) {
    check_pair(A, B);
    double worst = 0.0;
    for (const Point& a : A.points) {
        worst = std::max(worst, nearest2_brute(B, a));
    }
    return std::sqrt(worst);
}

double directed_hausdorff_indexed(const PointSet& A, const PointSet& B) {
    check_pair(A, B);
    BucketGrid grid(B);
    double worst = 0.0;
    for (const Point& a : A.points) {
        worst = std::max(worst, grid.nearest2(a));
    }
    return std::sqrt(worst);
}

}  // namespace detail

double directed_hausdorff(const PointSet& A, const PointSet& B) {
    check_pair(A, B);
    if (static_cast<std::uint64_t>(A.size()) * B.size() > 1000000ULL) {
        return detail::directed_hausdorff_indexed(A, B);
    }
    return detail::directed_hausdorff_brute(A, B);
}

double hausdorff(const PointSet& A, const PointSet& B) {
    return std::max(directed_hausdorff(A, B), directed_hausdorff(B, A));
}

double min_distance(const PointSet& B, const Point& y) {
    if (B.empty()) throw ConfigError("empty point set");
    return std::sqrt(nearest2_brute(B, y));
}

McEstimate mc_volume(const MembershipFn& membership, const BoundingBox& box,
                     std::int64_t n_samples, std::uint64_t seed, int threads) {
    box.validate();
    if (n_samples < 1000) throw ConfigError("mc_volume needs at least 10^3 samples");
    const int D = box.dim();
    const std::int64_t batch = 1 << 16;
    const std::int64_t n_batches = (n_samples + batch - 1) / batch;
    std::vector<std::int64_t> hits(static_cast<std::size_t>(n_batches), 0);
    parallel_for(n_batches, threads, [&](std::int64_t b) {
        Rng rng(substream_seed(seed, static_cast<std::uint64_t>(b)));
        std::int64_t count = std::min(batch, n_samples - b * batch);
        std::int64_t h = 0;
        Point p;
        p.coords.resize(static_cast<std::size_t>(D));
        for (std::int64_t i = 0; i < count; ++i) {
            for (int k = 0; k < D; ++k) p.coords[static_cast<std::size_t>(k)] = rng.uniform(box.lower[k], box.upper[k]);
            if (membership(p)) ++h;
        }
        hits[static_cast<std::size_t>(b)] = h;
    });
    std::int64_t total = 0;
    for (std::int64_t h : hits) total += h;  // fixed batch order
    const double vol = box.volume();
    const double frac = static_cast<double>(total) / static_cast<double>(n_samples);
    McEstimate est;
    est.value = vol * frac;
    est.std_error = vol * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n_samples));
    est.samples = n_samples;
    return est;
}

Point DistanceField::cell_center(std::size_t flat_index) const {
    const int D = box.dim();
    Point p;
    p.coords.resize(static_cast<std::size_t>(D));
    for (int i = D - 1; i >= 0; --i) {
        std::size_t n = static_cast<std::size_t>(shape[static_cast<std::size_t>(i)]);
        std::size_t c = flat_index % n;
        flat_index /= n;
        p.coords[static_cast<std::size_t>(i)] = box.lower[i] + (static_cast<double>(c) + 0.5) * h;
    }
    return p;
}

std::size_t DistanceField::flat_index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        flat = flat * static_cast<std::size_t>(shape[i]) + static_cast<std::size_t>(idx[i]);
    }
    return flat;
}

double DistanceField::max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

namespace detail {

namespace {

// Felzenszwalb-Huttenlocher lower envelope of parabolas: exact 1-D squared
// distance transform of f, sampled on the integer grid.
void edt_1d(const std::vector<double>& f, std::vector<double>& out,
            std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    const double INF = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -INF;
    z[1] = INF;
    for (int q = 1; q < n; ++q) {
        if (f[static_cast<std::size_t>(q)] == INF) continue;
        while (true) {
            if (f[static_cast<std::size_t>(v[k])] == INF) {
                // drop an infinite parabola; it never defines the envelope
                if (k == 0) {
                    v[0] = q;
                    z[0] = -INF;
                    z[1] = INF;
                    break;
                }
                --k;
                continue;
            }
            double s = ((f[static_cast<std::size_t>(q)] + static_cast<double>(q) * q) -
                        (f[static_cast<std::size_t>(v[k])] + static_cast<double>(v[k]) * v[k])) /
                       (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) {
                if (k == 0) {
                    v[0] = q;
                    z[0] = -INF;
                    z[1] = INF;
                    break;
                }
                --k;
                continue;
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = INF;
            break;
        }
    }
    if (f[static_cast<std::size_t>(v[0])] == INF) {
        // no finite source in this scanline
        for (int q = 0; q < n; ++q) out[static_cast<std::size_t>(q)] = INF;
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        double d = static_cast<double>(q) - v[k];
        out[static_cast<std::size_t>(q)] = d * d + f[static_cast<std::size_t>(v[k])];
    }
}

}  // namespace

void edt_fill(DistanceField& field) {
    const int D = field.box.dim();
    const double INF = std::numeric_limits<double>::infinity();
    const std::size_t total = field.cell_count();
    // squared distance in cell units; 0 at outside cells, INF at inside cells
    std::vector<double> g(total);
    bool any_outside = false;
    for (std::size_t i = 0; i < total; ++i) {
        g[i] = field.inside[i] ? INF : 0.0;
        any_outside = any_outside || !field.inside[i];
    }
    if (!any_outside) {
        throw ConfigError("membership covers the whole grid; box must strictly contain the set");
    }

    // separable pass per dimension
    std::vector<std::size_t> stride(static_cast<std::size_t>(D), 1);
    for (int i = D - 2; i >= 0; --i) {
        stride[static_cast<std::size_t>(i)] =
            stride[static_cast<std::size_t>(i + 1)] * static_cast<std::size_t>(field.shape[static_cast<std::size_t>(i + 1)]);
    }
    for (int axis = 0; axis < D; ++axis) {
        const int n = field.shape[static_cast<std::size_t>(axis)];
        const std::size_t st = stride[static_cast<std::size_t>(axis)];
        const std::size_t n_lines = total / static_cast<std::size_t>(n);
        std::vector<double> line(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
        std::vector<int> v(static_cast<std::size_t>(n));
        std::vector<double> z(static_cast<std::size_t>(n) + 1);
        for (std::size_t l = 0; l < n_lines; ++l) {
            // base index of this scanline: decompose l over the other axes
            std::size_t rem = l;
            std::size_t base = 0;
            for (int i = 0; i < D; ++i) {
                if (i == axis) continue;
                std::size_t sz = static_cast<std::size_t>(field.shape[static_cast<std::size_t>(i)]);
                std::size_t c = rem % sz;
                rem /= sz;
                base += c * stride[static_cast<std::size_t>(i)];
            }
            for (int q = 0; q < n; ++q) line[static_cast<std::size_t>(q)] = g[base + static_cast<std::size_t>(q) * st];
            edt_1d(line, out, v, z);
            for (int q = 0; q < n; ++q) g[base + static_cast<std::size_t>(q) * st] = out[static_cast<std::size_t>(q)];
        }
    }

    field.values.assign(total, 0.0);
    for (std::size_t i = 0; i < total; ++i) {
        if (field.inside[i]) field.values[i] = field.h * std::sqrt(g[i]);
    }
}

}  // namespace detail

DistanceField grid_distance_to_complement(const MembershipFn& membership,
                                          const BoundingBox& box, double h,
                                          std::int64_t max_cells) {
    box.validate();
    if (!(h > 0.0)) throw ConfigError("grid width must be positive");
    const int D = box.dim();
    if (D > 3) throw ConfigError("grid distance fields support at most 3 dimensions");
    DistanceField field;
    field.box = box;
    field.h = h;
    field.shape.resize(static_cast<std::size_t>(D));
    std::int64_t total = 1;
    for (int i = 0; i < D; ++i) {
        std::int64_t n = static_cast<std::int64_t>(std::ceil((box.upper[i] - box.lower[i]) / h));
        n = std::max<std::int64_t>(n, 1);
        field.shape[static_cast<std::size_t>(i)] = static_cast<int>(n);
        total *= n;
        if (total > max_cells) throw BudgetError("grid too large");
    }
    field.inside.assign(static_cast<std::size_t>(total), 0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(total); ++i) {
        field.inside[i] = membership(field.cell_center(i)) ? 1 : 0;
    }
    detail::edt_fill(field);
    return field;
}

}  // namespace mlab
