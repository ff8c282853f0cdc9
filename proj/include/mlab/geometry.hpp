#ifndef MLAB_GEOMETRY_HPP
#define MLAB_GEOMETRY_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlab {

// Error taxonomy shared by all modules: BudgetError marks exhausted numeric
// budgets (exit code 3 in the CLI), ConfigError marks bad inputs (exit 2).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class BudgetError : public std::runtime_error {
  public:
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}
    Point(std::initializer_list<double> c) : coords(c) {}

    int dim() const { return static_cast<int>(coords.size()); }
    double& operator[](int i) { return coords[i]; }
    double operator[](int i) const { return coords[i]; }
};

struct PointSet {
    std::vector<Point> points;
    int ambient_dim = 0;

    PointSet() = default;
    explicit PointSet(int dim) : ambient_dim(dim) {}

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    void add(Point p) { points.push_back(std::move(p)); }
};

struct BoundingBox {
    Point lower;
    Point upper;

    int dim() const { return lower.dim(); }
    double volume() const;
    bool contains(const Point& p) const;
    void validate() const;  // lower[i] < upper[i], matching dims
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

// squared Euclidean distance; the single shared implementation keeps the
// brute-force and indexed nearest-neighbor paths bit-identical
double dist2(const Point& a, const Point& b);
double dist(const Point& a, const Point& b);

// max over a in A of min over b in B of ||a-b||; switches to a grid index
// when |A|*|B| > 10^6 (both paths produce identical values)
double directed_hausdorff(const PointSet& A, const PointSet& B);
double hausdorff(const PointSet& A, const PointSet& B);

// distance from y to the nearest point of B (same tie-break/rounding as the
// Hausdorff internals); exposed for membership tests against point clouds
double min_distance(const PointSet& B, const Point& y);

namespace detail {
// both strategies exposed for the bit-exactness property tests
double directed_hausdorff_brute(const PointSet& A, const PointSet& B);
double directed_hausdorff_indexed(const PointSet& A, const PointSet& B);
}  // namespace detail

using MembershipFn = std::function<bool(const Point&)>;

// Monte Carlo volume of {p in box : membership(p)}. Samples are drawn in
// fixed-size batches with per-batch substreams reduced in batch order, so the
// estimate is reproducible for a fixed seed regardless of thread count.
McEstimate mc_volume(const MembershipFn& membership, const BoundingBox& box,
                     std::int64_t n_samples, std::uint64_t seed, int threads = 0);

// Raster distance-to-complement field. values[i] is the exact Euclidean
// distance (in length units) from an inside cell center to the nearest
// outside cell center; outside cells carry 0.
struct DistanceField {
    BoundingBox box;
    double h = 0.0;
    std::vector<int> shape;          // cells per dimension
    std::vector<std::uint8_t> inside;
    std::vector<double> values;

    std::size_t cell_count() const { return inside.size(); }
    Point cell_center(std::size_t flat_index) const;
    std::size_t flat_index(const std::vector<int>& idx) const;
    double max_value() const;
};

// rasterizes membership at cell centers on a grid of width h and runs an
// exact two-pass Euclidean distance transform; D <= 3
DistanceField grid_distance_to_complement(const MembershipFn& membership,
                                          const BoundingBox& box, double h,
                                          std::int64_t max_cells = (std::int64_t{1} << 26));

namespace detail {
// distance transform on an existing raster mask (shared with the estimator,
// which builds its mask by splatting data balls instead of predicate calls)
void edt_fill(DistanceField& field);
}  // namespace detail

}  // namespace mlab

#endif
