#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "crowdec/problems.hpp"
#include "crowdec/rng.hpp"

namespace crowdec {

using Point2 = std::array<double, 2>;

/// Nonempty set of finite 2-D coordinates.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<Point2> points);

    std::size_t count() const noexcept { return points_.size(); }
    const std::vector<Point2>& points() const noexcept { return points_; }
    const Point2& operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<Point2> points_;
};

struct BoundingBox {
    Point2 lo;
    Point2 hi;
};

BoundingBox bounding_box(const Dataset& data);

/// Within-cluster sum of squares. Every point is charged to its nearest
/// center; ties go to the lowest center index.
double wcss(std::span<const Point2> centers, const Dataset& data);

/// Same as wcss with centers flattened as (x0, y0, x1, y1, ...).
double wcss_flat(std::span<const double> flat_centers, const Dataset& data);

std::vector<Point2> unflatten_centers(std::span<const double> flat);

struct CsvOptions {
    std::size_t x_column = 0;
    std::size_t y_column = 1;
    bool has_header = false;
};

/// Reads two coordinate columns from a comma-separated file.
/// Throws IoError when the file cannot be opened, ParseError on a bad row
/// and ConfigError when no rows are present.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

struct Blobs {
    Dataset data;
    std::vector<Point2> centers;
};

/// Isotropic Gaussian blobs around centers drawn uniformly in the unit square.
Blobs synth_blobs(std::size_t n_clusters, std::size_t points_per_cluster, double spread,
                  std::uint64_t seed);

/// Copy of `data` with `count` distinct points swapped for uniform points in `box`.
Dataset replace_points(const Dataset& data, std::size_t count, const BoundingBox& box, Rng& rng);

struct KMeansResult {
    std::vector<Point2> centers;
    double wcss = 0.0;
    /// WCSS after each assignment step.
    std::vector<double> history;
};

/// Lloyd's algorithm from k distinct random data points.
KMeansResult kmeans_oracle(const Dataset& data, std::size_t k, std::uint64_t seed,
                           std::size_t max_iters = 100);

/// Clustering as a 2k-dimensional objective over `base`. The domain is the
/// data bounding box repeated per center.
Objective make_clustering_objective(const Dataset& base, std::size_t k);

/// Search domain used by make_clustering_objective.
SearchDomain clustering_domain(const BoundingBox& box, std::size_t k);

}  // namespace crowdec
