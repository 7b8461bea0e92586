#include "crowdec/clustering.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <string>

#include "crowdec/error.hpp"

namespace crowdec {

Dataset::Dataset(std::vector<Point2> points) : points_(std::move(points)) {
    if (points_.empty()) throw ConfigError("dataset must contain at least one point");
    for (const auto& p : points_) {
        if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
            throw ConfigError("dataset coordinates must be finite");
    }
}

BoundingBox bounding_box(const Dataset& data) {
    BoundingBox box{data[0], data[0]};
    for (const auto& p : data.points()) {
        for (int c = 0; c < 2; ++c) {
            box.lo[c] = std::min(box.lo[c], p[c]);
            box.hi[c] = std::max(box.hi[c], p[c]);
        }
    }
    return box;
}

namespace {

inline double sq_dist(const Point2& a, const Point2& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

std::size_t nearest(const Point2& p, std::span<const Point2> centers, double& best) {
    std::size_t arg = 0;
    best = sq_dist(p, centers[0]);
    for (std::size_t j = 1; j < centers.size(); ++j) {
        const double d = sq_dist(p, centers[j]);
        if (d < best) {
            best = d;
            arg = j;
        }
    }
    return arg;
}

}  // namespace

double wcss(std::span<const Point2> centers, const Dataset& data) {
    if (centers.empty()) throw ContractViolation("wcss needs at least one center");
    double total = 0.0;
    for (const auto& p : data.points()) {
        double d = 0.0;
        nearest(p, centers, d);
        total += d;
    }
    return total;
}

std::vector<Point2> unflatten_centers(std::span<const double> flat) {
    if (flat.empty() || flat.size() % 2 != 0)
        throw ContractViolation("flattened centers need a positive even length");
    std::vector<Point2> centers(flat.size() / 2);
    for (std::size_t j = 0; j < centers.size(); ++j) centers[j] = {flat[2 * j], flat[2 * j + 1]};
    return centers;
}

double wcss_flat(std::span<const double> flat_centers, const Dataset& data) {
    const auto centers = unflatten_centers(flat_centers);
    return wcss(centers, data);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV file '" + path.string() + "'");

    std::vector<Point2> points;
    std::string line;
    std::size_t line_no = 0;
    const std::size_t needed = std::max(options.x_column, options.y_column) + 1;
    std::vector<std::string_view> fields;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && options.has_header) continue;
        if (trim(line).empty()) continue;

        fields.clear();
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            fields.push_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() < needed)
            throw ParseError("expected at least " + std::to_string(needed) + " columns", line_no);

        Point2 p{};
        const std::size_t cols[2] = {options.x_column, options.y_column};
        for (int c = 0; c < 2; ++c) {
            const auto field = fields[cols[c]];
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), p[c]);
            if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(p[c]))
                throw ParseError("column " + std::to_string(cols[c]) + " is not a finite real: '" +
                                     std::string(field) + "'",
                                 line_no);
        }
        points.push_back(p);
    }
    if (points.empty()) throw ConfigError("CSV file '" + path.string() + "' contains no data rows");
    return Dataset(std::move(points));
}

Blobs synth_blobs(std::size_t n_clusters, std::size_t points_per_cluster, double spread,
                  std::uint64_t seed) {
    if (n_clusters == 0 || points_per_cluster == 0)
        throw ConfigError("synth_blobs needs positive cluster and point counts");
    if (!(spread >= 0.0) || !std::isfinite(spread))
        throw ConfigError("synth_blobs spread must be a finite nonnegative real");

    Rng rng(derive_seed(seed, "blobs"));
    Blobs out;
    out.centers.resize(n_clusters);
    for (auto& c : out.centers) c = {rng.uniform01(), rng.uniform01()};

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Point2> pts;
    pts.reserve(n_clusters * points_per_cluster);
    for (const auto& c : out.centers) {
        for (std::size_t i = 0; i < points_per_cluster; ++i) {
            const double dx = gauss(rng);
            const double dy = gauss(rng);
            pts.push_back({c[0] + spread * dx, c[1] + spread * dy});
        }
    }
    out.data = Dataset(std::move(pts));
    return out;
}

Dataset replace_points(const Dataset& data, std::size_t count, const BoundingBox& box, Rng& rng) {
    if (count > data.count())
        throw ContractViolation("cannot replace " + std::to_string(count) + " of " +
                                std::to_string(data.count()) + " points");
    std::vector<std::size_t> idx(data.count());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher-Yates: the first `count` slots are the chosen points.
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.index(idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    std::vector<Point2> pts = data.points();
    for (std::size_t i = 0; i < count; ++i) {
        pts[idx[i]] = {rng.uniform(box.lo[0], box.hi[0]), rng.uniform(box.lo[1], box.hi[1])};
    }
    return Dataset(std::move(pts));
}

KMeansResult kmeans_oracle(const Dataset& data, std::size_t k, std::uint64_t seed,
                           std::size_t max_iters) {
    if (k == 0 || k > data.count())
        throw ConfigError("kmeans needs 1 <= k <= point count");
    if (max_iters == 0) throw ConfigError("kmeans needs max_iters >= 1");

    Rng rng(derive_seed(seed, "kmeans"));
    const auto& pts = data.points();
    const std::size_t n = pts.size();

    // Initial centers: k distinct data indices.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);

    KMeansResult res;
    res.centers.resize(k);
    for (std::size_t j = 0; j < k; ++j) res.centers[j] = pts[idx[j]];

    std::vector<std::size_t> assign(n, 0);
    std::vector<Point2> sums(k);
    std::vector<std::size_t> sizes(k);

    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        double total = 0.0;
        bool changed = iter == 0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            const std::size_t a = nearest(pts[i], res.centers, d);
            if (a != assign[i]) changed = true;
            assign[i] = a;
            total += d;
        }
        res.history.push_back(total);
        res.wcss = total;
        if (!changed) break;

        std::fill(sums.begin(), sums.end(), Point2{0.0, 0.0});
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[assign[i]][0] += pts[i][0];
            sums[assign[i]][1] += pts[i][1];
            ++sizes[assign[i]];
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (sizes[j] == 0) {
                res.centers[j] = pts[rng.index(n)];
            } else {
                const double s = static_cast<double>(sizes[j]);
                res.centers[j] = {sums[j][0] / s, sums[j][1] / s};
            }
        }
    }
    res.wcss = wcss(res.centers, data);
    if (res.wcss != res.history.back()) res.history.push_back(res.wcss);
    return res;
}

SearchDomain clustering_domain(const BoundingBox& box, std::size_t k) {
    std::vector<double> lo(2 * k);
    std::vector<double> hi(2 * k);
    for (std::size_t j = 0; j < k; ++j) {
        for (int c = 0; c < 2; ++c) {
            double a = box.lo[c];
            double b = box.hi[c];
            if (!(a < b)) {
                a -= 0.5;
                b += 0.5;
            }
            lo[2 * j + c] = a;
            hi[2 * j + c] = b;
        }
    }
    return SearchDomain(std::move(lo), std::move(hi));
}

Objective make_clustering_objective(const Dataset& base, std::size_t k) {
    if (k == 0 || k > base.count())
        throw ConfigError("clustering needs 1 <= k <= point count (k = " + std::to_string(k) +
                          ", points = " + std::to_string(base.count()) + ")");
    Objective obj;
    obj.name = "clustering";
    obj.domain = clustering_domain(bounding_box(base), k);
    auto data = std::make_shared<const Dataset>(base);
    obj.eval = [data](std::span<const double> x) { return wcss_flat(x, *data); };
    return obj;
}

}  // namespace crowdec
