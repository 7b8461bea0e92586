#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "crowdec/clustering.hpp"
#include "crowdec/error.hpp"

using namespace crowdec;

namespace {

// All-pairs distance table, then a row minimum per point.
double brute_force_wcss(const std::vector<Point2>& centers, const std::vector<Point2>& pts) {
    std::vector<std::vector<double>> dist(pts.size(), std::vector<double>(centers.size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < centers.size(); ++j)
            dist[i][j] = std::pow(pts[i][0] - centers[j][0], 2) + std::pow(pts[i][1] - centers[j][1], 2);
    double total = 0.0;
    for (const auto& row : dist) total += *std::min_element(row.begin(), row.end());
    return total;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("crowdec_test_" + name);
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("wcss examples") {
    const Dataset two({{0.0, 0.0}, {2.0, 0.0}});
    CHECK(wcss(std::vector<Point2>{{1.0, 0.0}}, two) == 2.0);
    CHECK(wcss(two.points(), two) == 0.0);
    CHECK(wcss_flat(std::vector<double>{1.0, 0.0}, two) == 2.0);
    CHECK_THROWS_AS(wcss(std::vector<Point2>{}, two), ContractViolation);
}

TEST_CASE("wcss matches the brute-force oracle") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(40);
        const std::size_t k = 1 + rng.index(6);
        std::vector<Point2> pts(n);
        std::vector<Point2> centers(k);
        for (auto& p : pts) p = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
        for (auto& c : centers) c = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const double expected = brute_force_wcss(centers, pts);
        CHECK(wcss(centers, Dataset(pts)) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("load_csv") {
    SUBCASE("plain rows") {
        const auto p = temp_file("plain.csv", "0,0\n1,1\n2,2\n");
        const auto d = load_csv(p);
        REQUIRE(d.count() == 3);
        CHECK(d[2][0] == 2.0);
    }
    SUBCASE("header and column selection") {
        const auto p = temp_file("hdr.csv", "id,lon,lat\n7,-1.5,52.25\n8,0.5,51.0\n");
        const auto d = load_csv(p, {1, 2, true});
        REQUIRE(d.count() == 2);
        CHECK(d[0][0] == -1.5);
        CHECK(d[0][1] == 52.25);
    }
    SUBCASE("empty file is rejected") {
        CHECK_THROWS_AS(load_csv(temp_file("empty.csv", "")), ConfigError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_csv("/nonexistent/crowdec.csv"), IoError);
    }
    SUBCASE("malformed row names its line") {
        const auto p = temp_file("bad.csv", "0,0\n1,abc\n");
        try {
            load_csv(p);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("row count equals independent line count") {
        std::string body = "longitude,latitude\n";
        Rng rng(1);
        for (int i = 0; i < 537; ++i)
            body += std::to_string(rng.uniform(-5.55599, 1.75834)) + "," +
                    std::to_string(rng.uniform(50.0797, 57.6956)) + "\n";
        const auto p = temp_file("urban.csv", body);
        const auto lines = static_cast<std::size_t>(std::count(body.begin(), body.end(), '\n'));
        CHECK(load_csv(p, {0, 1, true}).count() == lines - 1);
    }
}

TEST_CASE("synth_blobs") {
    const auto zero = synth_blobs(1, 100, 0.0, 5);
    REQUIRE(zero.data.count() == 100);
    for (const auto& p : zero.data.points()) CHECK(p == zero.centers[0]);

    const auto a = synth_blobs(3, 50, 0.2, 9);
    const auto b = synth_blobs(3, 50, 0.2, 9);
    CHECK(a.data.points() == b.data.points());

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto blobs = synth_blobs(4, 250, 0.1, seed);
        Rng rng(seed + 1000);
        std::vector<Point2> random_centers(4);
        for (auto& c : random_centers) c = {rng.uniform01(), rng.uniform01()};
        CHECK(wcss(blobs.centers, blobs.data) < wcss(random_centers, blobs.data));
    }
}

TEST_CASE("replace_points changes exactly the requested number of points") {
    const auto base = synth_blobs(2, 30, 0.3, 4).data;
    const auto box = bounding_box(base);
    for (std::size_t count : {std::size_t{1}, std::size_t{7}, base.count()}) {
        Rng rng(count);
        const auto changed = replace_points(base, count, box, rng);
        // Multiset difference between the original and the copy.
        std::map<Point2, int> tally;
        for (const auto& p : base.points()) ++tally[p];
        for (const auto& p : changed.points()) --tally[p];
        std::size_t removed = 0;
        for (const auto& [p, c] : tally) removed += c > 0 ? static_cast<std::size_t>(c) : 0;
        CHECK(removed == count);
        for (const auto& p : changed.points()) {
            CHECK(p[0] >= box.lo[0]);
            CHECK(p[1] <= box.hi[1]);
        }
    }
    Rng rng(1);
    CHECK_THROWS_AS(replace_points(base, base.count() + 1, box, rng), ContractViolation);
}

TEST_CASE("kmeans oracle") {
    SUBCASE("k distinct points") {
        const Dataset d({{0, 0}, {1, 0}, {5, 5}});
        const auto r = kmeans_oracle(d, 3, 1);
        CHECK(r.history.front() == 0.0);
        CHECK(r.wcss == 0.0);
    }
    SUBCASE("wcss never increases") {
        const auto blobs = synth_blobs(6, 80, 0.15, 2);
        for (std::uint64_t s = 1; s <= 10; ++s) {
            const auto r = kmeans_oracle(blobs.data, 6, s);
            for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1]);
        }
    }
    SUBCASE("close to the ground truth on separated blobs") {
        std::vector<double> ratios;
        for (std::uint64_t s = 1; s <= 20; ++s) {
            const auto blobs = synth_blobs(4, 250, 0.1, s);
            ratios.push_back(kmeans_oracle(blobs.data, 4, s).wcss / wcss(blobs.centers, blobs.data));
        }
        std::nth_element(ratios.begin(), ratios.begin() + 10, ratios.end());
        CHECK(ratios[10] <= 1.05);
    }
    CHECK_THROWS_AS(kmeans_oracle(Dataset({{0, 0}}), 2, 1), ConfigError);
}

TEST_CASE("clustering objective domain encloses the data") {
    const auto blobs = synth_blobs(3, 40, 0.2, 8);
    const auto obj = make_clustering_objective(blobs.data, 3);
    REQUIRE(obj.dim() == 6);
    const auto box = bounding_box(blobs.data);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(obj.domain.lower(2 * j) <= box.lo[0]);
        CHECK(obj.domain.upper(2 * j + 1) >= box.hi[1]);
    }
    std::vector<double> flat;
    for (const auto& c : blobs.centers) flat.insert(flat.end(), c.begin(), c.end());
    CHECK(obj(flat) == wcss(blobs.centers, blobs.data));
    CHECK_THROWS_AS(make_clustering_objective(blobs.data, 1000), ConfigError);
}
