#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "fedkm/datagen.hpp"
#include "fedkm/errors.hpp"
#include "fedkm/kernels.hpp"

using namespace fedkm;

namespace {

namespace fs = std::filesystem;

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name)
        : path(fs::temp_directory_path() / name) {}
    ~TempFile() {
        std::error_code ec;
        fs::remove(path, ec);
    }
    void write(const std::string& text) const {
        std::ofstream out(path);
        out << text;
    }
};

void check_totality(const Partition& part, int n) {
    REQUIRE(static_cast<int>(part.client_of.size()) == n);
    std::vector<int> per_client(part.n_clients, 0);
    for (const int c : part.client_of) {
        REQUIRE(c >= 0);
        REQUIRE(c < part.n_clients);
        ++per_client[c];
    }
    int total = 0;
    for (const int cnt : per_client) total += cnt;
    CHECK(total == n);
}

} // namespace

TEST_CASE("grid dataset: default spec shape and centers") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 1});
    CHECK(ds.points.n == 800);
    CHECK(ds.points.d == 2);
    REQUIRE(ds.points.has_labels());
    CHECK(*std::max_element(ds.points.labels.begin(), ds.points.labels.end()) == 15);
    CHECK(ds.true_means.k == 16);

    std::set<double> coords;
    for (int j = 0; j < ds.true_means.k; ++j) {
        coords.insert(ds.true_means.mean(j)[0]);
        coords.insert(ds.true_means.mean(j)[1]);
    }
    CHECK(coords == std::set<double>{-7.5, -2.5, 2.5, 7.5});
    CHECK(grid_field_half_extent(GridSpec{}) == 12.5);
}

TEST_CASE("grid dataset: sigma 0 copies the centers exactly") {
    const GridDataset ds = make_grid_dataset(GridSpec{.sigma = 0.0, .seed = 3});
    for (int i = 0; i < ds.points.n; ++i) {
        const double* center = ds.true_means.mean(ds.points.labels[i]);
        CHECK(ds.points.row(i)[0] == center[0]);
        CHECK(ds.points.row(i)[1] == center[1]);
    }
}

TEST_CASE("grid dataset: 200 points per cluster") {
    const GridDataset ds =
        make_grid_dataset(GridSpec{.points_per_cluster = 200, .seed = 1});
    CHECK(ds.points.n == 3200);
}

TEST_CASE("grid dataset: deterministic per seed, centers independent of seed") {
    const GridDataset a = make_grid_dataset(GridSpec{.seed = 11});
    const GridDataset b = make_grid_dataset(GridSpec{.seed = 11});
    const GridDataset c = make_grid_dataset(GridSpec{.seed = 12});
    CHECK(a.points.values == b.points.values);
    CHECK(a.true_means.means == c.true_means.means);
    CHECK(a.points.values != c.points.values);
}

TEST_CASE("grid dataset: samples concentrate around their centers") {
    const GridDataset ds = make_grid_dataset(GridSpec{.sigma = 1.0, .seed = 5});
    // with sigma=1 a point should rarely stray more than 5 sigma
    for (int i = 0; i < ds.points.n; ++i) {
        const double* center = ds.true_means.mean(ds.points.labels[i]);
        const double d2 = kernels::sq_dist(ds.points.row(i), center, 2);
        CHECK(d2 < 25.0);
    }
}

TEST_CASE("claim probability: formula and the zero-distance limit") {
    CHECK(claim_probability(0.0, 1.0) == 1.0);
    CHECK(claim_probability(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK(claim_probability(10.0, 0.1) == doctest::Approx(1.0 - std::exp(-0.01)));
}

TEST_CASE("beta split: huge beta mixes clients uniformly") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 2});
    Rng loc_rng = make_rng(7, Stream::locations);
    const PointSet locs = uniform_locations(5, square_bounds(12.5, 2), loc_rng);
    Rng rng = make_rng(7, Stream::partition);
    const Partition part = distribute_by_beta(ds.points, locs, 1e6, rng);
    check_totality(part, ds.points.n);

    std::vector<int> share(5, 0);
    for (const int c : part.client_of) ++share[c];
    const double expect = 800.0 / 5.0;
    const double sigma = std::sqrt(800.0 * 0.2 * 0.8);
    for (const int s : share) CHECK(std::abs(s - expect) <= 3.0 * sigma);
}

TEST_CASE("beta split: vanishing beta degenerates to a voronoi split") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 2});
    Rng loc_rng = make_rng(9, Stream::locations);
    const PointSet locs = uniform_locations(4, square_bounds(12.5, 2), loc_rng);
    Rng rng = make_rng(9, Stream::partition);
    const Partition part = distribute_by_beta(ds.points, locs, 1e-9, rng);
    for (int i = 0; i < ds.points.n; ++i) {
        const int nearest =
            kernels::nearest_mean(ds.points.row(i), locs.values.data(), locs.n, 2).first;
        CHECK(part.client_of[i] == nearest);
    }
}

TEST_CASE("beta split: claim mechanics follow the two-client closed form") {
    // single point at the origin, two clients at distances 1 and 2
    PointSet pt;
    pt.d = 1;
    pt.push_row(std::array<double, 1>{0.0});
    PointSet locs;
    locs.d = 1;
    locs.push_row(std::array<double, 1>{1.0});
    locs.push_row(std::array<double, 1>{-2.0});

    const double beta = 1.5;
    const double pa = claim_probability(1.0, beta);
    const double pb = claim_probability(2.0, beta);
    // client 0 wins when: both claim and the coin picks it, only it claims,
    // or nobody claims (it is nearest)
    const double p0 = pa * pb * 0.5 + pa * (1 - pb) + (1 - pa) * (1 - pb);

    Rng rng = make_rng(123, Stream::partition);
    const int trials = 20000;
    int wins = 0;
    for (int t = 0; t < trials; ++t) {
        const Partition part = distribute_by_beta(pt, locs, beta, rng);
        if (part.client_of[0] == 0) ++wins;
    }
    const double freq = static_cast<double>(wins) / trials;
    const double sigma = std::sqrt(p0 * (1 - p0) / trials);
    CHECK(std::abs(freq - p0) <= 3.0 * sigma);
}

TEST_CASE("beta split: beta changes the partition, never the points") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 4});
    const std::vector<double> snapshot = ds.points.values;
    Rng loc_rng = make_rng(3, Stream::locations);
    const PointSet locs = uniform_locations(5, square_bounds(12.5, 2), loc_rng);
    for (const double beta : {0.1, 1.0, 10.0}) {
        Rng rng = make_rng(3, Stream::partition);
        const Partition part = distribute_by_beta(ds.points, locs, beta, rng);
        check_totality(part, ds.points.n);
        CHECK(ds.points.values == snapshot);
    }
}

TEST_CASE("beta split: rejects nonpositive beta and dimension mismatch") {
    PointSet pt;
    pt.d = 2;
    pt.push_row(std::array<double, 2>{0.0, 0.0});
    PointSet locs;
    locs.d = 2;
    locs.push_row(std::array<double, 2>{1.0, 1.0});
    Rng rng(1);
    CHECK_THROWS_AS(distribute_by_beta(pt, locs, 0.0, rng), std::invalid_argument);
    PointSet locs1;
    locs1.d = 1;
    locs1.push_row(std::array<double, 1>{1.0});
    CHECK_THROWS_AS(distribute_by_beta(pt, locs1, 1.0, rng), std::invalid_argument);
}

TEST_CASE("fixed-cluster split: one client takes everything") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 6});
    Rng rng(1);
    const Partition part = distribute_fixed_clusters(ds.points, {16}, rng);
    check_totality(part, ds.points.n);
    CHECK(part.n_clients == 1);
    CHECK(std::all_of(part.client_of.begin(), part.client_of.end(),
                      [](int c) { return c == 0; }));
}

TEST_CASE("fixed-cluster split: disjoint halves cover all clusters") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 6});
    Rng rng(2);
    const Partition part = distribute_fixed_clusters(ds.points, {8, 8}, rng);
    check_totality(part, ds.points.n);

    std::set<int> labels0, labels1;
    for (int i = 0; i < ds.points.n; ++i)
        (part.client_of[i] == 0 ? labels0 : labels1).insert(ds.points.labels[i]);
    CHECK(labels0.size() == 8);
    CHECK(labels1.size() == 8);
    std::set<int> all;
    all.insert(labels0.begin(), labels0.end());
    all.insert(labels1.begin(), labels1.end());
    CHECK(all.size() == 16); // disjoint cover
}

TEST_CASE("fixed-cluster split: the paper's heterogeneity ladder") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 6});
    Rng rng(3);
    const Partition part =
        distribute_fixed_clusters(ds.points, {1, 4, 7, 10, 16}, rng);
    check_totality(part, ds.points.n);

    std::vector<std::set<int>> seen(5);
    for (int i = 0; i < ds.points.n; ++i)
        seen[part.client_of[i]].insert(ds.points.labels[i]);
    CHECK(seen[0].size() == 1);  // client 0 drew a single cluster
    CHECK(seen[4].size() == 16); // the big client sees them all
    for (int c = 0; c < 5; ++c) CHECK(!seen[c].empty());
}

TEST_CASE("fixed-cluster split: under-covering requests are rejected") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 6});
    Rng rng(4);
    CHECK_THROWS_AS(distribute_fixed_clusters(ds.points, {1, 1}, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(distribute_fixed_clusters(ds.points, {17}, rng),
                    std::invalid_argument);
    PointSet unlabeled;
    unlabeled.d = 1;
    unlabeled.push_row(std::array<double, 1>{0.0});
    CHECK_THROWS_AS(distribute_fixed_clusters(unlabeled, {1}, rng),
                    std::invalid_argument);
}

TEST_CASE("subsample: caps client sizes and keeps totality") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 8});
    Rng rng(5);
    const Partition part = distribute_fixed_clusters(ds.points, {8, 8}, rng);
    const auto [pts, sub] = subsample_per_client(ds.points, part, {10, -1}, rng);
    check_totality(sub, pts.n);

    std::vector<int> share(2, 0);
    for (const int c : sub.client_of) ++share[c];
    CHECK(share[0] == 10);
    CHECK(share[1] == 400); // half the grid, untouched
    CHECK(pts.has_labels());
}

TEST_CASE("split by client: points and labels travel together") {
    PointSet pts;
    pts.d = 1;
    for (int i = 0; i < 6; ++i) {
        pts.push_row(std::array<double, 1>{static_cast<double>(i)});
        pts.labels.push_back(i % 2);
    }
    Partition part;
    part.n_clients = 2;
    part.client_of = {0, 1, 0, 1, 0, 1};
    const std::vector<PointSet> shards = split_by_client(pts, part);
    REQUIRE(shards.size() == 2);
    CHECK(shards[0].values == std::vector<double>{0, 2, 4});
    CHECK(shards[1].values == std::vector<double>{1, 3, 5});
    CHECK(shards[0].labels == std::vector<int>{0, 0, 0});
    CHECK(shards[1].labels == std::vector<int>{1, 1, 1});
}

TEST_CASE("points file: basic load") {
    TempFile f("fedkm_test_points_basic.csv");
    f.write("1,2\n3,4\n5,6\n");
    const PointSet ps = load_points_file(f.path, false);
    CHECK(ps.n == 3);
    CHECK(ps.d == 2);
    CHECK(ps.values == std::vector<double>{1, 2, 3, 4, 5, 6});
    CHECK(!ps.has_labels());
}

TEST_CASE("points file: label column and header row") {
    TempFile f("fedkm_test_points_labeled.csv");
    f.write("x,y,label\n1.5,2.5,0\n3.5,4.5,1\n");
    const PointSet ps = load_points_file(f.path, true);
    CHECK(ps.n == 2);
    CHECK(ps.d == 2);
    CHECK(ps.labels == std::vector<int>{0, 1});
    CHECK(ps.values == std::vector<double>{1.5, 2.5, 3.5, 4.5});
}

TEST_CASE("points file: parse errors carry the line number") {
    TempFile f("fedkm_test_points_bad.csv");

    f.write("1,2\n3\n");
    CHECK_THROWS_WITH_AS(load_points_file(f.path, false),
                         doctest::Contains(":2:"), parse_error);

    f.write("1,2\nx,4\n");
    CHECK_THROWS_WITH_AS(load_points_file(f.path, false),
                         doctest::Contains(":2:"), parse_error);

    f.write("");
    CHECK_THROWS_AS(load_points_file(f.path, false), parse_error);

    f.write("1,2,nope\n3,4,1\n");
    CHECK_THROWS_AS(load_points_file(f.path, true), parse_error);
}

TEST_CASE("points file: save then load reproduces doubles exactly") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 13});
    TempFile f("fedkm_test_points_roundtrip.csv");
    save_points_file(f.path, ds.points, true);
    const PointSet back = load_points_file(f.path, true);
    CHECK(back.n == ds.points.n);
    CHECK(back.d == ds.points.d);
    CHECK(back.values == ds.points.values); // shortest round-trip formatting
    CHECK(back.labels == ds.points.labels);
}

TEST_CASE("partition file: round-trip and row-count check") {
    Partition part;
    part.n_clients = 3;
    part.client_of = {0, 2, 1, 2, 0};
    TempFile f("fedkm_test_partition.csv");
    save_partition_file(f.path, part);
    const Partition back = load_partition_file(f.path, 5);
    CHECK(back.client_of == part.client_of);
    CHECK(back.n_clients == 3);
    CHECK_THROWS_AS(load_partition_file(f.path, 6), parse_error);
}

TEST_CASE("uniform locations stay inside the requested bounds") {
    Rng rng(19);
    const PointSet locs = uniform_locations(50, square_bounds(12.5, 2), rng);
    CHECK(locs.n == 50);
    for (const double v : locs.values) {
        CHECK(v >= -12.5);
        CHECK(v <= 12.5);
    }
    const Bounds bb = bounding_box(locs);
    CHECK(bb.lo.size() == 2);
    CHECK(bb.lo[0] >= -12.5);
    CHECK(bb.hi[0] <= 12.5);
}
