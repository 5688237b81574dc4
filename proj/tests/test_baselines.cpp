#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <limits>

#include "fedkm/baselines.hpp"
#include "fedkm/datagen.hpp"
#include "fedkm/federation.hpp"
#include "fedkm/metrics.hpp"
#include "oracles.hpp"

using namespace fedkm;

namespace {

PointSet make_points(std::vector<double> values, int d) {
    PointSet ps;
    ps.d = d;
    ps.n = static_cast<int>(values.size()) / d;
    ps.values = std::move(values);
    return ps;
}

std::vector<double> sorted_rows(const ClusterSet& cs) {
    std::vector<std::vector<double>> rows(cs.k);
    for (int j = 0; j < cs.k; ++j) rows[j].assign(cs.mean(j), cs.mean(j) + cs.d);
    std::sort(rows.begin(), rows.end());
    std::vector<double> out;
    for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

std::vector<int> grid_truth(const GridDataset& ds) { return ds.points.labels; }

std::vector<int> predict(const PointSet& pts, const ClusterSet& means) {
    return assign(pts, means).assignment;
}

} // namespace

TEST_CASE("central baseline: one client equals a direct core run") {
    std::mt19937_64 urng(61);
    const PointSet data = make_points(oracles::random_points(50, 2, urng), 2);
    const KmeansResult via_baseline = central_kmeans({data}, 4, 123);
    Rng rng = make_rng(123, Stream::central);
    const KmeansResult direct = kmeans(data, 4, rng);
    CHECK(via_baseline.clusters.means == direct.clusters.means);
    CHECK(via_baseline.assignment == direct.assignment);
    CHECK(via_baseline.inertia == direct.inertia);
}

namespace {

double best_of_10_ari(const GridDataset& ds) {
    const auto shards = split_by_client(
        ds.points, Partition{std::vector<int>(ds.points.n, 0), 1});
    double best = -1.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const KmeansResult fit = central_kmeans(shards, 16, seed);
        best = std::max(best, ari(fit.assignment, grid_truth(ds)));
    }
    return best;
}

} // namespace

TEST_CASE("central baseline: recovers the grid at sigma 1") {
    // At sigma=1 the ARI is capped by class overlap, not by the optimizer:
    // even assigning to the *true* centers scores ~0.94-0.97 depending on
    // the draw. Check an absolute bar on a typical draw, and on an unlucky
    // draw check against that draw's own ceiling.
    const GridDataset typical = make_grid_dataset(GridSpec{.seed = 1000});
    CHECK(best_of_10_ari(typical) >= 0.95);

    const GridDataset unlucky = make_grid_dataset(GridSpec{.seed = 100});
    const double ceiling =
        ari(predict(unlucky.points, unlucky.true_means), grid_truth(unlucky));
    CHECK(ceiling < 0.95); // what makes this draw interesting
    CHECK(best_of_10_ari(unlucky) >= ceiling - 0.02);
}

TEST_CASE("central baseline: client pooling order leaves the result alone") {
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 101});
    Rng prng = make_rng(2, Stream::partition);
    const Partition part = distribute_fixed_clusters(ds.points, {8, 8}, prng);
    const std::vector<PointSet> shards = split_by_client(ds.points, part);

    const KmeansResult ab = central_kmeans({shards[0], shards[1]}, 16, 7);
    const KmeansResult ba = central_kmeans({shards[1], shards[0]}, 16, 7);
    CHECK(ab.inertia == doctest::Approx(ba.inertia).epsilon(1e-9));
    const std::vector<double> ra = sorted_rows(ab.clusters);
    const std::vector<double> rb = sorted_rows(ba.clusters);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i)
        CHECK(ra[i] == doctest::Approx(rb[i]).epsilon(1e-9));
}

TEST_CASE("central baseline: propagates an infeasible K_g") {
    const PointSet tiny = make_points({0, 1, 2}, 1);
    CHECK_THROWS_AS(central_kmeans({tiny}, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(central_kmeans({}, 1, 1), std::invalid_argument);
}

TEST_CASE("oneshot: single client is the identity on its local means") {
    std::mt19937_64 urng(62);
    const PointSet data = make_points(oracles::random_points(50, 2, urng), 2);
    const ClusterSet got = oneshot({data}, 4, 4, false, 55);

    Rng rng = make_rng(55, Stream::client_init, 0);
    const KmeansResult local = kmeans(data, 4, rng);
    CHECK(sorted_rows(got) == sorted_rows(local.clusters));
}

TEST_CASE("oneshot: reproduces the first federated aggregation bit for bit") {
    // when every client holds exactly K_l distinct points, the local
    // k-means converges at its init, which is what round 0 sends
    std::mt19937_64 urng(63);
    std::vector<PointSet> shards;
    for (int c = 0; c < 3; ++c)
        shards.push_back(make_points(oracles::random_points(4, 2, urng), 2));

    FedConfig cfg;
    cfg.K_g = 6;
    cfg.p = 0;
    cfg.max_rounds = 1;
    cfg.seed = 321;
    const RoundHistory hist = run_federated(shards, cfg);
    const ClusterSet shot = oneshot(shards, 4, 6, true, 321);
    CHECK(shot.means == hist.models[0].means.means);
    CHECK(shot.counts == hist.models[0].means.counts);
}

TEST_CASE("oneshot: clamps K_l to the distinct point count") {
    PointSet two;
    two.d = 1;
    two.push_row(std::array<double, 1>{0.0});
    two.push_row(std::array<double, 1>{0.0});
    two.push_row(std::array<double, 1>{9.0});
    const ClusterSet got = oneshot({two}, 5, 2, false, 1);
    CHECK(got.k == 2);
    CHECK(sorted_rows(got) == std::vector<double>{0.0, 9.0});
}

TEST_CASE("oneshot: informed sweep picks the best-scoring K_l") {
    // two clients with mixed blobs: a single local mean melts the blobs
    // together, K_l=2 separates them
    const PointSet a = make_points({0, 1, 10}, 1);
    const PointSet b = make_points({0.5, 10.5, 11}, 1);
    const PointSet pooled = make_points({0, 1, 10, 0.5, 10.5, 11}, 1);

    const std::array<int, 3> candidates{1, 2, 3};
    const auto score = [&pooled](const ClusterSet& cs) {
        return -weighted_inertia(pooled, {}, cs);
    };

    // exhaustive oracle: every candidate reuses the same seed, so replaying
    // the calls here reproduces the sweep bit for bit; first strict max wins
    int want_kl = 0;
    double want_score = -std::numeric_limits<double>::infinity();
    for (const int kl : candidates) {
        const double s = score(oneshot({a, b}, kl, 2, false, 9));
        if (s > want_score) {
            want_score = s;
            want_kl = kl;
        }
    }
    CHECK(want_kl > 1); // one melted mean per client must not win

    const OneshotSweep best =
        oneshot_informed({a, b}, candidates, 2, false, 9, score);
    CHECK(best.K_l == want_kl);
    CHECK(best.score == want_score);
}

TEST_CASE("oneshot: informed sweep validates its inputs") {
    const PointSet a = make_points({0, 1}, 1);
    CHECK_THROWS_AS(oneshot_informed({a}, {}, 1, false, 1,
                                     [](const ClusterSet&) { return 0.0; }),
                    std::invalid_argument);
    const std::array<int, 1> one{1};
    CHECK_THROWS_AS(oneshot_informed({a}, one, 1, false, 1, nullptr),
                    std::invalid_argument);
}

TEST_CASE("oneshot against federation: fkm matches or beats it on the grid") {
    // a light version of the figure-level comparison: the claim is about the
    // mean over seeds, not any single run (per seed either side can win)
    const GridDataset ds = make_grid_dataset(GridSpec{.seed = 200});
    Rng lrng = make_rng(200, Stream::locations);
    const PointSet locs =
        uniform_locations(5, square_bounds(grid_field_half_extent(GridSpec{}), 2), lrng);
    Rng prng = make_rng(200, Stream::partition);
    const Partition part = distribute_by_beta(ds.points, locs, 1.0, prng);
    const std::vector<PointSet> shards = split_by_client(ds.points, part);

    std::vector<PointSet> live;
    std::vector<int> truth;
    for (std::size_t c = 0; c < shards.size(); ++c)
        if (shards[c].n > 0) {
            live.push_back(shards[c]);
            truth.insert(truth.end(), shards[c].labels.begin(), shards[c].labels.end());
        }

    const auto predict_all = [&live](const ClusterSet& means) {
        std::vector<int> out;
        for (const PointSet& shard : live) {
            const std::vector<int> p = predict(shard, means);
            out.insert(out.end(), p.begin(), p.end());
        }
        return out;
    };

    const int n_seeds = 8;
    double fkm_mean = 0.0, shot_mean = 0.0;
    for (std::uint64_t seed = 0; seed < n_seeds; ++seed) {
        FedConfig cfg;
        cfg.K_g = 16;
        cfg.seed = seed;
        cfg.max_rounds = 30;
        const RoundHistory hist = run_federated(live, cfg);
        fkm_mean += ari(predict_all(hist.models.back().means), truth);
        shot_mean += ari(predict_all(oneshot(live, 16, 16, false, seed)), truth);
    }
    fkm_mean /= n_seeds;
    shot_mean /= n_seeds;
    CHECK(fkm_mean >= shot_mean + 0.02);
    CHECK(fkm_mean > 0.85);
}
