#include "fedkm/baselines.hpp"

#include <stdexcept>

#include "fedkm/federation.hpp"

namespace fedkm {

KmeansResult central_kmeans(const std::vector<PointSet>& datasets, int K_g,
                            std::uint64_t seed) {
    if (datasets.empty()) throw std::invalid_argument("need at least one client");
    PointSet pool;
    pool.d = datasets.front().d;
    for (const PointSet& ds : datasets) {
        ds.validate();
        if (ds.d != pool.d)
            throw std::invalid_argument("client datasets disagree on dimension");
        for (int i = 0; i < ds.n; ++i) pool.push_row(ds.point(i));
    }
    Rng rng = make_rng(seed, Stream::central);
    return kmeans(pool, K_g, rng);
}

ClusterSet oneshot(const std::vector<PointSet>& datasets, int K_l, int K_g,
                   bool weighted, std::uint64_t seed) {
    if (datasets.empty()) throw std::invalid_argument("need at least one client");
    if (K_l < 1) throw std::invalid_argument("K_l must be at least 1");

    std::vector<ClientUpdate> updates;
    updates.reserve(datasets.size());
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        const PointSet& ds = datasets[i];
        ds.validate();
        const int k = std::min(K_l, distinct_point_count(ds));
        Rng rng = make_rng(seed, Stream::client_init, i);
        const KmeansResult fit = kmeans(ds, k, rng);

        ClientUpdate u;
        u.client_id = static_cast<int>(i);
        u.clusters = fit.clusters;
        if (!weighted) // plain means-of-means: every local mean counts once
            std::fill(u.clusters.counts.begin(), u.clusters.counts.end(), 1);
        updates.push_back(std::move(u));
    }

    Rng rng = make_rng(seed, Stream::server_aggregate, 0);
    return server_aggregate(updates, K_g, rng).means;
}

OneshotSweep oneshot_informed(const std::vector<PointSet>& datasets,
                              std::span<const int> K_l_candidates, int K_g,
                              bool weighted, std::uint64_t seed,
                              const std::function<double(const ClusterSet&)>& score) {
    if (K_l_candidates.empty())
        throw std::invalid_argument("K_l sweep needs at least one candidate");
    if (!score) throw std::invalid_argument("K_l sweep needs a score");

    OneshotSweep best;
    bool first = true;
    for (const int K_l : K_l_candidates) {
        ClusterSet clusters = oneshot(datasets, K_l, K_g, weighted, seed);
        const double s = score(clusters);
        if (first || s > best.score) {
            best = OneshotSweep{std::move(clusters), K_l, s};
            first = false;
        }
    }
    return best;
}

} // namespace fedkm
