#ifndef FEDKM_KMEANS_HPP
#define FEDKM_KMEANS_HPP

#include <span>

#include "fedkm/rng.hpp"
#include "fedkm/types.hpp"

namespace fedkm {

struct KmeansOptions {
    double tol = 1e-6; // max per-coordinate mean movement
    int max_iter = 300;
};

struct AssignResult {
    std::vector<int> assignment;
    std::vector<std::int64_t> counts;
};

/// Map every point to its nearest mean (squared euclidean, ties to the
/// lowest cluster index) and count members per cluster.
AssignResult assign(const PointSet& points, const ClusterSet& means);

/// One weighted Lloyd update: group points by nearest mean, recompute the
/// weighted averages, re-seed empty clusters at the point farthest from its
/// assigned mean. Returned counts come from an assign pass against the new
/// means. Empty `weights` means unit weights.
ClusterSet lloyd_step(const PointSet& points, std::span<const double> weights,
                      const ClusterSet& means);

/// Weighted Lloyd iteration from an explicit initialization, until the max
/// per-coordinate mean movement drops to opts.tol or opts.max_iter updates
/// have run.
KmeansResult kmeans(const PointSet& points, int k, const ClusterSet& init,
                    std::span<const double> weights = {},
                    const KmeansOptions& opts = {});

/// Same, initialized by seeded k-means++.
KmeansResult kmeans(const PointSet& points, int k, Rng& rng,
                    std::span<const double> weights = {},
                    const KmeansOptions& opts = {});

/// Weighted k-means++: first mean drawn weight-proportionally, each next one
/// with probability proportional to weight times squared distance to the
/// nearest chosen mean. Counts are set by a final assign pass.
/// Requires k <= number of distinct points.
///
/// The draw scans points in lexicographic coordinate order, so for a fixed
/// generator state the chosen centers do not depend on how the caller ordered
/// the rows — pooled shards seed identically however they were concatenated.
ClusterSet kmeanspp_init(const PointSet& points, int k,
                         std::span<const double> weights, Rng& rng);

/// Sum over points of weight times squared distance to the nearest mean.
double weighted_inertia(const PointSet& points, std::span<const double> weights,
                        const ClusterSet& means);

int distinct_point_count(const PointSet& points);

} // namespace fedkm

#endif
