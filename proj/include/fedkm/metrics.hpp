#ifndef FEDKM_METRICS_HPP
#define FEDKM_METRICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fedkm/types.hpp"

namespace fedkm {

// Adjusted Rand Index between two labelings of the same points, via the
// pair-counting contingency formula. Label ids need not be contiguous.
// Degenerate case (both partitions trivial, so chance correction divides
// by zero) is defined as 1: the partitions are identical.
double ari(const std::vector<int>& a, const std::vector<int>& b);

// Mean silhouette score over all points: a = mean distance to the own
// cluster (excluding self), b = smallest mean distance to another cluster,
// s = (b - a) / max(a, b). Points in singleton clusters score 0. O(n^2 d);
// evaluation-only, never part of the protocol.
// Throws metric_undefined with fewer than two non-empty clusters.
double silhouette(const PointSet& points, const std::vector<int>& labels);

// Partial aggregate of the simplified silhouette: the score only needs
// each point's distance to the shared means, so shards can be scored
// independently and combined by summing.
struct SilhouettePartial {
    double sum = 0.0;
    std::int64_t n = 0;
};

// Simplified silhouette for one shard: a = distance to the own cluster
// mean, b = smallest distance to another mean. Labels index rows of
// `means`. Throws metric_undefined when means.k < 2.
SilhouettePartial simplified_silhouette_partial(const PointSet& points,
                                                const std::vector<int>& labels,
                                                const ClusterSet& means);

double combine_silhouette(std::span<const SilhouettePartial> parts);

// Pooled convenience wrapper over the partial form.
double simplified_silhouette(const PointSet& points, const std::vector<int>& labels,
                             const ClusterSet& means);

// Spearman rank correlation with average ranks for ties. Used to compare
// the two silhouette variants across a sweep of clusterings.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

} // namespace fedkm

#endif
