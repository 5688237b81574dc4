#ifndef FEDKM_BASELINES_HPP
#define FEDKM_BASELINES_HPP

#include <functional>
#include <span>
#include <vector>

#include "fedkm/kmeans.hpp"
#include "fedkm/types.hpp"

namespace fedkm {

// Pool every client's points (client order preserved, so the assignment
// lines up with concatenated ground truth) and run plain k-means with a
// k-means++ init. The reference any federated result is compared against.
KmeansResult central_kmeans(const std::vector<PointSet>& datasets, int K_g,
                            std::uint64_t seed);

// Single-round baseline: every client clusters its own data to
// convergence with k = min(K_l, its distinct points), then one server
// k-means over the pooled local means (count-weighted when `weighted`).
// Shares the per-client and server seed streams with the federated run,
// so with p=0 it reproduces that run's first aggregation exactly.
ClusterSet oneshot(const std::vector<PointSet>& datasets, int K_l, int K_g,
                   bool weighted, std::uint64_t seed);

struct OneshotSweep {
    ClusterSet clusters;
    int K_l = 0;
    double score = 0.0;
};

// "Informed" variant: try every candidate K_l and keep the one whose
// result maximizes the caller's score (ties to the smaller K_l). The
// score is typically a ground-truth comparison the baseline itself could
// never see in a real deployment.
OneshotSweep oneshot_informed(const std::vector<PointSet>& datasets,
                              std::span<const int> K_l_candidates, int K_g,
                              bool weighted, std::uint64_t seed,
                              const std::function<double(const ClusterSet&)>& score);

} // namespace fedkm

#endif
