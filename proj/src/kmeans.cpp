#include "fedkm/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fedkm/kernels.hpp"

namespace fedkm {

namespace {

const double* weights_ptr(const PointSet& points, std::span<const double> weights) {
    if (weights.empty()) return nullptr;
    if (weights.size() != static_cast<std::size_t>(points.n))
        throw std::invalid_argument("weights length must equal point count");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("weights must be strictly positive and finite");
    return weights.data();
}

void check_dims(const PointSet& points, const ClusterSet& means) {
    if (means.k < 1) throw std::invalid_argument("means must hold at least one cluster");
    if (means.d != points.d)
        throw std::invalid_argument("dimension mismatch between points and means");
}

// Weighted mean update. Clusters left empty by `idx` are re-seeded at the
// point with the largest squared distance to its assigned mean (ties to the
// lowest point index), one distinct point per empty cluster.
std::vector<double> update_means(const PointSet& points, const double* w,
                                 const int* idx, const double* d2, int k) {
    const int n = points.n;
    const int d = points.d;
    std::vector<double> sums(static_cast<std::size_t>(k) * d);
    std::vector<double> wsum(static_cast<std::size_t>(k));
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k));
    kernels::accumulate(points.values.data(), n, d, w, idx, k, sums.data(),
                        wsum.data(), counts.data());

    std::vector<int> member(static_cast<std::size_t>(k), -1);
    for (int i = 0; i < n; ++i) member[idx[i]] = i;

    std::vector<double> out(static_cast<std::size_t>(k) * d);
    for (int j = 0; j < k; ++j) {
        double* m = out.data() + static_cast<std::size_t>(j) * d;
        if (counts[j] == 1) {
            // one member: copy the point, (w*x)/w can drift an ulp
            std::memcpy(m, points.row(member[j]), sizeof(double) * d);
        } else if (counts[j] > 0) {
            const double* s = sums.data() + static_cast<std::size_t>(j) * d;
            for (int c = 0; c < d; ++c) m[c] = s[c] / wsum[j];
        }
    }

    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < k; ++j) {
        if (counts[j] > 0) continue;
        int far = -1;
        double far_d2 = -1.0;
        for (int i = 0; i < n; ++i) {
            if (!used[i] && d2[i] > far_d2) {
                far_d2 = d2[i];
                far = i;
            }
        }
        used[far] = 1;
        std::memcpy(out.data() + static_cast<std::size_t>(j) * d, points.row(far),
                    sizeof(double) * d);
    }
    return out;
}

std::vector<std::int64_t> count_members(const int* idx, int n, int k) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) ++counts[idx[i]];
    return counts;
}

// point indices sorted lexicographically by coordinates
std::vector<int> lexicographic_order(const PointSet& points) {
    const int d = points.d;
    std::vector<int> order(static_cast<std::size_t>(points.n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::lexicographical_compare(points.row(a), points.row(a) + d,
                                            points.row(b), points.row(b) + d);
    });
    return order;
}

// draw an index with probability proportional to scores[i], scanning the
// cumulative sum in the given order
int sample_index(const std::vector<double>& scores, const std::vector<int>& order,
                 double total, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, total);
    const double r = unif(rng);
    double cum = 0.0;
    int last_positive = -1;
    for (int i : order) {
        if (scores[i] > 0.0) last_positive = i;
        cum += scores[i];
        if (r < cum) return i;
    }
    return last_positive; // r landed on the accumulated rounding slack
}

} // namespace

AssignResult assign(const PointSet& points, const ClusterSet& means) {
    points.validate();
    check_dims(points, means);
    AssignResult res;
    res.assignment.resize(points.n);
    std::vector<double> d2(static_cast<std::size_t>(points.n));
    kernels::assign_auto(points.values.data(), points.n, points.d,
                         means.means.data(), means.k, res.assignment.data(),
                         d2.data());
    res.counts = count_members(res.assignment.data(), points.n, means.k);
    return res;
}

ClusterSet lloyd_step(const PointSet& points, std::span<const double> weights,
                      const ClusterSet& means) {
    points.validate();
    check_dims(points, means);
    const double* w = weights_ptr(points, weights);
    const int n = points.n;
    const int k = means.k;

    std::vector<int> idx(static_cast<std::size_t>(n));
    std::vector<double> d2(static_cast<std::size_t>(n));
    kernels::assign_auto(points.values.data(), n, points.d, means.means.data(),
                         k, idx.data(), d2.data());

    ClusterSet out;
    out.k = k;
    out.d = points.d;
    out.means = update_means(points, w, idx.data(), d2.data(), k);
    kernels::assign_auto(points.values.data(), n, points.d, out.means.data(), k,
                         idx.data(), d2.data());
    out.counts = count_members(idx.data(), n, k);
    return out;
}

KmeansResult kmeans(const PointSet& points, int k, const ClusterSet& init,
                    std::span<const double> weights, const KmeansOptions& opts) {
    points.validate();
    if (k < 1 || k > points.n)
        throw std::invalid_argument("kmeans: k must satisfy 1 <= k <= n");
    if (init.k != k || init.d != points.d)
        throw std::invalid_argument("kmeans: init shape must be k x d");
    if (opts.tol < 0.0 || opts.max_iter < 1)
        throw std::invalid_argument("kmeans: tol must be >= 0 and max_iter >= 1");
    const double* w = weights_ptr(points, weights);

    const int n = points.n;
    const int d = points.d;
    std::vector<double> means = init.means;
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::vector<double> d2(static_cast<std::size_t>(n));

    KmeansResult res;
    for (int t = 1; t <= opts.max_iter; ++t) {
        kernels::assign_auto(points.values.data(), n, d, means.data(), k,
                             idx.data(), d2.data());
        res.inertia_history.push_back(kernels::weighted_sum(w, d2.data(), n));

        std::vector<double> next = update_means(points, w, idx.data(), d2.data(), k);
        double movement = 0.0;
        for (std::size_t c = 0; c < means.size(); ++c)
            movement = std::max(movement, std::abs(next[c] - means[c]));
        means = std::move(next);
        res.iterations = t;
        if (movement <= opts.tol) break;
    }

    kernels::assign_auto(points.values.data(), n, d, means.data(), k, idx.data(),
                         d2.data());
    res.inertia = kernels::weighted_sum(w, d2.data(), n);
    res.inertia_history.push_back(res.inertia);
    res.assignment.assign(idx.begin(), idx.end());
    res.clusters.k = k;
    res.clusters.d = d;
    res.clusters.means = std::move(means);
    res.clusters.counts = count_members(idx.data(), n, k);
    return res;
}

KmeansResult kmeans(const PointSet& points, int k, Rng& rng,
                    std::span<const double> weights, const KmeansOptions& opts) {
    ClusterSet init = kmeanspp_init(points, k, weights, rng);
    return kmeans(points, k, init, weights, opts);
}

ClusterSet kmeanspp_init(const PointSet& points, int k,
                         std::span<const double> weights, Rng& rng) {
    points.validate();
    const double* w = weights_ptr(points, weights);
    if (k < 1 || k > distinct_point_count(points))
        throw std::invalid_argument(
            "kmeanspp_init: k must satisfy 1 <= k <= distinct point count");

    const int n = points.n;
    const int d = points.d;
    ClusterSet out;
    out.d = d;

    // The cumulative draws scan points in lexicographic coordinate order, so
    // the chosen centers depend on the point multiset and the generator state
    // only, not on storage order. Pooling shards in any order then seeds the
    // same centers.
    const std::vector<int> order = lexicographic_order(points);

    std::vector<double> scores(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int i : order) {
        scores[i] = w ? w[i] : 1.0;
        total += scores[i];
    }
    int pick = sample_index(scores, order, total, rng);
    out.push_mean(points.point(pick), 0);

    std::vector<double> best_d2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        best_d2[i] = kernels::sq_dist(points.row(i), out.mean(0), d);

    while (out.k < k) {
        total = 0.0;
        for (int i : order) {
            scores[i] = (w ? w[i] : 1.0) * best_d2[i];
            total += scores[i];
        }
        pick = sample_index(scores, order, total, rng);
        out.push_mean(points.point(pick), 0);
        const double* c = out.mean(out.k - 1);
        for (int i = 0; i < n; ++i)
            best_d2[i] = std::min(best_d2[i], kernels::sq_dist(points.row(i), c, d));
    }

    AssignResult ar = assign(points, out);
    out.counts = std::move(ar.counts);
    return out;
}

double weighted_inertia(const PointSet& points, std::span<const double> weights,
                        const ClusterSet& means) {
    points.validate();
    check_dims(points, means);
    const double* w = weights_ptr(points, weights);
    std::vector<int> idx(static_cast<std::size_t>(points.n));
    std::vector<double> d2(static_cast<std::size_t>(points.n));
    kernels::assign_auto(points.values.data(), points.n, points.d,
                         means.means.data(), means.k, idx.data(), d2.data());
    return kernels::weighted_sum(w, d2.data(), points.n);
}

int distinct_point_count(const PointSet& points) {
    const int n = points.n;
    const int d = points.d;
    const std::vector<int> order = lexicographic_order(points);
    int distinct = n > 0 ? 1 : 0;
    for (int i = 1; i < n; ++i)
        if (!std::equal(points.row(order[i - 1]), points.row(order[i - 1]) + d,
                        points.row(order[i])))
            ++distinct;
    return distinct;
}

} // namespace fedkm
