#ifndef FEDKM_TYPES_HPP
#define FEDKM_TYPES_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace fedkm {

/// A set of d-dimensional points stored row-major, with optional integer
/// ground-truth labels.
struct PointSet {
    std::vector<double> values; // n*d, row-major
    int n = 0;
    int d = 0;
    std::vector<int> labels; // empty, or one label per point

    bool has_labels() const { return !labels.empty(); }

    const double* row(int i) const {
        return values.data() + static_cast<std::size_t>(i) * d;
    }
    std::span<const double> point(int i) const { return {row(i), static_cast<std::size_t>(d)}; }

    void push_row(std::span<const double> p) {
        values.insert(values.end(), p.begin(), p.end());
        ++n;
    }

    // n >= 1, d >= 1, values finite, labels empty or length n
    void validate() const;
};

/// Cluster means plus per-cluster sample counts. This is the unit exchanged
/// between client and server.
struct ClusterSet {
    std::vector<double> means; // k*d, row-major
    int k = 0;
    int d = 0;
    std::vector<std::int64_t> counts; // size k

    const double* mean(int j) const {
        return means.data() + static_cast<std::size_t>(j) * d;
    }
    std::span<const double> mean_span(int j) const { return {mean(j), static_cast<std::size_t>(d)}; }

    void push_mean(std::span<const double> m, std::int64_t count) {
        means.insert(means.end(), m.begin(), m.end());
        counts.push_back(count);
        ++k;
    }

    // rows finite, counts nonnegative and sized k; k == 0 allowed only when
    // allow_empty (a filtered client update may carry no clusters)
    void validate(bool allow_empty = false) const;
};

struct KmeansResult {
    ClusterSet clusters;
    std::vector<int> assignment; // per point, in [0, k)
    double inertia = 0.0;
    int iterations = 0;
    // weighted objective observed at each assignment pass, final pass included;
    // nonincreasing by construction of the Lloyd update
    std::vector<double> inertia_history;
};

} // namespace fedkm

#endif
