#include "fedkm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "fedkm/errors.hpp"
#include "fedkm/kernels.hpp"

namespace fedkm {

namespace {

// remap arbitrary integer ids to dense 0..m-1 in first-seen order
std::vector<int> compact_labels(const std::vector<int>& labels, int& m) {
    std::unordered_map<int, int> id;
    id.reserve(labels.size());
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, fresh] = id.emplace(labels[i], static_cast<int>(id.size()));
        (void)fresh;
        out[i] = it->second;
    }
    m = static_cast<int>(id.size());
    return out;
}

inline std::int64_t pairs_of(std::int64_t c) { return c * (c - 1) / 2; }

} // namespace

double ari(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("ari: labelings differ in length");
    const auto n = static_cast<std::int64_t>(a.size());
    if (n < 2) throw std::invalid_argument("ari: needs at least two points");

    int ka = 0, kb = 0;
    const std::vector<int> la = compact_labels(a, ka);
    const std::vector<int> lb = compact_labels(b, kb);

    std::vector<std::int64_t> table(static_cast<std::size_t>(ka) * kb, 0);
    std::vector<std::int64_t> row(ka, 0), col(kb, 0);
    for (std::int64_t i = 0; i < n; ++i) {
        ++table[static_cast<std::size_t>(la[i]) * kb + lb[i]];
        ++row[la[i]];
        ++col[lb[i]];
    }

    std::int64_t together_both = 0, together_a = 0, together_b = 0;
    for (const std::int64_t c : table) together_both += pairs_of(c);
    for (const std::int64_t c : row) together_a += pairs_of(c);
    for (const std::int64_t c : col) together_b += pairs_of(c);

    const double total_pairs = static_cast<double>(pairs_of(n));
    const double expected =
        static_cast<double>(together_a) * static_cast<double>(together_b) / total_pairs;
    const double max_index =
        0.5 * (static_cast<double>(together_a) + static_cast<double>(together_b));
    if (max_index == expected) return 1.0; // both partitions trivial and identical
    return (static_cast<double>(together_both) - expected) / (max_index - expected);
}

double silhouette(const PointSet& points, const std::vector<int>& labels) {
    if (static_cast<int>(labels.size()) != points.n)
        throw std::invalid_argument("silhouette: label count differs from point count");
    int m = 0;
    const std::vector<int> dense = compact_labels(labels, m);
    if (m < 2)
        throw metric_undefined("silhouette needs at least two non-empty clusters");
    std::vector<std::int64_t> counts(m, 0);
    for (const int l : dense) ++counts[l];

    std::vector<double> s(points.n);
    kernels::silhouette_samples_auto(points.values.data(), points.n, points.d,
                                     dense.data(), m, counts.data(), s.data());
    double sum = 0.0;
    for (const double v : s) sum += v;
    return sum / points.n;
}

SilhouettePartial simplified_silhouette_partial(const PointSet& points,
                                                const std::vector<int>& labels,
                                                const ClusterSet& means) {
    if (static_cast<int>(labels.size()) != points.n)
        throw std::invalid_argument(
            "simplified_silhouette: label count differs from point count");
    if (points.d != means.d)
        throw std::invalid_argument("simplified_silhouette: dimension mismatch");
    if (means.k < 2)
        throw metric_undefined("simplified silhouette needs at least two means");

    SilhouettePartial part;
    part.n = points.n;
    for (int i = 0; i < points.n; ++i) {
        const int own = labels[i];
        if (own < 0 || own >= means.k)
            throw std::invalid_argument("simplified_silhouette: label out of range");
        const double a =
            std::sqrt(kernels::sq_dist(points.row(i), means.mean(own), points.d));
        double b = std::numeric_limits<double>::infinity();
        for (int j = 0; j < means.k; ++j) {
            if (j == own) continue;
            b = std::min(b, kernels::sq_dist(points.row(i), means.mean(j), points.d));
        }
        b = std::sqrt(b);
        const double denom = std::max(a, b);
        part.sum += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return part;
}

double combine_silhouette(std::span<const SilhouettePartial> parts) {
    double sum = 0.0;
    std::int64_t n = 0;
    for (const auto& p : parts) {
        sum += p.sum;
        n += p.n;
    }
    if (n == 0) throw metric_undefined("silhouette over zero points");
    return sum / static_cast<double>(n);
}

double simplified_silhouette(const PointSet& points, const std::vector<int>& labels,
                             const ClusterSet& means) {
    const SilhouettePartial part = simplified_silhouette_partial(points, labels, means);
    return combine_silhouette({&part, 1});
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("spearman: series differ in length");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("spearman: needs at least two samples");

    const auto ranks = [n](const std::vector<double>& v) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
            for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
            i = j + 1;
        }
        return r;
    };

    const std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw metric_undefined("spearman undefined for a constant series");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace fedkm
