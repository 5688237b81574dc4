#include "fedkm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

namespace fedkm::kernels {

void assign_serial(const double* pts, int n, int d, const double* means, int k,
                   int* out_idx, double* out_d2) {
    for (int i = 0; i < n; ++i) {
        const auto [j, d2] = nearest_mean(pts + static_cast<std::size_t>(i) * d, means, k, d);
        out_idx[i] = j;
        out_d2[i] = d2;
    }
}

void assign_omp(const double* pts, int n, int d, const double* means, int k,
                int* out_idx, double* out_d2) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const auto [j, d2] = nearest_mean(pts + static_cast<std::size_t>(i) * d, means, k, d);
        out_idx[i] = j;
        out_d2[i] = d2;
    }
}

void assign_auto(const double* pts, int n, int d, const double* means, int k,
                 int* out_idx, double* out_d2) {
#ifdef _OPENMP
    assign_omp(pts, n, d, means, k, out_idx, out_d2);
#else
    assign_serial(pts, n, d, means, k, out_idx, out_d2);
#endif
}

double weighted_sum(const double* w, const double* d2, int n) {
    double total = 0.0;
    if (w == nullptr) {
        for (int i = 0; i < n; ++i) total += d2[i];
    } else {
        for (int i = 0; i < n; ++i) total += w[i] * d2[i];
    }
    return total;
}

void accumulate(const double* pts, int n, int d, const double* w,
                const int* idx, int k, double* sums, double* wsum,
                std::int64_t* counts) {
    std::memset(sums, 0, sizeof(double) * static_cast<std::size_t>(k) * d);
    std::memset(wsum, 0, sizeof(double) * static_cast<std::size_t>(k));
    std::memset(counts, 0, sizeof(std::int64_t) * static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) {
        const int j = idx[i];
        const double wi = w ? w[i] : 1.0;
        const double* x = pts + static_cast<std::size_t>(i) * d;
        double* s = sums + static_cast<std::size_t>(j) * d;
        for (int c = 0; c < d; ++c) s[c] += wi * x[c];
        wsum[j] += wi;
        ++counts[j];
    }
}

namespace {

// score of point i given cluster sizes; a/b definition of the full
// silhouette, singleton clusters score 0
inline double silhouette_one(const double* pts, int n, int d, const int* labels,
                             int m, const std::int64_t* counts, int i,
                             double* dist_sum) {
    const int li = labels[i];
    if (counts[li] <= 1) return 0.0;
    for (int c = 0; c < m; ++c) dist_sum[c] = 0.0;
    const double* xi = pts + static_cast<std::size_t>(i) * d;
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        dist_sum[labels[j]] += std::sqrt(sq_dist(xi, pts + static_cast<std::size_t>(j) * d, d));
    }
    const double a = dist_sum[li] / static_cast<double>(counts[li] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < m; ++c) {
        if (c == li || counts[c] == 0) continue;
        b = std::min(b, dist_sum[c] / static_cast<double>(counts[c]));
    }
    const double denom = std::max(a, b);
    return denom > 0.0 ? (b - a) / denom : 0.0;
}

} // namespace

void silhouette_samples_serial(const double* pts, int n, int d,
                               const int* labels, int m,
                               const std::int64_t* counts, double* out_s) {
    std::vector<double> dist_sum(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i)
        out_s[i] = silhouette_one(pts, n, d, labels, m, counts, i, dist_sum.data());
}

void silhouette_samples_omp(const double* pts, int n, int d, const int* labels,
                            int m, const std::int64_t* counts, double* out_s) {
#pragma omp parallel
    {
        std::vector<double> dist_sum(static_cast<std::size_t>(m));
#pragma omp for schedule(static)
        for (int i = 0; i < n; ++i)
            out_s[i] = silhouette_one(pts, n, d, labels, m, counts, i, dist_sum.data());
    }
}

void silhouette_samples_auto(const double* pts, int n, int d, const int* labels,
                             int m, const std::int64_t* counts, double* out_s) {
#ifdef _OPENMP
    silhouette_samples_omp(pts, n, d, labels, m, counts, out_s);
#else
    silhouette_samples_serial(pts, n, d, labels, m, counts, out_s);
#endif
}

} // namespace fedkm::kernels
