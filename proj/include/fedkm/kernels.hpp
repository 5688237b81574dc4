#ifndef FEDKM_KERNELS_HPP
#define FEDKM_KERNELS_HPP

#include <cstdint>
#include <utility>

namespace fedkm::kernels {

// Hot loops live here in two variants: a plain serial reference and an
// OpenMP one. The pair must produce bit-identical output: the parallel
// variants only distribute independent per-point work, all reductions are
// performed sequentially in index order. Tests assert the equivalence and
// the benchmark target compares throughput.

inline double sq_dist(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

// index of the nearest mean by squared euclidean distance; ties go to the
// lowest cluster index
inline std::pair<int, double> nearest_mean(const double* x, const double* means,
                                           int k, int d) {
    int best = 0;
    double best_d2 = sq_dist(x, means, d);
    for (int j = 1; j < k; ++j) {
        const double d2 = sq_dist(x, means + static_cast<std::size_t>(j) * d, d);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    return {best, best_d2};
}

// For every point write the nearest mean index and its squared distance.
void assign_serial(const double* pts, int n, int d, const double* means, int k,
                   int* out_idx, double* out_d2);
void assign_omp(const double* pts, int n, int d, const double* means, int k,
                int* out_idx, double* out_d2);
void assign_auto(const double* pts, int n, int d, const double* means, int k,
                 int* out_idx, double* out_d2);

// Ordered weighted sum over the per-point squared distances. `w` may be
// null (unit weights). Sequential on purpose: summation order is part of
// the deterministic contract.
double weighted_sum(const double* w, const double* d2, int n);

// Per-cluster weighted accumulation of points: sums (k*d), weight totals
// (k) and member counts (k). Buffers are zeroed here. Sequential.
void accumulate(const double* pts, int n, int d, const double* w,
                const int* idx, int k, double* sums, double* wsum,
                std::int64_t* counts);

// Full silhouette per-point scores for dense labels in [0, m). `counts`
// holds the per-cluster sizes. O(n^2 d).
void silhouette_samples_serial(const double* pts, int n, int d,
                               const int* labels, int m,
                               const std::int64_t* counts, double* out_s);
void silhouette_samples_omp(const double* pts, int n, int d, const int* labels,
                            int m, const std::int64_t* counts, double* out_s);
void silhouette_samples_auto(const double* pts, int n, int d, const int* labels,
                             int m, const std::int64_t* counts, double* out_s);

} // namespace fedkm::kernels

#endif
