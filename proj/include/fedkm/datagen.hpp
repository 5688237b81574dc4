#ifndef FEDKM_DATAGEN_HPP
#define FEDKM_DATAGEN_HPP

#include <cmath>
#include <filesystem>
#include <utility>
#include <vector>

#include "fedkm/rng.hpp"
#include "fedkm/types.hpp"

namespace fedkm {

// Assignment of every point to exactly one client.
struct Partition {
    std::vector<int> client_of;
    int n_clients = 0;

    // throws if any index is out of [0, n_clients) or sizes disagree
    void validate(int n_points) const;
    // point indices per client, original order preserved
    std::vector<std::vector<int>> by_client() const;
};

// Synthetic benchmark: a square grid of gaussian blobs.
struct GridSpec {
    int centers_per_side = 4;
    int points_per_cluster = 50;
    double spacing = 5.0;
    double sigma = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct GridDataset {
    PointSet points;       // labels hold the generating center index
    ClusterSet true_means; // the grid centers, counts = points_per_cluster
};

// centers_per_side^2 centers spaced evenly and centered on the origin;
// points_per_cluster isotropic-normal samples around each. sigma == 0
// degenerates to exact copies of the centers.
GridDataset make_grid_dataset(const GridSpec& spec);

// Half-width of the square field the grid sits in: the outermost centers
// plus one spacing of margin. Clients are placed inside this square.
double grid_field_half_extent(const GridSpec& spec);

// Probability that a client at distance `dist` claims a point. The limit
// for dist -> 0 is 1, so a client sitting on a point always claims it.
inline double claim_probability(double dist, double beta) {
    return dist == 0.0 ? 1.0 : 1.0 - std::exp(-beta / dist);
}

// Distance-decayed random partition: every client claims each point
// independently with claim_probability; multiple claimants are resolved
// uniformly at random, and a point no client claims goes to the nearest
// client. Larger beta mixes the data more; beta -> 0 approaches a
// Voronoi split of the client locations.
Partition distribute_by_beta(const PointSet& points, const PointSet& client_locations,
                             double beta, Rng& rng);

// Deal whole ground-truth clusters to clients: client i receives the
// points of clusters_per_client[i] cluster ids. Ids are dealt without
// replacement to clients in descending order of request; once the pool is
// exhausted the remaining requests re-use already-dealt ids, and the
// points of an id held by several clients are split uniformly among them.
Partition distribute_fixed_clusters(const PointSet& points,
                                    const std::vector<int>& clusters_per_client,
                                    Rng& rng);

// Per-dimension bounds of a point set, used to place client locations for
// datasets that do not come from a grid spec.
struct Bounds {
    std::vector<double> lo, hi;
};

Bounds bounding_box(const PointSet& points);
Bounds square_bounds(double half_extent, int d);

// n client locations drawn uniformly inside the bounds, one row each.
PointSet uniform_locations(int n, const Bounds& bounds, Rng& rng);

// Keep at most caps[i] points of client i (negative = unlimited), chosen
// uniformly without replacement; returns the reduced dataset and its
// partition, original point order preserved.
std::pair<PointSet, Partition> subsample_per_client(const PointSet& points,
                                                    const Partition& part,
                                                    const std::vector<int>& caps,
                                                    Rng& rng);

// One PointSet per client, labels carried along, point order preserved.
std::vector<PointSet> split_by_client(const PointSet& points, const Partition& part);

// Text point files: one point per row, comma-separated decimals, optional
// header row, optional final integer label column. Values are written in
// shortest round-trip form, so save -> load reproduces doubles exactly.
PointSet load_points_file(const std::filesystem::path& path, bool has_labels);
void save_points_file(const std::filesystem::path& path, const PointSet& points,
                      bool with_labels);

// Partition files: one client index per row.
Partition load_partition_file(const std::filesystem::path& path, int n_points);
void save_partition_file(const std::filesystem::path& path, const Partition& part);

} // namespace fedkm

#endif
