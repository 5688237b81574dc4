#ifndef FEDKM_EXPERIMENT_HPP
#define FEDKM_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fedkm/datagen.hpp"
#include "fedkm/federation.hpp"

namespace fedkm {

// Where the points come from: a synthetic grid draw or a CSV file.
// An unset seed means every sweep seed draws its own dataset; a set seed
// pins one draw across the whole sweep.
struct DatasetSpec {
    enum class Kind { grid, file };
    Kind kind = Kind::grid;
    GridSpec grid;                     // Kind::grid; its seed field is unused here
    std::optional<std::uint64_t> seed; // Kind::grid
    std::string path;                  // Kind::file, resolved against the config dir
    bool has_labels = false;           // Kind::file
};

// How points land on clients. Same seed convention as DatasetSpec.
struct PartitionSpec {
    enum class Kind { by_beta, fixed_clusters, from_file };
    Kind kind = Kind::by_beta;
    int clients = 5;                      // by_beta
    double beta = 1.0;                    // by_beta
    std::vector<int> clusters_per_client; // fixed_clusters
    std::string path;                     // from_file, resolved against the config dir
    std::optional<std::uint64_t> seed;
};

struct OneshotSpec {
    std::optional<int> K_l; // unset: K_l = K_g
    std::vector<int> sweep; // nonempty: pick K_l by ARI over these candidates
    bool weighted = false;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    PartitionSpec partition;
    std::vector<std::string> methods; // from {fkm, central, oneshot}
    FedConfig fed;                    // seed field is overwritten per sweep seed
    OneshotSpec oneshot;
    std::vector<std::string> metrics; // from {ari, silhouette,
                                      //       simplified_silhouette, inertia}
    std::vector<std::uint64_t> seeds;
    std::string output;         // path stem, resolved against the config dir
    bool include_timing = false; // emit wall_ms columns (breaks rerun file identity)
    std::string resolved_json;  // the default-filled config document, echoed
                                // into structured output for provenance
};

// Parse and validate a JSON experiment config. Relative paths inside the
// file resolve against its directory. Throws config_error naming the
// offending field; anything reported here is caught before any run starts.
ExperimentConfig load_config(const std::string& path);

// round value for once-per-run rows (baselines); fkm rows carry the
// federation round number instead
constexpr int final_round = -1;

struct ResultRecord {
    std::string method;
    std::uint64_t seed = 0;
    int round = final_round;
    std::string metric;
    double value = 0.0;   // NaN when the metric is undefined for the model
    double wall_ms = 0.0; // wall time of the whole (method, seed) run,
                          // repeated on each of its rows
};

// Field-wise equality with bitwise double comparison (NaN equals NaN),
// so round-trip checks are exact.
bool operator==(const ResultRecord& a, const ResultRecord& b);

// Run every seed x method cell: build the data and partition, run the
// method, evaluate the requested metrics per round (fkm) or once
// (baselines). Clients left empty by the partition are dropped; predicted
// labels concatenate the remaining clients in ascending client order, so
// they align with the pooled ground truth. Deterministic apart from
// wall_ms. Rows are sorted by (method, seed, round, metric), final last.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg);

enum class ResultFormat {
    tabular,   // CSV: one header line plus one line per record
    structured // versioned JSON embedding the resolved config
};

// Write records to `path`. Timing columns appear only when
// cfg.include_timing is set; without them rerunning the same config
// produces byte-identical files.
void emit_results(const std::vector<ResultRecord>& records, const std::string& path,
                  ResultFormat format, const ExperimentConfig& cfg);

// Reparse a structured results file into the records it was written from.
std::vector<ResultRecord> read_results(const std::string& path);

// Materialize the dataset and partition for the first sweep seed as
// "<output>.points.csv" and "<output>.partition.csv"; returns the two
// paths. A config pointing at these files reproduces the same experiment.
std::pair<std::string, std::string> generate_data_files(const ExperimentConfig& cfg);

} // namespace fedkm

#endif
