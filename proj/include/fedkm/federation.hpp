#ifndef FEDKM_FEDERATION_HPP
#define FEDKM_FEDERATION_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fedkm/rng.hpp"
#include "fedkm/types.hpp"

namespace fedkm {

// The only message a client ever sends: cluster means with their sample
// counts. Raw points cannot be expressed in this type, which is the
// privacy boundary of the protocol.
struct ClientUpdate {
    int client_id = 0;
    ClusterSet clusters; // k may be 0 after filtering
};

// The server's broadcast: exactly K_g means every round, rows sorted
// lexicographically so per-round movement is well-defined.
struct GlobalModel {
    int round = 0;
    ClusterSet means;
};

struct FedConfig {
    int K_g = 16;
    int p = 2;              // minimum samples for a cluster to be reported
    int local_iters = 1;    // lloyd iterations per client per round
    int max_rounds = 100;   // total aggregations, the init round included
    double stop_tol = 1e-6; // max per-coordinate movement of global means
    std::uint64_t seed = 0;

    void validate() const;
};

// Metric values attached to one round by the evaluation hook.
using RoundMetrics = std::vector<std::pair<std::string, double>>;

// Called after every aggregation with the fresh model; whatever it
// returns is stored alongside. Evaluation runs outside the protocol and
// never influences it.
using EvalHook = std::function<RoundMetrics(const GlobalModel&)>;

struct RoundHistory {
    std::vector<GlobalModel> models;   // index equals round number
    std::vector<RoundMetrics> metrics; // empty unless a hook was installed
    bool converged = false;            // stopped by movement, not round cap

    int total_rounds() const { return static_cast<int>(models.size()); }
};

// Round 0 on a client: k-means++ over the local data with
// K_i = min(K_g, distinct points), counts from an assign pass. The
// privacy filter is applied by the orchestrator before sending.
ClientUpdate client_init(const PointSet& data, int K_g, Rng& rng);

// Drop clusters holding fewer than p samples, order preserved. The
// result may hold zero clusters.
ClientUpdate privacy_filter(ClientUpdate update, int p);

// Pool all received means as weighted points, cluster them with
// k = min(K_g, distinct means), pad back to K_g rows (weight-0 row-robin
// duplicates) if fewer distinct means arrived, and sort rows.
// Throws protocol_error when every cluster was filtered away.
GlobalModel server_aggregate(const std::vector<ClientUpdate>& updates, int K_g,
                             Rng& rng);

// One client round: assign local data to the global means, drop means no
// local point chose, run exactly cfg.local_iters lloyd iterations from
// the survivors, then privacy-filter the result.
ClientUpdate client_round(const PointSet& data, const GlobalModel& model,
                          const FedConfig& cfg);

// The synchronous protocol loop: init round, then client rounds and
// aggregations until the global means move at most cfg.stop_tol or
// cfg.max_rounds aggregations have run. Deterministic given cfg.seed.
RoundHistory run_federated(const std::vector<PointSet>& datasets, const FedConfig& cfg,
                           const EvalHook& eval_hook = {});

// Max per-coordinate absolute difference between two equally-shaped
// models; the stopping rule compares consecutive rounds.
double model_movement(const GlobalModel& a, const GlobalModel& b);

} // namespace fedkm

#endif
