#include "fedkm/federation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fedkm/errors.hpp"
#include "fedkm/kmeans.hpp"

namespace fedkm {

void FedConfig::validate() const {
    if (K_g < 1) throw std::invalid_argument("K_g must be at least 1");
    if (p < 0) throw std::invalid_argument("privacy threshold p must be nonnegative");
    if (local_iters < 1) throw std::invalid_argument("local_iters must be at least 1");
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
    if (!(stop_tol >= 0.0)) throw std::invalid_argument("stop_tol must be nonnegative");
}

namespace {

// canonical row order: lexicographic by coordinates, stable for identical
// rows (the padded duplicates), counts permuted alongside
void sort_model_rows(ClusterSet& cs) {
    const int k = cs.k, d = cs.d;
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::lexicographical_compare(cs.mean(a), cs.mean(a) + d, cs.mean(b),
                                            cs.mean(b) + d);
    });
    ClusterSet sorted;
    sorted.d = d;
    for (const int j : order) sorted.push_mean(cs.mean_span(j), cs.counts[j]);
    cs = std::move(sorted);
}

} // namespace

ClientUpdate client_init(const PointSet& data, int K_g, Rng& rng) {
    data.validate();
    if (K_g < 1) throw std::invalid_argument("K_g must be at least 1");
    const int k = std::min(K_g, distinct_point_count(data));
    ClientUpdate update;
    update.clusters = kmeanspp_init(data, k, {}, rng);
    return update;
}

ClientUpdate privacy_filter(ClientUpdate update, int p) {
    if (p < 0) throw std::invalid_argument("privacy threshold p must be nonnegative");
    ClusterSet kept;
    kept.d = update.clusters.d;
    for (int j = 0; j < update.clusters.k; ++j)
        if (update.clusters.counts[j] >= p)
            kept.push_mean(update.clusters.mean_span(j), update.clusters.counts[j]);
    update.clusters = std::move(kept);
    return update;
}

GlobalModel server_aggregate(const std::vector<ClientUpdate>& updates, int K_g,
                             Rng& rng) {
    if (K_g < 1) throw std::invalid_argument("K_g must be at least 1");

    // pool the received means as a weighted point set, skipping weightless
    // clusters (k-means needs strictly positive weights)
    PointSet pool;
    std::vector<double> weights;
    for (const ClientUpdate& u : updates) {
        if (u.clusters.k == 0) continue;
        if (pool.n == 0) pool.d = u.clusters.d;
        if (u.clusters.d != pool.d)
            throw protocol_error("client updates disagree on dimension", -1);
        for (int j = 0; j < u.clusters.k; ++j) {
            if (u.clusters.counts[j] <= 0) continue;
            pool.push_row(u.clusters.mean_span(j));
            weights.push_back(static_cast<double>(u.clusters.counts[j]));
        }
    }
    if (pool.n == 0) throw protocol_error("no clusters survived filtering", -1);

    const int k = std::min(K_g, distinct_point_count(pool));
    const KmeansResult fit = kmeans(pool, k, rng, weights);

    GlobalModel model;
    model.means = fit.clusters;
    // a global cluster represents every sample behind its member means
    std::fill(model.means.counts.begin(), model.means.counts.end(), 0);
    for (int i = 0; i < pool.n; ++i)
        model.means.counts[fit.assignment[i]] +=
            static_cast<std::int64_t>(weights[i]);
    // fewer distinct means than K_g: pad with weight-0 duplicates so the
    // broadcast always carries exactly K_g rows; duplicates lose every
    // assignment tie and are dropped client-side
    for (int j = k; j < K_g; ++j) {
        const std::vector<double> row(model.means.mean(j % k),
                                      model.means.mean(j % k) + model.means.d);
        model.means.push_mean(row, 0);
    }
    sort_model_rows(model.means);
    return model;
}

ClientUpdate client_round(const PointSet& data, const GlobalModel& model,
                          const FedConfig& cfg) {
    data.validate();
    const AssignResult where = assign(data, model.means);

    ClusterSet survivors;
    survivors.d = model.means.d;
    for (int j = 0; j < model.means.k; ++j)
        if (where.counts[j] > 0)
            survivors.push_mean(model.means.mean_span(j), where.counts[j]);
    assert(survivors.k >= 1); // nonempty data always has a nearest mean

    const KmeansResult fit =
        kmeans(data, survivors.k, survivors, {},
               KmeansOptions{.tol = 0.0, .max_iter = cfg.local_iters});

    ClientUpdate update;
    update.clusters = fit.clusters;
    return privacy_filter(std::move(update), cfg.p);
}

double model_movement(const GlobalModel& a, const GlobalModel& b) {
    if (a.means.k != b.means.k || a.means.d != b.means.d)
        throw std::invalid_argument("models differ in shape");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.means.means.size(); ++i)
        worst = std::max(worst, std::abs(a.means.means[i] - b.means.means[i]));
    return worst;
}

RoundHistory run_federated(const std::vector<PointSet>& datasets, const FedConfig& cfg,
                           const EvalHook& eval_hook) {
    cfg.validate();
    if (datasets.empty()) throw std::invalid_argument("need at least one client");
    for (std::size_t i = 0; i < datasets.size(); ++i)
        if (datasets[i].n == 0)
            throw std::invalid_argument("client " + std::to_string(i) +
                                        " has no points");

    const int n_clients = static_cast<int>(datasets.size());
    RoundHistory history;

    const auto aggregate = [&](std::vector<ClientUpdate>&& updates, int round) {
        Rng rng = make_rng(cfg.seed, Stream::server_aggregate, round);
        try {
            GlobalModel model = server_aggregate(updates, cfg.K_g, rng);
            model.round = round;
            return model;
        } catch (const protocol_error& e) {
            throw protocol_error(std::string(e.what()) + " in round " +
                                     std::to_string(round),
                                 round);
        }
    };

    std::vector<ClientUpdate> updates;
    updates.reserve(n_clients);
    for (int i = 0; i < n_clients; ++i) {
        Rng rng = make_rng(cfg.seed, Stream::client_init, i);
        ClientUpdate u = privacy_filter(client_init(datasets[i], cfg.K_g, rng), cfg.p);
        u.client_id = i;
        updates.push_back(std::move(u));
    }
    history.models.push_back(aggregate(std::move(updates), 0));
    if (eval_hook) history.metrics.push_back(eval_hook(history.models.back()));

    for (int round = 1; round < cfg.max_rounds; ++round) {
        updates.clear();
        for (int i = 0; i < n_clients; ++i) {
            ClientUpdate u = client_round(datasets[i], history.models.back(), cfg);
            u.client_id = i;
            updates.push_back(std::move(u));
        }
        GlobalModel model = aggregate(std::move(updates), round);
        const double moved = model_movement(model, history.models.back());
        history.models.push_back(std::move(model));
        if (eval_hook) history.metrics.push_back(eval_hook(history.models.back()));
        if (moved <= cfg.stop_tol) {
            history.converged = true;
            break;
        }
    }
    return history;
}

} // namespace fedkm
