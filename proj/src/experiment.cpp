#include "fedkm/experiment.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string_view>
#include <tuple>

#include <json.hpp>

#include "fedkm/baselines.hpp"
#include "fedkm/errors.hpp"
#include "fedkm/kmeans.hpp"
#include "fedkm/metrics.hpp"

namespace fedkm {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------
// config parsing: every helper carries the config path and the dotted
// field path so diagnostics point at the offending key

[[noreturn]] void fail(const std::string& cfg, const std::string& field,
                       const std::string& msg) {
    throw config_error(cfg, field + ": " + msg);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// null-valued keys count as absent, so "seed": null reads naturally
const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

struct Parser {
    std::string cfg; // config file path, for diagnostics

    void check_keys(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) const {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (std::none_of(allowed.begin(), allowed.end(),
                             [&](const char* k) { return it.key() == k; }))
                fail(cfg, join(where, it.key()), "unknown field");
        }
    }

    const json& as_object(const json& j, const std::string& field) const {
        if (!j.is_object()) fail(cfg, field, "expected an object");
        return j;
    }
    const json& as_array(const json& j, const std::string& field) const {
        if (!j.is_array()) fail(cfg, field, "expected an array");
        return j;
    }
    std::string as_string(const json& j, const std::string& field) const {
        if (!j.is_string()) fail(cfg, field, "expected a string");
        return j.get<std::string>();
    }
    bool as_bool(const json& j, const std::string& field) const {
        if (!j.is_boolean()) fail(cfg, field, "expected true or false");
        return j.get<bool>();
    }
    double as_number(const json& j, const std::string& field) const {
        if (!j.is_number()) fail(cfg, field, "expected a number");
        return j.get<double>();
    }
    int as_int(const json& j, const std::string& field) const {
        if (!j.is_number_integer()) fail(cfg, field, "expected an integer");
        const auto v = j.get<std::int64_t>();
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
            fail(cfg, field, "integer out of range");
        return static_cast<int>(v);
    }
    std::uint64_t as_seed(const json& j, const std::string& field) const {
        if (j.is_number_unsigned()) return j.get<std::uint64_t>();
        if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
            return static_cast<std::uint64_t>(j.get<std::int64_t>());
        fail(cfg, field, "expected a nonnegative integer");
    }
};

DatasetSpec parse_dataset(const Parser& p, const json* j,
                          const std::filesystem::path& base) {
    DatasetSpec out;
    if (!j) return out; // default grid
    p.as_object(*j, "dataset");

    std::string type = "grid";
    if (const json* t = find(*j, "type")) type = p.as_string(*t, "dataset.type");

    if (type == "grid") {
        p.check_keys(*j, "dataset",
                     {"type", "centers_per_side", "points_per_cluster", "spacing",
                      "sigma", "seed"});
        out.kind = DatasetSpec::Kind::grid;
        if (const json* v = find(*j, "centers_per_side"))
            out.grid.centers_per_side = p.as_int(*v, "dataset.centers_per_side");
        if (const json* v = find(*j, "points_per_cluster"))
            out.grid.points_per_cluster = p.as_int(*v, "dataset.points_per_cluster");
        if (const json* v = find(*j, "spacing"))
            out.grid.spacing = p.as_number(*v, "dataset.spacing");
        if (const json* v = find(*j, "sigma"))
            out.grid.sigma = p.as_number(*v, "dataset.sigma");
        if (const json* v = find(*j, "seed")) out.seed = p.as_seed(*v, "dataset.seed");
        try {
            out.grid.validate();
        } catch (const std::invalid_argument& e) {
            fail(p.cfg, "dataset", e.what());
        }
    } else if (type == "file") {
        p.check_keys(*j, "dataset", {"type", "path", "has_labels"});
        out.kind = DatasetSpec::Kind::file;
        const json* path = find(*j, "path");
        if (!path) fail(p.cfg, "dataset.path", "required for a file dataset");
        const std::filesystem::path rel(p.as_string(*path, "dataset.path"));
        out.path = (rel.is_absolute() ? rel : base / rel).string();
        if (const json* v = find(*j, "has_labels"))
            out.has_labels = p.as_bool(*v, "dataset.has_labels");
    } else {
        fail(p.cfg, "dataset.type", "expected \"grid\" or \"file\"");
    }
    return out;
}

PartitionSpec parse_partition(const Parser& p, const json* j,
                              const std::filesystem::path& base) {
    PartitionSpec out;
    if (!j) return out; // default beta split
    p.as_object(*j, "partition");

    std::string type = "beta";
    if (const json* t = find(*j, "type")) type = p.as_string(*t, "partition.type");

    if (type == "beta") {
        p.check_keys(*j, "partition", {"type", "clients", "beta", "seed"});
        out.kind = PartitionSpec::Kind::by_beta;
        if (const json* v = find(*j, "clients"))
            out.clients = p.as_int(*v, "partition.clients");
        if (const json* v = find(*j, "beta"))
            out.beta = p.as_number(*v, "partition.beta");
        if (out.clients < 1) fail(p.cfg, "partition.clients", "must be at least 1");
        if (!(out.beta > 0.0) || !std::isfinite(out.beta))
            fail(p.cfg, "partition.beta", "must be a positive finite number");
    } else if (type == "fixed_clusters") {
        p.check_keys(*j, "partition", {"type", "clusters_per_client", "seed"});
        out.kind = PartitionSpec::Kind::fixed_clusters;
        const json* arr = find(*j, "clusters_per_client");
        if (!arr)
            fail(p.cfg, "partition.clusters_per_client",
                 "required for a fixed_clusters partition");
        p.as_array(*arr, "partition.clusters_per_client");
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const std::string field =
                "partition.clusters_per_client[" + std::to_string(i) + "]";
            const int c = p.as_int((*arr)[i], field);
            if (c < 1) fail(p.cfg, field, "must be at least 1");
            out.clusters_per_client.push_back(c);
        }
        if (out.clusters_per_client.empty())
            fail(p.cfg, "partition.clusters_per_client", "must not be empty");
    } else if (type == "file") {
        p.check_keys(*j, "partition", {"type", "path"});
        out.kind = PartitionSpec::Kind::from_file;
        const json* path = find(*j, "path");
        if (!path) fail(p.cfg, "partition.path", "required for a file partition");
        const std::filesystem::path rel(p.as_string(*path, "partition.path"));
        out.path = (rel.is_absolute() ? rel : base / rel).string();
    } else {
        fail(p.cfg, "partition.type",
             "expected \"beta\", \"fixed_clusters\" or \"file\"");
    }
    if (const json* v = find(*j, "seed")) out.seed = p.as_seed(*v, "partition.seed");
    return out;
}

std::vector<std::string> parse_name_list(const Parser& p, const json& root,
                                         const char* key,
                                         std::initializer_list<const char*> known) {
    const json* j = find(root, key);
    if (!j) fail(p.cfg, key, "required");
    p.as_array(*j, key);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j->size(); ++i) {
        const std::string field = std::string(key) + "[" + std::to_string(i) + "]";
        const std::string name = p.as_string((*j)[i], field);
        if (std::none_of(known.begin(), known.end(),
                         [&](const char* k) { return name == k; })) {
            std::string options;
            for (const char* k : known)
                options += (options.empty() ? "\"" : ", \"") + std::string(k) + "\"";
            fail(p.cfg, field, "unknown name \"" + name + "\" (one of " + options + ")");
        }
        if (std::find(out.begin(), out.end(), name) != out.end())
            fail(p.cfg, field, "\"" + name + "\" listed twice");
        out.push_back(name);
    }
    if (out.empty()) fail(p.cfg, key, "must not be empty");
    return out;
}

bool has(const std::vector<std::string>& names, const char* name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

json echo_config(const ExperimentConfig& cfg, const json& root) {
    const auto opt_seed = [](const std::optional<std::uint64_t>& s) {
        return s ? json(*s) : json();
    };

    json dataset;
    if (cfg.dataset.kind == DatasetSpec::Kind::grid) {
        dataset = {{"type", "grid"},
                   {"centers_per_side", cfg.dataset.grid.centers_per_side},
                   {"points_per_cluster", cfg.dataset.grid.points_per_cluster},
                   {"spacing", cfg.dataset.grid.spacing},
                   {"sigma", cfg.dataset.grid.sigma},
                   {"seed", opt_seed(cfg.dataset.seed)}};
    } else {
        // echo the path as written, not as resolved: provenance mirrors input
        dataset = {{"type", "file"},
                   {"path", root.at("dataset").at("path")},
                   {"has_labels", cfg.dataset.has_labels}};
    }

    json partition;
    switch (cfg.partition.kind) {
    case PartitionSpec::Kind::by_beta:
        partition = {{"type", "beta"},
                     {"clients", cfg.partition.clients},
                     {"beta", cfg.partition.beta},
                     {"seed", opt_seed(cfg.partition.seed)}};
        break;
    case PartitionSpec::Kind::fixed_clusters:
        partition = {{"type", "fixed_clusters"},
                     {"clusters_per_client", cfg.partition.clusters_per_client},
                     {"seed", opt_seed(cfg.partition.seed)}};
        break;
    case PartitionSpec::Kind::from_file:
        partition = {{"type", "file"}, {"path", root.at("partition").at("path")}};
        break;
    }

    return json{{"dataset", dataset},
                {"partition", partition},
                {"methods", cfg.methods},
                {"federation",
                 {{"K_g", cfg.fed.K_g},
                  {"p", cfg.fed.p},
                  {"local_iters", cfg.fed.local_iters},
                  {"max_rounds", cfg.fed.max_rounds},
                  {"stop_tol", cfg.fed.stop_tol}}},
                {"oneshot",
                 {{"K_l", cfg.oneshot.K_l ? json(*cfg.oneshot.K_l) : json()},
                  {"sweep", cfg.oneshot.sweep},
                  {"weighted", cfg.oneshot.weighted}}},
                {"metrics", cfg.metrics},
                {"seeds", cfg.seeds},
                {"output", root.at("output")},
                {"include_timing", cfg.include_timing}};
}

// ---------------------------------------------------------------------
// running

// everything one sweep seed works on, after empty clients are dropped
struct SeedData {
    std::vector<PointSet> live;       // nonempty shards, ascending client id
    PointSet pooled;                  // the same points concatenated
    std::vector<int> truth;           // pooled labels; empty when unlabeled
    std::vector<std::size_t> offsets; // start of each shard in pooled order
};

// dataset + partition for one sweep seed, before empty-client dropping
std::pair<PointSet, Partition> build_instance(const ExperimentConfig& cfg,
                                              std::uint64_t sweep_seed) {
    PointSet points;
    GridSpec grid = cfg.dataset.grid;
    if (cfg.dataset.kind == DatasetSpec::Kind::grid) {
        grid.seed = cfg.dataset.seed.value_or(sweep_seed);
        points = make_grid_dataset(grid).points;
    } else {
        points = load_points_file(cfg.dataset.path, cfg.dataset.has_labels);
    }

    Partition part;
    const std::uint64_t pseed = cfg.partition.seed.value_or(sweep_seed);
    switch (cfg.partition.kind) {
    case PartitionSpec::Kind::by_beta: {
        const Bounds box = cfg.dataset.kind == DatasetSpec::Kind::grid
                               ? square_bounds(grid_field_half_extent(grid), points.d)
                               : bounding_box(points);
        Rng lrng = make_rng(pseed, Stream::locations);
        const PointSet locations = uniform_locations(cfg.partition.clients, box, lrng);
        Rng prng = make_rng(pseed, Stream::partition);
        part = distribute_by_beta(points, locations, cfg.partition.beta, prng);
        break;
    }
    case PartitionSpec::Kind::fixed_clusters: {
        Rng prng = make_rng(pseed, Stream::partition);
        part = distribute_fixed_clusters(points, cfg.partition.clusters_per_client,
                                         prng);
        break;
    }
    case PartitionSpec::Kind::from_file:
        part = load_partition_file(cfg.partition.path, points.n);
        break;
    }
    return {std::move(points), std::move(part)};
}

SeedData build_seed_data(const ExperimentConfig& cfg, std::uint64_t sweep_seed) {
    auto [points, part] = build_instance(cfg, sweep_seed);
    std::vector<PointSet> shards = split_by_client(points, part);

    SeedData sd;
    sd.pooled.d = points.d;
    for (PointSet& shard : shards) {
        if (shard.n == 0) continue;
        sd.offsets.push_back(static_cast<std::size_t>(sd.pooled.n));
        for (int i = 0; i < shard.n; ++i) sd.pooled.push_row(shard.point(i));
        if (shard.has_labels())
            sd.truth.insert(sd.truth.end(), shard.labels.begin(), shard.labels.end());
        sd.live.push_back(std::move(shard));
    }
    return sd;
}

std::vector<int> predicted_labels(const ClusterSet& model, const SeedData& sd) {
    std::vector<int> pred;
    pred.reserve(static_cast<std::size_t>(sd.pooled.n));
    for (const PointSet& shard : sd.live) {
        const std::vector<int> a = assign(shard, model).assignment;
        pred.insert(pred.end(), a.begin(), a.end());
    }
    return pred;
}

// a metric can be undefined for a degenerate model (one populated
// cluster); the row is kept and the value recorded as NaN
template <class F> double guard_undefined(F&& compute) {
    try {
        return compute();
    } catch (const metric_undefined&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

RoundMetrics evaluate(const ClusterSet& model, const SeedData& sd,
                      const std::vector<std::string>& metrics) {
    const std::vector<int> pred = predicted_labels(model, sd);
    RoundMetrics out;
    for (const std::string& metric : metrics) {
        double value = 0.0;
        if (metric == "ari") {
            value = ari(pred, sd.truth);
        } else if (metric == "silhouette") {
            value = guard_undefined([&] { return silhouette(sd.pooled, pred); });
        } else if (metric == "simplified_silhouette") {
            value = guard_undefined([&] {
                std::vector<SilhouettePartial> parts;
                for (std::size_t c = 0; c < sd.live.size(); ++c) {
                    const auto begin = pred.begin() + static_cast<std::ptrdiff_t>(
                                                          sd.offsets[c]);
                    const std::vector<int> labels(begin, begin + sd.live[c].n);
                    parts.push_back(
                        simplified_silhouette_partial(sd.live[c], labels, model));
                }
                return combine_silhouette(parts);
            });
        } else { // inertia
            for (const PointSet& shard : sd.live)
                value += weighted_inertia(shard, {}, model);
        }
        out.emplace_back(metric, value);
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void ensure_parent_dir(const std::filesystem::path& path) {
    const std::filesystem::path dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error(path, "cannot open file");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(path, std::string("not valid JSON: ") + e.what());
    }
    const Parser p{path};
    p.as_object(root, "top level");
    p.check_keys(root, "",
                 {"dataset", "partition", "methods", "federation", "oneshot",
                  "metrics", "seeds", "output", "include_timing"});
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    ExperimentConfig cfg;
    cfg.dataset = parse_dataset(p, find(root, "dataset"), base);
    cfg.partition = parse_partition(p, find(root, "partition"), base);
    cfg.methods = parse_name_list(p, root, "methods", {"fkm", "central", "oneshot"});
    cfg.metrics = parse_name_list(
        p, root, "metrics", {"ari", "silhouette", "simplified_silhouette", "inertia"});

    if (const json* j = find(root, "federation")) {
        p.as_object(*j, "federation");
        p.check_keys(*j, "federation",
                     {"K_g", "p", "local_iters", "max_rounds", "stop_tol"});
        if (const json* v = find(*j, "K_g")) cfg.fed.K_g = p.as_int(*v, "federation.K_g");
        if (const json* v = find(*j, "p")) cfg.fed.p = p.as_int(*v, "federation.p");
        if (const json* v = find(*j, "local_iters"))
            cfg.fed.local_iters = p.as_int(*v, "federation.local_iters");
        if (const json* v = find(*j, "max_rounds"))
            cfg.fed.max_rounds = p.as_int(*v, "federation.max_rounds");
        if (const json* v = find(*j, "stop_tol"))
            cfg.fed.stop_tol = p.as_number(*v, "federation.stop_tol");
    }
    try {
        cfg.fed.validate();
    } catch (const std::invalid_argument& e) {
        fail(path, "federation", e.what());
    }

    if (const json* j = find(root, "oneshot")) {
        p.as_object(*j, "oneshot");
        p.check_keys(*j, "oneshot", {"K_l", "sweep", "weighted"});
        if (const json* v = find(*j, "K_l")) {
            cfg.oneshot.K_l = p.as_int(*v, "oneshot.K_l");
            if (*cfg.oneshot.K_l < 1) fail(path, "oneshot.K_l", "must be at least 1");
        }
        if (const json* v = find(*j, "sweep")) {
            p.as_array(*v, "oneshot.sweep");
            for (std::size_t i = 0; i < v->size(); ++i) {
                const std::string field = "oneshot.sweep[" + std::to_string(i) + "]";
                const int c = p.as_int((*v)[i], field);
                if (c < 1) fail(path, field, "must be at least 1");
                cfg.oneshot.sweep.push_back(c);
            }
        }
        if (const json* v = find(*j, "weighted"))
            cfg.oneshot.weighted = p.as_bool(*v, "oneshot.weighted");
        if (cfg.oneshot.K_l && !cfg.oneshot.sweep.empty())
            fail(path, "oneshot", "K_l and sweep are mutually exclusive");
    }

    const json* jseeds = find(root, "seeds");
    if (!jseeds) fail(path, "seeds", "required");
    p.as_array(*jseeds, "seeds");
    for (std::size_t i = 0; i < jseeds->size(); ++i) {
        const std::string field = "seeds[" + std::to_string(i) + "]";
        const std::uint64_t s = p.as_seed((*jseeds)[i], field);
        if (std::find(cfg.seeds.begin(), cfg.seeds.end(), s) != cfg.seeds.end())
            fail(path, field, "seed " + std::to_string(s) + " listed twice");
        cfg.seeds.push_back(s);
    }
    if (cfg.seeds.empty()) fail(path, "seeds", "must not be empty");

    const json* joutput = find(root, "output");
    if (!joutput) fail(path, "output", "required");
    const std::filesystem::path rel(p.as_string(*joutput, "output"));
    cfg.output = (rel.is_absolute() ? rel : base / rel).string();

    if (const json* v = find(root, "include_timing"))
        cfg.include_timing = p.as_bool(*v, "include_timing");

    // cross-field rules, all reported before any run starts
    const bool labeled =
        cfg.dataset.kind == DatasetSpec::Kind::grid || cfg.dataset.has_labels;
    if (has(cfg.metrics, "ari") && !labeled)
        fail(path, "metrics", "ari requires a dataset with ground-truth labels");
    if (cfg.partition.kind == PartitionSpec::Kind::fixed_clusters && !labeled)
        fail(path, "partition.type",
             "fixed_clusters deals ground-truth clusters, so the dataset needs labels");
    if (has(cfg.methods, "oneshot") && !cfg.oneshot.sweep.empty() && !labeled)
        fail(path, "oneshot.sweep",
             "the sweep is scored by ari, which requires ground-truth labels");

    cfg.resolved_json = echo_config(cfg, root).dump(2);
    return cfg;
}

bool operator==(const ResultRecord& a, const ResultRecord& b) {
    const auto same = [](double x, double y) {
        return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y) ||
               (std::isnan(x) && std::isnan(y));
    };
    return a.method == b.method && a.seed == b.seed && a.round == b.round &&
           a.metric == b.metric && same(a.value, b.value) &&
           same(a.wall_ms, b.wall_ms);
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
    using clock = std::chrono::steady_clock;
    std::vector<ResultRecord> records;

    for (const std::uint64_t seed : cfg.seeds) {
        const SeedData sd = build_seed_data(cfg, seed);

        for (const std::string& method : cfg.methods) {
            const auto t0 = clock::now();
            std::vector<ResultRecord> rows;

            if (method == "fkm") {
                FedConfig fed = cfg.fed;
                fed.seed = seed;
                const RoundHistory hist =
                    run_federated(sd.live, fed, [&](const GlobalModel& gm) {
                        return evaluate(gm.means, sd, cfg.metrics);
                    });
                for (std::size_t r = 0; r < hist.metrics.size(); ++r)
                    for (const auto& [name, value] : hist.metrics[r])
                        rows.push_back({method, seed, hist.models[r].round, name,
                                        value, 0.0});
            } else if (method == "central") {
                const KmeansResult fit = central_kmeans(sd.live, cfg.fed.K_g, seed);
                for (const auto& [name, value] : evaluate(fit.clusters, sd, cfg.metrics))
                    rows.push_back({method, seed, final_round, name, value, 0.0});
            } else { // oneshot
                ClusterSet model;
                if (cfg.oneshot.sweep.empty()) {
                    model = oneshot(sd.live, cfg.oneshot.K_l.value_or(cfg.fed.K_g),
                                    cfg.fed.K_g, cfg.oneshot.weighted, seed);
                } else {
                    model = oneshot_informed(
                                sd.live, cfg.oneshot.sweep, cfg.fed.K_g,
                                cfg.oneshot.weighted, seed,
                                [&](const ClusterSet& cs) {
                                    return ari(predicted_labels(cs, sd), sd.truth);
                                })
                                .clusters;
                }
                for (const auto& [name, value] : evaluate(model, sd, cfg.metrics))
                    rows.push_back({method, seed, final_round, name, value, 0.0});
            }

            const double wall_ms =
                std::chrono::duration<double, std::milli>(clock::now() - t0).count();
            for (ResultRecord& r : rows) r.wall_ms = wall_ms;
            records.insert(records.end(), std::make_move_iterator(rows.begin()),
                           std::make_move_iterator(rows.end()));
        }
    }

    // canonical order whatever the execution order was; final rows last
    std::sort(records.begin(), records.end(),
              [](const ResultRecord& a, const ResultRecord& b) {
                  const auto key = [](const ResultRecord& r) {
                      return std::tuple(
                          std::string_view(r.method), r.seed,
                          r.round == final_round ? std::numeric_limits<int>::max()
                                                 : r.round,
                          std::string_view(r.metric));
                  };
                  return key(a) < key(b);
              });
    return records;
}

void emit_results(const std::vector<ResultRecord>& records, const std::string& path,
                  ResultFormat format, const ExperimentConfig& cfg) {
    if (records.empty())
        throw std::invalid_argument("emit_results: no records to write");
    ensure_parent_dir(path);
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");

    const auto round_text = [](int round) {
        return round == final_round ? std::string("final") : std::to_string(round);
    };

    if (format == ResultFormat::tabular) {
        out << "method,seed,round,metric,value";
        if (cfg.include_timing) out << ",wall_ms";
        out << '\n';
        for (const ResultRecord& r : records) {
            out << r.method << ',' << r.seed << ',' << round_text(r.round) << ','
                << r.metric << ',' << format_double(r.value);
            if (cfg.include_timing) out << ',' << format_double(r.wall_ms);
            out << '\n';
        }
    } else {
        json doc;
        doc["format"] = "fkm-results/1";
        doc["config"] = json::parse(cfg.resolved_json);
        json rows = json::array();
        for (const ResultRecord& r : records) {
            json row{{"method", r.method},
                     {"seed", r.seed},
                     {"round", r.round == final_round ? json("final") : json(r.round)},
                     {"metric", r.metric},
                     {"value", r.value}};
            if (cfg.include_timing) row["wall_ms"] = r.wall_ms;
            rows.push_back(std::move(row));
        }
        doc["records"] = std::move(rows);
        out << doc.dump(2) << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<ResultRecord> read_results(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": not valid JSON: " + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != "fkm-results/1")
        throw std::runtime_error(path + ": not a results document");
    const auto rows = doc.find("records");
    if (rows == doc.end() || !rows->is_array())
        throw std::runtime_error(path + ": missing records array");

    std::vector<ResultRecord> out;
    for (const json& row : *rows) {
        if (!row.is_object()) throw std::runtime_error(path + ": malformed record");
        ResultRecord r;
        try {
            r.method = row.at("method").get<std::string>();
            r.seed = row.at("seed").get<std::uint64_t>();
            const json& round = row.at("round");
            r.round = round.is_string() ? final_round : round.get<int>();
            r.metric = row.at("metric").get<std::string>();
            const json& value = row.at("value");
            r.value = value.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                      : value.get<double>();
            if (const auto wall = row.find("wall_ms"); wall != row.end())
                r.wall_ms = wall->get<double>();
        } catch (const json::exception& e) {
            throw std::runtime_error(path + ": malformed record: " + e.what());
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::pair<std::string, std::string> generate_data_files(const ExperimentConfig& cfg) {
    const auto [points, part] = build_instance(cfg, cfg.seeds.front());
    const std::string points_path = cfg.output + ".points.csv";
    const std::string partition_path = cfg.output + ".partition.csv";
    ensure_parent_dir(points_path);
    save_points_file(points_path, points, points.has_labels());
    save_partition_file(partition_path, part);
    return {points_path, partition_path};
}

} // namespace fedkm
