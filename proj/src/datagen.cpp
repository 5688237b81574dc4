#include "fedkm/datagen.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "fedkm/errors.hpp"
#include "fedkm/kernels.hpp"

namespace fedkm {

void Partition::validate(int n_points) const {
    if (static_cast<int>(client_of.size()) != n_points)
        throw std::invalid_argument("partition size differs from point count");
    if (n_clients < 1) throw std::invalid_argument("partition needs at least one client");
    for (const int c : client_of)
        if (c < 0 || c >= n_clients)
            throw std::invalid_argument("partition contains an out-of-range client index");
}

std::vector<std::vector<int>> Partition::by_client() const {
    std::vector<std::vector<int>> out(n_clients);
    for (std::size_t i = 0; i < client_of.size(); ++i)
        out[client_of[i]].push_back(static_cast<int>(i));
    return out;
}

void GridSpec::validate() const {
    if (centers_per_side < 1 || points_per_cluster < 1 || spacing <= 0.0 || sigma < 0.0)
        throw std::invalid_argument("grid spec fields must be positive (sigma may be 0)");
}

GridDataset make_grid_dataset(const GridSpec& spec) {
    spec.validate();
    const int cps = spec.centers_per_side;
    const int k = cps * cps;

    GridDataset out;
    out.true_means.d = 2;
    for (int cy = 0; cy < cps; ++cy)
        for (int cx = 0; cx < cps; ++cx) {
            const double x = (cx + 0.5 * (1 - cps)) * spec.spacing;
            const double y = (cy + 0.5 * (1 - cps)) * spec.spacing;
            out.true_means.push_mean(std::array<double, 2>{x, y}, spec.points_per_cluster);
        }

    Rng rng = make_rng(spec.seed, Stream::dataset);
    std::normal_distribution<double> noise(0.0, spec.sigma > 0.0 ? spec.sigma : 1.0);
    out.points.d = 2;
    out.points.labels.reserve(static_cast<std::size_t>(k) * spec.points_per_cluster);
    for (int c = 0; c < k; ++c) {
        const double* center = out.true_means.mean(c);
        for (int i = 0; i < spec.points_per_cluster; ++i) {
            std::array<double, 2> p{center[0], center[1]};
            if (spec.sigma > 0.0) {
                p[0] += noise(rng);
                p[1] += noise(rng);
            }
            out.points.push_row(p);
            out.points.labels.push_back(c);
        }
    }
    return out;
}

double grid_field_half_extent(const GridSpec& spec) {
    return (spec.centers_per_side + 1) * spec.spacing / 2.0;
}

Partition distribute_by_beta(const PointSet& points, const PointSet& client_locations,
                             double beta, Rng& rng) {
    points.validate();
    client_locations.validate();
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (points.d != client_locations.d)
        throw std::invalid_argument("client locations dimension differs from points");

    const int n_clients = client_locations.n;
    Partition part;
    part.n_clients = n_clients;
    part.client_of.resize(points.n);

    std::vector<int> claimants;
    for (int i = 0; i < points.n; ++i) {
        claimants.clear();
        for (int c = 0; c < n_clients; ++c) {
            const double dist = std::sqrt(
                kernels::sq_dist(points.row(i), client_locations.row(c), points.d));
            std::bernoulli_distribution claim(claim_probability(dist, beta));
            if (claim(rng)) claimants.push_back(c);
        }
        if (claimants.empty()) {
            part.client_of[i] = kernels::nearest_mean(points.row(i),
                                                      client_locations.values.data(),
                                                      n_clients, points.d)
                                    .first;
        } else if (claimants.size() == 1) {
            part.client_of[i] = claimants.front();
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, claimants.size() - 1);
            part.client_of[i] = claimants[pick(rng)];
        }
    }
    return part;
}

Partition distribute_fixed_clusters(const PointSet& points,
                                    const std::vector<int>& clusters_per_client,
                                    Rng& rng) {
    points.validate();
    if (!points.has_labels())
        throw std::invalid_argument("fixed-cluster split needs ground-truth labels");
    if (clusters_per_client.empty())
        throw std::invalid_argument("fixed-cluster split needs at least one client");

    const std::set<int> label_set(points.labels.begin(), points.labels.end());
    const std::vector<int> all_labels(label_set.begin(), label_set.end());
    const int total = static_cast<int>(all_labels.size());
    const int n_clients = static_cast<int>(clusters_per_client.size());

    int requested = 0;
    for (const int r : clusters_per_client) {
        if (r < 1 || r > total)
            throw std::invalid_argument(
                "clusters per client must be in [1, total cluster count]");
        requested += r;
    }
    if (requested < total)
        throw std::invalid_argument(
            "clusters per client sum below the total cluster count: some cluster "
            "would stay unassigned");

    // deal ids without replacement, biggest requests first, then let the
    // remaining requests re-use ids that are already out
    std::vector<int> order(n_clients);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return clusters_per_client[a] > clusters_per_client[b];
    });
    std::vector<int> pool = all_labels;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t next = 0;

    std::vector<std::vector<int>> holders_of(total); // label position -> clients
    for (int c : order) {
        std::vector<int> got;
        const int want = clusters_per_client[c];
        while (static_cast<int>(got.size()) < want && next < pool.size())
            got.push_back(pool[next++]);
        if (static_cast<int>(got.size()) < want) {
            // top up with ids this client does not hold yet
            std::vector<int> rest;
            for (const int l : all_labels)
                if (std::find(got.begin(), got.end(), l) == got.end())
                    rest.push_back(l);
            std::shuffle(rest.begin(), rest.end(), rng);
            got.insert(got.end(), rest.begin(),
                       rest.begin() + (want - static_cast<int>(got.size())));
        }
        for (const int l : got) {
            const auto at = std::lower_bound(all_labels.begin(), all_labels.end(), l);
            holders_of[at - all_labels.begin()].push_back(c);
        }
    }

    Partition part;
    part.n_clients = n_clients;
    part.client_of.resize(points.n);
    for (int i = 0; i < points.n; ++i) {
        const auto at =
            std::lower_bound(all_labels.begin(), all_labels.end(), points.labels[i]);
        const std::vector<int>& holders = holders_of[at - all_labels.begin()];
        if (holders.size() == 1) {
            part.client_of[i] = holders.front();
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, holders.size() - 1);
            part.client_of[i] = holders[pick(rng)];
        }
    }
    return part;
}

Bounds bounding_box(const PointSet& points) {
    points.validate();
    Bounds b;
    b.lo.assign(points.d, std::numeric_limits<double>::infinity());
    b.hi.assign(points.d, -std::numeric_limits<double>::infinity());
    for (int i = 0; i < points.n; ++i)
        for (int j = 0; j < points.d; ++j) {
            b.lo[j] = std::min(b.lo[j], points.row(i)[j]);
            b.hi[j] = std::max(b.hi[j], points.row(i)[j]);
        }
    return b;
}

Bounds square_bounds(double half_extent, int d) {
    Bounds b;
    b.lo.assign(d, -half_extent);
    b.hi.assign(d, half_extent);
    return b;
}

PointSet uniform_locations(int n, const Bounds& bounds, Rng& rng) {
    if (n < 1) throw std::invalid_argument("need at least one client location");
    const int d = static_cast<int>(bounds.lo.size());
    PointSet out;
    out.d = d;
    std::vector<double> row(d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            std::uniform_real_distribution<double> coord(bounds.lo[j], bounds.hi[j]);
            row[j] = coord(rng);
        }
        out.push_row(row);
    }
    return out;
}

std::pair<PointSet, Partition> subsample_per_client(const PointSet& points,
                                                    const Partition& part,
                                                    const std::vector<int>& caps,
                                                    Rng& rng) {
    part.validate(points.n);
    if (static_cast<int>(caps.size()) != part.n_clients)
        throw std::invalid_argument("one cap per client required");

    std::vector<char> keep(points.n, 0);
    for (int c = 0; c < part.n_clients; ++c) {
        std::vector<int> mine;
        for (int i = 0; i < points.n; ++i)
            if (part.client_of[i] == c) mine.push_back(i);
        if (caps[c] < 0 || static_cast<int>(mine.size()) <= caps[c]) {
            for (const int i : mine) keep[i] = 1;
        } else {
            std::shuffle(mine.begin(), mine.end(), rng);
            for (int t = 0; t < caps[c]; ++t) keep[mine[t]] = 1;
        }
    }

    PointSet pts;
    pts.d = points.d;
    Partition sub;
    sub.n_clients = part.n_clients;
    for (int i = 0; i < points.n; ++i) {
        if (!keep[i]) continue;
        pts.push_row(points.point(i));
        if (points.has_labels()) pts.labels.push_back(points.labels[i]);
        sub.client_of.push_back(part.client_of[i]);
    }
    if (pts.n == 0) throw std::invalid_argument("subsampling removed every point");
    return {std::move(pts), std::move(sub)};
}

std::vector<PointSet> split_by_client(const PointSet& points, const Partition& part) {
    part.validate(points.n);
    std::vector<PointSet> out(part.n_clients);
    for (auto& ps : out) ps.d = points.d;
    for (int i = 0; i < points.n; ++i) {
        PointSet& ps = out[part.client_of[i]];
        ps.push_row(points.point(i));
        if (points.has_labels()) ps.labels.push_back(points.labels[i]);
    }
    return out;
}

namespace {

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && !cell.empty();
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

PointSet load_points_file(const std::filesystem::path& path, bool has_labels) {
    std::ifstream in(path);
    if (!in) throw parse_error(path.string(), 0, "cannot open file");

    PointSet out;
    std::string line;
    int lineno = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv(line);

        if (!saw_data) {
            // allow one header row: skip the first line iff it does not parse
            double probe;
            if (!parse_double(cells.front(), probe)) {
                if (lineno == 1) continue;
                throw parse_error(path.string(), lineno, "non-numeric cell '" +
                                                             cells.front() + "'");
            }
        }

        const int expect_cols = has_labels ? out.d + 1 : out.d;
        if (saw_data && static_cast<int>(cells.size()) != expect_cols)
            throw parse_error(path.string(), lineno,
                              "expected " + std::to_string(expect_cols) +
                                  " columns, found " + std::to_string(cells.size()));
        if (!saw_data) {
            const int cols = static_cast<int>(cells.size());
            out.d = has_labels ? cols - 1 : cols;
            if (out.d < 1)
                throw parse_error(path.string(), lineno, "no value columns found");
        }

        std::vector<double> row(out.d);
        for (int j = 0; j < out.d; ++j)
            if (!parse_double(cells[j], row[j]))
                throw parse_error(path.string(), lineno,
                                  "non-numeric cell '" + cells[j] + "'");
        if (has_labels) {
            const std::string& cell = cells.back();
            int label = 0;
            const auto [ptr, ec] =
                std::from_chars(cell.data(), cell.data() + cell.size(), label);
            if (ec != std::errc{} || ptr != cell.data() + cell.size())
                throw parse_error(path.string(), lineno,
                                  "label column must be an integer, found '" + cell +
                                      "'");
            out.labels.push_back(label);
        }
        out.push_row(row);
        saw_data = true;
    }
    if (!saw_data) throw parse_error(path.string(), lineno, "no data rows");
    out.validate();
    return out;
}

void save_points_file(const std::filesystem::path& path, const PointSet& points,
                      bool with_labels) {
    points.validate();
    if (with_labels && !points.has_labels())
        throw std::invalid_argument("point set has no labels to save");
    std::ofstream out(path);
    if (!out) throw parse_error(path.string(), 0, "cannot open file for writing");
    for (int i = 0; i < points.n; ++i) {
        for (int j = 0; j < points.d; ++j) {
            if (j) out << ',';
            out << format_double(points.row(i)[j]);
        }
        if (with_labels) out << ',' << points.labels[i];
        out << '\n';
    }
    if (!out) throw parse_error(path.string(), 0, "write failed");
}

Partition load_partition_file(const std::filesystem::path& path, int n_points) {
    std::ifstream in(path);
    if (!in) throw parse_error(path.string(), 0, "cannot open file");
    Partition part;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string cell = trim(line);
        if (cell.empty()) continue;
        int client = 0;
        const auto [ptr, ec] =
            std::from_chars(cell.data(), cell.data() + cell.size(), client);
        if (ec != std::errc{} || ptr != cell.data() + cell.size() || client < 0)
            throw parse_error(path.string(), lineno,
                              "expected a nonnegative client index, found '" + cell +
                                  "'");
        part.client_of.push_back(client);
        part.n_clients = std::max(part.n_clients, client + 1);
    }
    if (static_cast<int>(part.client_of.size()) != n_points)
        throw parse_error(path.string(), lineno,
                          "partition has " + std::to_string(part.client_of.size()) +
                              " rows but the dataset has " + std::to_string(n_points) +
                              " points");
    part.validate(n_points);
    return part;
}

void save_partition_file(const std::filesystem::path& path, const Partition& part) {
    std::ofstream out(path);
    if (!out) throw parse_error(path.string(), 0, "cannot open file for writing");
    for (const int c : part.client_of) out << c << '\n';
    if (!out) throw parse_error(path.string(), 0, "write failed");
}

} // namespace fedkm
