#ifndef POSTVRP_METRIC_HPP
#define POSTVRP_METRIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "model.hpp"
#include "sampling.hpp"
#include "text.hpp"

namespace postvrp {

inline constexpr double unreachable = std::numeric_limits<double>::infinity();

/// Undirected adjacency in compressed row form.
struct Adjacency {
    std::vector<std::size_t> offsets; // size |V| + 1
    std::vector<std::pair<std::size_t, double>> arcs; // (head, weight)

    explicit Adjacency(const StreetGraph& g) : offsets(g.vertices.size() + 1, 0), arcs(2 * g.edges.size()) {
        for (const Edge& e : g.edges) {
            ++offsets[e.u + 1];
            ++offsets[e.v + 1];
        }
        for (std::size_t i = 1; i < offsets.size(); ++i)
            offsets[i] += offsets[i - 1];
        std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
        for (const Edge& e : g.edges) {
            arcs[fill[e.u]++] = {e.v, e.weight};
            arcs[fill[e.v]++] = {e.u, e.weight};
        }
    }

    std::size_t vertices() const { return offsets.size() - 1; }
};

/// Single-source shortest path lengths; unreachable vertices get +inf.
inline std::vector<double> dijkstra(const Adjacency& adj, std::size_t source) {
    std::vector<double> dist(adj.vertices(), unreachable);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist.at(source) = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u])
            continue;
        for (std::size_t k = adj.offsets[u]; k < adj.offsets[u + 1]; ++k) {
            auto [v, w] = adj.arcs[k];
            double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                queue.push({nd, v});
            }
        }
    }
    return dist;
}

inline std::vector<double> dijkstra(const StreetGraph& g, std::size_t source) {
    return dijkstra(Adjacency(g), source);
}

/// Crossing widths per street, in length units.
inline std::vector<double> street_widths(const StreetModel& model) {
    std::vector<double> w;
    w.reserve(model.streets.size());
    for (const auto& s : model.streets)
        w.push_back(crossing_width(model, s));
    return w;
}

/// Width of the shared street when a and b sit on opposite sides of it, else 0.
inline double cross_cost(const DeliveryLocation& a, const DeliveryLocation& b, const StreetGraph& g,
                         std::span<const double> widths) {
    const std::size_t sa = g.edges.at(a.edge).street;
    const std::size_t sb = g.edges.at(b.edge).street;
    if (a.side != b.side && sa == sb)
        return widths[sa];
    return 0.0;
}

inline double cross_cost(const DeliveryLocation& a, const DeliveryLocation& b, const StreetGraph& g,
                         const StreetModel& model) {
    const std::size_t sa = g.edges.at(a.edge).street;
    const std::size_t sb = g.edges.at(b.edge).street;
    if (a.side != b.side && sa == sb)
        return crossing_width(model, sa);
    return 0.0;
}

/**
 * Pairwise delivery weights w(a, b).
 *
 * Deliveries on the same edge use the direct distance along the edge unless
 * the way round through its endpoints is shorter. For
 * different edges the shortest path through the graph with both deliveries
 * spliced in equals the best of the four endpoint combinations
 *
 *     offset(a, p) + dist(p, q) + offset(b, q),
 *
 * so only shortest-path rows from endpoints of delivery-bearing edges are
 * precomputed and each query is O(1). The n x n matrix is never built.
 */
class DistanceOracle {
public:
    DistanceOracle(const StreetGraph& graph, DeliverySet deliveries, std::vector<double> widths, double beta,
                   unsigned workers = 0)
        : edges_(graph.edges), deliveries_(std::move(deliveries)), widths_(std::move(widths)), beta_(beta),
          row_of_(graph.vertices.size(), npos) {
        for (const auto& d : deliveries_.deliveries) {
            if (d.edge >= edges_.size())
                throw Error("delivery references edge " + std::to_string(d.edge) + " outside the graph");
            if (!(d.alpha >= 0.0 && d.alpha <= 1.0))
                throw Error("delivery alpha outside [0, 1]");
        }
        for (const auto& e : edges_)
            if (e.street >= widths_.size())
                throw Error("edge references a street without a width");

        for (const auto& d : deliveries_.deliveries)
            for (std::size_t v : {edges_[d.edge].u, edges_[d.edge].v})
                if (row_of_[v] == npos) {
                    row_of_[v] = sources_.size();
                    sources_.push_back(v);
                }
        precompute(Adjacency(graph), workers);
    }

    static DistanceOracle from_model(const StreetModel& model, const StreetGraph& graph, DeliverySet deliveries,
                                     unsigned workers = 0) {
        return DistanceOracle(graph, std::move(deliveries), street_widths(model), model.beta, workers);
    }

    /// Number of deliveries including the depot.
    std::size_t size() const { return deliveries_.deliveries.size(); }
    double beta() const { return beta_; }
    const DeliverySet& deliveries() const { return deliveries_; }

    /// Shortest-path distance between two graph vertices; `from` must be an
    /// endpoint of some delivery's edge.
    double vertex_distance(std::size_t from, std::size_t to) const {
        std::size_t r = row_of_.at(from);
        if (r == npos)
            throw Error("vertex " + std::to_string(from) + " has no cached distances");
        return dist_[r * stride_ + to];
    }

    double cross(std::size_t a, std::size_t b) const {
        const auto& da = deliveries_.deliveries[a];
        const auto& db = deliveries_.deliveries[b];
        const std::size_t sa = edges_[da.edge].street;
        if (da.side != db.side && sa == edges_[db.edge].street)
            return widths_[sa];
        return 0.0;
    }

    /// w(a, b); zero on the diagonal.
    double weight(std::size_t a, std::size_t b) const {
        if (a == b)
            return 0.0;
        // Path sums are not bitwise symmetric in floating point; fix the order.
        if (a > b)
            std::swap(a, b);
        const auto& da = deliveries_.deliveries.at(a);
        const auto& db = deliveries_.deliveries.at(b);
        const Edge& ea = edges_[da.edge];
        const Edge& eb = edges_[db.edge];
        // On a shared edge the direct stretch is the answer for straight
        // edges; leaving through the endpoints only wins when an edge weight
        // exceeds the distance between its ends.
        double best = da.edge == db.edge ? std::abs(da.alpha - db.alpha) * ea.weight : unreachable;

        const double off_a[2] = {(1.0 - da.alpha) * ea.weight, da.alpha * ea.weight};
        const double off_b[2] = {(1.0 - db.alpha) * eb.weight, db.alpha * eb.weight};
        const std::size_t end_a[2] = {ea.u, ea.v};
        const std::size_t end_b[2] = {eb.u, eb.v};
        for (int i = 0; i < 2; ++i) {
            const double* row = &dist_[row_of_[end_a[i]] * stride_];
            for (int j = 0; j < 2; ++j)
                best = std::min(best, off_a[i] + row[end_b[j]] + off_b[j]);
        }
        if (best == unreachable)
            throw Error("no path between deliveries " + std::to_string(a) + " and " + std::to_string(b));
        return best + cross(a, b) + beta_;
    }

    double operator()(std::size_t a, std::size_t b) const { return weight(a, b); }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    void precompute(const Adjacency& adj, unsigned workers) {
        stride_ = adj.vertices();
        dist_.assign(sources_.size() * stride_, unreachable);
        if (workers == 0)
            workers = std::max(1u, std::thread::hardware_concurrency());
        workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, sources_.size())));
        auto run = [&](unsigned w) {
            for (std::size_t r = w; r < sources_.size(); r += workers) {
                auto d = dijkstra(adj, sources_[r]);
                std::copy(d.begin(), d.end(), dist_.begin() + static_cast<std::ptrdiff_t>(r * stride_));
            }
        };
        if (workers == 1) {
            run(0);
            return;
        }
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
    }

    std::vector<Edge> edges_;
    DeliverySet deliveries_;
    std::vector<double> widths_;
    double beta_;
    std::vector<std::size_t> row_of_;
    std::vector<std::size_t> sources_;
    std::size_t stride_ = 0;
    std::vector<double> dist_;
};

inline constexpr std::size_t default_matrix_cap = 12000;

/// Writes the (n+1) x (n+1) weight matrix: first line n+1, then one row per
/// delivery with `precision` decimals.
inline void write_matrix(std::ostream& out, const DistanceOracle& oracle, int precision,
                         std::size_t cap = default_matrix_cap) {
    const std::size_t n = oracle.size();
    if (n > cap)
        throw Error("matrix export is capped at " + std::to_string(cap) + " deliveries (instance has " +
                    std::to_string(n) + "); query the distance oracle instead");
    out << n << '\n';
    std::string row;
    for (std::size_t a = 0; a < n; ++a) {
        row.clear();
        for (std::size_t b = 0; b < n; ++b) {
            if (b)
                row += ' ';
            row += text::fixed(oracle.weight(a, b), precision);
        }
        row += '\n';
        out << row;
    }
}

inline std::string export_matrix(const DistanceOracle& oracle, int precision, std::size_t cap = default_matrix_cap) {
    std::ostringstream out;
    write_matrix(out, oracle, precision, cap);
    return out.str();
}

}

#endif
