#ifndef POSTVRP_TESTS_SUPPORT_HPP
#define POSTVRP_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <postvrp/postvrp.hpp>

namespace testing_support {

using namespace postvrp;

inline std::string data_path(const std::string& name) { return std::string(POSTVRP_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline StreetModel grid_model() { return parse_model(slurp(data_path("grid.model"))); }

/// Two-street-per-edge-free model used by small tests: one horizontal street.
inline std::string one_street_model(double width = 10.0) {
    return "MODEL 1\nBACKGROUND 200 100\nDEPOT 10 50\nBETA 0\nPRECISION 2\nPIXEL_VALUE 1\n"
           "ATTRIBUTE TYPE ONLY=1\n"
           "STREET \"Main\" WIDTH " +
           text::shortest(width) + " LEVELS ONLY CHAIN 0,50 200,50\n";
}

/// Random connected undirected graph on `nv` vertices. Edges get street ids
/// in [0, streets). With `integer` weights are whole numbers, else real.
inline StreetGraph random_graph(SplitMix64& rng, std::size_t nv, std::size_t extra_edges, std::size_t streets,
                                bool integer) {
    StreetGraph g;
    for (std::size_t i = 0; i < nv; ++i)
        g.vertices.push_back({rng.next_unit() * 100.0, rng.next_unit() * 100.0});
    auto weight = [&] { return integer ? static_cast<double>(1 + rng.next_u64() % 50) : 0.5 + rng.next_unit() * 50.0; };
    auto street = [&] { return static_cast<std::size_t>(rng.next_u64() % streets); };
    for (std::size_t v = 1; v < nv; ++v) {
        std::size_t u = rng.next_u64() % v;
        g.edges.push_back({u, v, street(), 0, weight()});
    }
    for (std::size_t i = 0; i < extra_edges; ++i) {
        std::size_t u = rng.next_u64() % nv;
        std::size_t v = rng.next_u64() % nv;
        if (u == v)
            continue;
        g.edges.push_back({u, v, street(), 0, weight()});
    }
    return g;
}

/// Textbook O(V^2) Dijkstra over an explicit edge list.
inline std::vector<double> plain_dijkstra(std::size_t nv, const std::vector<Edge>& edges, std::size_t src) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(nv, inf);
    std::vector<bool> done(nv, false);
    d[src] = 0.0;
    for (std::size_t it = 0; it < nv; ++it) {
        std::size_t best = nv;
        for (std::size_t v = 0; v < nv; ++v)
            if (!done[v] && d[v] < inf && (best == nv || d[v] < d[best]))
                best = v;
        if (best == nv)
            break;
        done[best] = true;
        for (const auto& e : edges) {
            if (e.u == best && d[best] + e.weight < d[e.v])
                d[e.v] = d[best] + e.weight;
            if (e.v == best && d[best] + e.weight < d[e.u])
                d[e.u] = d[best] + e.weight;
        }
    }
    return d;
}

inline std::vector<std::vector<double>> floyd_warshall(const StreetGraph& g) {
    const std::size_t n = g.vertices.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i)
        d[i][i] = 0.0;
    for (const auto& e : g.edges) {
        d[e.u][e.v] = std::min(d[e.u][e.v], e.weight);
        d[e.v][e.u] = std::min(d[e.v][e.u], e.weight);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j])
                    d[i][j] = d[i][k] + d[k][j];
    return d;
}

/**
 * Weight between two deliveries computed on an explicitly built augmented
 * graph: the delivery edges are cut at the delivery points, which become new
 * vertices, and a plain Dijkstra runs from one to the other.
 */
inline double augmented_weight(const StreetGraph& g, const DeliveryLocation& a, const DeliveryLocation& b,
                               const std::vector<double>& widths, double beta) {
    if (a == b)
        return 0.0;
    std::size_t nv = g.vertices.size();
    const std::size_t va = nv++;
    const std::size_t vb = nv++;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        // Cut points on this edge, measured as distance from u.
        std::vector<std::pair<double, std::size_t>> cuts;
        if (a.edge == i)
            cuts.push_back({(1.0 - a.alpha) * e.weight, va});
        if (b.edge == i)
            cuts.push_back({(1.0 - b.alpha) * e.weight, vb});
        if (cuts.empty()) {
            edges.push_back(e);
            continue;
        }
        std::sort(cuts.begin(), cuts.end());
        std::size_t prev = e.u;
        double at = 0.0;
        for (auto [pos, v] : cuts) {
            edges.push_back({prev, v, e.street, 0, pos - at});
            prev = v;
            at = pos;
        }
        edges.push_back({prev, e.v, e.street, 0, e.weight - at});
    }
    double path = plain_dijkstra(nv, edges, va)[vb];
    double cross = 0.0;
    if (a.side != b.side && g.edges[a.edge].street == g.edges[b.edge].street)
        cross = widths[g.edges[a.edge].street];
    return path + cross + beta;
}

/// Random symmetric weight table over ids 0..n with zero diagonal.
struct TableWeight {
    std::vector<std::vector<double>> w;
    double operator()(std::size_t a, std::size_t b) const { return w[a][b]; }
};

inline TableWeight random_euclidean(SplitMix64& rng, std::size_t n, double scale = 100.0) {
    std::vector<Point> p(n + 1);
    for (auto& q : p)
        q = {rng.next_unit() * scale, rng.next_unit() * scale};
    TableWeight t;
    t.w.assign(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j)
            t.w[i][j] = i == j ? 0.0 : distance(p[i], p[j]);
    return t;
}

}

#endif
