#ifndef POSTVRP_GEOMETRY_HPP
#define POSTVRP_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "model.hpp"
#include "point.hpp"
#include "text.hpp"

namespace postvrp {

/// Vertices closer than this (in length units) are the same vertex.
inline constexpr double merge_tolerance = 1e-6;

struct Segment {
    Point a;
    Point b;
};

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    std::size_t street = 0;
    std::size_t segment = 0; // index of the chain segment this edge was split from
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Embedded street graph. Coordinates and weights are in length units
/// (pixels times the model's pixel value).
struct StreetGraph {
    std::vector<Point> vertices;
    std::vector<Edge> edges;

    friend bool operator==(const StreetGraph&, const StreetGraph&) = default;
};

enum class Side : std::uint8_t { plus, minus };

inline char side_char(Side s) noexcept { return s == Side::plus ? '+' : '-'; }

/// A point on an edge: position = alpha * u + (1 - alpha) * v.
struct DeliveryLocation {
    std::size_t edge = 0;
    double alpha = 0.0;
    Side side = Side::plus;

    friend bool operator==(const DeliveryLocation&, const DeliveryLocation&) = default;
};

inline Point position(const StreetGraph& g, const DeliveryLocation& d) {
    const Edge& e = g.edges.at(d.edge);
    return d.alpha * g.vertices[e.u] + (1.0 - d.alpha) * g.vertices[e.v];
}

struct SegmentContact {
    enum class Kind { none, point, overlap };
    Kind kind = Kind::none;
    Point at;
};

/// Full classification of how two non-degenerate segments meet. Contacts
/// within `eps` snap to the nearest endpoint.
inline SegmentContact classify_contact(const Segment& s1, const Segment& s2, double eps = merge_tolerance) {
    using Kind = SegmentContact::Kind;
    const Point d1 = s1.b - s1.a;
    const Point d2 = s2.b - s2.a;
    const double len1 = norm(d1);
    const double len2 = norm(d2);
    const double denom = cross(d1, d2);

    if (std::abs(denom) <= 1e-12 * len1 * len2) {
        // Parallel: only collinear pairs can touch.
        if (std::abs(cross(d1, s2.a - s1.a)) / len1 > eps)
            return {};
        const double l2 = len1 * len1;
        double t0 = dot(s2.a - s1.a, d1) / l2;
        double t1 = dot(s2.b - s1.a, d1) / l2;
        if (t0 > t1)
            std::swap(t0, t1);
        const double lo = std::max(0.0, t0);
        const double hi = std::min(1.0, t1);
        const double gap = (hi - lo) * len1;
        if (gap < -eps)
            return {};
        if (gap > eps)
            return {Kind::overlap, {}};
        // Touching at one point: that point is an endpoint of both segments.
        Point p = s1.a + 0.5 * (lo + hi) * d1;
        for (Point q : {s1.a, s1.b, s2.a, s2.b})
            if (distance(p, q) <= eps)
                return {Kind::point, q};
        return {Kind::point, p};
    }

    const Point ac = s2.a - s1.a;
    const double t = cross(ac, d2) / denom;
    const double u = cross(ac, d1) / denom;
    const double tol_t = eps / len1;
    const double tol_u = eps / len2;
    if (t < -tol_t || t > 1.0 + tol_t || u < -tol_u || u > 1.0 + tol_u)
        return {};
    Point p;
    if (std::abs(t) <= tol_t)
        p = s1.a;
    else if (std::abs(t - 1.0) <= tol_t)
        p = s1.b;
    else if (std::abs(u) <= tol_u)
        p = s2.a;
    else if (std::abs(u - 1.0) <= tol_u)
        p = s2.b;
    else
        p = s1.a + t * d1;
    return {Kind::point, p};
}

/// The single point where two segments meet (crossing, T-junction or shared
/// endpoint); nullopt when disjoint or overlapping along a stretch.
inline std::optional<Point> segment_intersection(const Segment& s1, const Segment& s2, double eps = merge_tolerance) {
    auto c = classify_contact(s1, s2, eps);
    if (c.kind == SegmentContact::Kind::point)
        return c.at;
    return std::nullopt;
}

namespace detail {

/// Assigns ids to points, reusing the first registered id within `eps`.
class VertexMerger {
public:
    explicit VertexMerger(std::vector<Point>& out, double eps) : out_(out), eps_(eps) {}

    std::size_t id(Point p) {
        const std::int64_t cx = cell(p.x);
        const std::int64_t cy = cell(p.y);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = grid_.find(key(cx + dx, cy + dy));
                if (it == grid_.end())
                    continue;
                for (std::size_t v : it->second)
                    if (distance(out_[v], p) <= eps_)
                        return v;
            }
        out_.push_back(p);
        grid_[key(cx, cy)].push_back(out_.size() - 1);
        return out_.size() - 1;
    }

private:
    std::int64_t cell(double c) const { return static_cast<std::int64_t>(std::floor(c / eps_)); }
    static std::uint64_t key(std::int64_t x, std::int64_t y) {
        return (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(y);
    }

    std::vector<Point>& out_;
    double eps_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid_;
};

}

/**
 * Builds the street graph: every chain segment is split wherever it meets any
 * other segment, and points within `eps` are merged.
 *
 * Vertex ids follow first appearance when walking streets in model order,
 * segments along each chain, and split points by position along the segment;
 * edges are numbered in the same walk. The result depends only on the model.
 *
 * Intersections are found by a brute-force scan over all segment pairs with a
 * bounding-box filter. Collinear overlapping segments are rejected.
 */
inline StreetGraph build_graph(const StreetModel& model, double eps = merge_tolerance) {
    struct Seg {
        Segment s;
        std::size_t street;
        std::size_t index;
        double minx, miny, maxx, maxy;
    };
    std::vector<Seg> segs;
    for (std::size_t si = 0; si < model.streets.size(); ++si) {
        const auto& chain = model.streets[si].chain;
        for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
            Point a = model.pixel_value * chain[j];
            Point b = model.pixel_value * chain[j + 1];
            if (distance(a, b) <= eps)
                continue;
            segs.push_back({{a, b}, si, j, std::min(a.x, b.x) - eps, std::min(a.y, b.y) - eps,
                            std::max(a.x, b.x) + eps, std::max(a.y, b.y) + eps});
        }
    }
    if (segs.empty())
        throw ValidationError("degenerate model: every chain has zero length");

    struct Split {
        double t;
        Point p;
    };
    std::vector<std::vector<Split>> splits(segs.size());
    auto param = [](const Segment& s, Point p) {
        Point d = s.b - s.a;
        return dot(p - s.a, d) / dot(d, d);
    };
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const Seg& a = segs[i];
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            const Seg& b = segs[j];
            if (b.minx > a.maxx || b.maxx < a.minx || b.miny > a.maxy || b.maxy < a.miny)
                continue;
            auto c = classify_contact(a.s, b.s, eps);
            if (c.kind == SegmentContact::Kind::none)
                continue;
            if (c.kind == SegmentContact::Kind::overlap)
                throw ValidationError("streets '" + model.streets[a.street].name + "' and '" +
                                      model.streets[b.street].name + "' overlap along a collinear stretch");
            splits[i].push_back({param(a.s, c.at), c.at});
            splits[j].push_back({param(b.s, c.at), c.at});
        }
    }

    StreetGraph g;
    detail::VertexMerger merger(g.vertices, eps);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        auto& sp = splits[i];
        sp.push_back({0.0, segs[i].s.a});
        sp.push_back({1.0, segs[i].s.b});
        std::stable_sort(sp.begin(), sp.end(), [](const Split& l, const Split& r) {
            if (l.t != r.t)
                return l.t < r.t;
            if (l.p.x != r.p.x)
                return l.p.x < r.p.x;
            return l.p.y < r.p.y;
        });
        std::size_t prev = merger.id(sp.front().p);
        for (std::size_t k = 1; k < sp.size(); ++k) {
            std::size_t cur = merger.id(sp[k].p);
            if (cur == prev)
                continue;
            g.edges.push_back({prev, cur, segs[i].street, segs[i].index, distance(g.vertices[prev], g.vertices[cur])});
            prev = cur;
        }
    }
    return g;
}

/// Nearest point on the graph, as a delivery location on side plus. Ties go
/// to the lowest edge id.
inline DeliveryLocation attach_point(const StreetGraph& g, Point p) {
    if (g.edges.empty())
        throw Error("attach_point: graph has no edges");
    DeliveryLocation best;
    double best_dist = INFINITY;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Point u = g.vertices[g.edges[e].u];
        const Point v = g.vertices[g.edges[e].v];
        const Point d = v - u;
        double t = std::clamp(dot(p - u, d) / dot(d, d), 0.0, 1.0);
        double dist = distance(p, u + t * d);
        if (dist < best_dist) {
            best_dist = dist;
            best = {e, 1.0 - t, Side::plus};
        }
    }
    return best;
}

inline DeliveryLocation attach_depot(const StreetModel& model, const StreetGraph& g) {
    return attach_point(g, model.pixel_value * model.depot);
}

/// Debug listing: `V <id> <x> <y>` then `E <id> <u> <v> <street> <w>`.
inline std::string dump_graph(const StreetGraph& g) {
    std::string out;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        out += "V " + std::to_string(i) + " " + text::shortest(g.vertices[i].x) + " " +
               text::shortest(g.vertices[i].y) + "\n";
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        out += "E " + std::to_string(i) + " " + std::to_string(e.u) + " " + std::to_string(e.v) + " " +
               std::to_string(e.street) + " " + text::shortest(e.weight) + "\n";
    }
    return out;
}

}

#endif
