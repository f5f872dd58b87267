#ifndef POSTVRP_SYNTHETIC_HPP
#define POSTVRP_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "model.hpp"
#include "random.hpp"

namespace postvrp {

/// Region / Type / Zone attribute system with the expert penalty values used
/// for real-world post-office instances.
inline AttributeTable region_type_zone_attributes() {
    return {{
        {"REGION", {{"central", 1.0}, {"peripher", 0.75}, {"distant", 0.4}, {"isolated", 0.2}}},
        {"TYPE", {{"avenue", 1.0}, {"street", 0.75}, {"way", 0.4}, {"highway", 0.0}}},
        {"ZONE", {{"commercial", 1.0}, {"mixed", 0.75}, {"residential", 0.4}}},
    }};
}

struct SyntheticCityOptions {
    std::size_t rows = 46;
    std::size_t cols = 46;
    double spacing = 40.0; // pixels between lattice points
    double jitter = 6.0;   // max displacement of a lattice point, < spacing / 4
    std::size_t min_piece = 4;
    std::size_t max_piece = 10;
    double drop_probability = 0.3; // chance a lattice street piece is left out
    std::size_t diagonals = 4;     // long avenues crossing the lattice; the last one is a highway
    std::uint64_t seed = 1;
};

/**
 * Jittered-lattice city: every lattice row and column is cut into streets of
 * a few blocks each (some left out), plus long diagonal avenues that cross
 * the lattice and exercise corner detection. Streets are classified with the
 * Region/Type/Zone system by distance from the center.
 */
inline StreetModel make_synthetic_city(const SyntheticCityOptions& opt = {}) {
    SplitMix64 rng(opt.seed);
    const double margin = 2.0 * opt.spacing;
    StreetModel m;
    m.attributes = region_type_zone_attributes();
    m.background_width = std::ceil(2.0 * margin + static_cast<double>(opt.cols - 1) * opt.spacing);
    m.background_height = std::ceil(2.0 * margin + static_cast<double>(opt.rows - 1) * opt.spacing);
    m.depot = {m.background_width / 2.0, m.background_height / 2.0};
    m.beta = 5.0;
    m.pixel_value = 1.0;
    m.precision = 2;

    std::vector<std::vector<Point>> lattice(opt.rows, std::vector<Point>(opt.cols));
    for (std::size_t r = 0; r < opt.rows; ++r)
        for (std::size_t c = 0; c < opt.cols; ++c) {
            double jx = (2.0 * rng.next_unit() - 1.0) * opt.jitter;
            double jy = (2.0 * rng.next_unit() - 1.0) * opt.jitter;
            lattice[r][c] = {std::round((margin + static_cast<double>(c) * opt.spacing + jx) * 100.0) / 100.0,
                             std::round((margin + static_cast<double>(r) * opt.spacing + jy) * 100.0) / 100.0};
        }

    const Point center = m.depot;
    const double radius = std::hypot(center.x, center.y);
    auto region_of = [&](const std::vector<Point>& chain) -> std::size_t {
        Point mid = chain[chain.size() / 2];
        double rel = distance(mid, center) / radius;
        return rel < 0.2 ? 0 : rel < 0.4 ? 1 : rel < 0.65 ? 2 : 3;
    };
    auto zone_of = [&](std::size_t region) -> std::size_t {
        double u = rng.next_unit();
        if (region == 0)
            return u < 0.6 ? 0 : 1;
        if (region == 1)
            return u < 0.2 ? 0 : u < 0.7 ? 1 : 2;
        return u < 0.2 ? 1 : 2;
    };
    static constexpr double type_width[] = {12.0, 8.0, 5.0, 20.0};
    auto add_street = [&](std::string name, std::vector<Point> chain, std::size_t type) {
        Street s;
        s.name = std::move(name);
        std::size_t region = region_of(chain);
        s.levels = {region, type, zone_of(region)};
        s.width_px = type_width[type];
        s.chain = std::move(chain);
        m.streets.push_back(std::move(s));
    };

    auto cut = [&](std::size_t count, auto&& point_at, const std::string& prefix, bool major) {
        std::size_t start = 0, piece = 0;
        while (start + 1 < count) {
            std::size_t len = opt.min_piece + rng.next_u64() % (opt.max_piece - opt.min_piece + 1);
            std::size_t end = std::min(count - 1, start + len);
            bool keep = rng.next_unit() >= opt.drop_probability;
            if (keep) {
                std::vector<Point> chain;
                for (std::size_t i = start; i <= end; ++i)
                    chain.push_back(point_at(i));
                std::size_t type = major ? 0 : (end - start >= (opt.min_piece + opt.max_piece) / 2 ? 1 : 2);
                add_street(prefix + " " + std::to_string(++piece), std::move(chain), type);
            }
            start = end;
        }
    };
    for (std::size_t r = 0; r < opt.rows; ++r)
        cut(opt.cols, [&](std::size_t c) { return lattice[r][c]; }, "Row " + std::to_string(r + 1), r % 8 == 4);
    for (std::size_t c = 0; c < opt.cols; ++c)
        cut(opt.rows, [&](std::size_t r) { return lattice[r][c]; }, "Column " + std::to_string(c + 1), c % 8 == 4);

    for (std::size_t d = 0; d < opt.diagonals; ++d) {
        // Endpoints sit in the margin so the avenue crosses the whole lattice.
        double t = (static_cast<double>(d) + 0.5) / static_cast<double>(opt.diagonals);
        double off = 0.37 * opt.spacing;
        Point a, b;
        if (d % 2 == 0) {
            a = {margin * 0.5 + off, margin * 0.5 + t * (m.background_height - margin)};
            b = {m.background_width - margin * 0.5 - off, m.background_height - margin * 0.5 - t * (m.background_height - margin) * 0.5};
        } else {
            a = {margin * 0.5 + t * (m.background_width - margin), margin * 0.5 + off};
            b = {m.background_width - margin * 0.5 - t * (m.background_width - margin) * 0.5, m.background_height - margin * 0.5 - off};
        }
        const bool highway = d + 1 == opt.diagonals;
        add_street((highway ? "Highway " : "Diagonal Avenue ") + std::to_string(d + 1), {a, b}, highway ? 3 : 0);
    }

    const StreetGraph g = build_graph(m);
    std::vector<std::size_t> parent(g.vertices.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
        while (parent[v] != v)
            v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const Edge& e : g.edges)
        parent[find(e.u)] = find(e.v);
    const std::size_t root = find(g.edges[attach_depot(m, g).edge].u);
    std::vector<bool> keep(m.streets.size(), false);
    for (const Edge& e : g.edges)
        if (find(e.u) == root)
            keep[e.street] = true;
    std::vector<Street> connected;
    for (std::size_t s = 0; s < m.streets.size(); ++s)
        if (keep[s])
            connected.push_back(std::move(m.streets[s]));
    m.streets = std::move(connected);
    return m;
}

}

#endif
