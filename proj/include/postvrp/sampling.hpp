#ifndef POSTVRP_SAMPLING_HPP
#define POSTVRP_SAMPLING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "model.hpp"
#include "random.hpp"
#include "text.hpp"

namespace postvrp {

/// Running sums of Prob(e) in edge order; the last entry is exactly 1.
struct EdgeProbabilityTable {
    std::vector<double> cumulative;
    double total = 0.0; // T, the un-normalized mass

    double probability(std::size_t e) const { return cumulative[e] - (e ? cumulative[e - 1] : 0.0); }

    /// Edge whose half-open interval [low, high) contains r. Values past the
    /// last boundary map to the last edge with positive probability.
    std::size_t select(double r) const {
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
        if (it == cumulative.end()) {
            std::size_t e = cumulative.size() - 1;
            while (e > 0 && probability(e) <= 0.0)
                --e;
            return e;
        }
        return static_cast<std::size_t>(it - cumulative.begin());
    }
};

/// Delivery 0 is the depot; 1..n are customers.
struct DeliverySet {
    std::vector<DeliveryLocation> deliveries;

    std::size_t customers() const { return deliveries.empty() ? 0 : deliveries.size() - 1; }

    friend bool operator==(const DeliverySet&, const DeliverySet&) = default;
};

/// Prob(e) proportional to D(St(e)) * w'(e).
inline EdgeProbabilityTable edge_probabilities(const StreetModel& model, const StreetGraph& graph) {
    std::vector<double> street_density(model.streets.size());
    for (std::size_t s = 0; s < model.streets.size(); ++s)
        street_density[s] = density(model, s);

    EdgeProbabilityTable table;
    table.cumulative.reserve(graph.edges.size());
    double running = 0.0;
    for (const Edge& e : graph.edges) {
        running += street_density.at(e.street) * e.weight;
        table.cumulative.push_back(running);
    }
    if (!(running > 0.0))
        throw ValidationError("degenerate probability mass: every edge has zero density");
    table.total = running;
    for (double& c : table.cumulative)
        c /= running;
    table.cumulative.back() = 1.0;
    return table;
}

/**
 * Draws n deliveries. Each one consumes exactly three values from the stream,
 * in this order: edge selector, alpha, side (< 0.5 is plus). Delivery i is
 * therefore a function of the seed and i alone.
 */
inline DeliverySet sample_deliveries(const StreetGraph& graph, const EdgeProbabilityTable& table,
                                     const DeliveryLocation& depot, std::size_t n, std::uint64_t seed) {
    if (table.cumulative.size() != graph.edges.size())
        throw Error("probability table does not match the graph");
    SplitMix64 rng(seed);
    DeliverySet set;
    set.deliveries.reserve(n + 1);
    set.deliveries.push_back(depot);
    for (std::size_t i = 0; i < n; ++i) {
        DeliveryLocation d;
        d.edge = table.select(rng.next_unit());
        d.alpha = rng.next_unit();
        d.side = rng.next_unit() < 0.5 ? Side::plus : Side::minus;
        set.deliveries.push_back(d);
    }
    return set;
}

inline DeliverySet sample_deliveries(const StreetModel& model, const StreetGraph& graph, std::size_t n,
                                     std::uint64_t seed) {
    return sample_deliveries(graph, edge_probabilities(model, graph), attach_depot(model, graph), n, seed);
}

/// `D <edge_id> <alpha> <+|->`
inline std::string delivery_line(const DeliveryLocation& d, int precision) {
    return "D " + std::to_string(d.edge) + " " + text::fixed(d.alpha, precision) + " " + side_char(d.side) + "\n";
}

/// Rounds alpha to what a reader of the printed delivery line will see.
inline DeliveryLocation quantize(DeliveryLocation d, int precision) {
    d.alpha = *text::to_real(text::fixed(d.alpha, precision));
    return d;
}

}

#endif
