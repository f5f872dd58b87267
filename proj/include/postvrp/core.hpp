#ifndef POSTVRP_CORE_HPP
#define POSTVRP_CORE_HPP

#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "text.hpp"

namespace postvrp {

/// Delivery id of the depot; customers are 1..n.
inline constexpr std::size_t depot_id = 0;

/// Anything callable as w(a, b) -> length over delivery ids.
template <class W>
concept PairWeight = requires(const W& w, std::size_t a, std::size_t b) {
    { w(a, b) } -> std::convertible_to<double>;
};

/// A permutation of the n customers plus k - 1 depot separators.
struct Solution {
    std::vector<std::size_t> seq;

    friend bool operator==(const Solution&, const Solution&) = default;
};

using Route = std::vector<std::size_t>;

struct RoutePartition {
    std::vector<Route> routes;

    friend bool operator==(const RoutePartition&, const RoutePartition&) = default;
};

struct ObjectiveVector {
    double f1 = 0.0;      // total length
    std::size_t f2 = 0;   // vehicles used
    double f3 = 0.0;      // sample standard deviation of route lengths

    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

/// Number of separators is k - 1 (none when k is 0).
inline std::size_t separators_for(std::size_t k) { return k == 0 ? 0 : k - 1; }

/// Throws ValidationError unless `sol` is a permutation of S(C, k).
inline void validate_solution(const Solution& sol, std::size_t n, std::size_t k) {
    if (k == 0 && n > 0)
        throw ValidationError("k = 0 admits no solution with customers");
    std::vector<bool> seen(n + 1, false);
    std::size_t seps = 0;
    for (std::size_t id : sol.seq) {
        if (id == depot_id) {
            ++seps;
            continue;
        }
        if (id > n)
            throw ValidationError("customer id " + std::to_string(id) + " outside 1.." + std::to_string(n));
        if (seen[id])
            throw ValidationError("customer " + std::to_string(id) + " appears twice");
        seen[id] = true;
    }
    if (sol.seq.size() - seps != n)
        throw ValidationError("solution visits " + std::to_string(sol.seq.size() - seps) + " of " +
                              std::to_string(n) + " customers");
    if (seps != separators_for(k))
        throw ValidationError("solution has " + std::to_string(seps) + " depot separators, expected " +
                              std::to_string(separators_for(k)));
}

/// Splits at depot separators, dropping empty routes.
inline RoutePartition partition(const Solution& sol) {
    RoutePartition p;
    Route cur;
    for (std::size_t id : sol.seq) {
        if (id == depot_id) {
            if (!cur.empty())
                p.routes.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(id);
        }
    }
    if (!cur.empty())
        p.routes.push_back(std::move(cur));
    return p;
}

/// Joins routes with separators and pads with trailing separators up to k - 1.
inline Solution encode(const std::vector<Route>& routes, std::size_t k) {
    if (routes.size() > k)
        throw ValidationError("more routes than vehicles");
    Solution sol;
    for (std::size_t r = 0; r < routes.size(); ++r) {
        if (r)
            sol.seq.push_back(depot_id);
        sol.seq.insert(sol.seq.end(), routes[r].begin(), routes[r].end());
    }
    std::size_t used = routes.empty() ? 0 : routes.size() - 1;
    for (std::size_t i = used; i < separators_for(k); ++i)
        sol.seq.push_back(depot_id);
    return sol;
}

/// W(R): depot to first customer, along the route, last customer back to depot.
template <PairWeight W>
double route_length(std::span<const std::size_t> route, const W& w) {
    if (route.empty())
        return 0.0;
    double len = w(depot_id, route.front()) + w(route.back(), depot_id);
    for (std::size_t i = 0; i + 1 < route.size(); ++i)
        len += w(route[i], route[i + 1]);
    return len;
}

/// W(S) over the whole sequence, with w(pi, pi) = 0.
template <PairWeight W>
double sequence_length(const Solution& sol, const W& w) {
    if (sol.seq.empty())
        return 0.0;
    auto weight = [&](std::size_t a, std::size_t b) {
        return a == depot_id && b == depot_id ? 0.0 : static_cast<double>(w(a, b));
    };
    double len = weight(depot_id, sol.seq.front()) + weight(sol.seq.back(), depot_id);
    for (std::size_t i = 0; i + 1 < sol.seq.size(); ++i)
        len += weight(sol.seq[i], sol.seq[i + 1]);
    return len;
}

/// Objectives from route lengths. f3 is the sample standard deviation and is
/// 0 when there is at most one route.
inline ObjectiveVector objectives_from_lengths(std::span<const double> lengths) {
    ObjectiveVector f;
    f.f2 = lengths.size();
    for (double l : lengths)
        f.f1 += l;
    if (lengths.size() > 1) {
        const double mean = f.f1 / static_cast<double>(lengths.size());
        double ss = 0.0;
        for (double l : lengths)
            ss += (l - mean) * (l - mean);
        f.f3 = std::sqrt(ss / static_cast<double>(lengths.size() - 1));
    }
    return f;
}

template <PairWeight W>
std::vector<double> route_lengths(const RoutePartition& p, const W& w) {
    std::vector<double> out;
    out.reserve(p.routes.size());
    for (const auto& r : p.routes)
        out.push_back(route_length(r, w));
    return out;
}

template <PairWeight W>
ObjectiveVector objectives(const Solution& sol, const W& w) {
    return objectives_from_lengths(route_lengths(partition(sol), w));
}

struct Feasibility {
    bool feasible = true;
    std::optional<std::size_t> violating_route; // first route over the limit
    double violating_length = 0.0;

    explicit operator bool() const { return feasible; }
};

/// Every route within w_max (non-strict). The route count limit holds by
/// construction of the encoding.
template <PairWeight W>
Feasibility is_feasible(const Solution& sol, const W& w, double w_max) {
    auto p = partition(sol);
    for (std::size_t r = 0; r < p.routes.size(); ++r) {
        double len = route_length(p.routes[r], w);
        if (len > w_max)
            return {false, r, len};
    }
    return {};
}

/// Solution file: `k n` then the sequence, separators written as `pi`.
inline std::string print_solution(const Solution& sol, std::size_t k, std::size_t n) {
    std::string out = std::to_string(k) + " " + std::to_string(n) + "\n";
    for (std::size_t i = 0; i < sol.seq.size(); ++i) {
        if (i)
            out += ' ';
        out += sol.seq[i] == depot_id ? std::string("pi") : std::to_string(sol.seq[i]);
    }
    out += "\n";
    return out;
}

struct SolutionFile {
    std::size_t k = 0;
    std::size_t n = 0;
    Solution solution;
};

inline SolutionFile parse_solution(std::string_view input) {
    auto all = text::lines(input);
    std::size_t li = 0;
    auto next_nonempty = [&]() -> std::vector<text::Token> {
        while (li < all.size()) {
            auto tok = text::tokenize(all[li], li + 1);
            ++li;
            if (!tok.empty())
                return tok;
        }
        return {};
    };
    auto head = next_nonempty();
    if (head.size() != 2)
        throw ParseError(li, 0, "expected 'k n' header");
    SolutionFile f;
    f.k = text::expect_int<std::size_t>(head[0], li, "k");
    f.n = text::expect_int<std::size_t>(head[1], li, "n");
    const std::size_t seq_line = li + 1;
    for (const auto& t : next_nonempty()) {
        if (t.value == "pi") {
            f.solution.seq.push_back(depot_id);
            continue;
        }
        auto id = text::expect_int<std::size_t>(t, seq_line, "customer");
        if (id == depot_id)
            throw ParseError(seq_line, t.column, "customer ids start at 1; write the depot as 'pi'");
        f.solution.seq.push_back(id);
    }
    if (!next_nonempty().empty())
        throw ParseError(li, 0, "unexpected content after the sequence line");
    validate_solution(f.solution, f.n, f.k);
    return f;
}

}

#endif
