#ifndef POSTVRP_SOLVER_HPP
#define POSTVRP_SOLVER_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "core.hpp"
#include "error.hpp"
#include "random.hpp"
#include "text.hpp"

namespace postvrp {

enum class SearchMode { lexicographic, scalarized };

struct SearchConfig {
    SearchMode mode = SearchMode::lexicographic;
    std::array<double, 3> weights{1.0, 1.0, 1.0}; // (f1, f2, f3), scalarized mode only
    std::size_t max_passes = 1000;
    double time_budget = 60.0; // seconds
    std::uint64_t seed = 0;    // construction tie-breaking

    // Above this many customers a position only tries its nearest deliveries.
    std::size_t restrict_threshold = 10000;
    std::size_t neighbor_count = 32;
    std::size_t separator_window = 16;

    void validate() const {
        for (double w : weights)
            if (!(w >= 0.0))
                throw ValidationError("scalarization weights must be non-negative");
        if (mode == SearchMode::scalarized && weights[0] == 0.0 && weights[1] == 0.0 && weights[2] == 0.0)
            throw ValidationError("scalarization weights must not all be zero");
        if (max_passes == 0 || !(time_budget > 0.0))
            throw ValidationError("search budgets must be positive");
        if (neighbor_count == 0)
            throw ValidationError("neighbor_count must be positive");
    }
};

inline double scalarize(const ObjectiveVector& f, const SearchConfig& cfg) {
    return cfg.weights[0] * f.f1 + cfg.weights[1] * static_cast<double>(f.f2) + cfg.weights[2] * f.f3;
}

/// True when `a` beats `b` under the configured key by more than a relative
/// tolerance `rel` (lexicographic order is (f2, f1, f3)).
inline bool key_less(const ObjectiveVector& a, const ObjectiveVector& b, const SearchConfig& cfg, double rel = 0.0) {
    auto lt = [rel](double x, double y) { return x < y - rel * std::max(1.0, std::abs(y)); };
    if (cfg.mode == SearchMode::scalarized)
        return lt(scalarize(a, cfg), scalarize(b, cfg));
    if (a.f2 != b.f2)
        return a.f2 < b.f2;
    if (lt(a.f1, b.f1))
        return true;
    if (lt(b.f1, a.f1))
        return false;
    return lt(a.f3, b.f3);
}

/// Pareto dominance on (f1, f2, f3).
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.f1 <= b.f1 && a.f2 <= b.f2 && a.f3 <= b.f3 && (a.f1 < b.f1 || a.f2 < b.f2 || a.f3 < b.f3);
}

/// Problem data a solver needs besides the weights.
struct ProblemSize {
    std::size_t n = 0;
    std::size_t k = 0;
    double w_max = 0.0;
};

struct Construction {
    Solution solution;
    bool feasible = true;
};

/**
 * Nearest-neighbor construction under the route limit. Each route grows by
 * the nearest unvisited customer that still lets it return within w_max; when
 * none fits, the next route opens. If vehicles run out (or some customer
 * cannot be served even alone), the leftovers are appended anyway and the
 * result is flagged infeasible.
 */
template <PairWeight W>
Construction greedy_construct(const W& w, ProblemSize p, const SearchConfig& cfg = {}) {
    Construction out;
    if (p.n == 0) {
        out.solution = encode({}, p.k);
        return out;
    }
    if (p.k == 0) {
        // No vehicle at all: report the customers as one infeasible route.
        Route all(p.n);
        std::iota(all.begin(), all.end(), std::size_t{1});
        out.solution.seq = all;
        out.feasible = false;
        return out;
    }

    // Exact distance ties go to the customer earlier in a seeded shuffle.
    std::vector<std::size_t> rank(p.n + 1);
    {
        std::vector<std::size_t> order(p.n);
        std::iota(order.begin(), order.end(), std::size_t{1});
        SplitMix64 rng(cfg.seed);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.next_u64() % i]);
        for (std::size_t i = 0; i < order.size(); ++i)
            rank[order[i]] = i;
    }

    std::vector<double> back(p.n + 1, 0.0);
    for (std::size_t c = 1; c <= p.n; ++c)
        back[c] = w(c, depot_id);

    std::vector<bool> visited(p.n + 1, false);
    std::size_t remaining = p.n;
    std::vector<Route> routes;
    while (remaining > 0 && routes.size() < p.k) {
        Route route;
        std::size_t cur = depot_id;
        double len = 0.0;
        while (true) {
            std::size_t best = depot_id;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 1; c <= p.n; ++c) {
                if (visited[c])
                    continue;
                double d = w(cur, c);
                if (len + d + back[c] > p.w_max)
                    continue;
                if (d < best_d || (d == best_d && rank[c] < rank[best])) {
                    best = c;
                    best_d = d;
                }
            }
            if (best == depot_id)
                break;
            visited[best] = true;
            --remaining;
            route.push_back(best);
            len += best_d;
            cur = best;
        }
        if (route.empty())
            break;
        routes.push_back(std::move(route));
    }

    if (remaining > 0) {
        out.feasible = false;
        Route rest;
        for (std::size_t c = 1; c <= p.n; ++c)
            if (!visited[c])
                rest.push_back(c);
        if (routes.size() < p.k)
            routes.push_back(std::move(rest));
        else
            routes.back().insert(routes.back().end(), rest.begin(), rest.end());
    }
    out.solution = encode(routes, p.k);
    return out;
}

namespace detail {

/**
 * Incremental state for swapping two positions of a solution sequence.
 *
 * The sequence is framed by a depot at each end, so each route is the run of
 * edges between two consecutive depot positions and f1 is the sum of all
 * edges. A swap changes at most four edges; only the routes containing those
 * edges (before or after the swap) need re-evaluation.
 */
template <PairWeight W>
class SwapState {
public:
    struct Totals {
        std::size_t routes = 0;
        double sum = 0.0;
        double shift = 0.0; // squares are taken around this to limit cancellation
        double sumsq = 0.0;
        double excess = 0.0;
        std::size_t violations = 0;

        ObjectiveVector objectives() const {
            ObjectiveVector f;
            f.f1 = sum;
            f.f2 = routes;
            if (routes > 1) {
                const double m = static_cast<double>(routes);
                const double centered = sum - m * shift;
                f.f3 = std::sqrt(std::max(0.0, (sumsq - centered * centered / m) / (m - 1.0)));
            }
            return f;
        }
    };

    SwapState(const W& w, const Solution& sol, double w_max) : w_(w), w_max_(w_max) { reset(sol); }

    void reset(const Solution& sol) {
        ext_.assign(1, depot_id);
        ext_.insert(ext_.end(), sol.seq.begin(), sol.seq.end());
        ext_.push_back(depot_id);
        rebuild();
    }

    Solution solution() const { return {std::vector<std::size_t>(ext_.begin() + 1, ext_.end() - 1)}; }
    const Totals& totals() const { return totals_; }
    std::size_t size() const { return ext_.size() - 2; }
    std::size_t at(std::size_t i) const { return ext_[i + 1]; }

    /// Totals after swapping sequence positions i and j (i != j).
    Totals evaluate(std::size_t i, std::size_t j) const {
        if (i > j)
            std::swap(i, j);
        const std::size_t I = i + 1, J = j + 1;
        if (ext_[I] == ext_[J])
            return totals_;
        auto elem = [&](std::size_t t) { return t == I ? ext_[J] : t == J ? ext_[I] : ext_[t]; };

        std::array<std::size_t, 4> changed{I - 1, I, J - 1, J};
        std::size_t nchanged = 4;
        if (J - 1 == I) {
            changed = {I - 1, I, J, 0};
            nchanged = 3;
        }
        std::array<double, 4> new_edge{};
        for (std::size_t c = 0; c < nchanged; ++c)
            new_edge[c] = pair_weight(elem(changed[c]), elem(changed[c] + 1));

        auto new_sum = [&](std::size_t a, std::size_t b) {
            double s = prefix_[b] - prefix_[a];
            for (std::size_t c = 0; c < nchanged; ++c)
                if (changed[c] >= a && changed[c] < b)
                    s += new_edge[c] - edge_[changed[c]];
            return s;
        };

        // Depot positions after the swap: at most one moves.
        const bool moves = (ext_[I] == depot_id) != (ext_[J] == depot_id);
        const std::size_t from = ext_[I] == depot_id ? I : J;
        const std::size_t to = from == I ? J : I;

        Totals t = totals_;
        std::array<std::pair<std::size_t, std::size_t>, 4> gaps{};
        std::size_t ngaps = 0;
        auto add_gap = [&](std::pair<std::size_t, std::size_t> g) {
            for (std::size_t q = 0; q < ngaps; ++q)
                if (gaps[q] == g)
                    return false;
            gaps[ngaps++] = g;
            return true;
        };

        for (std::size_t c = 0; c < nchanged; ++c) {
            auto g = gap_of(changed[c], seps_);
            if (!add_gap(g) || g.second - g.first < 2)
                continue;
            remove(t, prefix_[g.second] - prefix_[g.first]);
        }

        ngaps = 0;
        for (std::size_t c = 0; c < nchanged; ++c) {
            auto g = moves ? gap_moved(changed[c], from, to) : gap_of(changed[c], seps_);
            if (!add_gap(g) || g.second - g.first < 2)
                continue;
            add(t, new_sum(g.first, g.second));
        }
        return t;
    }

    void apply(std::size_t i, std::size_t j) {
        std::swap(ext_[i + 1], ext_[j + 1]);
        rebuild();
    }

    /// Exact route lengths recomputed from scratch in route order.
    std::vector<double> route_lengths_exact() const {
        std::vector<double> out;
        for (std::size_t s = 0; s + 1 < seps_.size(); ++s)
            if (seps_[s + 1] - seps_[s] >= 2)
                out.push_back(route_length(std::span<const std::size_t>(&ext_[seps_[s] + 1], seps_[s + 1] - seps_[s] - 1), w_));
        return out;
    }

private:
    double pair_weight(std::size_t a, std::size_t b) const {
        return a == depot_id && b == depot_id ? 0.0 : static_cast<double>(w_(a, b));
    }

    void rebuild() {
        const std::size_t m = ext_.size();
        edge_.assign(m - 1, 0.0);
        prefix_.assign(m, 0.0);
        seps_.clear();
        for (std::size_t t = 0; t < m; ++t) {
            if (ext_[t] == depot_id)
                seps_.push_back(t);
            if (t + 1 < m) {
                edge_[t] = pair_weight(ext_[t], ext_[t + 1]);
                prefix_[t + 1] = prefix_[t] + edge_[t];
            }
        }
        totals_ = {};
        std::size_t routes = 0;
        for (std::size_t s = 0; s + 1 < seps_.size(); ++s)
            routes += seps_[s + 1] - seps_[s] >= 2;
        totals_.shift = routes ? prefix_.back() / static_cast<double>(routes) : 0.0;
        for (std::size_t s = 0; s + 1 < seps_.size(); ++s)
            if (seps_[s + 1] - seps_[s] >= 2)
                add(totals_, prefix_[seps_[s + 1]] - prefix_[seps_[s]]);
    }

    /// Depot positions (a, b) bracketing edge t, i.e. a <= t < t + 1 <= b.
    static std::pair<std::size_t, std::size_t> gap_of(std::size_t t, const std::vector<std::size_t>& seps) {
        auto it = std::upper_bound(seps.begin(), seps.end(), t); // first > t, i.e. >= t + 1
        return {*(it - 1), *it};
    }

    /// gap_of against the depot positions with `from` replaced by `to`.
    std::pair<std::size_t, std::size_t> gap_moved(std::size_t t, std::size_t from, std::size_t to) const {
        std::size_t lo = 0, hi = std::numeric_limits<std::size_t>::max();
        auto consider = [&](std::size_t s) {
            if (s <= t)
                lo = std::max(lo, s);
            else
                hi = std::min(hi, s);
        };
        auto it = std::upper_bound(seps_.begin(), seps_.end(), t);
        // Nearest two on each side suffice, since at most one entry is removed.
        for (auto p = it; p != seps_.end() && p - it < 2; ++p)
            if (*p != from)
                consider(*p);
        for (auto p = it; p != seps_.begin() && it - p < 2;) {
            --p;
            if (*p != from)
                consider(*p);
        }
        consider(to);
        return {lo, hi};
    }

    void add(Totals& t, double len) const {
        ++t.routes;
        t.sum += len;
        t.sumsq += (len - t.shift) * (len - t.shift);
        if (len > w_max_) {
            t.excess += len - w_max_;
            ++t.violations;
        }
    }

    void remove(Totals& t, double len) const {
        --t.routes;
        t.sum -= len;
        t.sumsq -= (len - t.shift) * (len - t.shift);
        if (len > w_max_) {
            t.excess -= len - w_max_;
            --t.violations;
        }
    }

    const W& w_;
    double w_max_;
    std::vector<std::size_t> ext_;
    std::vector<double> edge_;
    std::vector<double> prefix_;
    std::vector<std::size_t> seps_;
    Totals totals_;
};

}

struct DescentResult {
    Solution solution;
    ObjectiveVector objectives;
    bool feasible = false;
    std::size_t passes = 0;
    std::size_t swaps = 0;
    double elapsed = 0.0; // seconds
};

/// For each customer, its `count` nearest other customers by weight (ties by id).
template <PairWeight W>
std::vector<std::vector<std::size_t>> nearest_customers(const W& w, std::size_t n, std::size_t count) {
    std::vector<std::vector<std::size_t>> out(n + 1);
    std::vector<std::pair<double, std::size_t>> buf;
    count = std::min(count, n > 0 ? n - 1 : 0);
    for (std::size_t c = 1; c <= n; ++c) {
        buf.clear();
        for (std::size_t o = 1; o <= n; ++o)
            if (o != c)
                buf.emplace_back(w(c, o), o);
        std::partial_sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(count), buf.end());
        for (std::size_t i = 0; i < count; ++i)
            out[c].push_back(buf[i].second);
    }
    return out;
}

/**
 * First-improvement swap descent over raw sequence positions, separators
 * included, so one swap can move a customer between routes or shift a route
 * boundary.
 *
 * A swap is applied when it lowers the total excess over w_max, or keeps the
 * excess unchanged and strictly improves the configured key. A feasible input
 * therefore stays feasible and its key never increases. Positions are scanned
 * in ascending (i, j) order; the search stops at a local optimum, after
 * max_passes sweeps, or when the time budget runs out.
 *
 * With at least cfg.restrict_threshold customers, a customer position only
 * tries the positions of its nearest customers and a separator only the
 * positions within cfg.separator_window of it. `neighbors` may be supplied to
 * reuse precomputed lists.
 */
template <PairWeight W>
DescentResult swap_descent(const Solution& start, const W& w, double w_max, const SearchConfig& cfg,
                           const std::vector<std::vector<std::size_t>>* neighbors = nullptr) {
    cfg.validate();
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    const auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.time_budget));

    detail::SwapState<W> state(w, start, w_max);
    const std::size_t m = state.size();
    std::size_t n = 0;
    for (std::size_t i = 0; i < m; ++i)
        n += state.at(i) != depot_id;

    const bool restricted = n >= cfg.restrict_threshold;
    std::vector<std::vector<std::size_t>> own_neighbors;
    if (restricted && !neighbors) {
        own_neighbors = nearest_customers(w, n, cfg.neighbor_count);
        neighbors = &own_neighbors;
    }
    std::vector<std::size_t> pos(n + 1, 0);
    auto index_positions = [&] {
        for (std::size_t i = 0; i < m; ++i)
            if (state.at(i) != depot_id)
                pos[state.at(i)] = i;
    };
    index_positions();

    constexpr double rel = 1e-9;
    auto improves = [&](const typename detail::SwapState<W>::Totals& cand,
                        const typename detail::SwapState<W>::Totals& cur) {
        const double tol = rel * std::max(1.0, cur.excess);
        if (cur.violations > 0) {
            if (cand.excess < cur.excess - tol)
                return true;
            if (cand.excess > cur.excess + tol || cand.violations > cur.violations)
                return false;
        } else if (cand.violations > 0) {
            return false;
        }
        return key_less(cand.objectives(), cur.objectives(), cfg, rel);
    };

    DescentResult res;
    bool out_of_time = false;
    std::size_t ticks = 0;
    auto try_swap = [&](std::size_t i, std::size_t j) {
        if (i == j || state.at(i) == state.at(j))
            return false;
        if ((++ticks & 1023) == 0 && Clock::now() > deadline) {
            out_of_time = true;
            return false;
        }
        const auto before = state.totals();
        if (!improves(state.evaluate(i, j), before))
            return false;
        const bool was_feasible = before.violations == 0;
        const Solution undo = state.solution();
        state.apply(i, j);
        if (was_feasible) {
            // Guard against rounding: confirm with the same summation is_feasible uses.
            for (double len : state.route_lengths_exact())
                if (len > w_max) {
                    state.reset(undo);
                    return false;
                }
        }
        if (state.at(i) != depot_id)
            pos[state.at(i)] = i;
        if (state.at(j) != depot_id)
            pos[state.at(j)] = j;
        ++res.swaps;
        return true;
    };

    while (res.passes < cfg.max_passes && !out_of_time) {
        ++res.passes;
        bool improved = false;
        for (std::size_t i = 0; i < m && !out_of_time; ++i) {
            if (!restricted) {
                for (std::size_t j = i + 1; j < m && !out_of_time; ++j)
                    improved |= try_swap(i, j);
                continue;
            }
            const std::size_t here = state.at(i);
            if (here == depot_id) {
                const std::size_t lo = i > cfg.separator_window ? i - cfg.separator_window : 0;
                const std::size_t hi = std::min(m - 1, i + cfg.separator_window);
                for (std::size_t j = lo; j <= hi && !out_of_time; ++j)
                    if (j != i && try_swap(i, j)) {
                        improved = true;
                        break;
                    }
            } else {
                for (std::size_t nb : (*neighbors)[here]) {
                    if (out_of_time || state.at(i) != here)
                        break;
                    improved |= try_swap(i, pos[nb]);
                }
            }
        }
        if (!improved)
            break;
    }

    res.solution = state.solution();
    auto lengths = state.route_lengths_exact();
    res.objectives = objectives_from_lengths(lengths);
    res.feasible = std::all_of(lengths.begin(), lengths.end(), [&](double l) { return l <= w_max; });
    res.elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
}

struct ParetoEntry {
    Solution solution;
    ObjectiveVector objectives;
};

struct ExhaustiveResult {
    bool found = false; // some feasible arrangement exists
    Solution best;
    ObjectiveVector best_objectives;
    std::vector<ParetoEntry> pareto; // one representative per non-dominated objective vector
    std::uint64_t enumerated = 0;
    std::uint64_t feasible = 0;
};

inline constexpr std::uint64_t exhaustive_limit = 10'000'000;

/// Distinct arrangements of n customers and k - 1 separators,
/// (n + k - 1)! / (k - 1)!, saturating at `cap + 1`.
inline std::uint64_t arrangement_count(std::size_t n, std::size_t k, std::uint64_t cap = exhaustive_limit) {
    const std::size_t seps = separators_for(k);
    std::uint64_t count = 1;
    for (std::size_t f = seps + 1; f <= n + seps; ++f) {
        if (count > (cap + 1) / f + 1)
            return cap + 1;
        count *= f;
        if (count > cap)
            return cap + 1;
    }
    return count;
}

/// Enumerates every distinct permutation of S(C, k), keeping the best feasible
/// one under the configured key and the non-dominated feasible set.
template <PairWeight W>
ExhaustiveResult exhaustive_optimum(const W& w, ProblemSize p, const SearchConfig& cfg = {}) {
    if (p.k == 0 && p.n > 0)
        return {};
    if (arrangement_count(p.n, p.k) > exhaustive_limit)
        throw Error("instance too large for exhaustive enumeration (more than " + std::to_string(exhaustive_limit) +
                    " arrangements)");
    std::vector<std::size_t> seq(separators_for(p.k), depot_id);
    for (std::size_t c = 1; c <= p.n; ++c)
        seq.push_back(c);

    ExhaustiveResult res;
    std::vector<double> lengths;
    do {
        ++res.enumerated;
        lengths.clear();
        bool ok = true;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= seq.size() && ok; ++i) {
            if (i < seq.size() && seq[i] != depot_id)
                continue;
            if (i > start) {
                double len = route_length(std::span<const std::size_t>(&seq[start], i - start), w);
                ok = len <= p.w_max;
                lengths.push_back(len);
            }
            start = i + 1;
        }
        if (!ok)
            continue;
        ++res.feasible;
        ObjectiveVector f = objectives_from_lengths(lengths);
        if (!res.found || key_less(f, res.best_objectives, cfg)) {
            res.found = true;
            res.best = {seq};
            res.best_objectives = f;
        }
        bool covered = false;
        for (const auto& e : res.pareto)
            if (dominates(e.objectives, f) || e.objectives == f) {
                covered = true;
                break;
            }
        if (covered)
            continue;
        std::erase_if(res.pareto, [&](const ParetoEntry& e) { return dominates(f, e.objectives); });
        res.pareto.push_back({{seq}, f});
    } while (std::next_permutation(seq.begin(), seq.end()));
    return res;
}

struct SolveResult {
    Solution solution;
    ObjectiveVector objectives;
    bool feasible = false;
    std::size_t passes = 0;
    double elapsed = 0.0;
};

/// Greedy construction followed by swap descent.
template <PairWeight W>
SolveResult solve(const W& w, ProblemSize p, const SearchConfig& cfg = {}) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    auto init = greedy_construct(w, p, cfg);
    SolveResult out;
    if (p.k == 0) {
        out.solution = init.solution;
        out.objectives = objectives(init.solution, w);
        out.feasible = p.n == 0;
    } else {
        auto d = swap_descent(init.solution, w, p.w_max, cfg);
        out.solution = std::move(d.solution);
        out.objectives = d.objectives;
        out.feasible = d.feasible;
        out.passes = d.passes;
    }
    out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

/// `f1 f2 f3 feasible passes elapsed_s`
inline std::string stats_line(const ObjectiveVector& f, bool feasible, std::size_t passes, double elapsed,
                              int precision) {
    return text::fixed(f.f1, precision) + " " + std::to_string(f.f2) + " " + text::fixed(f.f3, precision) + " " +
           (feasible ? "1" : "0") + " " + std::to_string(passes) + " " + text::fixed(elapsed, 3) + "\n";
}

}

#endif
