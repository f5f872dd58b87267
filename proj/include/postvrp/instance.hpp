#ifndef POSTVRP_INSTANCE_HPP
#define POSTVRP_INSTANCE_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "md5.hpp"
#include "model.hpp"
#include "sampling.hpp"
#include "text.hpp"

namespace postvrp {

/// One line of an instance catalog.
struct CatalogRow {
    std::int64_t id = 0;
    std::string dir;
    std::string subdir;
    std::int64_t n = 0;
    std::int64_t k = 0;
    double w_max = 0.0; // length units
    std::string comment;
    std::uint64_t seed = 0;
    std::string md5 = "-"; // 32 lowercase hex digits, or "-" when unset

    friend bool operator==(const CatalogRow&, const CatalogRow&) = default;
};

struct Catalog {
    std::vector<CatalogRow> rows;
    std::optional<double> hours_to_units; // route-length unit conversion for hour-valued limits

    friend bool operator==(const Catalog&, const Catalog&) = default;
};

inline constexpr std::string_view catalog_header = "ID Dir Subdir n k Wmax Comment Seed MD5";

namespace detail {

inline bool is_md5_hex(std::string_view s) {
    return s.size() == 32 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

inline bool is_path_component(std::string_view s) {
    return !s.empty() && s != "." && s != ".." && s.find_first_of("/\\") == std::string_view::npos;
}

}

/// Parses a catalog: optional `HOURS_TO_UNITS <real>` line, optional header,
/// then one whitespace-separated row per line with a quoted comment.
inline Catalog parse_catalog(std::string_view input) {
    Catalog cat;
    std::set<std::int64_t> ids;
    bool seen_header = false;
    auto all = text::lines(input);
    for (std::size_t li = 0; li < all.size(); ++li) {
        const std::size_t line = li + 1;
        auto tok = text::tokenize(all[li], line);
        if (tok.empty())
            continue;
        if (tok[0].value == "HOURS_TO_UNITS" && !tok[0].quoted) {
            if (seen_header || !cat.rows.empty() || cat.hours_to_units)
                throw ParseError(line, 1, "HOURS_TO_UNITS must appear once, before the rows");
            if (tok.size() != 2)
                throw ParseError(line, 0, "HOURS_TO_UNITS expects one value");
            double h = text::expect_real(tok[1], line, "HOURS_TO_UNITS");
            if (!(h > 0.0))
                throw ParseError(line, tok[1].column, "HOURS_TO_UNITS must be positive");
            cat.hours_to_units = h;
            continue;
        }
        if (tok[0].value == "ID" && !tok[0].quoted) {
            std::string joined;
            for (const auto& t : tok)
                joined += (joined.empty() ? "" : " ") + t.value;
            if (joined != catalog_header)
                throw ParseError(line, 0, "malformed header, expected '" + std::string(catalog_header) + "'");
            if (seen_header || !cat.rows.empty())
                throw ParseError(line, 0, "header must come before the rows, once");
            seen_header = true;
            continue;
        }
        if (tok.size() != 9)
            throw ParseError(line, 0, "malformed row: expected 9 fields, found " + std::to_string(tok.size()));
        if (!tok[6].quoted)
            throw ParseError(line, tok[6].column, "comment must be a quoted string");
        CatalogRow r;
        r.id = text::expect_int<std::int64_t>(tok[0], line, "ID");
        r.dir = tok[1].value;
        r.subdir = tok[2].value;
        r.n = text::expect_int<std::int64_t>(tok[3], line, "n");
        r.k = text::expect_int<std::int64_t>(tok[4], line, "k");
        r.w_max = text::expect_real(tok[5], line, "Wmax");
        r.comment = tok[6].value;
        r.seed = text::expect_int<std::uint64_t>(tok[7], line, "Seed");
        r.md5 = tok[8].value;
        std::transform(r.md5.begin(), r.md5.end(), r.md5.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

        if (!detail::is_path_component(r.dir) || !detail::is_path_component(r.subdir))
            throw ParseError(line, tok[1].column, "Dir and Subdir must be plain directory names");
        if (r.n < 0)
            throw ParseError(line, tok[3].column, "n must be non-negative");
        if (r.k < 0)
            throw ParseError(line, tok[4].column, "k must be non-negative");
        if (!(r.w_max > 0.0))
            throw ParseError(line, tok[5].column, "Wmax must be positive");
        if (r.md5 != "-" && !detail::is_md5_hex(r.md5))
            throw ParseError(line, tok[8].column, "MD5 must be 32 hex digits or '-'");
        if (!ids.insert(r.id).second)
            throw ParseError(line, tok[0].column, "duplicate instance id " + std::to_string(r.id));
        cat.rows.push_back(std::move(r));
    }
    return cat;
}

inline std::string print_catalog(const Catalog& cat) {
    std::string out;
    if (cat.hours_to_units)
        out += "HOURS_TO_UNITS " + text::shortest(*cat.hours_to_units) + "\n";
    out += std::string(catalog_header) + "\n";
    for (const auto& r : cat.rows)
        out += std::to_string(r.id) + " " + r.dir + " " + r.subdir + " " + std::to_string(r.n) + " " +
               std::to_string(r.k) + " " + text::shortest(r.w_max) + " " + text::quote(r.comment) + " " +
               std::to_string(r.seed) + " " + r.md5 + "\n";
    return out;
}

/// A generated instance: catalog row, deliveries, and what they were built from.
struct Instance {
    CatalogRow row;
    DeliverySet deliveries;
    std::string model_fingerprint;
    int precision = 2;

    friend bool operator==(const Instance&, const Instance&) = default;
};

inline std::string model_fingerprint(std::string_view model_bytes) { return md5_hex(model_bytes); }

/// Samples the row's deliveries. Alphas are rounded to `precision` decimals,
/// the form in which they are serialized, so a reloaded instance is identical.
inline Instance generate_instance(const StreetModel& model, std::string_view fingerprint, const StreetGraph& graph,
                                  const EdgeProbabilityTable& table, const CatalogRow& row,
                                  std::optional<int> precision = std::nullopt) {
    Instance inst;
    inst.row = row;
    inst.model_fingerprint = std::string(fingerprint);
    inst.precision = precision.value_or(model.precision);
    if (inst.precision < 0 || inst.precision > 12)
        throw ValidationError("precision must be in [0, 12]");
    inst.deliveries = sample_deliveries(graph, table, attach_depot(model, graph), static_cast<std::size_t>(row.n),
                                        row.seed);
    for (auto& d : inst.deliveries.deliveries)
        d = quantize(d, inst.precision);
    return inst;
}

inline Instance generate_instance(const StreetModel& model, std::string_view fingerprint, const StreetGraph& graph,
                                  const CatalogRow& row, std::optional<int> precision = std::nullopt) {
    return generate_instance(model, fingerprint, graph, edge_probabilities(model, graph), row, precision);
}

/// Canonical instance file; its MD5 is the instance fingerprint.
inline std::string serialize_instance(const Instance& inst) {
    const auto& r = inst.row;
    std::string out = "POSTVRP 1\n";
    out += "ID " + std::to_string(r.id) + "\n";
    out += "DIR " + r.dir + "\n";
    out += "SUBDIR " + r.subdir + "\n";
    out += "N " + std::to_string(r.n) + "\n";
    out += "K " + std::to_string(r.k) + "\n";
    out += "WMAX " + text::shortest(r.w_max) + "\n";
    out += "COMMENT " + text::quote(r.comment) + "\n";
    out += "SEED " + std::to_string(r.seed) + "\n";
    out += "PRECISION " + std::to_string(inst.precision) + "\n";
    out += "MODEL " + inst.model_fingerprint + "\n";
    for (const auto& d : inst.deliveries.deliveries)
        out += delivery_line(d, inst.precision);
    return out;
}

inline std::string fingerprint(const Instance& inst) { return md5_hex(serialize_instance(inst)); }

/// Reads a canonical instance file back. The MD5 field of the row is left "-".
inline Instance parse_instance(std::string_view input) {
    Instance inst;
    auto all = text::lines(input);
    const char* keys[] = {"POSTVRP", "ID", "DIR", "SUBDIR", "N", "K", "WMAX", "COMMENT", "SEED", "PRECISION", "MODEL"};
    constexpr std::size_t header_lines = std::size(keys);
    if (all.size() < header_lines)
        throw ParseError(all.size() + 1, 0, "truncated instance header");
    std::vector<text::Token> value(header_lines);
    for (std::size_t i = 0; i < header_lines; ++i) {
        auto tok = text::tokenize(all[i], i + 1);
        if (tok.size() != 2 || tok[0].value != keys[i])
            throw ParseError(i + 1, 0, std::string("expected '") + keys[i] + " <value>'");
        value[i] = tok[1];
    }
    if (value[0].value != "1")
        throw ParseError(1, value[0].column, "unsupported instance version");
    auto& r = inst.row;
    r.id = text::expect_int<std::int64_t>(value[1], 2, "ID");
    r.dir = value[2].value;
    r.subdir = value[3].value;
    r.n = text::expect_int<std::int64_t>(value[4], 5, "N");
    r.k = text::expect_int<std::int64_t>(value[5], 6, "K");
    r.w_max = text::expect_real(value[6], 7, "WMAX");
    if (!value[7].quoted)
        throw ParseError(8, value[7].column, "COMMENT must be quoted");
    r.comment = value[7].value;
    r.seed = text::expect_int<std::uint64_t>(value[8], 9, "SEED");
    inst.precision = text::expect_int<int>(value[9], 10, "PRECISION");
    inst.model_fingerprint = value[10].value;
    if (r.n < 0 || r.k < 0 || !(r.w_max > 0.0))
        throw ValidationError("instance header has invalid N, K or WMAX");
    if (!detail::is_md5_hex(inst.model_fingerprint))
        throw ParseError(11, value[10].column, "MODEL must be an MD5 digest");

    for (std::size_t i = header_lines; i < all.size(); ++i) {
        const std::size_t line = i + 1;
        auto tok = text::tokenize(all[i], line);
        if (tok.empty())
            continue;
        if (tok.size() != 4 || tok[0].value != "D")
            throw ParseError(line, 0, "expected 'D <edge> <alpha> <+|->'");
        DeliveryLocation d;
        d.edge = text::expect_int<std::size_t>(tok[1], line, "edge");
        d.alpha = text::expect_real(tok[2], line, "alpha");
        if (!(d.alpha >= 0.0 && d.alpha <= 1.0))
            throw ParseError(line, tok[2].column, "alpha outside [0, 1]");
        if (tok[3].value == "+")
            d.side = Side::plus;
        else if (tok[3].value == "-")
            d.side = Side::minus;
        else
            throw ParseError(line, tok[3].column, "side must be + or -");
        inst.deliveries.deliveries.push_back(d);
    }
    if (inst.deliveries.deliveries.size() != static_cast<std::size_t>(r.n) + 1)
        throw ValidationError("instance lists " + std::to_string(inst.deliveries.deliveries.size()) +
                              " deliveries, expected N + 1 = " + std::to_string(r.n + 1));
    return inst;
}

/// Throws if the instance references edges the graph does not have.
inline void check_against_graph(const Instance& inst, const StreetGraph& graph) {
    for (const auto& d : inst.deliveries.deliveries)
        if (d.edge >= graph.edges.size())
            throw ValidationError("instance references edge " + std::to_string(d.edge) + " but the graph has " +
                                  std::to_string(graph.edges.size()));
}

enum class VerifyStatus { pass, fail, skip };

inline const char* to_string(VerifyStatus s) {
    switch (s) {
    case VerifyStatus::pass:
        return "PASS";
    case VerifyStatus::fail:
        return "FAIL";
    default:
        return "SKIP";
    }
}

struct VerifyResult {
    std::int64_t id = 0;
    VerifyStatus status = VerifyStatus::skip;
    std::string expected; // catalog MD5 column
    std::string actual;   // regenerated fingerprint
};

/// Regenerates every row and compares fingerprints with the MD5 column.
inline std::vector<VerifyResult> verify_catalog(const StreetModel& model, std::string_view model_fp,
                                                const StreetGraph& graph, const Catalog& catalog,
                                                std::optional<int> precision = std::nullopt) {
    const auto table = edge_probabilities(model, graph);
    std::vector<VerifyResult> out;
    for (const auto& row : catalog.rows) {
        VerifyResult res;
        res.id = row.id;
        res.expected = row.md5;
        res.actual = fingerprint(generate_instance(model, model_fp, graph, table, row, precision));
        if (row.md5 == "-")
            res.status = VerifyStatus::skip;
        else
            res.status = res.actual == row.md5 ? VerifyStatus::pass : VerifyStatus::fail;
        out.push_back(std::move(res));
    }
    return out;
}

enum class Preset { toy, normal, on_strike, christmas };

struct PresetSpec {
    const char* name;
    std::int64_t rows;
    std::int64_t n_min, n_max;
    std::int64_t k_min, k_max;
    double hours;
    std::uint64_t seed_base;
};

inline constexpr PresetSpec preset_spec(Preset p) {
    switch (p) {
    case Preset::toy:
        return {"toy", 30, 3, 5000, 5, 15, 6.0, 1000};
    case Preset::normal:
        return {"normal", 15, 10000, 14000, 30, 30, 6.0, 2000};
    case Preset::on_strike:
        return {"onstrike", 15, 15000, 19000, 30, 30, 8.0, 3000};
    default:
        return {"christmas", 18, 20000, 30000, 30, 30, 8.0, 4000};
    }
}

/// Default conversion for hour-valued limits: walking pace in metres per hour.
inline constexpr double default_hours_to_units = 4680.0;

/// Benchmark set catalog: n and k spread evenly over the set's range, seeds
/// sequential from the set's base, digests unset.
inline Catalog preset_catalog(Preset p, double hours_to_units = default_hours_to_units) {
    const PresetSpec s = preset_spec(p);
    auto spread = [&](std::int64_t lo, std::int64_t hi, std::int64_t i) {
        return lo + (i * (hi - lo) + (s.rows - 1) / 2) / (s.rows - 1);
    };
    Catalog cat;
    cat.hours_to_units = hours_to_units;
    for (std::int64_t i = 0; i < s.rows; ++i) {
        CatalogRow r;
        r.id = i;
        r.n = spread(s.n_min, s.n_max, i);
        r.k = spread(s.k_min, s.k_max, i);
        r.dir = s.name;
        r.subdir = std::string(s.name) + "_" + std::to_string(r.n) + "_" + std::to_string(r.k);
        r.w_max = s.hours * hours_to_units;
        r.comment = std::string(s.name) + " set, " + std::to_string(r.n) + " deliveries, " +
                    text::shortest(s.hours) + " h routes";
        r.seed = s.seed_base + static_cast<std::uint64_t>(i);
        cat.rows.push_back(std::move(r));
    }
    return cat;
}

}

#endif
