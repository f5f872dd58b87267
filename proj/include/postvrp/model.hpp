#ifndef POSTVRP_MODEL_HPP
#define POSTVRP_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "error.hpp"
#include "point.hpp"
#include "text.hpp"

namespace postvrp {

struct Level {
    std::string name;
    double value = 1.0;

    friend bool operator==(const Level&, const Level&) = default;
};

struct Attribute {
    std::string name;
    std::vector<Level> levels;

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// User-defined attribute system. A street's density is the product of the
/// values of the level it picks for each attribute.
struct AttributeTable {
    std::vector<Attribute> attributes;

    /// Index of `level` within attribute `attr`, or npos.
    std::size_t find_level(std::size_t attr, std::string_view level) const {
        const auto& lv = attributes.at(attr).levels;
        for (std::size_t i = 0; i < lv.size(); ++i)
            if (lv[i].name == level)
                return i;
        return npos;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const AttributeTable&, const AttributeTable&) = default;
};

struct Street {
    std::string name;
    std::vector<Point> chain; // pixels
    std::vector<std::size_t> levels; // one level index per attribute
    double width_px = 0.0;

    friend bool operator==(const Street&, const Street&) = default;
};

struct StreetModel {
    std::vector<Street> streets;
    AttributeTable attributes;
    Point depot; // pixels
    double beta = 0.0;
    double pixel_value = 1.0;
    int precision = 2;
    double background_width = 0.0;
    double background_height = 0.0;

    friend bool operator==(const StreetModel&, const StreetModel&) = default;
};

/// Non-normalized delivery density: product of the chosen level values.
inline double density(const StreetModel& model, const Street& street) {
    double d = 1.0;
    for (std::size_t a = 0; a < model.attributes.attributes.size(); ++a)
        d *= model.attributes.attributes[a].levels[street.levels[a]].value;
    return d;
}

inline double density(const StreetModel& model, std::size_t street) {
    return density(model, model.streets.at(street));
}

/// Cost of crossing the street, in length units.
inline double crossing_width(const StreetModel& model, const Street& street) {
    return street.width_px * model.pixel_value;
}

inline double crossing_width(const StreetModel& model, std::size_t street) {
    return crossing_width(model, model.streets.at(street));
}

/// Throws ValidationError if any model invariant is broken.
inline void validate(const StreetModel& m) {
    if (!(m.pixel_value > 0.0))
        throw ValidationError("PIXEL_VALUE must be positive");
    if (m.precision < 0 || m.precision > 12)
        throw ValidationError("PRECISION must be in [0, 12]");
    if (!(m.beta >= 0.0))
        throw ValidationError("BETA must be non-negative");
    if (!(m.background_width > 0.0) || !(m.background_height > 0.0))
        throw ValidationError("BACKGROUND dimensions must be positive");
    if (m.depot.x < 0.0 || m.depot.y < 0.0 || m.depot.x > m.background_width || m.depot.y > m.background_height)
        throw ValidationError("depot outside background");

    std::unordered_set<std::string> names;
    for (const auto& a : m.attributes.attributes) {
        if (a.name.empty() || a.name.find_first_of(" \t#\"") != std::string::npos)
            throw ValidationError("invalid attribute name '" + a.name + "'");
        if (!names.insert(a.name).second)
            throw ValidationError("duplicate attribute '" + a.name + "'");
        if (a.levels.empty())
            throw ValidationError("attribute '" + a.name + "' has no levels");
        std::unordered_set<std::string> level_names;
        for (const auto& l : a.levels) {
            if (l.name.empty() || l.name.find_first_of(",= \t#\"") != std::string::npos)
                throw ValidationError("invalid level name '" + l.name + "'");
            if (!level_names.insert(l.name).second)
                throw ValidationError("duplicate level '" + l.name + "' in attribute '" + a.name + "'");
            if (!(l.value >= 0.0))
                throw ValidationError("negative value for level '" + l.name + "'");
        }
    }

    if (m.streets.empty())
        throw ValidationError("model has no streets");
    names.clear();
    for (const auto& s : m.streets) {
        if (!names.insert(s.name).second)
            throw ValidationError("duplicate street name '" + s.name + "'");
        if (s.chain.size() < 2)
            throw ValidationError("street '" + s.name + "' needs at least two chain points");
        for (std::size_t i = 1; i < s.chain.size(); ++i)
            if (s.chain[i] == s.chain[i - 1])
                throw ValidationError("street '" + s.name + "' repeats a chain point");
        if (s.levels.size() != m.attributes.attributes.size())
            throw ValidationError("street '" + s.name + "' must pick one level per attribute");
        for (std::size_t a = 0; a < s.levels.size(); ++a)
            if (s.levels[a] >= m.attributes.attributes[a].levels.size())
                throw ValidationError("street '" + s.name + "' has an unknown level");
        if (!(s.width_px >= 0.0))
            throw ValidationError("street '" + s.name + "' has a negative width");
    }
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t end = s.find(sep, start);
        out.push_back(s.substr(start, end == std::string::npos ? std::string::npos : end - start));
        if (end == std::string::npos)
            return out;
        start = end + 1;
    }
}

}

/// Parses a model file. Every header field must appear exactly once; ATTRIBUTE
/// and STREET lines may appear in any order after the MODEL line.
inline StreetModel parse_model(std::string_view input) {
    using text::Token;
    StreetModel m;

    struct PendingStreet {
        std::size_t line;
        std::size_t column;
        std::vector<std::string> levels;
    };
    std::vector<PendingStreet> pending;
    bool seen_model = false, seen_bg = false, seen_depot = false, seen_beta = false, seen_prec = false,
         seen_pixel = false;

    auto once = [](bool& flag, std::size_t line, const char* key) {
        if (flag)
            throw ParseError(line, 1, std::string("duplicate ") + key + " line");
        flag = true;
    };
    auto arity = [](const std::vector<Token>& t, std::size_t n, std::size_t line) {
        if (t.size() != n)
            throw ParseError(line, t.size() > n ? t[n].column : 0,
                             t[0].value + " expects " + std::to_string(n - 1) + " value(s)");
    };

    auto all_lines = text::lines(input);
    for (std::size_t li = 0; li < all_lines.size(); ++li) {
        const std::size_t line = li + 1;
        auto tok = text::tokenize(all_lines[li], line);
        if (tok.empty())
            continue;
        const std::string& key = tok[0].value;
        if (!seen_model) {
            if (key != "MODEL")
                throw ParseError(line, tok[0].column, "model file must start with 'MODEL 1'");
            arity(tok, 2, line);
            if (tok[1].value != "1")
                throw ParseError(line, tok[1].column, "unsupported model version '" + tok[1].value + "'");
            seen_model = true;
        } else if (key == "MODEL") {
            throw ParseError(line, 1, "duplicate MODEL line");
        } else if (key == "BACKGROUND") {
            once(seen_bg, line, "BACKGROUND");
            arity(tok, 3, line);
            m.background_width = text::expect_int<long>(tok[1], line, "background width");
            m.background_height = text::expect_int<long>(tok[2], line, "background height");
        } else if (key == "DEPOT") {
            once(seen_depot, line, "DEPOT");
            arity(tok, 3, line);
            m.depot = {text::expect_real(tok[1], line, "depot x"), text::expect_real(tok[2], line, "depot y")};
        } else if (key == "BETA") {
            once(seen_beta, line, "BETA");
            arity(tok, 2, line);
            m.beta = text::expect_real(tok[1], line, "BETA");
        } else if (key == "PRECISION") {
            once(seen_prec, line, "PRECISION");
            arity(tok, 2, line);
            m.precision = text::expect_int<int>(tok[1], line, "PRECISION");
        } else if (key == "PIXEL_VALUE") {
            once(seen_pixel, line, "PIXEL_VALUE");
            arity(tok, 2, line);
            m.pixel_value = text::expect_real(tok[1], line, "PIXEL_VALUE");
        } else if (key == "ATTRIBUTE") {
            if (tok.size() < 3)
                throw ParseError(line, 0, "ATTRIBUTE needs a name and at least one level");
            Attribute attr{tok[1].value, {}};
            for (std::size_t i = 2; i < tok.size(); ++i) {
                auto eq = tok[i].value.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw ParseError(line, tok[i].column, "expected <level>=<value>");
                Token v{tok[i].value.substr(eq + 1), tok[i].column + eq + 1, false};
                attr.levels.push_back({tok[i].value.substr(0, eq), text::expect_real(v, line, "level value")});
            }
            m.attributes.attributes.push_back(std::move(attr));
        } else if (key == "STREET") {
            if (tok.size() < 7 || !tok[1].quoted)
                throw ParseError(line, 0, "expected STREET \"<name>\" WIDTH <w> LEVELS <l1,...> CHAIN <x,y> ...");
            if (tok[2].value != "WIDTH")
                throw ParseError(line, tok[2].column, "expected WIDTH");
            if (tok[4].value != "LEVELS")
                throw ParseError(line, tok[4].column, "expected LEVELS");
            if (tok[6].value != "CHAIN")
                throw ParseError(line, tok[6].column, "expected CHAIN");
            Street s;
            s.name = tok[1].value;
            s.width_px = text::expect_real(tok[3], line, "WIDTH");
            for (std::size_t i = 7; i < tok.size(); ++i) {
                auto comma = tok[i].value.find(',');
                if (comma == std::string::npos)
                    throw ParseError(line, tok[i].column, "expected <x>,<y>");
                Token xs{tok[i].value.substr(0, comma), tok[i].column, false};
                Token ys{tok[i].value.substr(comma + 1), tok[i].column + comma + 1, false};
                s.chain.push_back({text::expect_real(xs, line, "x"), text::expect_real(ys, line, "y")});
            }
            pending.push_back({line, tok[5].column, detail::split(tok[5].value, ',')});
            m.streets.push_back(std::move(s));
        } else {
            throw ParseError(line, tok[0].column, "unknown keyword '" + key + "'");
        }
    }

    if (!seen_model)
        throw ParseError(1, 0, "empty model file");
    const std::pair<bool, const char*> required[] = {{seen_bg, "BACKGROUND"}, {seen_depot, "DEPOT"},
                                                      {seen_beta, "BETA"},     {seen_prec, "PRECISION"},
                                                      {seen_pixel, "PIXEL_VALUE"}};
    for (auto [seen, name] : required)
        if (!seen)
            throw ParseError(all_lines.size(), 0, std::string("missing ") + name + " line");

    const auto& attrs = m.attributes.attributes;
    for (std::size_t si = 0; si < m.streets.size(); ++si) {
        const auto& p = pending[si];
        if (p.levels.size() != attrs.size())
            throw ParseError(p.line, p.column,
                             "street '" + m.streets[si].name + "' lists " + std::to_string(p.levels.size()) +
                                 " level(s) for " + std::to_string(attrs.size()) + " attribute(s)");
        for (std::size_t a = 0; a < attrs.size(); ++a) {
            std::size_t idx = m.attributes.find_level(a, p.levels[a]);
            if (idx == AttributeTable::npos)
                throw ParseError(p.line, p.column,
                                 "unknown level '" + p.levels[a] + "' for attribute '" + attrs[a].name + "'");
            m.streets[si].levels.push_back(idx);
        }
    }

    validate(m);
    return m;
}

/// Canonical text form; parse_model(print_model(m)) == m.
inline std::string print_model(const StreetModel& m) {
    using text::shortest;
    std::string out = "MODEL 1\n";
    out += "BACKGROUND " + shortest(m.background_width) + " " + shortest(m.background_height) + "\n";
    out += "DEPOT " + shortest(m.depot.x) + " " + shortest(m.depot.y) + "\n";
    out += "BETA " + shortest(m.beta) + "\n";
    out += "PRECISION " + std::to_string(m.precision) + "\n";
    out += "PIXEL_VALUE " + shortest(m.pixel_value) + "\n";
    for (const auto& a : m.attributes.attributes) {
        out += "ATTRIBUTE " + a.name;
        for (const auto& l : a.levels)
            out += " " + l.name + "=" + shortest(l.value);
        out += "\n";
    }
    for (const auto& s : m.streets) {
        out += "STREET " + text::quote(s.name) + " WIDTH " + shortest(s.width_px) + " LEVELS ";
        for (std::size_t a = 0; a < s.levels.size(); ++a) {
            if (a)
                out += ",";
            out += m.attributes.attributes[a].levels[s.levels[a]].name;
        }
        out += " CHAIN";
        for (const auto& p : s.chain)
            out += " " + shortest(p.x) + "," + shortest(p.y);
        out += "\n";
    }
    return out;
}

}

#endif
