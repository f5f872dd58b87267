#ifndef POSTVRP_RENDER_HPP
#define POSTVRP_RENDER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "core.hpp"
#include "geometry.hpp"
#include "model.hpp"
#include "sampling.hpp"
#include "text.hpp"

namespace postvrp {

struct RenderOptions {
    std::optional<std::string> background_href; // e.g. "background.png", linked not embedded
    double side_offset = 2.0;                    // pixels along the edge normal
    double dot_radius = 1.5;
    double depot_radius = 5.0;
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        case '\'':
            out += "&apos;";
            break;
        default:
            out.push_back(c);
        }
    }
    return out;
}

inline std::string route_color(std::size_t r) {
    static constexpr const char* palette[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                                              "#42d4f4", "#f032e6", "#9a6324", "#808000", "#000075"};
    constexpr std::size_t size = std::size(palette);
    if (r < size)
        return palette[r];
    // Golden-angle hue walk keeps later routes distinct from each other.
    const double hue = std::fmod(static_cast<double>(r) * 137.50776405, 360.0);
    return "hsl(" + text::fixed(hue, 1) + ",70%," + (r % 2 ? "35%" : "50%") + ")";
}

}

/**
 * SVG of the street map in background pixel coordinates: streets as
 * polylines, deliveries as dots nudged to their side of the street, the depot
 * as a larger marker, and optionally one colored polyline per route running
 * depot -> deliveries -> depot. All coordinates are clamped to the viewBox.
 */
inline std::string render_svg(const StreetModel& model, const StreetGraph& graph, const DeliverySet& deliveries,
                              const RoutePartition* routes = nullptr, const RenderOptions& opt = {}) {
    const double W = model.background_width;
    const double H = model.background_height;
    auto num = [](double v) { return text::fixed(v, 2); };
    auto clamp_pt = [&](Point p) { return Point{std::clamp(p.x, 0.0, W), std::clamp(p.y, 0.0, H)}; };
    auto pt = [&](Point p) {
        p = clamp_pt(p);
        return num(p.x) + "," + num(p.y);
    };

    // Delivery positions in pixels, offset along the edge normal by side.
    std::vector<Point> dots;
    dots.reserve(deliveries.deliveries.size());
    for (const auto& d : deliveries.deliveries) {
        const Edge& e = graph.edges.at(d.edge);
        Point p = (1.0 / model.pixel_value) * position(graph, d);
        Point dir = graph.vertices[e.v] - graph.vertices[e.u];
        double len = norm(dir);
        Point normal = len > 0 ? Point{-dir.y / len, dir.x / len} : Point{};
        double s = d.side == Side::plus ? opt.side_offset : -opt.side_offset;
        dots.push_back(clamp_pt(p + s * normal));
    }

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" viewBox=\"0 0 " +
           num(W) + " " + num(H) + "\" width=\"" + num(W) + "\" height=\"" + num(H) + "\">\n";
    if (opt.background_href)
        out += "<image href=\"" + detail::xml_escape(*opt.background_href) + "\" x=\"0\" y=\"0\" width=\"" + num(W) +
               "\" height=\"" + num(H) + "\"/>\n";
    else
        out += "<rect x=\"0\" y=\"0\" width=\"" + num(W) + "\" height=\"" + num(H) + "\" fill=\"white\"/>\n";

    out += "<g id=\"streets\" fill=\"none\" stroke=\"#9e9e9e\" stroke-linecap=\"round\">\n";
    for (const auto& s : model.streets) {
        out += "<polyline stroke-width=\"" + num(std::max(1.0, s.width_px / 4.0)) + "\" points=\"";
        for (std::size_t i = 0; i < s.chain.size(); ++i)
            out += (i ? " " : "") + pt(s.chain[i]);
        out += "\"><title>" + detail::xml_escape(s.name) + "</title></polyline>\n";
    }
    out += "</g>\n";

    if (routes && !dots.empty()) {
        out += "<g id=\"routes\" fill=\"none\" stroke-width=\"1.5\" stroke-linejoin=\"round\">\n";
        for (std::size_t r = 0; r < routes->routes.size(); ++r) {
            out += "<polyline stroke=\"" + detail::route_color(r) + "\" points=\"" + pt(dots[0]);
            for (std::size_t id : routes->routes[r])
                out += " " + pt(dots.at(id));
            out += " " + pt(dots[0]) + "\"/>\n";
        }
        out += "</g>\n";
    }

    out += "<g id=\"deliveries\" fill=\"#1a1a1a\">\n";
    for (std::size_t i = 1; i < dots.size(); ++i)
        out += "<circle cx=\"" + num(dots[i].x) + "\" cy=\"" + num(dots[i].y) + "\" r=\"" + num(opt.dot_radius) +
               "\"/>\n";
    out += "</g>\n";
    if (!dots.empty())
        out += "<circle id=\"depot\" cx=\"" + num(dots[0].x) + "\" cy=\"" + num(dots[0].y) + "\" r=\"" +
               num(opt.depot_radius) + "\" fill=\"#d50000\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "</svg>\n";
    return out;
}

}

#endif
