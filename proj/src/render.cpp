#include "tunnel/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace tunnel {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    return s == "-0.00" ? "0.00" : s;
}

class Svg {
public:
    Svg(double w, double h) {
        text_ = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
                "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
    }
    void raw(const std::string& s) { text_ += s + "\n"; }
    void rect(double x, double y, double w, double h, const std::string& style) {
        raw("<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" " +
            style + "/>");
    }
    void circle(double x, double y, double r, const std::string& style) {
        raw("<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(r) + "\" " + style + "/>");
    }
    void line(double x1, double y1, double x2, double y2, const std::string& style) {
        raw("<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) + "\" " +
            style + "/>");
    }
    void poly(const std::string& tag, const std::vector<std::pair<double, double>>& pts, const std::string& style) {
        std::string p;
        for (const auto& [x, y] : pts) p += (p.empty() ? "" : " ") + num(x) + "," + num(y);
        raw("<" + tag + " points=\"" + p + "\" " + style + "/>");
    }
    void label(double x, double y, const std::string& s, const std::string& style) {
        raw("<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" " + style + ">" + s + "</text>");
    }
    std::string finish() { return text_ + "</svg>\n"; }

private:
    std::string text_;
};

}  // namespace

std::string render_frame(const AircraftState& s, const TunnelWorld& world, int step) {
    constexpr double W = 800.0, H = 600.0;
    Svg svg(W, H);
    svg.rect(0, 0, W, H, "fill=\"#87a9c9\"");

    // Rear view: looking north, east to the right, up is up.
    const double scale = 400.0 / (2.0 * world.half_width());
    const double cx = W / 2.0, cy = 240.0;
    auto to_x = [&](double pe) { return cx + pe * scale; };
    auto to_y = [&](double h) { return cy - (h - world.center_altitude()) * scale; };
    svg.rect(to_x(-world.half_width()), to_y(world.center_altitude() + world.half_height()),
             2.0 * world.half_width() * scale, 2.0 * world.half_height() * scale,
             "class=\"wall\" fill=\"#d9d4c7\" stroke=\"#333333\" stroke-width=\"4\"");
    svg.line(to_x(0.0) - 6, to_y(world.center_altitude()), to_x(0.0) + 6, to_y(world.center_altitude()),
             "stroke=\"#888888\"");
    svg.line(to_x(0.0), to_y(world.center_altitude()) - 6, to_x(0.0), to_y(world.center_altitude()) + 6,
             "stroke=\"#888888\"");

    const double ax = to_x(s.pe), ay = to_y(s.h);
    const double span = kWingspan * scale;
    svg.circle(ax, ay, world.aircraft_radius() * scale,
               "class=\"radius\" fill=\"none\" stroke=\"#1f4e99\" stroke-dasharray=\"6,4\" stroke-width=\"2\"");
    // SVG rotation is clockwise on screen, which matches right-wing-down roll.
    const double roll_deg = s.phi * kRadToDeg;
    svg.raw("<g class=\"aircraft\" transform=\"translate(" + num(ax) + "," + num(ay) + ") rotate(" + num(roll_deg) +
            ")\">");
    svg.line(-span / 2.0, 0, span / 2.0, 0, "stroke=\"#444444\" stroke-width=\"4\"");
    svg.line(0, 0, 0, -0.35 * span, "stroke=\"#444444\" stroke-width=\"4\"");
    svg.line(-0.18 * span, -0.02 * span, 0.18 * span, -0.02 * span, "stroke=\"#444444\" stroke-width=\"3\"");
    svg.circle(0, 0, 0.09 * span, "fill=\"#666666\"");
    svg.circle(0, 0, 0.05 * span, "class=\"exhaust\" fill=\"#e02020\"");
    svg.raw("</g>");

    // Bird's-eye strip: north to the right.
    const double sx = 20.0, sy = 500.0, sw = W - 40.0, sh = 60.0;
    svg.rect(sx, sy, sw, sh, "class=\"strip\" fill=\"#d9d4c7\" stroke=\"#333333\" stroke-width=\"2\"");
    for (const auto& g : world.gates()) {
        const double gx = sx + sw * g.pn / world.length();
        svg.line(gx, sy, gx, sy + sh,
                 s.pn >= g.pn ? "stroke=\"#3a9a3a\" stroke-width=\"0.5\"" : "stroke=\"#999999\" stroke-width=\"0.5\"");
    }
    const double px = sx + sw * std::clamp(s.pn / world.length(), 0.0, 1.0);
    const double py = sy + sh / 2.0 + (s.pe / world.half_width()) * (sh / 2.0);
    svg.circle(px, py, 4.0, "class=\"strip-aircraft\" fill=\"#e02020\"");

    svg.label(20, 30,
              "step " + std::to_string(step) + "  pn " + num(s.pn) + " ft  vt " + num(s.vt) + " ft/s  h " + num(s.h) +
                  " ft",
              "font-family=\"monospace\" font-size=\"16\" fill=\"#111111\"");
    return svg.finish();
}

std::string render_frame(const MissionFrame& f, const MissionWorld& world) {
    const auto& b = world.bounds;
    const double margin = 20.0;
    const double scale = 760.0 / std::max(b.pn_max - b.pn_min, b.pe_max - b.pe_min);
    const double W = (b.pe_max - b.pe_min) * scale + 2.0 * margin;
    const double H = (b.pn_max - b.pn_min) * scale + 2.0 * margin + 30.0;
    auto X = [&](double pe) { return margin + (pe - b.pe_min) * scale; };
    auto Y = [&](double pn) { return margin + 30.0 + (b.pn_max - pn) * scale; };
    auto pts = [&](const std::vector<Vec2>& v) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : v) out.emplace_back(X(p.pe), Y(p.pn));
        return out;
    };

    Svg svg(W, H);
    svg.rect(0, 0, W, H, "fill=\"#1b2430\"");
    svg.rect(X(b.pe_min), Y(b.pn_max), (b.pe_max - b.pe_min) * scale, (b.pn_max - b.pn_min) * scale,
             "fill=\"#2d3b2d\" stroke=\"#888888\"");
    for (const auto& t : world.terrain) {
        svg.poly("polygon", pts(t.vertices),
                 t.height >= 1000.0 ? "class=\"terrain\" fill=\"#6b5b45\"" : "class=\"terrain\" fill=\"#4d5a3c\"");
    }
    if (!f.footprint.empty()) {
        svg.poly("polygon", pts(f.footprint),
                 "class=\"footprint\" fill=\"#20c020\" fill-opacity=\"0.25\" stroke=\"#20e020\" stroke-width=\"1.5\"");
    }
    for (const auto& z : world.true_eob) {
        svg.circle(X(z.center.pe), Y(z.center.pn), z.radius * scale,
                   std::string("class=\"true-zone\" fill=\"#e02020\" fill-opacity=\"") + (z.active ? "0.35" : "0.1") +
                       "\" stroke=\"#ff3030\" stroke-width=\"2\"");
    }
    for (const auto& z : world.perceived_eob) {
        svg.circle(X(z.center.pe), Y(z.center.pn), z.radius * scale,
                   "class=\"perceived-zone\" fill=\"none\" stroke=\"#3070ff\" stroke-width=\"2\"");
    }
    svg.circle(X(world.goal.center.pe), Y(world.goal.center.pn), world.goal.radius * scale,
               "class=\"goal\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"2.5\"");
    if (f.path.size() > 1) {
        svg.poly("polyline", pts(f.path),
                 "class=\"path\" fill=\"none\" stroke=\"#e0d040\" stroke-width=\"1.2\" stroke-dasharray=\"4,3\"");
    }
    const double ax = X(f.state.pe), ay = Y(f.state.pn);
    svg.raw("<g class=\"aircraft\" transform=\"translate(" + num(ax) + "," + num(ay) + ") rotate(" +
            num(f.state.psi * kRadToDeg) + ")\">");
    svg.poly("polygon", {{0.0, -9.0}, {6.0, 7.0}, {0.0, 4.0}, {-6.0, 7.0}}, "fill=\"#ffffff\"");
    svg.raw("</g>");
    svg.label(margin, 22,
              "step " + std::to_string(f.step) + "  pn " + num(f.state.pn) + "  pe " + num(f.state.pe) + "  h " +
                  num(f.state.h),
              "font-family=\"monospace\" font-size=\"14\" fill=\"#ffffff\"");
    return svg.finish();
}

}  // namespace tunnel
