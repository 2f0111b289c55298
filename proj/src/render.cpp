// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/render.hpp"

#include "hyperact/io.hpp"

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace hyperact {

namespace {

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* color(int id) { return kPalette[static_cast<std::size_t>((id % 10 + 10) % 10)]; }

std::string fmt(double v) { return format_number(std::round(v * 100.0) / 100.0); }

}  // namespace

std::string render_frame_svg(int frame, std::span<const TrackRow> rows, const FrameActivities* activities,
                             const RenderOptions& options) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
       << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
       << "\" fill=\"#ffffff\"/>\n";
    std::string banner = "frame " + std::to_string(frame);
    if (activities != nullptr && activities->scene) banner += " | " + std::string(to_string(*activities->scene));
    os << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"28\" fill=\"#222222\"/>\n";
    os << "<text x=\"8\" y=\"19\" font-family=\"monospace\" font-size=\"16\" fill=\"#ffffff\">" << banner
       << "</text>\n";

    std::map<int, const TrackRow*> by_id;
    for (const auto& r : rows) {
        if (r.frame == frame) by_id[r.id] = &r;
    }
    std::map<int, const TargetActivity*> labels;
    if (activities != nullptr) {
        for (const auto& t : activities->targets) labels[t.id] = &t;
        for (const auto& rec : activities->interactions) {
            const auto a = by_id.find(rec.i);
            const auto b = by_id.find(rec.j);
            if (a == by_id.end() || b == by_id.end()) continue;
            const Vec2 fa = a->second->box.foot();
            const Vec2 fb = b->second->box.foot();
            os << "<line x1=\"" << fmt(fa.x) << "\" y1=\"" << fmt(fa.y) << "\" x2=\"" << fmt(fb.x) << "\" y2=\""
               << fmt(fb.y) << "\" stroke=\"#444444\" stroke-width=\"2\"><title>" << to_string(rec.label)
               << "</title></line>\n";
        }
    }
    for (const auto& [id, r] : by_id) {
        os << "<rect x=\"" << fmt(r->box.x) << "\" y=\"" << fmt(r->box.y) << "\" width=\"" << fmt(r->box.w)
           << "\" height=\"" << fmt(r->box.h) << "\" fill=\"none\" stroke=\"" << color(id)
           << "\" stroke-width=\"2\"/>\n";
        std::string tag = std::to_string(id);
        const auto l = labels.find(id);
        if (l != labels.end()) tag += " " + std::string(to_string(l->second->individual));
        os << "<text x=\"" << fmt(r->box.x) << "\" y=\"" << fmt(r->box.y - 4.0)
           << "\" font-family=\"monospace\" font-size=\"12\" fill=\"" << color(id) << "\">" << tag << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::vector<std::pair<int, std::string>> render_svgs(std::span<const TrackRow> tracks,
                                                     std::span<const FrameActivities> activities, int first, int last,
                                                     const RenderOptions& options) {
    std::set<int> frames;
    for (const auto& r : tracks) {
        if (r.frame >= first && r.frame <= last) frames.insert(r.frame);
    }
    std::map<int, const FrameActivities*> acts;
    for (const auto& a : activities) {
        if (a.frame >= first && a.frame <= last) {
            acts[a.frame] = &a;
            frames.insert(a.frame);
        }
    }
    std::vector<std::pair<int, std::string>> out;
    for (int f : frames) {
        const auto a = acts.find(f);
        out.emplace_back(f, render_frame_svg(f, tracks, a == acts.end() ? nullptr : a->second, options));
    }
    return out;
}

}  // namespace hyperact
