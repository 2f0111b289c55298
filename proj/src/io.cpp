// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace hyperact {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw Error(ErrorKind::InputError, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        auto field = s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
        out.push_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double number(std::string_view field, std::size_t line, const char* name) {
    double v = 0.0;
    const auto r = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || r.ec != std::errc() || r.ptr != field.data() + field.size() || !std::isfinite(v)) {
        fail(line, std::string("bad ") + name + " '" + std::string(field) + "'");
    }
    return v;
}

int whole(std::string_view field, std::size_t line, const char* name) {
    int v = 0;
    const auto r = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || r.ec != std::errc() || r.ptr != field.data() + field.size()) {
        fail(line, std::string("bad ") + name + " '" + std::string(field) + "'");
    }
    return v;
}

std::ifstream open(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return in;
}

}  // namespace

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::vector<Detection> read_detections(std::istream& in) {
    std::vector<Detection> out;
    std::string line;
    std::size_t line_no = 0;
    int dim = -1;
    int last_frame = -1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s(line);
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
        if (s.empty()) continue;
        if (s.front() == '#') {
            const auto pos = s.find("F=");
            if (pos != std::string_view::npos) {
                dim = whole(s.substr(pos + 2), line_no, "appearance width");
                if (dim < 0) fail(line_no, "negative appearance width");
            }
            continue;
        }
        const auto fields = split(s);
        const std::size_t expected = 6 + static_cast<std::size_t>(std::max(dim, 0));
        if (fields.size() != expected) {
            fail(line_no, "expected " + std::to_string(expected) + " fields, got " + std::to_string(fields.size()));
        }
        Detection d;
        d.frame = whole(fields[0], line_no, "frame");
        d.box = {number(fields[1], line_no, "x"), number(fields[2], line_no, "y"), number(fields[3], line_no, "w"),
                 number(fields[4], line_no, "h")};
        d.confidence = number(fields[5], line_no, "confidence");
        for (std::size_t k = 6; k < fields.size(); ++k) d.appearance.push_back(number(fields[k], line_no, "feature"));
        try {
            validate(d);
        } catch (const Error& e) {
            fail(line_no, e.detail());
        }
        if (d.frame < last_frame) fail(line_no, "frame " + std::to_string(d.frame) + " out of order");
        last_frame = d.frame;
        out.push_back(std::move(d));
    }
    return out;
}

void write_detections(std::ostream& out, const std::vector<Detection>& detections) {
    std::size_t dim = 0;
    for (const auto& d : detections) dim = std::max(dim, d.appearance.size());
    if (dim > 0) out << "# F=" << dim << "\n";
    for (const auto& d : detections) {
        out << d.frame << ',' << format_number(d.box.x) << ',' << format_number(d.box.y) << ',' << format_number(d.box.w)
            << ',' << format_number(d.box.h) << ',' << format_number(d.confidence);
        for (std::size_t k = 0; k < dim; ++k) out << ',' << format_number(k < d.appearance.size() ? d.appearance[k] : 0.0);
        out << '\n';
    }
}

std::vector<TrackRow> read_tracks(std::istream& in) {
    std::vector<TrackRow> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s(line);
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
        if (s.empty() || s.front() == '#') continue;
        const auto fields = split(s);
        if (fields.size() < 7) fail(line_no, "expected at least 7 fields, got " + std::to_string(fields.size()));
        TrackRow r;
        r.frame = whole(fields[0], line_no, "frame");
        r.id = whole(fields[1], line_no, "id");
        r.box = {number(fields[2], line_no, "x"), number(fields[3], line_no, "y"), number(fields[4], line_no, "w"),
                 number(fields[5], line_no, "h")};
        r.confidence = number(fields[6], line_no, "confidence");
        if (r.box.w <= 0.0 || r.box.h <= 0.0) fail(line_no, "non-positive box");
        out.push_back(r);
    }
    return out;
}

void write_track_rows(std::ostream& out, const std::vector<TrackRow>& rows) {
    for (const auto& r : rows) {
        out << r.frame << ',' << r.id << ',' << format_number(r.box.x) << ',' << format_number(r.box.y) << ','
            << format_number(r.box.w) << ',' << format_number(r.box.h) << ',' << format_number(r.confidence)
            << ",-1,-1,-1\n";
    }
}

std::string activities_to_json(const FrameActivities& frame) {
    nlohmann::ordered_json j;
    j["frame"] = frame.frame;
    j["scene"] = frame.scene ? nlohmann::ordered_json(to_string(*frame.scene)) : nlohmann::ordered_json(nullptr);
    j["targets"] = nlohmann::ordered_json::array();
    for (const auto& t : frame.targets) {
        nlohmann::ordered_json o;
        o["id"] = t.id;
        o["individual"] = to_string(t.individual);
        o["collective"] = t.collective ? nlohmann::ordered_json(to_string(*t.collective)) : nlohmann::ordered_json(nullptr);
        j["targets"].push_back(std::move(o));
    }
    j["interactions"] = nlohmann::ordered_json::array();
    for (const auto& r : frame.interactions) {
        nlohmann::ordered_json o;
        o["i"] = r.i;
        o["j"] = r.j;
        o["label"] = to_string(r.label);
        o["p"] = r.p;
        j["interactions"].push_back(std::move(o));
    }
    return j.dump();
}

FrameActivities activities_from_json(const std::string& line) {
    FrameActivities f;
    try {
        const auto j = nlohmann::json::parse(line);
        f.frame = j.at("frame").get<int>();
        auto collective = [](const nlohmann::json& v) -> std::optional<Collective> {
            if (v.is_null()) return std::nullopt;
            const auto c = parse_collective(v.get<std::string>());
            if (!c) throw Error(ErrorKind::InputError, "unknown collective " + v.get<std::string>());
            return c;
        };
        if (j.contains("scene")) f.scene = collective(j["scene"]);
        for (const auto& t : j.value("targets", nlohmann::json::array())) {
            TargetActivity a;
            a.id = t.at("id").get<int>();
            const auto ind = parse_individual(t.at("individual").get<std::string>());
            if (!ind) throw Error(ErrorKind::InputError, "unknown individual activity");
            a.individual = *ind;
            if (t.contains("collective")) a.collective = collective(t["collective"]);
            f.targets.push_back(a);
        }
        for (const auto& r : j.value("interactions", nlohmann::json::array())) {
            InteractionRecord rec;
            rec.i = r.at("i").get<int>();
            rec.j = r.at("j").get<int>();
            const auto label = parse_interaction(r.at("label").get<std::string>());
            if (!label) throw Error(ErrorKind::InputError, "unknown interaction label");
            rec.label = *label;
            rec.p = r.value("p", 0.0);
            f.interactions.push_back(rec);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InputError, e.what());
    }
    return f;
}

std::vector<FrameActivities> read_activities(std::istream& in) {
    std::vector<FrameActivities> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(activities_from_json(line));
        } catch (const Error& e) {
            fail(line_no, e.detail());
        }
    }
    return out;
}

void write_activities(std::ostream& out, const std::vector<FrameActivities>& frames) {
    for (const auto& f : frames) out << activities_to_json(f) << '\n';
}

std::vector<Detection> load_detections(const std::string& path) {
    auto in = open(path);
    return read_detections(in);
}

std::vector<TrackRow> load_tracks(const std::string& path) {
    auto in = open(path);
    return read_tracks(in);
}

std::vector<FrameActivities> load_activities(const std::string& path) {
    auto in = open(path);
    return read_activities(in);
}

}  // namespace hyperact
