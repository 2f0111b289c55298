// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace hyperact {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw Error(ErrorKind::InputError, "bad value '" + std::string(value) + "' for " + std::string(key));
}

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(key, v);
    return out;
}

long long parse_int(std::string_view key, std::string_view v) {
    long long out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(key, v);
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    bad_value(key, v);
}

template <typename T, typename F>
std::vector<T> parse_list(std::string_view key, std::string_view v, F parse) {
    std::vector<T> out;
    if (trim(v).empty()) return out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const auto item = trim(v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        const auto parsed = parse(item);
        if (!parsed) bad_value(key, item);
        out.push_back(*parsed);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

struct Entry {
    std::string key;
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, std::string_view)> set;
};

template <typename Access>
Entry real(std::string key, Access access) {
    return {key, [access](const PipelineConfig& c) { return format_double(access(c)); },
            [access, key](PipelineConfig& c, std::string_view v) { access(c) = parse_double(key, v); }};
}

template <typename Access>
Entry integer(std::string key, Access access) {
    return {key,
            [access](const PipelineConfig& c) { return std::to_string(access(c)); },
            [access, key](PipelineConfig& c, std::string_view v) {
                using T = std::remove_reference_t<decltype(access(c))>;
                access(c) = static_cast<T>(parse_int(key, v));
            }};
}

template <typename Access>
Entry boolean(std::string key, Access access) {
    return {key, [access](const PipelineConfig& c) { return std::string(access(c) ? "true" : "false"); },
            [access, key](PipelineConfig& c, std::string_view v) { access(c) = parse_bool(key, v); }};
}

template <typename Access, typename Parse>
Entry enumerated(std::string key, Access access, Parse parse) {
    return {key, [access](const PipelineConfig& c) { return std::string(to_string(access(c))); },
            [access, key, parse](PipelineConfig& c, std::string_view v) {
                const auto p = parse(v);
                if (!p) bad_value(key, v);
                access(c) = *p;
            }};
}

std::vector<Entry> build_entries() {
    std::vector<Entry> e;
    using C = PipelineConfig;
    e.push_back(integer("pipeline.fps", [](auto& c) -> auto& { return c.fps; }));
    e.push_back(integer("pipeline.window", [](auto& c) -> auto& { return c.window; }));
    e.push_back(integer("pipeline.seed", [](auto& c) -> auto& { return c.seed; }));

    e.push_back(real("builder.gate_px", [](auto& c) -> auto& { return c.builder.gate_px; }));
    e.push_back(real("builder.gate_growth_px", [](auto& c) -> auto& { return c.builder.gate_growth_px; }));
    e.push_back(integer("builder.max_bridge", [](auto& c) -> auto& { return c.builder.max_bridge; }));
    e.push_back(real("builder.appearance_weight", [](auto& c) -> auto& { return c.builder.appearance_weight; }));
    e.push_back(integer("builder.velocity_span", [](auto& c) -> auto& { return c.builder.velocity_span; }));

    e.push_back(real("tracking.theta_a", [](auto& c) -> auto& { return c.link.theta_a; }));
    e.push_back(real("tracking.tau_a", [](auto& c) -> auto& { return c.tau_a_seconds; }));
    e.push_back(integer("tracking.degree", [](auto& c) -> auto& { return c.link.degree; }));
    e.push_back(real("tracking.lambda_a", [](auto& c) -> auto& { return c.link.lambda_a; }));
    e.push_back(real("tracking.lambda_d", [](auto& c) -> auto& { return c.link.lambda_d; }));
    e.push_back(real("tracking.lambda_g", [](auto& c) -> auto& { return c.link.lambda_g; }));
    e.push_back(integer("tracking.edge_cap", [](auto& c) -> auto& { return c.link.edge_cap; }));
    e.push_back(integer("tracking.max_link_gap", [](auto& c) -> auto& { return c.link.max_link_gap; }));
    e.push_back(real("tracking.gate_px", [](auto& c) -> auto& { return c.link.link_gate_px; }));
    e.push_back(real("tracking.gate_growth_px", [](auto& c) -> auto& { return c.link.link_gate_growth_px; }));
    e.push_back(integer("tracking.velocity_span", [](auto& c) -> auto& { return c.link.velocity_span; }));
    e.push_back(integer("tracking.appearance_history", [](auto& c) -> auto& { return c.link.appearance_history; }));
    e.push_back(boolean("tracking.hypergraph", [](auto& c) -> auto& { return c.link.use_hypergraph; }));
    e.push_back(integer("tracking.kappa_max", [](auto& c) -> auto& { return c.link.search.kappa_max; }));

    e.push_back(real("grouping.mu_d", [](auto& c) -> auto& { return c.grouping.mu_d; }));
    e.push_back(real("grouping.sigma_d", [](auto& c) -> auto& { return c.grouping.sigma_d; }));
    e.push_back(real("grouping.angle_c", [](auto& c) -> auto& { return c.grouping.angle_c; }));
    e.push_back(real("grouping.sigma_v", [](auto& c) -> auto& { return c.grouping.sigma_v; }));
    e.push_back(real("grouping.activity_mismatch", [](auto& c) -> auto& { return c.grouping.activity_mismatch; }));
    e.push_back(real("grouping.sparsify", [](auto& c) -> auto& { return c.grouping.sparsify_threshold; }));

    e.push_back(real("activity.theta_sw", [](auto& c) -> auto& { return c.link.speed.theta_sw; }));
    e.push_back(real("activity.w1", [](auto& c) -> auto& { return c.link.speed.w1; }));
    e.push_back(real("activity.theta_wr", [](auto& c) -> auto& { return c.link.speed.theta_wr; }));
    e.push_back(real("activity.w2", [](auto& c) -> auto& { return c.link.speed.w2; }));
    e.push_back(boolean("activity.running", [](auto& c) -> auto& { return c.link.speed.use_running; }));
    e.push_back(integer("activity.speed_span", [](auto& c) -> auto& { return c.link.speed.speed_span; }));
    e.push_back(integer("activity.classify_span", [](auto& c) -> auto& { return c.link.speed.classify_span; }));
    e.push_back(integer("activity.velocity_span", [](auto& c) -> auto& { return c.link.facing.velocity_span; }));
    e.push_back(real("activity.moving_speed", [](auto& c) -> auto& { return c.link.facing.moving_speed; }));
    e.push_back(integer("activity.history_span", [](auto& c) -> auto& { return c.link.facing.history_span; }));

    e.push_back(integer("recognition.h", [](auto& c) -> auto& { return c.hypotheses.count; }));
    e.push_back(real("recognition.perturb_radius", [](auto& c) -> auto& { return c.hypotheses.perturb_radius; }));
    e.push_back(boolean("recognition.recovery", [](auto& c) -> auto& { return c.recovery; }));
    e.push_back(integer("recognition.kappa_max", [](auto& c) -> auto& { return c.recognition.search.kappa_max; }));
    e.push_back(real("recognition.min_edge_mean", [](auto& c) -> auto& { return c.recognition.min_edge_mean; }));
    e.push_back(integer("recognition.occlusion_margin", [](auto& c) -> auto& { return c.occlusion_margin; }));
    e.push_back(integer("recognition.max_recovered", [](auto& c) -> auto& { return c.max_recovered; }));
    e.push_back(real("recognition.splice_gate_px", [](auto& c) -> auto& { return c.splice_gate_px; }));
    e.push_back(real("recognition.splice_gate_growth_px", [](auto& c) -> auto& { return c.splice_gate_growth_px; }));
    e.push_back(integer("recognition.new_target_min_length", [](auto& c) -> auto& { return c.new_target_min_length; }));
    e.push_back(integer("recognition.scene_hold", [](auto& c) -> auto& { return c.scene_hold_frames; }));

    e.push_back(real("rules.b", [](auto& c) -> auto& { return c.rules.params.b; }));
    e.push_back(real("rules.mu_d2u", [](auto& c) -> auto& { return c.rules.params.mu_d2u; }));
    e.push_back(real("rules.sigma_d2u", [](auto& c) -> auto& { return c.rules.params.sigma_d2u; }));
    e.push_back(real("rules.mu_u2i", [](auto& c) -> auto& { return c.rules.params.mu_u2i; }));
    e.push_back(real("rules.sigma_u2i", [](auto& c) -> auto& { return c.rules.params.sigma_u2i; }));
    e.push_back(real("rules.same_deg", [](auto& c) -> auto& { return c.rules.params.same_deg; }));
    e.push_back(real("rules.opposite_deg", [](auto& c) -> auto& { return c.rules.params.opposite_deg; }));
    e.push_back(real("rules.frequent_std_deg", [](auto& c) -> auto& { return c.rules.params.frequent_std_deg; }));
    e.push_back(real("rules.gate_factor", [](auto& c) -> auto& { return c.rules.params.gate_factor; }));

    e.push_back({"rules.interactions",
                 [](const C& c) {
                     std::string s;
                     for (Interaction i : c.rules.interactions) s += (s.empty() ? "" : ",") + std::string(to_string(i));
                     return s;
                 },
                 [](C& c, std::string_view v) {
                     c.rules.interactions = parse_list<Interaction>("rules.interactions", v, parse_interaction);
                 }});
    e.push_back({"rules.collectives",
                 [](const C& c) {
                     std::string s;
                     for (Collective k : c.rules.collectives) s += (s.empty() ? "" : ",") + std::string(to_string(k));
                     return s;
                 },
                 [](C& c, std::string_view v) {
                     c.rules.collectives = parse_list<Collective>("rules.collectives", v, parse_collective);
                 }});

    for (int k = 0; k < kInteractionCount; ++k) {
        const auto cls = static_cast<Interaction>(k);
        const std::string p = std::string("rules.") + to_string(cls) + ".";
        auto rule = [cls](auto& c) -> auto& { return c.rules.rules.at(cls); };
        e.push_back(real(p + "mu", [rule](auto& c) -> auto& { return rule(c).mu_ds; }));
        e.push_back(real(p + "sigma", [rule](auto& c) -> auto& { return rule(c).sigma_ds; }));
        e.push_back(enumerated(p + "gc", [rule](auto& c) -> auto& { return rule(c).gc; }, parse_connectivity));
        e.push_back(enumerated(p + "a1", [rule](auto& c) -> auto& { return rule(c).a1; },
                                                   parse_individual));
        e.push_back(enumerated(p + "a2", [rule](auto& c) -> auto& { return rule(c).a2; },
                                                   parse_individual));
        e.push_back(enumerated(p + "dc", [rule](auto& c) -> auto& { return rule(c).dc; },
                                               parse_distance_change));
        e.push_back(enumerated(p + "dr", [rule](auto& c) -> auto& { return rule(c).dr; },
                                               parse_facing_relation));
        e.push_back(enumerated(p + "fs", [rule](auto& c) -> auto& { return rule(c).fs; }, parse_front_side));
        e.push_back({p + "collective",
                     [cls](const C& c) {
                         const auto it = c.rules.rules.find(cls);
                         if (it == c.rules.rules.end() || !it->second.collective) return std::string("none");
                         return std::string(to_string(*it->second.collective));
                     },
                     [rule, key = p + "collective"](C& c, std::string_view v) {
                         if (v == "none") {
                             rule(c).collective.reset();
                             return;
                         }
                         const auto col = parse_collective(v);
                         if (!col) bad_value(key, v);
                         rule(c).collective = *col;
                     }});
    }
    return e;
}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> e = build_entries();
    return e;
}

const Entry& find_entry(std::string_view key) {
    for (const auto& e : entries()) {
        if (e.key == key) return e;
    }
    throw Error(ErrorKind::InputError, "unknown config key " + std::string(key));
}

}  // namespace

void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value) {
    find_entry(trim(key)).set(config, trim(value));
}

std::string get_config_value(const PipelineConfig& config, std::string_view key) {
    return find_entry(trim(key)).get(config);
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.push_back(e.key);
    return out;
}

void apply_config_text(PipelineConfig& config, std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InputError, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set_config_value(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorKind::InputError, "config line " + std::to_string(line_no) + ": " + e.detail());
        }
    }
    try {
        config.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::InputError, "config: " + e.detail());
    }
}

PipelineConfig parse_config(std::string_view text) {
    PipelineConfig c;
    apply_config_text(c, text);
    return c;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const PipelineConfig& config) {
    std::string out;
    for (const auto& e : entries()) {
        out += e.key;
        out += " = ";
        out += e.get(config);
        out += '\n';
    }
    return out;
}

}  // namespace hyperact
