// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/hyperact.h"

#include <CLI11.hpp>

#include <climits>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

int exit_code(hyperact_status status) {
    switch (status) {
    case HYPERACT_OK: return 0;
    case HYPERACT_ERR_INVALID_ARGUMENT:
    case HYPERACT_ERR_INPUT:
    case HYPERACT_ERR_IO: return 2;
    default: return 1;
    }
}

int report(hyperact_status status) {
    if (status != HYPERACT_OK) std::fprintf(stderr, "hyperact: %s\n", hyperact_last_error());
    return exit_code(status);
}

struct ConfigDeleter {
    void operator()(hyperact_config* c) const { hyperact_config_free(c); }
};
using ConfigPtr = std::unique_ptr<hyperact_config, ConfigDeleter>;

hyperact_status build_config(const std::string& path, const std::vector<std::string>& overrides, ConfigPtr& out) {
    hyperact_config* raw = nullptr;
    hyperact_status s = hyperact_config_new(&raw);
    if (s != HYPERACT_OK) return s;
    out.reset(raw);
    if (!path.empty() && (s = hyperact_config_load(raw, path.c_str())) != HYPERACT_OK) return s;
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "hyperact: --set expects key=value, got '%s'\n", kv.c_str());
            return HYPERACT_ERR_INPUT;
        }
        if ((s = hyperact_config_set(raw, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str())) != HYPERACT_OK) return s;
    }
    return HYPERACT_OK;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-target tracking and group activity recognition"};
    app.require_subcommand(1);
    app.set_version_flag("--version", hyperact_version());

    std::string config_path;
    std::vector<std::string> overrides;

    auto* track = app.add_subcommand("track", "Track detections and label activities");
    std::string detections, tracks_out, activities_out;
    bool dump = false;
    track->add_option("-d,--detections", detections, "Detections CSV")->required();
    track->add_option("-t,--tracks", tracks_out, "Output tracks CSV");
    track->add_option("-a,--activities", activities_out, "Output activities JSON Lines");
    track->add_option("-c,--config", config_path, "Config file with dotted keys");
    track->add_option("-s,--set", overrides, "Override one config key, key=value");
    track->add_flag("--dump-config", dump, "Print the effective config and exit");

    auto* simulate = app.add_subcommand("simulate", "Write a synthetic scene with ground truth");
    std::string preset, scenario, sim_out;
    std::uint64_t seed = 1;
    bool noisy = false;
    bool list = false;
    simulate->add_option("-p,--preset", preset, "Built-in scene name");
    simulate->add_option("--scenario", scenario, "Scenario JSON file");
    simulate->add_option("--seed", seed, "Random seed");
    simulate->add_flag("--noisy", noisy, "Apply the moderate noise model to presets");
    simulate->add_option("-o,--out", sim_out, "Output directory");
    simulate->add_flag("--list", list, "List preset names");

    auto* evaluate = app.add_subcommand("evaluate", "Score tracks and activities against ground truth");
    std::string gt_tracks, hyp_tracks, gt_acts, hyp_acts;
    double iou = 0.5;
    int from_frame = INT_MIN;
    bool json = false;
    evaluate->add_option("--gt-tracks", gt_tracks, "Ground-truth tracks CSV")->required();
    evaluate->add_option("--tracks", hyp_tracks, "Tracker output CSV")->required();
    evaluate->add_option("--gt-activities", gt_acts, "Ground-truth activities JSON Lines");
    evaluate->add_option("--activities", hyp_acts, "Predicted activities JSON Lines");
    evaluate->add_option("--iou", iou, "Match threshold");
    evaluate->add_option("--from-frame", from_frame, "First scored frame");
    evaluate->add_flag("--json", json, "Machine-readable report");

    auto* render = app.add_subcommand("render", "Draw frames as SVG");
    std::string render_tracks, render_acts, render_out;
    int first = 0, last = INT_MAX, width = 1280, height = 720;
    render->add_option("--tracks", render_tracks, "Tracks CSV")->required();
    render->add_option("--activities", render_acts, "Activities JSON Lines");
    render->add_option("--first", first, "First frame");
    render->add_option("--last", last, "Last frame");
    render->add_option("--width", width, "Canvas width");
    render->add_option("--height", height, "Canvas height");
    render->add_option("-o,--out", render_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (track->parsed()) {
        ConfigPtr config;
        if (const auto s = build_config(config_path, overrides, config); s != HYPERACT_OK) return report(s);
        if (dump) {
            char* text = nullptr;
            if (const auto s = hyperact_config_dump(config.get(), &text); s != HYPERACT_OK) return report(s);
            std::fputs(text, stdout);
            hyperact_string_free(text);
            return 0;
        }
        if (tracks_out.empty()) {
            std::fprintf(stderr, "hyperact: --tracks is required\n");
            return 2;
        }
        return report(hyperact_track_files(config.get(), detections.c_str(), tracks_out.c_str(), opt(activities_out)));
    }
    if (simulate->parsed()) {
        if (list) {
            char* names = nullptr;
            if (const auto s = hyperact_preset_names(&names); s != HYPERACT_OK) return report(s);
            std::fputs(names, stdout);
            hyperact_string_free(names);
            return 0;
        }
        if (sim_out.empty()) {
            std::fprintf(stderr, "hyperact: --out is required\n");
            return 2;
        }
        return report(hyperact_simulate(opt(preset), opt(scenario), seed, noisy ? 1 : 0, sim_out.c_str()));
    }
    if (evaluate->parsed()) {
        char* text = nullptr;
        const auto s = hyperact_evaluate(gt_tracks.c_str(), hyp_tracks.c_str(), opt(gt_acts), opt(hyp_acts), iou,
                                         from_frame, json ? 1 : 0, &text);
        if (s != HYPERACT_OK) return report(s);
        std::fputs(text, stdout);
        hyperact_string_free(text);
        return 0;
    }
    if (render->parsed()) {
        std::size_t written = 0;
        const auto s = hyperact_render(render_tracks.c_str(), opt(render_acts), first, last, width, height,
                                       render_out.c_str(), &written);
        if (s != HYPERACT_OK) return report(s);
        std::printf("%zu frames written\n", written);
        return 0;
    }
    return 2;
}
