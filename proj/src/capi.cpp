// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/hyperact.h"

#include "hyperact/config.hpp"
#include "hyperact/eval.hpp"
#include "hyperact/io.hpp"
#include "hyperact/pipeline.hpp"
#include "hyperact/render.hpp"
#include "hyperact/sim.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

struct hyperact_config {
    hyperact::PipelineConfig config;
};

struct hyperact_pipeline {
    explicit hyperact_pipeline(const hyperact::PipelineConfig& c) : pipeline(c) {}
    hyperact::Pipeline pipeline;
    bool finished = false;
};

namespace {

thread_local std::string g_last_error;

hyperact_status fail(hyperact_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

hyperact_status status_of(hyperact::ErrorKind kind) {
    using hyperact::ErrorKind;
    switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InfeasiblePoint:
    case ErrorKind::OracleTooLarge: return HYPERACT_ERR_INVALID_ARGUMENT;
    case ErrorKind::InputError:
    case ErrorKind::InsufficientHistory:
    case ErrorKind::NoGroundTruth:
    case ErrorKind::NoSamples: return HYPERACT_ERR_INPUT;
    case ErrorKind::Io: return HYPERACT_ERR_IO;
    }
    return HYPERACT_ERR_INTERNAL;
}

template <typename F>
hyperact_status guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const hyperact::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(HYPERACT_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(HYPERACT_ERR_INTERNAL, e.what());
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::ofstream create(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hyperact::Error(hyperact::ErrorKind::Io, "cannot write " + path);
    return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw hyperact::Error(hyperact::ErrorKind::Io, "write failed for " + path);
}

void split_outputs(const std::vector<hyperact::FrameOutput>& frames, std::vector<hyperact::TrackRow>& rows,
                   std::vector<hyperact::FrameActivities>& acts) {
    for (const auto& f : frames) {
        rows.insert(rows.end(), f.tracks.begin(), f.tracks.end());
        acts.push_back(f.activities);
    }
}

}  // namespace

extern "C" {

const char* hyperact_version(void) { return "0.1.0"; }

const char* hyperact_last_error(void) { return g_last_error.c_str(); }

void hyperact_string_free(char* s) { std::free(s); }

hyperact_status hyperact_config_new(hyperact_config** out) {
    if (out == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        *out = new hyperact_config();
        return HYPERACT_OK;
    });
}

void hyperact_config_free(hyperact_config* config) { delete config; }

hyperact_status hyperact_config_load(hyperact_config* config, const char* path) {
    if (config == nullptr || path == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw hyperact::Error(hyperact::ErrorKind::Io, std::string("cannot open ") + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        hyperact::PipelineConfig next = config->config;
        hyperact::apply_config_text(next, ss.str());
        config->config = std::move(next);
        return HYPERACT_OK;
    });
}

hyperact_status hyperact_config_set(hyperact_config* config, const char* key, const char* value) {
    if (config == nullptr || key == nullptr || value == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        hyperact::PipelineConfig next = config->config;
        hyperact::set_config_value(next, key, value);
        try {
            next.validate();
        } catch (const hyperact::Error& e) {
            throw hyperact::Error(hyperact::ErrorKind::InputError, std::string(key) + ": " + e.detail());
        }
        config->config = std::move(next);
        return HYPERACT_OK;
    });
}

hyperact_status hyperact_config_dump(const hyperact_config* config, char** out) {
    if (config == nullptr || out == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = copy_string(hyperact::dump_config(config->config));
        return HYPERACT_OK;
    });
}

hyperact_status hyperact_pipeline_new(const hyperact_config* config, hyperact_pipeline** out) {
    if (out == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        *out = new hyperact_pipeline(config != nullptr ? config->config : hyperact::PipelineConfig{});
        return HYPERACT_OK;
    });
}

void hyperact_pipeline_free(hyperact_pipeline* pipeline) { delete pipeline; }

hyperact_status hyperact_pipeline_push(hyperact_pipeline* pipeline, const hyperact_detection* detection) {
    if (pipeline == nullptr || detection == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null argument");
    if (detection->dim > 0 && detection->appearance == nullptr) {
        return fail(HYPERACT_ERR_INVALID_ARGUMENT, "appearance pointer is null");
    }
    if (pipeline->finished) return fail(HYPERACT_ERR_STATE, "pipeline already finished");
    return guarded([&] {
        hyperact::Detection d;
        d.frame = detection->frame;
        d.box = {detection->x, detection->y, detection->w, detection->h};
        d.confidence = detection->confidence;
        d.appearance.assign(detection->appearance, detection->appearance + detection->dim);
        pipeline->pipeline.push(d);
        return HYPERACT_OK;
    });
}

hyperact_status hyperact_pipeline_finish(hyperact_pipeline* pipeline) {
    if (pipeline == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null argument");
    if (pipeline->finished) return fail(HYPERACT_ERR_STATE, "pipeline already finished");
    return guarded([&] {
        pipeline->pipeline.finish();
        pipeline->finished = true;
        return HYPERACT_OK;
    });
}

hyperact_status hyperact_pipeline_drain(hyperact_pipeline* pipeline, char** tracks_csv, char** activities_jsonl) {
    if (pipeline == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::vector<hyperact::TrackRow> rows;
        std::vector<hyperact::FrameActivities> acts;
        split_outputs(pipeline->pipeline.drain(), rows, acts);
        std::ostringstream t, a;
        hyperact::write_track_rows(t, rows);
        hyperact::write_activities(a, acts);
        char* ts = tracks_csv != nullptr ? copy_string(t.str()) : nullptr;
        char* as = nullptr;
        try {
            as = activities_jsonl != nullptr ? copy_string(a.str()) : nullptr;
        } catch (...) {
            std::free(ts);
            throw;
        }
        if (tracks_csv != nullptr) *tracks_csv = ts;
        if (activities_jsonl != nullptr) *activities_jsonl = as;
        return HYPERACT_OK;
    });
}

hyperact_status hyperact_track_files(const hyperact_config* config, const char* detections_path,
                                     const char* tracks_path, const char* activities_path) {
    if (detections_path == nullptr || tracks_path == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null path");
    return guarded([&] {
        const auto detections = hyperact::load_detections(detections_path);
        const auto frames =
            hyperact::run_pipeline(detections, config != nullptr ? config->config : hyperact::PipelineConfig{});
        std::vector<hyperact::TrackRow> rows;
        std::vector<hyperact::FrameActivities> acts;
        split_outputs(frames, rows, acts);
        auto t = create(tracks_path);
        hyperact::write_track_rows(t, rows);
        finish_write(t, tracks_path);
        if (activities_path != nullptr) {
            auto a = create(activities_path);
            hyperact::write_activities(a, acts);
            finish_write(a, activities_path);
        }
        return HYPERACT_OK;
    });
}

hyperact_status hyperact_simulate(const char* preset, const char* scenario_path, uint64_t seed, int noisy,
                                  const char* out_dir) {
    if (out_dir == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null output directory");
    if ((preset == nullptr) == (scenario_path == nullptr)) {
        return fail(HYPERACT_ERR_INVALID_ARGUMENT, "give exactly one of preset and scenario");
    }
    return guarded([&] {
        hyperact::Scenario sc;
        if (preset != nullptr) {
            try {
                sc = hyperact::preset(preset, seed, noisy != 0);
            } catch (const hyperact::Error& e) {
                throw hyperact::Error(hyperact::ErrorKind::InputError, e.detail());
            }
        } else {
            std::ifstream in(scenario_path, std::ios::binary);
            if (!in) throw hyperact::Error(hyperact::ErrorKind::Io, std::string("cannot open ") + scenario_path);
            std::ostringstream ss;
            ss << in.rdbuf();
            try {
                sc = hyperact::Scenario::from_json(ss.str());
            } catch (const hyperact::Error& e) {
                throw hyperact::Error(hyperact::ErrorKind::InputError, e.detail());
            }
        }
        const auto sim = hyperact::synthesize(sc);
        const std::filesystem::path dir(out_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw hyperact::Error(hyperact::ErrorKind::Io, "cannot create " + dir.string());
        auto write = [&](const char* name, auto&& body) {
            const std::string path = (dir / name).string();
            auto out = create(path);
            body(out);
            finish_write(out, path);
        };
        write("detections.csv", [&](std::ostream& o) { hyperact::write_detections(o, sim.detections); });
        write("gt_tracks.csv", [&](std::ostream& o) { hyperact::write_track_rows(o, sim.truth); });
        write("gt_activities.jsonl", [&](std::ostream& o) { hyperact::write_activities(o, sim.labels); });
        write("scenario.json", [&](std::ostream& o) { o << sc.to_json(); });
        return HYPERACT_OK;
    });
}

hyperact_status hyperact_preset_names(char** out) {
    if (out == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        std::string s;
        for (const auto& n : hyperact::preset_names()) s += n + "\n";
        *out = copy_string(s);
        return HYPERACT_OK;
    });
}

hyperact_status hyperact_evaluate(const char* gt_tracks, const char* tracks, const char* gt_activities,
                                  const char* activities, double iou_threshold, int first_frame, int json,
                                  char** report) {
    if (gt_tracks == nullptr || tracks == nullptr || report == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null argument");
    if ((gt_activities == nullptr) != (activities == nullptr)) {
        return fail(HYPERACT_ERR_INVALID_ARGUMENT, "activity files come in pairs");
    }
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "iou threshold outside (0, 1]");
    return guarded([&] {
        const auto gt = hyperact::load_tracks(gt_tracks);
        const auto hyp = hyperact::load_tracks(tracks);
        std::vector<hyperact::FrameActivities> gt_acts, hyp_acts;
        if (gt_activities != nullptr) {
            gt_acts = hyperact::load_activities(gt_activities);
            hyp_acts = hyperact::load_activities(activities);
        }
        const auto r = hyperact::evaluate(gt, hyp, gt_acts, hyp_acts, iou_threshold, first_frame);
        *report = copy_string(json != 0 ? r.to_json() : r.to_text());
        return HYPERACT_OK;
    });
}

hyperact_status hyperact_render(const char* tracks, const char* activities, int first, int last, int width, int height,
                                const char* out_dir, size_t* written) {
    if (tracks == nullptr || out_dir == nullptr) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "null argument");
    if (width <= 0 || height <= 0) return fail(HYPERACT_ERR_INVALID_ARGUMENT, "canvas size must be positive");
    return guarded([&] {
        const auto rows = hyperact::load_tracks(tracks);
        std::vector<hyperact::FrameActivities> acts;
        if (activities != nullptr) acts = hyperact::load_activities(activities);
        const std::filesystem::path dir(out_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw hyperact::Error(hyperact::ErrorKind::Io, "cannot create " + dir.string());
        const auto svgs = hyperact::render_svgs(rows, acts, first, last, {width, height});
        for (const auto& [frame, svg] : svgs) {
            const std::string path = (dir / ("frame_" + std::to_string(frame) + ".svg")).string();
            auto out = create(path);
            out << svg;
            finish_write(out, path);
        }
        if (written != nullptr) *written = svgs.size();
        return HYPERACT_OK;
    });
}

}  // extern "C"
