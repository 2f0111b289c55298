/* Copyright (C) 2026 hyperact contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the hyperact library. Every function returns a status code; on failure
 * hyperact_last_error() describes the problem for the calling thread. Strings returned through
 * out-parameters are owned by the caller and released with hyperact_string_free().
 */

#ifndef HYPERACT_HYPERACT_H
#define HYPERACT_HYPERACT_H

#include <stddef.h>
#include <stdint.h>

#if defined(HYPERACT_BUILDING_LIBRARY)
#define HYPERACT_API __attribute__((visibility("default")))
#else
#define HYPERACT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hyperact_status {
    HYPERACT_OK = 0,
    HYPERACT_ERR_INVALID_ARGUMENT = 1,
    HYPERACT_ERR_INPUT = 2,
    HYPERACT_ERR_IO = 3,
    HYPERACT_ERR_STATE = 4,
    HYPERACT_ERR_INTERNAL = 5
} hyperact_status;

typedef struct hyperact_config hyperact_config;
typedef struct hyperact_pipeline hyperact_pipeline;

typedef struct hyperact_detection {
    int frame;
    double x, y, w, h;
    double confidence;
    /* Optional appearance vector; may be NULL when dim is 0. */
    const double* appearance;
    size_t dim;
} hyperact_detection;

HYPERACT_API const char* hyperact_version(void);
/* Message of the last failed call on this thread; empty after success. */
HYPERACT_API const char* hyperact_last_error(void);
HYPERACT_API void hyperact_string_free(char* s);

/* Configuration: defaults, then file and key overrides. */
HYPERACT_API hyperact_status hyperact_config_new(hyperact_config** out);
HYPERACT_API void hyperact_config_free(hyperact_config* config);
HYPERACT_API hyperact_status hyperact_config_load(hyperact_config* config, const char* path);
HYPERACT_API hyperact_status hyperact_config_set(hyperact_config* config, const char* key, const char* value);
HYPERACT_API hyperact_status hyperact_config_dump(const hyperact_config* config, char** out);

/* Streaming pipeline. Detections must be pushed in frame order. drain returns every frame
 * emitted since the previous drain as tracks CSV and activities JSON Lines. */
HYPERACT_API hyperact_status hyperact_pipeline_new(const hyperact_config* config, hyperact_pipeline** out);
HYPERACT_API void hyperact_pipeline_free(hyperact_pipeline* pipeline);
HYPERACT_API hyperact_status hyperact_pipeline_push(hyperact_pipeline* pipeline, const hyperact_detection* detection);
HYPERACT_API hyperact_status hyperact_pipeline_finish(hyperact_pipeline* pipeline);
HYPERACT_API hyperact_status hyperact_pipeline_drain(hyperact_pipeline* pipeline, char** tracks_csv,
                                                     char** activities_jsonl);

/* File-level operations used by the command-line tool. Optional paths may be NULL. */
HYPERACT_API hyperact_status hyperact_track_files(const hyperact_config* config, const char* detections_path,
                                                  const char* tracks_path, const char* activities_path);

/* Writes detections.csv, gt_tracks.csv, gt_activities.jsonl and scenario.json into out_dir.
 * Either preset names a built-in scene or scenario_path points to a scenario JSON file. */
HYPERACT_API hyperact_status hyperact_simulate(const char* preset, const char* scenario_path, uint64_t seed,
                                               int noisy, const char* out_dir);
/* Newline-separated preset names. */
HYPERACT_API hyperact_status hyperact_preset_names(char** out);

/* Report as text, or as one JSON object when json is non-zero. first_frame skips warm-up frames;
 * pass INT32_MIN to score everything. */
HYPERACT_API hyperact_status hyperact_evaluate(const char* gt_tracks, const char* tracks, const char* gt_activities,
                                               const char* activities, double iou_threshold, int first_frame,
                                               int json, char** report);

/* One SVG per frame in [first, last], named frame_<n>.svg. */
HYPERACT_API hyperact_status hyperact_render(const char* tracks, const char* activities, int first, int last,
                                             int width, int height, const char* out_dir, size_t* written);

#ifdef __cplusplus
}
#endif

#endif /* HYPERACT_HYPERACT_H */
