// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hyperact {

void PipelineConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorKind::InvalidArgument, what);
    };
    require(fps > 0, "fps must be positive");
    require(window >= 1, "window must be at least one frame");
    require(tau_a_seconds >= 0.0, "tau_a must be non-negative");
    require(link.degree >= 2 && link.degree <= 5, "degree must lie in [2, 5]");
    require(link.theta_a >= 0.0 && link.theta_a <= 1.0, "theta_a must lie in [0, 1]");
    require(link.search.kappa_max >= link.degree, "tracking kappa_max below degree");
    require(recognition.search.kappa_max >= link.degree, "recognition kappa_max below degree");
    require(link.edge_cap >= 1, "edge cap must be positive");
    require(link.max_link_gap >= 0, "max link gap must be non-negative");
    require(grouping.sparsify_threshold >= 0.0 && grouping.sparsify_threshold <= 1.0,
            "sparsify threshold must lie in [0, 1]");
    require(grouping.sigma_d > 0.0 && grouping.sigma_v > 0.0, "kernel spreads must be positive");
    require(grouping.angle_c >= 0.0 && grouping.angle_c < 1.0, "angle constant must lie in [0, 1)");
    require(hypotheses.count >= 1 && hypotheses.count <= 9, "hypothesis count must lie in [1, 9]");
    require(link.speed.theta_sw > 0.0 && link.speed.theta_wr > link.speed.theta_sw, "speed thresholds out of order");
    require(link.speed.w1 > 0.0 && link.speed.w2 > 0.0, "speed widths must be positive");
    require(recognition.min_edge_mean >= 0.0 && recognition.min_edge_mean <= 1.0, "min edge mean must lie in [0, 1]");
    require(occlusion_margin >= 0 && max_recovered >= 0, "recovery limits must be non-negative");
    require(new_target_min_length >= 1, "new target length must be positive");
    require(scene_hold_frames >= 0, "scene hold must be non-negative");
    rules.validate();
}

LinkParams PipelineConfig::effective_link() const {
    LinkParams p = link;
    p.tau_a_frames = static_cast<int>(std::lround(tau_a_seconds * fps));
    p.search.rng_seed = seed;
    return p;
}

namespace {

struct Target {
    Tracklet track;
    /// Public id; 0 while tentative.
    int id = 0;
    bool tentative = false;
    /// Created from an unclaimed tracklet in the current window.
    bool fresh = false;
};

/// A recognition vertex of an occluded target and the states committed if it wins.
struct Hypothesis {
    std::size_t owner = 0;
    std::vector<TrackState> payload;
    /// Index of the spliced seed target, or -1.
    int seed = -1;
};

}  // namespace

struct Pipeline::State {
    PipelineConfig config;
    LinkParams link;
    bool started = false;
    int window_start = 0;
    int max_frame = -1;
    std::vector<Detection> pending;
    std::vector<Target> targets;
    int next_id = 1;
    SceneLabeler scene;
    std::vector<FrameOutput> out;

    explicit State(PipelineConfig c) : config(std::move(c)), scene(config.scene_hold_frames) {
        config.validate();
        link = config.effective_link();
        config.recognition.search.rng_seed = config.seed;
    }

    int window_end() const { return window_start + config.window - 1; }

    TargetSeries series_of(const Tracklet& track, std::size_t key, int first, int last) const {
        TargetSeries s;
        s.key = static_cast<int>(key);
        const IndividualEstimate est = classify_individual(track, first, last, link.speed);
        s.label = est.label;
        s.posterior = est.posterior;
        s.samples = sample_kinematics(track, first, last, est.label, link.facing);
        return s;
    }

    void process_window(int we);
    void stage_one(int ws, int we, std::vector<char>& remove);
    void stage_two_and_emit(int ws, int we);
};

void Pipeline::State::stage_one(int ws, int we, std::vector<char>& remove) {
    std::sort(pending.begin(), pending.end(), [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
    std::vector<Tracklet> tracklets = build_tracklets(pending, config.builder);
    pending.clear();

    std::vector<Tracklet> tracks;
    std::vector<TargetSeries> series;
    tracks.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        tracks.push_back(targets[i].track);
        series.push_back(series_of(targets[i].track, i, ws - config.window, ws - 1));
    }
    const GroupGraph groups = build_group_graph(series, ws - config.window, ws - 1, config.grouping, true);
    const CandidateMap candidates = generate_candidates(tracks, tracklets, ws, link);
    const LinkResult linked = link_tracklets(tracks, tracklets, candidates, groups, link);

    remove.assign(targets.size(), 0);
    for (int d : candidates.dropped) remove[static_cast<std::size_t>(d)] = 1;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        Target& t = targets[i];
        t.fresh = false;
        const auto& chain = linked.chains[i];
        for (int k : chain) {
            const auto states = tracklets[static_cast<std::size_t>(k)].states();
            for (std::size_t s = 0; s < states.size(); ++s) {
                if (s == 0 && !t.track.empty() && states[s].frame > t.track.last_frame() + 1) {
                    t.track.append_bridged(states[s]);
                } else {
                    t.track.append(states[s]);
                }
            }
        }
        if (t.tentative) {
            if (chain.empty()) {
                remove[i] = 1;
            } else {
                t.tentative = false;
                t.id = next_id++;
            }
        }
    }
    for (int k : linked.unclaimed) {
        Tracklet& trk = tracklets[static_cast<std::size_t>(k)];
        const bool long_enough = static_cast<int>(trk.size()) >= config.new_target_min_length;
        const bool at_end = trk.last_frame() == we;
        if (!long_enough && !at_end) continue;
        Target t;
        t.track = std::move(trk);
        t.tentative = !long_enough;
        t.fresh = true;
        if (!t.tentative) t.id = next_id++;
        targets.push_back(std::move(t));
        remove.push_back(0);
    }
}

void Pipeline::State::stage_two_and_emit(int ws, int we) {
    const HypothesisParams& hp = config.hypotheses;
    std::vector<RecognitionVertex> vertices;
    std::vector<Hypothesis> hypotheses;  // parallel to vertices; owner only for real ones
    std::vector<char> excluded(targets.size(), 0);

    auto history = [&](const Tracklet& track) {
        Tracklet copy(track.id());
        for (const auto& s : track.states()) {
            if (s.frame >= ws - 3 * config.window) copy.append(s);
        }
        return copy;
    };

    // Occluded targets first, so spliced seeds are known before real vertices are added.
    std::vector<std::size_t> occluded;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const Target& t = targets[i];
        if (!config.recovery || t.tentative || t.fresh || t.track.empty()) continue;
        if (t.track.last_frame() >= we - config.occlusion_margin) continue;
        const int seen = t.track.last_observed_frame().value_or(t.track.last_frame());
        const int until = std::min(we, seen + config.max_recovered);
        if (until <= t.track.last_frame()) continue;
        occluded.push_back(i);
    }
    for (std::size_t i : occluded) {
        const Target& t = targets[i];
        const Tracklet& track = t.track;
        const int last = track.last_frame();
        const IndividualEstimate est = classify_individual(track, last - config.window + 1, last, link.speed);
        const Vec2 velocity = estimate_velocity(track, last, link.velocity_span);
        const auto appearance = recent_appearance(track, link.appearance_history);

        std::vector<Hypothesis> local;
        for (std::size_t s = 0; s < targets.size(); ++s) {
            const Target& seed = targets[s];
            if (!seed.fresh || seed.track.first_frame() <= last) continue;
            const int gap = seed.track.first_frame() - last - 1;
            const Vec2 predicted = track.back().foot() + velocity * (gap + 1);
            const double gate = config.splice_gate_px + config.splice_gate_growth_px * gap;
            if ((predicted - seed.track.front().foot()).norm() > gate) continue;
            const auto seed_app = seed.track.mean_appearance();
            if (!appearance.empty() && !seed_app.empty() &&
                appearance_similarity(appearance, seed_app) <= link.theta_a) {
                continue;
            }
            Tracklet bridge(track.id());
            bridge.append(track.back());
            bridge.append_bridged(seed.track.front());
            Hypothesis h;
            h.owner = i;
            h.seed = static_cast<int>(s);
            for (const auto& st : bridge.states().subspan(1)) h.payload.push_back(st);
            for (const auto& st : seed.track.states().subspan(1)) h.payload.push_back(st);
            local.push_back(std::move(h));
        }
        if (local.empty()) {
            const int seen = track.last_observed_frame().value_or(last);
            const int until = std::min(we, seen + config.max_recovered);
            Hypotheses hyps = generate_hypothetical(track, est.label, until, hp);
            for (auto& ht : hyps.tracks) {
                Hypothesis h;
                h.owner = i;
                h.payload.assign(ht.states().begin(), ht.states().end());
                local.push_back(std::move(h));
            }
        } else {
            for (const auto& h : local) excluded[static_cast<std::size_t>(h.seed)] = 1;
        }
        for (std::size_t k = 0; k < local.size(); ++k) {
            Tracklet combined = history(track);
            for (const auto& st : local[k].payload) combined.append(st);
            RecognitionVertex v;
            v.owner = static_cast<int>(i);
            v.hypothesis = static_cast<int>(k);
            v.series = series_of(combined, vertices.size(), ws, we);
            v.series.label = est.label;
            v.series.posterior = est.posterior;
            vertices.push_back(std::move(v));
            hypotheses.push_back(std::move(local[k]));
        }
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const Target& t = targets[i];
        if (t.tentative || excluded[i] || t.track.empty() || t.track.last_frame() < ws) continue;
        if (std::find(occluded.begin(), occluded.end(), i) != occluded.end()) continue;
        RecognitionVertex v;
        v.owner = static_cast<int>(i);
        v.series = series_of(t.track, vertices.size(), ws, we);
        vertices.push_back(std::move(v));
        Hypothesis h;
        h.owner = i;
        hypotheses.push_back(std::move(h));
    }

    const RecognitionHypergraph hr =
        build_recognition_hypergraph(std::move(vertices), ws, we, config.rules, config.grouping, link.degree);
    const RecognitionResult result = optimize_recognition(hr, config.recognition);
    const std::vector<CollectiveEstimate> collective = collective_estimates(hr, result, config.rules);

    // Commit winning hypotheses; a seed spliced into one owner is gone for the others.
    std::vector<char> removed(targets.size(), 0);
    std::map<int, int> vertex_of;  // owner -> representative vertex
    for (std::size_t v = 0; v < hr.size(); ++v) {
        if (hr.vertices[v].hypothesis < 0) vertex_of[hr.vertices[v].owner] = static_cast<int>(v);
    }
    for (const auto& [owner, v] : result.recovered) {
        const Hypothesis& h = hypotheses[static_cast<std::size_t>(v)];
        if (h.seed >= 0 && removed[static_cast<std::size_t>(h.seed)]) continue;
        Tracklet& track = targets[h.owner].track;
        for (const auto& st : h.payload) track.append(st);
        if (h.seed >= 0) removed[static_cast<std::size_t>(h.seed)] = 1;
        vertex_of[owner] = v;
    }

    // Per-owner cluster membership.
    struct Membership {
        std::size_t cluster = 0;
        int vertex = 0;
    };
    std::map<int, Membership> member_of;
    for (std::size_t c = 0; c < result.clusters.size(); ++c) {
        for (int v : result.clusters[c].members) {
            const int owner = hr.vertices[static_cast<std::size_t>(v)].owner;
            const auto it = vertex_of.find(owner);
            if (it != vertex_of.end() && it->second == v) member_of[owner] = {c, v};
        }
    }

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!targets[i].tentative && !removed[i]) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return targets[a].id < targets[b].id; });

    for (int f = ws; f <= we; ++f) {
        FrameOutput frame;
        frame.activities.frame = f;
        std::vector<std::size_t> present;
        std::vector<std::optional<Collective>> labels;
        for (std::size_t i : order) {
            const Target& t = targets[i];
            if (!t.track.covers(f)) continue;
            const TrackState& s = t.track.at(f);
            present.push_back(i);
            frame.tracks.push_back({f, t.id, s.box, s.confidence});
            TargetActivity ta;
            ta.id = t.id;
            ta.individual = classify_at(t.track, f, link.speed).label;
            const auto v = vertex_of.find(static_cast<int>(i));
            if (v != vertex_of.end()) ta.collective = collective[static_cast<std::size_t>(v->second)].label;
            labels.push_back(ta.collective);
            frame.activities.targets.push_back(ta);
        }
        for (std::size_t a = 0; a < present.size(); ++a) {
            const auto ma = member_of.find(static_cast<int>(present[a]));
            if (ma == member_of.end()) continue;
            for (std::size_t b = a + 1; b < present.size(); ++b) {
                const auto mb = member_of.find(static_cast<int>(present[b]));
                if (mb == member_of.end() || mb->second.cluster != ma->second.cluster) continue;
                const RecognitionCluster& cluster = result.clusters[ma->second.cluster];
                const auto cls = static_cast<std::size_t>(
                    std::find(hr.classes.begin(), hr.classes.end(), cluster.label) - hr.classes.begin());
                InteractionRecord r;
                r.i = std::min(targets[present[a]].id, targets[present[b]].id);
                r.j = std::max(targets[present[a]].id, targets[present[b]].id);
                r.label = cluster.label;
                r.p = hr.score(cls, static_cast<std::size_t>(ma->second.vertex), static_cast<std::size_t>(mb->second.vertex));
                frame.activities.interactions.push_back(r);
            }
        }
        std::sort(frame.activities.interactions.begin(), frame.activities.interactions.end(),
                  [](const auto& p, const auto& q) { return std::pair(p.i, p.j) < std::pair(q.i, q.j); });
        frame.activities.scene = scene.update(labels);
        out.push_back(std::move(frame));
    }

    std::vector<Target> kept;
    kept.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!removed[i]) kept.push_back(std::move(targets[i]));
    }
    targets = std::move(kept);
}

void Pipeline::State::process_window(int we) {
    const int ws = window_start;
    std::vector<char> remove;
    stage_one(ws, we, remove);
    std::vector<Target> kept;
    kept.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!remove[i]) kept.push_back(std::move(targets[i]));
    }
    targets = std::move(kept);
    stage_two_and_emit(ws, we);
    window_start += config.window;
}

Pipeline::Pipeline(PipelineConfig config) : state_(std::make_unique<State>(std::move(config))) {}
Pipeline::~Pipeline() = default;
Pipeline::Pipeline(Pipeline&&) noexcept = default;
Pipeline& Pipeline::operator=(Pipeline&&) noexcept = default;

const PipelineConfig& Pipeline::config() const { return state_->config; }

void Pipeline::advance_to(int frame) {
    State& s = *state_;
    if (!s.started) return;
    while (frame > s.window_end()) s.process_window(s.window_end());
}

void Pipeline::push(const Detection& detection) {
    State& s = *state_;
    validate(detection);
    if (detection.frame < s.max_frame) {
        throw Error(ErrorKind::InputError, "detection frame " + std::to_string(detection.frame) +
                                               " arrives after frame " + std::to_string(s.max_frame));
    }
    if (!s.started) {
        s.started = true;
        s.window_start = detection.frame / s.config.window * s.config.window;
    }
    advance_to(detection.frame);
    s.max_frame = detection.frame;
    s.pending.push_back(detection);
}

void Pipeline::finish() {
    State& s = *state_;
    if (!s.started || s.max_frame < s.window_start) return;
    // The last window stops at the last observed frame.
    s.process_window(s.max_frame);
    s.started = false;
}

std::vector<FrameOutput> Pipeline::drain() {
    std::vector<FrameOutput> out = std::move(state_->out);
    state_->out.clear();
    return out;
}

std::vector<FrameOutput> run_pipeline(std::span<const Detection> detections, const PipelineConfig& config) {
    Pipeline p(config);
    for (const auto& d : detections) p.push(d);
    p.finish();
    return p.drain();
}

}  // namespace hyperact
