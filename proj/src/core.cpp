// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/core.hpp"

#include <algorithm>
#include <numbers>

namespace hyperact {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InputError: return "input-error";
    case ErrorKind::InsufficientHistory: return "insufficient-history";
    case ErrorKind::InfeasiblePoint: return "infeasible-point";
    case ErrorKind::OracleTooLarge: return "oracle-too-large";
    case ErrorKind::NoGroundTruth: return "no-ground-truth";
    case ErrorKind::NoSamples: return "no-samples";
    case ErrorKind::Io: return "io-error";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(detail.empty() ? std::string(to_string(kind))
                                        : std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail) {}

Vec2 Vec2::normalized() const {
    const double n = norm();
    if (n == 0.0) return {};
    return {x / n, y / n};
}

Vec2 Vec2::rotated(double radians) const {
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    return {c * x - s * y, s * x + c * y};
}

double cosine(Vec2 a, Vec2 b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

double angle_between(Vec2 a, Vec2 b) {
    if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
    // atan2 form stays accurate near 0 and pi.
    return std::atan2(std::abs(a.cross(b)), a.dot(b));
}

double iou(const Box& a, const Box& b) {
    const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

void validate(const Detection& det) {
    if (det.frame < 0) throw Error(ErrorKind::InputError, "negative frame index");
    if (!(det.box.w > 0.0) || !(det.box.h > 0.0)) throw Error(ErrorKind::InputError, "box width and height must be positive");
    if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) throw Error(ErrorKind::InputError, "confidence outside [0,1]");
}

const char* to_string(IndividualActivity a) {
    switch (a) {
    case IndividualActivity::Standing: return "standing";
    case IndividualActivity::Walking: return "walking";
    case IndividualActivity::Running: return "running";
    }
    return "standing";
}

std::optional<IndividualActivity> parse_individual(std::string_view name) {
    if (name == "standing") return IndividualActivity::Standing;
    if (name == "walking") return IndividualActivity::Walking;
    if (name == "running") return IndividualActivity::Running;
    return std::nullopt;
}

void Tracklet::append(TrackState state) {
    if (!states_.empty() && state.frame != states_.back().frame + 1) {
        throw Error(ErrorKind::InvalidArgument, "tracklet frames must be consecutive");
    }
    states_.push_back(std::move(state));
}

void Tracklet::append_bridged(TrackState next) {
    if (states_.empty()) {
        states_.push_back(std::move(next));
        return;
    }
    const TrackState last = states_.back();
    const int gap = next.frame - last.frame;
    if (gap < 1) throw Error(ErrorKind::InvalidArgument, "bridged state must come after the tracklet end");
    for (int k = 1; k < gap; ++k) {
        const double a = static_cast<double>(k) / gap;
        TrackState s;
        s.frame = last.frame + k;
        s.box = {last.box.x + a * (next.box.x - last.box.x), last.box.y + a * (next.box.y - last.box.y),
                 last.box.w + a * (next.box.w - last.box.w), last.box.h + a * (next.box.h - last.box.h)};
        s.confidence = std::min(last.confidence, next.confidence);
        s.source = StateSource::Interpolated;
        states_.push_back(std::move(s));
    }
    states_.push_back(std::move(next));
}

void Tracklet::truncate_from(int frame) {
    while (!states_.empty() && states_.back().frame >= frame) states_.pop_back();
}

const TrackState& Tracklet::at(int frame) const {
    if (!covers(frame)) throw Error(ErrorKind::InvalidArgument, "frame outside tracklet");
    return states_[static_cast<std::size_t>(frame - first_frame())];
}

std::vector<double> Tracklet::mean_appearance() const {
    std::vector<double> mean;
    int count = 0;
    for (const auto& s : states_) {
        if (s.appearance.empty()) continue;
        if (mean.empty()) mean.assign(s.appearance.size(), 0.0);
        if (s.appearance.size() != mean.size()) continue;
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += s.appearance[k];
        ++count;
    }
    for (auto& v : mean) v /= count;
    return mean;
}

std::optional<int> Tracklet::last_observed_frame() const {
    for (auto it = states_.rbegin(); it != states_.rend(); ++it) {
        if (it->source == StateSource::Observed) return it->frame;
    }
    return std::nullopt;
}

Vec2 estimate_velocity(const Tracklet& tracklet, int frame, int span) {
    if (tracklet.empty() || frame < tracklet.first_frame()) {
        throw Error(ErrorKind::InsufficientHistory, "no state at or before frame");
    }
    const int end = std::min(frame, tracklet.last_frame());
    const int available = end - tracklet.first_frame() + 1;
    const int n = std::min(std::max(span, 2), available);
    if (n < 2) throw Error(ErrorKind::InsufficientHistory, "fewer than two states");
    const int begin = end - n + 1;
    double t_mean = 0.0;
    Vec2 p_mean;
    for (int f = begin; f <= end; ++f) {
        t_mean += f;
        p_mean += tracklet.foot(f);
    }
    t_mean /= n;
    p_mean = p_mean / n;
    double stt = 0.0;
    Vec2 stp;
    for (int f = begin; f <= end; ++f) {
        const double dt = f - t_mean;
        stt += dt * dt;
        stp += (tracklet.foot(f) - p_mean) * dt;
    }
    return stp / stt;
}

namespace {

std::optional<Vec2> last_motion_direction(const Tracklet& tracklet, int frame, const FacingParams& params) {
    const int step = std::max(1, params.history_span / 2);
    for (int f = std::min(frame, tracklet.last_frame()); f > tracklet.first_frame(); f -= step) {
        const Vec2 v = estimate_velocity(tracklet, f, params.history_span);
        if (v.norm() > params.moving_speed) return v.normalized();
    }
    return std::nullopt;
}

}  // namespace

Facing facing_direction(const Tracklet& tracklet, int frame, IndividualActivity individual,
                        std::optional<Vec2> orientation_hint, const FacingParams& params) {
    if (!tracklet.covers(frame)) throw Error(ErrorKind::InvalidArgument, "tracklet undefined at frame");
    if (individual != IndividualActivity::Standing && frame > tracklet.first_frame()) {
        const Vec2 v = estimate_velocity(tracklet, frame, params.velocity_span);
        if (v.norm() > 0.0) return {v.normalized(), false};
    }
    if (orientation_hint && orientation_hint->norm() > 0.0) return {orientation_hint->normalized(), false};
    if (auto dir = last_motion_direction(tracklet, frame, params)) return {*dir, false};
    return {params.default_direction.normalized(), true};
}

PairGeometry pair_geometry(Vec2 foot_i, Vec2 facing_i, Vec2 foot_j) {
    PairGeometry g;
    g.offset = foot_j - foot_i;
    g.distance = g.offset.norm();
    g.angle = g.distance == 0.0 ? 0.0 : angle_between(facing_i, g.offset);
    return g;
}

PairGeometry pair_geometry(const Tracklet& xi, const Tracklet& xj, int frame, const FacingParams& params) {
    const auto label = IndividualActivity::Walking;
    const Facing fi = facing_direction(xi, frame, label, xi.at(frame).orientation, params);
    return pair_geometry(xi.foot(frame), fi.direction, xj.foot(frame));
}

const KinematicSample* TargetSeries::sample_at(int frame) const {
    if (samples.empty()) return nullptr;
    const int offset = frame - samples.front().frame;
    if (offset < 0 || offset >= static_cast<int>(samples.size())) return nullptr;
    return &samples[static_cast<std::size_t>(offset)];
}

std::vector<KinematicSample> sample_kinematics(const Tracklet& tracklet, int first, int last,
                                               IndividualActivity label, const FacingParams& params) {
    std::vector<KinematicSample> out;
    if (tracklet.empty()) return out;
    first = std::max(first, tracklet.first_frame());
    last = std::min(last, tracklet.last_frame());
    if (first > last) return out;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    // Standing facing only depends on the motion history, resolve it once.
    std::optional<Facing> standing_facing;
    for (int f = first; f <= last; ++f) {
        const TrackState& s = tracklet.at(f);
        KinematicSample k;
        k.frame = f;
        k.foot = s.foot();
        k.hypothetical = s.source == StateSource::Recovered;
        if (f > tracklet.first_frame()) k.velocity = estimate_velocity(tracklet, f, params.velocity_span);
        if (label == IndividualActivity::Standing && !s.orientation) {
            if (!standing_facing) standing_facing = facing_direction(tracklet, f, label, std::nullopt, params);
            k.facing = standing_facing->direction;
        } else {
            k.facing = facing_direction(tracklet, f, label, s.orientation, params).direction;
        }
        out.push_back(k);
    }
    return out;
}

double circular_std(std::span<const Vec2> directions) {
    if (directions.size() < 2) return 0.0;
    Vec2 sum;
    for (const auto& d : directions) sum += d.normalized();
    const double r = std::clamp(sum.norm() / static_cast<double>(directions.size()), 1e-12, 1.0);
    return std::sqrt(-2.0 * std::log(r));
}

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace hyperact
