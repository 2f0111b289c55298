// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperact {

enum class ErrorKind {
    InvalidArgument,
    InputError,
    InsufficientHistory,
    InfeasiblePoint,
    OracleTooLarge,
    NoGroundTruth,
    NoSamples,
    Io,
};

/// Name used in error messages, e.g. "insufficient-history".
const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail);
    ErrorKind kind() const noexcept { return kind_; }
    /// Message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    bool operator==(const Vec2&) const = default;

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    /// Zero vector stays zero.
    Vec2 normalized() const;
    Vec2 rotated(double radians) const;
};

/// Unsigned angle in [0, pi]; 0 when either vector is zero.
double angle_between(Vec2 a, Vec2 b);
/// cos of the angle between a and b; 0 when either vector is zero.
double cosine(Vec2 a, Vec2 b);

struct Box {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    /// Bottom-center, the canonical target position.
    Vec2 foot() const { return {x + w / 2.0, y + h}; }
    double area() const { return w * h; }
    static Box from_foot(Vec2 foot, double w, double h) { return {foot.x - w / 2.0, foot.y - h, w, h}; }
    bool operator==(const Box&) const = default;
};

double iou(const Box& a, const Box& b);

struct Detection {
    int frame = 0;
    Box box;
    double confidence = 1.0;
    std::vector<double> appearance;
    std::optional<Vec2> orientation;

    Vec2 foot_point() const { return box.foot(); }
};

/// Throws InputError on a non-positive box, confidence outside [0,1] or a negative frame.
void validate(const Detection& det);

enum class IndividualActivity : std::uint8_t { Standing = 0, Walking = 1, Running = 2 };
constexpr int kPhysicalActivities = 3;
using ActivityPosterior = std::array<double, kPhysicalActivities>;

const char* to_string(IndividualActivity a);
std::optional<IndividualActivity> parse_individual(std::string_view name);

enum class StateSource : std::uint8_t { Observed, Interpolated, Recovered };

struct TrackState {
    int frame = 0;
    Box box;
    double confidence = 1.0;
    std::vector<double> appearance;
    StateSource source = StateSource::Observed;
    std::optional<Vec2> orientation;

    Vec2 foot() const { return box.foot(); }
};

enum class TrackStatus : std::uint8_t { Active, Occluded, Exited };

/// Gap-free run of states for one target.
class Tracklet {
public:
    Tracklet() = default;
    explicit Tracklet(int id) : id_(id) {}

    int id() const { return id_; }
    void set_id(int id) { id_ = id; }
    TrackStatus status() const { return status_; }
    void set_status(TrackStatus s) { status_ = s; }

    /// Requires state.frame == last_frame() + 1 unless empty.
    void append(TrackState state);
    /// Appends linearly interpolated states up to (excluding) next.frame, then next.
    void append_bridged(TrackState next);
    /// Drops every state with frame >= frame.
    void truncate_from(int frame);

    bool empty() const { return states_.empty(); }
    std::size_t size() const { return states_.size(); }
    int first_frame() const { return states_.front().frame; }
    int last_frame() const { return states_.back().frame; }
    bool covers(int frame) const { return !empty() && frame >= first_frame() && frame <= last_frame(); }
    const TrackState& at(int frame) const;
    const TrackState& front() const { return states_.front(); }
    const TrackState& back() const { return states_.back(); }
    std::span<const TrackState> states() const { return states_; }
    Vec2 foot(int frame) const { return at(frame).foot(); }

    /// Mean of non-empty appearance snapshots; empty when none carry one.
    std::vector<double> mean_appearance() const;
    /// Last frame backed by a detection, or nullopt.
    std::optional<int> last_observed_frame() const;

private:
    int id_ = -1;
    TrackStatus status_ = TrackStatus::Active;
    std::vector<TrackState> states_;
};

/// Least-squares slope of foot points over the last min(span, available) states at or before frame.
Vec2 estimate_velocity(const Tracklet& tracklet, int frame, int span);

struct FacingParams {
    int velocity_span = 9;
    /// Speed above which a target counts as having moved (px/frame).
    double moving_speed = 1.2;
    /// Span used when searching the motion history of a standing target.
    int history_span = 15;
    Vec2 default_direction{1.0, 0.0};
};

struct Facing {
    Vec2 direction{1.0, 0.0};
    bool low_confidence = false;
};

Facing facing_direction(const Tracklet& tracklet, int frame, IndividualActivity individual,
                        std::optional<Vec2> orientation_hint, const FacingParams& params = {});

struct PairGeometry {
    double distance = 0.0;
    /// Angle between the facing of i and the vector from i to j, in [0, pi].
    double angle = 0.0;
    Vec2 offset;
};

PairGeometry pair_geometry(Vec2 foot_i, Vec2 facing_i, Vec2 foot_j);
PairGeometry pair_geometry(const Tracklet& xi, const Tracklet& xj, int frame, const FacingParams& params = {});

/// Per-frame kinematics of one target, the shared input of the grouping and interaction rules.
struct KinematicSample {
    int frame = 0;
    Vec2 foot;
    Vec2 velocity;
    Vec2 facing{1.0, 0.0};
    bool hypothetical = false;
};

struct TargetSeries {
    int key = -1;
    IndividualActivity label = IndividualActivity::Standing;
    ActivityPosterior posterior{1.0, 0.0, 0.0};
    std::vector<KinematicSample> samples;

    const KinematicSample* sample_at(int frame) const;
};

/// Samples frames [first, last] ∩ the tracklet's coverage.
std::vector<KinematicSample> sample_kinematics(const Tracklet& tracklet, int first, int last,
                                               IndividualActivity label, const FacingParams& params);

/// Circular standard deviation of unit directions, radians; 0 for fewer than two.
double circular_std(std::span<const Vec2> directions);

double logistic(double x);

}  // namespace hyperact
