// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "hyperact/core.hpp"
#include "hyperact/grouping.hpp"
#include "hyperact/hypergraph.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hyperact {

enum class Interaction : std::uint8_t { AP, LV, PB, FE, WS, SR, SS, NA, WO, WR, RS, RR, DT };
constexpr int kInteractionCount = 13;

enum class Collective : std::uint8_t {
    Crossing,
    Waiting,
    Queuing,
    Walking,
    Talking,
    Gathering,
    Dismissal,
    Chasing,
    Jogging,
    Dancing,
};
constexpr int kCollectiveCount = 10;

const char* to_string(Interaction i);
const char* to_string(Collective c);
std::optional<Interaction> parse_interaction(std::string_view name);
std::optional<Collective> parse_collective(std::string_view name);

enum class Connectivity : std::uint8_t { Connect, NotConnect };
enum class DistanceChange : std::uint8_t { Decreasing, Unchanging, Increasing };
enum class FacingRelation : std::uint8_t { Same, Opposite, FrequentChanging };
enum class FrontSide : std::uint8_t { Frontness, Sideness };

const char* to_string(Connectivity v);
const char* to_string(DistanceChange v);
const char* to_string(FacingRelation v);
const char* to_string(FrontSide v);
std::optional<Connectivity> parse_connectivity(std::string_view s);
std::optional<DistanceChange> parse_distance_change(std::string_view s);
std::optional<FacingRelation> parse_facing_relation(std::string_view s);
std::optional<FrontSide> parse_front_side(std::string_view s);

struct InteractionRule {
    double mu_ds = 100.0;
    double sigma_ds = 45.0;
    Connectivity gc = Connectivity::Connect;
    IndividualActivity a1 = IndividualActivity::Walking;
    IndividualActivity a2 = IndividualActivity::Walking;
    DistanceChange dc = DistanceChange::Unchanging;
    FacingRelation dr = FacingRelation::Same;
    FrontSide fs = FrontSide::Sideness;
    std::optional<Collective> collective;
};

struct RuleParams {
    /// Half-width of the distance band in standard deviations.
    double b = 2.0;
    double mu_d2u = -15.0;
    double sigma_d2u = 4.0;
    double mu_u2i = 15.0;
    double sigma_u2i = 4.0;
    double same_deg = 45.0;
    double opposite_deg = 135.0;
    double frequent_std_deg = 30.0;
    /// Edge gate: every pairwise distance below (mu_ds + b sigma_ds) times this factor.
    double gate_factor = 1.5;
};

class RuleTable {
public:
    /// Every interaction class, with the default collective alphabet (no "walking").
    static RuleTable defaults();

    RuleParams params;
    std::map<Interaction, InteractionRule> rules;
    /// Classes searched for clusters; NA is implicit.
    std::vector<Interaction> interactions;
    std::vector<Collective> collectives;

    const InteractionRule& rule(Interaction i) const;
    bool collective_enabled(Collective c) const;
    /// Throws InvalidArgument when a searched class lacks a rule or a collective class has no source.
    void validate() const;
};

/// Window-level pair descriptors shared by all components.
struct PairFeatures {
    double distance = 0.0;
    double p_corr = 0.0;
    /// Least-squares distance slope times (frames - 1), px.
    double distance_change = 0.0;
    /// Angle between the mean facings, radians.
    double facing_angle = 0.0;
    /// Largest circular std of the two facing series, radians.
    double facing_std = 0.0;
    double frontness = 0.0;
    ActivityPosterior pi{1.0, 0.0, 0.0};
    ActivityPosterior pj{1.0, 0.0, 0.0};
    int frames = 0;
};

/// Descriptors over the frames shared by i and j in [first, last]; frames = 0 when none.
PairFeatures pair_features(const TargetSeries& xi, const TargetSeries& xj, int first, int last,
                           const GroupingParams& grouping);

double rule_sigmoid(double x, double mu, double sigma);
double p_ds(double d, double mu, double sigma, double b);
double p_gc(double pcorr, Connectivity req);
double p_aa(double p1, double p2);
double p_dc(double d_g, DistanceChange req, const RuleParams& params);
FacingRelation facing_relation(double angle, double circular_std, const RuleParams& params, bool* none = nullptr);
double p_dr(double angle, double circular_std, FacingRelation req, const RuleParams& params);
double p_fs(double frontness, FrontSide req);

struct ComponentProbs {
    double ds = 0.0;
    double gc = 0.0;
    double aa = 0.0;
    double dc = 0.0;
    double dr = 0.0;
    double fs = 0.0;
    double product() const { return ds * gc * aa * dc * dr * fs; }
};

ComponentProbs component_probs(const PairFeatures& f, Interaction beta, const RuleTable& rules);
double interaction_score(const PairFeatures& f, Interaction beta, const RuleTable& rules);

// ---------------------------------------------------------------------------------------------
// Hypothetical tracklets

struct HypothesisParams {
    int count = 9;
    /// Position spread of standing hypotheses, px.
    double perturb_radius = 5.0;
    std::array<double, 4> turn_deg{5.0, 10.0, 15.0, 20.0};
    int velocity_span = 5;
};

struct Hypotheses {
    std::vector<Tracklet> tracks;
    /// Insufficient history: a single zero-velocity hypothesis.
    bool flagged = false;
};

/// States last_frame()+1 .. until, marked Recovered, continuing x' by extrapolation or perturbation.
Hypotheses generate_hypothetical(const Tracklet& xprime, IndividualActivity label, int until,
                                 const HypothesisParams& params);

// ---------------------------------------------------------------------------------------------
// Recognition hypergraph and optimization

struct RecognitionVertex {
    TargetSeries series;
    /// Owning target key; hypotheses of one target share it.
    int owner = -1;
    /// Index into the owner's hypothesis list, -1 for a real target.
    int hypothesis = -1;
};

struct RecognitionHypergraph {
    std::vector<RecognitionVertex> vertices;
    std::vector<Interaction> classes;
    std::vector<WeightedHypergraph> sub;
    /// scores[c][i * n + j]: interaction score of pair (i, j) under classes[c].
    std::vector<std::vector<double>> scores;
    std::vector<PairFeatures> features;
    std::size_t size() const { return vertices.size(); }
    double score(std::size_t c, std::size_t i, std::size_t j) const { return scores[c][i * vertices.size() + j]; }
};

/// Mean interaction score over the unordered pairs of an edge.
double edge_weight_R(std::span<const double> pair_scores);

RecognitionHypergraph build_recognition_hypergraph(std::vector<RecognitionVertex> vertices, int first, int last,
                                                   const RuleTable& rules, const GroupingParams& grouping,
                                                   int degree);

struct RecognitionCluster {
    Interaction label = Interaction::NA;
    std::vector<int> members;
    double score = 0.0;
    double mean_edge = 0.0;
};

struct RecognitionOptions {
    ClusterSearchOptions search;
    /// Clusters whose enclosed edges average below this are dropped.
    double min_edge_mean = 0.15;
    std::size_t min_size = 2;
};

struct RecognitionResult {
    std::vector<RecognitionCluster> clusters;
    /// Vertex index of the committed hypothesis, per owner key.
    std::map<int, int> recovered;
};

RecognitionResult optimize_recognition(const RecognitionHypergraph& hr, const RecognitionOptions& options);

// ---------------------------------------------------------------------------------------------
// Collective activity

/// 1 - prod_j (1 - p_j).
double collective_prob(std::span<const double> pair_probs);

struct CollectiveEstimate {
    std::optional<Collective> label;
    std::array<double, kCollectiveCount> probs{};
};

/// Per-vertex collective estimate from the accepted clusters: co-members under a class mapped to c
/// contribute their raw pair score.
std::vector<CollectiveEstimate> collective_estimates(const RecognitionHypergraph& hr, const RecognitionResult& result,
                                                     const RuleTable& rules);

/// Scene label with a hold for frames without participants.
class SceneLabeler {
public:
    explicit SceneLabeler(int hold_frames = 50) : hold_(hold_frames) {}
    /// Collective labels of the targets present in one frame.
    std::optional<Collective> update(std::span<const std::optional<Collective>> labels);

private:
    int hold_;
    std::optional<Collective> last_;
    int since_ = 0;
};

}  // namespace hyperact
