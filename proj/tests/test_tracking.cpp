// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include "hyperact/tracking.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace hyperact;

namespace {

Tracklet linear_track(int id, Vec2 start, Vec2 velocity, int first, int last, std::vector<double> appearance = {}) {
    Tracklet t(id);
    for (int f = first; f <= last; ++f) {
        TrackState s;
        s.frame = f;
        s.box = Box::from_foot(start + velocity * (f - first), 32, 80);
        s.appearance = appearance;
        t.append(s);
    }
    return t;
}

Detection det(int frame, Vec2 foot, std::vector<double> appearance = {}) {
    Detection d;
    d.frame = frame;
    d.box = Box::from_foot(foot, 32, 80);
    d.appearance = std::move(appearance);
    return d;
}

GroupGraph complete_graph(std::size_t n) {
    std::vector<int> keys(n);
    for (std::size_t i = 0; i < n; ++i) keys[i] = static_cast<int>(i);
    GroupGraph g(keys);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) g.set_weight(i, j, 1.0);
    }
    return g;
}

// Targets split at `split` into a history tracklet and a continuation tracklet.
struct SplitScene {
    std::vector<Tracklet> targets;
    std::vector<Tracklet> tracklets;
};

SplitScene walkers_side_by_side(int n, int split, int last) {
    SplitScene s;
    for (int k = 0; k < n; ++k) {
        const Vec2 start{100, 300.0 + 60 * k};
        const Vec2 v{2, 0};
        s.targets.push_back(linear_track(k, start, v, 0, split - 1));
        s.tracklets.push_back(linear_track(100 + k, start + v * split, v, split, last));
    }
    return s;
}

}  // namespace

TEST(SpeedPosterior, SumsToOneAndCrossesAtThreshold) {
    const SpeedParams p;
    for (double s = 0.0; s < 10.0; s += 0.05) {
        const auto post = speed_posterior(s, p);
        ASSERT_NEAR(post[0] + post[1] + post[2], 1.0, 1e-12);
    }
    EXPECT_NEAR(speed_posterior(p.theta_sw, p)[0], 0.5, 1e-6);
    EXPECT_GT(speed_posterior(0.0, p)[0], 0.9);
    EXPECT_GT(speed_posterior(2.5, p)[1], 0.9);
    EXPECT_GT(speed_posterior(8.0, p)[2], 0.9);
}

TEST(SpeedPosterior, TwoClassFold) {
    SpeedParams p;
    p.use_running = false;
    const auto post = speed_posterior(8.0, p);
    EXPECT_EQ(post[2], 0.0);
    EXPECT_NEAR(post[1], 1.0, 1e-9);
    EXPECT_EQ(classify_speed(8.0, p).label, IndividualActivity::Walking);
}

TEST(IndividualActivity, LabelsFollowSpeed) {
    const SpeedParams p;
    EXPECT_EQ(classify_individual(linear_track(1, {0, 0}, {0, 0}, 0, 19), 0, 19, p).label,
              IndividualActivity::Standing);
    EXPECT_EQ(classify_individual(linear_track(1, {0, 0}, {2, 0}, 0, 19), 0, 19, p).label,
              IndividualActivity::Walking);
    EXPECT_EQ(classify_individual(linear_track(1, {0, 0}, {6, 0}, 0, 19), 0, 19, p).label,
              IndividualActivity::Running);
    EXPECT_EQ(classify_individual(linear_track(1, {0, 0}, {6, 0}, 0, 0), 0, 0, p).label,
              IndividualActivity::Standing);
}

TEST(BuildTracklets, TwoWalkersGiveTwoTracklets) {
    std::vector<Detection> d;
    for (int f = 0; f < 30; ++f) {
        d.push_back(det(f, {100.0 + 2 * f, 300}));
        d.push_back(det(f, {100.0 + 2 * f, 500}));
    }
    const auto t = build_tracklets(d, BuilderParams{});
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t[0].size(), 30u);
    EXPECT_EQ(t[1].size(), 30u);
    EXPECT_NEAR(t[0].foot(29).y, 300, 1e-9);
}

TEST(BuildTracklets, BridgesShortGapsWithInterpolation) {
    std::vector<Detection> d;
    for (int f = 0; f < 20; ++f) {
        if (f == 8 || f == 9) continue;
        d.push_back(det(f, {100.0 + 2 * f, 300}));
    }
    const auto t = build_tracklets(d, BuilderParams{});
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].size(), 20u);
    EXPECT_EQ(t[0].at(8).source, StateSource::Interpolated);
    EXPECT_NEAR(t[0].foot(9).x, 118, 1e-9);
}

TEST(BuildTracklets, LongGapsSplit) {
    std::vector<Detection> d;
    for (int f = 0; f < 30; ++f) {
        if (f >= 10 && f < 20) continue;
        d.push_back(det(f, {100.0 + 2 * f, 300}));
    }
    EXPECT_EQ(build_tracklets(d, BuilderParams{}).size(), 2u);
}

TEST(BuildTracklets, OutOfOrderThrows) {
    std::vector<Detection> d{det(3, {0, 100}), det(2, {0, 100})};
    EXPECT_THROW(build_tracklets(d, BuilderParams{}), Error);
}

TEST(LinkCost, MotionAndAppearanceGates) {
    const LinkParams p;
    const auto from = linear_track(1, {100, 300}, {2, 0}, 0, 9, {1, 0});
    EXPECT_TRUE(link_cost(from, linear_track(2, {120, 300}, {2, 0}, 10, 19, {1, 0}), p));
    EXPECT_TRUE(link_cost(from, linear_track(2, {126, 300}, {2, 0}, 13, 19, {1, 0}), p));
    EXPECT_FALSE(link_cost(from, linear_track(2, {400, 300}, {2, 0}, 10, 19, {1, 0}), p));
    EXPECT_FALSE(link_cost(from, linear_track(2, {120, 300}, {2, 0}, 20, 29, {1, 0}), p));
    EXPECT_FALSE(link_cost(from, linear_track(2, {120, 300}, {2, 0}, 5, 19, {1, 0}), p));
    // exp(-|a-b|) <= theta_a rejects a different identity.
    EXPECT_FALSE(link_cost(from, linear_track(2, {120, 300}, {2, 0}, 10, 19, {5, 0}), p));
    const double near = *link_cost(from, linear_track(2, {120, 300}, {2, 0}, 10, 19, {1, 0}), p);
    const double off = *link_cost(from, linear_track(2, {130, 300}, {2, 0}, 10, 19, {1, 0}), p);
    EXPECT_LT(near, off);
}

TEST(Candidates, SingleTargetSingleTracklet) {
    const std::vector<Tracklet> targets{linear_track(1, {100, 300}, {2, 0}, 0, 19, {1, 0})};
    const std::vector<Tracklet> tracklets{linear_track(7, {140, 300}, {2, 0}, 20, 39, {1, 0})};
    const auto c = generate_candidates(targets, tracklets, 20, LinkParams{});
    ASSERT_EQ(c.per_target.size(), 1u);
    EXPECT_EQ(c.per_target[0], std::vector<int>{0});
    EXPECT_TRUE(c.unclaimed.empty());
    EXPECT_TRUE(c.dropped.empty());
}

TEST(Candidates, LowAppearanceLeavesAnUnclaimedSeed) {
    const std::vector<Tracklet> targets{linear_track(1, {100, 300}, {2, 0}, 0, 19, {1, 0, 0})};
    const std::vector<Tracklet> tracklets{linear_track(7, {140, 300}, {2, 0}, 20, 39, {0, 4, 0})};
    const auto c = generate_candidates(targets, tracklets, 20, LinkParams{});
    EXPECT_TRUE(c.per_target[0].empty());
    EXPECT_EQ(c.unclaimed, std::vector<int>{0});
}

TEST(Candidates, TargetsUnseenForTauAreDropped) {
    LinkParams p;
    p.tau_a_frames = 125;
    const std::vector<Tracklet> targets{linear_track(1, {100, 300}, {2, 0}, 0, 19)};
    const std::vector<Tracklet> tracklets{linear_track(7, {140, 300}, {2, 0}, 200, 219)};
    const auto c = generate_candidates(targets, tracklets, 200, p);
    EXPECT_EQ(c.dropped, std::vector<int>{0});
    const auto kept = generate_candidates(targets, tracklets, 140, p);
    EXPECT_TRUE(kept.dropped.empty());
}

TEST(EdgeWeight, TermsOfAConsistentTriple) {
    const LinkParams p;
    const auto s = walkers_side_by_side(3, 20, 39);
    std::vector<LinkHypothesis> edge;
    for (int k = 0; k < 3; ++k) edge.push_back(make_hypothesis(s.targets[k], s.tracklets[k], k, k, p));
    const auto t = edge_weight_T(edge, p);
    EXPECT_NEAR(t.appearance, 3.0, 1e-12);
    EXPECT_NEAR(t.facing, 3.0, 1e-9);
    EXPECT_NEAR(t.geometry, 3.0, 1e-9);
    EXPECT_NEAR(t.weight, p.lambda_a * 3 + p.lambda_d * 3 + p.lambda_g * 3, 1e-9);
}

TEST(EdgeWeight, ConsistentBeatsSwapped) {
    const LinkParams p;
    const auto s = walkers_side_by_side(3, 20, 39);
    std::vector<LinkHypothesis> good, swapped;
    for (int k = 0; k < 3; ++k) good.push_back(make_hypothesis(s.targets[k], s.tracklets[k], k, k, p));
    const int perm[] = {1, 0, 2};
    for (int k = 0; k < 3; ++k) swapped.push_back(make_hypothesis(s.targets[k], s.tracklets[perm[k]], k, perm[k], p));
    EXPECT_GT(edge_weight_T(good, p).weight, edge_weight_T(swapped, p).weight);
    EXPECT_LT(edge_weight_T(swapped, p).geometry, 3.0);
}

TEST(Linking, SingleTargetUsesTheFallback) {
    const LinkParams p;
    const std::vector<Tracklet> targets{linear_track(1, {100, 300}, {2, 0}, 0, 19)};
    const std::vector<Tracklet> tracklets{linear_track(7, {140, 300}, {2, 0}, 20, 39)};
    const auto c = generate_candidates(targets, tracklets, 20, p);
    const auto r = link_tracklets(targets, tracklets, c, complete_graph(1), p);
    EXPECT_EQ(r.chains[0], std::vector<int>{0});
    EXPECT_EQ(r.hypergraph_links, 0u);
}

TEST(Linking, FiveTargetGroupLeavesTheFarSeedUnclaimed) {
    const LinkParams p;
    auto s = walkers_side_by_side(4, 20, 39);
    // A fifth walker appears far from every target.
    s.tracklets.push_back(linear_track(104, {900, 600}, {-2, 0}, 20, 39));
    const auto c = generate_candidates(s.targets, s.tracklets, 20, p);
    EXPECT_EQ(c.unclaimed, std::vector<int>{4});
    const auto r = link_tracklets(s.targets, s.tracklets, c, complete_graph(4), p);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(r.chains[static_cast<std::size_t>(k)], std::vector<int>{k});
    EXPECT_EQ(r.hypergraph_links, 4u);
    EXPECT_EQ(r.unclaimed, std::vector<int>{4});
    EXPECT_TRUE(r.unlinked.empty());
}

TEST(Linking, FragmentsWithinAWindowJoinTheChain) {
    const LinkParams p;
    const std::vector<Tracklet> targets{linear_track(1, {100, 300}, {2, 0}, 0, 19)};
    const std::vector<Tracklet> tracklets{linear_track(7, {140, 300}, {2, 0}, 20, 27),
                                          linear_track(8, {158, 300}, {2, 0}, 29, 39)};
    const auto c = generate_candidates(targets, tracklets, 20, p);
    const auto r = link_tracklets(targets, tracklets, c, complete_graph(1), p);
    EXPECT_EQ(r.chains[0], (std::vector<int>{0, 1}));
}

TEST(Linking, AssignmentConstraintsHoldOnRandomScenes) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> pos(0.0, 400.0);
    std::uniform_real_distribution<double> vel(-3.0, 3.0);
    std::uniform_real_distribution<double> jitter(-6.0, 6.0);
    const LinkParams p;
    for (int scene = 0; scene < 60; ++scene) {
        const int n = 2 + scene % 6;
        std::vector<Tracklet> targets, tracklets;
        for (int k = 0; k < n; ++k) {
            const Vec2 start{pos(rng), pos(rng)};
            const Vec2 v{vel(rng), vel(rng)};
            targets.push_back(linear_track(k, start, v, 0, 19));
            tracklets.push_back(linear_track(100 + k, start + v * 20 + Vec2{jitter(rng), jitter(rng)}, v, 20, 39));
        }
        std::vector<TargetSeries> series;
        for (int k = 0; k < n; ++k) {
            TargetSeries ts;
            ts.key = k;
            ts.label = IndividualActivity::Walking;
            ts.posterior = {0, 1, 0};
            ts.samples = sample_kinematics(targets[static_cast<std::size_t>(k)], 0, 19, ts.label, FacingParams{});
            series.push_back(std::move(ts));
        }
        const auto groups = build_group_graph(series, 0, 19, GroupingParams{});
        const auto c = generate_candidates(targets, tracklets, 20, p);
        const auto ht = build_tracking_hypergraph(targets, tracklets, c, groups, p);
        for (std::size_t e = 0; e < ht.graph.edge_count(); ++e) {
            std::set<int> ts, cs;
            for (int v : ht.graph.edge(e)) {
                const auto& h = ht.vertices[static_cast<std::size_t>(v)];
                ts.insert(h.target);
                cs.insert(h.candidate);
            }
            ASSERT_EQ(ts.size(), ht.graph.edge(e).size());
            ASSERT_EQ(cs.size(), ht.graph.edge(e).size());
            for (int a : ts) {
                for (int b : ts) {
                    if (a != b) ASSERT_TRUE(groups.adjacent(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
                }
            }
        }
        const auto r = link_tracklets(targets, tracklets, c, groups, p);
        std::vector<int> owner(tracklets.size(), -1);
        for (std::size_t i = 0; i < r.chains.size(); ++i) {
            int last = targets[i].last_frame();
            for (int k : r.chains[i]) {
                ASSERT_EQ(owner[static_cast<std::size_t>(k)], -1);
                owner[static_cast<std::size_t>(k)] = static_cast<int>(i);
                ASSERT_GT(tracklets[static_cast<std::size_t>(k)].first_frame(), last);
                last = tracklets[static_cast<std::size_t>(k)].last_frame();
            }
        }
        for (int k : r.unclaimed) ASSERT_EQ(owner[static_cast<std::size_t>(k)], -1);
        ASSERT_EQ(r.unclaimed.size() + static_cast<std::size_t>(std::count_if(owner.begin(), owner.end(), [](int o) { return o >= 0; })),
                  tracklets.size());
    }
}
