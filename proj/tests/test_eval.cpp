// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include "hyperact/eval.hpp"
#include "hyperact/sim.hpp"

#include <json.hpp>

#include <random>

using namespace hyperact;

namespace {

TrackRow row(int frame, int id, double x, double y) { return {frame, id, {x, y, 40, 80}, 1.0}; }

std::vector<TrackRow> grid_truth(int targets, int frames) {
    std::vector<TrackRow> out;
    for (int f = 0; f < frames; ++f) {
        for (int k = 0; k < targets; ++k) out.push_back(row(f, k + 1, 100.0 * k + f, 300));
    }
    return out;
}

}  // namespace

TEST(Mot, IdentityIsPerfect) {
    const auto truth = grid_truth(3, 50);
    const auto r = clear_mot(truth, truth);
    EXPECT_EQ(r.metrics.gt, 150u);
    EXPECT_EQ(r.metrics.tp, 150u);
    EXPECT_DOUBLE_EQ(r.metrics.mota(), 1.0);
    EXPECT_DOUBLE_EQ(r.metrics.motp(), 1.0);
    EXPECT_DOUBLE_EQ(r.metrics.recall(), 1.0);
    EXPECT_DOUBLE_EQ(r.metrics.precision(), 1.0);
    EXPECT_EQ(r.metrics.id_switches, 0u);
    EXPECT_EQ(r.metrics.fragmentations, 0u);
    EXPECT_EQ(r.metrics.mostly_tracked, 3u);
    EXPECT_EQ(r.metrics.mostly_lost, 0u);
}

TEST(Mot, OneFalsePositivePerFrame) {
    auto hyp = grid_truth(10, 100);
    for (int f = 0; f < 100; ++f) hyp.push_back(row(f, 99, 5000, 5000));
    const auto r = clear_mot(grid_truth(10, 100), hyp);
    EXPECT_EQ(r.metrics.fp, 100u);
    EXPECT_NEAR(r.metrics.mota(), 0.9, 1e-12);
    EXPECT_NEAR(r.metrics.far(), 1.0, 1e-12);
}

TEST(Mot, SwapCountsTwoSwitchesAndTwoFragments) {
    const auto truth = grid_truth(2, 100);
    auto hyp = truth;
    for (auto& r : hyp) {
        if (r.frame >= 50) r.id = 3 - r.id;
    }
    const auto r = clear_mot(truth, hyp);
    EXPECT_EQ(r.metrics.id_switches, 2u);
    EXPECT_EQ(r.metrics.fragmentations, 2u);
    EXPECT_NEAR(r.metrics.mota(), 1.0 - 2.0 / 200.0, 1e-12);
}

TEST(Mot, MissesAndCoverageRatios) {
    const auto truth = grid_truth(2, 100);
    std::vector<TrackRow> hyp;
    for (const auto& r : truth) {
        if (r.id == 1 || r.frame < 10) hyp.push_back(r);
    }
    const auto r = clear_mot(truth, hyp);
    EXPECT_EQ(r.metrics.fn, 90u);
    EXPECT_EQ(r.metrics.mostly_tracked, 1u);
    EXPECT_EQ(r.metrics.mostly_lost, 1u);
    EXPECT_NEAR(r.metrics.mt_ratio(), 0.5, 1e-12);
}

TEST(Mot, ResumptionCountsAsFragmentation) {
    const auto truth = grid_truth(1, 60);
    std::vector<TrackRow> hyp;
    for (const auto& r : truth) {
        if (r.frame < 20 || r.frame >= 30) hyp.push_back(r);
    }
    const auto r = clear_mot(truth, hyp);
    EXPECT_EQ(r.metrics.fragmentations, 1u);
    EXPECT_EQ(r.metrics.id_switches, 0u);
}

TEST(Mot, FirstFrameSkipsWarmUp) {
    const auto truth = grid_truth(1, 60);
    std::vector<TrackRow> hyp;
    for (const auto& r : truth) {
        if (r.frame >= 20) hyp.push_back(r);
    }
    EXPECT_DOUBLE_EQ(clear_mot(truth, hyp, 0.5, 20).metrics.mota(), 1.0);
    EXPECT_LT(clear_mot(truth, hyp).metrics.mota(), 1.0);
}

TEST(Mot, InvariantToHypothesisRelabeling) {
    const auto out = synthesize(preset("crossing", 4, true));
    std::vector<TrackRow> hyp;
    for (const auto& r : out.truth) {
        TrackRow h = r;
        h.box.x += 3.0;
        if (r.frame % 17 != 0) hyp.push_back(h);
    }
    auto relabeled = hyp;
    for (auto& r : relabeled) r.id = 1000 - 7 * r.id;
    const auto a = clear_mot(out.truth, hyp).metrics;
    const auto b = clear_mot(out.truth, relabeled).metrics;
    EXPECT_EQ(a.mota(), b.mota());
    EXPECT_EQ(a.motp(), b.motp());
    EXPECT_EQ(a.id_switches, b.id_switches);
    EXPECT_EQ(a.fragmentations, b.fragmentations);
}

TEST(Mot, EmptyTruthThrows) {
    const std::vector<TrackRow> none;
    try {
        clear_mot(none, grid_truth(1, 5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoGroundTruth);
    }
}

TEST(Accuracy, OverallAndMeanPerClass) {
    std::vector<int> truth(90, 0), pred(90, 0);
    for (int k = 0; k < 10; ++k) {
        truth.push_back(1);
        pred.push_back(k < 5 ? 1 : 0);
    }
    const auto r = activity_accuracy(truth, pred, 2);
    EXPECT_NEAR(r.oca, 0.95, 1e-12);
    EXPECT_NEAR(r.mca, 0.75, 1e-12);
    EXPECT_EQ(r.samples, 100u);
    EXPECT_EQ(r.confusion[1][0], 5u);
}

TEST(Accuracy, ClassesAbsentFromTruthDoNotCountInMca) {
    const std::vector<int> truth{0, 0, 2, 2};
    const std::vector<int> pred{0, 1, 2, 2};
    EXPECT_NEAR(activity_accuracy(truth, pred, 3).mca, 0.75, 1e-12);
}

TEST(Accuracy, RandomLabelsScoreOneOverK) {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> pick(0, 4);
    std::vector<int> truth, pred;
    for (int k = 0; k < 50000; ++k) {
        truth.push_back(pick(rng));
        pred.push_back(pick(rng));
    }
    const auto r = activity_accuracy(truth, pred, 5);
    EXPECT_NEAR(r.oca, 0.2, 0.01);
    EXPECT_NEAR(r.mca, 0.2, 0.01);
}

TEST(Accuracy, RejectsEmptyAndMismatchedInput) {
    const std::vector<int> none;
    try {
        activity_accuracy(none, none, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoSamples);
    }
    const std::vector<int> a{0, 1}, b{0};
    EXPECT_THROW(activity_accuracy(a, b, 2), Error);
    const std::vector<int> c{0, 5};
    EXPECT_THROW(activity_accuracy(c, c, 2), Error);
}

TEST(Evaluate, GroundTruthScoresPerfectlyOnEveryLevel) {
    const auto out = synthesize(preset("talking", 2, false));
    const auto r = evaluate(out.truth, out.truth, out.labels, out.labels);
    EXPECT_DOUBLE_EQ(r.mot.mota(), 1.0);
    ASSERT_TRUE(r.individual && r.interaction && r.collective && r.scene);
    EXPECT_DOUBLE_EQ(r.individual->oca, 1.0);
    EXPECT_DOUBLE_EQ(r.interaction->oca, 1.0);
    EXPECT_DOUBLE_EQ(r.collective->oca, 1.0);
    EXPECT_DOUBLE_EQ(r.scene->oca, 1.0);
}

TEST(Evaluate, MissingInteractionsCountAsNA) {
    const auto out = synthesize(preset("talking", 2, false));
    auto pred = out.labels;
    for (auto& f : pred) f.interactions.clear();
    const auto r = evaluate(out.truth, out.truth, out.labels, pred);
    ASSERT_TRUE(r.interaction);
    EXPECT_LT(r.interaction->oca, 0.5);
}

TEST(Evaluate, ReportFormats) {
    const auto truth = grid_truth(2, 20);
    const auto r = evaluate(truth, truth, {}, {});
    EXPECT_FALSE(r.individual);
    const auto text = r.to_text();
    EXPECT_NE(text.find("MOTA 1.0000"), std::string::npos);
    const auto j = nlohmann::json::parse(r.to_json());
    EXPECT_DOUBLE_EQ(j.at("MOTA").get<double>(), 1.0);
    EXPECT_EQ(j.at("IDs").get<int>(), 0);
}
