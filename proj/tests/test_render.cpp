// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include "hyperact/render.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace hyperact;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

struct Fixture {
    std::vector<TrackRow> tracks;
    std::vector<FrameActivities> activities;
};

// Two walkers side by side and a third standing apart, over frames 10..12.
Fixture golden_fixture() {
    Fixture fx;
    for (int f = 10; f <= 12; ++f) {
        fx.tracks.push_back({f, 1, {100.0 + 2 * (f - 10), 200, 32, 80}, 1.0});
        fx.tracks.push_back({f, 2, {100.0 + 2 * (f - 10), 260.5, 32, 80}, 1.0});
        fx.tracks.push_back({f, 7, {600, 400, 30, 75}, 0.9});
        FrameActivities a;
        a.frame = f;
        a.scene = Collective::Crossing;
        a.targets = {{1, IndividualActivity::Walking, Collective::Crossing},
                     {2, IndividualActivity::Walking, Collective::Crossing},
                     {7, IndividualActivity::Standing, std::nullopt}};
        a.interactions = {{1, 2, Interaction::WS, 0.875}};
        fx.activities.push_back(a);
    }
    return fx;
}

}  // namespace

TEST(Render, EmptyFrameHasOnlyTheBanner) {
    const auto svg = render_frame_svg(5, {}, nullptr, RenderOptions{});
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find(">frame 5</text>"), std::string::npos);
    EXPECT_EQ(count(svg, "<rect"), 2u);
    EXPECT_EQ(count(svg, "<line"), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Render, InteractingPairDrawsBoxesAndAChord) {
    const std::vector<TrackRow> rows{{3, 1, {10, 10, 20, 40}, 1.0}, {3, 2, {60, 10, 20, 40}, 1.0}};
    FrameActivities a;
    a.frame = 3;
    a.scene = Collective::Talking;
    a.targets = {{1, IndividualActivity::Standing, Collective::Talking},
                 {2, IndividualActivity::Standing, Collective::Talking}};
    a.interactions = {{1, 2, Interaction::FE, 0.9}};
    const auto svg = render_frame_svg(3, rows, &a, RenderOptions{});
    EXPECT_EQ(count(svg, "<rect"), 4u);
    EXPECT_EQ(count(svg, "<line"), 1u);
    EXPECT_NE(svg.find("<title>FE</title>"), std::string::npos);
    EXPECT_NE(svg.find("frame 3 | talking"), std::string::npos);
    EXPECT_NE(svg.find(">1 standing</text>"), std::string::npos);
    EXPECT_NE(svg.find("x1=\"20\" y1=\"50\" x2=\"70\" y2=\"50\""), std::string::npos);
}

TEST(Render, FramesInRangeOnly) {
    const auto fx = golden_fixture();
    const auto out = render_svgs(fx.tracks, fx.activities, 11, 20, RenderOptions{});
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].first, 11);
    EXPECT_EQ(out[1].first, 12);
}

TEST(Render, MatchesGoldenFrames) {
    const auto fx = golden_fixture();
    RenderOptions opts;
    opts.width = 800;
    opts.height = 480;
    const std::filesystem::path dir = HYPERACT_GOLDEN_DIR;
    const bool update = std::getenv("HYPERACT_UPDATE_GOLDEN") != nullptr;
    for (const auto& [frame, svg] : render_svgs(fx.tracks, fx.activities, 10, 12, opts)) {
        const auto path = dir / ("frame_" + std::to_string(frame) + ".svg");
        if (update) {
            std::filesystem::create_directories(dir);
            std::ofstream(path) << svg;
            continue;
        }
        std::ifstream in(path);
        ASSERT_TRUE(in) << path;
        std::stringstream ss;
        ss << in.rdbuf();
        EXPECT_EQ(svg, ss.str()) << path;
    }
}
