// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero when any fails.

#include "hyperact/hypergraph.hpp"
#include "hyperact/interaction.hpp"
#include "random_hypergraph.hpp"
#include "scene_run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>

using namespace hyperact;

namespace {

// Pinned tolerances.
constexpr int kOracleGraphs = 200;
constexpr double kOracleRatio = 0.95;
constexpr double kOraclePassShare = 0.95;
constexpr double kOracleSeconds = 30.0;
constexpr int kIdentitySupports = 1000;
constexpr double kIdentityTol = 1e-12;
constexpr int kCollectiveSets = 1000;
constexpr double kCollectiveTol = 1e-12;
constexpr int kRuleInputs = 100000;
constexpr double kSceneAccuracy = 0.95;
constexpr double kInteractionAccuracy = 0.90;
constexpr int kOcclusionSeeds = 50;
constexpr double kOcclusionPreserved = 0.90;
constexpr double kOcclusionAblationDrop = 0.30;
constexpr std::uint64_t kAblationSeeds[] = {1, 2, 3};
constexpr double kThroughputSeconds = 50.0;

int failures = 0;

void report(bool pass, const char* name, const std::string& detail) {
    std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void optimizer_vs_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2026);
    int pass = 0, total = 0;
    double worst = 1.0;
    for (int g = 0; g < kOracleGraphs; ++g) {
        const int n = 4 + g % 7;
        const double p = g % 3 == 0 ? 1.0 : (g % 3 == 1 ? 0.6 : 0.3);
        const auto h = testing_support::random_hypergraph(rng, n, 3, p);
        for (int seed = 0; seed < n; ++seed) {
            ClusterSearchOptions opts;
            opts.rng_seed = static_cast<std::uint64_t>(g);
            const auto sol = cluster_search(h, seed, opts);
            const double best = brute_force_best(h, seed, opts.kappa_min, opts.kappa_max).second;
            const double ratio = best > 0.0 ? sol.score / best : 1.0;
            worst = std::min(worst, ratio);
            ++total;
            if (ratio >= kOracleRatio - 1e-12) ++pass;
        }
    }
    const double elapsed = seconds_since(t0);
    const double share = static_cast<double>(pass) / total;
    report(share >= kOraclePassShare && elapsed < kOracleSeconds, "optimizer_vs_oracle",
           fmt("%d graphs, %d/%d pairs at >= %.2f of the optimum (%.1f%%, need %.0f%%), worst %.3f, %.1f s (limit %.0f s)",
               kOracleGraphs, pass, total, kOracleRatio, 100 * share, 100 * kOraclePassShare, worst, elapsed,
               kOracleSeconds));
}

void relaxation_identity() {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int k = 0; k < kIdentitySupports; ++k) {
        const int n = 3 + k % 8;
        const auto h = testing_support::random_hypergraph(rng, n, 3, 0.5);
        std::vector<int> support(static_cast<std::size_t>(n));
        std::iota(support.begin(), support.end(), 0);
        std::shuffle(support.begin(), support.end(), rng);
        support.resize(static_cast<std::size_t>(1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n))));
        std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
        for (int v : support) delta[static_cast<std::size_t>(v)] = 1.0 / static_cast<double>(support.size());
        const double err = std::abs(relaxed_objective(h, delta) - 6.0 * normalized_weight(h, support));
        worst = std::max(worst, err);
    }
    report(worst <= kIdentityTol, "relaxation_identity",
           fmt("%d uniform supports, max |f(delta) - m! W_norm| = %.2e (tol %.0e)", kIdentitySupports, worst,
               kIdentityTol));
}

void collective_probability() {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < kCollectiveSets; ++k) {
        std::vector<double> p(static_cast<std::size_t>(1 + k % 12));
        for (auto& x : p) x = u(rng);
        double keep = 1.0;
        for (double x : p) keep *= 1.0 - x;
        worst = std::max(worst, std::abs(collective_prob(p) - (1.0 - keep)));
    }
    // Every multiset of size <= 5 over the grid, extended by every grid value.
    const double grid[] = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
    long checked = 0, violations = 0;
    std::vector<double> set;
    std::function<void(std::size_t)> walk = [&](std::size_t from) {
        const double base = collective_prob(set);
        for (double extra : grid) {
            set.push_back(extra);
            ++checked;
            if (collective_prob(set) < base - 1e-15) ++violations;
            set.pop_back();
        }
        if (set.size() == 5) return;
        for (std::size_t g = from; g < std::size(grid); ++g) {
            set.push_back(grid[g]);
            walk(g);
            set.pop_back();
        }
    };
    walk(0);
    report(worst <= kCollectiveTol && violations == 0, "collective_probability",
           fmt("%d random sets, max error %.2e (tol %.0e); %ld neighbor additions on sets of size <= 6, %ld decreases",
               kCollectiveSets, worst, kCollectiveTol, checked, violations));
}

void rule_soundness() {
    const RuleTable rules = RuleTable::defaults();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> wide(-1000.0, 1000.0);
    std::uniform_real_distribution<double> angle(0.0, 3.14159265358979);
    long out_of_range = 0, not_annihilated = 0;
    auto check = [&](double v) {
        if (!(v >= 0.0 && v <= 1.0)) ++out_of_range;
    };
    for (int k = 0; k < kRuleInputs; ++k) {
        PairFeatures f;
        f.frames = 1 + k % 20;
        f.distance = std::abs(wide(rng)) * (k % 2 ? 1.0 : 0.2);
        f.p_corr = unit(rng);
        f.distance_change = wide(rng) * 0.1;
        f.facing_angle = angle(rng);
        f.facing_std = angle(rng) * unit(rng);
        f.frontness = unit(rng);
        const double a = unit(rng), b = unit(rng) * (1.0 - a);
        f.pi = {a, b, 1.0 - a - b};
        const double c = unit(rng), d = unit(rng) * (1.0 - c);
        f.pj = {c, 1.0 - c - d, d};
        for (Interaction beta : rules.interactions) {
            const auto comp = component_probs(f, beta, rules);
            for (double v : {comp.ds, comp.gc, comp.aa, comp.dc, comp.dr, comp.fs}) check(v);
            const double score = interaction_score(f, beta, rules);
            check(score);
            const bool zero = comp.ds == 0.0 || comp.gc == 0.0 || comp.aa == 0.0 || comp.dc == 0.0 ||
                              comp.dr == 0.0 || comp.fs == 0.0;
            if (zero && score != 0.0) ++not_annihilated;
        }
        check(p_ds(wide(rng), wide(rng), std::abs(wide(rng)) + 1e-6, rules.params.b));
        check(p_aa(unit(rng), unit(rng)));
        check(p_dc(wide(rng), static_cast<DistanceChange>(k % 3), rules.params));
        check(p_dr(angle(rng), angle(rng), static_cast<FacingRelation>(k % 3), rules.params));
        check(p_fs(unit(rng), static_cast<FrontSide>(k % 2)));
        check(p_gc(unit(rng), static_cast<Connectivity>(k % 2)));
    }
    // Forced zeros: out of the distance band, and a required activity with zero mass.
    long forced = 0;
    for (Interaction beta : rules.interactions) {
        PairFeatures f;
        f.frames = 10;
        f.p_corr = 0.5;
        f.distance = 5000.0;
        f.pi = f.pj = {1.0 / 3, 1.0 / 3, 1.0 / 3};
        if (interaction_score(f, beta, rules) != 0.0) ++not_annihilated;
        f.distance = rules.rule(beta).mu_ds;
        const auto need = static_cast<std::size_t>(rules.rule(beta).a1);
        f.pi = {0.5, 0.5, 0.5};
        f.pi[need] = 0.0;
        if (interaction_score(f, beta, rules) != 0.0) ++not_annihilated;
        forced += 2;
    }
    const bool aa_one = p_aa(1.0, 1.0) == 1.0;
    report(out_of_range == 0 && not_annihilated == 0 && aa_one, "rule_soundness",
           fmt("%d random inputs, %ld outputs outside [0,1], p_aa(1,1)=%g, %ld scores not annihilated by a zero "
               "component (%ld forced cases included)",
               kRuleInputs, out_of_range, p_aa(1.0, 1.0), not_annihilated, forced));
}

void noiseless_end_to_end() {
    bool ok = true;
    std::string detail;
    for (const auto& name : default_suite()) {
        if (name == "mixed") continue;
        const auto r = testing::run_preset(name, 1, false);
        const double mota = r.report.mot.mota();
        const auto ids = r.report.mot.id_switches;
        const double scene = r.report.scene ? r.report.scene->oca : 0.0;
        const double inter = r.report.interaction ? r.report.interaction->oca : 0.0;
        const bool pass = mota == 1.0 && ids == 0 && scene >= kSceneAccuracy && inter >= kInteractionAccuracy;
        ok = ok && pass;
        if (!detail.empty()) detail += "; ";
        detail += fmt("%s MOTA %.3f IDs %zu scene %.3f interaction %.3f%s", name.c_str(), mota, ids, scene, inter,
                      pass ? "" : " (fail)");
    }
    report(ok, "noiseless_end_to_end",
           fmt("need MOTA 1, IDs 0, scene >= %.2f, interaction >= %.2f: ", kSceneAccuracy, kInteractionAccuracy) +
               detail);
}

int majority_id(const MotResult& mot, int gt, int first, int last) {
    std::map<int, int> counts;
    for (int f = first; f <= last; ++f) {
        const auto fr = mot.matches.find(f);
        if (fr == mot.matches.end()) continue;
        const auto m = fr->second.find(gt);
        if (m != fr->second.end()) ++counts[m->second];
    }
    int best = -1, most = 0;
    for (const auto& [id, n] : counts) {
        if (n > most) {
            best = id;
            most = n;
        }
    }
    return best;
}

void occlusion_recovery() {
    int kept[2] = {0, 0};
    for (int seed = 0; seed < kOcclusionSeeds; ++seed) {
        const auto scene = preset("occlusion", static_cast<std::uint64_t>(seed), true);
        const auto& o = scene.occlusions.at(0);
        for (int variant = 0; variant < 2; ++variant) {
            PipelineConfig config;
            config.recovery = variant == 0;
            const auto r = testing::run_scene(scene, config);
            const auto mot = clear_mot(r.sim.truth, r.run.tracks);
            const int before = majority_id(mot, o.agent, o.first - 20, o.first - 1);
            const int after = majority_id(mot, o.agent, o.last + 1, o.last + 20);
            if (before >= 0 && before == after) ++kept[variant];
        }
    }
    const double on = static_cast<double>(kept[0]) / kOcclusionSeeds;
    const double off = static_cast<double>(kept[1]) / kOcclusionSeeds;
    report(on >= kOcclusionPreserved && on - off >= kOcclusionAblationDrop, "occlusion_recovery",
           fmt("identity preserved in %d/%d seeds with recovery (%.0f%%, need %.0f%%), %d/%d without (drop %.0f points, "
               "need %.0f)",
               kept[0], kOcclusionSeeds, 100 * on, 100 * kOcclusionPreserved, kept[1], kOcclusionSeeds,
               100 * (on - off), 100 * kOcclusionAblationDrop));
}

void ablation_direction() {
    bool ok = true;
    std::string detail;
    for (const auto& name : default_suite()) {
        double acc[2] = {0.0, 0.0};
        for (int variant = 0; variant < 2; ++variant) {
            PipelineConfig config;
            if (variant == 1) config.link.degree = 2;
            for (auto seed : kAblationSeeds) {
                const auto r = testing::run_preset(name, seed, true, config);
                acc[variant] += r.report.interaction ? r.report.interaction->oca : 0.0;
            }
            acc[variant] /= static_cast<double>(std::size(kAblationSeeds));
        }
        const bool pass = acc[0] >= acc[1];
        ok = ok && pass;
        if (!detail.empty()) detail += "; ";
        detail += fmt("%s %.3f vs %.3f%s", name.c_str(), acc[0], acc[1], pass ? "" : " (fail)");
    }
    report(ok, "ablation_direction", "interaction OCA, full vs pairwise (m=2), noisy seeds 1-3: " + detail);
}

void throughput() {
    const auto scene = preset("throughput", 1, true);
    const auto sim = synthesize(scene);
    std::size_t agents = scene.agents.size();
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = run_pipeline(sim.detections, PipelineConfig{});
    const double elapsed = seconds_since(t0);
    report(elapsed < kThroughputSeconds && scene.frames >= 1000, "throughput",
           fmt("%d frames, %zu targets in %.2f s (%.0f FPS, limit %.0f s)", scene.frames, agents, elapsed,
               scene.frames / elapsed, kThroughputSeconds));
    (void)out;
}

void determinism() {
    bool ok = true;
    for (const char* name : {"mixed", "occlusion", "throughput"}) {
        const auto sim = synthesize(preset(name, 11, true));
        const auto a = testing::serialize(testing::split(run_pipeline(sim.detections, PipelineConfig{})));
        const auto b = testing::serialize(testing::split(run_pipeline(sim.detections, PipelineConfig{})));
        ok = ok && a == b && !a.empty();
    }
    report(ok, "determinism", "byte-identical tracks and activities across two runs of mixed, occlusion, throughput");
}

}  // namespace

int main() {
    optimizer_vs_oracle();
    relaxation_identity();
    collective_probability();
    rule_soundness();
    noiseless_end_to_end();
    occlusion_recovery();
    ablation_direction();
    throughput();
    determinism();
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
