// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/tracking.hpp"

#include "hyperact/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace hyperact {

ActivityPosterior speed_posterior(double speed, const SpeedParams& params) {
    const double standing = 1.0 - logistic((speed - params.theta_sw) / params.w1);
    const double running = params.use_running ? logistic((speed - params.theta_wr) / params.w2) : 0.0;
    const double walking = std::max(0.0, 1.0 - standing - running);
    const double total = standing + walking + running;
    return {standing / total, walking / total, running / total};
}

IndividualEstimate classify_speed(double speed, const SpeedParams& params) {
    IndividualEstimate out;
    out.speed = speed;
    out.posterior = speed_posterior(speed, params);
    const auto best = std::max_element(out.posterior.begin(), out.posterior.end());
    out.label = static_cast<IndividualActivity>(best - out.posterior.begin());
    return out;
}

IndividualEstimate classify_individual(const Tracklet& tracklet, int first, int last, const SpeedParams& params) {
    std::vector<double> speeds;
    if (!tracklet.empty()) {
        first = std::max(first, tracklet.first_frame() + 1);
        last = std::min(last, tracklet.last_frame());
        for (int f = first; f <= last; ++f) speeds.push_back(estimate_velocity(tracklet, f, params.speed_span).norm());
    }
    if (speeds.empty()) return classify_speed(0.0, params);
    const auto mid = speeds.begin() + static_cast<std::ptrdiff_t>(speeds.size() / 2);
    std::nth_element(speeds.begin(), mid, speeds.end());
    double median = *mid;
    if (speeds.size() % 2 == 0) median = 0.5 * (median + *std::max_element(speeds.begin(), mid));
    return classify_speed(median, params);
}

IndividualEstimate classify_at(const Tracklet& tracklet, int frame, const SpeedParams& params) {
    const int half = params.classify_span / 2;
    return classify_individual(tracklet, frame - half, frame + half, params);
}

namespace {

TrackState state_from(const Detection& d) {
    TrackState s;
    s.frame = d.frame;
    s.box = d.box;
    s.confidence = d.confidence;
    s.appearance = d.appearance;
    s.orientation = d.orientation;
    return s;
}

const std::vector<double>& last_appearance(const Tracklet& t) {
    static const std::vector<double> empty;
    for (auto it = t.states().rbegin(); it != t.states().rend(); ++it) {
        if (!it->appearance.empty()) return it->appearance;
    }
    return empty;
}

Vec2 end_velocity(const Tracklet& t, int span) {
    if (t.size() < 2) return {};
    return estimate_velocity(t, t.last_frame(), span);
}

}  // namespace

std::vector<Tracklet> build_tracklets(std::span<const Detection> detections, const BuilderParams& params) {
    std::vector<Tracklet> tracks;
    std::vector<Vec2> velocity;
    std::size_t begin = 0;
    while (begin < detections.size()) {
        const int frame = detections[begin].frame;
        std::size_t end = begin;
        while (end < detections.size() && detections[end].frame == frame) ++end;
        if (end < detections.size() && detections[end].frame < frame) {
            throw Error(ErrorKind::InputError, "detections out of frame order");
        }
        std::vector<std::size_t> active;
        for (std::size_t t = 0; t < tracks.size(); ++t) {
            const int last = tracks[t].last_frame();
            if (last < frame && last >= frame - 1 - params.max_bridge) active.push_back(t);
        }
        std::vector<std::vector<double>> cost(active.size(), std::vector<double>(end - begin, kForbidden));
        for (std::size_t r = 0; r < active.size(); ++r) {
            const Tracklet& t = tracks[active[r]];
            const int dt = frame - t.last_frame();
            const Vec2 predicted = t.back().foot() + velocity[active[r]] * dt;
            const double gate = params.gate_px + params.gate_growth_px * (dt - 1);
            for (std::size_t c = 0; c < end - begin; ++c) {
                const Detection& d = detections[begin + c];
                const double dist = (predicted - d.foot_point()).norm();
                if (dist > gate) continue;
                const double app = appearance_similarity(last_appearance(t), d.appearance);
                cost[r][c] = dist / gate + params.appearance_weight * (1.0 - app);
            }
        }
        const std::vector<int> match = solve_assignment(cost);
        std::vector<char> used(end - begin, 0);
        for (std::size_t r = 0; r < active.size(); ++r) {
            if (match[r] < 0) continue;
            const std::size_t t = active[r];
            tracks[t].append_bridged(state_from(detections[begin + static_cast<std::size_t>(match[r])]));
            velocity[t] = end_velocity(tracks[t], params.velocity_span);
            used[static_cast<std::size_t>(match[r])] = 1;
        }
        for (std::size_t c = 0; c < end - begin; ++c) {
            if (used[c]) continue;
            Tracklet t(static_cast<int>(tracks.size()));
            t.append(state_from(detections[begin + c]));
            tracks.push_back(std::move(t));
            velocity.emplace_back();
        }
        begin = end;
    }
    return tracks;
}

double appearance_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty() || a.size() != b.size()) return 1.0;
    double sq = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sq += (a[k] - b[k]) * (a[k] - b[k]);
    return std::exp(-std::sqrt(sq));
}

std::vector<double> recent_appearance(const Tracklet& tracklet, std::size_t count) {
    std::vector<double> mean;
    std::size_t used = 0;
    const auto states = tracklet.states();
    const std::size_t start = states.size() > count ? states.size() - count : 0;
    for (std::size_t k = start; k < states.size(); ++k) {
        const auto& app = states[k].appearance;
        if (app.empty()) continue;
        if (mean.empty()) mean.assign(app.size(), 0.0);
        if (app.size() != mean.size()) continue;
        for (std::size_t j = 0; j < app.size(); ++j) mean[j] += app[j];
        ++used;
    }
    for (auto& v : mean) v /= static_cast<double>(used);
    return mean;
}

std::optional<double> link_cost(const Tracklet& from, const Tracklet& cand, const LinkParams& params) {
    if (from.empty() || cand.empty()) return std::nullopt;
    const int gap = cand.first_frame() - from.last_frame() - 1;
    if (gap < 0 || gap > params.max_link_gap) return std::nullopt;
    const Vec2 predicted = from.back().foot() + end_velocity(from, params.velocity_span) * (gap + 1);
    const double dist = (predicted - cand.front().foot()).norm();
    const double gate = params.link_gate_px + params.link_gate_growth_px * gap;
    if (dist > gate) return std::nullopt;
    const auto a = recent_appearance(from, params.appearance_history);
    const auto b = cand.mean_appearance();
    const double app = appearance_similarity(a, b);
    if (!a.empty() && !b.empty() && app <= params.theta_a) return std::nullopt;
    return dist / gate + (1.0 - app);
}

CandidateMap generate_candidates(std::span<const Tracklet> targets, std::span<const Tracklet> tracklets,
                                 int window_first, const LinkParams& params) {
    CandidateMap out;
    out.per_target.resize(targets.size());
    std::vector<char> claimed(tracklets.size(), 0);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const Tracklet& t = targets[i];
        if (t.empty()) continue;
        const int seen = t.last_observed_frame().value_or(t.last_frame());
        if (seen < window_first - params.tau_a_frames) {
            out.dropped.push_back(static_cast<int>(i));
            continue;
        }
        for (std::size_t k = 0; k < tracklets.size(); ++k) {
            if (link_cost(t, tracklets[k], params)) {
                out.per_target[i].push_back(static_cast<int>(k));
                claimed[k] = 1;
            }
        }
    }
    for (std::size_t k = 0; k < tracklets.size(); ++k) {
        if (!claimed[k]) out.unclaimed.push_back(static_cast<int>(k));
    }
    return out;
}

LinkHypothesis make_hypothesis(const Tracklet& target, const Tracklet& candidate, int target_index,
                               int candidate_index, const LinkParams& params) {
    LinkHypothesis h;
    h.target = target_index;
    h.candidate = candidate_index;
    h.appearance = appearance_similarity(recent_appearance(target, params.appearance_history),
                                         candidate.mean_appearance());
    const int last = target.last_frame();
    const auto label = classify_at(target, last, params.speed).label;
    const Vec2 target_facing = facing_direction(target, last, label, target.back().orientation, params.facing).direction;
    Vec2 candidate_facing = target_facing;
    if (candidate.size() >= 2) {
        const int probe = std::min(candidate.first_frame() + params.velocity_span - 1, candidate.last_frame());
        const Vec2 v = estimate_velocity(candidate, probe, params.velocity_span);
        if (v.norm() > params.facing.moving_speed) candidate_facing = v.normalized();
    }
    h.facing_cos = cosine(target_facing, candidate_facing);
    h.target_foot = target.back().foot();
    h.candidate_foot = candidate.front().foot();
    return h;
}

EdgeTerms edge_weight_T(std::span<const LinkHypothesis> edge, const LinkParams& params) {
    EdgeTerms t;
    for (std::size_t a = 0; a < edge.size(); ++a) {
        t.appearance += edge[a].appearance;
        t.facing += edge[a].facing_cos;
        for (std::size_t b = a + 1; b < edge.size(); ++b) {
            const Vec2 before = edge[b].target_foot - edge[a].target_foot;
            const Vec2 after = edge[b].candidate_foot - edge[a].candidate_foot;
            t.geometry += cosine(before, after);
        }
    }
    t.weight = std::max(0.0, params.lambda_a * t.appearance + params.lambda_d * t.facing + params.lambda_g * t.geometry);
    return t;
}

TrackingHypergraph build_tracking_hypergraph(std::span<const Tracklet> targets, std::span<const Tracklet> tracklets,
                                             const CandidateMap& candidates, const GroupGraph& groups,
                                             const LinkParams& params) {
    if (groups.size() != targets.size()) throw Error(ErrorKind::InvalidArgument, "group graph does not match targets");
    const int m = params.degree;
    TrackingHypergraph out;
    std::vector<std::vector<int>> by_target(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        for (int k : candidates.per_target[i]) {
            by_target[i].push_back(static_cast<int>(out.vertices.size()));
            out.vertices.push_back(make_hypothesis(targets[i], tracklets[static_cast<std::size_t>(k)],
                                                   static_cast<int>(i), k, params));
        }
    }
    out.graph = WeightedHypergraph(out.vertices.size(), m);

    struct Edge {
        std::vector<int> verts;
        double weight;
    };
    std::vector<Edge> edges;
    std::vector<int> clique;
    std::vector<int> chosen;
    std::vector<LinkHypothesis> scratch;

    // Cartesian product of candidates across one target clique, distinct candidates only.
    std::function<void(std::size_t)> expand = [&](std::size_t depth) {
        if (depth == clique.size()) {
            scratch.clear();
            for (int v : chosen) scratch.push_back(out.vertices[static_cast<std::size_t>(v)]);
            const double w = edge_weight_T(scratch, params).weight;
            if (w > 0.0) edges.push_back({chosen, w});
            return;
        }
        for (int v : by_target[static_cast<std::size_t>(clique[depth])]) {
            const int cand = out.vertices[static_cast<std::size_t>(v)].candidate;
            const bool repeated = std::any_of(chosen.begin(), chosen.end(), [&](int u) {
                return out.vertices[static_cast<std::size_t>(u)].candidate == cand;
            });
            if (repeated) continue;
            chosen.push_back(v);
            expand(depth + 1);
            chosen.pop_back();
        }
    };
    std::function<void(std::size_t)> grow = [&](std::size_t next) {
        if (static_cast<int>(clique.size()) == m) {
            expand(0);
            return;
        }
        for (std::size_t i = next; i < targets.size(); ++i) {
            if (by_target[i].empty()) continue;
            const bool adjacent_all = std::all_of(clique.begin(), clique.end(), [&](int u) {
                return groups.adjacent(static_cast<std::size_t>(u), i);
            });
            if (!adjacent_all) continue;
            clique.push_back(static_cast<int>(i));
            grow(i + 1);
            clique.pop_back();
        }
    };
    grow(0);

    // Keep the heaviest edge_cap edges around each vertex.
    std::vector<std::vector<std::size_t>> incident(out.vertices.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        for (int v : edges[e].verts) incident[static_cast<std::size_t>(v)].push_back(e);
    }
    std::vector<char> keep(edges.size(), 0);
    for (auto& list : incident) {
        std::stable_sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) { return edges[a].weight > edges[b].weight; });
        for (std::size_t k = 0; k < list.size() && k < params.edge_cap; ++k) keep[list[k]] = 1;
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (keep[e]) out.graph.add_edge(edges[e].verts, edges[e].weight);
    }
    return out;
}

namespace {

/// Hungarian matching of the given chain ends against free candidates; returns matched pairs.
std::vector<std::pair<int, int>> match_ends(const std::vector<const Tracklet*>& ends, std::span<const Tracklet> tracklets,
                                            const std::vector<int>& free, const LinkParams& params) {
    std::vector<std::pair<int, int>> out;
    if (ends.empty() || free.empty()) return out;
    std::vector<std::vector<double>> cost(ends.size(), std::vector<double>(free.size(), kForbidden));
    bool any = false;
    for (std::size_t r = 0; r < ends.size(); ++r) {
        for (std::size_t c = 0; c < free.size(); ++c) {
            if (auto cst = link_cost(*ends[r], tracklets[static_cast<std::size_t>(free[c])], params)) {
                cost[r][c] = *cst;
                any = true;
            }
        }
    }
    if (!any) return out;
    const auto match = solve_assignment(cost);
    for (std::size_t r = 0; r < ends.size(); ++r) {
        if (match[r] >= 0) out.emplace_back(static_cast<int>(r), free[static_cast<std::size_t>(match[r])]);
    }
    return out;
}

}  // namespace

LinkResult link_tracklets(std::span<const Tracklet> targets, std::span<const Tracklet> tracklets,
                          const CandidateMap& candidates, const GroupGraph& groups, const LinkParams& params) {
    LinkResult result;
    result.chains.resize(targets.size());
    std::vector<char> claimed(tracklets.size(), 0);
    std::vector<char> skip(targets.size(), 0);
    for (int d : candidates.dropped) skip[static_cast<std::size_t>(d)] = 1;

    if (params.use_hypergraph && params.degree >= 2) {
        const TrackingHypergraph ht = build_tracking_hypergraph(targets, tracklets, candidates, groups, params);
        ClusterSearchOptions opts = params.search;
        opts.kappa_min = params.degree;
        opts.kappa_max = std::max(opts.kappa_max, opts.kappa_min);
        std::vector<ClusterSolution> solutions;
        for (std::size_t v = 0; v < ht.vertices.size(); ++v) {
            if (ht.graph.incident(static_cast<int>(v)).empty()) continue;
            solutions.push_back(cluster_search(ht.graph, static_cast<int>(v), opts));
        }
        auto conflicts = [&](int a, int b) {
            const auto& x = ht.vertices[static_cast<std::size_t>(a)];
            const auto& y = ht.vertices[static_cast<std::size_t>(b)];
            return a != b && (x.target == y.target || x.candidate == y.candidate);
        };
        for (const auto& sol : select_consistent_clusters(std::move(solutions), conflicts, 2)) {
            for (int v : sol.members) {
                const auto& hyp = ht.vertices[static_cast<std::size_t>(v)];
                result.chains[static_cast<std::size_t>(hyp.target)].push_back(hyp.candidate);
                claimed[static_cast<std::size_t>(hyp.candidate)] = 1;
                ++result.hypergraph_links;
            }
        }
    }

    // Bipartite fallback for every target the hypergraph left unlinked.
    {
        std::vector<int> rows;
        std::vector<const Tracklet*> ends;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            if (skip[i] || !result.chains[i].empty() || targets[i].empty()) continue;
            rows.push_back(static_cast<int>(i));
            ends.push_back(&targets[i]);
        }
        std::vector<int> free;
        for (std::size_t k = 0; k < tracklets.size(); ++k) {
            if (!claimed[k]) free.push_back(static_cast<int>(k));
        }
        for (auto [r, k] : match_ends(ends, tracklets, free, params)) {
            result.chains[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])].push_back(k);
            claimed[static_cast<std::size_t>(k)] = 1;
        }
    }

    // Extend chains with later fragments of the same window.
    while (true) {
        std::vector<int> rows;
        std::vector<const Tracklet*> ends;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            if (result.chains[i].empty()) continue;
            rows.push_back(static_cast<int>(i));
            ends.push_back(&tracklets[static_cast<std::size_t>(result.chains[i].back())]);
        }
        std::vector<int> free;
        for (std::size_t k = 0; k < tracklets.size(); ++k) {
            if (!claimed[k]) free.push_back(static_cast<int>(k));
        }
        const auto extra = match_ends(ends, tracklets, free, params);
        if (extra.empty()) break;
        for (auto [r, k] : extra) {
            result.chains[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])].push_back(k);
            claimed[static_cast<std::size_t>(k)] = 1;
        }
    }

    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!skip[i] && result.chains[i].empty()) result.unlinked.push_back(static_cast<int>(i));
    }
    for (std::size_t k = 0; k < tracklets.size(); ++k) {
        if (!claimed[k]) result.unclaimed.push_back(static_cast<int>(k));
    }
    return result;
}

}  // namespace hyperact
