// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace hyperact {

namespace {

constexpr std::array<const char*, kInteractionCount> kInteractionNames{"AP", "LV", "PB", "FE", "WS", "SR", "SS",
                                                                       "NA", "WO", "WR", "RS", "RR", "DT"};
constexpr std::array<const char*, kCollectiveCount> kCollectiveNames{
    "crossing", "waiting", "queuing", "walking", "talking", "gathering", "dismissal", "chasing", "jogging", "dancing"};

double deg(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

const char* to_string(Interaction i) { return kInteractionNames[static_cast<std::size_t>(i)]; }
const char* to_string(Collective c) { return kCollectiveNames[static_cast<std::size_t>(c)]; }

std::optional<Interaction> parse_interaction(std::string_view name) {
    for (std::size_t k = 0; k < kInteractionNames.size(); ++k) {
        if (name == kInteractionNames[k]) return static_cast<Interaction>(k);
    }
    return std::nullopt;
}

std::optional<Collective> parse_collective(std::string_view name) {
    for (std::size_t k = 0; k < kCollectiveNames.size(); ++k) {
        if (name == kCollectiveNames[k]) return static_cast<Collective>(k);
    }
    return std::nullopt;
}

const char* to_string(Connectivity v) { return v == Connectivity::Connect ? "connect" : "not-connect"; }

const char* to_string(DistanceChange v) {
    switch (v) {
    case DistanceChange::Decreasing: return "decreasing";
    case DistanceChange::Unchanging: return "unchanging";
    case DistanceChange::Increasing: return "increasing";
    }
    return "unchanging";
}

const char* to_string(FacingRelation v) {
    switch (v) {
    case FacingRelation::Same: return "same";
    case FacingRelation::Opposite: return "opposite";
    case FacingRelation::FrequentChanging: return "frequent-changing";
    }
    return "same";
}

const char* to_string(FrontSide v) { return v == FrontSide::Frontness ? "frontness" : "sideness"; }

std::optional<Connectivity> parse_connectivity(std::string_view s) {
    if (s == "connect") return Connectivity::Connect;
    if (s == "not-connect") return Connectivity::NotConnect;
    return std::nullopt;
}

std::optional<DistanceChange> parse_distance_change(std::string_view s) {
    if (s == "decreasing") return DistanceChange::Decreasing;
    if (s == "unchanging") return DistanceChange::Unchanging;
    if (s == "increasing") return DistanceChange::Increasing;
    return std::nullopt;
}

std::optional<FacingRelation> parse_facing_relation(std::string_view s) {
    if (s == "same") return FacingRelation::Same;
    if (s == "opposite") return FacingRelation::Opposite;
    if (s == "frequent-changing") return FacingRelation::FrequentChanging;
    return std::nullopt;
}

std::optional<FrontSide> parse_front_side(std::string_view s) {
    if (s == "frontness") return FrontSide::Frontness;
    if (s == "sideness") return FrontSide::Sideness;
    return std::nullopt;
}

RuleTable RuleTable::defaults() {
    using IA = IndividualActivity;
    using C = Connectivity;
    using DC = DistanceChange;
    using DR = FacingRelation;
    using FS = FrontSide;
    RuleTable t;
    auto add = [&](Interaction i, double mu, double sigma, C gc, IA a, DC dc, DR dr, FS fs, std::optional<Collective> c) {
        t.rules[i] = InteractionRule{mu, sigma, gc, a, a, dc, dr, fs, c};
    };
    add(Interaction::FE, 80, 40, C::Connect, IA::Standing, DC::Unchanging, DR::Opposite, FS::Frontness, Collective::Talking);
    add(Interaction::SR, 100, 45, C::Connect, IA::Standing, DC::Unchanging, DR::Same, FS::Frontness, Collective::Queuing);
    add(Interaction::SS, 100, 45, C::Connect, IA::Standing, DC::Unchanging, DR::Same, FS::Sideness, Collective::Waiting);
    add(Interaction::DT, 100, 45, C::Connect, IA::Walking, DC::Unchanging, DR::FrequentChanging, FS::Sideness, Collective::Dancing);
    add(Interaction::AP, 300, 150, C::NotConnect, IA::Walking, DC::Decreasing, DR::Opposite, FS::Frontness, Collective::Gathering);
    add(Interaction::WO, 300, 150, C::NotConnect, IA::Walking, DC::Increasing, DR::Opposite, FS::Frontness, Collective::Dismissal);
    add(Interaction::LV, 300, 150, C::NotConnect, IA::Walking, DC::Increasing, DR::Same, FS::Frontness, Collective::Dismissal);
    add(Interaction::PB, 300, 150, C::NotConnect, IA::Walking, DC::Increasing, DR::Opposite, FS::Sideness, std::nullopt);
    add(Interaction::WS, 100, 45, C::Connect, IA::Walking, DC::Unchanging, DR::Same, FS::Sideness, Collective::Crossing);
    add(Interaction::RS, 100, 45, C::Connect, IA::Running, DC::Unchanging, DR::Same, FS::Sideness, Collective::Jogging);
    add(Interaction::RR, 100, 45, C::Connect, IA::Running, DC::Unchanging, DR::Same, FS::Frontness, Collective::Chasing);
    add(Interaction::WR, 100, 45, C::Connect, IA::Walking, DC::Unchanging, DR::Same, FS::Frontness, Collective::Walking);
    add(Interaction::NA, 100, 45, C::Connect, IA::Standing, DC::Unchanging, DR::Same, FS::Sideness, std::nullopt);
    for (int k = 0; k < kInteractionCount; ++k) {
        if (static_cast<Interaction>(k) != Interaction::NA) t.interactions.push_back(static_cast<Interaction>(k));
    }
    for (int k = 0; k < kCollectiveCount; ++k) {
        if (static_cast<Collective>(k) != Collective::Walking) t.collectives.push_back(static_cast<Collective>(k));
    }
    return t;
}

const InteractionRule& RuleTable::rule(Interaction i) const {
    const auto it = rules.find(i);
    if (it == rules.end()) throw Error(ErrorKind::InvalidArgument, std::string("no rule for ") + to_string(i));
    return it->second;
}

bool RuleTable::collective_enabled(Collective c) const {
    return std::find(collectives.begin(), collectives.end(), c) != collectives.end();
}

void RuleTable::validate() const {
    for (Interaction i : interactions) {
        const auto& r = rule(i);
        if (!(r.sigma_ds > 0.0)) throw Error(ErrorKind::InvalidArgument, std::string("sigma_ds must be positive for ") + to_string(i));
    }
    if (!(params.sigma_d2u > 0.0) || !(params.sigma_u2i > 0.0) || !(params.mu_u2i > params.mu_d2u)) {
        throw Error(ErrorKind::InvalidArgument, "distance-change parameters need sigma > 0 and mu_u2i > mu_d2u");
    }
    for (Collective c : collectives) {
        const bool sourced = std::any_of(interactions.begin(), interactions.end(), [&](Interaction i) {
            return rule(i).collective == c;
        });
        if (!sourced) throw Error(ErrorKind::InvalidArgument, std::string("no interaction maps to ") + to_string(c));
    }
}

PairFeatures pair_features(const TargetSeries& xi, const TargetSeries& xj, int first, int last,
                           const GroupingParams& grouping) {
    PairFeatures f;
    f.pi = xi.posterior;
    f.pj = xj.posterior;
    std::vector<double> t;
    std::vector<double> d;
    std::vector<Vec2> fi;
    std::vector<Vec2> fj;
    double corr = 0.0;
    double front = 0.0;
    for (int frame = first; frame <= last; ++frame) {
        const KinematicSample* si = xi.sample_at(frame);
        const KinematicSample* sj = xj.sample_at(frame);
        if (si == nullptr || sj == nullptr) continue;
        const Vec2 p = sj->foot - si->foot;
        t.push_back(frame);
        d.push_back(p.norm());
        fi.push_back(si->facing);
        fj.push_back(sj->facing);
        corr += p_corr(*si, *sj, xi.label, xj.label, grouping);
        front += std::max(std::abs(cosine(p, si->facing)), std::abs(cosine(p, sj->facing)));
    }
    f.frames = static_cast<int>(t.size());
    if (f.frames == 0) return f;
    const double n = f.frames;
    double t_mean = 0.0, d_mean = 0.0;
    for (int k = 0; k < f.frames; ++k) {
        t_mean += t[static_cast<std::size_t>(k)];
        d_mean += d[static_cast<std::size_t>(k)];
    }
    t_mean /= n;
    d_mean /= n;
    double stt = 0.0, std_ = 0.0;
    for (int k = 0; k < f.frames; ++k) {
        const double dt = t[static_cast<std::size_t>(k)] - t_mean;
        stt += dt * dt;
        std_ += dt * (d[static_cast<std::size_t>(k)] - d_mean);
    }
    f.distance = d_mean;
    f.p_corr = corr / n;
    f.frontness = front / n;
    f.distance_change = stt > 0.0 ? std_ / stt * (t.back() - t.front()) : 0.0;
    Vec2 mi, mj;
    for (const auto& v : fi) mi += v;
    for (const auto& v : fj) mj += v;
    f.facing_angle = angle_between(mi, mj);
    f.facing_std = std::max(circular_std(fi), circular_std(fj));
    return f;
}

double rule_sigmoid(double x, double mu, double sigma) { return logistic((x - mu) / sigma); }

double p_ds(double d, double mu, double sigma, double b) { return std::abs((d - mu) / sigma) <= b ? 1.0 : 0.0; }

double p_gc(double pcorr, Connectivity req) {
    const double g = std::clamp(pcorr, 0.0, 1.0);
    return req == Connectivity::Connect ? g : 1.0 - g;
}

double p_aa(double p1, double p2) { return std::sqrt(std::clamp(p1, 0.0, 1.0) * std::clamp(p2, 0.0, 1.0)); }

double p_dc(double d_g, DistanceChange req, const RuleParams& p) {
    switch (req) {
    case DistanceChange::Decreasing: return 1.0 - rule_sigmoid(d_g, p.mu_d2u, p.sigma_d2u);
    case DistanceChange::Increasing: return rule_sigmoid(d_g, p.mu_u2i, p.sigma_u2i);
    case DistanceChange::Unchanging: {
        double lambda;
        if (d_g < p.mu_d2u) {
            lambda = 1.0;
        } else if (d_g >= p.mu_u2i) {
            lambda = 0.0;
        } else {
            lambda = 1.0 - (d_g - p.mu_d2u) / (p.mu_u2i - p.mu_d2u);
        }
        return lambda * rule_sigmoid(d_g, p.mu_d2u, p.sigma_d2u) +
               (1.0 - lambda) * (1.0 - rule_sigmoid(d_g, p.mu_u2i, p.sigma_u2i));
    }
    }
    return 0.0;
}

FacingRelation facing_relation(double angle, double circular_std, const RuleParams& params, bool* none) {
    if (none != nullptr) *none = false;
    if (circular_std > deg(params.frequent_std_deg)) return FacingRelation::FrequentChanging;
    if (angle < deg(params.same_deg)) return FacingRelation::Same;
    if (angle > deg(params.opposite_deg)) return FacingRelation::Opposite;
    if (none != nullptr) *none = true;
    return FacingRelation::Same;
}

double p_dr(double angle, double circular_std, FacingRelation req, const RuleParams& params) {
    bool none = false;
    const FacingRelation r = facing_relation(angle, circular_std, params, &none);
    return !none && r == req ? 1.0 : 0.0;
}

double p_fs(double frontness, FrontSide req) {
    const double f = std::clamp(frontness, 0.0, 1.0);
    return req == FrontSide::Frontness ? f : 1.0 - f;
}

ComponentProbs component_probs(const PairFeatures& f, Interaction beta, const RuleTable& rules) {
    ComponentProbs c;
    if (f.frames == 0) return c;
    const InteractionRule& r = rules.rule(beta);
    const auto a1 = static_cast<std::size_t>(r.a1);
    const auto a2 = static_cast<std::size_t>(r.a2);
    c.ds = p_ds(f.distance, r.mu_ds, r.sigma_ds, rules.params.b);
    c.gc = p_gc(f.p_corr, r.gc);
    c.aa = std::max(p_aa(f.pi[a1], f.pj[a2]), p_aa(f.pi[a2], f.pj[a1]));
    c.dc = p_dc(f.distance_change, r.dc, rules.params);
    c.dr = p_dr(f.facing_angle, f.facing_std, r.dr, rules.params);
    c.fs = p_fs(f.frontness, r.fs);
    return c;
}

double interaction_score(const PairFeatures& f, Interaction beta, const RuleTable& rules) {
    return std::clamp(component_probs(f, beta, rules).product(), 0.0, 1.0);
}

Hypotheses generate_hypothetical(const Tracklet& xprime, IndividualActivity label, int until,
                                 const HypothesisParams& params) {
    Hypotheses out;
    if (xprime.empty()) return out;
    const TrackState& last = xprime.back();
    const int from = last.frame + 1;
    auto extend = [&](Vec2 start, Vec2 velocity) {
        Tracklet t(xprime.id());
        for (int f = from; f <= until; ++f) {
            TrackState s;
            s.frame = f;
            s.box = Box::from_foot(start + velocity * (f - last.frame), last.box.w, last.box.h);
            s.confidence = 0.0;
            s.source = StateSource::Recovered;
            s.orientation = last.orientation;
            t.append(std::move(s));
        }
        out.tracks.push_back(std::move(t));
    };
    if (xprime.size() < 2) {
        out.flagged = true;
        extend(last.foot(), {});
        return out;
    }
    if (label == IndividualActivity::Standing) {
        const double step = params.perturb_radius / std::numbers::sqrt2;
        for (int gy = -1; gy <= 1; ++gy) {
            for (int gx = -1; gx <= 1; ++gx) {
                if (static_cast<int>(out.tracks.size()) >= params.count) break;
                extend(last.foot() + Vec2{gx * step, gy * step}, {});
            }
        }
        return out;
    }
    const Vec2 v = estimate_velocity(xprime, last.frame, params.velocity_span);
    extend(last.foot(), v);
    for (double a : params.turn_deg) {
        for (double sign : {1.0, -1.0}) {
            if (static_cast<int>(out.tracks.size()) >= params.count) break;
            extend(last.foot(), v.rotated(sign * deg(a)));
        }
    }
    return out;
}

double edge_weight_R(std::span<const double> pair_scores) {
    if (pair_scores.empty()) return 0.0;
    double sum = 0.0;
    for (double p : pair_scores) sum += p;
    return sum / static_cast<double>(pair_scores.size());
}

RecognitionHypergraph build_recognition_hypergraph(std::vector<RecognitionVertex> vertices, int first, int last,
                                                   const RuleTable& rules, const GroupingParams& grouping,
                                                   int degree) {
    RecognitionHypergraph hr;
    hr.vertices = std::move(vertices);
    hr.classes = rules.interactions;
    const std::size_t n = hr.vertices.size();
    hr.features.assign(n * n, PairFeatures{});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (hr.vertices[i].owner == hr.vertices[j].owner) continue;
            hr.features[i * n + j] = pair_features(hr.vertices[i].series, hr.vertices[j].series, first, last, grouping);
            PairFeatures swapped = hr.features[i * n + j];
            std::swap(swapped.pi, swapped.pj);
            hr.features[j * n + i] = swapped;
        }
    }
    for (Interaction beta : hr.classes) {
        const InteractionRule& r = rules.rule(beta);
        const double gate = (r.mu_ds + rules.params.b * r.sigma_ds) * rules.params.gate_factor;
        std::vector<double> scores(n * n, 0.0);
        std::vector<char> near(n * n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const PairFeatures& f = hr.features[i * n + j];
                if (f.frames == 0) continue;
                const double s = interaction_score(f, beta, rules);
                scores[i * n + j] = scores[j * n + i] = s;
                near[i * n + j] = near[j * n + i] = f.distance <= gate ? 1 : 0;
            }
        }
        WeightedHypergraph h(n, degree);
        std::vector<int> combo;
        std::vector<double> pair;
        std::function<void(std::size_t)> grow = [&](std::size_t next) {
            if (static_cast<int>(combo.size()) == degree) {
                pair.clear();
                for (std::size_t a = 0; a < combo.size(); ++a) {
                    for (std::size_t b = a + 1; b < combo.size(); ++b) {
                        pair.push_back(scores[static_cast<std::size_t>(combo[a]) * n + static_cast<std::size_t>(combo[b])]);
                    }
                }
                const double w = edge_weight_R(pair);
                if (w > 0.0) h.add_edge(combo, w);
                return;
            }
            for (std::size_t v = next; v < n; ++v) {
                const bool ok = std::all_of(combo.begin(), combo.end(), [&](int u) {
                    return near[static_cast<std::size_t>(u) * n + v] != 0;
                });
                if (!ok) continue;
                combo.push_back(static_cast<int>(v));
                grow(v + 1);
                combo.pop_back();
            }
        };
        grow(0);
        hr.sub.push_back(std::move(h));
        hr.scores.push_back(std::move(scores));
    }
    return hr;
}

RecognitionResult optimize_recognition(const RecognitionHypergraph& hr, const RecognitionOptions& options) {
    RecognitionResult result;
    std::vector<ClusterSolution> solutions;
    for (std::size_t c = 0; c < hr.classes.size(); ++c) {
        const WeightedHypergraph& h = hr.sub[c];
        ClusterSearchOptions opts = options.search;
        opts.kappa_min = h.degree();
        opts.kappa_max = std::max(opts.kappa_max, opts.kappa_min);
        for (std::size_t v = 0; v < hr.size(); ++v) {
            if (h.incident(static_cast<int>(v)).empty()) continue;
            ClusterSolution sol = cluster_search(h, static_cast<int>(v), opts);
            if (sol.score <= 0.0) continue;
            double enclosed = 0.0;
            int count = 0;
            std::vector<char> in(hr.size(), 0);
            for (int u : sol.members) in[static_cast<std::size_t>(u)] = 1;
            for (std::size_t e = 0; e < h.edge_count(); ++e) {
                const auto verts = h.edge(e);
                if (std::all_of(verts.begin(), verts.end(), [&](int u) { return in[static_cast<std::size_t>(u)] != 0; })) {
                    enclosed += h.weight(e);
                    ++count;
                }
            }
            if (count == 0 || enclosed / count < options.min_edge_mean) continue;
            sol.tag = static_cast<int>(c);
            solutions.push_back(std::move(sol));
        }
    }
    auto conflicts = [&](int a, int b) {
        return a != b && hr.vertices[static_cast<std::size_t>(a)].owner == hr.vertices[static_cast<std::size_t>(b)].owner;
    };
    for (auto& sol : select_consistent_clusters(std::move(solutions), conflicts, options.min_size)) {
        RecognitionCluster cluster;
        cluster.label = hr.classes[static_cast<std::size_t>(sol.tag)];
        cluster.members = sol.members;
        cluster.score = sol.score;
        double sum = 0.0;
        int count = 0;
        for (std::size_t a = 0; a < sol.members.size(); ++a) {
            for (std::size_t b = a + 1; b < sol.members.size(); ++b) {
                sum += hr.score(static_cast<std::size_t>(sol.tag), static_cast<std::size_t>(sol.members[a]),
                                static_cast<std::size_t>(sol.members[b]));
                ++count;
            }
        }
        cluster.mean_edge = count > 0 ? sum / count : 0.0;
        for (int v : sol.members) {
            const auto& vert = hr.vertices[static_cast<std::size_t>(v)];
            if (vert.hypothesis >= 0) result.recovered[vert.owner] = v;
        }
        result.clusters.push_back(std::move(cluster));
    }
    return result;
}

double collective_prob(std::span<const double> pair_probs) {
    double keep = 1.0;
    for (double p : pair_probs) keep *= 1.0 - std::clamp(p, 0.0, 1.0);
    return 1.0 - keep;
}

std::vector<CollectiveEstimate> collective_estimates(const RecognitionHypergraph& hr, const RecognitionResult& result,
                                                     const RuleTable& rules) {
    std::vector<CollectiveEstimate> out(hr.size());
    for (const auto& cluster : result.clusters) {
        const auto c = rules.rule(cluster.label).collective;
        if (!c || !rules.collective_enabled(*c)) continue;
        const auto class_index = static_cast<std::size_t>(
            std::find(hr.classes.begin(), hr.classes.end(), cluster.label) - hr.classes.begin());
        for (int i : cluster.members) {
            std::vector<double> probs;
            for (int j : cluster.members) {
                if (j != i) probs.push_back(hr.score(class_index, static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            }
            auto& est = out[static_cast<std::size_t>(i)];
            est.probs[static_cast<std::size_t>(*c)] = collective_prob(probs);
        }
    }
    for (auto& est : out) {
        const auto best = std::max_element(est.probs.begin(), est.probs.end());
        if (*best > 0.0) est.label = static_cast<Collective>(best - est.probs.begin());
    }
    return out;
}

std::optional<Collective> SceneLabeler::update(std::span<const std::optional<Collective>> labels) {
    std::array<int, kCollectiveCount> counts{};
    bool any = false;
    for (const auto& l : labels) {
        if (!l) continue;
        ++counts[static_cast<std::size_t>(*l)];
        any = true;
    }
    if (any) {
        last_ = static_cast<Collective>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        since_ = 0;
        return last_;
    }
    if (last_ && since_ < hold_) {
        ++since_;
        return last_;
    }
    last_.reset();
    return std::nullopt;
}

}  // namespace hyperact
