// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace hyperact {

using nlohmann::json;

Vec2 AgentScript::foot_at(int frame) const {
    Vec2 p = start;
    int remaining = std::max(0, frame - appear);
    for (const auto& s : segments) {
        const int steps = std::min(remaining, s.frames);
        p += s.velocity * steps;
        remaining -= steps;
        if (remaining == 0) break;
    }
    return p;
}

Vec2 AgentScript::velocity_at(int frame) const {
    int local = frame - appear;
    if (local < 0) return {};
    for (const auto& s : segments) {
        if (local < s.frames) return s.velocity;
        local -= s.frames;
    }
    return {};
}

NoiseModel moderate_noise() {
    NoiseModel n;
    n.jitter = 2.0;
    n.size_jitter = 1.0;
    n.miss_rate = 0.05;
    n.fp_rate = 0.05;
    n.appearance_sigma = 0.1;
    return n;
}

IndividualActivity scripted_activity(double speed) {
    if (speed < 0.5) return IndividualActivity::Standing;
    if (speed >= 4.0) return IndividualActivity::Running;
    return IndividualActivity::Walking;
}

void Scenario::validate() const {
    if (frames <= 0) throw Error(ErrorKind::InvalidArgument, "scenario needs at least one frame");
    if (fps <= 0 || width <= 0 || height <= 0) throw Error(ErrorKind::InvalidArgument, "fps and image size must be positive");
    if (appearance_dim < 0) throw Error(ErrorKind::InvalidArgument, "appearance_dim must be >= 0");
    auto rate = [](double r, const char* what) {
        if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must lie in [0,1]");
    };
    rate(noise.miss_rate, "miss_rate");
    rate(noise.fp_rate, "fp_rate");
    if (noise.jitter < 0 || noise.size_jitter < 0 || noise.appearance_sigma < 0) {
        throw Error(ErrorKind::InvalidArgument, "noise spreads must be >= 0");
    }
    std::set<int> group_ids;
    for (const auto& g : groups) {
        if (!group_ids.insert(g.id).second) throw Error(ErrorKind::InvalidArgument, "duplicate group id");
    }
    std::set<int> ids;
    for (const auto& a : agents) {
        if (!ids.insert(a.id).second) throw Error(ErrorKind::InvalidArgument, "duplicate agent id " + std::to_string(a.id));
        if (a.group >= 0 && !group_ids.count(a.group)) throw Error(ErrorKind::InvalidArgument, "agent refers to an unknown group");
        if (!(a.box_w > 0) || !(a.box_h > 0)) throw Error(ErrorKind::InvalidArgument, "agent box must be positive");
        for (const auto& s : a.segments) {
            if (s.frames < 0) throw Error(ErrorKind::InvalidArgument, "segment length must be >= 0");
        }
    }
    for (const auto& o : occlusions) {
        if (!ids.count(o.agent)) throw Error(ErrorKind::InvalidArgument, "occlusion refers to an unknown agent");
        if (o.first < 0 || o.last < o.first || o.last >= frames) {
            throw Error(ErrorKind::InvalidArgument, "occlusion interval outside the scenario");
        }
    }
}

std::string Scenario::to_json() const {
    json j;
    j["seed"] = seed;
    j["frames"] = frames;
    j["fps"] = fps;
    j["width"] = width;
    j["height"] = height;
    j["warmup"] = warmup;
    j["appearance_dim"] = appearance_dim;
    j["noise"] = {{"jitter", noise.jitter},
                  {"size_jitter", noise.size_jitter},
                  {"miss_rate", noise.miss_rate},
                  {"fp_rate", noise.fp_rate},
                  {"appearance_sigma", noise.appearance_sigma}};
    j["groups"] = json::array();
    for (const auto& g : groups) {
        j["groups"].push_back({{"id", g.id}, {"collective", to_string(g.collective)}, {"interaction", to_string(g.interaction)}});
    }
    j["agents"] = json::array();
    for (const auto& a : agents) {
        json segs = json::array();
        for (const auto& s : a.segments) segs.push_back({s.frames, s.velocity.x, s.velocity.y});
        json ja = {{"id", a.id}, {"group", a.group}, {"start", {a.start.x, a.start.y}}, {"segments", segs},
                   {"appear", a.appear}, {"vanish", a.vanish}, {"box", {a.box_w, a.box_h}}};
        j["agents"].push_back(ja);
    }
    j["occlusions"] = json::array();
    for (const auto& o : occlusions) j["occlusions"].push_back({{"agent", o.agent}, {"first", o.first}, {"last", o.last}});
    return j.dump(2) + "\n";
}

Scenario Scenario::from_json(std::string_view text) {
    Scenario s;
    try {
        const json j = json::parse(text);
        s.seed = j.value("seed", std::uint64_t{0});
        s.frames = j.value("frames", 100);
        s.fps = j.value("fps", 25);
        s.width = j.value("width", 1280);
        s.height = j.value("height", 720);
        s.warmup = j.value("warmup", 40);
        s.appearance_dim = j.value("appearance_dim", 8);
        if (j.contains("noise")) {
            const auto& n = j.at("noise");
            s.noise.jitter = n.value("jitter", 0.0);
            s.noise.size_jitter = n.value("size_jitter", 0.0);
            s.noise.miss_rate = n.value("miss_rate", 0.0);
            s.noise.fp_rate = n.value("fp_rate", 0.0);
            s.noise.appearance_sigma = n.value("appearance_sigma", 0.0);
        }
        for (const auto& g : j.value("groups", json::array())) {
            GroupScript gs;
            gs.id = g.at("id").get<int>();
            const auto c = parse_collective(g.at("collective").get<std::string>());
            const auto i = parse_interaction(g.at("interaction").get<std::string>());
            if (!c || !i) throw Error(ErrorKind::InputError, "unknown group label");
            gs.collective = *c;
            gs.interaction = *i;
            s.groups.push_back(gs);
        }
        for (const auto& a : j.value("agents", json::array())) {
            AgentScript as;
            as.id = a.at("id").get<int>();
            as.group = a.value("group", -1);
            const auto& st = a.at("start");
            as.start = {st.at(0).get<double>(), st.at(1).get<double>()};
            for (const auto& seg : a.value("segments", json::array())) {
                as.segments.push_back({seg.at(0).get<int>(), {seg.at(1).get<double>(), seg.at(2).get<double>()}});
            }
            as.appear = a.value("appear", 0);
            as.vanish = a.value("vanish", -1);
            if (a.contains("box")) {
                as.box_w = a.at("box").at(0).get<double>();
                as.box_h = a.at("box").at(1).get<double>();
            }
            s.agents.push_back(std::move(as));
        }
        for (const auto& o : j.value("occlusions", json::array())) {
            s.occlusions.push_back({o.at("agent").get<int>(), o.at("first").get<int>(), o.at("last").get<int>()});
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InputError, std::string("scenario: ") + e.what());
    }
    s.validate();
    return s;
}

SimOutput synthesize(const Scenario& sc) {
    sc.validate();
    SimOutput out;
    std::mt19937_64 rng(sc.seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t a = 0; a < sc.agents.size(); ++a) {
        std::vector<double> v(static_cast<std::size_t>(sc.appearance_dim));
        for (auto& x : v) x = unit(rng);
        out.identities.push_back(std::move(v));
    }
    std::map<int, const GroupScript*> groups;
    for (const auto& g : sc.groups) groups[g.id] = &g;
    auto occluded = [&](int agent, int frame) {
        return std::any_of(sc.occlusions.begin(), sc.occlusions.end(),
                           [&](const Occlusion& o) { return o.agent == agent && frame >= o.first && frame <= o.last; });
    };
    std::poisson_distribution<int> false_count(sc.noise.fp_rate);

    for (int f = 0; f < sc.frames; ++f) {
        FrameActivities labels;
        labels.frame = f;
        std::vector<std::size_t> present;
        for (std::size_t a = 0; a < sc.agents.size(); ++a) {
            const AgentScript& agent = sc.agents[a];
            if (!agent.present(f)) continue;
            present.push_back(a);
            const Box box = Box::from_foot(agent.foot_at(f), agent.box_w, agent.box_h);
            out.truth.push_back({f, agent.id, box, 1.0});
            TargetActivity ta;
            ta.id = agent.id;
            ta.individual = scripted_activity(agent.velocity_at(f).norm());
            if (agent.group >= 0) ta.collective = groups.at(agent.group)->collective;
            labels.targets.push_back(ta);

            if (occluded(agent.id, f)) continue;
            const bool noisy = sc.noise.miss_rate > 0.0;
            if (noisy && uniform(rng) < sc.noise.miss_rate) continue;
            Detection d;
            d.frame = f;
            d.box = box;
            if (sc.noise.jitter > 0.0) {
                d.box.x += sc.noise.jitter * unit(rng);
                d.box.y += sc.noise.jitter * unit(rng);
            }
            if (sc.noise.size_jitter > 0.0) {
                d.box.w = std::max(4.0, d.box.w + sc.noise.size_jitter * unit(rng));
                d.box.h = std::max(4.0, d.box.h + sc.noise.size_jitter * unit(rng));
            }
            d.confidence = 0.9;
            d.appearance = out.identities[a];
            if (sc.noise.appearance_sigma > 0.0) {
                for (auto& x : d.appearance) x += sc.noise.appearance_sigma * unit(rng);
            }
            out.detections.push_back(std::move(d));
        }
        if (sc.noise.fp_rate > 0.0) {
            const int count = false_count(rng);
            for (int k = 0; k < count; ++k) {
                Detection d;
                d.frame = f;
                d.box = {uniform(rng) * (sc.width - 32.0), uniform(rng) * (sc.height - 80.0), 32.0, 80.0};
                d.confidence = 0.3 + 0.4 * uniform(rng);
                d.appearance.resize(static_cast<std::size_t>(sc.appearance_dim));
                for (auto& x : d.appearance) x = unit(rng);
                out.detections.push_back(std::move(d));
            }
        }
        std::array<int, kCollectiveCount> counts{};
        bool any = false;
        for (const auto& t : labels.targets) {
            if (!t.collective) continue;
            ++counts[static_cast<std::size_t>(*t.collective)];
            any = true;
        }
        if (any) labels.scene = static_cast<Collective>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        for (std::size_t x = 0; x < present.size(); ++x) {
            for (std::size_t y = x + 1; y < present.size(); ++y) {
                const AgentScript& a = sc.agents[present[x]];
                const AgentScript& b = sc.agents[present[y]];
                InteractionRecord r;
                r.i = std::min(a.id, b.id);
                r.j = std::max(a.id, b.id);
                r.label = a.group >= 0 && a.group == b.group ? groups.at(a.group)->interaction : Interaction::NA;
                r.p = 1.0;
                labels.interactions.push_back(r);
            }
        }
        std::sort(labels.interactions.begin(), labels.interactions.end(), [](const auto& p, const auto& q) {
            return std::pair(p.i, p.j) < std::pair(q.i, q.j);
        });
        std::sort(labels.targets.begin(), labels.targets.end(), [](const auto& p, const auto& q) { return p.id < q.id; });
        out.labels.push_back(std::move(labels));
    }
    return out;
}

namespace {

constexpr Vec2 kCenter{640.0, 400.0};

Scenario base(std::uint64_t seed, bool noisy, int frames) {
    Scenario s;
    s.seed = seed;
    s.frames = frames;
    if (noisy) s.noise = moderate_noise();
    return s;
}

void add_group(Scenario& s, int id, Collective c, Interaction i) { s.groups.push_back({id, c, i}); }

void add_agent(Scenario& s, int group, Vec2 start, std::vector<Segment> segments, int appear = 0) {
    AgentScript a;
    a.id = static_cast<int>(s.agents.size()) + 1;
    a.group = group;
    a.start = start;
    a.segments = std::move(segments);
    a.appear = appear;
    s.agents.push_back(std::move(a));
}

/// Side by side along y, moving with v.
void line_group(Scenario& s, int group, Vec2 first, Vec2 spacing, int count, std::vector<Segment> segments) {
    for (int k = 0; k < count; ++k) add_agent(s, group, first + spacing * k, segments);
}

/// count agents on the diagonals of a circle, moving radially at speed (negative = inward) for frames.
void radial_group(Scenario& s, int group, Vec2 center, double radius, double speed, int frames, int count) {
    for (int k = 0; k < count; ++k) {
        const double a = std::numbers::pi / 4 + 2 * std::numbers::pi * k / count;
        const Vec2 dir{std::cos(a), std::sin(a)};
        add_agent(s, group, center + dir * radius, {{frames, dir * speed}});
    }
}

std::vector<Segment> oscillate(Vec2 v, int half_period, int frames) {
    std::vector<Segment> out;
    for (int t = 0, k = 0; t < frames; t += half_period, ++k) out.push_back({half_period, k % 2 == 0 ? v : -v});
    return out;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"crossing", "waiting", "queuing", "talking", "gathering", "dismissal", "chasing", "jogging",
            "dancing", "mixed", "occlusion", "distractor", "throughput"};
}

std::vector<std::string> default_suite() {
    return {"crossing", "waiting", "queuing", "talking", "gathering", "dismissal", "chasing", "jogging", "dancing", "mixed"};
}

Scenario preset(std::string_view name, std::uint64_t seed, bool noisy) {
    using C = Collective;
    using I = Interaction;
    if (name == "crossing") {
        Scenario s = base(seed, noisy, 140);
        add_group(s, 0, C::Crossing, I::WS);
        line_group(s, 0, {200, 340}, {0, 60}, 3, {{140, {2.5, 0}}});
        return s;
    }
    if (name == "waiting") {
        Scenario s = base(seed, noisy, 140);
        add_group(s, 0, C::Waiting, I::SS);
        line_group(s, 0, {450, 340}, {0, 60}, 3, {{25, {2.0, 0}}});
        return s;
    }
    if (name == "queuing") {
        Scenario s = base(seed, noisy, 140);
        add_group(s, 0, C::Queuing, I::SR);
        line_group(s, 0, {450, 400}, {60, 0}, 3, {{25, {2.0, 0}}});
        return s;
    }
    if (name == "talking") {
        Scenario s = base(seed, noisy, 140);
        add_group(s, 0, C::Talking, I::FE);
        radial_group(s, 0, kCenter, 90, -2.0, 25, 4);
        return s;
    }
    if (name == "gathering") {
        Scenario s = base(seed, noisy, 130);
        add_group(s, 0, C::Gathering, I::AP);
        radial_group(s, 0, kCenter, 300, -2.0, 130, 4);
        return s;
    }
    if (name == "dismissal") {
        Scenario s = base(seed, noisy, 130);
        add_group(s, 0, C::Dismissal, I::WO);
        radial_group(s, 0, kCenter, 40, 2.0, 130, 4);
        return s;
    }
    if (name == "chasing") {
        Scenario s = base(seed, noisy, 120);
        add_group(s, 0, C::Chasing, I::RR);
        line_group(s, 0, {100, 400}, {60, 0}, 3, {{120, {6.0, 0}}});
        return s;
    }
    if (name == "jogging") {
        Scenario s = base(seed, noisy, 120);
        add_group(s, 0, C::Jogging, I::RS);
        line_group(s, 0, {100, 340}, {0, 60}, 3, {{120, {6.0, 0}}});
        return s;
    }
    if (name == "dancing") {
        Scenario s = base(seed, noisy, 140);
        add_group(s, 0, C::Dancing, I::DT);
        line_group(s, 0, {560, 400}, {60, 0}, 3, oscillate({0, 2.5}, 10, 140));
        return s;
    }
    if (name == "mixed") {
        Scenario s = base(seed, noisy, 140);
        add_group(s, 0, C::Crossing, I::WS);
        add_group(s, 1, C::Waiting, I::SS);
        line_group(s, 0, {150, 150}, {0, 60}, 3, {{140, {2.5, 0}}});
        line_group(s, 1, {850, 480}, {0, 60}, 3, {{25, {2.0, 0}}});
        return s;
    }
    if (name == "occlusion") {
        Scenario s = base(seed, noisy, 160);
        add_group(s, 0, C::Crossing, I::WS);
        line_group(s, 0, {150, 340}, {0, 60}, 3, {{160, {2.5, 0}}});
        const int first = 50 + static_cast<int>(seed % 41);
        s.occlusions.push_back({static_cast<int>(seed % 3) + 1, first, first + 14});
        return s;
    }
    if (name == "distractor") {
        Scenario s = base(seed, noisy, 160);
        add_group(s, 0, C::Crossing, I::WS);
        line_group(s, 0, {150, 340}, {0, 60}, 3, {{160, {2.5, 0}}});
        // Crosses the group's path near frame 80.
        add_agent(s, -1, {350, 200}, {{160, {0, 2.5}}});
        return s;
    }
    if (name == "throughput") {
        Scenario s = base(seed, noisy, 1000);
        add_group(s, 0, C::Crossing, I::WS);
        add_group(s, 1, C::Jogging, I::RS);
        line_group(s, 0, {200, 120}, {0, 60}, 4, oscillate({2.5, 0}, 320, 1000));
        line_group(s, 1, {150, 420}, {0, 60}, 4, oscillate({5.0, 0}, 180, 1000));
        return s;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown preset " + std::string(name));
}

}  // namespace hyperact
