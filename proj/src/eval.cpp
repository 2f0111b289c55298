// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/eval.hpp"

#include "hyperact/assignment.hpp"

#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

namespace hyperact {

namespace {

std::map<int, std::vector<const TrackRow*>> by_frame(std::span<const TrackRow> rows, int first_frame) {
    std::map<int, std::vector<const TrackRow*>> out;
    for (const auto& r : rows) {
        if (r.frame >= first_frame) out[r.frame].push_back(&r);
    }
    return out;
}

}  // namespace

MotResult clear_mot(std::span<const TrackRow> truth, std::span<const TrackRow> hypothesis, double iou_threshold,
                    int first_frame) {
    const auto gt_frames = by_frame(truth, first_frame);
    const auto hyp_frames = by_frame(hypothesis, first_frame);
    if (gt_frames.empty()) throw Error(ErrorKind::NoGroundTruth, "no ground-truth boxes to evaluate");
    std::set<int> frames;
    for (const auto& [f, _] : gt_frames) frames.insert(f);
    for (const auto& [f, _] : hyp_frames) frames.insert(f);

    MotResult result;
    MotMetrics& m = result.metrics;
    std::map<int, int> previous;   // gt -> hyp in the previous frame
    std::map<int, int> last_id;    // gt -> last hyp it was ever matched to
    std::map<int, int> gt_frames_seen, gt_frames_matched;
    std::map<int, bool> was_tracked;
    static const std::vector<const TrackRow*> none;

    for (int f : frames) {
        const auto git = gt_frames.find(f);
        const auto hit = hyp_frames.find(f);
        const auto& gts = git == gt_frames.end() ? none : git->second;
        const auto& hyps = hit == hyp_frames.end() ? none : hit->second;
        ++m.frames;
        m.gt += static_cast<long>(gts.size());

        std::map<int, int> current;
        std::vector<char> gt_used(gts.size(), 0), hyp_used(hyps.size(), 0);
        std::vector<double> match_iou(gts.size(), 0.0);
        // Persistence: keep last frame's pairs that still overlap enough.
        for (std::size_t g = 0; g < gts.size(); ++g) {
            const auto prev = previous.find(gts[g]->id);
            if (prev == previous.end()) continue;
            for (std::size_t h = 0; h < hyps.size(); ++h) {
                if (hyp_used[h] || hyps[h]->id != prev->second) continue;
                const double v = iou(gts[g]->box, hyps[h]->box);
                if (v >= iou_threshold) {
                    gt_used[g] = hyp_used[h] = 1;
                    current[gts[g]->id] = hyps[h]->id;
                    match_iou[g] = v;
                }
                break;
            }
        }
        std::vector<std::size_t> rows, cols;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (!gt_used[g]) rows.push_back(g);
        }
        for (std::size_t h = 0; h < hyps.size(); ++h) {
            if (!hyp_used[h]) cols.push_back(h);
        }
        if (!rows.empty() && !cols.empty()) {
            std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size(), kForbidden));
            for (std::size_t r = 0; r < rows.size(); ++r) {
                for (std::size_t c = 0; c < cols.size(); ++c) {
                    const double v = iou(gts[rows[r]]->box, hyps[cols[c]]->box);
                    if (v >= iou_threshold) cost[r][c] = 1.0 - v;
                }
            }
            const auto assign = solve_assignment(cost);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (assign[r] < 0) continue;
                const std::size_t g = rows[r];
                const std::size_t h = cols[static_cast<std::size_t>(assign[r])];
                gt_used[g] = hyp_used[h] = 1;
                current[gts[g]->id] = hyps[h]->id;
                match_iou[g] = iou(gts[g]->box, hyps[h]->box);
            }
        }
        for (std::size_t g = 0; g < gts.size(); ++g) {
            const int id = gts[g]->id;
            ++gt_frames_seen[id];
            const auto cur = current.find(id);
            if (cur == current.end()) {
                ++m.fn;
                if (was_tracked[id]) was_tracked[id] = false;
                continue;
            }
            ++m.tp;
            ++gt_frames_matched[id];
            m.iou_sum += match_iou[g];
            const auto last = last_id.find(id);
            const bool switched = last != last_id.end() && last->second != cur->second;
            const bool resumed = last != last_id.end() && !was_tracked[id];
            if (switched) ++m.id_switches;
            if (switched || resumed) ++m.fragmentations;
            last_id[id] = cur->second;
            was_tracked[id] = true;
        }
        for (std::size_t h = 0; h < hyps.size(); ++h) {
            if (!hyp_used[h]) ++m.fp;
        }
        previous = std::move(current);
        result.matches[f] = previous;
    }
    for (const auto& [id, seen] : gt_frames_seen) {
        ++m.trajectories;
        const double ratio = static_cast<double>(gt_frames_matched[id]) / seen;
        if (ratio >= 0.8) ++m.mostly_tracked;
        if (ratio <= 0.2) ++m.mostly_lost;
    }
    return result;
}

AccuracyReport activity_accuracy(std::span<const int> truth, std::span<const int> predicted, int classes) {
    if (truth.size() != predicted.size()) throw Error(ErrorKind::InvalidArgument, "label streams differ in length");
    if (truth.empty()) throw Error(ErrorKind::NoSamples, "no aligned label samples");
    AccuracyReport r;
    r.samples = static_cast<long>(truth.size());
    r.confusion.assign(static_cast<std::size_t>(classes), std::vector<long>(static_cast<std::size_t>(classes), 0));
    long correct = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        if (truth[k] < 0 || truth[k] >= classes || predicted[k] < 0 || predicted[k] >= classes) {
            throw Error(ErrorKind::InvalidArgument, "label outside the class range");
        }
        ++r.confusion[static_cast<std::size_t>(truth[k])][static_cast<std::size_t>(predicted[k])];
        if (truth[k] == predicted[k]) ++correct;
    }
    r.oca = static_cast<double>(correct) / static_cast<double>(truth.size());
    double recall_sum = 0.0;
    int present = 0;
    for (int c = 0; c < classes; ++c) {
        long row = 0;
        for (long v : r.confusion[static_cast<std::size_t>(c)]) row += v;
        if (row == 0) continue;
        recall_sum += static_cast<double>(r.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)]) / row;
        ++present;
    }
    r.mca = recall_sum / present;
    return r;
}

namespace {

int collective_index(const std::optional<Collective>& c) { return c ? static_cast<int>(*c) : kCollectiveCount; }

}  // namespace

AlignedLabels align_labels(const MotResult& mot, std::span<const FrameActivities> truth,
                           std::span<const FrameActivities> predicted, int first_frame) {
    AlignedLabels out;
    std::map<int, const FrameActivities*> pred;
    for (const auto& p : predicted) pred[p.frame] = &p;
    for (const auto& t : truth) {
        if (t.frame < first_frame) continue;
        const auto pit = pred.find(t.frame);
        const FrameActivities* p = pit == pred.end() ? nullptr : pit->second;
        out.scene_truth.push_back(collective_index(t.scene));
        out.scene_pred.push_back(p ? collective_index(p->scene) : kCollectiveCount);
        const auto mit = mot.matches.find(t.frame);
        if (mit == mot.matches.end()) continue;
        const auto& match = mit->second;
        std::map<int, const TargetActivity*> hyp_targets;
        std::map<std::pair<int, int>, Interaction> hyp_pairs;
        if (p) {
            for (const auto& ta : p->targets) hyp_targets[ta.id] = &ta;
            for (const auto& r : p->interactions) hyp_pairs[{std::min(r.i, r.j), std::max(r.i, r.j)}] = r.label;
        }
        for (const auto& ta : t.targets) {
            const auto m = match.find(ta.id);
            if (m == match.end()) continue;
            const auto h = hyp_targets.find(m->second);
            out.individual_truth.push_back(static_cast<int>(ta.individual));
            out.individual_pred.push_back(h == hyp_targets.end() ? static_cast<int>(IndividualActivity::Standing)
                                                                 : static_cast<int>(h->second->individual));
            out.collective_truth.push_back(collective_index(ta.collective));
            out.collective_pred.push_back(h == hyp_targets.end() ? kCollectiveCount : collective_index(h->second->collective));
        }
        for (const auto& r : t.interactions) {
            const auto mi = match.find(r.i);
            const auto mj = match.find(r.j);
            if (mi == match.end() || mj == match.end()) continue;
            const auto key = std::pair(std::min(mi->second, mj->second), std::max(mi->second, mj->second));
            const auto h = hyp_pairs.find(key);
            out.interaction_truth.push_back(static_cast<int>(r.label));
            out.interaction_pred.push_back(static_cast<int>(h == hyp_pairs.end() ? Interaction::NA : h->second));
        }
    }
    return out;
}

MetricsReport evaluate(std::span<const TrackRow> truth_tracks, std::span<const TrackRow> hyp_tracks,
                       std::span<const FrameActivities> truth_labels, std::span<const FrameActivities> hyp_labels,
                       double iou_threshold, int first_frame) {
    MetricsReport report;
    const MotResult mot = clear_mot(truth_tracks, hyp_tracks, iou_threshold, first_frame);
    report.mot = mot.metrics;
    if (truth_labels.empty()) return report;
    const AlignedLabels a = align_labels(mot, truth_labels, hyp_labels, first_frame);
    auto level = [](const std::vector<int>& t, const std::vector<int>& p, int classes) -> std::optional<AccuracyReport> {
        if (t.empty()) return std::nullopt;
        return activity_accuracy(t, p, classes);
    };
    report.individual = level(a.individual_truth, a.individual_pred, kPhysicalActivities);
    report.interaction = level(a.interaction_truth, a.interaction_pred, kInteractionCount);
    report.collective = level(a.collective_truth, a.collective_pred, kCollectiveCount + 1);
    report.scene = level(a.scene_truth, a.scene_pred, kCollectiveCount + 1);
    return report;
}

std::string MetricsReport::to_text() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    os << "Rcll " << mot.recall() << "\n";
    os << "Prcn " << mot.precision() << "\n";
    os << "FAR " << mot.far() << "\n";
    os << "MT " << mot.mt_ratio() << "\n";
    os << "ML " << mot.ml_ratio() << "\n";
    os << "FP " << mot.fp << "\n";
    os << "FN " << mot.fn << "\n";
    os << "IDs " << mot.id_switches << "\n";
    os << "FM " << mot.fragmentations << "\n";
    os << "MOTA " << mot.mota() << "\n";
    os << "MOTP " << mot.motp() << "\n";
    auto level = [&](const char* name, const std::optional<AccuracyReport>& r) {
        if (!r) return;
        os << name << ".OCA " << r->oca << "\n";
        os << name << ".MCA " << r->mca << "\n";
    };
    level("individual", individual);
    level("interaction", interaction);
    level("collective", collective);
    level("scene", scene);
    return os.str();
}

std::string MetricsReport::to_json() const {
    nlohmann::ordered_json j;
    j["Rcll"] = mot.recall();
    j["Prcn"] = mot.precision();
    j["FAR"] = mot.far();
    j["MT"] = mot.mt_ratio();
    j["ML"] = mot.ml_ratio();
    j["FP"] = mot.fp;
    j["FN"] = mot.fn;
    j["IDs"] = mot.id_switches;
    j["FM"] = mot.fragmentations;
    j["MOTA"] = mot.mota();
    j["MOTP"] = mot.motp();
    auto level = [&](const char* name, const std::optional<AccuracyReport>& r) {
        if (r) j[name] = {{"OCA", r->oca}, {"MCA", r->mca}, {"samples", r->samples}};
    };
    level("individual", individual);
    level("interaction", interaction);
    level("collective", collective);
    level("scene", scene);
    return j.dump() + "\n";
}

}  // namespace hyperact
