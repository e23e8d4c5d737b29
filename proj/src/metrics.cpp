#include "fairtrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>

#include "fairtrack/assignment.hpp"
#include "fairtrack/errors.hpp"
#include "fairtrack/simd/kernels.hpp"

namespace fairtrack {

namespace {

void check_unique_ids(const FrameBoxes& seq, const char* what) {
    for (const auto& [frame, boxes] : seq) {
        std::set<int> seen;
        for (const auto& b : boxes) {
            if (!seen.insert(b.id).second) {
                throw ValidationError(std::string(what) + ": duplicate id " + std::to_string(b.id) + " in frame " +
                                      std::to_string(frame));
            }
        }
    }
}

const std::vector<IdBox>& boxes_at(const FrameBoxes& seq, int frame) {
    static const std::vector<IdBox> kNone;
    const auto it = seq.find(frame);
    return it == seq.end() ? kNone : it->second;
}

}  // namespace

MetricsReport clear_mot(const FrameBoxes& gt, const FrameBoxes& pred, double iou_thresh) {
    check_unique_ids(gt, "ground truth");
    check_unique_ids(pred, "prediction");

    std::set<int> frames;
    for (const auto& [f, _] : gt) frames.insert(f);
    for (const auto& [f, _] : pred) frames.insert(f);

    MetricsReport r;
    std::unordered_map<int, int> last_match;   // gt id -> pred id at its last matched frame
    std::unordered_map<int, int> prev_frame;   // gt id -> pred id in the previous frame only
    std::unordered_map<int, long> gt_present;
    std::unordered_map<int, long> gt_matched;
    double iou_sum = 0.0;

    for (int frame : frames) {
        const auto& g = boxes_at(gt, frame);
        const auto& p = boxes_at(pred, frame);
        r.total_gt += static_cast<long>(g.size());
        for (const auto& gb : g) ++gt_present[gb.id];

        std::vector<int> g_to_p(g.size(), -1);
        std::vector<char> p_used(p.size(), 0);

        // Keep last frame's correspondences that are still valid.
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto it = prev_frame.find(g[i].id);
            if (it == prev_frame.end()) continue;
            for (std::size_t j = 0; j < p.size(); ++j) {
                if (!p_used[j] && p[j].id == it->second && iou(g[i].box, p[j].box) >= iou_thresh) {
                    g_to_p[i] = static_cast<int>(j);
                    p_used[j] = 1;
                    break;
                }
            }
        }

        std::vector<int> rows;
        std::vector<int> cols;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g_to_p[i] < 0) rows.push_back(static_cast<int>(i));
        }
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (!p_used[j]) cols.push_back(static_cast<int>(j));
        }
        CostMatrix cost(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
        for (std::size_t a = 0; a < rows.size(); ++a) {
            for (std::size_t b = 0; b < cols.size(); ++b) {
                const double ov = iou(g[static_cast<std::size_t>(rows[a])].box, p[static_cast<std::size_t>(cols[b])].box);
                cost(static_cast<int>(a), static_cast<int>(b)) = ov >= iou_thresh ? 1.0 - ov : kInfiniteCost;
            }
        }
        for (auto [a, b] : hungarian(cost, 1.0).matches) {
            g_to_p[static_cast<std::size_t>(rows[static_cast<std::size_t>(a)])] = cols[static_cast<std::size_t>(b)];
            p_used[static_cast<std::size_t>(cols[static_cast<std::size_t>(b)])] = 1;
        }

        prev_frame.clear();
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g_to_p[i] < 0) {
                ++r.fn;
                continue;
            }
            const IdBox& pb = p[static_cast<std::size_t>(g_to_p[i])];
            const auto it = last_match.find(g[i].id);
            if (it != last_match.end() && it->second != pb.id) ++r.id_switches;
            last_match[g[i].id] = pb.id;
            prev_frame[g[i].id] = pb.id;
            ++gt_matched[g[i].id];
            ++r.matches;
            iou_sum += iou(g[i].box, pb.box);
        }
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (!p_used[j]) ++r.fp;
        }
    }

    if (r.total_gt > 0) {
        r.mota = 1.0 - static_cast<double>(r.fp + r.fn + r.id_switches) / static_cast<double>(r.total_gt);
    }
    r.motp = r.matches > 0 ? iou_sum / static_cast<double>(r.matches) : 0.0;
    r.gt_tracks = static_cast<int>(gt_present.size());
    for (const auto& [id, present] : gt_present) {
        const double ratio = static_cast<double>(gt_matched[id]) / static_cast<double>(present);
        if (ratio >= kMostlyTracked) ++r.mostly_tracked;
        if (ratio <= kMostlyLost) ++r.mostly_lost;
    }
    if (r.gt_tracks > 0) {
        r.mt_ratio = static_cast<double>(r.mostly_tracked) / r.gt_tracks;
        r.ml_ratio = static_cast<double>(r.mostly_lost) / r.gt_tracks;
    }
    return r;
}

MetricsReport idf1(const FrameBoxes& gt, const FrameBoxes& pred, double iou_thresh) {
    check_unique_ids(gt, "ground truth");
    check_unique_ids(pred, "prediction");

    std::map<int, int> gt_index;
    std::map<int, int> pred_index;
    long total_gt = 0;
    long total_pred = 0;
    for (const auto& [f, boxes] : gt) {
        for (const auto& b : boxes) gt_index.emplace(b.id, 0);
        total_gt += static_cast<long>(boxes.size());
    }
    for (const auto& [f, boxes] : pred) {
        for (const auto& b : boxes) pred_index.emplace(b.id, 0);
        total_pred += static_cast<long>(boxes.size());
    }
    int k = 0;
    for (auto& [id, idx] : gt_index) idx = k++;
    k = 0;
    for (auto& [id, idx] : pred_index) idx = k++;

    // Co-occurrence counts: frames where the two trajectories overlap enough.
    std::vector<std::vector<long>> overlap(gt_index.size(), std::vector<long>(pred_index.size(), 0));
    for (const auto& [frame, g] : gt) {
        const auto& p = boxes_at(pred, frame);
        for (const auto& gb : g) {
            for (const auto& pb : p) {
                if (iou(gb.box, pb.box) >= iou_thresh) ++overlap[static_cast<std::size_t>(gt_index[gb.id])][static_cast<std::size_t>(pred_index[pb.id])];
            }
        }
    }

    CostMatrix cost(static_cast<int>(gt_index.size()), static_cast<int>(pred_index.size()));
    for (int i = 0; i < cost.rows(); ++i) {
        for (int j = 0; j < cost.cols(); ++j) cost(i, j) = -static_cast<double>(overlap[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    long idtp = 0;
    for (auto [i, j] : hungarian(cost, 0.0).matches) idtp += overlap[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

    MetricsReport r;
    r.idtp = idtp;
    r.idfn = total_gt - idtp;
    r.idfp = total_pred - idtp;
    const long denom = 2 * idtp + r.idfp + r.idfn;
    r.idf1 = denom > 0 ? 2.0 * static_cast<double>(idtp) / static_cast<double>(denom) : 1.0;
    r.idp = total_pred > 0 ? static_cast<double>(idtp) / static_cast<double>(total_pred) : 0.0;
    r.idr = total_gt > 0 ? static_cast<double>(idtp) / static_cast<double>(total_gt) : 0.0;
    return r;
}

double detection_ap(const FrameBoxes& gt, const FrameBoxes& pred, double iou_thresh) {
    long total_gt = 0;
    for (const auto& [f, boxes] : gt) total_gt += static_cast<long>(boxes.size());
    if (total_gt == 0) return 0.0;

    struct Ranked {
        int frame;
        std::size_t index;
        double score;
    };
    std::vector<Ranked> ranked;
    for (const auto& [f, boxes] : pred) {
        for (std::size_t i = 0; i < boxes.size(); ++i) ranked.push_back({f, i, boxes[i].score});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) { return a.score > b.score; });

    std::map<int, std::vector<char>> claimed;
    for (const auto& [f, boxes] : gt) claimed[f].assign(boxes.size(), 0);

    std::vector<double> precision;
    std::vector<double> recall;
    long tp = 0;
    long fp = 0;
    for (const Ranked& rk : ranked) {
        const BBox& box = pred.at(rk.frame)[rk.index].box;
        const auto& g = boxes_at(gt, rk.frame);
        double best = -1.0;
        int best_j = -1;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double ov = iou(box, g[j].box);
            if (ov > best) {
                best = ov;
                best_j = static_cast<int>(j);
            }
        }
        if (best_j >= 0 && best >= iou_thresh && !claimed[rk.frame][static_cast<std::size_t>(best_j)]) {
            claimed[rk.frame][static_cast<std::size_t>(best_j)] = 1;
            ++tp;
        } else {
            ++fp;
        }
        precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
        recall.push_back(static_cast<double>(tp) / static_cast<double>(total_gt));
    }

    // Monotone precision envelope, then area under the step curve.
    for (std::size_t i = precision.size(); i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < recall.size(); ++i) {
        ap += (recall[i] - prev_recall) * precision[i];
        prev_recall = recall[i];
    }
    return ap;
}

double tpr_at_far(std::span<const double> genuine, std::span<const double> impostor, double far) {
    if (genuine.empty() || impostor.empty()) throw ValidationError("tpr_at_far: empty score list");
    if (!(far > 0.0 && far < 1.0)) throw ValidationError("tpr_at_far: far must lie in (0, 1)");

    std::vector<double> imp(impostor.begin(), impostor.end());
    std::sort(imp.begin(), imp.end(), std::greater<>());
    const auto allowed = static_cast<std::size_t>(std::floor(far * static_cast<double>(imp.size()) + 1e-9));
    if (allowed >= imp.size()) return 1.0;
    // Any threshold just above the (allowed+1)-th largest impostor admits exactly `allowed` of them.
    const double bar = imp[allowed];
    const auto accepted = std::count_if(genuine.begin(), genuine.end(), [&](double s) { return s > bar; });
    return static_cast<double>(accepted) / static_cast<double>(genuine.size());
}

ReidPairs build_reid_pairs(std::span<const LabelledEmbedding> samples) {
    ReidPairs pairs;
    const auto& k = simd::kernels();
    for (std::size_t a = 0; a < samples.size(); ++a) {
        for (std::size_t b = a + 1; b < samples.size(); ++b) {
            const auto& x = samples[a];
            const auto& y = samples[b];
            if (x.embedding.size() != y.embedding.size()) throw ValidationError("build_reid_pairs: dimension mismatch");
            const bool same_id = x.identity == y.identity;
            const bool same_frame = x.frame == y.frame;
            if (same_id && !same_frame) {
                pairs.genuine.push_back(k.dot(x.embedding.data(), y.embedding.data(), x.embedding.size()));
            } else if (!same_id && same_frame) {
                pairs.impostor.push_back(k.dot(x.embedding.data(), y.embedding.data(), x.embedding.size()));
            }
        }
    }
    return pairs;
}

}  // namespace fairtrack
