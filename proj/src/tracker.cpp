#include "fairtrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairtrack/errors.hpp"
#include "fairtrack/simd/kernels.hpp"

namespace fairtrack {

void TrackerConfig::validate() const {
    auto in_range = [](double v, double lo, double hi, const char* name) {
        if (!(v >= lo && v <= hi)) {
            throw ValidationError(std::string(name) + " must lie in [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
        }
    };
    in_range(det_threshold, 0.0, 1.0, "det_threshold");
    in_range(emb_match_threshold, 0.0, 2.0, "emb_match_threshold");
    in_range(iou_match_threshold, 0.0, 1.0, "iou_match_threshold");
    in_range(ema_momentum, 0.0, 1.0, "ema_momentum");
    if (track_buffer < 0) throw ValidationError("track_buffer must be >= 0");
    if (!(gate_chi2 > 0.0)) throw ValidationError("gate_chi2 must be positive");
    if (!use_reid && !use_iou) throw ValidationError("use_reid and use_iou cannot both be disabled");
}

CostMatrix cosine_distance_matrix(std::span<const Track* const> tracks, std::span<const Detection> dets) {
    CostMatrix cost(static_cast<int>(tracks.size()), static_cast<int>(dets.size()));
    const auto& k = simd::kernels();
    for (std::size_t j = 0; j < dets.size(); ++j) {
        if (!dets[j].has_embedding()) throw ValidationError("detection " + std::to_string(j) + " has no embedding");
    }
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        const auto& e = tracks[i]->smooth_emb;
        if (e.empty()) throw ValidationError("track " + std::to_string(tracks[i]->track_id) + " has no embedding");
        for (std::size_t j = 0; j < dets.size(); ++j) {
            const auto& f = dets[j].embedding;
            if (f.size() != e.size()) throw ValidationError("embedding dimensions differ");
            const double d = 1.0 - k.dot(e.data(), f.data(), e.size());
            cost(static_cast<int>(i), static_cast<int>(j)) = std::clamp(d, 0.0, 2.0);
        }
    }
    return cost;
}

void ema_update(std::vector<double>& smooth, std::span<const double> observed, double momentum) {
    if (smooth.empty()) {
        smooth.assign(observed.begin(), observed.end());
        return;
    }
    if (smooth.size() != observed.size()) throw ValidationError("ema_update: embedding dimensions differ");
    std::vector<double> blended = smooth;
    simd::kernels().blend(blended.data(), observed.data(), momentum, blended.size());
    if (normalize(blended)) smooth = std::move(blended);
}

OnlineTracker::OnlineTracker(TrackerConfig config) : config_(config) { config_.validate(); }

void OnlineTracker::match_track(Track& t, const Detection& d) {
    if (config_.use_kalman) t.kf = kf_update(t.kf, d.box, kalman_);
    if (d.has_embedding()) ema_update(t.smooth_emb, d.embedding, config_.ema_momentum);
    t.last_box = d.box;
    t.score = d.score;
    t.status = TrackStatus::Active;
    t.frames_since_update = 0;
}

std::vector<TrackOutput> OnlineTracker::step(int frame, std::span<const Detection> dets) {
    if (started_ && frame <= last_frame_) {
        throw ValidationError("frame " + std::to_string(frame) + " does not follow frame " +
                              std::to_string(last_frame_));
    }
    started_ = true;
    last_frame_ = frame;

    if (config_.use_kalman) {
        for (Track& t : tracks_) t.kf = kf_predict(t.kf, kalman_);
    }

    std::vector<char> track_matched(tracks_.size(), 0);
    std::vector<int> remaining_dets(dets.size());
    for (std::size_t j = 0; j < dets.size(); ++j) remaining_dets[j] = static_cast<int>(j);

    // Stage 1: appearance, over active and lost tracks, gated by motion.
    if (config_.use_reid && !dets.empty()) {
        std::vector<int> rows;
        std::vector<const Track*> cand;
        for (std::size_t i = 0; i < tracks_.size(); ++i) {
            if (!tracks_[i].smooth_emb.empty()) {
                rows.push_back(static_cast<int>(i));
                cand.push_back(&tracks_[i]);
            }
        }
        std::vector<Detection> with_emb;
        std::vector<int> cols;
        for (int j : remaining_dets) {
            if (dets[static_cast<std::size_t>(j)].has_embedding()) {
                cols.push_back(j);
                with_emb.push_back(dets[static_cast<std::size_t>(j)]);
            }
        }
        if (cols.size() != dets.size()) throw ValidationError("appearance matching needs an embedding on every detection");

        CostMatrix cost = cosine_distance_matrix(cand, with_emb);
        if (config_.use_kalman && !cost.empty()) {
            std::vector<BBox> boxes;
            boxes.reserve(with_emb.size());
            for (const auto& d : with_emb) boxes.push_back(d.box);
            for (int i = 0; i < cost.rows(); ++i) {
                const auto gate = gating_distance(cand[static_cast<std::size_t>(i)]->kf, boxes, kalman_);
                for (int j = 0; j < cost.cols(); ++j) {
                    if (gate[static_cast<std::size_t>(j)] > config_.gate_chi2) cost(i, j) = kInfiniteCost;
                }
            }
        }
        const Assignment a = hungarian(cost, config_.emb_match_threshold);
        std::vector<char> det_taken(dets.size(), 0);
        for (auto [r, c] : a.matches) {
            const auto ti = static_cast<std::size_t>(rows[static_cast<std::size_t>(r)]);
            const auto dj = static_cast<std::size_t>(cols[static_cast<std::size_t>(c)]);
            match_track(tracks_[ti], dets[dj]);
            track_matched[ti] = 1;
            det_taken[dj] = 1;
        }
        std::erase_if(remaining_dets, [&](int j) { return det_taken[static_cast<std::size_t>(j)] != 0; });
    }

    // Stage 2: box overlap. Lost tracks join only when there is no appearance stage.
    if (config_.use_iou && !remaining_dets.empty()) {
        std::vector<int> rows;
        for (std::size_t i = 0; i < tracks_.size(); ++i) {
            if (track_matched[i]) continue;
            if (tracks_[i].status == TrackStatus::Active || !config_.use_reid) rows.push_back(static_cast<int>(i));
        }
        CostMatrix cost(static_cast<int>(rows.size()), static_cast<int>(remaining_dets.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const BBox pred = tracks_[static_cast<std::size_t>(rows[r])].predicted_box(config_.use_kalman);
            for (std::size_t c = 0; c < remaining_dets.size(); ++c) {
                cost(static_cast<int>(r), static_cast<int>(c)) =
                    1.0 - iou(pred, dets[static_cast<std::size_t>(remaining_dets[c])].box);
            }
        }
        const Assignment a = hungarian(cost, config_.iou_match_threshold);
        std::vector<char> det_taken(dets.size(), 0);
        for (auto [r, c] : a.matches) {
            const auto ti = static_cast<std::size_t>(rows[static_cast<std::size_t>(r)]);
            const auto dj = static_cast<std::size_t>(remaining_dets[static_cast<std::size_t>(c)]);
            match_track(tracks_[ti], dets[dj]);
            track_matched[ti] = 1;
            det_taken[dj] = 1;
        }
        std::erase_if(remaining_dets, [&](int j) { return det_taken[static_cast<std::size_t>(j)] != 0; });
    }

    // Lifecycle of unmatched tracks.
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
        if (track_matched[i]) continue;
        Track& t = tracks_[i];
        ++t.frames_since_update;
        t.status = t.frames_since_update > config_.track_buffer ? TrackStatus::Removed : TrackStatus::Lost;
    }
    const auto before = tracks_.size();
    std::erase_if(tracks_, [](const Track& t) { return t.status == TrackStatus::Removed; });
    removed_count_ += static_cast<int>(before - tracks_.size());

    // Births.
    for (int j : remaining_dets) {
        const Detection& d = dets[static_cast<std::size_t>(j)];
        if (!(d.score > config_.det_threshold) || !(d.box.height() > 0.0) || !(d.box.width() > 0.0)) continue;
        Track t;
        t.track_id = next_id_++;
        t.kf = kf_init(d.box, kalman_);
        if (d.has_embedding()) t.smooth_emb = d.embedding;
        t.last_box = d.box;
        t.score = d.score;
        t.start_frame = frame;
        tracks_.push_back(std::move(t));
    }

    std::vector<TrackOutput> out;
    for (const Track& t : tracks_) {
        if (t.status == TrackStatus::Active) out.push_back({t.track_id, t.last_box, t.score});
    }
    std::sort(out.begin(), out.end(), [](const TrackOutput& a, const TrackOutput& b) { return a.track_id < b.track_id; });
    return out;
}

}  // namespace fairtrack
