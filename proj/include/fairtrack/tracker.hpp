#pragma once

#include <span>
#include <vector>

#include "fairtrack/assignment.hpp"
#include "fairtrack/decode.hpp"
#include "fairtrack/kalman.hpp"

namespace fairtrack {

enum class TrackStatus { Active, Lost, Removed };

struct Track {
    int track_id = 0;
    KalmanState kf;
    std::vector<double> smooth_emb;  ///< unit norm, or empty if no detection carried an embedding yet
    TrackStatus status = TrackStatus::Active;
    BBox last_box;                   ///< box of the last matched detection
    double score = 0.0;              ///< score of the last matched detection
    int frames_since_update = 0;
    int start_frame = 0;

    /// Box used for association: the Kalman prediction when motion is
    /// modelled, otherwise the last observed box.
    BBox predicted_box(bool use_kalman) const { return use_kalman ? kf.box() : last_box; }
};

struct TrackerConfig {
    double det_threshold = 0.4;        ///< minimum score to start a track
    double emb_match_threshold = 0.4;  ///< max cosine distance in the appearance stage
    double iou_match_threshold = 0.5;  ///< max 1 - IoU in the overlap stage
    int track_buffer = 30;             ///< frames a lost track survives
    double ema_momentum = 0.9;
    double gate_chi2 = kChi2Gate95Dof4;
    bool use_reid = true;
    bool use_iou = true;
    bool use_kalman = true;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

/// Per-frame tracker output.
struct TrackOutput {
    int track_id = 0;
    BBox box;
    double score = 0.0;
};

/// d(i, j) = 1 - <track_i.smooth_emb, det_j.embedding>. Throws
/// ValidationError if either side lacks an embedding.
CostMatrix cosine_distance_matrix(std::span<const Track* const> tracks, std::span<const Detection> dets);

/// Online association engine for one sequence. Not thread-safe; distinct
/// sequences use distinct instances.
class OnlineTracker {
public:
    explicit OnlineTracker(TrackerConfig config = {});

    /// Associates one frame of detections. Frame indices must strictly increase.
    /// Returns the tracks that are active after this frame, ascending by id.
    std::vector<TrackOutput> step(int frame, std::span<const Detection> dets);

    /// Live (non-removed) tracks in creation order.
    const std::vector<Track>& tracks() const noexcept { return tracks_; }
    const TrackerConfig& config() const noexcept { return config_; }
    int removed_count() const noexcept { return removed_count_; }

private:
    void match_track(Track& t, const Detection& d);

    TrackerConfig config_;
    KalmanParams kalman_;
    std::vector<Track> tracks_;
    int next_id_ = 1;
    int last_frame_ = 0;
    bool started_ = false;
    int removed_count_ = 0;
};

/// normalize(m * e + (1 - m) * f); keeps e when the blend vanishes.
void ema_update(std::vector<double>& smooth, std::span<const double> observed, double momentum);

}  // namespace fairtrack
