#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fairtrack/tensor.hpp"

namespace fairtrack {

/// One box of a tracking sequence (ground truth or hypothesis).
struct IdBox {
    int id = 0;
    BBox box;
    double score = 1.0;
    friend bool operator==(const IdBox&, const IdBox&) = default;
};

/// frame -> boxes present in that frame.
using FrameBoxes = std::map<int, std::vector<IdBox>>;

struct MetricsReport {
    double mota = 0.0;
    double motp = 0.0;  ///< mean IoU of matched pairs
    double idf1 = 0.0;
    double idp = 0.0;
    double idr = 0.0;
    long idtp = 0;
    long idfp = 0;
    long idfn = 0;
    long id_switches = 0;
    long fp = 0;
    long fn = 0;
    long matches = 0;
    long total_gt = 0;
    int gt_tracks = 0;
    int mostly_tracked = 0;
    int mostly_lost = 0;
    double mt_ratio = 0.0;
    double ml_ratio = 0.0;
    std::optional<double> ap;
    std::optional<double> tpr_at_far;
};

inline constexpr double kMostlyTracked = 0.8;
inline constexpr double kMostlyLost = 0.2;

/// CLEAR MOT counts with correspondence persistence. Fills mota, motp, fp,
/// fn, id_switches, matches, total_gt and the MT/ML fields. Throws
/// ValidationError on a duplicate id within a frame.
MetricsReport clear_mot(const FrameBoxes& gt, const FrameBoxes& pred, double iou_thresh = 0.5);

/// Identity F1 under the global trajectory matching that maximises IDTP.
/// Fills idf1, idp, idr, idtp, idfp and idfn.
MetricsReport idf1(const FrameBoxes& gt, const FrameBoxes& pred, double iou_thresh = 0.5);

/// All-point interpolated average precision; predictions ranked by score,
/// each greedily claiming its highest-IoU ground truth in the same frame.
double detection_ap(const FrameBoxes& gt, const FrameBoxes& pred, double iou_thresh = 0.5);

/// Verification rate at a fixed false accept rate. The accept threshold is
/// the lowest one admitting at most floor(far * |impostor|) impostor scores,
/// i.e. just above the next-highest impostor; the result is the fraction of
/// genuine scores that clear it.
double tpr_at_far(std::span<const double> genuine, std::span<const double> impostor, double far);

/// Similarity pairs for re-ID evaluation: genuine pairs share an identity
/// across different frames, impostor pairs are different identities in the
/// same frame.
struct LabelledEmbedding {
    int frame = 0;
    int identity = 0;
    std::vector<double> embedding;  ///< unit norm
};

struct ReidPairs {
    std::vector<double> genuine;
    std::vector<double> impostor;
};

ReidPairs build_reid_pairs(std::span<const LabelledEmbedding> samples);

}  // namespace fairtrack
