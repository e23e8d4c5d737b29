#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fairtrack/metrics.hpp"
#include "fairtrack/tensor.hpp"

namespace fairtrack {

enum class MotKind { Gt, Det, Result };

/// One line of a MOTChallenge text file.
struct MotRecord {
    int frame = 1;
    int id = -1;
    double bb_left = 0.0;
    double bb_top = 0.0;
    double bb_width = 0.0;
    double bb_height = 0.0;
    double conf = 1.0;
    double x = -1.0;
    double y = -1.0;
    double z = -1.0;
    int object_class = -1;     ///< ground truth only; -1 when absent
    double visibility = -1.0;  ///< ground truth only; -1 when absent

    BBox box() const noexcept { return BBox::from_tlwh(bb_left, bb_top, bb_width, bb_height); }
};

/// frame -> records in input order.
using MotFile = std::map<int, std::vector<MotRecord>>;

/// Ground-truth class id kept by default.
inline constexpr int kPedestrianClass = 1;

/// Parses comma-separated 9- or 10-field lines. For ground truth in the
/// 9-field layout, columns 7-9 are (consider flag, class, visibility), and
/// rows with flag 0 or a non-pedestrian class are dropped unless
/// keep_all_classes is set. Throws FormatError carrying the 1-based line.
MotFile parse_mot(std::string_view text, MotKind kind, bool keep_all_classes = false);
MotFile read_mot(const std::filesystem::path& path, MotKind kind, bool keep_all_classes = false);

/// `frame,id,bb_left,bb_top,bb_width,bb_height,conf,-1,-1,-1`, boxes and
/// conf with two decimals.
std::string format_result_line(const MotRecord& r);
std::string serialize_results(const MotFile& file);

/// `frame,id,bb_left,bb_top,bb_width,bb_height,1,class,visibility`.
std::string serialize_gt(const MotFile& file);

/// Fixed two-decimal formatting that never prints "-0.00".
std::string format_fixed2(double v);

FrameBoxes to_frame_boxes(const MotFile& file);
MotFile from_frame_boxes(const FrameBoxes& boxes);

}  // namespace fairtrack
