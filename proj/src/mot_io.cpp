#include "fairtrack/mot_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "fairtrack/errors.hpp"
#include "fairtrack/file_util.hpp"

namespace fairtrack {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view field, std::size_t line, int column) {
    field = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw FormatError("MOT: field " + std::to_string(column) + " is not a number: '" + std::string(field) + "'",
                          line);
    }
    return v;
}

int parse_integral(std::string_view field, std::size_t line, int column) {
    const double v = parse_real(field, line, column);
    if (v != std::floor(v) || std::abs(v) > 2e9) {
        throw FormatError("MOT: field " + std::to_string(column) + " must be an integer", line);
    }
    return static_cast<int>(v);
}

}  // namespace

MotFile parse_mot(std::string_view text, MotKind kind, bool keep_all_classes) {
    MotFile out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 9 && fields.size() != 10) {
            throw FormatError("MOT: expected 9 or 10 fields, got " + std::to_string(fields.size()), line_no);
        }

        MotRecord r;
        r.frame = parse_integral(fields[0], line_no, 1);
        r.id = parse_integral(fields[1], line_no, 2);
        r.bb_left = parse_real(fields[2], line_no, 3);
        r.bb_top = parse_real(fields[3], line_no, 4);
        r.bb_width = parse_real(fields[4], line_no, 5);
        r.bb_height = parse_real(fields[5], line_no, 6);
        r.conf = parse_real(fields[6], line_no, 7);
        if (r.frame < 1) throw FormatError("MOT: frame must be >= 1", line_no);
        if (r.bb_width < 0.0 || r.bb_height < 0.0) throw FormatError("MOT: negative box size", line_no);

        if (kind == MotKind::Gt && fields.size() == 9) {
            r.object_class = parse_integral(fields[7], line_no, 8);
            r.visibility = parse_real(fields[8], line_no, 9);
            if (!keep_all_classes && (r.conf == 0.0 || (r.object_class != kPedestrianClass && r.object_class != -1))) {
                continue;
            }
        } else {
            r.x = parse_real(fields[7], line_no, 8);
            r.y = parse_real(fields[8], line_no, 9);
            if (fields.size() == 10) r.z = parse_real(fields[9], line_no, 10);
        }
        out[r.frame].push_back(r);
    }
    return out;
}

MotFile read_mot(const std::filesystem::path& path, MotKind kind, bool keep_all_classes) {
    return parse_mot(read_file_text(path), kind, keep_all_classes);
}

std::string format_fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string format_result_line(const MotRecord& r) {
    return std::to_string(r.frame) + "," + std::to_string(r.id) + "," + format_fixed2(r.bb_left) + "," +
           format_fixed2(r.bb_top) + "," + format_fixed2(r.bb_width) + "," + format_fixed2(r.bb_height) + "," +
           format_fixed2(r.conf) + ",-1,-1,-1";
}

std::string serialize_results(const MotFile& file) {
    std::string out;
    for (const auto& [frame, records] : file) {
        for (const auto& r : records) {
            out += format_result_line(r);
            out += '\n';
        }
    }
    return out;
}

std::string serialize_gt(const MotFile& file) {
    std::string out;
    for (const auto& [frame, records] : file) {
        for (const auto& r : records) {
            out += std::to_string(r.frame) + "," + std::to_string(r.id) + "," + format_fixed2(r.bb_left) + "," +
                   format_fixed2(r.bb_top) + "," + format_fixed2(r.bb_width) + "," + format_fixed2(r.bb_height) +
                   ",1," + std::to_string(r.object_class < 0 ? kPedestrianClass : r.object_class) + "," +
                   format_fixed2(r.visibility < 0 ? 1.0 : r.visibility) + "\n";
        }
    }
    return out;
}

FrameBoxes to_frame_boxes(const MotFile& file) {
    FrameBoxes out;
    for (const auto& [frame, records] : file) {
        auto& boxes = out[frame];
        for (const auto& r : records) boxes.push_back({r.id, r.box(), r.conf});
    }
    return out;
}

MotFile from_frame_boxes(const FrameBoxes& boxes) {
    MotFile out;
    for (const auto& [frame, list] : boxes) {
        auto& records = out[frame];
        for (const auto& b : list) {
            MotRecord r;
            r.frame = frame;
            r.id = b.id;
            r.bb_left = b.box.x1;
            r.bb_top = b.box.y1;
            r.bb_width = b.box.width();
            r.bb_height = b.box.height();
            r.conf = b.score;
            records.push_back(r);
        }
    }
    return out;
}

}  // namespace fairtrack
