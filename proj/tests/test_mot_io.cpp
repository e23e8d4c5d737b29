#include <gtest/gtest.h>

#include "fairtrack/errors.hpp"
#include "fairtrack/mot_io.hpp"
#include "gen.hpp"

using namespace fairtrack;

TEST(ParseMot, ResultLineMapsToBox) {
    const MotFile f = parse_mot("1,1,100,40,40,80,1,-1,-1,-1\n", MotKind::Result);
    ASSERT_EQ(f.size(), 1u);
    const MotRecord& r = f.at(1).at(0);
    EXPECT_EQ(r.frame, 1);
    EXPECT_EQ(r.id, 1);
    EXPECT_EQ(r.box(), (BBox{100, 40, 140, 120}));
    EXPECT_EQ(r.conf, 1.0);
}

TEST(ParseMot, EmptyInputs) {
    EXPECT_TRUE(parse_mot("", MotKind::Gt).empty());
    EXPECT_TRUE(parse_mot("\n\n  \n", MotKind::Det).empty());
}

TEST(ParseMot, GroundTruthFiltersIgnoredAndNonPedestrianRows) {
    const char* text =
        "1,1,0,0,10,20,1,1,0.9\n"
        "1,2,0,0,10,20,0,1,0.9\n"
        "1,3,0,0,10,20,1,3,0.9\n"
        "2,1,1,0,10,20,1,1,1.0\n";
    const MotFile f = parse_mot(text, MotKind::Gt);
    EXPECT_EQ(f.at(1).size(), 1u);
    EXPECT_EQ(f.at(1)[0].visibility, 0.9);
    EXPECT_EQ(f.at(1)[0].object_class, 1);
    EXPECT_EQ(parse_mot(text, MotKind::Gt, true).at(1).size(), 3u);
}

TEST(ParseMot, CrlfAndSpacesTolerated) {
    const MotFile f = parse_mot("3, 7, 1.5, 2.5, 10, 20, 0.8, -1, -1, -1\r\n", MotKind::Result);
    EXPECT_EQ(f.at(3)[0].id, 7);
    EXPECT_EQ(f.at(3)[0].bb_left, 1.5);
}

TEST(ParseMot, ErrorsCarryLineNumbers) {
    auto line_of = [](const char* text) -> std::uint64_t {
        try {
            parse_mot(text, MotKind::Result);
        } catch (const FormatError& e) {
            return e.position();
        }
        return 0;
    };
    EXPECT_EQ(line_of("1,1,0,0,1,1,1,-1,-1,-1\n1,2,3\n"), 2u);
    EXPECT_EQ(line_of("1,1,x,0,1,1,1,-1,-1,-1\n"), 1u);
    EXPECT_EQ(line_of("0,1,0,0,1,1,1,-1,-1,-1\n"), 1u);
    EXPECT_EQ(line_of("1,1,0,0,-1,1,1,-1,-1,-1\n"), 1u);
    EXPECT_EQ(line_of("1.5,1,0,0,1,1,1,-1,-1,-1\n"), 1u);
}

TEST(FormatResult, TwoDecimalsWithoutNegativeZero) {
    MotRecord r;
    r.frame = 4;
    r.id = 2;
    r.bb_left = -0.001;
    r.bb_top = 1.005;
    r.bb_width = 10;
    r.bb_height = 20.126;
    r.conf = 0.5;
    EXPECT_EQ(format_result_line(r), "4,2,0.00,1.00,10.00,20.13,0.50,-1,-1,-1");
    EXPECT_EQ(format_fixed2(-0.004), "0.00");
    EXPECT_EQ(format_fixed2(-1.25), "-1.25");
}

TEST(Serialize, RoundTripKeepsTwoDecimalsProperty) {
    gen::Source s(1);
    for (int trial = 0; trial < 50; ++trial) {
        MotFile f;
        for (int frame = 1; frame <= 5; ++frame) {
            for (int id = 1; id <= s.integer(0, 4); ++id) {
                MotRecord r;
                r.frame = frame;
                r.id = id;
                r.bb_left = s.real(-10, 500);
                r.bb_top = s.real(-10, 500);
                r.bb_width = s.real(0, 80);
                r.bb_height = s.real(0, 160);
                r.conf = s.real(0, 1);
                f[frame].push_back(r);
            }
        }
        const std::string text = serialize_results(f);
        const MotFile back = parse_mot(text, MotKind::Result);
        for (const auto& [frame, rows] : f) {
            if (rows.empty()) continue;
            const auto& b = back.at(frame);
            ASSERT_EQ(b.size(), rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                ASSERT_NEAR(b[i].bb_left, rows[i].bb_left, 0.005 + 1e-9);
                ASSERT_NEAR(b[i].bb_height, rows[i].bb_height, 0.005 + 1e-9);
                ASSERT_NEAR(b[i].conf, rows[i].conf, 0.005 + 1e-9);
            }
        }
        // Second trip is exact.
        ASSERT_EQ(serialize_results(back), text);
    }
}

TEST(Serialize, GroundTruthRoundTrip) {
    FrameBoxes boxes;
    boxes[1].push_back({1, {10, 20, 50, 100}, 1});
    boxes[2].push_back({3, {11.25, 20, 51.25, 100}, 1});
    const std::string text = serialize_gt(from_frame_boxes(boxes));
    EXPECT_EQ(to_frame_boxes(parse_mot(text, MotKind::Gt)), boxes);
}

TEST(BoxConversion, TlwhTlbrInvolutionProperty) {
    gen::Source s(2);
    for (int i = 0; i < 1000; ++i) {
        const double l = s.integer(-500, 500) / 4.0, t = s.integer(-500, 500) / 4.0;
        const double w = s.integer(0, 400) / 4.0, h = s.integer(0, 400) / 4.0;
        const BBox b = BBox::from_tlwh(l, t, w, h);
        ASSERT_EQ(b.x1, l);
        ASSERT_EQ(b.y1, t);
        ASSERT_EQ(b.width(), w);
        ASSERT_EQ(b.height(), h);
    }
}
