#include <gtest/gtest.h>

#include "fairtrack/config.hpp"
#include "fairtrack/errors.hpp"

using namespace fairtrack;

namespace {

std::string error_of(const char* text) {
    try {
        parse_config(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, EmptyGivesDefaults) {
    const ToolkitConfig c = parse_config("");
    EXPECT_EQ(c.tracker.det_threshold, TrackerConfig{}.det_threshold);
    EXPECT_EQ(c.tracker.track_buffer, 30);
    EXPECT_EQ(c.sim.frames, 100);
    EXPECT_TRUE(c.tracker.use_kalman);
}

TEST(Config, ParsesValues) {
    const ToolkitConfig c = parse_config(
        "# tracker\n"
        "ema_momentum = 0.9\n"
        "track_buffer=12   # shorter\n"
        "use_reid = false\n"
        "seed = 18446744073709551615\n"
        "crossing = true\n"
        "occlusion = 2:10-20\n"
        "occlusion = 0:1-1\n");
    EXPECT_EQ(c.tracker.ema_momentum, 0.9);
    EXPECT_EQ(c.tracker.track_buffer, 12);
    EXPECT_FALSE(c.tracker.use_reid);
    EXPECT_EQ(c.sim.seed, 18446744073709551615ULL);
    EXPECT_TRUE(c.sim.crossing);
    ASSERT_EQ(c.sim.occlusions.size(), 2u);
    EXPECT_EQ(c.sim.occlusions[0], (Occlusion{2, 10, 20}));
}

TEST(Config, ErrorsNameTheKey) {
    EXPECT_NE(error_of("track_buffer = fast\n").find("track_buffer"), std::string::npos);
    EXPECT_NE(error_of("\n\nbogus = 1\n").find("bogus"), std::string::npos);
    EXPECT_NE(error_of("\n\nbogus = 1\n").find("3"), std::string::npos);
    EXPECT_NE(error_of("use_iou = maybe\n").find("use_iou"), std::string::npos);
    EXPECT_NE(error_of("frames\n").find("1"), std::string::npos);
    EXPECT_NE(error_of("occlusion = 1-2\n").find("occlusion"), std::string::npos);
}

TEST(Config, OverlaysBase) {
    ToolkitConfig base;
    base.tracker.track_buffer = 5;
    const ToolkitConfig c = parse_config("det_threshold = 0.5\n", base);
    EXPECT_EQ(c.tracker.track_buffer, 5);
    EXPECT_EQ(c.tracker.det_threshold, 0.5);
}

TEST(Config, DumpParsesBackToSameValues) {
    ToolkitConfig c;
    c.tracker.emb_match_threshold = 0.123456789;
    c.sim.box_noise_std = 1.0 / 3.0;
    c.sim.occlusions.push_back({1, 2, 3});
    const ToolkitConfig back = parse_config(dump_config(c));
    EXPECT_EQ(dump_config(back), dump_config(c));
    EXPECT_EQ(back.tracker.emb_match_threshold, 0.123456789);
    EXPECT_EQ(back.sim.box_noise_std, 1.0 / 3.0);
}
