#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "fairtrack/errors.hpp"
#include "fairtrack/metrics.hpp"
#include "fairtrack/mot_io.hpp"
#include "gen.hpp"

using namespace fairtrack;

namespace {

FrameBoxes fixture(const std::string& name, MotKind kind) {
    return to_frame_boxes(read_mot(std::string(FAIRTRACK_TEST_DATA) + "/" + name, kind));
}

FrameBoxes random_sequence(gen::Source& s, int frames, int ids) {
    FrameBoxes seq;
    for (int f = 1; f <= frames; ++f) {
        for (int id = 1; id <= ids; ++id) {
            if (s.coin(0.8)) seq[f].push_back({id, {id * 100.0, f * 2.0, id * 100.0 + 30, f * 2.0 + 60}, 1.0});
        }
    }
    return seq;
}

}  // namespace

TEST(ClearMot, IdenticalSequencesArePerfect) {
    const FrameBoxes gt = fixture("mota_gt.txt", MotKind::Gt);
    const MetricsReport r = clear_mot(gt, gt);
    EXPECT_EQ(r.mota, 1.0);
    EXPECT_EQ(r.fp, 0);
    EXPECT_EQ(r.fn, 0);
    EXPECT_EQ(r.id_switches, 0);
    EXPECT_EQ(r.motp, 1.0);
    EXPECT_EQ(r.mostly_tracked, 2);
}

TEST(ClearMot, HandCountedFixture) {
    // Ten GT boxes; one FP (frame 5), two FN (id 2, frames 4-5), one switch (id 1 at frame 3).
    const MetricsReport r = clear_mot(fixture("mota_gt.txt", MotKind::Gt), fixture("mota_pred.txt", MotKind::Result));
    EXPECT_EQ(r.total_gt, 10);
    EXPECT_EQ(r.fp, 1);
    EXPECT_EQ(r.fn, 2);
    EXPECT_EQ(r.id_switches, 1);
    EXPECT_EQ(r.mota, 1.0 - 4.0 / 10.0);
    EXPECT_EQ(r.gt_tracks, 2);
    EXPECT_EQ(r.mostly_tracked, 1);  // id 2 is covered 3/5 = 0.6
    EXPECT_EQ(r.mostly_lost, 0);
}

TEST(ClearMot, SingleFlipCountsOneSwitch) {
    const MetricsReport r = clear_mot(fixture("flip_gt.txt", MotKind::Gt), fixture("flip_pred.txt", MotKind::Result));
    EXPECT_EQ(r.id_switches, 1);
    EXPECT_EQ(r.fp, 0);
    EXPECT_EQ(r.fn, 0);
    EXPECT_EQ(r.mota, 0.75);
}

TEST(ClearMot, SwitchCountedAgainstLastMatchAcrossGaps) {
    FrameBoxes gt, pred;
    const BBox b{0, 0, 10, 10};
    for (int f = 1; f <= 4; ++f) gt[f].push_back({1, b, 1});
    pred[1].push_back({7, b, 1});
    pred[4].push_back({8, b, 1});
    const MetricsReport r = clear_mot(gt, pred);
    EXPECT_EQ(r.fn, 2);
    EXPECT_EQ(r.id_switches, 1);
}

TEST(ClearMot, PersistenceBeatsBetterOverlap) {
    FrameBoxes gt, pred;
    gt[1].push_back({1, {0, 0, 10, 10}, 1});
    pred[1].push_back({5, {0, 0, 10, 10}, 1});
    gt[2].push_back({1, {0, 0, 10, 10}, 1});
    pred[2].push_back({5, {1, 0, 11, 10}, 1});
    pred[2].push_back({6, {0, 0, 10, 10}, 1});
    const MetricsReport r = clear_mot(gt, pred);
    EXPECT_EQ(r.id_switches, 0);
    EXPECT_EQ(r.fp, 1);
}

TEST(ClearMot, DuplicateIdsRejected) {
    FrameBoxes gt;
    gt[1] = {{1, {0, 0, 1, 1}, 1}, {1, {5, 5, 6, 6}, 1}};
    EXPECT_THROW(clear_mot(gt, {}), ValidationError);
}

TEST(Idf1, Examples) {
    const FrameBoxes gt = fixture("midflip_gt.txt", MotKind::Gt);
    EXPECT_EQ(idf1(gt, gt).idf1, 1.0);

    const MetricsReport flip = idf1(gt, fixture("midflip_pred.txt", MotKind::Result));
    EXPECT_EQ(flip.idtp, 5);
    EXPECT_EQ(flip.idfp, 5);
    EXPECT_EQ(flip.idfn, 5);
    EXPECT_EQ(flip.idf1, 0.5);

    const MetricsReport partial = idf1(fixture("partial_gt.txt", MotKind::Gt), fixture("partial_pred.txt", MotKind::Result));
    EXPECT_EQ(partial.idtp, 8);
    EXPECT_EQ(partial.idfp, 2);
    EXPECT_EQ(partial.idfn, 2);
    EXPECT_DOUBLE_EQ(partial.idf1, 0.8);
    EXPECT_DOUBLE_EQ(partial.idp, 0.8);
    EXPECT_DOUBLE_EQ(partial.idr, 0.8);
}

TEST(Idf1, AgreesWithClearOnPerfectIffEqualProperty) {
    gen::Source s(3);
    for (int trial = 0; trial < 100; ++trial) {
        const FrameBoxes gt = random_sequence(s, 8, 4);
        FrameBoxes pred = gt;
        const bool perturb = s.coin();
        if (perturb && !pred.empty()) {
            auto& boxes = pred.begin()->second;
            if (!boxes.empty()) boxes.front().box.x1 += 100;  // breaks the overlap
        }
        const bool changed = pred != gt;
        const MetricsReport c = clear_mot(gt, pred);
        const MetricsReport i = idf1(gt, pred);
        ASSERT_EQ(c.mota == 1.0, !changed);
        ASSERT_EQ(i.idf1 == 1.0, !changed);
    }
}

TEST(DetectionAp, Examples) {
    FrameBoxes gt;
    gt[1].push_back({1, {0, 0, 10, 10}, 1});
    EXPECT_EQ(detection_ap(gt, gt), 1.0);
    EXPECT_EQ(detection_ap(gt, {}), 0.0);

    FrameBoxes pred;
    pred[1].push_back({1, {0, 0, 10, 10}, 0.9});
    pred[1].push_back({2, {50, 50, 60, 60}, 0.3});
    EXPECT_EQ(detection_ap(gt, pred), 1.0);

    // Wrong box ranked first: precision 1/2 at full recall.
    pred[1][1].score = 0.95;
    EXPECT_DOUBLE_EQ(detection_ap(gt, pred), 0.5);
}

TEST(TprAtFar, Examples) {
    const std::vector<double> sep_gen{0.9, 0.95, 0.99};
    const std::vector<double> sep_imp{0.1, 0.2, 0.3, 0.05};
    for (double far : {0.01, 0.1, 0.5, 0.9}) EXPECT_EQ(tpr_at_far(sep_gen, sep_imp, far), 1.0);

    const std::vector<double> genuine{0.9, 0.8, 0.7, 0.2};
    const std::vector<double> impostor{0.6, 0.5, 0.4, 0.75, 0.3, 0.3, 0.2, 0.1, 0.1, 0.0};
    EXPECT_EQ(tpr_at_far(genuine, impostor, 0.1), 0.75);

    EXPECT_THROW(tpr_at_far({}, impostor, 0.1), ValidationError);
    EXPECT_THROW(tpr_at_far(genuine, impostor, 0.0), ValidationError);
}

TEST(TprAtFar, IdenticalDistributionsGiveFar) {
    gen::Source s(5);
    std::vector<double> a(20000), b(20000);
    for (auto& v : a) v = s.real(0, 1);
    for (auto& v : b) v = s.real(0, 1);
    for (double far : {0.01, 0.1, 0.3}) EXPECT_NEAR(tpr_at_far(a, b, far), far, 0.02);
}

TEST(TprAtFar, MonotoneInFarProperty) {
    gen::Source s(6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> g(static_cast<std::size_t>(s.integer(1, 30))), imp(static_cast<std::size_t>(s.integer(1, 60)));
        for (auto& v : g) v = std::round(s.real(-1, 1) * 10) / 10;
        for (auto& v : imp) v = std::round(s.real(-1, 1) * 10) / 10;
        double prev = 0;
        for (double far = 0.01; far < 1.0; far += 0.01) {
            const double t = tpr_at_far(g, imp, far);
            ASSERT_GE(t, prev);
            prev = t;
        }
    }
}

TEST(ReidPairs, GenuineAcrossFramesImpostorWithinFrame) {
    const std::vector<LabelledEmbedding> samples{
        {1, 1, {1, 0}}, {1, 2, {0, 1}}, {2, 1, {1, 0}}, {2, 2, {0.6, 0.8}},
    };
    const ReidPairs p = build_reid_pairs(samples);
    std::vector<double> g = p.genuine, i = p.impostor;
    std::sort(g.begin(), g.end());
    std::sort(i.begin(), i.end());
    EXPECT_EQ(g, (std::vector<double>{0.8, 1.0}));
    EXPECT_EQ(i, (std::vector<double>{0.0, 0.6}));
}
