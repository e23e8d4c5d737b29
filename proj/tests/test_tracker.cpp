#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "fairtrack/errors.hpp"
#include "fairtrack/metrics.hpp"
#include "fairtrack/sim.hpp"
#include "fairtrack/tracker.hpp"
#include "gen.hpp"

using namespace fairtrack;

namespace {

Detection det(BBox box, std::vector<double> emb = {}, double score = 0.9) {
    Detection d;
    d.box = box;
    d.score = score;
    d.embedding = std::move(emb);
    return d;
}

FrameBoxes run(const SimSequence& seq, const TrackerConfig& cfg) {
    OnlineTracker tracker(cfg);
    FrameBoxes out;
    for (const auto& [frame, dets] : seq.detections) {
        for (const auto& t : tracker.step(frame, dets)) out[frame].push_back({t.track_id, t.box, t.score});
    }
    return out;
}

Track with_emb(std::vector<double> e) {
    Track t;
    t.smooth_emb = std::move(e);
    return t;
}

}  // namespace

TEST(CosineDistance, Examples) {
    const Track a = with_emb({1, 0});
    const Track* tracks[] = {&a};
    const Detection dets[] = {det({}, {1, 0}), det({}, {0, 1}), det({}, {-1, 0})};
    const CostMatrix c = cosine_distance_matrix(tracks, dets);
    EXPECT_EQ(c(0, 0), 0.0);
    EXPECT_EQ(c(0, 1), 1.0);
    EXPECT_EQ(c(0, 2), 2.0);
}

TEST(EmaUpdate, MomentumEdgesAndUnitNorm) {
    const std::vector<double> obs{0, 1, 0};
    std::vector<double> s{1, 0, 0};
    ema_update(s, obs, 1.0);
    EXPECT_EQ(s, (std::vector<double>{1, 0, 0}));
    ema_update(s, obs, 0.0);
    EXPECT_EQ(s, obs);

    gen::Source src(1);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> a(8), b(8);
        for (auto& v : a) v = src.gauss(1);
        for (auto& v : b) v = src.gauss(1);
        normalize(a);
        normalize(b);
        ema_update(a, b, src.real(0, 1));
        double n = 0;
        for (double v : a) n += v * v;
        ASSERT_NEAR(std::sqrt(n), 1.0, 1e-6);
    }
}

TEST(TrackerConfig, Validation) {
    TrackerConfig c;
    c.use_reid = c.use_iou = false;
    EXPECT_THROW(c.validate(), ValidationError);
    c = {};
    c.ema_momentum = 1.5;
    EXPECT_THROW(OnlineTracker{c}, ValidationError);
    c = {};
    c.track_buffer = -1;
    EXPECT_THROW(c.validate(), ValidationError);
}

TEST(OnlineTracker, FramesMustIncrease) {
    OnlineTracker t;
    t.step(3, {});
    EXPECT_THROW(t.step(3, {}), ValidationError);
    EXPECT_NO_THROW(t.step(5, {}));
}

TEST(OnlineTracker, BirthNeedsScoreAboveThreshold) {
    TrackerConfig cfg;
    cfg.use_reid = false;
    OnlineTracker t(cfg);
    const Detection dets[] = {det({0, 0, 10, 20}, {}, 0.4), det({50, 0, 60, 20}, {}, 0.41)};
    const auto out = t.step(1, dets);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].box, (BBox{50, 0, 60, 20}));
}

TEST(OnlineTracker, EmptyFramesRemoveEverythingAfterBuffer) {
    TrackerConfig cfg;
    cfg.use_reid = false;
    cfg.track_buffer = 5;
    OnlineTracker t(cfg);
    const Detection dets[] = {det({0, 0, 10, 20}), det({50, 0, 60, 20})};
    t.step(1, dets);
    for (int f = 2; f <= 6; ++f) {
        EXPECT_TRUE(t.step(f, {}).empty());
        EXPECT_EQ(t.tracks().size(), 2u);
        for (const auto& tr : t.tracks()) EXPECT_EQ(tr.status, TrackStatus::Lost);
    }
    t.step(7, {});
    EXPECT_TRUE(t.tracks().empty());
    EXPECT_EQ(t.removed_count(), 2);
}

TEST(OnlineTracker, LostTrackIsRecoveredByAppearance) {
    OnlineTracker t;
    const std::vector<double> ea{1, 0, 0}, eb{0, 1, 0};
    for (int f = 1; f <= 3; ++f) {
        const Detection dets[] = {det({100.0 + f, 100, 140.0 + f, 200}, ea), det({400, 100, 440, 200}, eb)};
        t.step(f, dets);
    }
    // Target a is missed for five frames, then reappears.
    for (int f = 4; f <= 8; ++f) {
        const Detection dets[] = {det({400, 100, 440, 200}, eb)};
        const auto out = t.step(f, dets);
        ASSERT_EQ(out.size(), 1u);
        EXPECT_EQ(out[0].track_id, 2);
    }
    const Detection back[] = {det({108, 100, 148, 200}, ea), det({400, 100, 440, 200}, eb)};
    const auto out = t.step(9, back);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].track_id, 1);
    EXPECT_EQ(out[0].box, back[0].box);
}

TEST(OnlineTracker, GatingBlocksFarAppearanceMatch) {
    OnlineTracker t;
    const std::vector<double> e{1, 0};
    t.step(1, std::vector<Detection>{det({100, 100, 140, 200}, e)});
    t.step(2, std::vector<Detection>{det({101, 100, 141, 200}, e)});
    // Same appearance, implausible jump: the motion gate forbids the match.
    const auto out = t.step(3, std::vector<Detection>{det({800, 400, 840, 500}, e)});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].track_id, 2);
}

TEST(OnlineTracker, PerfectSequenceKeepsIdentities) {
    SimConfig sc;
    sc.seed = 7;
    const SimSequence seq = generate(sc);
    const FrameBoxes pred = run(seq, {});
    // Each GT id maps to exactly one track id, and vice versa.
    std::map<int, std::set<int>> gt_to_track;
    for (const auto& [frame, gts] : seq.gt) {
        const auto& ps = pred.at(frame);
        ASSERT_EQ(ps.size(), gts.size());
        for (const auto& g : gts) {
            for (const auto& p : ps) {
                if (p.box == g.box) gt_to_track[g.id].insert(p.id);
            }
        }
    }
    ASSERT_EQ(gt_to_track.size(), 10u);
    std::set<int> all;
    for (const auto& [id, tracks] : gt_to_track) {
        EXPECT_EQ(tracks.size(), 1u) << "gt " << id;
        all.insert(*tracks.begin());
    }
    EXPECT_EQ(all.size(), 10u);
    EXPECT_EQ(clear_mot(seq.gt, pred).id_switches, 0);
}

TEST(OnlineTracker, IdsUniqueNeverReusedAndDeterministicProperty) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        SimConfig sc;
        sc.seed = seed;
        sc.frames = 60;
        sc.box_noise_std = 3;
        sc.emb_noise_std = 0.3;
        sc.det_dropout_prob = 0.1;
        sc.fp_rate = 1.0;
        sc.crossing = seed % 2 == 0;
        const SimSequence seq = generate(sc);
        TrackerConfig tc;
        tc.track_buffer = 3;
        const FrameBoxes a = run(seq, tc);
        const FrameBoxes b = run(seq, tc);
        ASSERT_EQ(a.size(), b.size());
        std::map<int, int> last_seen;
        for (const auto& [frame, boxes] : a) {
            std::set<int> ids;
            for (const auto& p : boxes) {
                ASSERT_TRUE(ids.insert(p.id).second);
                // A track id that went silent for longer than the buffer never returns.
                if (last_seen.count(p.id)) ASSERT_LE(frame - last_seen[p.id], tc.track_buffer + 1);
                last_seen[p.id] = frame;
            }
            const auto& other = b.at(frame);
            ASSERT_EQ(boxes.size(), other.size());
            for (std::size_t i = 0; i < boxes.size(); ++i) {
                ASSERT_EQ(boxes[i].id, other[i].id);
                ASSERT_EQ(boxes[i].box, other[i].box);
            }
        }
    }
}

TEST(OnlineTracker, IouOnlyDegradesOnCrossings) {
    long iou_only = 0, full = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SimConfig sc;
        sc.seed = seed;
        sc.crossing = true;
        sc.box_noise_std = 2;
        sc.emb_noise_std = 0.2;
        const SimSequence seq = generate(sc);
        TrackerConfig sort_like;
        sort_like.use_reid = false;
        sort_like.use_kalman = false;
        iou_only += clear_mot(seq.gt, run(seq, sort_like)).id_switches;
        full += clear_mot(seq.gt, run(seq, {})).id_switches;
    }
    EXPECT_GT(iou_only, 0);
    EXPECT_GE(iou_only, full);
}

TEST(OnlineTracker, MissingEmbeddingsRejectedWhenReidOn) {
    OnlineTracker t;
    EXPECT_THROW(t.step(1, std::vector<Detection>{det({0, 0, 10, 20})}), ValidationError);
}
