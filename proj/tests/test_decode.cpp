#include <gtest/gtest.h>

#include <cmath>

#include "fairtrack/decode.hpp"
#include "fairtrack/errors.hpp"
#include "fairtrack/target_encoding.hpp"
#include "gen.hpp"

using namespace fairtrack;

namespace {

struct Maps {
    Tensor2D heat;
    Tensor3D off, size;
};

Maps blank(const GridSpec& g) {
    return {Tensor2D(g.feat_h(), g.feat_w()), Tensor3D(2, g.feat_h(), g.feat_w()), Tensor3D(2, g.feat_h(), g.feat_w())};
}

}  // namespace

TEST(PeakNms, Examples) {
    EXPECT_TRUE(peak_nms(Tensor2D(8, 8), 0.4, 10).empty());

    Tensor2D lone(40, 50);
    lone(20, 30) = 1.0;
    const auto peaks = peak_nms(lone, 0.4, 10);
    ASSERT_EQ(peaks.size(), 1u);
    EXPECT_EQ(peaks[0], (Peak{30, 20, 1.0}));

    Tensor2D plateau(5, 5);
    plateau(2, 1) = 0.8;
    plateau(2, 2) = 0.8;
    const auto both = peak_nms(plateau, 0.4, 10);
    ASSERT_EQ(both.size(), 2u);
    EXPECT_EQ(both[0], (Peak{1, 2, 0.8}));
    EXPECT_EQ(both[1], (Peak{2, 2, 0.8}));
}

TEST(PeakNms, ThresholdIsStrictAndTopKCaps) {
    Tensor2D h(3, 9);
    h(1, 0) = 0.4;
    h(1, 3) = 0.5;
    h(1, 6) = 0.9;
    EXPECT_EQ(peak_nms(h, 0.4, 10).size(), 2u);
    const auto top = peak_nms(h, 0.1, 1);
    ASSERT_EQ(top.size(), 1u);
    EXPECT_EQ(top[0].x, 6);
    EXPECT_THROW(peak_nms(h, 0.1, 0), ValidationError);
}

TEST(PeakNms, MatchesBruteForceProperty) {
    gen::Source s(2);
    for (int trial = 0; trial < 300; ++trial) {
        const int hh = s.integer(1, 12), ww = s.integer(1, 12);
        Tensor2D h(hh, ww);
        for (auto& v : h.data()) v = s.coin(0.2) ? 0.7 : std::round(s.real(0, 1) * 10) / 10;
        std::vector<Peak> want;
        for (int y = 0; y < hh; ++y) {
            for (int x = 0; x < ww; ++x) {
                bool is_max = h(y, x) > 0.3;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int yy = y + dy, xx = x + dx;
                        if (yy >= 0 && xx >= 0 && yy < hh && xx < ww && h(yy, xx) > h(y, x)) is_max = false;
                    }
                }
                if (is_max) want.push_back({x, y, h(y, x)});
            }
        }
        std::stable_sort(want.begin(), want.end(), [](const Peak& a, const Peak& b) { return a.score > b.score; });
        const int k = s.integer(1, 20);
        if (want.size() > static_cast<std::size_t>(k)) want.resize(static_cast<std::size_t>(k));
        ASSERT_EQ(peak_nms(h, 0.3, k), want);
    }
}

TEST(Decode, InverseOfQuantizeExample) {
    const GridSpec g;
    Maps m = blank(g);
    m.heat(20, 30) = 1.0;
    m.off(0, 20, 30) = 0.25;
    m.off(1, 20, 30) = 0.25;
    m.size(0, 20, 30) = 40;
    m.size(1, 20, 30) = 80;
    const auto dets = decode(m.heat, m.off, m.size, nullptr, g);
    ASSERT_EQ(dets.size(), 1u);
    EXPECT_EQ(dets[0].box, (BBox{101, 41, 141, 121}));
    EXPECT_EQ(dets[0].score, 1.0);
    EXPECT_FALSE(dets[0].has_embedding());
}

TEST(Decode, SmallBoxAtOrigin) {
    const GridSpec g{64, 64, 4};
    Maps m = blank(g);
    m.heat(1, 1) = 0.9;
    m.size(0, 1, 1) = 8;
    m.size(1, 1, 1) = 8;
    const auto dets = decode(m.heat, m.off, m.size, nullptr, g);
    ASSERT_EQ(dets.size(), 1u);
    EXPECT_EQ(dets[0].box, (BBox{0, 0, 8, 8}));
}

TEST(Decode, BoxesClipToImage) {
    const GridSpec g{64, 64, 4};
    Maps m = blank(g);
    m.heat(0, 0) = 0.9;
    m.size(0, 0, 0) = 20;
    m.size(1, 0, 0) = 20;
    const auto dets = decode(m.heat, m.off, m.size, nullptr, g);
    EXPECT_EQ(dets[0].box, (BBox{0, 0, 10, 10}));
}

TEST(Decode, CenterBiEqualsCenterOnGridPoints) {
    gen::Source s(12);
    const GridSpec g{64, 48, 4};
    Maps m = blank(g);
    m.heat(3, 5) = 0.9;
    m.heat(9, 12) = 0.8;
    const Tensor3D emb = gen::tensor3d(s, 6, g.feat_h(), g.feat_w());
    DecodeParams center, bi;
    bi.sampling = Sampling::CenterBI;
    const auto a = decode(m.heat, m.off, m.size, &emb, g, center);
    const auto b = decode(m.heat, m.off, m.size, &emb, g, bi);
    ASSERT_EQ(a.size(), 2u);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].embedding, b[i].embedding);
}

TEST(Decode, SortedBoundedAndUnitEmbeddingsProperty) {
    gen::Source s(13);
    const GridSpec g{96, 64, 4};
    for (int trial = 0; trial < 100; ++trial) {
        const Tensor2D heat = gen::tensor2d(s, g.feat_h(), g.feat_w(), 0.0, 1.0);
        const Tensor3D off = gen::tensor3d(s, 2, g.feat_h(), g.feat_w(), 0.0, 1.0);
        const Tensor3D size = gen::tensor3d(s, 2, g.feat_h(), g.feat_w(), 1.0, 40.0);
        const Tensor3D emb = gen::tensor3d(s, 8, g.feat_h(), g.feat_w());
        DecodeParams p;
        p.top_k = s.integer(1, 40);
        p.sampling = s.coin() ? Sampling::Center : Sampling::CenterBI;
        const auto dets = decode(heat, off, size, &emb, g, p);
        ASSERT_LE(dets.size(), static_cast<std::size_t>(p.top_k));
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (i > 0) ASSERT_GE(dets[i - 1].score, dets[i].score);
            double n = 0;
            for (double v : dets[i].embedding) n += v * v;
            ASSERT_NEAR(std::sqrt(n), 1.0, 1e-6);
            ASSERT_TRUE(dets[i].box.valid());
        }
    }
}

TEST(Decode, RoundTripThroughEncodeProperty) {
    gen::Source s(14);
    const GridSpec g;
    for (int trial = 0; trial < 200; ++trial) {
        const auto objs = gen::separated_objects(s, g, s.integer(1, 12), 3, 4);
        const TargetMaps t = encode_targets(objs, g, 4);
        ASSERT_EQ(t.collisions, 0);
        DecodeParams p;
        p.threshold = 0.99;
        p.top_k = static_cast<int>(objs.size());
        const auto dets = decode(t.heatmap, t.offsets, t.sizes, nullptr, g, p);
        ASSERT_EQ(dets.size(), objs.size());
        for (const auto& obj : objs) {
            bool found = false;
            for (const auto& d : dets) {
                found |= std::abs(d.box.x1 - obj.box.x1) <= 2 && std::abs(d.box.y1 - obj.box.y1) <= 2 &&
                         std::abs(d.box.x2 - obj.box.x2) <= 2 && std::abs(d.box.y2 - obj.box.y2) <= 2;
            }
            ASSERT_TRUE(found);
        }
    }
}

TEST(Decode, ShapeMismatchThrows) {
    const GridSpec g{64, 64, 4};
    Maps m = blank(g);
    EXPECT_THROW(decode(Tensor2D(4, 4), m.off, m.size, nullptr, g), ValidationError);
    const Tensor3D emb(3, 4, 4);
    EXPECT_THROW(decode(m.heat, m.off, m.size, &emb, g), ValidationError);
}

TEST(BilinearSample, Examples) {
    Tensor3D m(1, 2, 3, std::vector<double>{1, 3, 5,
                                            7, 9, 11});
    EXPECT_EQ(bilinear_sample(m, 1, 1)[0], 9.0);
    EXPECT_EQ(bilinear_sample(m, 0.5, 0)[0], 2.0);
    EXPECT_EQ(bilinear_sample(m, 0, 0.5)[0], 4.0);
    EXPECT_EQ(bilinear_sample(m, 2, 1)[0], 11.0);
    EXPECT_DOUBLE_EQ(bilinear_sample(m, 1.5, 0.5)[0], (3 + 5 + 9 + 11) / 4.0);
    EXPECT_THROW(bilinear_sample(m, 2.01, 0), ValidationError);
    EXPECT_THROW(bilinear_sample(m, -0.01, 0), ValidationError);
}

TEST(Normalize, ZeroVectorIsRejected) {
    std::vector<double> z(4, 0.0);
    EXPECT_FALSE(normalize(z));
    std::vector<double> v{3, 4};
    EXPECT_TRUE(normalize(v));
    EXPECT_DOUBLE_EQ(v[0], 0.6);
}
