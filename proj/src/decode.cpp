#include "fairtrack/decode.hpp"

#include <algorithm>
#include <cmath>

#include "fairtrack/errors.hpp"
#include "fairtrack/simd/kernels.hpp"

namespace fairtrack {

std::vector<Peak> peak_nms(const Tensor2D& heatmap, double threshold, int top_k) {
    if (top_k < 1) throw ValidationError("peak_nms: top_k must be >= 1");
    std::vector<double> pooled(heatmap.size());
    simd::kernels().max3x3(heatmap.data().data(), pooled.data(), heatmap.height(), heatmap.width());

    std::vector<Peak> peaks;
    const auto src = heatmap.data();
    for (int y = 0; y < heatmap.height(); ++y) {
        for (int x = 0; x < heatmap.width(); ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * heatmap.width() + x;
            if (src[i] > threshold && src[i] == pooled[i]) peaks.push_back({x, y, src[i]});
        }
    }
    // Row-major scan order already breaks ties; stable sort keeps it.
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.score > b.score; });
    if (peaks.size() > static_cast<std::size_t>(top_k)) peaks.resize(static_cast<std::size_t>(top_k));
    return peaks;
}

std::vector<double> bilinear_sample(const Tensor3D& map, double x, double y) {
    const int w = map.width();
    const int h = map.height();
    if (!(x >= 0.0 && x <= w - 1.0 && y >= 0.0 && y <= h - 1.0)) {
        throw ValidationError("bilinear_sample: coordinate outside the map");
    }
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double fx = x - x0;
    const double fy = y - y0;

    std::vector<double> out(static_cast<std::size_t>(map.channels()));
    for (int c = 0; c < map.channels(); ++c) {
        const double top = (1.0 - fx) * map(c, y0, x0) + fx * map(c, y0, x1);
        const double bottom = (1.0 - fx) * map(c, y1, x0) + fx * map(c, y1, x1);
        out[static_cast<std::size_t>(c)] = (1.0 - fy) * top + fy * bottom;
    }
    return out;
}

bool normalize(std::vector<double>& v) {
    const double sq = simd::kernels().dot(v.data(), v.data(), v.size());
    if (!(sq > 0.0)) return false;
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : v) x *= inv;
    return true;
}

std::vector<Detection> decode(const Tensor2D& heat, const Tensor3D& offsets, const Tensor3D& sizes,
                              const Tensor3D* embeddings, const GridSpec& grid, const DecodeParams& params) {
    grid.validate();
    const int h = heat.height();
    const int w = heat.width();
    if (h != grid.feat_h() || w != grid.feat_w()) throw ValidationError("decode: heatmap does not match the grid");
    if (offsets.channels() != 2 || !offsets.same_grid(h, w)) throw ValidationError("decode: offset map shape");
    if (sizes.channels() != 2 || !sizes.same_grid(h, w)) throw ValidationError("decode: size map shape");
    if (embeddings && !embeddings->same_grid(h, w)) throw ValidationError("decode: embedding map shape");

    std::vector<Detection> dets;
    for (const Peak& p : peak_nms(heat, params.threshold, params.top_k)) {
        const double fx = p.x + offsets(0, p.y, p.x);
        const double fy = p.y + offsets(1, p.y, p.x);
        const double cx = fx * grid.stride;
        const double cy = fy * grid.stride;
        const double half_w = 0.5 * sizes(0, p.y, p.x);
        const double half_h = 0.5 * sizes(1, p.y, p.x);

        Detection d;
        d.box = {std::clamp(cx - half_w, 0.0, static_cast<double>(grid.image_w)),
                 std::clamp(cy - half_h, 0.0, static_cast<double>(grid.image_h)),
                 std::clamp(cx + half_w, 0.0, static_cast<double>(grid.image_w)),
                 std::clamp(cy + half_h, 0.0, static_cast<double>(grid.image_h))};
        if (d.box.x2 < d.box.x1) d.box.x2 = d.box.x1;
        if (d.box.y2 < d.box.y1) d.box.y2 = d.box.y1;
        d.score = std::min(1.0, p.score);
        d.center_feat_x = fx;
        d.center_feat_y = fy;

        if (embeddings) {
            if (params.sampling == Sampling::Center) {
                d.embedding.resize(static_cast<std::size_t>(embeddings->channels()));
                for (int c = 0; c < embeddings->channels(); ++c) {
                    d.embedding[static_cast<std::size_t>(c)] = (*embeddings)(c, p.y, p.x);
                }
            } else {
                d.embedding = bilinear_sample(*embeddings, std::clamp(fx, 0.0, w - 1.0), std::clamp(fy, 0.0, h - 1.0));
            }
            if (!normalize(d.embedding)) d.embedding.clear();
        }
        dets.push_back(std::move(d));
    }
    return dets;
}

}  // namespace fairtrack
