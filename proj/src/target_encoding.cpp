#include "fairtrack/target_encoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairtrack/errors.hpp"
#include "fairtrack/simd/kernels.hpp"

namespace fairtrack {

std::optional<QuantizedCenter> quantize_center(const BBox& box, const GridSpec& grid) {
    const double cx = box.center_x();
    const double cy = box.center_y();
    if (!(cx >= 0.0 && cy >= 0.0 && cx < grid.image_w && cy < grid.image_h)) return std::nullopt;
    const double sx = cx / grid.stride;
    const double sy = cy / grid.stride;
    const double fx = std::floor(sx);
    const double fy = std::floor(sy);
    QuantizedCenter q{static_cast<int>(fx), static_cast<int>(fy), sx - fx, sy - fy};
    if (q.cell_x >= grid.feat_w() || q.cell_y >= grid.feat_h()) return std::nullopt;
    return q;
}

double gaussian_radius(double height, double width, double min_overlap) {
    // Both corners shrink or grow together.
    const double b1 = height + width;
    const double c1 = width * height * (1.0 - min_overlap) / (1.0 + min_overlap);
    const double r1 = (b1 + std::sqrt(b1 * b1 - 4.0 * c1)) / 2.0;

    // Both corners inside the ground-truth box.
    const double b2 = 2.0 * (height + width);
    const double c2 = (1.0 - min_overlap) * width * height;
    const double r2 = (b2 + std::sqrt(b2 * b2 - 16.0 * c2)) / 2.0;

    // Both corners outside the ground-truth box.
    const double a3 = 4.0 * min_overlap;
    const double b3 = -2.0 * min_overlap * (height + width);
    const double c3 = (min_overlap - 1.0) * width * height;
    const double r3 = (b3 + std::sqrt(b3 * b3 - 4.0 * a3 * c3)) / 2.0;

    return std::min({r1, r2, r3});
}

double gaussian_sigma(double box_w, double box_h, const GridSpec& grid, const GaussianParams& params) {
    const double h = std::ceil(box_h / grid.stride);
    const double w = std::ceil(box_w / grid.stride);
    double radius = 0.0;
    if (h > 0.0 && w > 0.0) radius = std::floor(std::max(0.0, gaussian_radius(h, w, params.min_overlap)));
    return std::max(params.min_sigma, radius / 3.0);
}

void draw_gaussian_max(Tensor2D& heat, int cx, int cy, double sigma, double peak) {
    const double inv = 1.0 / (2.0 * sigma * sigma);
    std::vector<double> gx(static_cast<std::size_t>(heat.width()));
    for (int x = 0; x < heat.width(); ++x) {
        const double dx = x - cx;
        gx[static_cast<std::size_t>(x)] = std::exp(-dx * dx * inv);
    }
    const auto& k = simd::kernels();
    for (int y = 0; y < heat.height(); ++y) {
        const double dy = y - cy;
        const double gy = peak * std::exp(-dy * dy * inv);
        if (gy == 0.0) continue;
        k.max_scaled(heat.row(y).data(), gx.data(), gy, gx.size());
    }
}

TargetMaps encode_targets(std::span<const GtObject> objects, const GridSpec& grid, int num_identities,
                          const GaussianParams& params) {
    grid.validate();
    const int fw = grid.feat_w();
    const int fh = grid.feat_h();
    const std::size_t cells = static_cast<std::size_t>(fw) * static_cast<std::size_t>(fh);

    TargetMaps maps{Tensor2D(fh, fw), Tensor3D(2, fh, fw), Tensor3D(2, fh, fw), std::vector<char>(cells, 0),
                    std::vector<int>(cells, -1), {}, 0, {}};

    // Cell -> slot in maps.objects; resolved before anything is drawn.
    std::vector<int> owner(cells, -1);
    std::vector<double> owner_area;
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const GtObject& obj = objects[i];
        if (obj.identity < 0 || obj.identity >= num_identities) {
            throw ValidationError("identity " + std::to_string(obj.identity) + " outside [0, " +
                                  std::to_string(num_identities) + ")");
        }
        if (!obj.box.valid()) {
            maps.dropped.push_back("object " + std::to_string(i) + ": inverted box");
            continue;
        }
        const auto q = quantize_center(obj.box, grid);
        if (!q) {
            maps.dropped.push_back("object " + std::to_string(i) + ": center outside the image");
            continue;
        }
        EncodedObject enc{q->cell_x, q->cell_y, q->offset_x, q->offset_y, obj.box.width(), obj.box.height(),
                          obj.identity, gaussian_sigma(obj.box.width(), obj.box.height(), grid, params)};
        const std::size_t cell = static_cast<std::size_t>(q->cell_y) * fw + q->cell_x;
        const double area = obj.box.area();
        if (owner[cell] >= 0) {
            ++maps.collisions;
            const auto slot = static_cast<std::size_t>(owner[cell]);
            if (area > owner_area[slot]) {
                maps.objects[slot] = enc;
                owner_area[slot] = area;
            }
            continue;
        }
        owner[cell] = static_cast<int>(maps.objects.size());
        maps.objects.push_back(enc);
        owner_area.push_back(area);
    }

    for (const EncodedObject& obj : maps.objects) {
        draw_gaussian_max(maps.heatmap, obj.cell_x, obj.cell_y, obj.sigma);
        const std::size_t cell = static_cast<std::size_t>(obj.cell_y) * fw + obj.cell_x;
        maps.center_mask[cell] = 1;
        maps.identity_index[cell] = obj.identity;
        maps.offsets(0, obj.cell_y, obj.cell_x) = obj.offset_x;
        maps.offsets(1, obj.cell_y, obj.cell_x) = obj.offset_y;
        maps.sizes(0, obj.cell_y, obj.cell_x) = obj.size_w;
        maps.sizes(1, obj.cell_y, obj.cell_x) = obj.size_h;
    }
    return maps;
}

}  // namespace fairtrack
