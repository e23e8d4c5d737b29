#include "fairtrack/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "fairtrack/errors.hpp"
#include "fairtrack/losses.hpp"
#include "fairtrack/random.hpp"
#include "fairtrack/target_encoding.hpp"

namespace fairtrack {

namespace {

struct Fixture {
    TargetMaps targets;
    Tensor2D heat;
    Tensor3D offsets;
    Tensor3D sizes;
    std::vector<std::vector<double>> logits;
    std::vector<int> labels;
    UncertaintyParams weights;
};

// A prediction at least `gap` away from the target on either side, so the
// l1 terms are differentiable at the evaluation point.
double away_from(Rng& rng, double target, double spread, double gap) {
    const double d = rng.uniform(gap, spread);
    return rng.bernoulli(0.5) ? target + d : target - d;
}

Fixture make_fixture(Rng& rng, const GradcheckOptions& opts) {
    const int w = rng.uniform_int(2, opts.max_size);
    const int h = rng.uniform_int(2, opts.max_size);
    const int k = rng.uniform_int(2, opts.max_identities);
    const GridSpec grid{4 * w, 4 * h, 4};

    std::vector<GtObject> objects;
    const int n = rng.uniform_int(1, 3);
    for (int i = 0; i < n; ++i) {
        const double cx = rng.uniform(0.0, grid.image_w - 1.0);
        const double cy = rng.uniform(0.0, grid.image_h - 1.0);
        const double bw = rng.uniform(2.0, 24.0);
        const double bh = rng.uniform(2.0, 40.0);
        objects.push_back({{cx - bw / 2, cy - bh / 2, cx + bw / 2, cy + bh / 2}, rng.uniform_int(0, k - 1)});
    }

    Fixture f{encode_targets(objects, grid, k), Tensor2D(h, w), Tensor3D(2, h, w), Tensor3D(2, h, w), {}, {}, {}};
    for (double& v : f.heat.data()) v = rng.uniform(0.02, 0.98);
    for (int c = 0; c < 2; ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                f.offsets(c, y, x) = away_from(rng, f.targets.offsets(c, y, x), 0.5, 0.01);
                f.sizes(c, y, x) = away_from(rng, f.targets.sizes(c, y, x), 5.0, 0.01);
            }
        }
    }
    for (const auto& obj : f.targets.objects) {
        std::vector<double> z(static_cast<std::size_t>(k));
        for (double& v : z) v = rng.normal();
        f.logits.push_back(std::move(z));
        f.labels.push_back(obj.identity);
    }
    f.weights = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return f;
}

template <class Loss>
double central_difference(double& x, double step, Loss&& loss) {
    const double saved = x;
    x = saved + step;
    const double up = loss();
    x = saved - step;
    const double down = loss();
    x = saved;
    return (up - down) / (2.0 * step);
}

void record(GradcheckEntry& e, double analytic, double numeric) {
    e.worst_rel_error = std::max(e.worst_rel_error, relative_error(analytic, numeric));
    ++e.checked;
}

}  // namespace

double relative_error(double analytic, double numeric) noexcept {
    const double scale = std::max({std::abs(analytic), std::abs(numeric), kGradFloor});
    return std::abs(analytic - numeric) / scale;
}

GradcheckReport run_gradcheck(const GradcheckOptions& opts) {
    if (opts.fixtures < 1 || opts.max_size < 2 || opts.max_identities < 2 || !(opts.step > 0.0)) {
        throw ValidationError("gradcheck: need fixtures >= 1, max size >= 2, K >= 2 and a positive step");
    }
    GradcheckEntry heat{"heat", 0.0, 0};
    GradcheckEntry box{"box", 0.0, 0};
    GradcheckEntry identity{"identity", 0.0, 0};
    GradcheckEntry total{"total", 0.0, 0};

    const Rng root(opts.seed);
    const FocalParams focal;
    for (int i = 0; i < opts.fixtures; ++i) {
        Rng rng = root.split(static_cast<std::uint64_t>(i));
        Fixture f = make_fixture(rng, opts);
        const int n = f.targets.num_objects();

        const FocalResult fr = focal_loss(f.heat, f.targets.heatmap, focal, n);
        auto heat_data = f.heat.data();
        for (std::size_t j = 0; j < heat_data.size(); ++j) {
            const double num = central_difference(heat_data[j], opts.step,
                                                  [&] { return focal_loss(f.heat, f.targets.heatmap, focal, n).loss; });
            record(heat, fr.grad.data()[j], num);
        }

        const BoxLossResult br = box_loss(f.offsets, f.sizes, f.targets);
        auto off = f.offsets.data();
        for (std::size_t j = 0; j < off.size(); ++j) {
            const double num =
                central_difference(off[j], opts.step, [&] { return box_loss(f.offsets, f.sizes, f.targets).loss; });
            record(box, br.grad_offsets.data()[j], num);
        }
        auto sz = f.sizes.data();
        for (std::size_t j = 0; j < sz.size(); ++j) {
            const double num =
                central_difference(sz[j], opts.step, [&] { return box_loss(f.offsets, f.sizes, f.targets).loss; });
            record(box, br.grad_sizes.data()[j], num);
        }

        const ReidLossResult rr = reid_loss(f.logits, f.labels);
        for (std::size_t o = 0; o < f.logits.size(); ++o) {
            for (std::size_t j = 0; j < f.logits[o].size(); ++j) {
                const double num = central_difference(f.logits[o][j], opts.step,
                                                      [&] { return reid_loss(f.logits, f.labels).loss; });
                record(identity, rr.grad_logits[o][j], num);
            }
        }

        double lh = fr.loss;
        double lb = br.loss;
        double li = rr.loss;
        UncertaintyParams u = f.weights;
        const TotalLossResult tr = total_loss(lh, lb, li, u);
        auto eval = [&] { return total_loss(lh, lb, li, u).total; };
        record(total, tr.grad_w_detection, central_difference(u.w_detection, opts.step, eval));
        record(total, tr.grad_w_identity, central_difference(u.w_identity, opts.step, eval));
        record(total, tr.grad_detection, central_difference(lh, opts.step, eval));
        record(total, tr.grad_detection, central_difference(lb, opts.step, eval));
        record(total, tr.grad_identity, central_difference(li, opts.step, eval));
    }

    GradcheckReport report{{heat, box, identity, total}, true};
    for (const auto& e : report.entries) {
        if (!(e.worst_rel_error <= opts.tolerance)) report.passed = false;
    }
    return report;
}

}  // namespace fairtrack
