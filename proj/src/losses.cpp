#include "fairtrack/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairtrack/errors.hpp"

namespace fairtrack {

FocalResult focal_loss(const Tensor2D& pred, const Tensor2D& target, const FocalParams& params, int num_objects) {
    if (!pred.same_shape(target)) throw ValidationError("focal_loss: prediction and target shapes differ");
    if (params.alpha < 0.0 || params.beta < 0.0) throw ValidationError("focal_loss: alpha and beta must be >= 0");
    if (num_objects < 0) throw ValidationError("focal_loss: negative object count");

    const auto p = pred.data();
    const auto t = target.data();
    const bool has_peak = std::any_of(t.begin(), t.end(), [](double v) { return v == 1.0; });
    if (num_objects == 0 && has_peak) throw ValidationError("focal_loss: object count 0 with positive targets");
    const double norm = num_objects > 0 ? static_cast<double>(num_objects) : 1.0;
    const double a = params.alpha;
    const double b = params.beta;

    FocalResult out{0.0, Tensor2D(pred.height(), pred.width())};
    auto g = out.grad.data();
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const bool clipped = !(p[i] >= kPredEpsilon && p[i] <= 1.0 - kPredEpsilon);
        const double q = std::clamp(p[i], kPredEpsilon, 1.0 - kPredEpsilon);
        double term = 0.0;
        double dterm = 0.0;
        if (t[i] == 1.0) {
            // (1 - q)^a log q
            const double lq = std::log(q);
            term = std::pow(1.0 - q, a) * lq;
            dterm = std::pow(1.0 - q, a) / q;
            if (a != 0.0) dterm -= a * std::pow(1.0 - q, a - 1.0) * lq;
        } else {
            // (1 - t)^b q^a log(1 - q)
            const double w = std::pow(1.0 - t[i], b);
            const double l1q = std::log(1.0 - q);
            term = w * std::pow(q, a) * l1q;
            dterm = -w * std::pow(q, a) / (1.0 - q);
            if (a != 0.0) dterm += w * a * std::pow(q, a - 1.0) * l1q;
        }
        sum += term;
        g[i] = clipped ? 0.0 : -dterm / norm;
    }
    out.loss = -sum / norm;
    return out;
}

BoxLossResult box_loss(const Tensor3D& pred_offsets, const Tensor3D& pred_sizes, const TargetMaps& targets) {
    const int h = targets.heatmap.height();
    const int w = targets.heatmap.width();
    if (pred_offsets.channels() != 2 || !pred_offsets.same_grid(h, w) || pred_sizes.channels() != 2 ||
        !pred_sizes.same_grid(h, w)) {
        throw ValidationError("box_loss: prediction maps must be 2 x feat_h x feat_w");
    }
    auto sign = [](double d) { return d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0); };

    BoxLossResult out{0.0, Tensor3D(2, h, w), Tensor3D(2, h, w)};
    for (const EncodedObject& obj : targets.objects) {
        const int x = obj.cell_x;
        const int y = obj.cell_y;
        const double target_off[2] = {obj.offset_x, obj.offset_y};
        const double target_size[2] = {obj.size_w, obj.size_h};
        for (int c = 0; c < 2; ++c) {
            const double d_off = pred_offsets(c, y, x) - target_off[c];
            const double d_size = pred_sizes(c, y, x) - target_size[c];
            out.loss += std::abs(d_off) + std::abs(d_size);
            out.grad_offsets(c, y, x) += sign(d_off);
            out.grad_sizes(c, y, x) += sign(d_size);
        }
    }
    return out;
}

ReidLossResult reid_loss(std::span<const std::vector<double>> logits, std::span<const int> labels) {
    if (logits.size() != labels.size()) throw ValidationError("reid_loss: one label per logit vector required");
    ReidLossResult out;
    out.grad_logits.reserve(logits.size());
    const std::size_t k = logits.empty() ? 0 : logits.front().size();
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const auto& z = logits[i];
        if (z.size() != k || k == 0) throw ValidationError("reid_loss: logit vectors must share a nonzero length");
        if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= k) {
            throw ValidationError("reid_loss: label " + std::to_string(labels[i]) + " outside [0, " +
                                  std::to_string(k) + ")");
        }
        const double zmax = *std::max_element(z.begin(), z.end());
        double denom = 0.0;
        for (double v : z) denom += std::exp(v - zmax);
        const double log_denom = std::log(denom);

        std::vector<double> g(k);
        for (std::size_t j = 0; j < k; ++j) g[j] = std::exp(z[j] - zmax - log_denom);
        g[static_cast<std::size_t>(labels[i])] -= 1.0;
        out.loss -= z[static_cast<std::size_t>(labels[i])] - zmax - log_denom;
        out.grad_logits.push_back(std::move(g));
    }
    return out;
}

TotalLossResult total_loss(double heat, double box, double identity, const UncertaintyParams& u) {
    const double detection = heat + box;
    const double ew1 = std::exp(-u.w_detection);
    const double ew2 = std::exp(-u.w_identity);
    TotalLossResult r;
    r.total = 0.5 * (ew1 * detection + ew2 * identity + u.w_detection + u.w_identity);
    r.grad_w_detection = 0.5 * (1.0 - ew1 * detection);
    r.grad_w_identity = 0.5 * (1.0 - ew2 * identity);
    r.grad_detection = 0.5 * ew1;
    r.grad_identity = 0.5 * ew2;
    return r;
}

LossReport compute_losses(const Tensor2D& pred_heat, const Tensor3D& pred_offsets, const Tensor3D& pred_sizes,
                          std::span<const std::vector<double>> logits, const TargetMaps& targets,
                          const FocalParams& focal, const UncertaintyParams& u) {
    std::vector<int> labels;
    labels.reserve(targets.objects.size());
    for (const auto& obj : targets.objects) labels.push_back(obj.identity);

    FocalResult heat = focal_loss(pred_heat, targets.heatmap, focal, targets.num_objects());
    BoxLossResult box = box_loss(pred_offsets, pred_sizes, targets);
    ReidLossResult reid = reid_loss(logits, labels);
    const TotalLossResult tot = total_loss(heat.loss, box.loss, reid.loss, u);

    LossReport r;
    r.heat = heat.loss;
    r.box = box.loss;
    r.identity = reid.loss;
    r.total = tot.total;
    r.grad_w_detection = tot.grad_w_detection;
    r.grad_w_identity = tot.grad_w_identity;
    for (double& g : heat.grad.data()) g *= tot.grad_detection;
    for (double& g : box.grad_offsets.data()) g *= tot.grad_detection;
    for (double& g : box.grad_sizes.data()) g *= tot.grad_detection;
    for (auto& row : reid.grad_logits) {
        for (double& g : row) g *= tot.grad_identity;
    }
    r.grad_heatmap = std::move(heat.grad);
    r.grad_offsets = std::move(box.grad_offsets);
    r.grad_sizes = std::move(box.grad_sizes);
    r.grad_logits = std::move(reid.grad_logits);
    return r;
}

}  // namespace fairtrack
