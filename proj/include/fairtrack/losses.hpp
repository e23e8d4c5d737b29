#pragma once

// Reference training losses with analytic gradients. There is no network
// here: callers supply prediction maps and logits, and get back the loss
// value together with its gradient with respect to every input they own.
//
// Box and identity losses are sums over objects, not means.

#include <span>
#include <vector>

#include "fairtrack/target_encoding.hpp"
#include "fairtrack/tensor.hpp"

namespace fairtrack {

struct FocalParams {
    double alpha = 2.0;
    double beta = 4.0;
};

/// Learnable task-balance weights of the uncertainty-weighted total loss.
struct UncertaintyParams {
    double w_detection = 0.0;
    double w_identity = 0.0;
};

/// Predictions are clipped to [kPredEpsilon, 1 - kPredEpsilon] before any log.
inline constexpr double kPredEpsilon = 1e-7;

struct FocalResult {
    double loss = 0.0;
    Tensor2D grad;  ///< d loss / d pred; zero where pred was clipped
};

/// Penalty-reduced pixel-wise focal loss normalised by num_objects. A target
/// cell counts as positive iff it equals 1 exactly. num_objects == 0 is
/// accepted only when the target has no positive cell (normaliser 1).
FocalResult focal_loss(const Tensor2D& pred, const Tensor2D& target, const FocalParams& params, int num_objects);

struct BoxLossResult {
    double loss = 0.0;
    Tensor3D grad_offsets;
    Tensor3D grad_sizes;
};

/// Sum over encoded objects of |o - o_hat|_1 + |s - s_hat|_1, read at each
/// object's center cell. Subgradient 0 at exact equality.
BoxLossResult box_loss(const Tensor3D& pred_offsets, const Tensor3D& pred_sizes, const TargetMaps& targets);

struct ReidLossResult {
    double loss = 0.0;
    std::vector<std::vector<double>> grad_logits;  ///< softmax - onehot, per object
};

/// Softmax cross-entropy summed over objects. Throws ValidationError on a
/// label outside [0, K) or ragged logits.
ReidLossResult reid_loss(std::span<const std::vector<double>> logits, std::span<const int> labels);

struct TotalLossResult {
    double total = 0.0;
    double grad_w_detection = 0.0;
    double grad_w_identity = 0.0;
    double grad_detection = 0.0;  ///< d total / d L_detection
    double grad_identity = 0.0;   ///< d total / d L_identity
};

/// total = 1/2 (exp(-w1) (L_heat + L_box) + exp(-w2) L_identity + w1 + w2)
TotalLossResult total_loss(double heat, double box, double identity, const UncertaintyParams& u);

/// Everything at once for one frame.
struct LossReport {
    double heat = 0.0;
    double box = 0.0;
    double identity = 0.0;
    double total = 0.0;
    Tensor2D grad_heatmap;
    Tensor3D grad_offsets;
    Tensor3D grad_sizes;
    std::vector<std::vector<double>> grad_logits;
    double grad_w_detection = 0.0;
    double grad_w_identity = 0.0;
};

/// Combines the four losses and chains the total-loss weights into every map gradient.
/// logits are ordered like targets.objects; labels are taken from the targets.
LossReport compute_losses(const Tensor2D& pred_heat, const Tensor3D& pred_offsets, const Tensor3D& pred_sizes,
                          std::span<const std::vector<double>> logits, const TargetMaps& targets,
                          const FocalParams& focal = {}, const UncertaintyParams& u = {});

}  // namespace fairtrack
