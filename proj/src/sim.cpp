#include "fairtrack/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fairtrack/errors.hpp"
#include "fairtrack/random.hpp"
#include "fairtrack/simd/kernels.hpp"
#include "fairtrack/target_encoding.hpp"

namespace fairtrack {

namespace {

// Stream ids for Rng::split; per-frame streams start at kFrameStream.
constexpr std::uint64_t kTrajectoryStream = 1;
constexpr std::uint64_t kAnchorStream = 2;
constexpr std::uint64_t kFrameStream = 1000;

struct Trajectory {
    double x0 = 0.0;  // left edge at frame 1, before reflection
    double y0 = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double w = 0.0;
    double h = 0.0;
};

BBox box_at(const Trajectory& t, int frame, const SimConfig& cfg) {
    const double dt = frame - 1;
    const double left = reflect(t.x0 + t.vx * dt, cfg.image_w - t.w);
    const double top = reflect(t.y0 + t.vy * dt, cfg.image_h - t.h);
    return BBox::from_tlwh(left, top, t.w, t.h);
}

std::vector<Trajectory> make_trajectories(const SimConfig& cfg, Rng& rng) {
    std::vector<Trajectory> out;
    out.reserve(static_cast<std::size_t>(cfg.num_targets));
    auto random_size = [&](Trajectory& t) {
        t.w = rng.uniform(cfg.min_box_w, cfg.max_box_w);
        t.h = t.w * rng.uniform(cfg.min_aspect, cfg.max_aspect);
    };

    int k = 0;
    if (cfg.crossing) {
        for (; k + 1 < cfg.num_targets; k += 2) {
            Trajectory a;
            random_size(a);
            const double speed = rng.uniform(cfg.min_speed, cfg.max_speed);
            const double meet_frame = rng.uniform(0.35, 0.65) * (cfg.frames - 1) + 1;
            const double meet_x = rng.uniform(0.0, cfg.image_w - a.w);
            const double row = rng.uniform(0.0, cfg.image_h - a.h);
            Trajectory b = a;
            a.vx = speed;
            b.vx = -speed;
            a.x0 = meet_x - speed * (meet_frame - 1);
            b.x0 = meet_x + speed * (meet_frame - 1);
            a.y0 = row;
            // Small vertical offset keeps the crossing overlap above 0.8 IoU.
            b.y0 = std::clamp(row + rng.uniform(-0.1, 0.1) * a.h, 0.0, cfg.image_h - a.h);
            out.push_back(a);
            out.push_back(b);
        }
    }
    for (; k < cfg.num_targets; ++k) {
        Trajectory t;
        random_size(t);
        t.x0 = rng.uniform(0.0, cfg.image_w - t.w);
        t.y0 = rng.uniform(0.0, cfg.image_h - t.h);
        const double speed = rng.uniform(cfg.min_speed, cfg.max_speed);
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        t.vx = speed * std::cos(angle);
        t.vy = speed * std::sin(angle);
        out.push_back(t);
    }
    return out;
}

std::vector<double> random_unit(Rng& rng, int dim) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    do {
        for (double& x : v) x = rng.normal();
    } while (!normalize(v));
    return v;
}

std::vector<std::vector<double>> make_anchors(const SimConfig& cfg, Rng& rng) {
    const auto& k = simd::kernels();
    std::vector<std::vector<double>> anchors;
    anchors.reserve(static_cast<std::size_t>(cfg.num_targets));
    auto max_cos = [&](const std::vector<double>& v) {
        double m = -1.0;
        for (const auto& a : anchors) m = std::max(m, k.dot(a.data(), v.data(), v.size()));
        return m;
    };
    for (int t = 0; t < cfg.num_targets; ++t) {
        bool placed = false;
        for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
            std::vector<double> v = random_unit(rng, cfg.emb_dim);
            if (anchors.size() < static_cast<std::size_t>(cfg.emb_dim)) {
                // Gram-Schmidt against the anchors so far: exactly orthogonal while room remains.
                for (const auto& a : anchors) {
                    const double d = k.dot(a.data(), v.data(), v.size());
                    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * a[i];
                }
                if (!normalize(v)) continue;
            }
            if (anchors.empty() || max_cos(v) <= cfg.anchor_max_cosine) {
                anchors.push_back(std::move(v));
                placed = true;
            }
        }
        if (!placed) {
            throw ValidationError("sim: cannot place " + std::to_string(cfg.num_targets) + " anchors in " +
                                  std::to_string(cfg.emb_dim) + " dimensions with cosine <= " +
                                  std::to_string(cfg.anchor_max_cosine));
        }
    }
    return anchors;
}

bool occluded(const SimConfig& cfg, int target, int frame) {
    return std::any_of(cfg.occlusions.begin(), cfg.occlusions.end(), [&](const Occlusion& o) {
        return o.target == target && frame >= o.first_frame && frame <= o.last_frame;
    });
}

BBox clip_to_image(BBox b, const SimConfig& cfg) {
    b.x1 = std::clamp(b.x1, 0.0, static_cast<double>(cfg.image_w));
    b.x2 = std::clamp(b.x2, 0.0, static_cast<double>(cfg.image_w));
    b.y1 = std::clamp(b.y1, 0.0, static_cast<double>(cfg.image_h));
    b.y2 = std::clamp(b.y2, 0.0, static_cast<double>(cfg.image_h));
    return b;
}

}  // namespace

double reflect(double p, double extent) noexcept {
    if (extent <= 0.0) return 0.0;
    const double period = 2.0 * extent;
    double m = std::fmod(p, period);
    if (m < 0.0) m += period;
    return m <= extent ? m : period - m;
}

void SimConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) { throw ValidationError("sim " + field + ": " + why); };
    if (frames < 1) fail("frames", "must be >= 1");
    if (num_targets < 0) fail("num_targets", "must be >= 0");
    if (image_w < 1 || image_h < 1) fail("image size", "must be positive");
    if (!(frame_rate > 0.0)) fail("frame_rate", "must be positive");
    if (!(min_speed >= 0.0 && max_speed >= min_speed)) fail("speed", "need 0 <= min_speed <= max_speed");
    if (!(min_box_w > 0.0 && max_box_w >= min_box_w)) fail("box width", "need 0 < min_box_w <= max_box_w");
    if (!(min_aspect > 0.0 && max_aspect >= min_aspect)) fail("aspect", "need 0 < min_aspect <= max_aspect");
    if (max_box_w > image_w || max_box_w * max_aspect > image_h) fail("box size", "targets must fit the image");
    if (!(det_dropout_prob >= 0.0 && det_dropout_prob < 1.0)) fail("det_dropout_prob", "must lie in [0, 1)");
    if (!(fp_rate >= 0.0)) fail("fp_rate", "must be >= 0");
    if (!(box_noise_std >= 0.0)) fail("box_noise_std", "must be >= 0");
    if (emb_dim < 2) fail("emb_dim", "must be >= 2");
    if (!(emb_noise_std >= 0.0)) fail("emb_noise_std", "must be >= 0");
    if (!(anchor_max_cosine > -1.0 && anchor_max_cosine <= 1.0)) fail("anchor_max_cosine", "must lie in (-1, 1]");
    for (const auto& o : occlusions) {
        if (o.target < 0 || o.target >= num_targets || o.first_frame > o.last_frame) {
            fail("occlusion", "target " + std::to_string(o.target) + " frames " + std::to_string(o.first_frame) +
                                  "-" + std::to_string(o.last_frame) + " is invalid");
        }
    }
}

SimSequence generate(const SimConfig& cfg) {
    cfg.validate();
    const Rng root(cfg.seed);
    Rng traj_rng = root.split(kTrajectoryStream);
    Rng anchor_rng = root.split(kAnchorStream);

    SimSequence seq;
    seq.config = cfg;
    const std::vector<Trajectory> trajectories = make_trajectories(cfg, traj_rng);
    seq.anchors = make_anchors(cfg, anchor_rng);
    const double per_component = cfg.emb_noise_std / std::sqrt(static_cast<double>(cfg.emb_dim));

    for (int frame = 1; frame <= cfg.frames; ++frame) {
        Rng rng = root.split(kFrameStream + static_cast<std::uint64_t>(frame));
        auto& gt = seq.gt[frame];
        std::vector<Detection> dets;
        std::vector<int> ids;

        for (int k = 0; k < cfg.num_targets; ++k) {
            const BBox box = box_at(trajectories[static_cast<std::size_t>(k)], frame, cfg);
            gt.push_back({k + 1, box, 1.0});

            // Draw every variate whether or not it is used, so changing one
            // knob does not reshuffle the others.
            const bool dropped = rng.bernoulli(cfg.det_dropout_prob);
            const double n[4] = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
            const double score = rng.uniform(0.6, 1.0);
            std::vector<double> emb = seq.anchors[static_cast<std::size_t>(k)];
            for (double& e : emb) e += per_component * rng.normal();
            if (dropped || occluded(cfg, k, frame)) continue;

            Detection d;
            d.box = box;
            if (cfg.box_noise_std > 0.0) {
                d.box = clip_to_image({box.x1 + cfg.box_noise_std * n[0], box.y1 + cfg.box_noise_std * n[1],
                                       box.x2 + cfg.box_noise_std * n[2], box.y2 + cfg.box_noise_std * n[3]},
                                      cfg);
                if (d.box.width() < 1.0 || d.box.height() < 1.0) d.box = box;
            }
            d.score = score;
            if (!normalize(emb)) emb = seq.anchors[static_cast<std::size_t>(k)];
            d.embedding = std::move(emb);
            dets.push_back(std::move(d));
            ids.push_back(k + 1);
        }

        const int false_positives = rng.poisson(cfg.fp_rate);
        for (int i = 0; i < false_positives; ++i) {
            const double w = rng.uniform(cfg.min_box_w, cfg.max_box_w);
            const double h = w * rng.uniform(cfg.min_aspect, cfg.max_aspect);
            Detection d;
            d.box = BBox::from_tlwh(rng.uniform(0.0, cfg.image_w - w), rng.uniform(0.0, cfg.image_h - h), w, h);
            d.score = rng.uniform(0.41, 0.7);
            d.embedding = random_unit(rng, cfg.emb_dim);
            dets.push_back(std::move(d));
            ids.push_back(-1);
        }

        // Detector output order carries no identity information.
        for (std::size_t i = dets.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
            std::swap(dets[i - 1], dets[j]);
            std::swap(ids[i - 1], ids[j]);
        }
        seq.detections[frame] = std::move(dets);
        seq.detection_ids[frame] = std::move(ids);
    }
    return seq;
}

SimMaps generate_maps(const SimSequence& seq, int frame, const GridSpec& grid) {
    grid.validate();
    const int fw = grid.feat_w();
    const int fh = grid.feat_h();
    SimMaps maps{Tensor2D(fh, fw), Tensor3D(2, fh, fw), Tensor3D(2, fh, fw), Tensor3D(seq.config.emb_dim, fh, fw), 0};

    const auto it = seq.detections.find(frame);
    if (it == seq.detections.end()) return maps;

    // Resolve center-cell collisions first: the larger box keeps the cell.
    std::map<std::pair<int, int>, std::size_t> owner;
    std::vector<QuantizedCenter> centers(it->second.size());
    for (std::size_t i = 0; i < it->second.size(); ++i) {
        const auto q = quantize_center(it->second[i].box, grid);
        if (!q) continue;
        centers[i] = *q;
        const auto key = std::make_pair(q->cell_y, q->cell_x);
        const auto [slot, inserted] = owner.emplace(key, i);
        if (!inserted) {
            ++maps.collisions;
            if (it->second[i].box.area() > it->second[slot->second].box.area()) slot->second = i;
        }
    }

    for (const auto& [cell, i] : owner) {
        const Detection& d = it->second[i];
        const QuantizedCenter& q = centers[i];
        draw_gaussian_max(maps.heat, q.cell_x, q.cell_y, gaussian_sigma(d.box.width(), d.box.height(), grid), d.score);
        maps.offsets(0, q.cell_y, q.cell_x) = q.offset_x;
        maps.offsets(1, q.cell_y, q.cell_x) = q.offset_y;
        maps.sizes(0, q.cell_y, q.cell_x) = d.box.width();
        maps.sizes(1, q.cell_y, q.cell_x) = d.box.height();
        for (int c = 0; c < seq.config.emb_dim; ++c) {
            maps.embeddings(c, q.cell_y, q.cell_x) = d.embedding[static_cast<std::size_t>(c)];
        }
    }
    return maps;
}

SimMaps generate_maps(const SimConfig& cfg, int frame) {
    if (frame < 1 || frame > cfg.frames) throw ValidationError("generate_maps: frame outside the sequence");
    return generate_maps(generate(cfg), frame, GridSpec{cfg.image_w, cfg.image_h, 4});
}

}  // namespace fairtrack
