#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "fairtrack/errors.hpp"
#include "fairtrack/file_util.hpp"
#include "fairtrack/ften.hpp"
#include "fairtrack/gradcheck.hpp"
#include "fairtrack/metrics.hpp"
#include "fairtrack/mot_io.hpp"
#include "fairtrack/sim.hpp"
#include "fairtrack/simd/kernels.hpp"
#include "fairtrack/target_encoding.hpp"
#include "fairtrack/tracker.hpp"

namespace fs = std::filesystem;

namespace fairtrack::cli {

namespace {

std::mutex g_output_mutex;

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(n))));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

nlohmann::json config_json(const ToolkitConfig& cfg) {
    // dump_config is the canonical text form; mirror it key by key.
    nlohmann::json j = nlohmann::json::object();
    const std::string text = dump_config(cfg);
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string line = text.substr(pos, nl - pos);
        pos = nl == std::string::npos ? text.size() : nl + 1;
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 3);
        if (key == "occlusion") {
            j[key].push_back(value);
        } else {
            // Numbers and booleans keep their JSON type.
            auto parsed = nlohmann::json::parse(value, nullptr, false);
            j[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
        }
    }
    return j;
}

std::string seqinfo_text(const SimConfig& cfg) {
    char rate[32];
    std::snprintf(rate, sizeof rate, "%g", cfg.frame_rate);
    return "[Sequence]\nname=sim-seed" + std::to_string(cfg.seed) + "\nframeRate=" + rate +
           "\nseqLength=" + std::to_string(cfg.frames) + "\nimWidth=" + std::to_string(cfg.image_w) +
           "\nimHeight=" + std::to_string(cfg.image_h) + "\n";
}

// Reads seqLength from a seqinfo.ini-style file, if present.
std::optional<int> read_seq_length(const fs::path& dir) {
    const fs::path ini = dir / "seqinfo.ini";
    if (!fs::exists(ini)) return std::nullopt;
    const std::string text = read_file_text(ini);
    const auto key = text.find("seqLength=");
    if (key == std::string::npos) return std::nullopt;
    try {
        return std::stoi(text.substr(key + 10));
    } catch (const std::exception&) {
        throw FormatError("seqinfo.ini: bad seqLength", 0);
    }
}

Tensor2D embedding_rows(const std::vector<Detection>& dets) {
    const int dim = static_cast<int>(dets.front().embedding.size());
    Tensor2D t(static_cast<int>(dets.size()), dim);
    for (std::size_t i = 0; i < dets.size(); ++i) {
        if (static_cast<int>(dets[i].embedding.size()) != dim) throw ValidationError("ragged embeddings in a frame");
        std::copy(dets[i].embedding.begin(), dets[i].embedding.end(), t.row(static_cast<int>(i)).begin());
    }
    return t;
}

std::vector<int> frames_with_suffix(const fs::path& dir, const std::string& suffix) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::set<int> frames;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() <= suffix.size() || name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) {
            continue;
        }
        const std::string stem = name.substr(0, name.size() - suffix.size());
        if (stem.empty() || !std::all_of(stem.begin(), stem.end(), ::isdigit)) continue;
        frames.insert(std::stoi(stem));
    }
    return {frames.begin(), frames.end()};
}

}  // namespace

std::string frame_stem(int frame) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", frame);
    return buf;
}

RunContext::RunContext(std::string subcommand, std::vector<std::string> args, int threads)
    : threads_(std::max(1, threads)), started_(now_seconds()) {
    manifest_.subcommand = std::move(subcommand);
    manifest_.args = std::move(args);
    manifest_.simd = std::string(simd::isa_name(simd::kernels().isa));
}

void RunContext::record(const fs::path& path) {
    OutputRecord rec = fingerprint(path);
    std::lock_guard lock(g_output_mutex);
    manifest_.outputs.push_back(std::move(rec));
}

void RunContext::write_text(const fs::path& path, std::string_view text) {
    write_file_atomic(path, text);
    record(path);
}

void RunContext::write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    write_file_atomic(path, bytes);
    record(path);
}

void RunContext::add_input(const fs::path& path) {
    std::lock_guard lock(g_output_mutex);
    manifest_.inputs.push_back(path.string());
}

void RunContext::finish(const std::optional<fs::path>& manifest_path) {
    std::sort(manifest_.outputs.begin(), manifest_.outputs.end(),
              [](const OutputRecord& a, const OutputRecord& b) { return a.path < b.path; });
    manifest_.wall_seconds = now_seconds() - started_;
    if (manifest_path) write_manifest(*manifest_path, manifest_);
}

int cmd_sim(const SimOptions& o, RunContext& ctx, std::optional<fs::path>& manifest_path) {
    ToolkitConfig cfg;
    if (o.config) {
        cfg = load_config(*o.config);
        ctx.add_input(*o.config);
    }
    SimConfig& s = cfg.sim;
    if (o.seed) s.seed = *o.seed;
    if (o.frames) s.frames = *o.frames;
    if (o.targets) s.num_targets = *o.targets;
    if (o.box_noise) s.box_noise_std = *o.box_noise;
    if (o.emb_noise) s.emb_noise_std = *o.emb_noise;
    if (o.dropout) s.det_dropout_prob = *o.dropout;
    if (o.fp_rate) s.fp_rate = *o.fp_rate;
    if (o.emb_dim) s.emb_dim = *o.emb_dim;
    if (o.crossing) s.crossing = true;

    const SimSequence seq = generate(s);
    ctx.manifest().seed = s.seed;
    ctx.manifest().config = config_json(cfg);

    ctx.write_text(o.out / "gt.txt", serialize_gt(from_frame_boxes(seq.gt)));

    MotFile det;
    for (const auto& [frame, dets] : seq.detections) {
        auto& rows = det[frame];
        for (const auto& d : dets) {
            MotRecord r;
            r.frame = frame;
            r.id = -1;
            r.bb_left = d.box.x1;
            r.bb_top = d.box.y1;
            r.bb_width = d.box.width();
            r.bb_height = d.box.height();
            r.conf = d.score;
            rows.push_back(r);
        }
    }
    ctx.write_text(o.out / "det.txt", serialize_results(det));
    ctx.write_text(o.out / "seqinfo.ini", seqinfo_text(s));

    std::vector<int> frames;
    for (const auto& [frame, dets] : seq.detections) frames.push_back(frame);
    const GridSpec grid{s.image_w, s.image_h, 4};
    parallel_for(frames.size(), ctx.threads(), [&](std::size_t i) {
        const int frame = frames[i];
        const auto& dets = seq.detections.at(frame);
        if (!dets.empty()) {
            ctx.write_bytes(o.out / "emb" / (frame_stem(frame) + ".emb.ften"), encode_ften(embedding_rows(dets)));
        }
        if (o.maps) {
            const SimMaps maps = generate_maps(seq, frame, grid);
            const fs::path base = o.out / "maps" / frame_stem(frame);
            ctx.write_bytes(fs::path(base.string() + ".heat.ften"), encode_ften(maps.heat));
            ctx.write_bytes(fs::path(base.string() + ".off.ften"), encode_ften(maps.offsets));
            ctx.write_bytes(fs::path(base.string() + ".size.ften"), encode_ften(maps.sizes));
            ctx.write_bytes(fs::path(base.string() + ".emb.ften"), encode_ften(maps.embeddings));
        }
    });

    manifest_path = manifest_path.value_or(o.out / "manifest.json");
    std::cout << "sim: " << s.frames << " frames, " << s.num_targets << " targets -> " << o.out.string() << "\n";
    return 0;
}

int cmd_encode(const EncodeOptions& o, RunContext& ctx, std::optional<fs::path>& manifest_path) {
    const GridSpec grid{o.image_w, o.image_h, o.stride};
    grid.validate();
    const MotFile gt = read_mot(o.gt, MotKind::Gt);
    ctx.add_input(o.gt);

    int max_id = 0;
    for (const auto& [frame, rows] : gt) {
        for (const auto& r : rows) {
            if (r.id < 1) throw ValidationError("encode: ground-truth ids must be >= 1 (frame " + std::to_string(frame) + ")");
            max_id = std::max(max_id, r.id);
        }
    }
    const int num_ids = o.num_ids.value_or(std::max(1, max_id));
    ctx.manifest().config = {{"image_w", o.image_w}, {"image_h", o.image_h}, {"stride", o.stride}, {"num_ids", num_ids}};

    std::vector<int> frames;
    for (const auto& [frame, rows] : gt) frames.push_back(frame);
    std::vector<std::string> center_lines(frames.size());
    std::vector<std::string> warnings(frames.size());

    parallel_for(frames.size(), ctx.threads(), [&](std::size_t i) {
        const int frame = frames[i];
        std::vector<GtObject> objects;
        for (const auto& r : gt.at(frame)) objects.push_back({r.box(), r.id - 1});
        const TargetMaps maps = encode_targets(objects, grid, num_ids);
        const fs::path base = o.out / frame_stem(frame);
        ctx.write_bytes(fs::path(base.string() + ".heat.ften"), encode_ften(maps.heatmap));
        ctx.write_bytes(fs::path(base.string() + ".off.ften"), encode_ften(maps.offsets));
        ctx.write_bytes(fs::path(base.string() + ".size.ften"), encode_ften(maps.sizes));
        for (const auto& obj : maps.objects) {
            center_lines[i] += std::to_string(frame) + "," + std::to_string(obj.cell_x) + "," + std::to_string(obj.cell_y) +
                               "," + std::to_string(obj.identity) + "\n";
        }
        for (const auto& d : maps.dropped) warnings[i] += "frame " + std::to_string(frame) + ": " + d + "\n";
        if (maps.collisions > 0) {
            warnings[i] += "frame " + std::to_string(frame) + ": " + std::to_string(maps.collisions) + " center collision(s)\n";
        }
    });

    std::string centers;
    for (const auto& s : center_lines) centers += s;
    ctx.write_text(o.out / "centers.txt", centers);
    for (const auto& w : warnings) std::cerr << w;

    manifest_path = manifest_path.value_or(o.out / "manifest.json");
    std::cout << "encode: " << frames.size() << " frames -> " << o.out.string() << "\n";
    return 0;
}

int cmd_decode(const DecodeOptions& o, RunContext& ctx, std::optional<fs::path>& manifest_path) {
    const GridSpec grid{o.image_w, o.image_h, o.stride};
    grid.validate();
    DecodeParams params;
    params.threshold = o.threshold;
    params.top_k = o.top_k;
    if (o.sampling == "center") {
        params.sampling = Sampling::Center;
    } else if (o.sampling == "center-bi") {
        params.sampling = Sampling::CenterBI;
    } else {
        throw ValidationError("decode: --sampling must be center or center-bi");
    }
    if (!(params.threshold > 0.0 && params.threshold < 1.0)) throw ValidationError("decode: threshold must lie in (0, 1)");
    ctx.manifest().config = {{"image_w", o.image_w}, {"image_h", o.image_h}, {"stride", o.stride},
                             {"threshold", o.threshold}, {"top_k", o.top_k}, {"sampling", o.sampling}};
    ctx.add_input(o.in);

    const std::vector<int> frames = frames_with_suffix(o.in, ".heat.ften");
    std::vector<std::string> lines(frames.size());
    parallel_for(frames.size(), ctx.threads(), [&](std::size_t i) {
        const int frame = frames[i];
        const std::string base = (o.in / frame_stem(frame)).string();
        const Tensor2D heat = read_tensor2d(base + ".heat.ften");
        const Tensor3D off = read_tensor3d(base + ".off.ften");
        const Tensor3D size = read_tensor3d(base + ".size.ften");
        std::optional<Tensor3D> emb;
        if (fs::exists(base + ".emb.ften")) emb = read_tensor3d(base + ".emb.ften");

        const std::vector<Detection> dets = decode(heat, off, size, emb ? &*emb : nullptr, grid, params);
        for (const auto& d : dets) {
            lines[i] += std::to_string(frame) + "," + format_fixed2(d.score) + "," + format_fixed2(d.box.x1) + "," +
                        format_fixed2(d.box.y1) + "," + format_fixed2(d.box.x2) + "," + format_fixed2(d.box.y2) + "\n";
        }
        const bool all_emb = !dets.empty() && std::all_of(dets.begin(), dets.end(), [](const Detection& d) { return d.has_embedding(); });
        if (all_emb) {
            ctx.write_bytes(o.out / "emb" / (frame_stem(frame) + ".emb.ften"), encode_ften(embedding_rows(dets)));
        }
    });
    std::string text;
    for (const auto& l : lines) text += l;
    ctx.write_text(o.out / "detections.txt", text);

    manifest_path = manifest_path.value_or(o.out / "manifest.json");
    std::cout << "decode: " << frames.size() << " frames -> " << o.out.string() << "\n";
    return 0;
}

std::map<int, std::vector<Detection>> load_detections(const fs::path& dets_path,
                                                      const std::optional<fs::path>& emb_dir) {
    const std::string text = read_file_text(dets_path);
    std::map<int, std::vector<Detection>> out;

    // The decoder writes 6-field lines; anything else must be MOT det format.
    std::size_t first = 0;
    while (first < text.size() && (text[first] == '\n' || text[first] == '\r' || text[first] == ' ')) ++first;
    const auto eol = text.find('\n', first);
    const std::string head = text.substr(first, eol == std::string::npos ? std::string::npos : eol - first);
    const auto fields = std::count(head.begin(), head.end(), ',') + 1;

    if (!head.empty() && fields == 6) {
        std::size_t pos = 0;
        std::size_t line_no = 0;
        while (pos < text.size()) {
            const auto nl = text.find('\n', pos);
            std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
            pos = nl == std::string::npos ? text.size() : nl + 1;
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            int frame = 0;
            double score = 0, x1 = 0, y1 = 0, x2 = 0, y2 = 0;
            char tail = 0;
            if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf%c", &frame, &score, &x1, &y1, &x2, &y2, &tail) < 6 ||
                (tail != 0 && tail != '\r') || frame < 1) {
                throw FormatError("detections: malformed line", line_no);
            }
            Detection d;
            d.box = {x1, y1, x2, y2};
            d.score = score;
            out[frame].push_back(std::move(d));
        }
    } else {
        for (const auto& [frame, rows] : parse_mot(text, MotKind::Det)) {
            auto& list = out[frame];
            for (const auto& r : rows) {
                Detection d;
                d.box = r.box();
                d.score = r.conf;
                list.push_back(std::move(d));
            }
        }
    }

    if (emb_dir) {
        for (auto& [frame, list] : out) {
            const fs::path p = *emb_dir / (frame_stem(frame) + ".emb.ften");
            if (!fs::exists(p)) continue;
            const Tensor2D rows = read_tensor2d(p);
            if (rows.height() != static_cast<int>(list.size())) {
                throw FormatError("embedding rows do not match detections in frame " + std::to_string(frame), 8);
            }
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto r = rows.row(static_cast<int>(i));
                list[i].embedding.assign(r.begin(), r.end());
                if (!normalize(list[i].embedding)) list[i].embedding.clear();
            }
        }
    }
    return out;
}

int cmd_track(const TrackOptions& o, RunContext& ctx, std::optional<fs::path>& manifest_path) {
    ToolkitConfig cfg;
    if (o.config) {
        cfg = load_config(*o.config);
        ctx.add_input(*o.config);
    }
    if (o.no_reid) cfg.tracker.use_reid = false;
    if (o.no_iou) cfg.tracker.use_iou = false;
    if (o.no_kalman) cfg.tracker.use_kalman = false;
    cfg.tracker.validate();

    fs::path dets_path;
    std::optional<fs::path> emb_dir = o.emb;
    int frames = 0;
    if (o.in) {
        dets_path = *o.in / "det.txt";
        if (!emb_dir && fs::is_directory(*o.in / "emb")) emb_dir = *o.in / "emb";
        frames = read_seq_length(*o.in).value_or(0);
    } else if (o.dets) {
        dets_path = *o.dets;
    } else {
        throw ValidationError("track: give --in DIR or --dets FILE");
    }
    ctx.add_input(dets_path);
    if (emb_dir) ctx.add_input(*emb_dir);

    const auto dets = load_detections(dets_path, emb_dir);
    if (!dets.empty()) frames = std::max(frames, dets.rbegin()->first);
    if (cfg.tracker.use_reid) {
        const bool complete = std::all_of(dets.begin(), dets.end(), [](const auto& kv) {
            return std::all_of(kv.second.begin(), kv.second.end(), [](const Detection& d) { return d.has_embedding(); });
        });
        if (!complete) {
            std::cerr << "track: some detections have no embedding; appearance matching disabled\n";
            cfg.tracker.use_reid = false;
        }
    }

    nlohmann::json tracker_cfg = config_json(cfg);
    ctx.manifest().config = nlohmann::json::object();
    for (const char* key : {"det_threshold", "emb_match_threshold", "iou_match_threshold", "track_buffer", "ema_momentum",
                            "gate_chi2", "use_reid", "use_iou", "use_kalman"}) {
        ctx.manifest().config[key] = tracker_cfg[key];
    }

    OnlineTracker tracker(cfg.tracker);
    MotFile results;
    const std::vector<Detection> none;
    for (int frame = 1; frame <= frames; ++frame) {
        const auto it = dets.find(frame);
        const auto outputs = tracker.step(frame, it == dets.end() ? none : it->second);
        for (const auto& t : outputs) {
            MotRecord r;
            r.frame = frame;
            r.id = t.track_id;
            r.bb_left = t.box.x1;
            r.bb_top = t.box.y1;
            r.bb_width = t.box.width();
            r.bb_height = t.box.height();
            r.conf = t.score;
            results[frame].push_back(r);
        }
    }
    ctx.write_text(o.out, serialize_results(results));
    manifest_path = manifest_path.value_or(fs::path(o.out.string() + ".manifest.json"));
    std::cout << "track: " << frames << " frames -> " << o.out.string() << "\n";
    return 0;
}

int cmd_eval(const EvalOptions& o, RunContext& ctx, std::optional<fs::path>& manifest_path) {
    std::set<std::string> wanted;
    std::size_t pos = 0;
    while (pos <= o.metrics.size()) {
        const auto comma = o.metrics.find(',', pos);
        const std::string m = o.metrics.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (m != "clear" && m != "idf1" && m != "ap") throw ValidationError("eval: unknown metric '" + m + "'");
        wanted.insert(m);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (!(o.iou > 0.0 && o.iou <= 1.0)) throw ValidationError("eval: --iou must lie in (0, 1]");

    const FrameBoxes gt = to_frame_boxes(read_mot(o.gt, MotKind::Gt));
    const FrameBoxes pred = to_frame_boxes(read_mot(o.pred, MotKind::Result));
    ctx.add_input(o.gt);
    ctx.add_input(o.pred);
    ctx.manifest().config = {{"metrics", o.metrics}, {"iou", o.iou}};

    MetricsReport r;
    if (wanted.count("clear")) r = clear_mot(gt, pred, o.iou);
    if (wanted.count("idf1")) {
        const MetricsReport id = idf1(gt, pred, o.iou);
        r.idf1 = id.idf1;
        r.idp = id.idp;
        r.idr = id.idr;
        r.idtp = id.idtp;
        r.idfp = id.idfp;
        r.idfn = id.idfn;
    }
    if (wanted.count("ap")) r.ap = detection_ap(gt, pred, o.iou);

    auto real = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", v);
        return std::string(buf);
    };
    std::string text;
    nlohmann::json j = nlohmann::json::object();
    auto put_real = [&](const char* k, double v) {
        text += std::string(k) + "=" + real(v) + "\n";
        j[k] = v;
    };
    auto put_int = [&](const char* k, long v) {
        text += std::string(k) + "=" + std::to_string(v) + "\n";
        j[k] = v;
    };
    if (wanted.count("clear")) {
        put_real("mota", r.mota);
        put_real("motp", r.motp);
        put_int("id_switches", r.id_switches);
        put_int("fp", r.fp);
        put_int("fn", r.fn);
        put_int("num_gt", r.total_gt);
        put_int("gt_tracks", r.gt_tracks);
        put_int("mt", r.mostly_tracked);
        put_int("ml", r.mostly_lost);
        put_real("mt_ratio", r.mt_ratio);
        put_real("ml_ratio", r.ml_ratio);
    }
    if (wanted.count("idf1")) {
        put_real("idf1", r.idf1);
        put_real("idp", r.idp);
        put_real("idr", r.idr);
        put_int("idtp", r.idtp);
        put_int("idfp", r.idfp);
        put_int("idfn", r.idfn);
    }
    if (r.ap) put_real("ap", *r.ap);

    const std::string printed = o.json ? j.dump() + "\n" : text;
    std::cout << printed;
    if (o.out) {
        ctx.write_text(*o.out, printed);
        manifest_path = manifest_path.value_or(fs::path(o.out->string() + ".manifest.json"));
    }
    return 0;
}

int cmd_gradcheck(const GradcheckCliOptions& o, RunContext& ctx) {
    GradcheckOptions opts;
    opts.seed = o.seed;
    opts.fixtures = o.fixtures;
    opts.max_size = o.max_size;
    opts.max_identities = o.max_ids;
    opts.step = o.step;
    opts.tolerance = o.tolerance;
    ctx.manifest().seed = o.seed;
    ctx.manifest().config = {{"fixtures", o.fixtures}, {"max_size", o.max_size}, {"max_ids", o.max_ids},
                             {"step", o.step}, {"tolerance", o.tolerance}};

    const GradcheckReport report = run_gradcheck(opts);
    for (const auto& e : report.entries) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-8s worst_rel_error=%.3e checked=%ld %s\n", e.name.c_str(), e.worst_rel_error,
                      e.checked, e.worst_rel_error <= o.tolerance ? "ok" : "FAIL");
        std::cout << buf;
    }
    std::cout << (report.passed ? "gradcheck passed\n" : "gradcheck FAILED\n");
    return report.passed ? 0 : 1;
}

int cmd_reid_eval(const ReidEvalOptions& o, RunContext& ctx, std::optional<fs::path>& manifest_path) {
    const FrameBoxes gt = to_frame_boxes(read_mot(o.in / "gt.txt", MotKind::Gt));
    const auto dets = load_detections(o.in / "det.txt", o.in / "emb");
    ctx.add_input(o.in);
    ctx.manifest().config = {{"far", o.far}, {"iou", o.iou}};

    // Each detection takes the identity of the ground-truth box it overlaps best.
    std::vector<LabelledEmbedding> samples;
    for (const auto& [frame, list] : dets) {
        const auto g = gt.find(frame);
        if (g == gt.end()) continue;
        CostMatrix cost(static_cast<int>(list.size()), static_cast<int>(g->second.size()));
        for (std::size_t i = 0; i < list.size(); ++i) {
            for (std::size_t j = 0; j < g->second.size(); ++j) {
                const double ov = iou(list[i].box, g->second[j].box);
                cost(static_cast<int>(i), static_cast<int>(j)) = ov >= o.iou ? 1.0 - ov : kInfiniteCost;
            }
        }
        for (auto [i, j] : hungarian(cost, 1.0).matches) {
            const auto& d = list[static_cast<std::size_t>(i)];
            if (d.has_embedding()) samples.push_back({frame, g->second[static_cast<std::size_t>(j)].id, d.embedding});
        }
    }
    const ReidPairs pairs = build_reid_pairs(samples);
    std::string text = "samples=" + std::to_string(samples.size()) + "\ngenuine_pairs=" + std::to_string(pairs.genuine.size()) +
                       "\nimpostor_pairs=" + std::to_string(pairs.impostor.size()) + "\n";
    for (double far : o.far) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "tpr_at_far_%g=%.6f\n", far, tpr_at_far(pairs.genuine, pairs.impostor, far));
        text += buf;
    }
    std::cout << text;
    if (o.out) {
        ctx.write_text(*o.out, text);
        manifest_path = manifest_path.value_or(fs::path(o.out->string() + ".manifest.json"));
    }
    return 0;
}

}  // namespace fairtrack::cli
