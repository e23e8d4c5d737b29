#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fairtrack/errors.hpp"

namespace fs = std::filesystem;

namespace fairtrack::cli {

namespace {

int default_threads() {
    const char* env = std::getenv("FAIRTRACK_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    try {
        const int n = std::stoi(env);
        if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw ValidationError("FAIRTRACK_THREADS must be a positive integer");
}

int replay(const fs::path& manifest_path, bool check) {
    const RunManifest stored = read_manifest(manifest_path);
    if (stored.args.empty()) throw ValidationError("replay: manifest has no recorded arguments");
    if (stored.args.front() == "replay") throw ValidationError("replay: refusing to replay a replay");

    const int code = run_cli(stored.args);
    if (code != 0 || !check) return code;

    int mismatches = 0;
    for (const auto& out : stored.outputs) {
        if (!fs::exists(out.path)) {
            std::cerr << "replay: missing output " << out.path << "\n";
            ++mismatches;
            continue;
        }
        const OutputRecord now = fingerprint(out.path);
        if (now.size != out.size || now.fnv1a64 != out.fnv1a64) {
            std::cerr << "replay: output differs " << out.path << "\n";
            ++mismatches;
        }
    }
    std::cout << "replay: " << stored.outputs.size() - static_cast<std::size_t>(mismatches) << "/" << stored.outputs.size()
              << " outputs identical\n";
    return mismatches == 0 ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Joint detection and re-ID tracking toolkit", "fairtrack"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    app.set_version_flag("--version", std::string(kToolkitVersion));

    int threads = 0;
    std::optional<fs::path> manifest_path;
    app.add_option("--threads", threads, "Worker threads for per-frame work (default: FAIRTRACK_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--manifest", manifest_path, "Where to write the run manifest");

    SimOptions sim;
    auto* sim_cmd = app.add_subcommand("sim", "Generate a synthetic sequence with ground truth and detections");
    sim_cmd->add_option("--out", sim.out, "Output directory")->required();
    sim_cmd->add_option("--config", sim.config, "key = value config file")->check(CLI::ExistingFile);
    sim_cmd->add_option("--seed", sim.seed, "Random seed");
    sim_cmd->add_option("--frames", sim.frames, "Sequence length");
    sim_cmd->add_option("--targets", sim.targets, "Number of targets");
    sim_cmd->add_option("--box-noise", sim.box_noise, "Box corner noise std in pixels");
    sim_cmd->add_option("--emb-noise", sim.emb_noise, "Embedding noise std");
    sim_cmd->add_option("--dropout", sim.dropout, "Detection dropout probability");
    sim_cmd->add_option("--fp-rate", sim.fp_rate, "Mean false positives per frame");
    sim_cmd->add_option("--emb-dim", sim.emb_dim, "Embedding dimension");
    sim_cmd->add_flag("--crossing", sim.crossing, "Make targets cross in pairs");
    sim_cmd->add_flag("--maps", sim.maps, "Also write synthetic network output maps");

    EncodeOptions enc;
    auto* enc_cmd = app.add_subcommand("encode", "Encode ground truth into training target maps");
    enc_cmd->add_option("--gt", enc.gt, "MOT ground-truth file")->required();
    enc_cmd->add_option("--out", enc.out, "Output directory")->required();
    enc_cmd->add_option("--image-w", enc.image_w, "Input width");
    enc_cmd->add_option("--image-h", enc.image_h, "Input height");
    enc_cmd->add_option("--stride", enc.stride, "Feature stride");
    enc_cmd->add_option("--num-ids", enc.num_ids, "Identity classes (default: max id)");

    DecodeOptions dec;
    auto* dec_cmd = app.add_subcommand("decode", "Decode heatmap/offset/size maps into detections");
    dec_cmd->add_option("--in", dec.in, "Directory of <frame>.heat/.off/.size[/.emb].ften")->required();
    dec_cmd->add_option("--out", dec.out, "Output directory")->required();
    dec_cmd->add_option("--image-w", dec.image_w, "Input width");
    dec_cmd->add_option("--image-h", dec.image_h, "Input height");
    dec_cmd->add_option("--stride", dec.stride, "Feature stride");
    dec_cmd->add_option("--threshold", dec.threshold, "Peak score threshold");
    dec_cmd->add_option("--top-k", dec.top_k, "Maximum detections per frame");
    dec_cmd->add_option("--sampling", dec.sampling, "Embedding sampling: center or center-bi");

    TrackOptions trk;
    auto* trk_cmd = app.add_subcommand("track", "Run the online tracker over per-frame detections");
    trk_cmd->add_option("--in", trk.in, "Sequence directory (det.txt, emb/, seqinfo.ini)");
    trk_cmd->add_option("--dets", trk.dets, "Detection file");
    trk_cmd->add_option("--emb", trk.emb, "Directory of <frame>.emb.ften");
    trk_cmd->add_option("--out", trk.out, "Result file (MOT format)")->required();
    trk_cmd->add_option("--config", trk.config, "key = value config file")->check(CLI::ExistingFile);
    trk_cmd->add_flag("--no-reid", trk.no_reid, "Disable appearance matching");
    trk_cmd->add_flag("--no-iou", trk.no_iou, "Disable the IoU matching stage");
    trk_cmd->add_flag("--no-kalman", trk.no_kalman, "Disable motion prediction and gating");

    EvalOptions ev;
    auto* ev_cmd = app.add_subcommand("eval", "Score tracking results against ground truth");
    ev_cmd->add_option("--gt", ev.gt, "MOT ground-truth file")->required();
    ev_cmd->add_option("--pred", ev.pred, "MOT result file")->required();
    ev_cmd->add_option("--metrics", ev.metrics, "Comma list of clear, idf1, ap");
    ev_cmd->add_option("--iou", ev.iou, "Match IoU threshold");
    ev_cmd->add_flag("--json", ev.json, "Print one JSON object");
    ev_cmd->add_option("--out", ev.out, "Also write the report here");

    GradcheckCliOptions gc;
    auto* gc_cmd = app.add_subcommand("gradcheck", "Compare analytic loss gradients with finite differences");
    gc_cmd->add_option("--seed", gc.seed, "Fixture seed");
    gc_cmd->add_option("--fixtures", gc.fixtures, "Number of random fixtures")->check(CLI::PositiveNumber);
    gc_cmd->add_option("--max-size", gc.max_size, "Largest map side")->check(CLI::Range(2, 64));
    gc_cmd->add_option("--max-ids", gc.max_ids, "Largest identity count")->check(CLI::Range(1, 1024));
    gc_cmd->add_option("--step", gc.step, "Central difference step")->check(CLI::PositiveNumber);
    gc_cmd->add_option("--tolerance", gc.tolerance, "Largest allowed relative error")->check(CLI::PositiveNumber);

    ReidEvalOptions re;
    auto* re_cmd = app.add_subcommand("reid-eval", "TPR at fixed FAR for embeddings of a sequence directory");
    re_cmd->add_option("--in", re.in, "Sequence directory (gt.txt, det.txt, emb/)")->required();
    re_cmd->add_option("--far", re.far, "False accept rates")->expected(1, -1);
    re_cmd->add_option("--iou", re.iou, "IoU needed to label a detection");
    re_cmd->add_option("--out", re.out, "Also write the report here");

    fs::path replay_manifest;
    bool replay_check = false;
    auto* rp_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    rp_cmd->add_option("manifest", replay_manifest, "Manifest file")->required()->check(CLI::ExistingFile);
    rp_cmd->add_flag("--check", replay_check, "Fail if any output differs from the recorded digest");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (*rp_cmd) return replay(replay_manifest, replay_check);

    if (threads == 0) threads = default_threads();
    const std::string name = app.get_subcommands().front()->get_name();
    RunContext ctx(name, args, threads);
    int code = 0;
    if (*sim_cmd) code = cmd_sim(sim, ctx, manifest_path);
    if (*enc_cmd) code = cmd_encode(enc, ctx, manifest_path);
    if (*dec_cmd) code = cmd_decode(dec, ctx, manifest_path);
    if (*trk_cmd) code = cmd_track(trk, ctx, manifest_path);
    if (*ev_cmd) code = cmd_eval(ev, ctx, manifest_path);
    if (*gc_cmd) code = cmd_gradcheck(gc, ctx);
    if (*re_cmd) code = cmd_reid_eval(re, ctx, manifest_path);
    ctx.finish(manifest_path);
    return code;
}

}  // namespace fairtrack::cli

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return fairtrack::cli::run_cli(args);
    } catch (const fairtrack::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const fairtrack::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fairtrack::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
