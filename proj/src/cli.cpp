#include "obench/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <regex>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "obench/coords.hpp"
#include "obench/error.hpp"
#include "obench/evaluate.hpp"
#include "obench/grid_io.hpp"
#include "obench/obs_sim.hpp"
#include "obench/patcher.hpp"
#include "obench/physvars.hpp"
#include "obench/pipeline.hpp"
#include "obench/report.hpp"

namespace obench {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void log(const std::string& msg) { fmt::print(stderr, "obench: {}\n", msg); }

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
    } else {
        write_file(out, text);
    }
}

PatchSpec load_spec(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') return PatchSpec::from_json(arg);
    return PatchSpec::from_json(read_file(arg));
}

TrackPattern load_pattern(const std::string& arg) {
    if (arg == "nadir-4sat" || arg == "swot-like") return TrackPattern::preset(arg);
    if (fs::path(arg).extension() == ".json") return TrackPattern::from_json(read_file(arg));
    return TrackPattern::preset(arg);
}

struct PipelineArgs {
    std::string config, input, output, manifest;
    std::vector<std::string> vars;
};

void run_pipeline_cmd(const PipelineArgs& a) {
    PipelineVars overrides;
    for (const auto& kv : a.vars) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorKind::Usage, fmt::format("--var expects name=value, got '{}'", kv));
        overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    auto cfg = parse_config(read_file(a.config), overrides);
    if (!a.input.empty()) cfg.input = a.input;
    if (!a.output.empty()) cfg.output = a.output;
    if (!a.manifest.empty()) cfg.manifest = a.manifest;
    const auto result = run_pipeline(cfg);
    for (std::size_t i = 0; i < result.steps.size(); ++i)
        log(fmt::format("step {} {} {:.1f} ms", i, result.steps[i].op, result.steps[i].ms));
    if (!cfg.output.empty()) save_value(result.value, cfg.output);
    const std::string manifest_path =
        cfg.manifest ? *cfg.manifest : (cfg.output.empty() ? std::string() : cfg.output + ".manifest.json");
    if (!manifest_path.empty()) write_file(manifest_path, result.manifest().dump(2) + "\n");
}

struct EvalArgs {
    std::string ref, study, track, out, format = "md", experiment = "OSSE", algorithm;
    std::size_t segment_length = 256;
};

void run_eval_cmd(const EvalArgs& a) {
    const auto ref = read_grid(a.ref);
    const auto study = read_grid(a.study);
    EvalLabels labels{a.experiment, a.algorithm.empty() ? fs::path(a.study).stem().string() : a.algorithm};
    auto report = evaluate_grid(ref, study, labels);
    if (!a.track.empty()) evaluate_track(report, study, read_track(a.track, study.epoch()), a.segment_length);
    emit(a.out, render_report({report}, parse_report_format(a.format)));
}

void run_simulate_cmd(const std::string& ref_path, const std::string& pattern_arg, double noise_std,
                      std::uint64_t seed, const std::string& out) {
    const auto ref = validate_time(validate_latlon(read_grid(ref_path)), read_grid(ref_path).epoch());
    const auto pattern = load_pattern(pattern_arg);
    DomainBox box;
    box.lat = {ref.lat().front(), ref.lat().back()};
    box.lon = {ref.lon().front(), ref.lon().back()};
    const auto points = generate_tracks(pattern, box, {ref.time().front(), ref.time().back()});
    NoiseSpec noise;
    noise.kind = noise_std > 0.0 ? NoiseKind::Gaussian : NoiseKind::None;
    noise.std = noise_std;
    noise.seed = seed;
    const auto sampled = sample_field(ref, points, noise);
    log(fmt::format("simulated {} observations ({} outside the field dropped)", sampled.track.size(), sampled.dropped));
    write_track(sampled.track, out);
}

std::string patch_name(std::size_t i) { return fmt::format("patch_{:06d}.obg", i); }

}  // namespace

int cli_dispatch(int argc, const char* const* argv) {
    CLI::App app{"Benchmarking toolkit for gridded sea surface height fields", "obench"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    PipelineArgs pa;
    auto* pipeline = app.add_subcommand("pipeline", "Run a declarative pipeline config");
    pipeline->add_option("--config", pa.config, "Pipeline config (YAML)")->required();
    pipeline->add_option("--var", pa.vars, "Override a config variable, name=value");
    pipeline->add_option("--input", pa.input, "Override the config input");
    pipeline->add_option("--output", pa.output, "Override the config output");
    pipeline->add_option("--manifest", pa.manifest, "Manifest path (default <output>.manifest.json)");

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Score a reconstruction against a reference grid");
    eval->add_option("--ref", ea.ref, "Reference grid (.obg)")->required();
    eval->add_option("--study", ea.study, "Reconstruction grid (.obg)")->required();
    eval->add_option("--track", ea.track, "Withheld along-track observations (.csv)");
    eval->add_option("--out", ea.out, "Report path, - for stdout")->required();
    eval->add_option("--format", ea.format, "md, csv or json")->check(CLI::IsMember({"md", "markdown", "csv", "json"}));
    eval->add_option("--experiment", ea.experiment, "Experiment label");
    eval->add_option("--algorithm", ea.algorithm, "Algorithm label (default: study file stem)");
    eval->add_option("--segment-length", ea.segment_length, "Along-track segment length in samples");

    std::string dvar, din, dout;
    auto* derive_cmd = app.add_subcommand("derive", "Compute a physical variable from SSH");
    derive_cmd->add_option("--var", dvar, "sla, u, v, ke, vort, ens, strain or ow")->required();
    derive_cmd->add_option("--in", din, "SSH grid (.obg)")->required();
    derive_cmd->add_option("--out", dout, "Output grid (.obg)")->required();

    auto* patch = app.add_subcommand("patch", "Sliding-window patches");
    patch->require_subcommand(1);
    std::string p_in, p_spec, p_dir, p_like, p_out, p_weight = "uniform";
    auto* p_info = patch->add_subcommand("info", "Print patch count and geometry as JSON");
    p_info->add_option("--in", p_in, "Grid (.obg)")->required();
    p_info->add_option("--spec", p_spec, "Patch spec JSON file or inline JSON")->required();
    auto* p_extract = patch->add_subcommand("extract", "Write every patch as its own grid");
    p_extract->add_option("--in", p_in, "Grid (.obg)")->required();
    p_extract->add_option("--spec", p_spec, "Patch spec JSON file or inline JSON")->required();
    p_extract->add_option("--out-dir", p_dir, "Output directory")->required();
    auto* p_recon = patch->add_subcommand("reconstruct", "Average patches back onto a grid");
    p_recon->add_option("--like", p_like, "Template grid (.obg)")->required();
    p_recon->add_option("--spec", p_spec, "Patch spec JSON file or inline JSON")->required();
    p_recon->add_option("--patches", p_dir, "Directory of patch_NNNNNN.obg files")->required();
    p_recon->add_option("--weight", p_weight, "uniform or triangular")->check(CLI::IsMember({"uniform", "triangular"}));
    p_recon->add_option("--out", p_out, "Output grid (.obg)")->required();

    std::string s_ref, s_pattern = "nadir-4sat", s_out;
    double s_noise = 0.0;
    std::uint64_t s_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "Sample pseudo-observations from a reference grid");
    simulate->add_option("--ref", s_ref, "Reference grid (.obg)")->required();
    simulate->add_option("--pattern", s_pattern, "nadir-4sat, swot-like or a pattern JSON file");
    simulate->add_option("--noise-std", s_noise, "Gaussian noise standard deviation (m)")->check(CLI::NonNegativeNumber);
    simulate->add_option("--seed", s_seed, "Noise seed");
    simulate->add_option("--out", s_out, "Track output (.csv)")->required();

    auto* report = app.add_subcommand("report", "Leaderboard reports");
    report->require_subcommand(1);
    std::vector<std::string> r_in;
    std::string r_out, r_format = "md";
    auto* merge = report->add_subcommand("merge", "Concatenate JSON reports into one table");
    merge->add_option("inputs", r_in, "Report JSON files")->required();
    merge->add_option("--out", r_out, "Output path, - for stdout");
    merge->add_option("--format", r_format, "md, csv or json")->check(CLI::IsMember({"md", "markdown", "csv", "json"}));

    EddyFieldSpec es;
    std::string e_out;
    auto* synth = app.add_subcommand("synth", "Write a synthetic eddy SSH field");
    synth->add_option("--out", e_out, "Output grid (.obg)")->required();
    synth->add_option("--nt", es.nt, "Time steps");
    synth->add_option("--ny", es.ny, "Latitude points");
    synth->add_option("--nx", es.nx, "Longitude points");
    synth->add_option("--eddies", es.eddies, "Number of eddies");
    synth->add_option("--seed", es.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, std::cout, std::cerr);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*pipeline) {
            run_pipeline_cmd(pa);
        } else if (*eval) {
            run_eval_cmd(ea);
        } else if (*derive_cmd) {
            write_grid(derive(read_grid(din), dvar), dout);
        } else if (*p_info) {
            const auto field = read_grid(p_in);
            const PatchGrid grid(load_spec(p_spec), field.shape());
            json j = {{"count", grid.count()},
                      {"patch_shape", grid.patch_shape()},
                      {"strides", grid.strides()},
                      {"counts", grid.counts()}};
            emit("-", j.dump() + "\n");
        } else if (*p_extract) {
            const auto field = read_grid(p_in);
            const auto spec = load_spec(p_spec);
            fs::create_directories(p_dir);
            std::size_t n = 0;
            for (const auto& view : iter_patches(spec, field)) {
                write_grid(GriddedField(field.var(), field.units(), view.time, view.lat, view.lon, view.data,
                                        field.epoch(), field.attrs()),
                           fs::path(p_dir) / patch_name(view.index));
                ++n;
            }
            write_file(fs::path(p_dir) / "spec.json", spec.to_json() + "\n");
            log(fmt::format("wrote {} patches to {}", n, p_dir));
        } else if (*p_recon) {
            const auto like = read_grid(p_like);
            const auto spec = load_spec(p_spec);
            static const std::regex name(R"(patch_(\d+)\.obg)");
            std::vector<std::pair<std::size_t, std::vector<double>>> patches;
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p_dir)) files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                std::smatch m;
                const auto fname = f.filename().string();
                if (!std::regex_match(fname, m, name)) continue;
                const auto g = read_grid(f);
                patches.emplace_back(std::stoull(m[1].str()), std::vector<double>(g.data().begin(), g.data().end()));
            }
            write_grid(reconstruct(spec, like, patches, parse_weight_mode(p_weight)), p_out);
        } else if (*simulate) {
            run_simulate_cmd(s_ref, s_pattern, s_noise, s_seed, s_out);
        } else if (*merge) {
            std::vector<EvalReport> all;
            for (const auto& f : r_in) {
                auto part = reports_from_json(read_file(f));
                all.insert(all.end(), part.begin(), part.end());
            }
            emit(r_out, render_report(all, parse_report_format(r_format)));
        } else if (*synth) {
            write_grid(make_eddy_field(es), e_out);
        }
    } catch (const Error& e) {
        log(fmt::format("error: {}", e.what()));
        return e.kind() == ErrorKind::Usage ? 2 : 1;
    } catch (const std::exception& e) {
        log(fmt::format("error: {}", e.what()));
        return 1;
    }
    return 0;
}

int cli_dispatch(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("obench");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace obench
