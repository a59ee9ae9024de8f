#include "obench/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <regex>

#include <fmt/format.h>

#include "obench/coords.hpp"
#include "obench/error.hpp"
#include "obench/grid_io.hpp"
#include "obench/hashing.hpp"
#include "obench/physvars.hpp"
#include "obench/regrid.hpp"
#include "obench/yaml_subset.hpp"

namespace obench {

using json = nlohmann::json;

std::string to_string(ValueKind kind) {
    switch (kind) {
        case ValueKind::Grid: return "grid";
        case ValueKind::Track: return "track";
        case ValueKind::Spectrum: return "spectrum";
        case ValueKind::Report: return "report";
    }
    return "?";
}

ValueKind kind_of(const Value& v) { return static_cast<ValueKind>(v.index()); }

std::string canonical_bytes(const Value& v) {
    switch (kind_of(v)) {
        case ValueKind::Grid: return encode_grid(std::get<GriddedField>(v));
        case ValueKind::Track: return encode_track(std::get<AlongTrackSet>(v));
        case ValueKind::Spectrum: {
            const auto& s = std::get<SpectrumValue>(v);
            std::string out = s.psd.to_csv();
            if (s.score) out += "\n" + s.score->to_csv();
            return out;
        }
        case ValueKind::Report: return report_to_json({std::get<EvalReport>(v)});
    }
    return {};
}

std::string content_hash(const Value& v) { return sha256_hex(canonical_bytes(v)); }

ValueKind kind_for_path(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".obg") return ValueKind::Grid;
    if (ext == ".csv") return ValueKind::Track;
    if (ext == ".json") return ValueKind::Report;
    fail(fmt::format("cannot tell the value kind of '{}' (expected .obg, .csv or .json)", path.string()));
}

Value load_value(const std::filesystem::path& path) {
    switch (kind_for_path(path)) {
        case ValueKind::Grid: return read_grid(path);
        case ValueKind::Track: return read_track(path);
        case ValueKind::Report: {
            auto reports = reports_from_json(read_file(path));
            if (reports.size() != 1) fail_parse("report", "pipeline input must hold exactly one report");
            return reports.front();
        }
        default: break;
    }
    fail("unsupported pipeline input");
}

void save_value(const Value& v, const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    switch (kind_of(v)) {
        case ValueKind::Grid:
            if (ext != ".obg") fail(fmt::format("a grid output needs a .obg path, got '{}'", path.string()));
            write_grid(std::get<GriddedField>(v), path);
            return;
        case ValueKind::Track:
            if (ext != ".csv") fail(fmt::format("a track output needs a .csv path, got '{}'", path.string()));
            write_track(std::get<AlongTrackSet>(v), path);
            return;
        case ValueKind::Spectrum: {
            if (ext != ".csv") fail(fmt::format("a spectrum output needs a .csv path, got '{}'", path.string()));
            const auto& s = std::get<SpectrumValue>(v);
            write_file(path, s.score ? s.score->to_csv() : s.psd.to_csv());
            return;
        }
        case ValueKind::Report: {
            const std::vector<EvalReport> one{std::get<EvalReport>(v)};
            if (ext == ".json") write_file(path, report_to_json(one));
            else if (ext == ".md") write_file(path, render_report(one, ReportFormat::Markdown));
            else if (ext == ".csv") write_file(path, render_report(one, ReportFormat::Csv));
            else fail(fmt::format("a report output needs a .json, .md or .csv path, got '{}'", path.string()));
            return;
        }
    }
}

namespace {

enum class P { Number, Integer, String, Bool, NumberPair, StringPair };

struct ParamSpec {
    const char* name;
    P type;
    bool required = false;
};

struct Step;

struct RunContext {
    std::vector<const Step*> history;
    std::vector<json> params;  // parallel to history
};

using ApplyFn = std::function<Value(const Value&, const json&, const RunContext&)>;

struct Step {
    std::string name;
    std::vector<ValueKind> accepts;
    std::optional<ValueKind> yields;  // empty: same kind as the input
    std::vector<ParamSpec> params;
    ApplyFn apply;

    bool takes(ValueKind k) const { return std::find(accepts.begin(), accepts.end(), k) != accepts.end(); }
    ValueKind output(ValueKind in) const { return yields.value_or(in); }
};

double num(const json& p, const char* key, double fallback) { return p.contains(key) ? p[key].get<double>() : fallback; }

std::string str(const json& p, const char* key, const std::string& fallback) {
    return p.contains(key) ? p[key].get<std::string>() : fallback;
}

std::optional<std::pair<double, double>> num_pair(const json& p, const char* key) {
    if (!p.contains(key)) return std::nullopt;
    return std::make_pair(p[key][0].get<double>(), p[key][1].get<double>());
}

GriddedField grid_arg(const Value& v) { return std::get<GriddedField>(v); }
AlongTrackSet track_arg(const Value& v) { return std::get<AlongTrackSet>(v); }

SpectralOptions spectral_options(const json& p) {
    SpectralOptions o;
    if (p.contains("window")) o.window = p["window"].get<bool>();
    if (p.contains("detrend")) o.detrend = parse_detrend(p["detrend"].get<std::string>());
    if (p.contains("segment_length")) o.segment_length = p["segment_length"].get<std::size_t>();
    return o;
}

// Reference and target grids named by a step go through the same grid-to-grid
// steps that preceded it, so both sides share domain, geometry and units.
GriddedField replay_on_reference(GriddedField ref, const RunContext& ctx) {
    Value v = std::move(ref);
    RunContext before;
    for (std::size_t i = 0; i < ctx.history.size(); ++i) {
        const Step* s = ctx.history[i];
        if (s->takes(ValueKind::Grid) && s->output(ValueKind::Grid) == ValueKind::Grid)
            v = s->apply(v, ctx.params[i], before);
        before.history.push_back(s);
        before.params.push_back(ctx.params[i]);
    }
    return std::get<GriddedField>(std::move(v));
}

Value gridded_psd(const Value& v, const json& p, const RunContext& ctx, Geometry g) {
    const auto field = grid_arg(v);
    const auto opts = spectral_options(p);
    SpectrumValue out;
    if (!p.contains("reference")) {
        out.psd = psd(field, g, opts);
        return out;
    }
    const auto ref = replay_on_reference(read_grid(p["reference"].get<std::string>()), ctx);
    if (!(ref.shape() == field.shape()))
        fail(fmt::format("reference grid {}x{}x{} does not match the pipeline grid {}x{}x{}", ref.shape().nt,
                         ref.shape().ny, ref.shape().nx, field.shape().nt, field.shape().ny, field.shape().nx));
    const auto study = ref.with_data(std::vector<double>(field.data().begin(), field.data().end()));
    out.psd = psd(ref, g, opts);
    out.score = psd_score(ref, study, g, opts);
    return out;
}

std::vector<Step> build_registry() {
    const std::vector<ValueKind> grid_or_track{ValueKind::Grid, ValueKind::Track};
    const std::vector<ValueKind> grid_only{ValueKind::Grid};
    std::vector<Step> r;

    r.push_back({"validate_latlon", grid_or_track, std::nullopt, {}, [](const Value& v, const json&, const RunContext&) {
                     if (kind_of(v) == ValueKind::Grid) return Value(validate_latlon(grid_arg(v)));
                     return Value(validate_latlon(track_arg(v)));
                 }});
    r.push_back({"validate_time", grid_or_track, std::nullopt, {{"epoch", P::String}},
                 [](const Value& v, const json& p, const RunContext&) {
                     if (kind_of(v) == ValueKind::Grid) {
                         const auto g = grid_arg(v);
                         return Value(validate_time(g, p.contains("epoch") ? parse_iso(str(p, "epoch", "")) : g.epoch()));
                     }
                     const auto t = track_arg(v);
                     return Value(validate_time(t, p.contains("epoch") ? parse_iso(str(p, "epoch", "")) : t.epoch()));
                 }});
    r.push_back({"sel_domain", grid_or_track, std::nullopt,
                 {{"lat", P::NumberPair}, {"lon", P::NumberPair}, {"time", P::StringPair}},
                 [](const Value& v, const json& p, const RunContext&) {
                     DomainBox box;
                     box.lat = num_pair(p, "lat");
                     box.lon = num_pair(p, "lon");
                     if (p.contains("time"))
                         box.time = std::make_pair(parse_iso(p["time"][0].get<std::string>()),
                                                   parse_iso(p["time"][1].get<std::string>()));
                     if (kind_of(v) == ValueKind::Grid) return Value(sel_domain(grid_arg(v), box));
                     return Value(sel_domain(track_arg(v), box));
                 }});
    r.push_back({"subset_track", {ValueKind::Track}, std::nullopt,
                 {{"num_samples", P::Integer, true}, {"seed", P::Integer}},
                 [](const Value& v, const json& p, const RunContext&) {
                     return Value(subset_track(track_arg(v), p["num_samples"].get<std::size_t>(),
                                               p.value("seed", std::uint64_t{0})));
                 }});
    r.push_back({"regrid_to_grid", grid_or_track, ValueKind::Grid, {{"grid", P::String, true}},
                 [](const Value& v, const json& p, const RunContext& c) {
                     const auto target = TargetAxes::like(
                         replay_on_reference(validate_latlon(read_grid(p["grid"].get<std::string>())), c));
                     if (kind_of(v) == ValueKind::Grid) return Value(regrid_grid_to_grid(grid_arg(v), target));
                     return Value(regrid_to_grid(track_arg(v), target).field);
                 }});
    r.push_back({"regrid_to_track", grid_only, ValueKind::Track, {{"track", P::String, true}},
                 [](const Value& v, const json& p, const RunContext&) {
                     const auto g = grid_arg(v);
                     const auto coords = validate_latlon(read_track(p["track"].get<std::string>(), g.epoch()));
                     return Value(regrid_to_track(g, coords));
                 }});
    r.push_back({"fill_nans", grid_only, std::nullopt,
                 {{"method", P::String}, {"tol", P::Number}, {"max_iters", P::Integer}},
                 [](const Value& v, const json& p, const RunContext&) {
                     const auto method = str(p, "method", "gauss_seidel");
                     if (method != "gauss_seidel")
                         fail(fmt::format("unknown fill method '{}' (expected gauss_seidel)", method));
                     FillOptions o;
                     o.tol = num(p, "tol", o.tol);
                     if (p.contains("max_iters")) o.max_iters = p["max_iters"].get<std::size_t>();
                     return Value(fill_nans_gauss_seidel(grid_arg(v), o));
                 }});
    r.push_back({"latlon_deg2m", grid_only, std::nullopt, {},
                 [](const Value& v, const json&, const RunContext&) { return Value(latlon_deg2m(grid_arg(v))); }});
    r.push_back({"time_rescale", grid_or_track, std::nullopt, {{"freq", P::Number}, {"unit", P::String}},
                 [](const Value& v, const json& p, const RunContext&) {
                     const double freq = num(p, "freq", 1.0);
                     const auto unit = str(p, "unit", units::kDays);
                     if (kind_of(v) == ValueKind::Grid) return Value(time_rescale(grid_arg(v), freq, unit));
                     return Value(time_rescale(track_arg(v), freq, unit));
                 }});
    r.push_back({"derive", grid_only, std::nullopt, {{"var", P::String, true}},
                 [](const Value& v, const json& p, const RunContext&) {
                     return Value(derive(grid_arg(v), p["var"].get<std::string>()));
                 }});

    const std::vector<ParamSpec> psd_params{
        {"reference", P::String}, {"window", P::Bool}, {"detrend", P::String}};
    r.push_back({"psd_isotropic", grid_only, ValueKind::Spectrum, psd_params,
                 [](const Value& v, const json& p, const RunContext& c) {
                     return gridded_psd(v, p, c, Geometry::Isotropic);
                 }});
    r.push_back({"psd_spacetime", grid_only, ValueKind::Spectrum, psd_params,
                 [](const Value& v, const json& p, const RunContext& c) {
                     return gridded_psd(v, p, c, Geometry::LonTime);
                 }});
    r.push_back({"psd_latlon", grid_only, ValueKind::Spectrum, psd_params,
                 [](const Value& v, const json& p, const RunContext& c) {
                     return gridded_psd(v, p, c, Geometry::LonLat);
                 }});
    r.push_back({"psd_alongtrack", {ValueKind::Track}, ValueKind::Spectrum,
                 {{"reference", P::String, true}, {"window", P::Bool}, {"detrend", P::String},
                  {"segment_length", P::Integer}},
                 [](const Value& v, const json& p, const RunContext&) {
                     const auto pred = track_arg(v);
                     const auto truth = validate_time(
                         validate_latlon(read_track(p["reference"].get<std::string>(), pred.epoch())), pred.epoch());
                     const auto at = psd_alongtrack(truth, pred, spectral_options(p));
                     return Value(SpectrumValue{at.truth, at.score});
                 }});
    r.push_back({"resolved_scale", {ValueKind::Spectrum}, ValueKind::Report,
                 {{"experiment", P::String}, {"algorithm", P::String}},
                 [](const Value& v, const json& p, const RunContext&) {
                     const auto& s = std::get<SpectrumValue>(v);
                     if (!s.score)
                         fail("resolved_scale needs a PSD score: give the spectral step a reference");
                     EvalReport rep;
                     rep.experiment = str(p, "experiment", "pipeline");
                     rep.algorithm = str(p, "algorithm", "study");
                     const auto& c = *s.score;
                     switch (c.geometry) {
                         case Geometry::Isotropic: rep.lambda_r_km = report_scale(resolved_scale(c), true); break;
                         case Geometry::AlongTrack: rep.lambda_a_km = report_scale(resolved_scale(c), true); break;
                         case Geometry::LonTime: {
                             const auto st = resolved_scales_2d(c);
                             rep.lambda_x_km = report_scale(st.space, true);
                             rep.lambda_t_days = report_scale(st.time, false);
                             break;
                         }
                         case Geometry::LonLat:
                             rep.lambda_x_km = report_scale(resolved_scales_2d(c).space, true);
                             break;
                     }
                     return Value(rep);
                 }});
    return r;
}

const std::vector<Step>& registry() {
    static const std::vector<Step> r = build_registry();
    return r;
}

const Step* find_step(const std::string& name) {
    for (const auto& s : registry())
        if (s.name == name) return &s;
    return nullptr;
}

const Step& step_for(const std::string& name) {
    const Step* s = find_step(name);
    if (!s) fail(fmt::format("unknown op '{}'", name));
    return *s;
}

bool is_integer(const json& v) { return v.is_number_integer(); }

void check_param(const json& v, P type, const std::string& path) {
    auto bad = [&](const char* what) { fail_parse(path, fmt::format("expected {}", what)); };
    switch (type) {
        case P::Number:
            if (!v.is_number()) bad("a number");
            break;
        case P::Integer:
            if (!is_integer(v) || v.get<long long>() < 0) bad("a non-negative integer");
            break;
        case P::String:
            if (!v.is_string()) bad("a string");
            break;
        case P::Bool:
            if (!v.is_boolean()) bad("true or false");
            break;
        case P::NumberPair:
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) bad("[min, max] numbers");
            break;
        case P::StringPair:
            if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) bad("[start, end] dates");
            break;
    }
}

json coerce_scalar(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    long long i = 0;
    auto [pi, ei] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (ei == std::errc() && pi == s.data() + s.size()) return i;
    double d = 0.0;
    auto [pd, ed] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ed == std::errc() && pd == s.data() + s.size()) return d;
    return s;
}

void substitute(json& node, const PipelineVars& vars, const std::string& path) {
    if (node.is_object()) {
        for (auto& [k, v] : node.items()) substitute(v, vars, path.empty() ? k : path + "." + k);
        return;
    }
    if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) substitute(node[i], vars, fmt::format("{}[{}]", path, i));
        return;
    }
    if (!node.is_string()) return;
    static const std::regex placeholder(R"(\$\{([A-Za-z_][A-Za-z0-9_]*)\})");
    const std::string text = node.get<std::string>();
    std::string out;
    auto begin = std::sregex_iterator(text.begin(), text.end(), placeholder);
    std::size_t last = 0;
    bool whole = false;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        const auto found = vars.find(m[1].str());
        if (found == vars.end()) fail_parse(path, fmt::format("undefined variable '{}'", m[1].str()));
        out += text.substr(last, static_cast<std::size_t>(m.position()) - last) + found->second;
        last = static_cast<std::size_t>(m.position() + m.length());
        whole = m.position() == 0 && static_cast<std::size_t>(m.length()) == text.size();
    }
    if (begin == std::sregex_iterator()) return;
    out += text.substr(last);
    node = whole ? coerce_scalar(out) : json(out);
}

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

std::vector<std::string> registered_ops() {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.push_back(s.name);
    return out;
}

PipelineConfig parse_config(const std::string& text, const PipelineVars& overrides) {
    json doc = parse_yaml_subset(text);
    if (!doc.is_object()) fail_parse("config", "top level must be a mapping");
    for (const auto& [k, v] : doc.items()) {
        if (k != "input" && k != "output" && k != "manifest" && k != "vars" && k != "steps")
            fail_parse(k, "unknown key");
    }
    PipelineVars vars;
    if (doc.contains("vars")) {
        if (!doc["vars"].is_object()) fail_parse("vars", "must be a mapping");
        for (const auto& [k, v] : doc["vars"].items()) {
            if (v.is_structured()) fail_parse("vars." + k, "must be a scalar");
            vars[k] = scalar_text(v);
        }
        doc.erase("vars");
    }
    for (const auto& [k, v] : overrides) vars[k] = v;
    substitute(doc, vars, "");

    PipelineConfig cfg;
    auto path_field = [&](const char* key, bool required) -> std::optional<std::string> {
        if (!doc.contains(key) || doc[key].is_null()) {
            if (required) fail_parse(key, "missing");
            return std::nullopt;
        }
        if (!doc[key].is_string()) fail_parse(key, "expected a path");
        return doc[key].get<std::string>();
    };
    cfg.input = path_field("input", false).value_or("");
    cfg.output = path_field("output", false).value_or("");
    cfg.manifest = path_field("manifest", false);

    if (!doc.contains("steps") || doc["steps"].is_null()) return cfg;
    if (!doc["steps"].is_array()) fail_parse("steps", "must be a sequence");
    for (std::size_t i = 0; i < doc["steps"].size(); ++i) {
        const auto& s = doc["steps"][i];
        const std::string at = fmt::format("steps[{}]", i);
        if (!s.is_object()) fail_parse(at, "must be a mapping with op and params");
        for (const auto& [k, v] : s.items()) {
            if (k != "op" && k != "params") fail_parse(at + "." + k, "unknown key");
        }
        if (!s.contains("op") || !s["op"].is_string()) fail_parse(at + ".op", "missing op name");
        StepConfig step;
        step.op = s["op"].get<std::string>();
        const Step* def = find_step(step.op);
        if (!def) fail_parse(at + ".op", fmt::format("unknown op '{}'", step.op));
        if (s.contains("params") && !s["params"].is_null()) {
            if (!s["params"].is_object()) fail_parse(at + ".params", "must be a mapping");
            step.params = s["params"];
        }
        for (const auto& [k, v] : step.params.items()) {
            const auto spec = std::find_if(def->params.begin(), def->params.end(),
                                           [&](const ParamSpec& p) { return k == p.name; });
            if (spec == def->params.end()) fail_parse(at + ".params." + k, fmt::format("unknown parameter of {}", step.op));
            check_param(v, spec->type, at + ".params." + k);
        }
        for (const auto& p : def->params) {
            if (p.required && !step.params.contains(p.name))
                fail_parse(fmt::format("{}.params.{}", at, p.name), "missing required parameter");
        }
        cfg.steps.push_back(std::move(step));
    }
    return cfg;
}

ValueKind preflight(const PipelineConfig& cfg, ValueKind input_kind) {
    ValueKind k = input_kind;
    for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
        const Step& s = step_for(cfg.steps[i].op);
        if (!s.takes(k))
            fail(fmt::format("steps[{}] ({}): cannot take a {} input", i, s.name, to_string(k)));
        k = s.output(k);
    }
    return k;
}

json PipelineResult::manifest() const {
    json steps_json = json::array();
    for (const auto& s : steps) {
        json e = {{"op", s.op}, {"params", s.params}, {"in_hash", s.in_hash}, {"out_hash", s.out_hash}, {"ms", s.ms}};
        if (!s.result.is_null()) e["result"] = s.result;
        steps_json.push_back(std::move(e));
    }
    return {{"steps", std::move(steps_json)}};
}

PipelineResult run_pipeline(const PipelineConfig& cfg, Value input) {
    preflight(cfg, kind_of(input));
    PipelineResult out{std::move(input), {}};
    RunContext ctx;
    std::string hash = content_hash(out.value);
    for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
        const auto& sc = cfg.steps[i];
        const Step& def = step_for(sc.op);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            out.value = def.apply(out.value, sc.params, ctx);
        } catch (const Error& e) {
            throw Error(e.kind(), fmt::format("steps[{}] ({}): {}", i, sc.op, e.what()), e.field());
        } catch (const std::exception& e) {
            throw Error(ErrorKind::Domain, fmt::format("steps[{}] ({}): {}", i, sc.op, e.what()));
        }
        const auto t1 = std::chrono::steady_clock::now();
        StepRecord rec;
        rec.op = sc.op;
        rec.params = sc.params;
        rec.in_hash = hash;
        hash = content_hash(out.value);
        rec.out_hash = hash;
        rec.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (kind_of(out.value) == ValueKind::Report) {
            const auto j = json::parse(report_to_json({std::get<EvalReport>(out.value)}))[0];
            rec.result = json::object();
            for (const char* key : {"lambda_a_km", "lambda_r_km", "lambda_x_km", "lambda_t_days"})
                if (!j[key].is_null()) rec.result[key] = j[key];
        }
        out.steps.push_back(std::move(rec));
        ctx.history.push_back(&def);
        ctx.params.push_back(sc.params);
    }
    return out;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    if (cfg.input.empty()) fail_parse("input", "missing");
    preflight(cfg, kind_for_path(cfg.input));
    return run_pipeline(cfg, load_value(cfg.input));
}

}  // namespace obench
