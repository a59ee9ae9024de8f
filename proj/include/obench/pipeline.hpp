#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "obench/grid.hpp"
#include "obench/report.hpp"
#include "obench/spectral.hpp"

namespace obench {

enum class ValueKind { Grid, Track, Spectrum, Report };

std::string to_string(ValueKind kind);

/// A spectrum, plus its PSD score when the step was given a reference.
struct SpectrumValue {
    SpectrumResult psd;
    std::optional<PsdScoreCurve> score;
};

using Value = std::variant<GriddedField, AlongTrackSet, SpectrumValue, EvalReport>;

ValueKind kind_of(const Value& v);

/// Bytes hashed for the manifest: OBG encoding for grids, track CSV for
/// tracks, spectrum CSV (then score CSV) for spectra, report JSON for reports.
std::string canonical_bytes(const Value& v);
std::string content_hash(const Value& v);

/// .obg is a grid, .csv a track and .json a report.
ValueKind kind_for_path(const std::filesystem::path& path);
Value load_value(const std::filesystem::path& path);
/// Grids go to .obg, tracks and spectra to .csv, reports to .json, .md or .csv.
void save_value(const Value& v, const std::filesystem::path& path);

struct StepConfig {
    std::string op;
    nlohmann::json params = nlohmann::json::object();
};

struct PipelineConfig {
    std::string input;
    std::string output;
    std::optional<std::string> manifest;
    std::vector<StepConfig> steps;
};

using PipelineVars = std::map<std::string, std::string>;

/// Parses the YAML-subset config. Top-level keys: input, output, manifest,
/// vars (defaults for `${name}` placeholders) and steps. Every op and its
/// parameters are checked against the registry; errors name the offending path.
PipelineConfig parse_config(const std::string& text, const PipelineVars& overrides = {});

/// Registered op names in registry order.
std::vector<std::string> registered_ops();

/// Kind chaining check; throws naming the first step whose input kind it cannot take.
ValueKind preflight(const PipelineConfig& cfg, ValueKind input_kind);

struct StepRecord {
    std::string op;
    nlohmann::json params;
    std::string in_hash;
    std::string out_hash;
    double ms = 0.0;
    nlohmann::json result;  // null unless the op yields a scalar summary
};

struct PipelineResult {
    Value value;
    std::vector<StepRecord> steps;
    nlohmann::json manifest() const;
};

/// Runs the steps in order on `input`. Preflight runs first.
PipelineResult run_pipeline(const PipelineConfig& cfg, Value input);
/// Preflights against the kind of cfg.input, then loads it and runs.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace obench
