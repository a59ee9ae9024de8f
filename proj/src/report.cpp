#include "obench/report.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <json.hpp>

#include "obench/error.hpp"
#include "obench/metrics.hpp"

namespace obench {

using json = nlohmann::json;

namespace {

constexpr std::array<const char*, 7> kColumns = {"Experiment", "Algorithm",  "nRMSE Score", "λ_a [km]",
                                                 "λ_r [km]",   "λ_x [km]",   "λ_t [days]"};

std::string scale_cell(const std::optional<double>& v, const char* spec) {
    if (!v) return "-";
    if (std::isinf(*v)) return "inf";
    return fmt::format(fmt::runtime(spec), *v);
}

std::array<std::string, 7> cells(const EvalReport& r) {
    std::string score = "-";
    if (r.nrmse_mean)
        score = r.nrmse_std ? format_mean_std(*r.nrmse_mean, *r.nrmse_std) : fmt::format("{:.2f}", *r.nrmse_mean);
    return {r.experiment,
            r.algorithm,
            score,
            scale_cell(r.lambda_a_km, "{:.0f}"),
            scale_cell(r.lambda_r_km, "{:.0f}"),
            scale_cell(r.lambda_x_km, "{:.0f}"),
            scale_cell(r.lambda_t_days, "{:.1f}")};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}

json scale_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    if (std::isinf(*v)) return "inf";
    return *v;
}

std::optional<double> scale_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (j[key].is_string()) {
        if (j[key].get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        fail_parse(key, "expected a number, null or \"inf\"");
    }
    if (!j[key].is_number()) fail_parse(key, "expected a number");
    return j[key].get<double>();
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "md" || name == "markdown") return ReportFormat::Markdown;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    fail(fmt::format("unknown report format '{}' (expected md, csv or json)", name));
}

std::optional<double> report_scale(const ResolvedScale& r, bool to_km) {
    if (r.status == ScaleStatus::Unresolved) return std::numeric_limits<double>::infinity();
    return to_km ? r.wavelength / 1000.0 : r.wavelength;
}

std::string render_report(const std::vector<EvalReport>& reports, ReportFormat format) {
    if (format == ReportFormat::Json) return report_to_json(reports);
    std::string out;
    if (format == ReportFormat::Markdown) {
        out += "|";
        for (const char* c : kColumns) out += fmt::format(" {} |", c);
        out += "\n|";
        for (std::size_t i = 0; i < kColumns.size(); ++i) out += i < 2 ? " --- |" : " :---: |";
        out += "\n";
        for (const auto& r : reports) {
            out += "|";
            for (const auto& c : cells(r)) out += fmt::format(" {} |", c);
            out += "\n";
        }
        return out;
    }
    for (std::size_t i = 0; i < kColumns.size(); ++i) out += (i ? "," : "") + csv_field(kColumns[i]);
    out += "\r\n";
    for (const auto& r : reports) {
        const auto row = cells(r);
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
        out += "\r\n";
    }
    return out;
}

std::string report_to_json(const std::vector<EvalReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        json j;
        j["experiment"] = r.experiment;
        j["algorithm"] = r.algorithm;
        j["nrmse_mean"] = r.nrmse_mean ? json(*r.nrmse_mean) : json(nullptr);
        j["nrmse_std"] = r.nrmse_std ? json(*r.nrmse_std) : json(nullptr);
        j["lambda_a_km"] = scale_json(r.lambda_a_km);
        j["lambda_r_km"] = scale_json(r.lambda_r_km);
        j["lambda_x_km"] = scale_json(r.lambda_x_km);
        j["lambda_t_days"] = scale_json(r.lambda_t_days);
        j["psd_threshold"] = r.psd_threshold;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::vector<EvalReport> reports_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_parse("report", e.what());
    }
    if (j.is_object()) j = json::array({j});
    if (!j.is_array()) fail_parse("report", "expected a report object or an array of reports");
    std::vector<EvalReport> out;
    for (const auto& e : j) {
        EvalReport r;
        if (!e.contains("experiment") || !e.contains("algorithm"))
            fail_parse("report", "report needs experiment and algorithm");
        r.experiment = e["experiment"].get<std::string>();
        r.algorithm = e["algorithm"].get<std::string>();
        if (e.contains("nrmse_mean") && !e["nrmse_mean"].is_null()) r.nrmse_mean = e["nrmse_mean"].get<double>();
        if (e.contains("nrmse_std") && !e["nrmse_std"].is_null()) r.nrmse_std = e["nrmse_std"].get<double>();
        r.lambda_a_km = scale_from_json(e, "lambda_a_km");
        r.lambda_r_km = scale_from_json(e, "lambda_r_km");
        r.lambda_x_km = scale_from_json(e, "lambda_x_km");
        r.lambda_t_days = scale_from_json(e, "lambda_t_days");
        if (e.contains("psd_threshold")) r.psd_threshold = e["psd_threshold"].get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace obench
