#pragma once

#include <optional>
#include <string>
#include <vector>

#include "obench/spectral.hpp"

namespace obench {

/// One leaderboard row. Absent metrics render as "-"; a scale that never
/// reaches the threshold is stored as +infinity and renders as "inf".
struct EvalReport {
    std::string experiment;
    std::string algorithm;
    std::optional<double> nrmse_mean;
    std::optional<double> nrmse_std;
    std::optional<double> lambda_a_km;
    std::optional<double> lambda_r_km;
    std::optional<double> lambda_x_km;
    std::optional<double> lambda_t_days;
    double psd_threshold = kResolvedThreshold;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

enum class ReportFormat { Markdown, Csv, Json };

ReportFormat parse_report_format(const std::string& name);

/// Converts a resolved scale (meters or days) to the report's value; km when `to_km`.
std::optional<double> report_scale(const ResolvedScale& r, bool to_km);

std::string render_report(const std::vector<EvalReport>& reports, ReportFormat format);

std::string report_to_json(const std::vector<EvalReport>& reports);
std::vector<EvalReport> reports_from_json(const std::string& text);

}  // namespace obench
