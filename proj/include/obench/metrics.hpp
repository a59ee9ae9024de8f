#pragma once

#include <span>
#include <string>
#include <vector>

#include "obench/grid.hpp"

namespace obench {

/// RMSE over cells where both inputs are finite.
double rmse(std::span<const double> truth, std::span<const double> pred);
/// RMSE divided by the root mean square of truth over the same cells.
double nrmse(std::span<const double> truth, std::span<const double> pred);

double rmse(const GriddedField& truth, const GriddedField& pred);
double nrmse(const GriddedField& truth, const GriddedField& pred);

struct ScoreSeries {
    std::vector<double> scores;  // 1 - nRMSE per time step
    double mean = 0.0;
    double std = 0.0;  // population
    std::string render() const;
};

ScoreSeries nrmse_score_series(const GriddedField& truth, const GriddedField& pred);

/// "mean ± std" with two decimals.
std::string format_mean_std(double mean, double std);

}  // namespace obench
