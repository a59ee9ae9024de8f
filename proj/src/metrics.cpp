#include "obench/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "obench/error.hpp"

namespace obench {

namespace {

struct SquaredSums {
    double err = 0.0;
    double truth = 0.0;
    std::size_t n = 0;
};

SquaredSums squared_sums(std::span<const double> truth, std::span<const double> pred) {
    if (truth.size() != pred.size()) fail("truth and prediction differ in size");
    SquaredSums s;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!std::isfinite(truth[i]) || !std::isfinite(pred[i])) continue;
        const double d = truth[i] - pred[i];
        s.err += d * d;
        s.truth += truth[i] * truth[i];
        ++s.n;
    }
    if (s.n == 0) fail("no jointly valid cells between truth and prediction");
    return s;
}

void require_same_shape(const GriddedField& a, const GriddedField& b) {
    if (!(a.shape() == b.shape())) fail("truth and prediction grids differ in shape");
}

}  // namespace

double rmse(std::span<const double> truth, std::span<const double> pred) {
    const auto s = squared_sums(truth, pred);
    return std::sqrt(s.err / static_cast<double>(s.n));
}

double nrmse(std::span<const double> truth, std::span<const double> pred) {
    const auto s = squared_sums(truth, pred);
    if (s.truth == 0.0) fail("nRMSE undefined: truth has zero RMS");
    return std::sqrt(s.err / s.truth);
}

double rmse(const GriddedField& truth, const GriddedField& pred) {
    require_same_shape(truth, pred);
    return rmse(truth.data(), pred.data());
}

double nrmse(const GriddedField& truth, const GriddedField& pred) {
    require_same_shape(truth, pred);
    return nrmse(truth.data(), pred.data());
}

std::string format_mean_std(double mean, double std) { return fmt::format("{:.2f} ± {:.2f}", mean, std); }

std::string ScoreSeries::render() const { return format_mean_std(mean, std); }

ScoreSeries nrmse_score_series(const GriddedField& truth, const GriddedField& pred) {
    require_same_shape(truth, pred);
    ScoreSeries out;
    const auto nt = truth.shape().nt;
    out.scores.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) out.scores.push_back(1.0 - nrmse(truth.slice(t), pred.slice(t)));
    double sum = 0.0;
    for (double s : out.scores) sum += s;
    out.mean = sum / static_cast<double>(nt);
    double ss = 0.0;
    for (double s : out.scores) ss += (s - out.mean) * (s - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(nt));
    return out;
}

}  // namespace obench
