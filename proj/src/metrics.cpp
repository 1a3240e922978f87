#include "aeelm/metrics.hpp"

#include "aeelm/core/errors.hpp"
#include "aeelm/core/math.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace aeelm {

namespace {

void check_lengths(std::span<const double> y, std::span<const double> yhat, std::size_t min_n) {
    if (y.size() != yhat.size())
        throw std::invalid_argument("metric: length mismatch (" + std::to_string(y.size()) + " vs " +
                                    std::to_string(yhat.size()) + ")");
    if (y.size() < min_n)
        throw std::invalid_argument("metric: need at least " + std::to_string(min_n) + " samples");
}

} // namespace

double mape(std::span<const double> y, std::span<const double> yhat, MapeDenominator denom) {
    check_lengths(y, yhat, 1);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = denom == MapeDenominator::predicted ? yhat[i] : y[i];
        if (d == 0.0)
            throw NumericError("MAPE undefined: zero denominator at index " + std::to_string(i));
        s += std::abs(y[i] - yhat[i]) / d;
    }
    return s / static_cast<double>(y.size()) * 100.0;
}

double nmse(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat, 1);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double prod = y[i] * yhat[i];
        if (!(prod > 0.0))
            throw NumericError("NMSE undefined: nonpositive product y*yhat at index " +
                               std::to_string(i));
        const double d = yhat[i] - y[i];
        s += d * d / prod;
    }
    return s / static_cast<double>(y.size());
}

double r2(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat, 2);
    const double ybar = mean_of(y);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (yhat[i] - y[i]) * (yhat[i] - y[i]);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    if (ss_tot == 0.0) throw NumericError("R^2 undefined: constant measured values");
    return 1.0 - ss_res / ss_tot;
}

Quartiles abs_error_summary(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat, 1);
    std::vector<double> e(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) e[i] = std::abs(y[i] - yhat[i]);
    std::sort(e.begin(), e.end());
    Quartiles q;
    q.min = e.front();
    q.q1 = quantile_sorted(e, 0.25);
    q.median = quantile_sorted(e, 0.5);
    q.q3 = quantile_sorted(e, 0.75);
    q.max = e.back();
    return q;
}

EvaluationReport evaluate(std::span<const double> y, std::span<const double> yhat,
                          MapeDenominator denom) {
    check_lengths(y, yhat, 2);
    EvaluationReport r;
    r.mape_percent = mape(y, yhat, denom);
    r.nmse = nmse(y, yhat);
    r.r2 = r2(y, yhat);
    r.n = y.size();
    r.abs_error_quartiles = abs_error_summary(y, yhat);
    return r;
}

} // namespace aeelm
