#pragma once

#include <cstddef>
#include <span>

namespace aeelm {

// MAPE as the source formula writes it: the denominator is the PREDICTED
// value. The conventional measured-value denominator is available behind the
// config flag mape_denominator = measured.
enum class MapeDenominator { predicted, measured };

struct Quartiles {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

struct EvaluationReport {
    double mape_percent = 0.0;
    double nmse = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
    Quartiles abs_error_quartiles;
};

// (1/n) sum |y_i - yhat_i| / yhat_i * 100. Throws NumericError when any
// denominator is exactly zero.
double mape(std::span<const double> y, std::span<const double> yhat,
            MapeDenominator denom = MapeDenominator::predicted);

// (1/n) sum (yhat_i - y_i)^2 / (y_i * yhat_i). Undefined (NumericError) when
// any product y_i*yhat_i is nonpositive.
double nmse(std::span<const double> y, std::span<const double> yhat);

// 1 - SS_res / SS_tot. Throws NumericError for constant y.
double r2(std::span<const double> y, std::span<const double> yhat);

// Five-number summary of |y_i - yhat_i| with linear-interpolation quantiles.
Quartiles abs_error_summary(std::span<const double> y, std::span<const double> yhat);

EvaluationReport evaluate(std::span<const double> y, std::span<const double> yhat,
                          MapeDenominator denom = MapeDenominator::predicted);

} // namespace aeelm
