#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace ggv {

// One verified decomposition reduced to its row indices.
struct DeltaSample {
    std::uint64_t alpha;      // row of the even number
    std::uint64_t delta_obs;  // row of the column-constrained prime
    std::uint64_t gamma_obs;  // row of the complement prime
};

struct FitModel {
    double b_coeff = 0.0;      // fitted multiplicative constant
    double correlation = 0.0;  // Pearson r between delta_obs and b*alpha/ln(alpha)
    std::size_t sample_count = 0;
    std::uint64_t alpha_min = 0;
    std::uint64_t alpha_max = 0;
    std::size_t dropped_low_alpha = 0;  // samples with alpha < 2, excluded
};

enum class Rounding { Floor, Nearest };

// Row predictor floor(b * alpha / ln(alpha)), clamped to >= 1.
// Throws std::invalid_argument for alpha < 2 or b <= 0.
std::uint64_t predict_delta(std::uint64_t alpha, double b_coeff,
                            Rounding rounding = Rounding::Floor);

// Closed-form least squares through the origin: b = sum(d*x)/sum(x^2) with
// x = alpha/ln(alpha). Throws std::invalid_argument with fewer than two
// usable samples or when all x coincide.
FitModel fit_b(std::span<const DeltaSample> samples);

struct ResidualPoint {
    std::uint64_t alpha;
    double fractional;           // b*a/ln(a) minus its integer part
    double observed_minus_pred;  // delta_obs - predict_delta(a, b)
};

std::vector<ResidualPoint> residual_series(std::span<const DeltaSample> samples,
                                           const FitModel& model);

struct PolyModel {
    unsigned order = 0;
    std::vector<double> coefficients;  // c0..c_order, original coordinates
    double rss = 0.0;
    bool ill_conditioned = false;
};

// Least-squares polynomial fit via normal equations on centered/scaled
// abscissae. Throws std::invalid_argument when order > 10, the system is
// underdetermined, or all x coincide.
PolyModel poly_regression(std::span<const std::pair<double, double>> points,
                          unsigned order);

double poly_eval(const PolyModel& model, double x);

struct GammaHistogram {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    std::uint64_t mode = 0;
};

// Throws std::invalid_argument on empty input.
GammaHistogram gamma_histogram(std::span<const DeltaSample> samples);

}  // namespace ggv
