#include "ggv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ggv {
namespace {

double delta_real(std::uint64_t alpha, double b_coeff) {
    return b_coeff * static_cast<double>(alpha) / std::log(static_cast<double>(alpha));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0 || sbb == 0)
        throw std::invalid_argument("correlation undefined on a constant series");
    return sab / std::sqrt(saa * sbb);
}

// Solve a dense symmetric system by Gaussian elimination with partial
// pivoting. Returns false when a pivot collapses entirely.
bool solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& rhs,
                  double* pivot_ratio) {
    const std::size_t n = rhs.size();
    double max_pivot = 0, min_pivot = 0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[best][col])) best = r;
        std::swap(a[col], a[best]);
        std::swap(rhs[col], rhs[best]);
        const double pivot = a[col][col];
        if (pivot == 0) return false;
        const double ap = std::fabs(pivot);
        max_pivot = col == 0 ? ap : std::max(max_pivot, ap);
        min_pivot = col == 0 ? ap : std::min(min_pivot, ap);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / pivot;
            if (f == 0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * rhs[c];
        rhs[i] = acc / a[i][i];
    }
    *pivot_ratio = min_pivot > 0 ? max_pivot / min_pivot : 0;
    return true;
}

}  // namespace

std::uint64_t predict_delta(std::uint64_t alpha, double b_coeff, Rounding rounding) {
    if (alpha < 2)
        throw std::invalid_argument("predict_delta: alpha must be >= 2 (log singularity)");
    if (b_coeff <= 0)
        throw std::invalid_argument("predict_delta: coefficient must be positive");
    const double v = delta_real(alpha, b_coeff);
    const double r = rounding == Rounding::Floor ? std::floor(v) : std::round(v);
    return r < 1.0 ? 1 : static_cast<std::uint64_t>(r);
}

FitModel fit_b(std::span<const DeltaSample> samples) {
    std::vector<double> xs, ds;
    FitModel model;
    model.alpha_min = ~0ull;
    for (const DeltaSample& s : samples) {
        if (s.alpha < 2) {
            ++model.dropped_low_alpha;
            continue;
        }
        xs.push_back(static_cast<double>(s.alpha) / std::log(static_cast<double>(s.alpha)));
        ds.push_back(static_cast<double>(s.delta_obs));
        model.alpha_min = std::min(model.alpha_min, s.alpha);
        model.alpha_max = std::max(model.alpha_max, s.alpha);
    }
    if (xs.size() < 2)
        throw std::invalid_argument("fit_b: need at least two samples with alpha >= 2");
    if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); }))
        throw std::invalid_argument("fit_b: degenerate data, all abscissae equal");

    double sxx = 0, sdx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += xs[i] * xs[i];
        sdx += ds[i] * xs[i];
    }
    model.b_coeff = sdx / sxx;
    model.sample_count = xs.size();

    std::vector<double> predicted(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) predicted[i] = model.b_coeff * xs[i];
    model.correlation = pearson(ds, predicted);
    return model;
}

std::vector<ResidualPoint> residual_series(std::span<const DeltaSample> samples,
                                           const FitModel& model) {
    std::vector<ResidualPoint> out;
    out.reserve(samples.size());
    for (const DeltaSample& s : samples) {
        if (s.alpha < 2) continue;
        const double v = delta_real(s.alpha, model.b_coeff);
        ResidualPoint pt;
        pt.alpha = s.alpha;
        pt.fractional = v - std::floor(v);
        pt.observed_minus_pred =
            static_cast<double>(s.delta_obs) -
            static_cast<double>(predict_delta(s.alpha, model.b_coeff));
        out.push_back(pt);
    }
    return out;
}

PolyModel poly_regression(std::span<const std::pair<double, double>> points,
                          unsigned order) {
    if (order > 10)
        throw std::invalid_argument("poly_regression: order capped at 10");
    if (points.size() <= order)
        throw std::invalid_argument("poly_regression: underdetermined, need more points than order");

    double x_min = points[0].first, x_max = points[0].first;
    for (const auto& [x, y] : points) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
    }
    if (x_min == x_max)
        throw std::invalid_argument("poly_regression: all abscissae identical");

    // Normal equations on u = (x - center)/scale; raw powers of x up to
    // order 10 would destroy the conditioning.
    const double center = (x_min + x_max) / 2;
    const double scale = (x_max - x_min) / 2;
    const unsigned dim = order + 1;

    std::vector<double> moments(2 * order + 1, 0.0);
    std::vector<double> rhs(dim, 0.0);
    for (const auto& [x, y] : points) {
        const double u = (x - center) / scale;
        double upow = 1;
        for (unsigned i = 0; i < 2 * order + 1; ++i) {
            moments[i] += upow;
            if (i < dim) rhs[i] += y * upow;
            upow *= u;
        }
    }
    std::vector<std::vector<double>> a(dim, std::vector<double>(dim));
    for (unsigned i = 0; i < dim; ++i)
        for (unsigned j = 0; j < dim; ++j) a[i][j] = moments[i + j];

    PolyModel model;
    model.order = order;
    double pivot_ratio = 0;
    if (!solve_linear(a, rhs, &pivot_ratio))
        throw std::invalid_argument("poly_regression: singular normal equations");
    model.ill_conditioned = pivot_ratio > 1e12;

    // Expand sum a_i * ((x-center)/scale)^i back into powers of x.
    std::vector<double> coeffs(dim, 0.0);
    std::vector<double> upoly{1.0};  // ((x-center)/scale)^i as x-coefficients
    for (unsigned i = 0; i < dim; ++i) {
        for (unsigned c = 0; c < upoly.size(); ++c) coeffs[c] += rhs[i] * upoly[c];
        if (i + 1 < dim) {
            std::vector<double> next(upoly.size() + 1, 0.0);
            for (unsigned c = 0; c < upoly.size(); ++c) {
                next[c] += upoly[c] * (-center / scale);
                next[c + 1] += upoly[c] / scale;
            }
            upoly = std::move(next);
        }
    }
    model.coefficients = std::move(coeffs);

    double rss = 0;
    for (const auto& [x, y] : points) {
        const double e = y - poly_eval(model, x);
        rss += e * e;
    }
    model.rss = rss;
    return model;
}

double poly_eval(const PolyModel& model, double x) {
    double acc = 0;
    for (std::size_t i = model.coefficients.size(); i-- > 0;)
        acc = acc * x + model.coefficients[i];
    return acc;
}

GammaHistogram gamma_histogram(std::span<const DeltaSample> samples) {
    if (samples.empty())
        throw std::invalid_argument("gamma_histogram: no samples");
    GammaHistogram h;
    for (const DeltaSample& s : samples) ++h.counts[s.gamma_obs];
    h.min = h.counts.begin()->first;
    h.max = h.counts.rbegin()->first;
    std::uint64_t best = 0;
    for (const auto& [gamma, count] : h.counts)
        if (count > best) {
            best = count;
            h.mode = gamma;
        }
    return h;
}

}  // namespace ggv
