#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace sll {

/// Recursive pairwise summation. The result depends only on the order of the
/// input, so replica-ordered reductions are reproducible.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

/// Sample mean and standard error of the mean (n - 1 normalization).
inline MeanSe mean_se(std::span<const double> x) {
    const auto n = static_cast<double>(x.size());
    if (x.empty()) return {};
    const double mean = pairwise_sum(x) / n;
    if (x.size() < 2) return {mean, 0.0};
    std::vector<double> dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dev[i] = (x[i] - mean) * (x[i] - mean);
    return {mean, std::sqrt(pairwise_sum(dev) / (n - 1.0) / n)};
}

/// Least-squares line through (x_i, y_i).
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

}  // namespace sll
