#include "proxval/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numeric>

namespace proxval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTolerance = 1e-10;
constexpr int kMaxIterations = 100;

// log(1 + exp(eta)) without overflow.
double softplus(double eta) { return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

double sigmoid(double eta) {
    if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double mean_outcome(std::span<const int> outcome) {
    std::size_t ones = 0;
    for (int y : outcome) {
        if (y != 0 && y != 1) throw std::invalid_argument(fmt::format("logistic outcome must be 0 or 1, got {}", y));
        ones += static_cast<std::size_t>(y);
    }
    return static_cast<double>(ones) / static_cast<double>(outcome.size());
}

double bernoulli_log_likelihood(double p, std::size_t n) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return static_cast<double>(n) * (p * std::log(p) + (1.0 - p) * std::log1p(-p));
}

}  // namespace

double logistic_log_likelihood(std::span<const int> outcome, std::span<const double> predictor, double intercept,
                               double slope) {
    double ll = 0.0;
    for (std::size_t i = 0; i < outcome.size(); ++i) {
        const double eta = intercept + slope * predictor[i];
        ll += outcome[i] * eta - softplus(eta);
    }
    return ll;
}

std::pair<double, double> logistic_score(std::span<const int> outcome, std::span<const double> predictor,
                                         double intercept, double slope) {
    double g0 = 0.0, g1 = 0.0;
    for (std::size_t i = 0; i < outcome.size(); ++i) {
        const double r = outcome[i] - sigmoid(intercept + slope * predictor[i]);
        g0 += r;
        g1 += r * predictor[i];
    }
    return {g0, g1};
}

LogitFit fit_logistic_null(std::span<const int> outcome) {
    if (outcome.empty()) throw std::invalid_argument("fit_logistic_null: empty outcome");
    const double p = mean_outcome(outcome);
    LogitFit fit;
    fit.n = outcome.size();
    fit.parameters = 1;
    fit.intercept = std::log(p / (1.0 - p));
    fit.slope = 0.0;
    fit.se_slope = kNaN;
    fit.log_likelihood = fit.null_log_likelihood = bernoulli_log_likelihood(p, fit.n);
    if (p <= 0.0 || p >= 1.0) {
        fit.degenerate = true;
        fit.se_intercept = kNaN;
        fit.mcfadden_r2 = kNaN;
        return fit;
    }
    fit.se_intercept = 1.0 / std::sqrt(static_cast<double>(fit.n) * p * (1.0 - p));
    fit.mcfadden_r2 = 0.0;
    fit.converged = true;
    return fit;
}

LogitFit fit_logistic(std::span<const int> outcome, std::span<const double> predictor) {
    if (outcome.size() != predictor.size()) throw std::invalid_argument("fit_logistic: length mismatch");
    if (outcome.size() < 2) throw std::invalid_argument("fit_logistic: need n >= 2");

    LogitFit fit = fit_logistic_null(outcome);
    fit.parameters = 2;
    if (fit.degenerate) return fit;

    const auto [xmin, xmax] = std::minmax_element(predictor.begin(), predictor.end());
    if (*xmin == *xmax) return fit;  // constant predictor: null model, slope 0

    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < outcome.size(); ++i) {
        lo[outcome[i]] = std::min(lo[outcome[i]], predictor[i]);
        hi[outcome[i]] = std::max(hi[outcome[i]], predictor[i]);
    }
    if (hi[0] <= lo[1] || hi[1] <= lo[0]) {
        fit.separated = true;
        fit.converged = false;
        fit.intercept = fit.slope = fit.se_intercept = fit.se_slope = kNaN;
        fit.log_likelihood = kNaN;
        fit.mcfadden_r2 = kNaN;
        return fit;
    }

    double b0 = fit.intercept, b1 = 0.0;
    double ll = logistic_log_likelihood(outcome, predictor, b0, b1);
    double i00 = 0, i01 = 0, i11 = 0;
    auto information = [&](double c0, double c1) {
        i00 = i01 = i11 = 0.0;
        for (std::size_t i = 0; i < outcome.size(); ++i) {
            const double p = sigmoid(c0 + c1 * predictor[i]);
            const double w = p * (1.0 - p);
            i00 += w;
            i01 += w * predictor[i];
            i11 += w * predictor[i] * predictor[i];
        }
    };

    fit.converged = false;
    for (fit.iterations = 1; fit.iterations <= kMaxIterations; ++fit.iterations) {
        const auto [g0, g1] = logistic_score(outcome, predictor, b0, b1);
        information(b0, b1);
        const double det = i00 * i11 - i01 * i01;
        if (!(det > 0.0)) break;
        double s0 = (i11 * g0 - i01 * g1) / det;
        double s1 = (i00 * g1 - i01 * g0) / det;

        double step = 1.0;
        double next_ll = logistic_log_likelihood(outcome, predictor, b0 + s0, b1 + s1);
        for (int h = 0; h < 30 && next_ll < ll; ++h) {
            step *= 0.5;
            next_ll = logistic_log_likelihood(outcome, predictor, b0 + step * s0, b1 + step * s1);
        }
        b0 += step * s0;
        b1 += step * s1;
        ll = next_ll;
        if (std::max(std::abs(step * s0), std::abs(step * s1)) < kTolerance) {
            fit.converged = true;
            break;
        }
    }
    fit.iterations = std::min(fit.iterations, kMaxIterations);

    information(b0, b1);
    const double det = i00 * i11 - i01 * i01;
    fit.intercept = b0;
    fit.slope = b1;
    fit.log_likelihood = logistic_log_likelihood(outcome, predictor, b0, b1);
    fit.se_intercept = det > 0 ? std::sqrt(i11 / det) : kNaN;
    fit.se_slope = det > 0 ? std::sqrt(i00 / det) : kNaN;
    fit.mcfadden_r2 = 1.0 - fit.log_likelihood / fit.null_log_likelihood;
    return fit;
}

double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    const boost::math::chi_squared_distribution<double> dist(df);
    return boost::math::cdf(boost::math::complement(dist, x));
}

LikelihoodRatio likelihood_ratio_test(const LogitFit& a, const LogitFit& b, std::optional<int> df) {
    if (a.n != b.n) throw std::invalid_argument(fmt::format("likelihood_ratio_test: n differs ({} vs {})", a.n, b.n));
    LikelihoodRatio r;
    r.nested = a.parameters != b.parameters;
    r.df = df.value_or(std::max(1, std::abs(a.parameters - b.parameters)));
    if (r.df < 1) throw std::invalid_argument("likelihood_ratio_test: df must be >= 1");
    r.chi2 = 2.0 * std::abs(a.log_likelihood - b.log_likelihood);
    r.p = chi_square_sf(r.chi2, r.df);
    r.delta_aic = a.aic() - b.aic();
    return r;
}

TTestResult t_test_cohen_d(std::span<const double> group0, std::span<const double> group1) {
    if (group0.size() < 2 || group1.size() < 2) throw std::invalid_argument("t_test: each group needs n >= 2");
    const double n0 = static_cast<double>(group0.size());
    const double n1 = static_cast<double>(group1.size());
    TTestResult r;
    r.mean0 = std::accumulate(group0.begin(), group0.end(), 0.0) / n0;
    r.mean1 = std::accumulate(group1.begin(), group1.end(), 0.0) / n1;
    r.df = group0.size() + group1.size() - 2;
    double ss = 0.0;
    for (double v : group0) ss += (v - r.mean0) * (v - r.mean0);
    for (double v : group1) ss += (v - r.mean1) * (v - r.mean1);
    const double pooled_sd = std::sqrt(ss / static_cast<double>(r.df));
    if (!(pooled_sd > 0.0)) return r;

    const double diff = r.mean0 - r.mean1;
    r.t = diff / (pooled_sd * std::sqrt(1.0 / n0 + 1.0 / n1));
    r.cohen_d = diff / pooled_sd;
    const boost::math::students_t_distribution<double> dist(static_cast<double>(r.df));
    r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(*r.t))));
    return r;
}

}  // namespace proxval
