// Logistic regression, likelihood-ratio and t tests, Cohen's kappa.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>

namespace proxval {

struct LogitFit {
    double intercept = 0.0;
    double slope = 0.0;
    double se_intercept = 0.0;
    double se_slope = 0.0;
    double log_likelihood = 0.0;
    double null_log_likelihood = 0.0;
    double mcfadden_r2 = 0.0;  // 1 - LL / LL0; NaN when degenerate
    std::size_t n = 0;
    int parameters = 2;        // 1 for the intercept-only model
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;   // constant outcome
    bool separated = false;    // outcome perfectly split by predictor; no finite MLE

    double aic() const { return -2.0 * log_likelihood + 2.0 * parameters; }
};

/// Maximum-likelihood logit(P(y = 1)) = intercept + slope * x by Newton's
/// method with step halving. Stops when the largest coefficient change
/// drops below 1e-10, or after 100 iterations. Outcomes must be 0 or 1.
///
/// A constant outcome gives a degenerate fit (intercept = logit(mean), i.e.
/// +-inf). A separable outcome gives converged = false and NaN
/// coefficients. A constant predictor gives the null model with slope 0.
LogitFit fit_logistic(std::span<const int> outcome, std::span<const double> predictor);

/// Intercept-only model: intercept = logit(mean), LL = LL0, R2 = 0.
LogitFit fit_logistic_null(std::span<const int> outcome);

double logistic_log_likelihood(std::span<const int> outcome, std::span<const double> predictor, double intercept,
                               double slope);

/// Gradient of logistic_log_likelihood with respect to (intercept, slope).
std::pair<double, double> logistic_score(std::span<const int> outcome, std::span<const double> predictor,
                                         double intercept, double slope);

struct LikelihoodRatio {
    double chi2 = 0.0;
    int df = 1;
    double p = 1.0;
    bool nested = false;   // false: the two fits have equal parameter counts; chi2 is heuristic
    double delta_aic = 0.0;  // aic(a) - aic(b)
};

/// chi2 = 2 |LL_a - LL_b| against a chi-square with df degrees of freedom.
/// df defaults to the difference in parameter counts, or 1 when equal.
/// Throws std::invalid_argument when the fits differ in n.
LikelihoodRatio likelihood_ratio_test(const LogitFit& a, const LogitFit& b, std::optional<int> df = std::nullopt);

double chi_square_sf(double x, double df);

struct TTestResult {
    std::optional<double> t;        // (mean0 - mean1) / (sp * sqrt(1/n0 + 1/n1))
    std::size_t df = 0;
    std::optional<double> p;        // two-sided
    std::optional<double> cohen_d;  // (mean0 - mean1) / sp
    double mean0 = 0.0;
    double mean1 = 0.0;
};

/// Pooled-variance two-sample t test. Needs at least two values per group;
/// with zero pooled variance every optional field stays empty.
TTestResult t_test_cohen_d(std::span<const double> group0, std::span<const double> group1);

struct KappaResult {
    std::optional<double> kappa;  // empty when chance agreement is 1
    double observed_agreement = 0.0;
    double chance_agreement = 0.0;
    std::size_t n = 0;
};

template <typename T>
KappaResult cohens_kappa(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) throw std::invalid_argument("cohens_kappa: rating vectors differ in length");
    if (a.empty()) throw std::invalid_argument("cohens_kappa: no ratings");
    std::map<T, double> margin_a, margin_b;
    std::size_t agree = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        margin_a[a[k]] += 1.0;
        margin_b[b[k]] += 1.0;
        if (a[k] == b[k]) ++agree;
    }
    const double n = static_cast<double>(a.size());
    KappaResult r;
    r.n = a.size();
    r.observed_agreement = static_cast<double>(agree) / n;
    for (const auto& [category, count] : margin_a) {
        if (auto it = margin_b.find(category); it != margin_b.end()) r.chance_agreement += (count / n) * (it->second / n);
    }
    if (r.chance_agreement < 1.0) {
        r.kappa = (r.observed_agreement - r.chance_agreement) / (1.0 - r.chance_agreement);
    }
    return r;
}

}  // namespace proxval
