#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssclust/errors.hpp"

namespace ssclust {
namespace detail {

// Regularized lower incomplete gamma P(a, x), evaluated in-repo: series
// expansion for x < a+1, Lentz continued fraction for the complement
// otherwise.
inline double gamma_p(double a, double x) {
    if (a <= 0.0) throw DomainError("gamma_p: a must be positive");
    if (x <= 0.0) return 0.0;

    const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
    const int max_iter = 2000;
    const double eps = 1e-16;

    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n <= max_iter; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * eps) break;
        }
        return sum * std::exp(log_prefactor);
    }

    // Continued fraction for Q(a, x) = 1 - P(a, x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= max_iter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    double q = h * std::exp(log_prefactor);
    return q >= 1.0 ? 0.0 : 1.0 - q;
}

}  // namespace detail

// P(chi^2_df <= x). Negative x yields 0.
inline double chi2_cdf(double x, double df) {
    if (df <= 0.0) throw DomainError("chi2_cdf: df must be positive");
    if (x <= 0.0) return 0.0;
    return detail::gamma_p(df / 2.0, x / 2.0);
}

// Noncentral chi-square CDF via its Poisson mixture of central CDFs,
// scanning outward from the Poisson mode so the series stays stable when the
// noncentrality parameter is large. Truncated once all but 1e-12 of the
// Poisson mass is covered.
inline double noncentral_chi2_cdf(double x, double df, double ncp) {
    if (df <= 0.0) throw DomainError("noncentral_chi2_cdf: df must be positive");
    if (ncp < 0.0) throw DomainError("noncentral_chi2_cdf: ncp must be >= 0");
    if (x <= 0.0) return 0.0;
    if (ncp == 0.0) return chi2_cdf(x, df);

    const double lambda = ncp / 2.0;
    const long j0 = static_cast<long>(lambda);
    const double log_p0 =
        -lambda + j0 * std::log(lambda) - std::lgamma(static_cast<double>(j0) + 1.0);
    const double p0 = std::exp(log_p0);

    double sum = p0 * chi2_cdf(x, df + 2.0 * j0);
    double mass = p0;
    const double tail = 1e-12;

    double pj = p0;
    for (long j = j0 + 1; mass < 1.0 - tail; ++j) {
        pj *= lambda / static_cast<double>(j);
        sum += pj * chi2_cdf(x, df + 2.0 * j);
        mass += pj;
        if (pj < tail && j > j0 + 4) break;
    }
    pj = p0;
    for (long j = j0; j > 0 && mass < 1.0 - tail; --j) {
        pj *= static_cast<double>(j) / lambda;
        sum += pj * chi2_cdf(x, df + 2.0 * (j - 1));
        mass += pj;
    }
    return sum > 1.0 ? 1.0 : sum;
}

// Nested Gaussian-mean comparison: full model of dimension d against a null
// that zeroes the coordinates after d0, with sample size n and penalty
// argument m. The deviation event compares the likelihood-ratio statistic
// against the band ((d-d0) log m, (d-d0) log n).
struct NestedModelSpec {
    int d = 0;
    int d0 = 0;
    long n = 0;
    double m = 1.0;

    void validate() const {
        if (d0 < 1 || d0 >= d) throw DomainError("need 1 <= d0 < d");
        if (n < 2) throw DomainError("need n >= 2");
        if (m < 1.0) throw DomainError("need m >= 1");
    }

    // Noncentrality of the likelihood-ratio statistic under the full model
    // with mean coordinates 1/sqrt(j): n * sum_{j=d0+1}^{d} 1/j.
    double ncp() const {
        double s = 0.0;
        for (int j = d0 + 1; j <= d; ++j) s += 1.0 / j;
        return static_cast<double>(n) * s;
    }
};

// Probability that the m-penalized criterion deviates from the BIC under the
// full (alternative) model: Pr((d-d0) log m < Y1 < (d-d0) log n) with Y1
// noncentral chi-square.
inline double prob_case2a(const NestedModelSpec& spec) {
    spec.validate();
    if (spec.m > static_cast<double>(spec.n)) return 0.0;
    const double df = spec.d - spec.d0;
    const double lo = df * std::log(spec.m);
    const double hi = df * std::log(static_cast<double>(spec.n));
    double p = noncentral_chi2_cdf(hi, df, spec.ncp()) -
               noncentral_chi2_cdf(lo, df, spec.ncp());
    return p < 0.0 ? 0.0 : p;
}

// Same deviation event under the null model, where the statistic is central
// chi-square: Pr((d-d0) log m < Y < (d-d0) log n).
inline double prob_case2b(const NestedModelSpec& spec) {
    spec.validate();
    if (spec.m > static_cast<double>(spec.n)) return 0.0;
    const double df = spec.d - spec.d0;
    const double lo = df * std::log(spec.m);
    const double hi = df * std::log(static_cast<double>(spec.n));
    double p = chi2_cdf(hi, df) - chi2_cdf(lo, df);
    return p < 0.0 ? 0.0 : p;
}

// Large-sample probability that the two criteria disagree under the null for
// any nested pair with d1 - d0 extra parameters: F(log n) - F(log m) where F
// is the F(d1-d0, infinity) distribution, i.e. chi^2_{d1-d0} / (d1-d0).
inline double prob_nested_limit(int d1, int d0, long n, double m) {
    if (d0 < 0 || d1 <= d0) throw DomainError("need d1 > d0 >= 0");
    if (n < 2) throw DomainError("need n >= 2");
    if (!(m > 1.0)) throw DomainError("need m > 1");
    if (m > static_cast<double>(n)) return 0.0;
    const double df = d1 - d0;
    double p = chi2_cdf(df * std::log(static_cast<double>(n)), df) -
               chi2_cdf(df * std::log(m), df);
    return p < 0.0 ? 0.0 : p;
}

enum class SweepAxis { N, D, D0 };

inline const char* sweep_axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::N: return "n";
        case SweepAxis::D: return "d";
        case SweepAxis::D0: return "d0";
    }
    return "?";
}

inline SweepAxis parse_sweep_axis(const std::string& s) {
    if (s == "n") return SweepAxis::N;
    if (s == "d") return SweepAxis::D;
    if (s == "d0") return SweepAxis::D0;
    throw InputError("unknown sweep axis '" + s + "' (expected n, d or d0)");
}

struct SweepRow {
    std::string axis;
    double value = 0.0;
    double m = 0.0;
    double prob_2a = 0.0;
    double prob_2b = 0.0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
};

// Deviation-probability curves over one swept axis, for each penalty in
// m_list. `base` supplies the fixed fields. When sweeping d, `d0_gap` keeps
// d0 at a fixed distance below d; otherwise d0 comes from `base`. Grid
// points that violate the nested-model constraints are skipped with a
// warning record.
inline SweepTable figure_sweep(SweepAxis axis, const std::vector<double>& grid,
                               const NestedModelSpec& base,
                               const std::vector<double>& m_list,
                               std::optional<int> d0_gap = {}) {
    if (grid.empty()) throw InputError("empty sweep grid");
    if (m_list.empty()) throw InputError("empty penalty list");
    for (double m : m_list) {
        if (m < 1.0) throw DomainError("penalty m must be >= 1");
    }

    SweepTable table;
    for (double value : grid) {
        NestedModelSpec spec = base;
        switch (axis) {
            case SweepAxis::N:
                spec.n = static_cast<long>(value);
                break;
            case SweepAxis::D:
                spec.d = static_cast<int>(value);
                if (d0_gap) spec.d0 = spec.d - *d0_gap;
                break;
            case SweepAxis::D0:
                spec.d0 = static_cast<int>(value);
                break;
        }
        try {
            spec.m = m_list.front();
            spec.validate();
        } catch (const DomainError& e) {
            table.warnings.push_back(std::string(sweep_axis_name(axis)) + "=" +
                                     std::to_string(value) + " skipped: " +
                                     e.what());
            continue;
        }
        for (double m : m_list) {
            spec.m = m;
            SweepRow row;
            row.axis = sweep_axis_name(axis);
            row.value = value;
            row.m = m;
            row.prob_2a = prob_case2a(spec);
            row.prob_2b = prob_case2b(spec);
            table.rows.push_back(row);
        }
    }
    return table;
}

}  // namespace ssclust
