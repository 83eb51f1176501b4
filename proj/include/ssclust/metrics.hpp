#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ssclust/errors.hpp"
#include "ssclust/rng.hpp"

namespace ssclust {

namespace detail {

// Remaps arbitrary integer labels to dense 0..K-1 in first-appearance order.
inline std::vector<int> densify_labels(const std::vector<int>& labels, int* K_out) {
    std::unordered_map<int, int> ids;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, fresh] = ids.emplace(labels[i], static_cast<int>(ids.size()));
        (void)fresh;
        out[i] = it->second;
    }
    if (K_out) *K_out = static_cast<int>(ids.size());
    return out;
}

inline double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace detail

// Hubert-Arabie adjusted Rand index between two partitions, computed from
// the contingency table. Identical partitions score 1 even when the
// chance-agreement denominator degenerates (both partitions trivial).
inline double ari(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
    if (labels_a.size() != labels_b.size()) {
        throw DimensionError("ari: label vectors differ in length");
    }
    const std::size_t n = labels_a.size();
    if (n < 2) throw DimensionError("ari: need at least 2 observations");

    int ka = 0, kb = 0;
    std::vector<int> a = detail::densify_labels(labels_a, &ka);
    std::vector<int> b = detail::densify_labels(labels_b, &kb);

    std::vector<double> counts(static_cast<std::size_t>(ka) * kb, 0.0);
    std::vector<double> row(ka, 0.0), col(kb, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        counts[static_cast<std::size_t>(a[i]) * kb + b[i]] += 1.0;
        row[a[i]] += 1.0;
        col[b[i]] += 1.0;
    }

    double sum_cells = 0.0;
    for (double c : counts) sum_cells += detail::choose2(c);
    double sum_rows = 0.0;
    for (double r : row) sum_rows += detail::choose2(r);
    double sum_cols = 0.0;
    for (double c : col) sum_cols += detail::choose2(c);

    const double expected = sum_rows * sum_cols / detail::choose2(static_cast<double>(n));
    const double maximum = 0.5 * (sum_rows + sum_cols);
    if (maximum == expected) return 1.0;
    return (sum_cells - expected) / (maximum - expected);
}

// Hellinger distance sqrt(1 - sum_k sqrt(p_k q_k)) between two discrete
// distributions over the same support.
inline double hellinger(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) {
        throw DimensionError("hellinger: distributions differ in length");
    }
    double sp = 0.0, sq = 0.0, bc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] < 0.0 || q[k] < 0.0) {
            throw DomainError("hellinger: negative probability entry");
        }
        sp += p[k];
        sq += q[k];
        bc += std::sqrt(p[k] * q[k]);
    }
    if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9) {
        throw DomainError("hellinger: inputs must sum to 1");
    }
    double h2 = 1.0 - bc;
    return std::sqrt(h2 < 0.0 ? 0.0 : h2);
}

struct TestOutcome {
    double statistic = 0.0;
    std::vector<double> null_samples;
    double p_value = 1.0;
};

// Permutation test for whether two lines share one cluster-membership
// distribution. The observed statistic is the Hellinger distance between the
// two lines' empirical membership distributions; the null is simulated by
// permuting the line ids with cluster assignments fixed. Returns the add-one
// empirical p-value (1 + #{H_i >= H}) / (1 + B), which is never zero.
inline TestOutcome line_difference_test(const std::vector<int>& assignments,
                                        const std::vector<int>& lines, int B,
                                        std::uint64_t seed) {
    if (assignments.size() != lines.size()) {
        throw DimensionError("assignments and lines differ in length");
    }
    if (assignments.empty()) throw DegenerateTestError("empty input");
    if (B < 1) throw InputError("need at least one permutation");

    std::vector<int> distinct;
    for (int l : lines) {
        if (std::find(distinct.begin(), distinct.end(), l) == distinct.end()) {
            distinct.push_back(l);
        }
    }
    if (distinct.size() < 2) {
        throw DegenerateTestError("one of the lines has zero members");
    }
    if (distinct.size() > 2) {
        throw DomainError("line ids must take exactly two values");
    }
    std::sort(distinct.begin(), distinct.end());

    int K = 0;
    std::vector<int> clusters = detail::densify_labels(assignments, &K);
    std::vector<int> side(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        side[i] = lines[i] == distinct[1];
    }

    auto membership_distance = [&](const std::vector<int>& which) {
        std::vector<double> p(K, 0.0), q(K, 0.0);
        double np = 0.0, nq = 0.0;
        for (std::size_t i = 0; i < which.size(); ++i) {
            if (which[i]) {
                q[clusters[i]] += 1.0;
                nq += 1.0;
            } else {
                p[clusters[i]] += 1.0;
                np += 1.0;
            }
        }
        for (int k = 0; k < K; ++k) {
            p[k] /= np;
            q[k] /= nq;
        }
        return hellinger(p, q);
    };

    TestOutcome out;
    out.statistic = membership_distance(side);

    auto rng = make_rng(seed, {0x68657374ULL});
    out.null_samples.reserve(static_cast<std::size_t>(B));
    int exceed = 0;
    std::vector<int> permuted = side;
    for (int b = 0; b < B; ++b) {
        shuffle_vector(permuted, rng);
        double h = membership_distance(permuted);
        out.null_samples.push_back(h);
        if (h >= out.statistic - 1e-12) ++exceed;
    }
    out.p_value = (1.0 + exceed) / (1.0 + B);
    return out;
}

inline constexpr int kAnsweringTimeMin = 2;
inline constexpr int kAnsweringTimeMax = 30;

// Smallest q0 such that the test stays significant (p <= alpha) for every
// nested sample size q0..30; nullopt when even the largest sample is not
// significant.
inline std::optional<int> answering_time(const std::map<int, double>& p_values,
                                         double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0, 1)");
    }
    for (int q = kAnsweringTimeMin; q <= kAnsweringTimeMax; ++q) {
        if (!p_values.count(q)) {
            throw InputError("missing p-value for sample size " + std::to_string(q));
        }
    }
    if (p_values.at(kAnsweringTimeMax) > alpha) return std::nullopt;
    int q0 = kAnsweringTimeMax;
    while (q0 > kAnsweringTimeMin && p_values.at(q0 - 1) <= alpha) --q0;
    return q0;
}

}  // namespace ssclust
