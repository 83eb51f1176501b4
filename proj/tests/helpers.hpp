#pragma once

// Test-only utilities and independent oracles. Everything here is written
// directly from first principles (explicit inverses, pair counting, plain
// loops) so it shares no code path with the library it checks.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ssclust/gaussian.hpp"

namespace test_helpers {

inline Eigen::MatrixXd random_spd(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) a(i, j) = gauss(rng);
    }
    return a * a.transpose() / dim + 0.2 * Eigen::MatrixXd::Identity(dim, dim);
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng,
                                     double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
    }
    return m;
}

inline std::vector<double> random_simplex(int k, std::mt19937_64& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(k);
    double total = 0.0;
    for (double& v : w) {
        v = expo(rng) + 1e-3;
        total += v;
    }
    for (double& v : w) v /= total;
    return w;
}

// Gaussian blobs: rows grouped by cluster, isotropic unit covariance scaled
// by sigma around the given centers.
struct Blobs {
    Eigen::MatrixXd x;
    std::vector<int> truth;
};

inline Blobs make_blobs(const std::vector<Eigen::VectorXd>& centers, int per_cluster,
                        double sigma, std::mt19937_64& rng) {
    const int k = static_cast<int>(centers.size());
    const int dim = static_cast<int>(centers.front().size());
    Blobs out;
    out.x.resize(k * per_cluster, dim);
    std::normal_distribution<double> gauss(0.0, sigma);
    int row = 0;
    for (int c = 0; c < k; ++c) {
        for (int i = 0; i < per_cluster; ++i, ++row) {
            for (int j = 0; j < dim; ++j) {
                out.x(row, j) = centers[c][j] + gauss(rng);
            }
            out.truth.push_back(c);
        }
    }
    return out;
}

// log N(x; mu, Sigma) through the explicit inverse and determinant.
inline double log_gaussian_bruteforce(const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& mu,
                                      const Eigen::MatrixXd& sigma) {
    const double dim = static_cast<double>(x.size());
    Eigen::VectorXd diff = x - mu;
    double quad = diff.dot(sigma.inverse() * diff);
    return -0.5 * (dim * std::log(2.0 * M_PI) + std::log(sigma.determinant()) + quad);
}

// Pair-counting adjusted Rand index: classify every pair of observations as
// together/apart in each partition and apply the Hubert-Arabie form
// 2(ad - bc) / ((a+b)(b+d) + (a+c)(c+d)).
inline double ari_pair_oracle(const std::vector<int>& la, const std::vector<int>& lb) {
    const std::size_t n = la.size();
    double a = 0, b = 0, c = 0, d = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool same_a = la[i] == la[j];
            bool same_b = lb[i] == lb[j];
            if (same_a && same_b) a += 1;
            else if (same_a && !same_b) b += 1;
            else if (!same_a && same_b) c += 1;
            else d += 1;
        }
    }
    double denom = (a + b) * (b + d) + (a + c) * (c + d);
    if (denom == 0.0) return 1.0;
    return 2.0 * (a * d - b * c) / denom;
}

// Kolmogorov statistic of a sample against U(0, 1).
inline double ks_uniform(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double hi = (i + 1) / n - v[i];
        double lo = v[i] - i / n;
        ks = std::max(ks, std::max(hi, lo));
    }
    return ks;
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        double fa = static_cast<double>(i) / a.size();
        double fb = static_cast<double>(j) / b.size();
        ks = std::max(ks, std::abs(fa - fb));
    }
    return ks;
}

// Plain unsupervised EM written from the textbook formulas: densities via
// explicit inverses, covariance constraints applied directly. Runs exactly
// `iters` iterations of (log-likelihood, responsibilities, update) and
// returns the final log-likelihood, which corresponds to the parameters
// produced by the (iters-1)-th update.
struct RefMixture {
    std::vector<double> weights;
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covs;
};

inline double reference_em(const Eigen::MatrixXd& x, RefMixture params,
                           ssclust::CovModel model, int iters) {
    const int n = static_cast<int>(x.rows());
    const int dim = static_cast<int>(x.cols());
    const int g = static_cast<int>(params.means.size());
    double loglik = 0.0;
    Eigen::MatrixXd resp(n, g);

    for (int it = 0; it < iters; ++it) {
        loglik = 0.0;
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd logw(g);
            for (int k = 0; k < g; ++k) {
                logw[k] = std::log(params.weights[k]) +
                          log_gaussian_bruteforce(x.row(i).transpose(),
                                                  params.means[k], params.covs[k]);
            }
            double mx = logw.maxCoeff();
            double sum = (logw.array() - mx).exp().sum();
            loglik += mx + std::log(sum);
            resp.row(i) = ((logw.array() - mx).exp() / sum).transpose();
        }
        if (it + 1 == iters) break;

        for (int k = 0; k < g; ++k) {
            double nk = resp.col(k).sum();
            params.weights[k] = nk / n;
            Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim);
            for (int i = 0; i < n; ++i) mu += resp(i, k) * x.row(i).transpose();
            mu /= nk;
            params.means[k] = mu;
        }
        std::vector<Eigen::MatrixXd> scatter(g);
        std::vector<double> nk(g);
        for (int k = 0; k < g; ++k) {
            nk[k] = resp.col(k).sum();
            scatter[k] = Eigen::MatrixXd::Zero(dim, dim);
            for (int i = 0; i < n; ++i) {
                Eigen::VectorXd diff = x.row(i).transpose() - params.means[k];
                scatter[k] += resp(i, k) * diff * diff.transpose();
            }
        }
        switch (model) {
            case ssclust::CovModel::VVV:
                for (int k = 0; k < g; ++k) params.covs[k] = scatter[k] / nk[k];
                break;
            case ssclust::CovModel::EEE: {
                Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(dim, dim);
                for (int k = 0; k < g; ++k) pooled += scatter[k];
                pooled /= n;
                for (int k = 0; k < g; ++k) params.covs[k] = pooled;
                break;
            }
            case ssclust::CovModel::VII:
                for (int k = 0; k < g; ++k) {
                    params.covs[k] = scatter[k].trace() / (nk[k] * dim) *
                                     Eigen::MatrixXd::Identity(dim, dim);
                }
                break;
            case ssclust::CovModel::EII: {
                double tr = 0.0;
                for (int k = 0; k < g; ++k) tr += scatter[k].trace();
                for (int k = 0; k < g; ++k) {
                    params.covs[k] =
                        tr / (static_cast<double>(n) * dim) *
                        Eigen::MatrixXd::Identity(dim, dim);
                }
                break;
            }
        }
    }
    return loglik;
}

}  // namespace test_helpers
