#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ssclust/dataset.hpp"
#include "ssclust/gaussian.hpp"

namespace ssclust {

struct GmmParams {
    Eigen::VectorXd weights;  // mixing weights over the unlabeled density
    std::vector<GaussianComponent> components;
    CovModel model = CovModel::VVV;

    int G() const { return static_cast<int>(components.size()); }
    int dim() const { return components.empty() ? 0 : components.front().dim(); }

    void validate() const {
        if (components.empty()) throw InputError("mixture has no components");
        if (weights.size() != G()) {
            throw DimensionError("weight vector length does not match G");
        }
        if (weights.minCoeff() < 0.0 || std::abs(weights.sum() - 1.0) > 1e-12) {
            throw DomainError("mixing weights must be a simplex vector");
        }
        for (const auto& c : components) {
            if (c.dim() != dim() || c.covariance.rows() != dim() ||
                c.covariance.cols() != dim()) {
                throw DimensionError("component dimensions are inconsistent");
            }
        }
    }
};

struct FitOptions {
    int max_iter = 500;
    double rel_tol = 1e-8;
};

struct FitResult {
    GmmParams params;
    Eigen::MatrixXd resp;  // n x G
    double loglik = -std::numeric_limits<double>::infinity();
    std::vector<double> loglik_trace;
    int iterations = 0;
    bool converged = false;
};

struct EStepResult {
    Eigen::MatrixXd resp;
    double loglik;
};

// Posterior responsibilities and the observed-data log-likelihood.
//
// Unlabeled rows get softmax responsibilities computed in log space with
// max-subtraction and contribute log sum_k pi_k phi_k(x_i). Labeled rows are
// one-hot at their mapped component and contribute log phi_{j_c}(x_i) with no
// mixing-weight factor: their group densities carry a degenerate weight of 1.
inline EStepResult e_step(const Dataset& data, const GmmParams& params) {
    params.validate();
    const int n = data.n();
    const int G = params.G();
    if (data.dim() != params.dim()) {
        throw DimensionError("data dimension does not match mixture dimension");
    }

    std::vector<GaussianDensity> dens;
    dens.reserve(G);
    for (int k = 0; k < G; ++k) {
        dens.emplace_back(params.components[k], k);
    }
    Eigen::VectorXd log_pi(G);
    for (int k = 0; k < G; ++k) {
        log_pi[k] = params.weights[k] > 0.0
                        ? std::log(params.weights[k])
                        : -std::numeric_limits<double>::infinity();
    }

    Eigen::MatrixXd resp(n, G);
    double loglik = 0.0;
    Eigen::VectorXd logw(G);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd xi = data.x.row(i).transpose();
        const int comp = data.component_of_row(i);
        if (comp >= 0) {
            resp.row(i).setZero();
            resp(i, comp) = 1.0;
            loglik += dens[comp](xi);
            continue;
        }
        for (int k = 0; k < G; ++k) logw[k] = log_pi[k] + dens[k](xi);
        double mx = logw.maxCoeff();
        if (!std::isfinite(mx)) {
            throw NumericUnderflowError("all component densities underflowed in row " +
                                        std::to_string(i + 1));
        }
        double sum = (logw.array() - mx).exp().sum();
        resp.row(i) = ((logw.array() - mx).exp() / sum).transpose();
        loglik += mx + std::log(sum);
    }
    return {std::move(resp), loglik};
}

// Responsibility-weighted parameter updates. Means and covariances use all
// rows; mixing weights are estimated from the unlabeled rows only (labeled
// groups carry degenerate weights and do not inform pi). With no unlabeled
// rows, pi falls back to the labeled class proportions.
inline GmmParams m_step(const Dataset& data, const Eigen::MatrixXd& resp,
                        CovModel model) {
    const int n = data.n();
    const int G = static_cast<int>(resp.cols());
    if (resp.rows() != n) throw DimensionError("resp rows != data rows");

    Eigen::VectorXd nk = resp.colwise().sum();
    for (int k = 0; k < G; ++k) {
        if (nk[k] < 1e-8) {
            throw EmptyComponentError("component " + std::to_string(k + 1) +
                                      " has effective count " +
                                      std::to_string(nk[k]));
        }
    }

    Eigen::MatrixXd means = (resp.transpose() * data.x).array().colwise() /
                            nk.array();

    Eigen::VectorXd pi(G);
    const int n1 = data.n_unlabeled();
    if (n1 > 0) {
        pi.setZero();
        for (int i = 0; i < n; ++i) {
            if (data.labels[i] == kUnlabeled) pi += resp.row(i).transpose();
        }
        pi /= static_cast<double>(n1);
    } else {
        pi = nk / nk.sum();
    }
    pi /= pi.sum();

    auto covs = mstep_covariances(data.x, resp, means, model);

    GmmParams params;
    params.model = model;
    params.weights = pi;
    params.components.resize(G);
    for (int k = 0; k < G; ++k) {
        params.components[k].mean = means.row(k).transpose();
        params.components[k].covariance = covs[k];
    }
    return params;
}

// Alternates e_step / m_step from `init` until the relative log-likelihood
// change |dl| / (1 + |l|) drops below rel_tol or max_iter is reached.
inline FitResult fit(const Dataset& data, int G, CovModel model,
                     const GmmParams& init, const FitOptions& opts = {}) {
    data.validate(G);
    init.validate();
    if (G < 1) throw DomainError("G must be at least 1");
    if (init.G() != G) throw DimensionError("init has wrong component count");
    if (init.model != model) {
        throw InputError("init covariance model does not match requested model");
    }

    FitResult out;
    out.params = init;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int it = 0; it < opts.max_iter; ++it) {
        EStepResult e = e_step(data, out.params);
        out.resp = std::move(e.resp);
        out.loglik = e.loglik;
        out.loglik_trace.push_back(e.loglik);
        out.iterations = it + 1;
        if (it > 0 && std::abs(e.loglik - prev) / (1.0 + std::abs(e.loglik)) <
                          opts.rel_tol) {
            out.converged = true;
            break;
        }
        prev = e.loglik;
        out.params = m_step(data, out.resp, model);
    }
    return out;
}

// Row-wise MAP assignment; ties break toward the lowest component index.
inline std::vector<int> map_labels(const Eigen::MatrixXd& resp) {
    std::vector<int> out(static_cast<std::size_t>(resp.rows()));
    for (Eigen::Index i = 0; i < resp.rows(); ++i) {
        int best = 0;
        for (Eigen::Index k = 1; k < resp.cols(); ++k) {
            if (resp(i, k) > resp(i, best)) best = static_cast<int>(k);
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

}  // namespace ssclust
