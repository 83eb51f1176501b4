#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "ssclust/errors.hpp"

namespace ssclust {

// Constraint pattern on the component covariances.
//   EII: shared spherical, Sigma_k = lambda I
//   VII: per-component spherical, Sigma_k = lambda_k I
//   EEE: one shared full covariance
//   VVV: free full covariance per component
enum class CovModel { EII, VII, EEE, VVV };

inline constexpr CovModel kAllCovModels[] = {CovModel::EII, CovModel::VII,
                                             CovModel::EEE, CovModel::VVV};

inline const char* cov_model_name(CovModel m) {
    switch (m) {
        case CovModel::EII: return "EII";
        case CovModel::VII: return "VII";
        case CovModel::EEE: return "EEE";
        case CovModel::VVV: return "VVV";
    }
    return "?";
}

inline CovModel parse_cov_model(const std::string& s) {
    for (CovModel m : kAllCovModels) {
        if (s == cov_model_name(m)) return m;
    }
    throw InputError("unknown covariance model '" + s +
                     "' (expected EII, VII, EEE or VVV)");
}

struct GaussianComponent {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;

    int dim() const { return static_cast<int>(mean.size()); }
};

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// One component's density with its Cholesky factor cached, so repeated
// evaluations cost one triangular solve each.
class GaussianDensity {
public:
    explicit GaussianDensity(const GaussianComponent& comp, int component_index = -1)
        : mean_(comp.mean) {
        const auto& sigma = comp.covariance;
        if (sigma.rows() != sigma.cols() || sigma.rows() != mean_.size()) {
            throw DimensionError("covariance shape does not match mean dimension");
        }
        if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            throw SingularModelError(
                "covariance of component " + std::to_string(component_index + 1) +
                " is not symmetric");
        }
        llt_.compute(sigma);
        if (llt_.info() != Eigen::Success) {
            throw SingularModelError(
                "covariance of component " + std::to_string(component_index + 1) +
                " is not positive definite");
        }
        double log_det = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
        log_norm_ = -0.5 * (mean_.size() * kLog2Pi + log_det);
    }

    // log phi(x; mean, covariance)
    double operator()(const Eigen::VectorXd& x) const {
        if (x.size() != mean_.size()) {
            throw DimensionError("point dimension does not match component");
        }
        Eigen::VectorXd z = llt_.matrixL().solve(x - mean_);
        return log_norm_ - 0.5 * z.squaredNorm();
    }

private:
    Eigen::VectorXd mean_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_norm_;
};

inline double log_density(const Eigen::VectorXd& x, const GaussianComponent& comp) {
    return GaussianDensity(comp)(x);
}

namespace detail {

// Ridge fix-up for estimates that came out numerically semi-definite: add
// eps*I with eps = 1e-10 times the mean diagonal entry when the smallest
// eigenvalue is nonpositive.
inline void regularize_covariance(Eigen::MatrixXd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma,
                                                      Eigen::EigenvaluesOnly);
    if (es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0) return;
    double eps = 1e-10 * sigma.diagonal().mean();
    sigma += eps * Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols());
}

inline void check_positive_definite(const Eigen::MatrixXd& sigma, int k) {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw SingularModelError("covariance estimate for component " +
                                 std::to_string(k + 1) +
                                 " is singular after regularization");
    }
}

}  // namespace detail

// Responsibility-weighted maximum-likelihood covariance estimates under the
// requested constraint pattern. With W_k = sum_i r_ik (x_i-mu_k)(x_i-mu_k)^T
// and n_k = sum_i r_ik:
//   VVV: W_k / n_k                 EEE: (sum_k W_k) / n
//   VII: tr(W_k) / (n_k dim) * I   EII: (sum_k tr W_k) / (n dim) * I
inline std::vector<Eigen::MatrixXd> mstep_covariances(
    const Eigen::MatrixXd& data,   // n x dim
    const Eigen::MatrixXd& resp,   // n x G
    const Eigen::MatrixXd& means,  // G x dim
    CovModel model) {
    const Eigen::Index n = data.rows();
    const Eigen::Index dim = data.cols();
    const Eigen::Index G = resp.cols();
    if (resp.rows() != n) throw DimensionError("resp rows != data rows");
    if (means.rows() != G || means.cols() != dim) {
        throw DimensionError("means shape does not match resp/data");
    }

    Eigen::VectorXd nk = resp.colwise().sum();
    for (Eigen::Index k = 0; k < G; ++k) {
        if (nk[k] < 1e-8) {
            throw EmptyComponentError("component " + std::to_string(k + 1) +
                                      " has effective count " +
                                      std::to_string(nk[k]));
        }
    }
    const double n_total = nk.sum();

    std::vector<Eigen::MatrixXd> scatter(G);
    for (Eigen::Index k = 0; k < G; ++k) {
        Eigen::MatrixXd centered = data.rowwise() - means.row(k);
        Eigen::MatrixXd w = centered.transpose() * resp.col(k).asDiagonal() * centered;
        scatter[k] = 0.5 * (w + w.transpose());
    }

    std::vector<Eigen::MatrixXd> result(G);
    switch (model) {
        case CovModel::VVV:
            for (Eigen::Index k = 0; k < G; ++k) result[k] = scatter[k] / nk[k];
            break;
        case CovModel::EEE: {
            Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(dim, dim);
            for (Eigen::Index k = 0; k < G; ++k) pooled += scatter[k];
            pooled /= n_total;
            for (Eigen::Index k = 0; k < G; ++k) result[k] = pooled;
            break;
        }
        case CovModel::VII:
            for (Eigen::Index k = 0; k < G; ++k) {
                double lambda = scatter[k].trace() / (nk[k] * dim);
                result[k] = lambda * Eigen::MatrixXd::Identity(dim, dim);
            }
            break;
        case CovModel::EII: {
            double tr = 0.0;
            for (Eigen::Index k = 0; k < G; ++k) tr += scatter[k].trace();
            double lambda = tr / (n_total * dim);
            for (Eigen::Index k = 0; k < G; ++k) {
                result[k] = lambda * Eigen::MatrixXd::Identity(dim, dim);
            }
            break;
        }
    }

    for (Eigen::Index k = 0; k < G; ++k) {
        detail::regularize_covariance(result[k]);
        detail::check_positive_definite(result[k], static_cast<int>(k));
    }
    return result;
}

}  // namespace ssclust
