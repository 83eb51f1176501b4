#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "ssclust/gaussian.hpp"

using namespace ssclust;
using Catch::Approx;

namespace {

// Responsibility-weighted Gaussian log-likelihood with fixed means.
double weighted_loglik(const Eigen::MatrixXd& x, const Eigen::MatrixXd& resp,
                       const Eigen::MatrixXd& means,
                       const std::vector<Eigen::MatrixXd>& covs) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index k = 0; k < resp.cols(); ++k) {
            if (resp(i, k) == 0.0) continue;
            total += resp(i, k) *
                     test_helpers::log_gaussian_bruteforce(
                         x.row(i).transpose(), means.row(k).transpose(), covs[k]);
        }
    }
    return total;
}

}  // namespace

TEST_CASE("log_density closed-form values") {
    GaussianComponent standard{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1)};
    CHECK(log_density(Eigen::VectorXd::Zero(1), standard) ==
          Approx(-0.91893853320467274).margin(1e-12));

    for (int d = 1; d <= 5; ++d) {
        GaussianComponent c{Eigen::VectorXd::Constant(d, 1.5),
                            Eigen::MatrixXd::Identity(d, d)};
        CHECK(log_density(Eigen::VectorXd::Constant(d, 1.5), c) ==
              Approx(-0.5 * d * std::log(2.0 * M_PI)).margin(1e-12));
    }

    GaussianComponent diag{Eigen::VectorXd::Zero(2),
                           Eigen::Vector2d(4.0, 1.0).asDiagonal()};
    CHECK(log_density(Eigen::Vector2d(2.0, 1.0), diag) ==
          Approx(-3.5310242469692908).margin(1e-10));
}

TEST_CASE("log_density matches explicit inverse and determinant") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        int dim = 1 + rep % 10;
        Eigen::MatrixXd sigma = test_helpers::random_spd(dim, rng);
        Eigen::VectorXd mu(dim), x(dim);
        for (int j = 0; j < dim; ++j) {
            mu[j] = gauss(rng);
            x[j] = gauss(rng);
        }
        GaussianComponent comp{mu, sigma};
        CHECK(log_density(x, comp) ==
              Approx(test_helpers::log_gaussian_bruteforce(x, mu, sigma))
                  .margin(1e-10));
    }
}

TEST_CASE("log_density rejects bad covariances") {
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    GaussianComponent c{Eigen::VectorXd::Zero(2), indefinite};
    CHECK_THROWS_AS(log_density(Eigen::VectorXd::Zero(2), c), SingularModelError);

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.2, 1.0;
    GaussianComponent c2{Eigen::VectorXd::Zero(2), asym};
    CHECK_THROWS_AS(log_density(Eigen::VectorXd::Zero(2), c2), SingularModelError);

    GaussianComponent c3{Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3)};
    CHECK_THROWS_AS(log_density(Eigen::VectorXd::Zero(2), c3), DimensionError);
}

TEST_CASE("mstep_covariances hand-computed spherical scatter") {
    Eigen::MatrixXd x(2, 2);
    x << 0.0, 0.0, 2.0, 0.0;
    Eigen::MatrixXd resp = Eigen::MatrixXd::Ones(2, 1);
    Eigen::MatrixXd means(1, 2);
    means << 1.0, 0.0;
    auto covs = mstep_covariances(x, resp, means, CovModel::EII);
    CHECK((covs[0] - 0.5 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("mstep_covariances VVV with hard single component is the MLE") {
    std::mt19937_64 rng(5);
    Eigen::MatrixXd x = test_helpers::random_matrix(40, 3, rng);
    Eigen::MatrixXd resp = Eigen::MatrixXd::Ones(40, 1);
    Eigen::MatrixXd means = x.colwise().mean();
    auto covs = mstep_covariances(x, resp, means, CovModel::VVV);

    Eigen::MatrixXd centered = x.rowwise() - means.row(0);
    Eigen::MatrixXd mle = centered.transpose() * centered / 40.0;
    CHECK((covs[0] - mle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("EEE equals VVV when per-cluster scatters match") {
    std::mt19937_64 rng(7);
    Eigen::MatrixXd cluster = test_helpers::random_matrix(25, 2, rng);
    cluster.rowwise() -= cluster.colwise().mean();  // identical scatter by copy

    Eigen::MatrixXd x(50, 2);
    x.topRows(25) = cluster;
    x.bottomRows(25) = cluster.rowwise() + Eigen::RowVector2d(8.0, -3.0);

    Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(50, 2);
    resp.col(0).head(25).setOnes();
    resp.col(1).tail(25).setOnes();
    Eigen::MatrixXd means(2, 2);
    means.row(0) = cluster.colwise().mean();
    means.row(1) = means.row(0) + Eigen::RowVector2d(8.0, -3.0);

    auto eee = mstep_covariances(x, resp, means, CovModel::EEE);
    auto vvv = mstep_covariances(x, resp, means, CovModel::VVV);
    for (int k = 0; k < 2; ++k) {
        CHECK((eee[k] - vvv[k]).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("EII and VII agree for one component") {
    std::mt19937_64 rng(9);
    Eigen::MatrixXd x = test_helpers::random_matrix(30, 4, rng);
    Eigen::MatrixXd resp = Eigen::MatrixXd::Ones(30, 1);
    Eigen::MatrixXd means = x.colwise().mean();
    auto eii = mstep_covariances(x, resp, means, CovModel::EII);
    auto vii = mstep_covariances(x, resp, means, CovModel::VII);
    CHECK((eii[0] - vii[0]).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("estimates maximize the weighted log-likelihood in their class") {
    std::mt19937_64 rng(21);
    const int n = 60, dim = 2, G = 2;
    Eigen::MatrixXd x = test_helpers::random_matrix(n, dim, rng, 2.0);
    Eigen::MatrixXd resp(n, G);
    for (int i = 0; i < n; ++i) {
        double u = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        resp(i, 0) = u;
        resp(i, 1) = 1.0 - u;
    }
    Eigen::VectorXd nk = resp.colwise().sum();
    Eigen::MatrixXd means =
        (resp.transpose() * x).array().colwise() / nk.array();

    for (CovModel model : kAllCovModels) {
        auto covs = mstep_covariances(x, resp, means, model);
        double base = weighted_loglik(x, resp, means, covs);

        for (int trial = 0; trial < 10; ++trial) {
            auto perturbed = covs;
            switch (model) {
                case CovModel::EII: {
                    double f = trial % 2 ? 1.01 : 0.99;
                    for (auto& s : perturbed) s *= f;
                    break;
                }
                case CovModel::VII: {
                    double f = trial % 2 ? 1.02 : 0.98;
                    perturbed[trial % G] *= f;
                    break;
                }
                case CovModel::EEE: {
                    Eigen::MatrixXd delta = test_helpers::random_matrix(dim, dim, rng);
                    delta = 0.01 * (delta + delta.transpose());
                    for (auto& s : perturbed) s += delta;
                    break;
                }
                case CovModel::VVV: {
                    Eigen::MatrixXd delta = test_helpers::random_matrix(dim, dim, rng);
                    delta = 0.01 * (delta + delta.transpose());
                    perturbed[trial % G] += delta;
                    break;
                }
            }
            bool pd = true;
            for (const auto& s : perturbed) {
                pd &= Eigen::LLT<Eigen::MatrixXd>(s).info() == Eigen::Success;
            }
            if (!pd) continue;
            CHECK(weighted_loglik(x, resp, means, perturbed) <= base + 1e-8);
        }
    }
}

TEST_CASE("mstep_covariances error reporting") {
    Eigen::MatrixXd x(3, 2);
    x << 0, 0, 1, 1, 2, 0;
    Eigen::MatrixXd resp(3, 2);
    resp << 1, 0, 1, 0, 1, 0;  // second component empty
    Eigen::MatrixXd means(2, 2);
    means << 1, 1.0 / 3.0, 0, 0;
    CHECK_THROWS_AS(mstep_covariances(x, resp, means, CovModel::VVV),
                    EmptyComponentError);
    CHECK_THROWS_WITH(mstep_covariances(x, resp, means, CovModel::VVV),
                      Catch::Matchers::ContainsSubstring("component 2"));

    // Coincident points leave a zero scatter that no ridge can rescue.
    Eigen::MatrixXd dup = Eigen::MatrixXd::Zero(3, 2);
    Eigen::MatrixXd resp1 = Eigen::MatrixXd::Ones(3, 1);
    Eigen::MatrixXd mean1 = Eigen::MatrixXd::Zero(1, 2);
    CHECK_THROWS_AS(mstep_covariances(dup, resp1, mean1, CovModel::VVV),
                    SingularModelError);
}
