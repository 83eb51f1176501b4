#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ssclust/dataset.hpp"
#include "ssclust/errors.hpp"
#include "ssclust/metrics.hpp"
#include "ssclust/rng.hpp"
#include "ssclust/select.hpp"

namespace ssclust {

struct MixtureSpec {
    Eigen::VectorXd weights;
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covariances;

    int G() const { return static_cast<int>(means.size()); }
    int dim() const { return means.empty() ? 0 : static_cast<int>(means.front().size()); }

    void validate() const {
        if (means.empty()) throw InputError("mixture spec has no components");
        if (weights.size() != G() || static_cast<int>(covariances.size()) != G()) {
            throw DimensionError("mixture spec sizes are inconsistent");
        }
        if (weights.minCoeff() < 0.0 || std::abs(weights.sum() - 1.0) > 1e-9) {
            throw DomainError("mixture weights must be a simplex vector");
        }
        for (int k = 0; k < G(); ++k) {
            if (means[k].size() != dim() || covariances[k].rows() != dim() ||
                covariances[k].cols() != dim()) {
                throw DimensionError("mixture spec dimensions are inconsistent");
            }
            if (Eigen::LLT<Eigen::MatrixXd>(covariances[k]).info() != Eigen::Success) {
                throw DomainError("covariance of component " + std::to_string(k + 1) +
                                  " is not positive definite");
            }
        }
    }
};

struct MixtureSample {
    Eigen::MatrixXd points;       // n x dim
    std::vector<int> components;  // latent component per row
};

namespace detail {

inline Eigen::VectorXd gaussian_draw(std::mt19937_64& rng,
                                     const Eigen::VectorXd& mean,
                                     const Eigen::MatrixXd& chol_lower) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd z(mean.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = gauss(rng);
    return mean + chol_lower * z;
}

}  // namespace detail

// n i.i.d. draws from the mixture with the latent component recorded per
// row: draw the component from the weights, then the point from that
// component via its Cholesky factor.
inline MixtureSample sample_mixture(const MixtureSpec& spec, int n,
                                    std::uint64_t seed) {
    spec.validate();
    if (n < 0) throw DomainError("sample size must be nonnegative");

    std::vector<Eigen::MatrixXd> chol(spec.G());
    for (int k = 0; k < spec.G(); ++k) {
        chol[k] = Eigen::LLT<Eigen::MatrixXd>(spec.covariances[k]).matrixL();
    }
    std::vector<double> w(spec.weights.data(), spec.weights.data() + spec.G());

    auto rng = make_rng(seed, {0x73616d70ULL});
    MixtureSample out;
    out.points.resize(n, spec.dim());
    out.components.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        int k = static_cast<int>(sample_weighted(rng, w));
        out.components[static_cast<std::size_t>(i)] = k;
        out.points.row(i) =
            detail::gaussian_draw(rng, spec.means[k], chol[k]).transpose();
    }
    return out;
}

// Random correlation matrix drawn uniformly from the space of correlation
// matrices by the onion construction: grow one variable at a time, drawing
// the squared partial-correlation radius from the matching beta distribution
// and a direction uniformly on the sphere, then scale through the current
// Cholesky factor so the diagonal stays 1.
inline Eigen::MatrixXd onion_correlation(int dim, std::uint64_t seed) {
    if (dim < 1) throw DomainError("dimension must be >= 1");
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(dim, dim);
    if (dim == 1) return r;

    auto rng = make_rng(seed, {0x6f6e696fULL});
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw_beta = [&](double a, double b) {
        std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
        double x = ga(rng);
        double y = gb(rng);
        return x / (x + y);
    };

    double beta = dim / 2.0;
    r(0, 1) = r(1, 0) = 2.0 * draw_beta(beta, beta) - 1.0;

    for (int k = 2; k < dim; ++k) {
        beta -= 0.5;
        double radius2 = draw_beta(k / 2.0, beta);
        Eigen::VectorXd u(k);
        for (int j = 0; j < k; ++j) u[j] = gauss(rng);
        u *= std::sqrt(radius2) / u.norm();

        Eigen::MatrixXd lower =
            Eigen::LLT<Eigen::MatrixXd>(r.topLeftCorner(k, k)).matrixL();
        Eigen::VectorXd z = lower * u;
        r.block(0, k, k, 1) = z;
        r.block(k, 0, 1, k) = z.transpose();
    }
    return r;
}

// Three-component benchmark mixture: two strongly overlapping correlated
// components at the origin and a compact third component at (2, 2) whose
// covariance is a fresh onion-method correlation matrix divided by 6.
inline MixtureSpec benchmark_mixture(const Eigen::VectorXd& weights,
                                     std::uint64_t seed) {
    if (weights.size() != 3) throw DimensionError("benchmark mixture expects 3 weights");
    MixtureSpec spec;
    spec.weights = weights;
    spec.means = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.0, 0.0),
                  Eigen::Vector2d(2.0, 2.0)};
    Eigen::Matrix2d s1;
    s1 << 0.5, 0.35, 0.35, 0.5;
    Eigen::Matrix2d s2;
    s2 << 0.5, -0.35, -0.35, 0.5;
    spec.covariances = {s1, s2, onion_correlation(2, seed) / 6.0};
    return spec;
}

struct PenaltySweepConfig {
    int n_s = 100;
    std::vector<int> n_u_list{5, 10, 20, 40, 80, 160};
    int m_grid_size = 12;
    int replicates = 50;
    std::vector<int> G_range{2, 3, 4, 5};
    std::vector<CovModel> models{CovModel::EII, CovModel::VII, CovModel::EEE,
                                 CovModel::VVV};
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
    int restarts = 5;
    std::uint64_t seed = 0;
    FitOptions fit;
    int threads = 1;
};

struct PenaltySweepRow {
    int n_u = 0;
    double m = 0.0;
    int replicate = 0;
    int selected_G = 0;
    CovModel selected_model = CovModel::EII;
    double ari = 0.0;
};

// One penalty-sweep experiment: per replicate, draw n_s labeled points split
// evenly between the first two benchmark components plus n_u unlabeled
// points from the full mixture, fit every (G, model) candidate once, then
// re-select across the penalty grid m in [n_u, n_u + n_s] and score the ARI
// of the unlabeled MAP assignments against the true components. The fits do
// not depend on m, so each grid point only re-ranks the same candidates.
inline std::vector<PenaltySweepRow> penalty_sweep_experiment(
    const PenaltySweepConfig& cfg) {
    if (cfg.n_s < 1) throw DomainError("need at least one supervised point");
    if (cfg.replicates < 1) throw DomainError("need at least one replicate");
    if (cfg.m_grid_size < 2) throw DomainError("penalty grid needs >= 2 points");
    for (int n_u : cfg.n_u_list) {
        if (n_u < 2) throw DomainError("each n_u must be >= 2");
    }

    struct Task {
        int n_u;
        int replicate;
    };
    std::vector<Task> tasks;
    for (int n_u : cfg.n_u_list) {
        for (int rep = 0; rep < cfg.replicates; ++rep) tasks.push_back({n_u, rep});
    }
    std::vector<std::vector<PenaltySweepRow>> buckets(tasks.size());

    detail::parallel_for(tasks.size(), cfg.threads, [&](std::size_t t) {
        const Task task = tasks[t];
        const std::uint64_t rep_seed =
            derive_seed(cfg.seed, {static_cast<std::uint64_t>(task.n_u),
                                   static_cast<std::uint64_t>(task.replicate)});

        MixtureSpec spec = benchmark_mixture(cfg.weights, derive_seed(rep_seed, {1}));

        const int n_first = cfg.n_s / 2;
        const int n = cfg.n_s + task.n_u;
        Eigen::MatrixXd x(n, spec.dim());
        std::vector<int> labels(static_cast<std::size_t>(n), kUnlabeled);

        MixtureSpec comp0{Eigen::VectorXd::Ones(1), {spec.means[0]}, {spec.covariances[0]}};
        MixtureSpec comp1{Eigen::VectorXd::Ones(1), {spec.means[1]}, {spec.covariances[1]}};
        MixtureSample lab0 = sample_mixture(comp0, n_first, derive_seed(rep_seed, {2}));
        MixtureSample lab1 =
            sample_mixture(comp1, cfg.n_s - n_first, derive_seed(rep_seed, {3}));
        MixtureSample unlab =
            sample_mixture(spec, task.n_u, derive_seed(rep_seed, {4}));

        x.topRows(n_first) = lab0.points;
        x.middleRows(n_first, cfg.n_s - n_first) = lab1.points;
        x.bottomRows(task.n_u) = unlab.points;
        for (int i = 0; i < n_first; ++i) labels[static_cast<std::size_t>(i)] = 0;
        for (int i = n_first; i < cfg.n_s; ++i) labels[static_cast<std::size_t>(i)] = 1;

        Dataset data = Dataset::with_labels(std::move(x), std::move(labels));

        SearchOptions sopts;
        sopts.G_range = cfg.G_range;
        sopts.models = cfg.models;
        sopts.restarts = cfg.restarts;
        sopts.seed = derive_seed(rep_seed, {5});
        sopts.fit = cfg.fit;
        std::vector<Candidate> candidates = fit_candidates(data, sopts);

        std::vector<double> loglik_before;
        for (const auto& c : candidates) loglik_before.push_back(c.score.loglik);

        bool any_viable = false;
        for (const auto& c : candidates) any_viable |= !c.score.failed;
        if (!any_viable) return;  // replicate recorded no rows

        for (int gi = 0; gi < cfg.m_grid_size; ++gi) {
            const double m =
                task.n_u + (static_cast<double>(cfg.n_s) * gi) / (cfg.m_grid_size - 1);
            std::size_t best = select_best(candidates, m, data.n_unlabeled());
            const Candidate& c = candidates[best];

            std::vector<int> assigned = map_labels(c.fit->resp);
            std::vector<int> pred, truth;
            for (int i = 0; i < task.n_u; ++i) {
                pred.push_back(assigned[static_cast<std::size_t>(cfg.n_s + i)]);
                truth.push_back(unlab.components[static_cast<std::size_t>(i)]);
            }

            PenaltySweepRow row;
            row.n_u = task.n_u;
            row.m = m;
            row.replicate = task.replicate;
            row.selected_G = c.score.G;
            row.selected_model = c.score.model;
            row.ari = ari(pred, truth);
            buckets[t].push_back(row);
        }

        // Scoring across the grid must not have touched the fits.
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (!candidates[i].score.failed &&
                candidates[i].score.loglik != loglik_before[i]) {
                throw Error("penalty grid scoring mutated a candidate fit");
            }
        }
    });

    std::vector<PenaltySweepRow> rows;
    for (auto& bucket : buckets) {
        rows.insert(rows.end(), bucket.begin(), bucket.end());
    }
    return rows;
}

}  // namespace ssclust
