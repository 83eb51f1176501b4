#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "ssclust/dataset.hpp"
#include "ssclust/rng.hpp"
#include "ssclust/ssem.hpp"

namespace ssclust {

struct KmeansPartition {
    Eigen::MatrixXd centers;      // G x dim
    std::vector<int> assignment;  // cluster index per row
};

namespace detail {

inline void update_min_dist2(const Eigen::MatrixXd& x,
                             const Eigen::RowVectorXd& center,
                             std::vector<double>& min_dist2) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double d2 = (x.row(i) - center).squaredNorm();
        if (d2 < min_dist2[static_cast<std::size_t>(i)]) {
            min_dist2[static_cast<std::size_t>(i)] = d2;
        }
    }
}

}  // namespace detail

// Label-respecting k-means++ partition.
//
// Seeding places one mandatory center per labeled class at that class's
// labeled-point mean; the remaining centers are drawn by the usual
// D^2-weighted sampling over all points. Lloyd iterations then run with
// labeled points frozen to their class's cluster. An emptied cluster is
// re-seeded at the unlabeled point farthest from its nearest center.
inline KmeansPartition ss_kmeans_partition(const Dataset& data, int G,
                                           std::uint64_t seed) {
    data.validate(G);
    const int n = data.n();
    const int dim = data.dim();
    const int C1 = data.num_classes();
    if (n < G) {
        throw InsufficientDataError("need at least " + std::to_string(G) +
                                    " observations for G=" + std::to_string(G));
    }

    auto rng = make_rng(seed, {0x6b6d7070ULL});
    Eigen::MatrixXd centers(G, dim);
    std::vector<bool> seeded(static_cast<std::size_t>(G), false);

    for (int c = 0; c < C1; ++c) {
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(dim);
        int count = 0;
        for (int i = 0; i < n; ++i) {
            if (data.labels[i] == c) {
                mean += data.x.row(i);
                ++count;
            }
        }
        if (count == 0) {
            throw InputError("class " + std::to_string(c) + " has no labeled rows");
        }
        int k = data.class_to_component[c];
        centers.row(k) = mean / count;
        seeded[static_cast<std::size_t>(k)] = true;
    }

    std::vector<double> min_dist2(static_cast<std::size_t>(n),
                                  std::numeric_limits<double>::infinity());
    bool any_center = C1 > 0;
    if (any_center) {
        for (int k = 0; k < G; ++k) {
            if (seeded[static_cast<std::size_t>(k)]) {
                detail::update_min_dist2(data.x, centers.row(k), min_dist2);
            }
        }
    }
    for (int k = 0; k < G; ++k) {
        if (seeded[static_cast<std::size_t>(k)]) continue;
        std::size_t pick;
        if (!any_center) {
            pick = uniform_index(rng, static_cast<std::size_t>(n));
            any_center = true;
        } else {
            pick = sample_weighted(rng, min_dist2);
        }
        centers.row(k) = data.x.row(static_cast<Eigen::Index>(pick));
        seeded[static_cast<std::size_t>(k)] = true;
        detail::update_min_dist2(data.x, centers.row(k), min_dist2);
    }

    std::vector<int> assignment(static_cast<std::size_t>(n), -1);
    auto nearest_center = [&](int i) {
        int best = 0;
        double best_d2 = (data.x.row(i) - centers.row(0)).squaredNorm();
        for (int k = 1; k < G; ++k) {
            double d2 = (data.x.row(i) - centers.row(k)).squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = k;
            }
        }
        return best;
    };

    const int max_lloyd = 50;
    for (int it = 0; it < max_lloyd; ++it) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int comp = data.component_of_row(i);
            int next = comp >= 0 ? comp : nearest_center(i);
            if (next != assignment[static_cast<std::size_t>(i)]) {
                assignment[static_cast<std::size_t>(i)] = next;
                changed = true;
            }
        }

        std::vector<int> counts(static_cast<std::size_t>(G), 0);
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(G, dim);
        for (int i = 0; i < n; ++i) {
            int k = assignment[static_cast<std::size_t>(i)];
            sums.row(k) += data.x.row(i);
            ++counts[static_cast<std::size_t>(k)];
        }
        for (int k = 0; k < G; ++k) {
            if (counts[static_cast<std::size_t>(k)] > 0) {
                centers.row(k) = sums.row(k) / counts[static_cast<std::size_t>(k)];
                continue;
            }
            // Re-seed an emptied cluster at the farthest unlabeled point.
            int far = -1;
            double far_d2 = -1.0;
            for (int i = 0; i < n; ++i) {
                if (data.labels[i] != kUnlabeled) continue;
                double d2 = (data.x.row(i) -
                             centers.row(assignment[static_cast<std::size_t>(i)]))
                                .squaredNorm();
                if (d2 > far_d2) {
                    far_d2 = d2;
                    far = i;
                }
            }
            if (far >= 0) {
                centers.row(k) = data.x.row(far);
                changed = true;
            }
        }
        if (!changed && it > 0) break;
    }
    return {std::move(centers), std::move(assignment)};
}

// ss-k-means++ starting parameters: hard-partition the data as above, then
// read off mixing weights from cluster proportions over the unlabeled rows
// (uniform fallback when any weight degenerates), cluster means, and
// constrained covariance estimates on the hard partition.
inline GmmParams ss_kmeanspp(const Dataset& data, int G, CovModel model,
                             std::uint64_t seed) {
    KmeansPartition part = ss_kmeans_partition(data, G, seed);
    const int n = data.n();
    const int n1 = data.n_unlabeled();

    Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(n, G);
    for (int i = 0; i < n; ++i) {
        resp(i, part.assignment[static_cast<std::size_t>(i)]) = 1.0;
    }

    Eigen::VectorXd pi = Eigen::VectorXd::Zero(G);
    if (n1 > 0) {
        for (int i = 0; i < n; ++i) {
            if (data.labels[i] == kUnlabeled) {
                pi[part.assignment[static_cast<std::size_t>(i)]] += 1.0;
            }
        }
        pi /= static_cast<double>(n1);
    }
    if (n1 == 0 || pi.minCoeff() < 1e-6) {
        pi.setConstant(1.0 / G);
    }

    auto covs = mstep_covariances(data.x, resp, part.centers, model);

    GmmParams params;
    params.model = model;
    params.weights = pi;
    params.components.resize(static_cast<std::size_t>(G));
    for (int k = 0; k < G; ++k) {
        params.components[static_cast<std::size_t>(k)].mean =
            part.centers.row(k).transpose();
        params.components[static_cast<std::size_t>(k)].covariance = covs[k];
    }
    return params;
}

}  // namespace ssclust
