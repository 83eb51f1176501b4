#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ssclust/errors.hpp"

namespace ssclust {

// Unlabeled marker in Dataset::labels.
inline constexpr int kUnlabeled = -1;

// Observations with a partial labeling. `labels[i]` is kUnlabeled or a class
// id in 0..C-2; `class_to_component` injectively maps class ids into mixture
// component indices 0..G-1 (identity unless the caller relabels).
struct Dataset {
    Eigen::MatrixXd x;  // n x dim
    std::vector<int> labels;
    std::vector<int> class_to_component;

    int n() const { return static_cast<int>(x.rows()); }
    int dim() const { return static_cast<int>(x.cols()); }
    int num_classes() const { return static_cast<int>(class_to_component.size()); }

    int n_unlabeled() const {
        int n1 = 0;
        for (int l : labels) n1 += (l == kUnlabeled);
        return n1;
    }

    int component_of_row(int i) const {
        return labels[i] == kUnlabeled ? -1 : class_to_component[labels[i]];
    }

    static Dataset unlabeled(Eigen::MatrixXd points) {
        Dataset d;
        d.labels.assign(static_cast<std::size_t>(points.rows()), kUnlabeled);
        d.x = std::move(points);
        return d;
    }

    // labels use the identity class -> component map.
    static Dataset with_labels(Eigen::MatrixXd points, std::vector<int> labels) {
        Dataset d;
        d.x = std::move(points);
        d.labels = std::move(labels);
        int max_class = -1;
        for (int l : d.labels) {
            if (l != kUnlabeled && l > max_class) max_class = l;
        }
        for (int c = 0; c <= max_class; ++c) d.class_to_component.push_back(c);
        return d;
    }

    void validate(int G) const {
        if (n() < 1) throw InputError("dataset is empty");
        if (static_cast<int>(labels.size()) != n()) {
            throw DimensionError("label vector length does not match row count");
        }
        const int C1 = num_classes();
        if (G < C1) {
            throw InputError("requested G=" + std::to_string(G) + " but " +
                             std::to_string(C1) + " labeled classes are present");
        }
        std::vector<bool> used(static_cast<std::size_t>(G), false);
        for (int c = 0; c < C1; ++c) {
            int j = class_to_component[c];
            if (j < 0 || j >= G) {
                throw InputError("class " + std::to_string(c) +
                                 " maps to component " + std::to_string(j) +
                                 " outside 1.." + std::to_string(G));
            }
            if (used[j]) {
                throw InputError("two classes map to component " +
                                 std::to_string(j + 1));
            }
            used[j] = true;
        }
        for (int i = 0; i < n(); ++i) {
            int l = labels[i];
            if (l != kUnlabeled && (l < 0 || l >= C1)) {
                throw InputError("row " + std::to_string(i + 1) +
                                 " has class id " + std::to_string(l) +
                                 " outside the declared classes");
            }
        }
    }
};

}  // namespace ssclust
