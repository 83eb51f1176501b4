#pragma once

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ssclust/dataset.hpp"
#include "ssclust/init.hpp"
#include "ssclust/ssem.hpp"

namespace ssclust {

// Free-parameter count: G-1 mixing weights, G*dim mean coordinates, plus the
// covariance parameters of the constraint pattern.
inline long count_params(int G, int dim, CovModel model) {
    if (G < 1 || dim < 1) throw DomainError("count_params: G and dim must be >= 1");
    long cov = 0;
    switch (model) {
        case CovModel::EII: cov = 1; break;
        case CovModel::VII: cov = G; break;
        case CovModel::EEE: cov = static_cast<long>(dim) * (dim + 1) / 2; break;
        case CovModel::VVV: cov = static_cast<long>(G) * dim * (dim + 1) / 2; break;
    }
    return (G - 1) + static_cast<long>(G) * dim + cov;
}

// Modified BIC: 2 loglik - d log(n1), penalizing only the unlabeled count.
inline double bic_star(double loglik, long d, long n1) {
    if (n1 < 2) {
        throw UndefinedPenaltyError(
            "BIC* needs at least 2 unlabeled observations (n1=" +
            std::to_string(n1) + ")");
    }
    return 2.0 * loglik - static_cast<double>(d) * std::log(static_cast<double>(n1));
}

// Penalty-generalized criterion BIC'(m) = 2 loglik - d log(m).
inline double bic_prime(double loglik, long d, double m) {
    if (!(m > 1.0)) throw DomainError("BIC'(m) needs m > 1");
    return 2.0 * loglik - static_cast<double>(d) * std::log(m);
}

struct ModelScore {
    int G = 0;
    CovModel model = CovModel::EII;
    double loglik = std::numeric_limits<double>::quiet_NaN();
    long d = 0;
    long n1 = 0;
    double bic_star = std::numeric_limits<double>::quiet_NaN();
    std::map<double, double> bic_prime;  // m -> criterion value
    bool failed = false;
    std::string failure;
};

struct Candidate {
    ModelScore score;
    std::optional<FitResult> fit;
};

struct SearchOptions {
    std::vector<int> G_range;
    std::vector<CovModel> models{CovModel::EII, CovModel::VII, CovModel::EEE,
                                 CovModel::VVV};
    // Penalty argument for the selection criterion; unset means m = n1 (BIC*).
    std::optional<double> m;
    int restarts = 5;
    std::uint64_t seed = 0;
    FitOptions fit;
    int threads = 1;
};

struct SearchResult {
    std::size_t best_index = 0;
    std::vector<Candidate> candidates;

    const Candidate& best() const { return candidates[best_index]; }
};

namespace detail {

template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            body(i);
        }
    };
    std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

inline int cov_model_index(CovModel m) {
    switch (m) {
        case CovModel::EII: return 0;
        case CovModel::VII: return 1;
        case CovModel::EEE: return 2;
        case CovModel::VVV: return 3;
    }
    return 3;
}

// Candidate preference under equal criterion values: smaller d, then smaller
// G, then EII < VII < EEE < VVV.
inline bool tie_break_before(const ModelScore& a, const ModelScore& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.G != b.G) return a.G < b.G;
    return cov_model_index(a.model) < cov_model_index(b.model);
}

}  // namespace detail

// Fits every (G, model) candidate with `restarts` seeded ss-k-means++
// restarts each, keeping the restart with the highest converged
// log-likelihood. Candidates whose every restart fails (singular or emptied
// components) are returned with `failed` set. Per-candidate RNG streams are
// derived from (seed, G, model, restart), so results are independent of the
// execution schedule.
inline std::vector<Candidate> fit_candidates(const Dataset& data,
                                             const SearchOptions& opts) {
    if (opts.G_range.empty()) throw InputError("empty G range");
    if (opts.models.empty()) throw InputError("empty model list");
    if (opts.restarts < 1) throw InputError("restarts must be >= 1");
    for (int G : opts.G_range) data.validate(G);

    struct Job {
        int G;
        CovModel model;
    };
    std::vector<Job> jobs;
    for (int G : opts.G_range) {
        for (CovModel model : opts.models) jobs.push_back({G, model});
    }

    const long n1 = data.n_unlabeled();
    std::vector<Candidate> candidates(jobs.size());
    detail::parallel_for(jobs.size(), opts.threads, [&](std::size_t j) {
        const Job& job = jobs[j];
        Candidate cand;
        cand.score.G = job.G;
        cand.score.model = job.model;
        cand.score.d = count_params(job.G, data.dim(), job.model);
        cand.score.n1 = n1;

        std::string last_failure;
        for (int r = 0; r < opts.restarts; ++r) {
            std::uint64_t s = derive_seed(
                opts.seed,
                {static_cast<std::uint64_t>(job.G),
                 static_cast<std::uint64_t>(detail::cov_model_index(job.model)),
                 static_cast<std::uint64_t>(r)});
            try {
                GmmParams start = ss_kmeanspp(data, job.G, job.model, s);
                FitResult res = fit(data, job.G, job.model, start, opts.fit);
                if (!cand.fit || res.loglik > cand.fit->loglik) {
                    cand.fit = std::move(res);
                }
            } catch (const SingularModelError& e) {
                last_failure = e.what();
            } catch (const EmptyComponentError& e) {
                last_failure = e.what();
            } catch (const NumericUnderflowError& e) {
                last_failure = e.what();
            } catch (const InsufficientDataError& e) {
                last_failure = e.what();
            }
        }
        if (cand.fit) {
            cand.score.loglik = cand.fit->loglik;
            if (n1 >= 2) {
                cand.score.bic_star = bic_star(cand.fit->loglik, cand.score.d, n1);
                cand.score.bic_prime[static_cast<double>(n1)] = cand.score.bic_star;
            }
            cand.score.bic_prime[static_cast<double>(data.n())] =
                bic_prime(cand.fit->loglik, cand.score.d, static_cast<double>(data.n()));
            if (opts.m) {
                cand.score.bic_prime[*opts.m] =
                    bic_prime(cand.fit->loglik, cand.score.d, *opts.m);
            }
        } else {
            cand.score.failed = true;
            cand.score.failure = last_failure;
        }
        candidates[j] = std::move(cand);
    });
    return candidates;
}

// Index of the highest-scoring viable candidate under BIC'(m), or BIC* when
// `m` is unset. Throws NoViableModelError when every candidate failed.
inline std::size_t select_best(const std::vector<Candidate>& candidates,
                               std::optional<double> m, long n1) {
    bool found = false;
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Candidate& c = candidates[i];
        if (c.score.failed) continue;
        double value = m ? bic_prime(c.score.loglik, c.score.d, *m)
                         : bic_star(c.score.loglik, c.score.d, n1);
        if (!found || value > best_value ||
            (value == best_value &&
             detail::tie_break_before(c.score, candidates[best].score))) {
            found = true;
            best = i;
            best_value = value;
        }
    }
    if (!found) throw NoViableModelError("every candidate model failed to fit");
    return best;
}

// Exhaustive search over (G, covariance model) scored by the chosen
// criterion.
inline SearchResult model_search(const Dataset& data, const SearchOptions& opts) {
    if (!opts.m && data.n_unlabeled() < 2) {
        throw UndefinedPenaltyError(
            "BIC* selection needs at least 2 unlabeled observations; this "
            "dataset has " + std::to_string(data.n_unlabeled()));
    }
    SearchResult result;
    result.candidates = fit_candidates(data, opts);
    result.best_index = select_best(result.candidates, opts.m, data.n_unlabeled());
    return result;
}

}  // namespace ssclust
