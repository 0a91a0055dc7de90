#ifndef MIXEDSCORE_VERTEX_HUNTING_HPP
#define MIXEDSCORE_VERTEX_HUNTING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixedscore/errors.hpp"
#include "mixedscore/random.hpp"

namespace mixedscore {

enum class VhMethod { KMeans, KMedians };

template <typename Scalar>
struct ClusterCenters {
    /// K x d, row k is center k.
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> centers;
    std::vector<Eigen::Index> assignments;
    /// Mean distance from each row to its nearest center (L2 for k-means, L1 for k-medians).
    Scalar objective = 0;
    int iterations = 0;
    int restart = 0;
};

inline constexpr int kMaxLloydIterations = 300;

namespace detail {

// Point-to-center distance and the seeding weight derived from it.
template <VhMethod Method>
struct Metric;

template <>
struct Metric<VhMethod::KMeans> {
    template <typename A, typename B>
    static auto distance(const A& a, const B& b) { return (a - b).norm(); }
    template <typename A, typename B>
    static auto weight(const A& a, const B& b) { return (a - b).squaredNorm(); }
};

template <>
struct Metric<VhMethod::KMedians> {
    template <typename A, typename B>
    static auto distance(const A& a, const B& b) { return (a - b).template lpNorm<1>(); }
    template <typename A, typename B>
    static auto weight(const A& a, const B& b) { return (a - b).template lpNorm<1>(); }
};

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Eigen::Index distinct_row_count(const RowMatrix<Scalar>& rows) {
    std::vector<Eigen::Index> idx(rows.rows());
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    auto less = [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index c = 0; c < rows.cols(); ++c) {
            if (rows(a, c) < rows(b, c)) return true;
            if (rows(b, c) < rows(a, c)) return false;
        }
        return false;
    };
    std::sort(idx.begin(), idx.end(), less);
    Eigen::Index distinct = idx.empty() ? 0 : 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (less(idx[i - 1], idx[i])) ++distinct;
    return distinct;
}

template <typename Scalar>
Scalar median(std::vector<Scalar>& v) {
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    const Scalar upper = v[mid];
    if (v.size() % 2) return upper;
    const Scalar lower = *std::max_element(v.begin(), v.begin() + mid);
    return (lower + upper) / Scalar(2);
}

// Greedy distance-weighted seeding: each new center is the best of several
// candidates drawn proportionally to their weight to the nearest chosen center.
template <VhMethod Method, typename Scalar>
RowMatrix<Scalar> seed_centers(const RowMatrix<Scalar>& rows, Eigen::Index K, Rng& rng) {
    using M = Metric<Method>;
    const Eigen::Index n = rows.rows();
    RowMatrix<Scalar> centers(K, rows.cols());
    centers.row(0) = rows.row(static_cast<Eigen::Index>(uniform_index(rng, n)));

    std::vector<Scalar> closest(n);
    for (Eigen::Index i = 0; i < n; ++i) closest[i] = M::weight(rows.row(i), centers.row(0));

    const int trials = 2 + static_cast<int>(std::log(static_cast<double>(K)));
    for (Eigen::Index c = 1; c < K; ++c) {
        const Scalar total = std::accumulate(closest.begin(), closest.end(), Scalar(0));
        Eigen::Index best = -1;
        Scalar best_potential = std::numeric_limits<Scalar>::infinity();
        for (int t = 0; t < trials; ++t) {
            Eigen::Index pick = 0;
            if (total > Scalar(0)) {
                const Scalar target = static_cast<Scalar>(uniform01(rng)) * total;
                Scalar cumulative = 0;
                pick = -1;
                Eigen::Index last_positive = 0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (closest[i] <= Scalar(0)) continue;
                    last_positive = i;
                    cumulative += closest[i];
                    if (cumulative > target) {
                        pick = i;
                        break;
                    }
                }
                if (pick < 0) pick = last_positive;
            } else {
                pick = static_cast<Eigen::Index>(uniform_index(rng, n));
            }
            Scalar potential = 0;
            for (Eigen::Index i = 0; i < n; ++i)
                potential += std::min(closest[i], static_cast<Scalar>(M::weight(rows.row(i), rows.row(pick))));
            if (potential < best_potential) {
                best_potential = potential;
                best = pick;
            }
        }
        centers.row(c) = rows.row(best);
        for (Eigen::Index i = 0; i < n; ++i)
            closest[i] = std::min(closest[i], static_cast<Scalar>(M::weight(rows.row(i), centers.row(c))));
    }
    return centers;
}

template <VhMethod Method, typename Scalar>
Eigen::Index nearest(const RowMatrix<Scalar>& centers, const auto& row, Scalar* dist = nullptr) {
    Eigen::Index best = 0;
    Scalar best_d = Metric<Method>::distance(row, centers.row(0));
    for (Eigen::Index k = 1; k < centers.rows(); ++k) {
        const Scalar d = Metric<Method>::distance(row, centers.row(k));
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    if (dist) *dist = best_d;
    return best;
}

// Recomputes centers from assignments. An empty cluster takes over the point
// farthest from its current center (among clusters that can spare one).
template <VhMethod Method, typename Scalar>
void update_centers(const RowMatrix<Scalar>& rows, RowMatrix<Scalar>& centers, std::vector<Eigen::Index>& assign) {
    const Eigen::Index n = rows.rows(), K = centers.rows(), d = rows.cols();
    std::vector<Eigen::Index> counts(K, 0);
    for (auto a : assign) ++counts[a];
    for (Eigen::Index k = 0; k < K; ++k) {
        if (counts[k] > 0) continue;
        Eigen::Index far = -1;
        Scalar far_d = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (counts[assign[i]] < 2) continue;
            const Scalar di = Metric<Method>::distance(rows.row(i), centers.row(assign[i]));
            if (di > far_d) {
                far_d = di;
                far = i;
            }
        }
        --counts[assign[far]];
        assign[far] = k;
        counts[k] = 1;
    }

    if constexpr (Method == VhMethod::KMeans) {
        centers.setZero();
        for (Eigen::Index i = 0; i < n; ++i) centers.row(assign[i]) += rows.row(i);
        for (Eigen::Index k = 0; k < K; ++k) centers.row(k) /= static_cast<Scalar>(counts[k]);
    } else {
        std::vector<std::vector<Eigen::Index>> members(K);
        for (Eigen::Index i = 0; i < n; ++i) members[assign[i]].push_back(i);
        std::vector<Scalar> buf;
        for (Eigen::Index k = 0; k < K; ++k) {
            for (Eigen::Index c = 0; c < d; ++c) {
                buf.clear();
                for (auto i : members[k]) buf.push_back(rows(i, c));
                centers(k, c) = median(buf);
            }
        }
    }
}

template <VhMethod Method, typename Scalar>
ClusterCenters<Scalar> single_run(const RowMatrix<Scalar>& rows, Eigen::Index K, std::uint64_t seed) {
    Rng rng(seed);
    ClusterCenters<Scalar> out;
    out.centers = seed_centers<Method>(rows, K, rng);
    const Eigen::Index n = rows.rows();
    out.assignments.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) out.assignments[i] = nearest<Method>(out.centers, rows.row(i));

    bool converged = false;
    while (out.iterations < kMaxLloydIterations) {
        ++out.iterations;
        update_centers<Method>(rows, out.centers, out.assignments);
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto a = nearest<Method>(out.centers, rows.row(i));
            changed |= a != out.assignments[i];
            out.assignments[i] = a;
        }
        if (!changed) {
            converged = true;
            break;
        }
    }
    if (!converged) update_centers<Method>(rows, out.centers, out.assignments);
    Scalar sum = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Scalar d;
        nearest<Method>(out.centers, rows.row(i), &d);
        sum += d;
    }
    out.objective = sum / static_cast<Scalar>(n);
    return out;
}

}  // namespace detail

/// Mean over rows of the distance to the nearest center.
template <VhMethod Method, typename DerivedR, typename DerivedC>
typename DerivedR::Scalar clustering_objective(const Eigen::MatrixBase<DerivedR>& rows,
                                               const Eigen::MatrixBase<DerivedC>& centers) {
    using Scalar = typename DerivedR::Scalar;
    const detail::RowMatrix<Scalar> c = centers;
    Scalar sum = 0;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        Scalar d;
        detail::nearest<Method>(c, rows.row(i), &d);
        sum += d;
    }
    return sum / static_cast<Scalar>(rows.rows());
}

/// Best-of-`restarts` clustering of the rows into K groups. Restart r is
/// seeded from (seed, r), so a smaller restart count is a prefix of a larger
/// one; ties in the objective keep the earliest restart.
template <VhMethod Method, typename Derived>
ClusterCenters<typename Derived::Scalar> cluster_rows(const Eigen::MatrixBase<Derived>& rows, Eigen::Index K,
                                                      std::uint64_t seed, int restarts) {
    using Scalar = typename Derived::Scalar;
    if (K <= 0) throw ValidationError("number of clusters must be positive, got " + std::to_string(K));
    if (restarts < 1) throw ValidationError("restarts must be at least 1");
    const detail::RowMatrix<Scalar> data = rows;
    const auto distinct = detail::distinct_row_count(data);
    if (K > distinct)
        throw ValidationError("cannot form " + std::to_string(K) + " clusters from " + std::to_string(distinct) +
                              " distinct rows");

    ClusterCenters<Scalar> best;
    for (int r = 0; r < restarts; ++r) {
        auto run = detail::single_run<Method>(data, K, derive_seed(seed, {static_cast<std::uint64_t>(r)}));
        run.restart = r;
        if (r == 0 || run.objective < best.objective) best = std::move(run);
    }
    return best;
}

template <typename Derived>
ClusterCenters<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived>& rows, Eigen::Index K,
                                                std::uint64_t seed = 0, int restarts = 10) {
    return cluster_rows<VhMethod::KMeans>(rows, K, seed, restarts);
}

/// K-medians: L1 assignment and coordinate-wise median centers.
template <typename Derived>
ClusterCenters<typename Derived::Scalar> kmedians(const Eigen::MatrixBase<Derived>& rows, Eigen::Index K,
                                                  std::uint64_t seed = 0, int restarts = 10) {
    return cluster_rows<VhMethod::KMedians>(rows, K, seed, restarts);
}

template <typename Derived>
ClusterCenters<typename Derived::Scalar> hunt_vertices(const Eigen::MatrixBase<Derived>& rows, Eigen::Index K,
                                                       VhMethod method, std::uint64_t seed = 0, int restarts = 10) {
    return method == VhMethod::KMeans ? kmeans(rows, K, seed, restarts) : kmedians(rows, K, seed, restarts);
}

}  // namespace mixedscore

#endif  // MIXEDSCORE_VERTEX_HUNTING_HPP
