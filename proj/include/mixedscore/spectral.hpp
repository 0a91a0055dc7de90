#ifndef MIXEDSCORE_SPECTRAL_HPP
#define MIXEDSCORE_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixedscore/errors.hpp"
#include "mixedscore/graph.hpp"

namespace mixedscore {

/// Leading eigenpairs ordered by decreasing |lambda|.
///
/// vectors.col(k) is a unit eigenvector whose largest-magnitude entry is
/// nonnegative (first such entry on ties). scaled_vectors.col(k) is
/// values(k) * vectors.col(k).
template <typename Scalar>
struct EigenPairs {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Vector values;
    Matrix vectors;
    Matrix scaled_vectors;

    Eigen::Index count() const { return values.size(); }

    static EigenPairs from(Vector values, Matrix vectors) {
        EigenPairs e{std::move(values), std::move(vectors), Matrix()};
        e.scaled_vectors = e.vectors * e.values.asDiagonal();
        return e;
    }
};

template <typename Derived>
EigenPairs<typename Derived::Scalar> leading_eigenpairs(const Eigen::MatrixBase<Derived>& L, Eigen::Index count) {
    using Scalar = typename Derived::Scalar;
    using Matrix = typename EigenPairs<Scalar>::Matrix;
    using Vector = typename EigenPairs<Scalar>::Vector;
    using std::abs;

    const Eigen::Index n = L.rows();
    if (L.cols() != n) throw ValidationError("eigenpairs need a square matrix");
    if (count < 1 || count > n)
        throw ValidationError("requested " + std::to_string(count) + " eigenpairs of a " + std::to_string(n) + "x" +
                              std::to_string(n) + " matrix");
    const Matrix a = L;
    const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale)
        throw ValidationError("eigenpairs need a symmetric matrix");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");

    // Descending magnitude; +lambda before -lambda on a tie. The solver's
    // ascending order settles repeated eigenvalues.
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto& evals = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        const auto ax = abs(evals(x)), ay = abs(evals(y));
        return ax != ay ? ax > ay : evals(x) > evals(y);
    });

    Vector values(count);
    Matrix vectors(n, count);
    for (Eigen::Index k = 0; k < count; ++k) {
        values(k) = evals(order[k]);
        vectors.col(k) = solver.eigenvectors().col(order[k]).normalized();
        Eigen::Index peak = 0;
        for (Eigen::Index i = 1; i < n; ++i)
            if (abs(vectors(i, k)) > abs(vectors(peak, k))) peak = i;
        if (vectors(peak, k) < Scalar(0)) vectors.col(k) = -vectors.col(k);
    }
    return EigenPairs<Scalar>::from(std::move(values), std::move(vectors));
}

template <typename Scalar>
EigenPairs<Scalar> leading_eigenpairs(const RegularizedLaplacian<Scalar>& L, Eigen::Index count) {
    return leading_eigenpairs(L.matrix, count);
}

/// 1 - |lambda_{K+1} / lambda_K|. Small values mean the (K+1)-th
/// eigenvector is nearly as strong as the K-th.
template <typename Scalar>
Scalar signal_weakness(const EigenPairs<Scalar>& eig, Eigen::Index K) {
    using std::abs;
    if (K < 1 || eig.count() < K + 1)
        throw ValidationError("signal weakness needs K >= 1 and at least K+1 eigenpairs");
    if (eig.values(K - 1) == Scalar(0))
        throw NumericError("degenerate spectrum: lambda_K = 0, eigenvalue ratio undefined");
    return Scalar(1) - abs(eig.values(K) / eig.values(K - 1));
}

/// Number of eigenvectors to use: K + 1 when the signal is weak (weakness <= t), else K.
template <typename Scalar>
Eigen::Index select_M(const EigenPairs<Scalar>& eig, Eigen::Index K, Scalar t = Scalar(0.1)) {
    if (!(t >= Scalar(0))) throw ValidationError("weak-signal threshold t must be nonnegative");
    return signal_weakness(eig, K) <= t ? K + 1 : K;
}

template <typename Scalar>
struct RatioMatrix {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> entries;
    Eigen::Index M = 0;
    bool thresholded = false;
    std::optional<Scalar> T_n;
};

/// Entry-wise ratios eta_{k}(i) / eta_1(i) for k = 2..M.
///
/// Denominators smaller than `guard` in magnitude are replaced by
/// sign(eta_1(i)) * guard, with sign(0) = +1.
template <typename Scalar>
RatioMatrix<Scalar> eigen_ratio_matrix(const EigenPairs<Scalar>& eig, Eigen::Index M, Scalar guard = Scalar(1e-12)) {
    using std::abs;
    if (M < 1 || M > eig.count())
        throw ValidationError("ratio matrix needs 1 <= M <= " + std::to_string(eig.count()) + ", got M = " +
                              std::to_string(M));
    if (!(guard > Scalar(0))) throw ValidationError("ratio guard must be positive");
    const auto& eta = eig.scaled_vectors;
    const Eigen::Index n = eta.rows();
    RatioMatrix<Scalar> r{decltype(r.entries)(n, M - 1), M, false, std::nullopt};
    for (Eigen::Index i = 0; i < n; ++i) {
        Scalar denom = eta(i, 0);
        if (abs(denom) < guard) denom = denom < Scalar(0) ? -guard : guard;
        for (Eigen::Index k = 1; k < M; ++k) r.entries(i, k - 1) = eta(i, k) / denom;
    }
    return r;
}

/// ln(n), the customary ratio threshold.
inline double default_threshold(std::size_t n) { return std::log(static_cast<double>(n)); }

/// Clamps every ratio into [-T_n, T_n].
template <typename Scalar>
RatioMatrix<Scalar> threshold_ratios(RatioMatrix<Scalar> r, Scalar T_n) {
    if (!(T_n > Scalar(0))) throw ValidationError("ratio threshold T_n must be positive");
    r.entries = r.entries.cwiseMax(-T_n).cwiseMin(T_n);
    r.thresholded = true;
    r.T_n = T_n;
    return r;
}

}  // namespace mixedscore

#endif  // MIXEDSCORE_SPECTRAL_HPP
