#ifndef MIXEDSCORE_MEMBERSHIP_HPP
#define MIXEDSCORE_MEMBERSHIP_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixedscore/errors.hpp"
#include "mixedscore/spectral.hpp"
#include "mixedscore/vertex_hunting.hpp"

namespace mixedscore {

/// n x K row-stochastic membership weights; row i is the PMF of node i.
template <typename Scalar>
struct MembershipMatrix {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pi;

    Eigen::Index K() const { return pi.cols(); }
    Eigen::Index size() const { return pi.rows(); }
};

/// One-based community labels.
using LabelVector = std::vector<int>;

/// Ratio rows and hunted vertices with a leading column of ones, plus the
/// K x K Gram matrix of the augmented vertices.
template <typename Scalar>
struct AugmentedSystem {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Matrix V_star;       // K x M
    Matrix R_star_star;  // n x M
    Matrix gram;         // V_star * V_star'
};

template <typename DerivedR, typename DerivedV>
AugmentedSystem<typename DerivedR::Scalar> augment(const Eigen::MatrixBase<DerivedR>& ratios,
                                                   const Eigen::MatrixBase<DerivedV>& vertices) {
    using Scalar = typename DerivedR::Scalar;
    const auto width = ratios.cols();
    if (width == 0) throw ValidationError("ratio matrix has no columns (M - 1 = 0)");
    if (vertices.cols() != width)
        throw ValidationError("vertex width " + std::to_string(vertices.cols()) + " does not match ratio width " +
                              std::to_string(width));
    AugmentedSystem<Scalar> a;
    a.V_star.resize(vertices.rows(), width + 1);
    a.V_star << Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Ones(vertices.rows()), vertices;
    a.R_star_star.resize(ratios.rows(), width + 1);
    a.R_star_star << Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Ones(ratios.rows()), ratios;
    a.gram = a.V_star * a.V_star.transpose();
    return a;
}

template <typename Scalar>
AugmentedSystem<Scalar> augment(const RatioMatrix<Scalar>& r, const ClusterCenters<Scalar>& v) {
    return augment(r.entries, v.centers);
}

/// Smallest over largest eigenvalue magnitude of the (symmetric) Gram matrix.
template <typename Scalar>
Scalar gram_rcond(const AugmentedSystem<Scalar>& a) {
    Eigen::SelfAdjointEigenSolver<typename AugmentedSystem<Scalar>::Matrix> es(a.gram, Eigen::EigenvaluesOnly);
    const auto mags = es.eigenvalues().cwiseAbs();
    const Scalar hi = mags.maxCoeff();
    return hi > Scalar(0) ? mags.minCoeff() / hi : Scalar(0);
}

inline constexpr double kMinGramRcond = 1e-12;

/// Y = R** V*' (V* V*')^{-1}, i.e. each row of Y holds the least-squares
/// coefficients expressing that ratio row in the augmented vertices.
/// Solved through an LDL' factorization of the Gram matrix.
template <typename Scalar>
typename AugmentedSystem<Scalar>::Matrix project(const AugmentedSystem<Scalar>& a) {
    if (gram_rcond(a) < Scalar(kMinGramRcond))
        throw ReconstructionError(
            "vertex Gram matrix is singular (coincident or affinely dependent centers); "
            "retry vertex hunting with a different seed or more restarts");
    const typename AugmentedSystem<Scalar>::Matrix rhs = a.V_star * a.R_star_star.transpose();
    return a.gram.ldlt().solve(rhs).transpose();
}

template <typename Scalar>
struct Rectified {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> Y;
    std::size_t flipped_rows = 0;
    /// Rows that were all zero after clamping and got the uniform PMF instead.
    std::size_t fallback_rows = 0;
};

/// Negates rows whose entries are all strictly negative, then clamps at 0.
/// A row left entirely zero becomes (1/K, ..., 1/K).
template <typename Derived>
Rectified<typename Derived::Scalar> rectify(const Eigen::MatrixBase<Derived>& Y) {
    using Scalar = typename Derived::Scalar;
    Rectified<Scalar> out{Y, 0, 0};
    const auto K = out.Y.cols();
    for (Eigen::Index i = 0; i < out.Y.rows(); ++i) {
        auto row = out.Y.row(i);
        if (K > 0 && (row.array() < Scalar(0)).all()) {
            row = -row;
            ++out.flipped_rows;
        }
        row = row.cwiseMax(Scalar(0));
        if ((row.array() == Scalar(0)).all()) {
            row.setConstant(Scalar(1) / static_cast<Scalar>(K));
            ++out.fallback_rows;
        }
    }
    return out;
}

template <typename Derived>
MembershipMatrix<typename Derived::Scalar> normalize(const Eigen::MatrixBase<Derived>& Y) {
    using Scalar = typename Derived::Scalar;
    MembershipMatrix<Scalar> m{Y};
    for (Eigen::Index i = 0; i < m.pi.rows(); ++i) {
        const Scalar norm = m.pi.row(i).template lpNorm<1>();
        if (!(norm > Scalar(0)))
            throw std::logic_error("membership row " + std::to_string(i) + " has zero L1 norm after rectification");
        m.pi.row(i) /= norm;
    }
    return m;
}

/// Per-row argmax, one-based; ties go to the smallest community index.
template <typename Scalar>
LabelVector hard_labels(const MembershipMatrix<Scalar>& m) {
    LabelVector labels(m.pi.rows());
    for (Eigen::Index i = 0; i < m.pi.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index k = 1; k < m.pi.cols(); ++k)
            if (m.pi(i, k) > m.pi(i, best)) best = k;
        labels[i] = static_cast<int>(best) + 1;
    }
    return labels;
}

}  // namespace mixedscore

#endif  // MIXEDSCORE_MEMBERSHIP_HPP
