#ifndef MIXEDSCORE_DETECT_HPP
#define MIXEDSCORE_DETECT_HPP

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "mixedscore/graph.hpp"
#include "mixedscore/membership.hpp"
#include "mixedscore/spectral.hpp"
#include "mixedscore/vertex_hunting.hpp"

namespace mixedscore {

struct DetectOptions {
    std::optional<double> tau;  // default: 0.1 (d_max + d_min) / 2
    double t = 0.1;             // weak-signal threshold
    std::optional<double> T_n;  // default: ln(n)
    VhMethod vh = VhMethod::KMeans;
    std::uint64_t seed = 0;
    int restarts = 10;
    double ratio_guard = 1e-12;
};

struct Diagnostics {
    double tau = 0;
    double T_n = 0;
    Eigen::Index M = 0;
    Eigen::VectorXd eigenvalues;  // lambda_1 .. lambda_{K+1}, always reported
    double signal_weakness = 0;
    double vh_objective = 0;
    int vh_iterations = 0;
    std::size_t flipped_rows = 0;
    std::size_t fallback_rows = 0;
};

struct DetectResult {
    MembershipMatrix<double> membership;
    Diagnostics diagnostics;

    // Intermediate stages, kept for inspection and testing.
    EigenPairs<double> eigenpairs;
    RatioMatrix<double> ratios;  // thresholded
    ClusterCenters<double> vertices;
    AugmentedSystem<double> system;
    Eigen::MatrixXd projection;  // Y before rectification
};

/// Estimates the n x K membership matrix of g.
///
/// Regularized Laplacian -> K+1 leading eigenpairs -> choice of M -> thresholded
/// eigen-ratio rows -> vertex hunting -> projection onto the augmented
/// vertices -> rectification and row normalization.
DetectResult detect(const Graph& g, int K, const DetectOptions& options = {});

}  // namespace mixedscore

#endif  // MIXEDSCORE_DETECT_HPP
