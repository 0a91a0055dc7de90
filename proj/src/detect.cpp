#include "mixedscore/detect.hpp"

#include <string>

namespace mixedscore {

DetectResult detect(const Graph& g, int K, const DetectOptions& options) {
    const auto n = static_cast<Eigen::Index>(g.size());
    if (K < 2) throw ValidationError("K must be at least 2, got " + std::to_string(K));
    if (K + 1 > n)
        throw ValidationError("K + 1 = " + std::to_string(K + 1) + " exceeds the node count " + std::to_string(n));

    DetectResult r;
    const auto L = regularized_laplacian<double>(g, options.tau);
    r.eigenpairs = leading_eigenpairs(L, K + 1);
    r.diagnostics.tau = L.tau;
    r.diagnostics.eigenvalues = r.eigenpairs.values;
    r.diagnostics.signal_weakness = signal_weakness(r.eigenpairs, K);
    r.diagnostics.M = select_M(r.eigenpairs, K, options.t);

    r.diagnostics.T_n = options.T_n ? *options.T_n : default_threshold(g.size());
    r.ratios = threshold_ratios(eigen_ratio_matrix(r.eigenpairs, r.diagnostics.M, options.ratio_guard),
                                r.diagnostics.T_n);

    r.vertices = hunt_vertices(r.ratios.entries, K, options.vh, options.seed, options.restarts);
    r.diagnostics.vh_objective = r.vertices.objective;
    r.diagnostics.vh_iterations = r.vertices.iterations;

    r.system = augment(r.ratios, r.vertices);
    r.projection = project(r.system);
    auto rect = rectify(r.projection);
    r.diagnostics.flipped_rows = rect.flipped_rows;
    r.diagnostics.fallback_rows = rect.fallback_rows;
    r.membership = normalize(rect.Y);
    return r;
}

}  // namespace mixedscore
