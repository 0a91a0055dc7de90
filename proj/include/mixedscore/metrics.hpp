#ifndef MIXEDSCORE_METRICS_HPP
#define MIXEDSCORE_METRICS_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mixedscore/membership.hpp"

namespace mixedscore {

/// How the best community relabeling is found. Auto enumerates all K!
/// permutations for K <= kBruteForceMaxK and solves an assignment problem above.
enum class PermutationSolver { Auto, BruteForce, Assignment };

inline constexpr int kBruteForceMaxK = 8;

/// best_permutation[a] = b pairs estimated community a with true community b,
/// i.e. the permutation matrix O with O(a, b) = 1 in Pi_hat * O.
struct ErrorReport {
    double mixed_hamming = 0;
    std::vector<int> best_permutation;
};

struct HammingReport {
    double rate = 0;
    std::size_t misclassified = 0;
    std::size_t n = 0;
    std::vector<int> best_permutation;
};

/// min over permutation matrices O of (1/n) sum |Pi_hat O - Pi|.
ErrorReport mixed_hamming(const Eigen::MatrixXd& pi_hat, const Eigen::MatrixXd& pi_true,
                          PermutationSolver solver = PermutationSolver::Auto);

inline ErrorReport mixed_hamming(const MembershipMatrix<double>& pi_hat, const MembershipMatrix<double>& pi_true,
                                 PermutationSolver solver = PermutationSolver::Auto) {
    return mixed_hamming(pi_hat.pi, pi_true.pi, solver);
}

/// min over label permutations o of (1/n) #{i : o(hat_i) != true_i}. Labels are one-based.
HammingReport hamming_error(const LabelVector& labels_hat, const LabelVector& labels_true, int K,
                            PermutationSolver solver = PermutationSolver::Auto);

/// Minimum-cost perfect matching on a square cost matrix (Hungarian
/// algorithm). Returns assignment[row] = column.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace mixedscore

#endif  // MIXEDSCORE_METRICS_HPP
