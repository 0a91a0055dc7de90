#include "mixedscore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mixedscore/errors.hpp"

namespace mixedscore {

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) throw ValidationError("assignment needs a square cost matrix");
    constexpr double inf = std::numeric_limits<double>::infinity();
    // Potentials formulation, one-based with column 0 as the virtual start.
    std::vector<double> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    for (int row = 1; row <= n; ++row) {
        match[0] = row;
        int col0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[col0] = 1;
            const int row0 = match[col0];
            double delta = inf;
            int col1 = 0;
            for (int c = 1; c <= n; ++c) {
                if (used[c]) continue;
                const double cur = cost(row0 - 1, c - 1) - u[row0] - v[c];
                if (cur < minv[c]) {
                    minv[c] = cur;
                    way[c] = col0;
                }
                if (minv[c] < delta) {
                    delta = minv[c];
                    col1 = c;
                }
            }
            for (int c = 0; c <= n; ++c) {
                if (used[c]) {
                    u[match[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const int col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0);
    }
    std::vector<int> assignment(n);
    for (int c = 1; c <= n; ++c) assignment[match[c] - 1] = c - 1;
    return assignment;
}

namespace {

// Best permutation for the cost sum_a cost(a, perm[a]), lexicographically
// first among exact ties when enumerating.
std::vector<int> best_permutation(const Eigen::MatrixXd& cost, PermutationSolver solver) {
    const int K = static_cast<int>(cost.rows());
    const bool brute = solver == PermutationSolver::BruteForce ||
                       (solver == PermutationSolver::Auto && K <= kBruteForceMaxK);
    if (!brute) return solve_assignment(cost);

    std::vector<int> perm(K), best;
    std::iota(perm.begin(), perm.end(), 0);
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double c = 0;
        for (int a = 0; a < K; ++a) c += cost(a, perm[a]);
        if (c < best_cost) {
            best_cost = c;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

void check_membership(const Eigen::MatrixXd& pi, const char* name) {
    for (Eigen::Index i = 0; i < pi.rows(); ++i) {
        if ((pi.row(i).array() < -1e-9).any() || !pi.row(i).allFinite())
            throw ValidationError(std::string(name) + " row " + std::to_string(i) + " has negative or non-finite entries");
        if (std::abs(pi.row(i).sum() - 1.0) > 1e-6)
            throw ValidationError(std::string(name) + " row " + std::to_string(i) + " does not sum to 1");
    }
}

}  // namespace

ErrorReport mixed_hamming(const Eigen::MatrixXd& pi_hat, const Eigen::MatrixXd& pi_true, PermutationSolver solver) {
    if (pi_hat.rows() != pi_true.rows() || pi_hat.cols() != pi_true.cols())
        throw ValidationError("membership shapes differ: " + std::to_string(pi_hat.rows()) + "x" +
                              std::to_string(pi_hat.cols()) + " vs " + std::to_string(pi_true.rows()) + "x" +
                              std::to_string(pi_true.cols()));
    if (pi_hat.rows() == 0 || pi_hat.cols() == 0) throw ValidationError("empty membership matrix");
    check_membership(pi_hat, "estimated membership");
    check_membership(pi_true, "true membership");

    const Eigen::Index n = pi_hat.rows(), K = pi_hat.cols();
    // The L1 objective splits over columns: cost(a, b) = sum_i |hat(i, a) - true(i, b)|.
    Eigen::MatrixXd cost(K, K);
    for (Eigen::Index a = 0; a < K; ++a)
        for (Eigen::Index b = 0; b < K; ++b) cost(a, b) = (pi_hat.col(a) - pi_true.col(b)).cwiseAbs().sum();

    ErrorReport report;
    report.best_permutation = best_permutation(cost, solver);
    // Summed in true-column order so that permuting the columns of pi_hat
    // reproduces the value bit for bit.
    std::vector<Eigen::Index> source(K);
    for (Eigen::Index a = 0; a < K; ++a) source[report.best_permutation[a]] = a;
    double total = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index b = 0; b < K; ++b) total += std::abs(pi_hat(i, source[b]) - pi_true(i, b));
    report.mixed_hamming = total / static_cast<double>(n);
    return report;
}

HammingReport hamming_error(const LabelVector& labels_hat, const LabelVector& labels_true, int K,
                            PermutationSolver solver) {
    if (labels_hat.size() != labels_true.size())
        throw ValidationError("label vectors differ in length: " + std::to_string(labels_hat.size()) + " vs " +
                              std::to_string(labels_true.size()));
    if (labels_hat.empty()) throw ValidationError("empty label vectors");
    if (K < 1) throw ValidationError("K must be positive");
    Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(K, K);
    for (std::size_t i = 0; i < labels_hat.size(); ++i) {
        const int a = labels_hat[i], b = labels_true[i];
        if (a < 1 || a > K || b < 1 || b > K)
            throw ValidationError("label out of range [1, " + std::to_string(K) + "] at position " + std::to_string(i));
        confusion(a - 1, b - 1) += 1;
    }
    HammingReport report;
    report.n = labels_hat.size();
    report.best_permutation = best_permutation(-confusion, solver);
    std::size_t matched = 0;
    for (int a = 0; a < K; ++a) matched += static_cast<std::size_t>(confusion(a, report.best_permutation[a]));
    report.misclassified = report.n - matched;
    report.rate = static_cast<double>(report.misclassified) / static_cast<double>(report.n);
    return report;
}

}  // namespace mixedscore
