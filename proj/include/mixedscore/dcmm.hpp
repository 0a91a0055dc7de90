#ifndef MIXEDSCORE_DCMM_HPP
#define MIXEDSCORE_DCMM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixedscore/detect.hpp"
#include "mixedscore/graph.hpp"

namespace mixedscore {

/// Degree-corrected mixed membership model: E[A] = Theta Pi P Pi' Theta.
struct DcmmParams {
    Eigen::MatrixXd Pi;     // n x K, row-stochastic
    Eigen::MatrixXd P;      // K x K, symmetric, entries in [0, 1]
    Eigen::VectorXd theta;  // n, positive

    Eigen::Index n() const { return Pi.rows(); }
    Eigen::Index K() const { return Pi.cols(); }

    /// Throws ModelError on a shape mismatch, a non-PMF row of Pi, an
    /// asymmetric or out-of-range P, or a nonpositive theta.
    void validate() const;
};

/// Omega(i, j) = theta(i) theta(j) pi_i P pi_j'. Throws ModelError if any
/// entry exceeds 1.
Eigen::MatrixXd omega(const DcmmParams& params);

struct ClippedOmega {
    Eigen::MatrixXd matrix;
    std::size_t clipped_entries = 0;
};

/// Omega with entries above 1 clamped to 1.
ClippedOmega omega_clipped(const DcmmParams& params);

/// Independent Bernoulli(Omega(i, j)) edges for i < j.
Graph sample_adjacency(const Eigen::MatrixXd& omega, std::uint64_t seed);

enum class ThetaModel {
    Quadratic,       // theta(i) = offset + 0.8 (i / n)^2, i = 1..n
    InverseUniform,  // 1 / theta(i) ~ iid U(1, z)
};

/// Three-community simulation design: the first 3 n0 nodes are pure (n0 per
/// block), the rest split evenly over memberships (x, x, 1-2x), (x, 1-2x, x),
/// (1-2x, x, x) and (1/3, 1/3, 1/3). P has diagonal 0.8 and off-diagonal rho.
struct ExperimentScenario {
    std::string id;
    int n = 500;
    int n0 = 100;
    double x = 0.4;
    double rho = 0.3;
    double z = 4;
    ThetaModel theta_model = ThetaModel::Quadratic;
    double theta_offset = 0.2;
};

inline constexpr int kScenarioCommunities = 3;

/// theta_seed drives the InverseUniform draws; Quadratic ignores it.
DcmmParams build_scenario(const ExperimentScenario& s, std::uint64_t theta_seed = 0);

/// A named sweep: one scenario parameter varied over a grid.
struct ExperimentDesign {
    std::string id;
    std::string grid_param;  // "n0", "rho", "x" or "z"
    std::vector<double> grid;
    ExperimentScenario base;
    std::string note;  // adjustments applied to the published grid, if any

    ExperimentScenario at(double value) const;
};

/// Experiments "1a" ... "4b". Throws ValidationError for unknown ids.
ExperimentDesign experiment_design(const std::string& id);

std::vector<std::string> experiment_ids();

struct ExperimentOptions {
    int repetitions = 50;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool clip_omega = false;
    DetectOptions detect;  // detect.seed is replaced per repetition
};

struct GridResult {
    std::string experiment;
    std::string grid_param;
    double grid_value = 0;
    std::string method;
    double mean_error = 0;
    double sd_error = 0;
    int repetitions = 0;
    std::uint64_t seed = 0;
    std::vector<double> errors;  // by repetition index
    std::size_t clipped_entries = 0;
    bool valid = true;  // false when Omega left [0, 1] and clipping was off
    std::string note;
};

/// Seed of repetition `rep` at grid point `point`; `stream` separates the
/// graph sample, theta draws and vertex hunting.
std::uint64_t repetition_seed(std::uint64_t master, std::size_t point, std::size_t rep, std::uint64_t stream);

/// Runs every grid point of the design `repetitions` times and reports the
/// mean and sample SD of the mixed-Hamming error. Output is independent of
/// the thread count.
std::vector<GridResult> run_experiment(const ExperimentDesign& design, const ExperimentOptions& options);

std::string method_name(VhMethod vh);

}  // namespace mixedscore

#endif  // MIXEDSCORE_DCMM_HPP
