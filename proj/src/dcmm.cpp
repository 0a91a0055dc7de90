#include "mixedscore/dcmm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "mixedscore/errors.hpp"
#include "mixedscore/metrics.hpp"
#include "mixedscore/random.hpp"

namespace mixedscore {

void DcmmParams::validate() const {
    const auto n = Pi.rows(), K = Pi.cols();
    if (n == 0 || K == 0) throw ModelError("DCMM needs n >= 1 and K >= 1");
    if (P.rows() != K || P.cols() != K) throw ModelError("P must be K x K");
    if (theta.size() != n) throw ModelError("theta must have length n");
    for (Eigen::Index i = 0; i < n; ++i) {
        if ((Pi.row(i).array() < 0).any() || std::abs(Pi.row(i).sum() - 1.0) > 1e-12)
            throw ModelError("row " + std::to_string(i) + " of Pi is not a PMF");
        if (!(theta(i) > 0)) throw ModelError("theta(" + std::to_string(i) + ") must be positive");
    }
    if ((P.array() < 0).any() || (P.array() > 1).any()) throw ModelError("P entries must lie in [0, 1]");
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw ModelError("P must be symmetric");
}

namespace {

Eigen::MatrixXd expected_adjacency(const DcmmParams& p) {
    p.validate();
    const Eigen::MatrixXd scaled = p.theta.asDiagonal() * p.Pi;
    return scaled * p.P * scaled.transpose();
}

}  // namespace

Eigen::MatrixXd omega(const DcmmParams& params) {
    Eigen::MatrixXd o = expected_adjacency(params);
    Eigen::Index i, j;
    const double peak = o.maxCoeff(&i, &j);
    if (peak > 1.0)
        throw ModelError("Omega(" + std::to_string(i) + ", " + std::to_string(j) + ") = " + std::to_string(peak) +
                         " exceeds 1; theta and P do not define edge probabilities");
    return o;
}

ClippedOmega omega_clipped(const DcmmParams& params) {
    ClippedOmega out{expected_adjacency(params), 0};
    out.clipped_entries = static_cast<std::size_t>((out.matrix.array() > 1.0).count());
    out.matrix = out.matrix.cwiseMin(1.0);
    return out;
}

Graph sample_adjacency(const Eigen::MatrixXd& omega, std::uint64_t seed) {
    const Eigen::Index n = omega.rows();
    if (n == 0 || omega.cols() != n) throw ValidationError("Omega must be a nonempty square matrix");
    if (!((omega.array() >= 0).all() && (omega.array() <= 1).all()))
        throw ValidationError("Omega entries must lie in [0, 1]");
    if ((omega - omega.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("Omega must be symmetric");

    Rng rng(seed);
    std::vector<Graph::Edge> edges;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (uniform01(rng) < omega(i, j)) edges.emplace_back(i, j);
    return Graph(static_cast<std::size_t>(n), edges);
}

DcmmParams build_scenario(const ExperimentScenario& s, std::uint64_t theta_seed) {
    constexpr int K = kScenarioCommunities;
    if (s.n < 1) throw ValidationError("scenario n must be positive");
    if (s.n0 < 0 || 3 * s.n0 > s.n) throw ValidationError("scenario needs 0 <= 3 n0 <= n");
    if ((s.n - 3 * s.n0) % 4 != 0)
        throw ValidationError("n - 3 n0 = " + std::to_string(s.n - 3 * s.n0) + " is not divisible by 4");
    if (!(s.x >= 0 && s.x < 0.5)) throw ValidationError("mixed-node parameter x must lie in [0, 1/2)");
    if (!(s.rho >= 0 && s.rho <= 1)) throw ValidationError("off-diagonal mixing rho must lie in [0, 1]");
    if (!(s.z >= 1)) throw ValidationError("degree-heterogeneity z must be >= 1");

    DcmmParams p;
    p.Pi = Eigen::MatrixXd::Zero(s.n, K);
    for (int i = 0; i < 3 * s.n0; ++i) p.Pi(i, i / s.n0) = 1.0;
    const int group = (s.n - 3 * s.n0) / 4;
    const double x = s.x, y = 1.0 - 2.0 * s.x, third = 1.0 / 3.0;
    const Eigen::RowVector3d mixed[4] = {{x, x, y}, {x, y, x}, {y, x, x}, {third, third, third}};
    for (int g = 0; g < 4; ++g)
        for (int i = 0; i < group; ++i) p.Pi.row(3 * s.n0 + g * group + i) = mixed[g];

    p.P = Eigen::MatrixXd::Constant(K, K, s.rho);
    p.P.diagonal().setConstant(0.8);

    p.theta.resize(s.n);
    if (s.theta_model == ThetaModel::Quadratic) {
        for (int i = 0; i < s.n; ++i) {
            const double frac = static_cast<double>(i + 1) / s.n;
            p.theta(i) = s.theta_offset + 0.8 * frac * frac;
        }
    } else {
        Rng rng(theta_seed);
        for (int i = 0; i < s.n; ++i) p.theta(i) = 1.0 / (1.0 + (s.z - 1.0) * uniform01(rng));
    }
    p.validate();
    return p;
}

ExperimentScenario ExperimentDesign::at(double value) const {
    ExperimentScenario s = base;
    if (grid_param == "n0") {
        s.n0 = static_cast<int>(std::lround(value));
    } else if (grid_param == "rho") {
        s.rho = value;
    } else if (grid_param == "x") {
        s.x = value;
    } else if (grid_param == "z") {
        s.z = value;
        if (s.theta_model == ThetaModel::Quadratic) s.theta_offset = value / 10.0;
    } else {
        throw ValidationError("unknown grid parameter '" + grid_param + "'");
    }
    return s;
}

std::vector<std::string> experiment_ids() { return {"1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b"}; }

ExperimentDesign experiment_design(const std::string& id) {
    if (id.size() != 2 || id[0] < '1' || id[0] > '4' || (id[1] != 'a' && id[1] != 'b'))
        throw ValidationError("unknown experiment '" + id + "' (expected 1a..4b)");
    ExperimentDesign d;
    d.id = id;
    d.base.id = id;
    const bool variant_a = id[1] == 'a';
    d.base.theta_model = variant_a ? ThetaModel::Quadratic : ThetaModel::InverseUniform;
    d.base.z = 4;
    switch (id[0]) {
        case '1':
            d.grid_param = "n0";
            d.grid = {40, 60, 80, 100, 120, 140, 160};
            d.base.x = 0.4;
            d.base.rho = 0.3;
            break;
        case '2':
            d.grid_param = "rho";
            for (int k = 0; k <= 7; ++k) d.grid.push_back(k / 20.0);
            d.base.x = 0.4;
            d.base.n0 = 100;
            break;
        case '3':
            d.grid_param = "x";
            for (int k = 0; k <= 9; ++k) d.grid.push_back(k / 20.0);
            d.grid.push_back(0.49);
            d.note = "x = 0.5 replaced by 0.49 to keep x < 1/2";
            d.base.n0 = 100;
            d.base.rho = 0.3;
            break;
        case '4':
            d.grid_param = "z";
            for (int z = 1; z <= 8; ++z) d.grid.push_back(z);
            d.base.n0 = 100;
            d.base.rho = 0.3;
            d.base.x = 0.4;
            break;
    }
    return d;
}

std::uint64_t repetition_seed(std::uint64_t master, std::size_t point, std::size_t rep, std::uint64_t stream) {
    return derive_seed(master, {static_cast<std::uint64_t>(point), static_cast<std::uint64_t>(rep), stream});
}

std::string method_name(VhMethod vh) { return vh == VhMethod::KMeans ? "kmeans" : "kmedians"; }

namespace {

enum Stream : std::uint64_t { kGraphStream = 0, kThetaStream = 1, kVertexStream = 2 };

struct RepOutcome {
    double error = 0;
    std::size_t clipped = 0;
    bool valid = true;
    std::string note;
    std::exception_ptr failure;
};

RepOutcome run_repetition(const ExperimentScenario& s, std::size_t point, std::size_t rep,
                          const ExperimentOptions& opt) {
    RepOutcome out;
    const auto params = build_scenario(s, repetition_seed(opt.seed, point, rep, kThetaStream));
    Eigen::MatrixXd om;
    if (opt.clip_omega) {
        auto c = omega_clipped(params);
        out.clipped = c.clipped_entries;
        om = std::move(c.matrix);
    } else {
        try {
            om = omega(params);
        } catch (const ModelError& e) {
            out.valid = false;
            out.note = e.what();
            return out;
        }
    }
    const Graph g = sample_adjacency(om, repetition_seed(opt.seed, point, rep, kGraphStream));
    DetectOptions dopt = opt.detect;
    dopt.seed = repetition_seed(opt.seed, point, rep, kVertexStream);
    const auto result = detect(g, kScenarioCommunities, dopt);
    out.error = mixed_hamming(result.membership.pi, params.Pi).mixed_hamming;
    return out;
}

}  // namespace

std::vector<GridResult> run_experiment(const ExperimentDesign& design, const ExperimentOptions& options) {
    if (options.repetitions < 1) throw ValidationError("repetitions must be at least 1");
    const std::size_t points = design.grid.size();
    const auto reps = static_cast<std::size_t>(options.repetitions);
    std::vector<ExperimentScenario> scenarios;
    for (double v : design.grid) scenarios.push_back(design.at(v));

    std::vector<RepOutcome> outcomes(points * reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task; (task = next.fetch_add(1)) < outcomes.size();) {
            const std::size_t point = task / reps, rep = task % reps;
            try {
                outcomes[task] = run_repetition(scenarios[point], point, rep, options);
            } catch (...) {
                outcomes[task].failure = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(outcomes.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& o : outcomes)
        if (o.failure) std::rethrow_exception(o.failure);

    std::vector<GridResult> results;
    for (std::size_t point = 0; point < points; ++point) {
        GridResult r;
        r.experiment = design.id;
        r.grid_param = design.grid_param;
        r.grid_value = design.grid[point];
        r.method = method_name(options.detect.vh);
        r.repetitions = options.repetitions;
        r.seed = options.seed;
        r.note = design.note;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const auto& o = outcomes[point * reps + rep];
            r.clipped_entries += o.clipped;
            if (!o.valid) {
                r.valid = false;
                r.note = o.note;
            }
            r.errors.push_back(o.error);
        }
        if (!r.valid) {
            r.mean_error = r.sd_error = std::nan("");
            r.errors.clear();
        } else {
            double sum = 0;
            for (double e : r.errors) sum += e;
            r.mean_error = sum / static_cast<double>(reps);
            double ss = 0;
            for (double e : r.errors) ss += (e - r.mean_error) * (e - r.mean_error);
            r.sd_error = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1)) : 0.0;
        }
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace mixedscore
