#include "doctest.h"

#include <cmath>
#include <set>

#include "mixedscore/dcmm.hpp"

using namespace mixedscore;

namespace {

DcmmParams two_node(const Eigen::MatrixXd& Pi, const Eigen::MatrixXd& P, const Eigen::VectorXd& theta) {
    DcmmParams p;
    p.Pi = Pi;
    p.P = P;
    p.theta = theta;
    return p;
}

Eigen::MatrixXd constant_omega(int n, double v) {
    Eigen::MatrixXd o = Eigen::MatrixXd::Constant(n, n, v);
    o.diagonal().setZero();
    return o;
}

}  // namespace

TEST_CASE("omega examples") {
    Eigen::Matrix2d P;
    P << 0.8, 0.3, 0.3, 0.8;
    SUBCASE("same pure community") {
        Eigen::Matrix2d Pi;
        Pi << 1, 0, 1, 0;
        const auto o = omega(two_node(Pi, P, Eigen::Vector2d(1, 1)));
        CHECK(o(0, 1) == doctest::Approx(0.8));
    }
    SUBCASE("different pure communities") {
        const auto o = omega(two_node(Eigen::MatrixXd::Identity(2, 2), P, Eigen::Vector2d(1, 1)));
        CHECK(o(0, 1) == doctest::Approx(0.3));
        CHECK(o(1, 0) == doctest::Approx(0.3));
    }
    SUBCASE("mixed node and heterogeneous theta") {
        Eigen::Matrix2d Pi;
        Pi << 0.5, 0.5, 1.0, 0.0;
        // 0.8 * 1.0 * (0.5 * 0.8 + 0.5 * 0.3) = 0.44
        const auto o = omega(two_node(Pi, P, Eigen::Vector2d(0.8, 1.0)));
        CHECK(o(0, 1) == doctest::Approx(0.44));
    }
    SUBCASE("hand-expanded three-community entry") {
        Eigen::Matrix3d P3;
        P3 << 0.8, 0.3, 0.3, 0.3, 0.8, 0.3, 0.3, 0.3, 0.8;
        Eigen::MatrixXd Pi(2, 3);
        Pi << 0.4, 0.4, 0.2, 1.0 / 3, 1.0 / 3, 1.0 / 3;
        // pi_1 P = (0.5, 0.5, 0.4); dotted with (1/3, 1/3, 1/3) gives 1.4/3.
        const auto o = omega(two_node(Pi, P3, Eigen::Vector2d(1, 1)));
        CHECK(o(0, 1) == doctest::Approx(1.4 / 3));
    }
}

TEST_CASE("omega rejects entries above one unless clipped") {
    Eigen::Matrix2d P;
    P << 1.0, 0.5, 0.5, 1.0;
    const auto p = two_node(Eigen::MatrixXd::Identity(2, 2), P, Eigen::Vector2d(1.2, 1.0));
    CHECK_THROWS_AS(omega(p), ModelError);
    const auto c = omega_clipped(p);
    CHECK(c.matrix(0, 0) == 1.0);
    CHECK(c.clipped_entries == 1);
}

TEST_CASE("parameter validation") {
    Eigen::Matrix2d P;
    P << 0.5, 0.1, 0.1, 0.5;
    Eigen::Matrix2d badPi;
    badPi << 0.5, 0.4, 0, 1;
    CHECK_THROWS_AS(omega(two_node(badPi, P, Eigen::Vector2d(1, 1))), ModelError);
    CHECK_THROWS_AS(omega(two_node(Eigen::MatrixXd::Identity(2, 2), P, Eigen::Vector2d(1, 0))), ModelError);
    Eigen::Matrix2d asym;
    asym << 0.5, 0.2, 0.1, 0.5;
    CHECK_THROWS_AS(omega(two_node(Eigen::MatrixXd::Identity(2, 2), asym, Eigen::Vector2d(1, 1))), ModelError);
}

TEST_CASE("sample_adjacency extremes") {
    const auto full = sample_adjacency(constant_omega(12, 1.0), 3);
    CHECK(full.edge_count() == 66);
    const auto empty = sample_adjacency(constant_omega(12, 0.0), 3);
    CHECK(empty.edge_count() == 0);
    CHECK(empty.size() == 12);
}

TEST_CASE("sample_adjacency edge count is within four sigma") {
    const int n = 200;
    const auto g = sample_adjacency(constant_omega(n, 0.5), 21);
    const double pairs = n * (n - 1) / 2.0;
    CHECK(std::abs(static_cast<double>(g.edge_count()) - 0.5 * pairs) <= 4 * std::sqrt(pairs * 0.25));
}

TEST_CASE("sample_adjacency is deterministic and validates input") {
    Eigen::MatrixXd o = constant_omega(30, 0.3);
    CHECK(sample_adjacency(o, 8).edges() == sample_adjacency(o, 8).edges());
    CHECK(sample_adjacency(o, 8).edges() != sample_adjacency(o, 9).edges());
    o(0, 1) = 1.5;
    o(1, 0) = 1.5;
    CHECK_THROWS_AS(sample_adjacency(o, 1), ValidationError);
    o(0, 1) = 0.2;
    o(1, 0) = 0.3;
    CHECK_THROWS_AS(sample_adjacency(o, 1), ValidationError);
}

TEST_CASE("build_scenario layout") {
    ExperimentScenario s;
    const auto p = build_scenario(s);
    CHECK(p.n() == 500);
    CHECK(p.K() == 3);
    CHECK(p.Pi.topRows(300).rowwise().maxCoeff().minCoeff() == 1.0);
    CHECK(p.Pi.row(0) == Eigen::RowVector3d(1, 0, 0));
    CHECK(p.Pi.row(100) == Eigen::RowVector3d(0, 1, 0));
    CHECK(p.Pi.row(200) == Eigen::RowVector3d(0, 0, 1));
    // 200 mixed nodes, 50 per membership type.
    CHECK(p.Pi.row(300).isApprox(Eigen::RowVector3d(0.4, 0.4, 0.2)));
    CHECK(p.Pi.row(349).isApprox(Eigen::RowVector3d(0.4, 0.4, 0.2)));
    CHECK(p.Pi.row(350).isApprox(Eigen::RowVector3d(0.4, 0.2, 0.4)));
    CHECK(p.Pi.row(400).isApprox(Eigen::RowVector3d(0.2, 0.4, 0.4)));
    CHECK(p.Pi.row(499).isApprox(Eigen::RowVector3d::Constant(1.0 / 3)));
    CHECK(p.P(0, 0) == 0.8);
    CHECK(p.P(0, 1) == 0.3);
    CHECK(p.theta(499) == doctest::Approx(1.0));
    CHECK(p.theta(0) == doctest::Approx(0.2 + 0.8 / 250000));
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("build_scenario edge cases") {
    ExperimentScenario s;
    s.x = 0.0;
    const auto p = build_scenario(s);
    CHECK(p.Pi.row(300) == Eigen::RowVector3d(0, 0, 1));

    s = {};
    s.n0 = 90;  // 500 - 270 = 230 is not divisible by 4
    CHECK_THROWS_AS(build_scenario(s), ValidationError);
    s = {};
    s.x = 0.5;
    CHECK_THROWS_AS(build_scenario(s), ValidationError);
    s = {};
    s.n0 = 200;
    CHECK_THROWS_AS(build_scenario(s), ValidationError);
}

TEST_CASE("inverse-uniform theta") {
    ExperimentScenario s;
    s.theta_model = ThetaModel::InverseUniform;
    s.z = 4;
    const auto p = build_scenario(s, 5);
    CHECK(p.theta.minCoeff() >= 0.25);
    CHECK(p.theta.maxCoeff() <= 1.0);
    CHECK(build_scenario(s, 5).theta == p.theta);
    CHECK(build_scenario(s, 6).theta != p.theta);
    s.z = 1;
    CHECK(build_scenario(s, 5).theta == Eigen::VectorXd::Ones(500));
}

TEST_CASE("experiment grids") {
    CHECK(experiment_ids().size() == 8);
    const auto e1 = experiment_design("1b");
    CHECK(e1.grid_param == "n0");
    CHECK(e1.grid == std::vector<double>{40, 60, 80, 100, 120, 140, 160});
    CHECK(e1.base.theta_model == ThetaModel::InverseUniform);
    const auto e2 = experiment_design("2a");
    CHECK(e2.grid.size() == 8);
    CHECK(e2.grid.back() == doctest::Approx(0.35));
    const auto e3 = experiment_design("3a");
    CHECK(e3.grid.size() == 11);
    CHECK(e3.grid.back() == 0.49);
    const auto e4 = experiment_design("4a");
    CHECK(e4.grid == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(e4.at(7).theta_offset == doctest::Approx(0.7));
    CHECK_THROWS_AS(experiment_design("5a"), ValidationError);
}

TEST_CASE("repetition seeds are distinct") {
    std::set<std::uint64_t> seen;
    for (std::size_t point = 0; point < 10; ++point)
        for (std::size_t rep = 0; rep < 50; ++rep)
            for (std::uint64_t stream = 0; stream < 3; ++stream) seen.insert(repetition_seed(1, point, rep, stream));
    CHECK(seen.size() == 1500);
    CHECK(repetition_seed(1, 0, 0, 0) != repetition_seed(2, 0, 0, 0));
}

TEST_CASE("run_experiment is deterministic and thread-count independent") {
    auto design = experiment_design("2b");
    design.grid = {0.0, 0.2};
    ExperimentOptions o;
    o.repetitions = 3;
    o.seed = 4;
    const auto a = run_experiment(design, o);
    const auto b = run_experiment(design, o);
    o.threads = 4;
    const auto c = run_experiment(design, o);
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].errors == b[i].errors);
        CHECK(a[i].errors == c[i].errors);
        CHECK(a[i].errors.size() == 3);
        CHECK(a[i].valid);
        double mean = 0;
        for (double e : a[i].errors) mean += e / 3;
        CHECK(a[i].mean_error == doctest::Approx(mean));
        double ss = 0;
        for (double e : a[i].errors) ss += (e - mean) * (e - mean);
        CHECK(a[i].sd_error == doctest::Approx(std::sqrt(ss / 2)));
    }
}

TEST_CASE("run_experiment marks out-of-range omega as invalid") {
    auto design = experiment_design("4a");
    design.grid = {8};
    ExperimentOptions o;
    o.repetitions = 1;
    const auto r = run_experiment(design, o);
    CHECK_FALSE(r[0].valid);
    CHECK(std::isnan(r[0].mean_error));
    o.clip_omega = true;
    const auto clipped = run_experiment(design, o);
    CHECK(clipped[0].valid);
    CHECK(clipped[0].clipped_entries > 0);
    CHECK(clipped[0].sd_error == 0.0);
}
