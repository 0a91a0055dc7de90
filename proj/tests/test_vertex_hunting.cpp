#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "mixedscore/vertex_hunting.hpp"
#include "oracles.hpp"

using namespace mixedscore;

namespace {

using Rows = Eigen::MatrixXd;

std::set<std::vector<double>> center_set(const Rows& c, double digits = 1e8) {
    std::set<std::vector<double>> s;
    for (Eigen::Index k = 0; k < c.rows(); ++k) {
        std::vector<double> v;
        for (Eigen::Index j = 0; j < c.cols(); ++j) v.push_back(std::round(c(k, j) * digits) / digits);
        s.insert(v);
    }
    return s;
}

Rows planted(std::mt19937_64& rng, const Rows& means, int per, double spread) {
    std::normal_distribution<double> g(0, spread);
    Rows out(means.rows() * per, means.cols());
    for (Eigen::Index k = 0; k < means.rows(); ++k)
        for (int p = 0; p < per; ++p)
            for (Eigen::Index j = 0; j < means.cols(); ++j) out(k * per + p, j) = means(k, j) + g(rng);
    return out;
}

double sse(const Rows& rows, const ClusterCenters<double>& c) {
    double s = 0;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) s += (rows.row(i) - c.centers.row(c.assignments[i])).squaredNorm();
    return s;
}

}  // namespace

TEST_CASE("kmeans recovers the points when K equals the distinct row count") {
    Rows r(3, 2);
    r << 0, 0, 1, 0, 0, 1;
    const auto c = kmeans(r, 3);
    CHECK(c.objective == 0.0);
    CHECK(center_set(c.centers) == center_set(r));
}

TEST_CASE("identical rows with K = 1") {
    const Rows r = Rows::Constant(4, 2, 1.0);
    for (auto m : {VhMethod::KMeans, VhMethod::KMedians}) {
        const auto c = hunt_vertices(r, 1, m);
        CHECK(c.centers == Rows::Constant(1, 2, 1.0));
        CHECK(c.objective == 0.0);
    }
}

TEST_CASE("two planted groups") {
    Rows r(20, 2);
    r.topRows(10).setZero();
    r.bottomRows(10).setConstant(10.0);
    const auto c = kmeans(r, 2);
    Rows expected(2, 2);
    expected << 0, 0, 10, 10;
    CHECK(center_set(c.centers) == center_set(expected));
    CHECK(c.objective == 0.0);
}

TEST_CASE("kmeans reaches the exhaustive optimum on small jittered instances") {
    std::mt19937_64 rng(17);
    Rows means(2, 2);
    means << 0, 0, 3, 3;
    for (int trial = 0; trial < 5; ++trial) {
        const Rows r = planted(rng, means, 8, 0.6);
        const auto c = kmeans(r, 2, trial, 10);
        CHECK(sse(r, c) == doctest::Approx(oracle::best_two_partition_sse(r)).epsilon(1e-10));
    }
}

TEST_CASE("kmedians uses coordinate-wise medians") {
    Rows r(3, 1);
    r << 0, 0, 100;
    const auto med = kmedians(r, 1);
    CHECK(med.centers(0, 0) == 0.0);
    const auto mean = kmeans(r, 1);
    CHECK(mean.centers(0, 0) == doctest::Approx(100.0 / 3));
    CHECK(med.objective == doctest::Approx(100.0 / 3));

    Rows even(4, 1);
    even << 1, 2, 3, 50;
    CHECK(kmedians(even, 1).centers(0, 0) == 2.5);
}

TEST_CASE("kmedians center stays put under a large outlier where kmeans moves") {
    std::mt19937_64 rng(4);
    Rows means(3, 2);
    means << 0, 0, 5, 0, 0, 5;
    Rows r = planted(rng, means, 15, 0.2);
    Rows with_outlier = r;
    with_outlier(0, 0) += 200.0;
    with_outlier(0, 1) += 0.5;

    const auto clean = kmedians(r, 3, 1, 10);
    const auto dirty = kmedians(with_outlier, 3, 1, 10);
    // The outlier can still claim its own center; the other two stay near their clean positions.
    int matched = 0;
    for (Eigen::Index a = 0; a < 3; ++a)
        for (Eigen::Index b = 0; b < 3; ++b)
            if ((clean.centers.row(a) - dirty.centers.row(b)).norm() < 0.3) {
                ++matched;
                break;
            }
    CHECK(matched >= 2);
}

TEST_CASE("reported objective matches a recomputation") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const Rows r = Rows::NullaryExpr(40, 3, [&] { return u(rng); });
        const auto K = static_cast<Eigen::Index>(2 + trial % 4);
        const auto m = kmeans(r, K, trial, 3);
        CHECK(std::abs(m.objective - clustering_objective<VhMethod::KMeans>(r, m.centers)) <= 1e-10);
        const auto d = kmedians(r, K, trial, 3);
        CHECK(std::abs(d.objective - clustering_objective<VhMethod::KMedians>(r, d.centers)) <= 1e-10);
        CHECK(m.assignments.size() == 40);
        CHECK(m.iterations <= kMaxLloydIterations);
    }
}

TEST_CASE("center set is invariant to row order on separated data") {
    std::mt19937_64 rng(12);
    Rows means(3, 2);
    means << 0, 0, 4, 0, 0, 4;
    const Rows r = planted(rng, means, 12, 0.3);
    const auto base = center_set(kmeans(r, 3, 0, 8).centers, 1e6);
    std::vector<Eigen::Index> idx(r.rows());
    std::iota(idx.begin(), idx.end(), 0);
    for (int p = 0; p < 4; ++p) {
        std::shuffle(idx.begin(), idx.end(), rng);
        Rows shuffled(r.rows(), r.cols());
        for (Eigen::Index i = 0; i < r.rows(); ++i) shuffled.row(i) = r.row(idx[i]);
        CHECK(center_set(kmeans(shuffled, 3, p + 1, 8).centers, 1e6) == base);
    }
}

TEST_CASE("more restarts never worsen the objective") {
    std::mt19937_64 rng(30);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 10; ++trial) {
        const Rows r = Rows::NullaryExpr(60, 2, [&] { return u(rng); });
        for (auto m : {VhMethod::KMeans, VhMethod::KMedians}) {
            double previous = std::numeric_limits<double>::infinity();
            for (int restarts : {1, 2, 5, 10, 20}) {
                const auto c = hunt_vertices(r, 4, m, 99, restarts);
                CHECK(c.objective <= previous);
                previous = c.objective;
            }
        }
    }
}

TEST_CASE("clustering is deterministic for a fixed seed") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    const Rows r = Rows::NullaryExpr(80, 3, [&] { return u(rng); });
    const auto a = kmeans(r, 5, 42, 4);
    const auto b = kmeans(r, 5, 42, 4);
    CHECK(a.centers == b.centers);
    CHECK(a.assignments == b.assignments);
    CHECK(a.restart == b.restart);
}

TEST_CASE("clustering errors") {
    Rows r(4, 1);
    r << 1, 1, 2, 2;
    CHECK_THROWS_AS(kmeans(r, 3), ValidationError);
    CHECK_THROWS_AS(kmeans(r, 0), ValidationError);
    CHECK_THROWS_AS(kmeans(r, -1), ValidationError);
    CHECK_THROWS_AS(kmeans(r, 2, 0, 0), ValidationError);
    CHECK_NOTHROW(kmedians(r, 2));
}

TEST_CASE("float instantiation") {
    Eigen::MatrixXf r(4, 1);
    r << 0, 0.1f, 5, 5.1f;
    const auto c = kmeans(r, 2);
    CHECK(c.objective == doctest::Approx(0.05).epsilon(1e-5));
}
