#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mixedscore/io.hpp"

using namespace mixedscore;

TEST_CASE("format_real") {
    CHECK(format_real(0.25) == "0.25");
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(1.0 / 3) == "0.3333333333");
}

TEST_CASE("membership CSV layout and round trip") {
    MembershipMatrix<double> m{Eigen::MatrixXd(2, 3)};
    m.pi << 0.2, 0.5, 0.3, 1, 0, 0;
    std::ostringstream os;
    write_membership_csv(os, m, {7, 9});
    CHECK(os.str() == "node,pi_1,pi_2,pi_3,label\n7,0.2,0.5,0.3,2\n9,1,0,0,1\n");

    std::istringstream is(os.str());
    const auto t = read_membership_table(is);
    CHECK(t.nodes == std::vector<std::int64_t>{7, 9});
    REQUIRE(t.pi);
    CHECK(*t.pi == m.pi);
    REQUIRE(t.labels);
    CHECK(*t.labels == LabelVector{2, 1});

    CHECK_THROWS_AS(write_membership_csv(os, m, {1}), ValidationError);
}

TEST_CASE("membership JSON") {
    MembershipMatrix<double> m{Eigen::MatrixXd(1, 2)};
    m.pi << 0.25, 0.75;
    const auto j = membership_json(m, {3});
    CHECK(j["K"] == 2);
    CHECK(j["nodes"][0]["node"] == 3);
    CHECK(j["nodes"][0]["pi"][1] == 0.75);
    CHECK(j["nodes"][0]["label"] == 2);
}

TEST_CASE("read_membership_table without a header") {
    std::istringstream labels("1,2\n2,1\n3,1\n");
    const auto a = read_membership_table(labels);
    CHECK_FALSE(a.pi);
    CHECK(*a.labels == LabelVector{2, 1, 1});

    std::istringstream weights("# comment\n1, 0.5, 0.5\n2, 1.0, 0.0\n");
    const auto b = read_membership_table(weights);
    CHECK_FALSE(b.labels);
    CHECK(b.pi->rows() == 2);
    CHECK((*b.pi)(1, 0) == 1.0);
}

TEST_CASE("read_membership_table errors") {
    std::istringstream bad_header("node,weight\n1,2\n");
    CHECK_THROWS_AS(read_membership_table(bad_header), ParseError);
    std::istringstream ragged("node,pi_1,pi_2\n1,0.5,0.5\n2,1\n");
    try {
        read_membership_table(ragged);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream bad_value("1,0.5,abc\n");
    CHECK_THROWS_AS(read_membership_table(bad_value), ParseError);
    std::istringstream empty("node,label\n");
    CHECK_THROWS_AS(read_membership_table(empty), ValidationError);
}

TEST_CASE("align_nodes reorders rows by node id") {
    MembershipTable t;
    t.nodes = {3, 1, 2};
    t.labels = LabelVector{30, 10, 20};
    const auto a = align_nodes(t, {1, 2, 3});
    CHECK(*a.labels == LabelVector{10, 20, 30});
    CHECK_THROWS_AS(align_nodes(t, {1, 2}), ValidationError);
    CHECK_THROWS_AS(align_nodes(t, {1, 2, 4}), ValidationError);
    t.nodes = {1, 1, 2};
    CHECK_THROWS_AS(align_nodes(t, {1, 2, 3}), ValidationError);
}

TEST_CASE("result table CSV and JSON") {
    GridResult ok;
    ok.experiment = "1a";
    ok.grid_param = "n0";
    ok.grid_value = 40;
    ok.method = "kmeans";
    ok.mean_error = 0.5;
    ok.sd_error = 0.125;
    ok.repetitions = 2;
    ok.seed = 3;
    ok.errors = {0.375, 0.625};
    GridResult bad = ok;
    bad.valid = false;
    bad.mean_error = bad.sd_error = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream os;
    write_results_csv(os, {ok, bad});
    CHECK(os.str() ==
          "experiment,grid_param,grid_value,method,mean_error,sd_error,repetitions,seed\n"
          "1a,n0,40,kmeans,0.5,0.125,2,3\n"
          "1a,n0,40,kmeans,nan,nan,2,3\n");
    const auto j = results_json({ok, bad});
    CHECK(j[0]["mean_error"] == 0.5);
    CHECK(j[1]["mean_error"].is_null());
}

TEST_CASE("write_file_atomic replaces the target and leaves no temporary") {
    const auto dir = std::filesystem::temp_directory_path() / "mixedscore_io_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.csv";
    write_file_atomic(path, "first\n");
    write_file_atomic(path, "second\n");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), {});
    CHECK(content == "second\n");
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator()) == 1);
    CHECK_THROWS(write_file_atomic(dir / "missing" / "x.csv", "x"));
    std::filesystem::remove_all(dir);
}
