#include <doctest.h>

#include <random>
#include <sstream>

#include "gstar/series.hpp"
#include "gstar/weights.hpp"

using namespace gstar;

namespace {

SpatioTemporalSeries make_series(const Eigen::MatrixXd& values) {
    SpatioTemporalSeries s;
    for (int i = 0; i < values.rows(); ++i)
        s.locations.push_back("L" + std::to_string(i));
    for (int t = 0; t < values.cols(); ++t)
        s.times.push_back(std::to_string(t + 1));
    s.values = values;
    return s;
}

}  // namespace

TEST_CASE("standardize a single short series") {
    Eigen::MatrixXd v(1, 3);
    v << 2, 4, 6;
    auto [out, stats] = standardize(make_series(v), {0, 3});
    CHECK(stats.mean[0] == doctest::Approx(4.0));
    CHECK(stats.std[0] == doctest::Approx(2.0));
    CHECK(out.values(0, 0) == doctest::Approx(-1.0));
    CHECK(out.values(0, 1) == doctest::Approx(0.0));
    CHECK(out.values(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("standardize is idempotent on standardized data") {
    std::mt19937 rng(11);
    std::normal_distribution<> n;
    Eigen::MatrixXd v(3, 40);
    for (int i = 0; i < v.rows(); ++i)
        for (int t = 0; t < v.cols(); ++t) v(i, t) = n(rng);
    auto first = standardize(make_series(v), {0, 40}).first;
    auto second = standardize(first, {0, 40}).first;
    CHECK((first.values - second.values).cwiseAbs().maxCoeff() < 1e-12);
    // window stats reproduce mean 0, std 1
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(first.values.row(i).mean()) < 1e-10);
        const double ss = (first.values.row(i).array() -
                           first.values.row(i).mean()).square().sum();
        CHECK(std::sqrt(ss / 39) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("constant series raises ConstantSeries with the location id") {
    Eigen::MatrixXd v(2, 3);
    v << 1, 2, 3, 5, 5, 5;
    try {
        standardize(make_series(v), {0, 3});
        FAIL("expected ConstantSeries");
    } catch (const ConstantSeries& e) {
        CHECK(std::string(e.what()).find("L1") != std::string::npos);
    }
}

TEST_CASE("standardize uses only the stats window") {
    Eigen::MatrixXd v(1, 6);
    v << 2, 4, 6, 100, 200, 300;
    auto [out, stats] = standardize(make_series(v), {0, 3});
    CHECK(stats.mean[0] == doctest::Approx(4.0));
    CHECK(out.values(0, 3) == doctest::Approx((100.0 - 4.0) / 2.0));
}

TEST_CASE("filter_active_locations") {
    Eigen::MatrixXd v(2, 4);
    v << 0, 0, 0, 0, 1, 0, 2, 0;
    auto kept = filter_active_locations(make_series(v), 1);
    CHECK(kept.k() == 1);
    CHECK(kept.locations[0] == "L1");

    auto all = filter_active_locations(make_series(v), 0);
    CHECK(all.k() == 2);

    CHECK_THROWS_AS(filter_active_locations(make_series(v), 3), AllFiltered);
}

TEST_CASE("filter matches a brute-force recount on sparse random data") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<> u(0.0, 1.0);
    Eigen::MatrixXd v(20, 30);
    for (int i = 0; i < 20; ++i)
        for (int t = 0; t < 30; ++t) v(i, t) = u(rng) < 0.15 ? 1.0 : 0.0;
    const int threshold = 4;
    auto kept = filter_active_locations(make_series(v), threshold);
    std::vector<std::string> expected;
    for (int i = 0; i < 20; ++i) {
        int nz = 0;
        for (int t = 0; t < 30; ++t)
            if (v(i, t) != 0.0) ++nz;
        if (nz >= threshold) expected.push_back("L" + std::to_string(i));
    }
    CHECK(kept.locations == expected);
}

TEST_CASE("build_design hand example k=2 path graph") {
    Eigen::MatrixXd v(2, 3);
    v << 1, 2, 3, 4, 5, 6;
    auto s = make_series(v);
    AdjacencyGraph g({"L0", "L1"}, {{"L0", "L1"}});
    auto w = build_weights(g, 2);
    auto d = build_design(s, w, ModelOrder{1, 2}, 0, s.full_range());
    REQUIRE(d.Z.rows() == 2);
    REQUIRE(d.Z.cols() == 2);
    CHECK(d.Z(0, 0) == doctest::Approx(1.0));
    CHECK(d.Z(0, 1) == doctest::Approx(4.0));
    CHECK(d.Z(1, 0) == doctest::Approx(2.0));
    CHECK(d.Z(1, 1) == doctest::Approx(5.0));
    CHECK(d.y[0] == doctest::Approx(2.0));
    CHECK(d.y[1] == doctest::Approx(3.0));
}

TEST_CASE("eta=1 design is the own lag-1 series") {
    std::mt19937 rng(3);
    std::normal_distribution<> n;
    Eigen::MatrixXd v(3, 10);
    for (int i = 0; i < 3; ++i)
        for (int t = 0; t < 10; ++t) v(i, t) = n(rng);
    auto s = make_series(v);
    AdjacencyGraph g({"L0", "L1", "L2"}, {{"L0", "L1"}, {"L1", "L2"}});
    auto w = build_weights(g, 1);
    auto d = build_design(s, w, ModelOrder{1, 1}, 2, s.full_range());
    for (int r = 0; r < d.Z.rows(); ++r)
        CHECK(d.Z(r, 0) == doctest::Approx(v(2, r)));
}

TEST_CASE("design matches brute-force regressor enumeration, p=2 eta=2") {
    std::mt19937 rng(9);
    std::normal_distribution<> n;
    const int k = 5, T = 14, p = 2, eta = 2;
    Eigen::MatrixXd v(k, T);
    for (int i = 0; i < k; ++i)
        for (int t = 0; t < T; ++t) v(i, t) = n(rng);
    auto s = make_series(v);
    std::vector<std::pair<std::string, std::string>> edges = {
        {"L0", "L1"}, {"L1", "L2"}, {"L2", "L3"}, {"L3", "L4"}, {"L0", "L4"}};
    AdjacencyGraph g({"L0", "L1", "L2", "L3", "L4"}, edges);
    auto w = build_weights(g, eta);
    for (int i = 0; i < k; ++i) {
        auto d = build_design(s, w, ModelOrder{p, eta}, i, s.full_range());
        REQUIRE(d.Z.rows() == T - p);
        REQUIRE(d.Z.cols() == p * eta);
        for (int r = 0; r < d.Z.rows(); ++r) {
            const int t = p + r;
            CHECK(d.y[r] == doctest::Approx(v(i, t)));
            for (int j = 1; j <= p; ++j) {
                for (int l = 0; l < eta; ++l) {
                    double acc = 0.0;
                    for (int m = 0; m < k; ++m) acc += w.level(l)(i, m) * v(m, t - j);
                    CHECK(d.Z(r, (j - 1) * eta + l) == doctest::Approx(acc));
                }
            }
        }
    }
}

TEST_CASE("build_design rejects short windows and never leaks outside range") {
    Eigen::MatrixXd v(2, 10);
    v.setRandom();
    auto s = make_series(v);
    AdjacencyGraph g({"L0", "L1"}, {{"L0", "L1"}});
    auto w = build_weights(g, 1);
    CHECK_THROWS_AS(build_design(s, w, ModelOrder{3, 1}, 0, TimeRange{0, 3}),
                    WindowTooShort);

    // corrupting values outside the fit range must not change the design
    auto d1 = build_design(s, w, ModelOrder{1, 1}, 0, TimeRange{2, 7});
    SpatioTemporalSeries mutated = s;
    mutated.values.col(0).setConstant(999.0);
    mutated.values.col(9).setConstant(999.0);
    auto d2 = build_design(mutated, w, ModelOrder{1, 1}, 0, TimeRange{2, 7});
    CHECK((d1.Z - d2.Z).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d1.y - d2.y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("series CSV round trip") {
    Eigen::MatrixXd v(2, 3);
    v << 1.5, -2.25, 3.0625, 0.0, 1e-17, 123456.789;
    auto s = make_series(v);
    std::ostringstream out;
    s.to_csv(out);
    std::istringstream in(out.str());
    auto back = SpatioTemporalSeries::from_csv(in);
    CHECK(back.locations == s.locations);
    CHECK(back.times == s.times);
    CHECK((back.values - s.values).cwiseAbs().maxCoeff() == 0.0);
}
