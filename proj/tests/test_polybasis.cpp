#include "doctest.h"

#include "oracles.hpp"
#include "rbfqf/errors.hpp"
#include "rbfqf/polybasis.hpp"

#include <cmath>
#include <stdexcept>

using namespace rbfqf;

namespace {

double gram_deviation(const Eigen::MatrixXd& g) {
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

} // namespace

TEST_SUITE("polybasis") {

TEST_CASE("dimensions and ordering") {
    CHECK(poly_dim(1, -1) == 0);
    CHECK(poly_dim(1, 3) == 4);
    CHECK(poly_dim(2, 2) == 6);
    const auto e = graded_lex_exponents(2, 2);
    REQUIRE(e.size() == 6);
    CHECK(e[1] == std::array<int, 2>{1, 0});
    CHECK(e[2] == std::array<int, 2>{0, 1});
    CHECK(e[4] == std::array<int, 2>{1, 1});
    CHECK(monomial_basis(2, -1).size() == 0);
}

TEST_CASE("monomial basis evaluates plain monomials") {
    const PolyBasis b = monomial_basis(2, 2);
    const Eigen::VectorXd v = b.eval(Point{2.0, 3.0});
    CHECK(v(0) == 1.0);
    CHECK(v(1) == 2.0);
    CHECK(v(2) == 3.0);
    CHECK(v(3) == 4.0);
    CHECK(v(4) == 6.0);
    CHECK(v(5) == 9.0);
}

TEST_CASE("discrete orthonormality on halton points") {
    for (int dim : {1, 2})
        for (int d = 0; d <= 5; ++d) {
            const PointSet x = halton(Domain::unit(dim), 200);
            const PolyBasis p = build_dops(x, d);
            CAPTURE(dim);
            CAPTURE(d);
            CHECK(gram_deviation(discrete_gram(p, x)) <= 1e-10);
            CHECK(p.eval(Point{0.3, 0.7})(0) == doctest::Approx(1.0).epsilon(1e-13));
            for (int k = 0; k < p.size(); ++k)
                CHECK(p.coeffs(k, k) > 0.0);
        }
}

TEST_CASE("first element is the normalized constant on a scaled domain") {
    const PointSet x = halton(Domain::box(0, 2, 0, 3), 60);
    const PolyBasis p = build_dops(x, 2);
    CHECK(p.eval(Point{1.0, 1.0})(0) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-13));
    CHECK(discrete_ip(x, [&](const Point& y) { return p.eval(y)(1); },
                      [&](const Point& y) { return p.eval(y)(1); }) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-unisolvent points are rejected") {
    // collinear points cannot carry bivariate quadratics
    PointSet line{Domain::unit(2), {}};
    for (int i = 0; i < 10; ++i)
        line.points.push_back({i / 9.0, i / 9.0});
    CHECK_THROWS_AS(build_dops(line, 1), RankDeficientError);
    CHECK_THROWS_AS(build_dops(equidistant(Domain::unit(1), 3), 3), RankDeficientError);
}

TEST_CASE("polynomial moments are exact") {
    const Domain dom = Domain::box(-1, 2, 0, 1);
    const PolyBasis m = monomial_basis(2, 3);
    const Eigen::VectorXd mom = poly_moments(m, dom);
    for (int k = 0; k < m.size(); ++k)
        CHECK(mom(k) == doctest::Approx(oracle::monomial_moment(m.exponents[k], dom)).epsilon(1e-14));
    const PointSet x = halton(dom, 50);
    const PolyBasis p = build_dops(x, 2);
    const Eigen::VectorXd pm = poly_moments(p, dom);
    for (int k = 0; k < p.size(); ++k) {
        const double ref = oracle::integrate_1d(
                [&](double s) {
                    return oracle::integrate_1d([&](double t) { return p.eval(Point{s, t})(k); },
                                                0, 1, {}, 1);
                },
                -1, 2, {}, 1);
        CHECK(pm(k) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("continuous gram approaches the identity as points fill the domain") {
    const auto err = [](int n) {
        const PointSet x = equidistant(Domain::unit(2), n);
        const PolyBasis p = build_dops(x, 2);
        return gram_deviation(continuous_gram(p, Domain::unit(2)));
    };
    const double coarse = err(8), fine = err(64);
    CHECK(fine < coarse);
    CHECK(fine < 0.1);
}

}
