#include "doctest.h"

#include "rbfqf/kernels.hpp"

#include <cmath>
#include <stdexcept>

using namespace rbfqf;

TEST_SUITE("kernels") {

TEST_CASE("gaussian values") {
    const Kernel g = Kernel::gaussian();
    CHECK(g(0.0) == 1.0);
    CHECK(g(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(g.order() == 0);
    CHECK(g.min_degree() == -1);
    CHECK_THROWS_AS(g(-0.1), std::domain_error);
}

TEST_CASE("wendland polynomials match their factored form") {
    struct Case {
        int d, k;
        double (*f)(double);
    };
    const Case cases[] = {
        {1, 0, [](double r) { return 1 - r; }},
        {1, 1, [](double r) { return std::pow(1 - r, 3) * (3 * r + 1); }},
        {1, 2, [](double r) { return std::pow(1 - r, 5) * (8 * r * r + 5 * r + 1); }},
        {2, 0, [](double r) { return std::pow(1 - r, 2); }},
        {2, 1, [](double r) { return std::pow(1 - r, 4) * (4 * r + 1); }},
        {3, 2, [](double r) { return std::pow(1 - r, 6) * (35 * r * r + 18 * r + 3) / 3; }},
    };
    for (const auto& c : cases) {
        const Kernel w = Kernel::wendland(c.d, c.k);
        CAPTURE(w.name());
        CHECK(w(0.0) == doctest::Approx(1.0).epsilon(1e-15));
        for (double r : {0.1, 0.37, 0.5, 0.93})
            CHECK(w(r) == doctest::Approx(c.f(r)).epsilon(1e-13));
        CHECK(w(1.0) == 0.0);
        CHECK(w(1.5) == 0.0);
        CHECK(w.compactly_supported());
    }
}

TEST_CASE("polyharmonic splines") {
    CHECK(Kernel::phs(3)(2.0) == 8.0);
    CHECK(Kernel::phs(1).order() == 1);
    CHECK(Kernel::phs(3).order() == 2);
    CHECK(Kernel::phs(5).order() == 3);
    CHECK(Kernel::phs_log(2).order() == 2);
    CHECK(Kernel::phs_log(4).order() == 3);
    CHECK(Kernel::phs_log(2)(0.0) == 0.0);
    CHECK(Kernel::phs_log(2)(2.0) == doctest::Approx(4 * std::log(2.0)));
    CHECK_THROWS_AS(Kernel::phs(2), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::phs_log(3), std::invalid_argument);
}

TEST_CASE("parse round trip") {
    for (const char* s : {"gaussian", "wendland:1,1", "wendland:3,2", "phs:5", "phslog:2"})
        CHECK(Kernel::parse(s).name() == s);
    CHECK_THROWS_AS(Kernel::parse("wendland:4,1"), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::parse("multiquadric"), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::parse("phs:x"), std::invalid_argument);
}

}
