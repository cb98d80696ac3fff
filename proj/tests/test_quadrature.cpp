#include "pdc/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace pdc;

namespace {

double integrate(const GaussRule& rule, double (*f)(double)) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
    return s;
}

}  // namespace

TEST_CASE("small Gauss-Legendre rules match the known closed forms") {
    auto r2 = gauss_legendre(2);
    CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

    auto r3 = gauss_legendre(3);
    CHECK(r3.nodes[2] == doctest::Approx(std::sqrt(3.0 / 5.0)).epsilon(1e-15));
    CHECK(r3.nodes[1] == 0.0);
    CHECK(r3.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("n-point rule integrates polynomials up to degree 2n-1 exactly") {
    for (std::size_t n : {8ul, 48ul, 129ul}) {
        auto rule = gauss_legendre(n);
        // x^(2n-2) over [-1,1] = 2/(2n-1)
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += rule.weights[i] * std::pow(rule.nodes[i], 2.0 * n - 2.0);
        CHECK(s == doctest::Approx(2.0 / (2.0 * n - 1.0)).epsilon(1e-12));
        // odd power integrates to zero by symmetry
        double odd = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            odd += rule.weights[i] * std::pow(rule.nodes[i], 3.0);
        CHECK(std::abs(odd) < 1e-14);
    }
}

TEST_CASE("mapped rule reproduces a plain integral") {
    auto rule = map_to_interval(gauss_legendre(48), 0.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * std::exp(-rule.x[i]);
    CHECK(s == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("Kahan accumulator survives magnitude spread") {
    KahanSum sum;
    sum.add(1.0);
    for (int i = 0; i < 10000; ++i) sum.add(1e-17);
    CHECK(sum.value() == doctest::Approx(1.0 + 1e-13).epsilon(1e-15));
}
