#include "duality/kernels.hpp"
#include "duality/representations.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace duality;
using namespace duality::kernels;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// Reference values below come from tests/oracles/generate.py (frozen in frozen_values.txt).

TEST_CASE("Charlier reference values") {
    CHECK(charlier(1, 2, Rational(1, 2)) == Rational(-3));
    CHECK(charlier(3, 5, Rational(3, 4)) == Rational(-491, 9));
    CHECK(charlier(4, 6, Rational(1, 3)) == Rational(17749));
    CHECK(charlier(0, 7, Rational(2)) == Rational(1));
    CHECK_THROWS_AS(charlier(-1, 2, Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(charlier(1, 2, Rational(0)), std::invalid_argument);
}

TEST_CASE("Charlier self-duality and difference relations") {
    const Rational c(3, 4);
    for (long n = 0; n <= 20; ++n)
        for (long x = 0; x <= 20; ++x) CHECK(charlier(n, x, c) == charlier(x, n, c));
    for (long n = 1; n <= 10; ++n)
        for (long x = 0; x <= 10; ++x) {
            // forward difference in x lowers the degree
            CHECK(charlier(n, x + 1, c) - charlier(n, x, c) == -Rational(n) / c * charlier(n - 1, x, c));
            // three-term recurrence in n
            CHECK(c * charlier(n + 1, x, c) == (n + c - x) * charlier(n, x, c) - n * charlier(n - 1, x, c));
        }
}

TEST_CASE("Meixner and Krawtchouk reference values") {
    CHECK(meixner(1, 2, Rational(1, 2), Rational(1, 2)) == Rational(-1));
    CHECK(meixner(3, 4, Rational(3, 4), Rational(1, 3)) == Rational(307, 35));
    CHECK(meixner(4, 3, Rational(3, 4), Rational(1, 3)) == Rational(307, 35));
    CHECK(krawtchouk(2, 3, 4, Rational(1, 3)) == Rational(6));
    CHECK(krawtchouk(3, 2, 4, Rational(1, 3)) == Rational(6));
    for (long n = 0; n <= 12; ++n)
        for (long x = 0; x <= 12; ++x) CHECK(meixner(n, x, Rational(5, 4), Rational(2, 7)) == meixner(x, n, Rational(5, 4), Rational(2, 7)));
    for (long n = 0; n <= 6; ++n)
        for (long x = 0; x <= 6; ++x) CHECK(krawtchouk(n, x, 6, Rational(2, 5)) == krawtchouk(x, n, 6, Rational(2, 5)));
}

TEST_CASE("Hermite and Laguerre kernel coefficients") {
    const auto h = hermite_poly(4, Rational(3, 4));
    const std::vector<Rational> hc{Rational(16, 3), 0, Rational(-128, 9), 0, Rational(256, 81)};
    for (int m = 0; m <= 4; ++m) CHECK(h.coefficient({m}) == GaussRational(hc[m]));
    CHECK(h.total_degree() == 4);

    const auto l = laguerre_poly(3, Rational(3, 4), Rational(1, 2));
    const std::vector<Rational> lc{8, -16, Rational(32, 5), Rational(-64, 105)};
    for (int m = 0; m <= 3; ++m) CHECK(l.coefficient({m}) == GaussRational(lc[m]));

    // exact recurrence h_{n+1} = (x/c) h_n − (n/c) h_{n−1}
    const Rational c(2, 3);
    for (long n = 1; n < 10; ++n)
        for (const Rational& x : {Rational(-3, 2), Rational(0), Rational(5, 7)})
            CHECK(hermite(n + 1, x, c) == x / c * hermite(n, x, c) - Rational(n) / c * hermite(n - 1, x, c));
}

TEST_CASE("float rows agree with exact series") {
    for (auto f : {Family::Charlier, Family::Meixner, Family::Krawtchouk, Family::Hermite, Family::Laguerre,
                   Family::MeixnerPollaczek}) {
        const auto r = cross_validation(f);
        INFO(r.name << " " << r.max_rel_residual);
        CHECK(r.pass);
    }
}

TEST_CASE("Bessel kernel reference values") {
    CHECK_THAT(bessel(1.3, 2.7, 0.75), WithinRel(3.0037719308300456118, 1e-13));
    CHECK_THAT(bessel(0.4, 9.5, 2.0), WithinRel(2.3055964544545659631, 1e-13));
    CHECK_THAT(bessel(6.0, 7.5, 0.5), WithinRel(244.12145926456174293, 1e-13));
    CHECK_THROWS_AS(bessel(-1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("Bessel kernel structure") {
    const double k = 0.8;
    for (double y : {0.0, 0.5, 3.0})
        CHECK_THAT(bessel(0.0, y, k), WithinRel(std::exp(y / 2) * std::pow(2.0, 1 - 2 * k) / std::tgamma(2 * k), 1e-14));
    for (double x : {0.3, 1.7, 5.0})
        for (double y : {0.2, 2.5, 8.0}) {
            CHECK_THAT(bessel(x, y, k), WithinRel(bessel(y, x, k), 1e-14));
            const double z = std::sqrt(x * y);
            const double ref = std::exp((x + y) / 2) * std::pow(x * y, 0.5 - k) * std::cyl_bessel_j(2 * k - 1, z);
            CHECK_THAT(bessel(x, y, k), WithinRel(ref, 1e-12));
        }
}

TEST_CASE("Bessel kernel is an eigenfunction of the lowering action") {
    // σ_k(F) in x applied to J(·, y) gives (i/2) y J
    const double k = 1.25;
    for (double x : {0.4, 2.0, 6.0})
        for (double y : {0.3, 1.5, 4.0}) {
            const double J = bessel(x, y, k), Jx = bessel(x, y, k, 1), Jxx = bessel(x, y, k, 2);
            // imaginary parts only: F = −2i x∂² − 2i(2k − x)∂ + (i/2)(4k − x)
            const double lhs = -2 * x * Jxx - 2 * (2 * k - x) * Jx + 0.5 * (4 * k - x) * J;
            CHECK_THAT(lhs, WithinAbs(0.5 * y * J, 1e-10 * (std::abs(x * Jxx) + std::abs(Jx) + std::abs(J))));
        }
}

TEST_CASE("exponential kernel") {
    CHECK(std::abs(exp_kernel(0, 0, 0.7) - Complex(1.0)) < 1e-15);
    for (double x : {-1.0, 0.4, 2.0})
        for (double y : {-0.5, 1.1}) {
            for (auto v : {ExpVariant::Corrected, ExpVariant::Printed})
                CHECK(std::abs(exp_kernel(x, y, 0.7, 0, 0, v) - exp_kernel(y, x, 0.7, 0, 0, v)) < 1e-14);
            const double c = 0.7;
            const Complex i(0, 1);
            const Complex phi = exp_kernel(x, y, c, 0, 0, ExpVariant::Printed);
            CHECK(std::abs(c * exp_kernel(x, y, c, 1, 0, ExpVariant::Printed) - (x / 2 - i * y) * phi) < 1e-12 * std::abs(phi) * 10);
            // second derivative against a central difference
            const double h = 1e-4;
            const Complex fd = (exp_kernel(x + h, y, c) - 2.0 * exp_kernel(x, y, c) + exp_kernel(x - h, y, c)) / (h * h);
            CHECK(std::abs(fd - exp_kernel(x, y, c, 2, 0)) < 1e-5 * std::max(1.0, std::abs(fd)));
        }
}

TEST_CASE("Meixner-Pollaczek reference values") {
    // P_n^{(k)} = (2k)_n/n! · mp_poly
    auto standard = [](long n, double x, double k) {
        double scale = 1;
        for (long i = 0; i < n; ++i) scale *= (2 * k + i) / (i + 1);
        return scale * mp_poly(n, Complex(x), k, std::numbers::pi / 3);
    };
    const Complex a = standard(3, 0.7, 0.75);
    CHECK_THAT(a.real(), WithinRel(1.2133567162381849316, 1e-13));
    CHECK(std::abs(a.imag()) < 1e-14);
    const Complex b = standard(5, -1.2, 1.5);
    CHECK_THAT(b.real(), WithinRel(1.3852147860088616218, 1e-13));
    CHECK(std::abs(b.imag()) < 1e-13);
}

TEST_CASE("Meixner-Pollaczek recurrence and difference equation") {
    const double k = 0.9, phi = 1.1;
    const Complex i(0, 1);
    for (double x : {-2.0, 0.0, 0.35, 3.0}) {
        const auto row = mp_row(10, Complex(x), k, phi);
        for (long n = 0; n <= 10; ++n) {
            const Complex p = mp_poly(n, Complex(x), k, phi);
            CHECK(std::abs(p - row[n]) <= 1e-12 * std::max(1.0, std::abs(p)));
            // e^{iφ}(k − ix) p(x+i) + 2i(x cosφ − (n+k) sinφ) p(x) − e^{−iφ}(k + ix) p(x−i) = 0
            const Complex up = std::exp(i * phi) * (k - i * x) * mp_poly(n, Complex(x, 1), k, phi);
            const Complex mid = 2.0 * i * (x * std::cos(phi) - (n + k) * std::sin(phi)) * p;
            const Complex down = std::exp(-i * phi) * (k + i * x) * mp_poly(n, Complex(x, -1), k, phi);
            CHECK(std::abs(up + mid - down) <= 1e-12 * (std::abs(up) + std::abs(mid) + std::abs(down)));
        }
    }
}

TEST_CASE("weights are normalized") {
    const double c = 0.6;
    CHECK_THAT((Weight{WeightFamily::Poisson, c}(0)), WithinRel(std::exp(-c), 1e-15));
    double total = 0;
    for (int n = 0; n < 400; ++n) total += Weight{WeightFamily::NegBinomial, c, 0.75}(n);
    CHECK_THAT(total, WithinRel(1.0, 1e-12));
    total = 0;
    for (int n = 0; n <= 7; ++n) total += Weight{WeightFamily::Binomial, 0.3, 1, 1, 7}(n);
    CHECK_THAT(total, WithinRel(1.0, 1e-14));
    CHECK_THROWS_AS((Weight{WeightFamily::Poisson, c}(1.5)), std::domain_error);

    // continuous weights with composite Gauss-Legendre
    auto integrate = [](const auto& w, double lo, double hi) {
        const auto rule = quad::gauss_legendre(40);
        const int panels = 200;
        const double width = (hi - lo) / panels;
        double s = 0;
        for (int p = 0; p < panels; ++p)
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double x = lo + width * (p + 0.5 * (rule.nodes[q] + 1));
                s += 0.5 * width * rule.weights[q] * w(x);
            }
        return s;
    };
    CHECK_THAT(integrate(Weight{WeightFamily::Gaussian, 0.8}, -20, 20), WithinRel(1.0, 1e-12));
    CHECK_THAT(integrate(Weight{WeightFamily::Gamma, 0.5, 1.3}, 1e-12, 80), WithinRel(1.0, 1e-9));
    // the Meixner-Pollaczek weight pairs with kernels that carry e^{xφ}
    const Weight mp{WeightFamily::MP, 0.5, 0.75, 1.0};
    struct Tilted {
        Weight w;
        double operator()(double x) const { return w(x) * std::exp(2 * w.phi * x); }
    };
    CHECK_THAT(integrate(Tilted{mp}, -60, 60), WithinRel(1.0, 1e-9));
}

TEST_CASE("Gauss rules are exact on monomials") {
    const auto gh = quad::gauss_hermite(8, 0.5);
    // N(0, v) moments: (2m−1)!! v^m
    double dfact = 1;
    for (int m = 0; m <= 7; ++m) {
        const double exact = dfact * std::pow(0.5, m);
        CHECK_THAT(gh.integrate([&](double x) { return std::pow(x, 2 * m); }), WithinRel(exact, 1e-12));
        CHECK(std::abs(gh.integrate([&](double x) { return std::pow(x, 2 * m + 1); })) < 1e-12 * std::max(1.0, exact));
        dfact *= 2 * m + 1;
    }
    const double alpha = 0.5;
    const auto gl = quad::gauss_laguerre(8, alpha);
    // Gamma(α+1) moments: (α+1)_m
    double moment = 1;
    for (int m = 0; m <= 15; ++m) {
        CHECK_THAT(gl.integrate([&](double x) { return std::pow(x, m); }), WithinRel(moment, 1e-11));
        moment *= alpha + 1 + m;
    }
    const auto leg = quad::gauss_legendre(6);
    for (int m = 0; m <= 11; ++m)
        CHECK_THAT(leg.integrate([&](double x) { return std::pow(x, m); }),
                   WithinAbs(m % 2 ? 0.0 : 2.0 / (m + 1), 1e-14));
}

TEST_CASE("orthogonality relations") {
    CHECK(charlier_gram(0.75).pass);
    CHECK(meixner_gram(0.75, 0.4).pass);
    // Meixner-form parameter: c = p/(p − 1) < 0
    CHECK(krawtchouk_gram(6, Rational(-1, 2)).pass);
    CHECK(krawtchouk_gram(6, Rational(-1, 2)).max_abs_residual == 0.0);
    CHECK_THROWS_AS(krawtchouk_gram(6, Rational(1, 3)), std::domain_error);
    CHECK(hermite_orthogonality(0.75).pass);
    CHECK(laguerre_orthogonality(0.75, 0.25).pass);
    CHECK(mp_orthogonality(0.75, std::numbers::pi / 3).pass);
    CHECK(orthogonality_residual(Family::Hermite, 3, 5, 0.5, 1, 1, 8) < 1e-12);
    CHECK(orthogonality_residual(Family::Laguerre, 4, 4, 0.5, 0.75, 1, 8) < 1e-12);
    CHECK_THROWS_AS(orthogonality_residual(Family::Hermite, 9, 9, 0.5, 1, 1, 8), std::invalid_argument);
}

TEST_CASE("Gamma function helpers") {
    CHECK(std::abs(quad::gamma(Complex(5.0)) - Complex(24.0)) < 1e-12);
    CHECK_THAT(quad::gamma(Complex(0.5)).real(), WithinRel(std::sqrt(std::numbers::pi), 1e-13));
    // |Γ(1/2 + ix)|² = π / cosh(πx)
    CHECK_THAT(quad::gamma_abs_sq(0.5, 1.3), WithinRel(std::numbers::pi / std::cosh(std::numbers::pi * 1.3), 1e-12));
}
