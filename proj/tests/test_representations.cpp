#include "duality/suites.hpp"

#include <catch_amalgamated.hpp>

using namespace duality;
using namespace duality::rep;
using algebra::Gen;
using G = GaussRational;

namespace {

template <class Op>
Op op_of(const Representation<Op>& r, const algebra::Element<typename Op::scalar_type>& x) {
    return element_operator<Op, typename Op::scalar_type>(r, x);
}

Poly<G> x_power(int m, std::size_t nvars = 1, std::size_t var = 0, G coef = G(1)) {
    std::vector<int> e(nvars, 0);
    e[var] = m;
    return Poly<G>::monomial(nvars, e, coef);
}

}  // namespace

TEST_CASE("rho_c acts by weighted shifts") {
    const G c(Rational(3, 4));
    const auto r = rho_c(c);
    // [a f](n) = n f(n−1): δ_3 is sent to 4 δ_4
    const auto col = r.of(Gen::a).column({3});
    REQUIRE(col.size() == 1);
    CHECK(col.at({4}) == G(4));
    // [a† f](n) = c f(n+1): δ_3 is sent to c δ_2
    const auto col2 = r.of(Gen::ad).column({3});
    REQUIRE(col2.size() == 1);
    CHECK(col2.at({2}) == c);
    // a† a is diagonal with entries c(n+1)
    const auto num = op_of(r, algebra::gen<G>(Gen::ad) * algebra::gen<G>(Gen::a));
    for (long n = 0; n < 10; ++n) {
        const auto v = num.column({n});
        REQUIRE(v.size() == 1);
        CHECK(v.at({n}) == c * G(n + 1));
    }
    // δ_0 loses nothing at the boundary: [a† f](0) only looks at f(1)
    CHECK(r.of(Gen::ad).column({0}).empty());
}

TEST_CASE("pi_k diagonal and ladder actions") {
    const auto r = pi_k(G(1), G(Rational(1, 2)));
    for (long n = 0; n < 8; ++n) CHECK(r.of(Gen::H).column({n}).at({n}) == G(2 * (1 + n)));
    // E f(n) = (n/s) f(n−1)
    CHECK(r.of(Gen::E).column({2}).at({3}) == G(6));
    // F f(n) = −s(2k+n) f(n+1)
    CHECK(r.of(Gen::F).column({2}).at({1}) == G(Rational(-3, 2)));
    CHECK_THROWS_AS(pi_k(G(1), G(0)), std::invalid_argument);
}

TEST_CASE("sigma_k is an anti-representation on polynomials") {
    const G k(Rational(3, 4));
    const auto r = sigma_k(k);
    CHECK(r.orientation == Orientation::AntiHomomorphism);
    const auto one = Poly<G>::constant(1, G(1));
    CHECK(r.of(Gen::E).apply(one) == x_power(1, 1, 0, G(Rational(0), Rational(-1, 2))));
    // H·1 = −(2k − x)
    CHECK(r.of(Gen::H).apply(one) == Poly<G>::constant(1, G(Rational(-3, 2))) + x_power(1));
    const auto br = bracket_residual<DiffOp<G>, G>(r);
    CHECK(br.pass);
    CHECK(br.max_abs_residual == 0.0);
}

TEST_CASE("sigma_c: a = x − c d/dx, a† = c d/dx") {
    const G c(Rational(2, 5));
    const auto r = sigma_c(c);
    CHECK(r.of(Gen::a).apply(x_power(2)) == x_power(3) - x_power(1, 1, 0, G(2) * c));
    CHECK(r.of(Gen::ad).apply(x_power(2)) == x_power(1, 1, 0, G(2) * c));
    CHECK(r.of(Gen::Z).apply(x_power(2)) == x_power(2, 1, 0, c));
}

TEST_CASE("pair element in the discrete Heisenberg representation") {
    const G c(Rational(3, 4));
    const auto Y = tensor_operator<Stencil<G>, G>({rho_c(c), rho_c(c)}, algebra::heisenberg_pair_element<G>());
    auto first = [](const Index& m) { return G(m[0]); };
    for (long n1 = 0; n1 < 6; ++n1)
        for (long n2 = 0; n2 < 6; ++n2) CHECK(Y.apply_at<G>(first, {n1, n2}) == c * G(n2 - n1));
    // constants are annihilated
    auto constant = [](const Index&) { return G(1); };
    for (long n1 = 0; n1 < 6; ++n1) CHECK(Y.apply_at<G>(constant, {n1, 3}) == G(0));
}

TEST_CASE("pair element in the Gaussian representation") {
    const G c(Rational(3, 4));
    const auto Y = tensor_operator<DiffOp<G>, G>({sigma_c(c), sigma_c(c)}, algebra::heisenberg_pair_element<G>());
    const auto x1 = x_power(1, 2, 0), x2 = x_power(1, 2, 1);
    CHECK(Y.apply(x1) == (x1 - x2) * G(-c));
    CHECK(Y.apply(Poly<G>::constant(2, G(1))).max_abs_coefficient() == 0.0);
}

TEST_CASE("mismatched algebras are refused") {
    const auto r = rho_c(G(1));
    CHECK_THROWS_AS(op_of(r, algebra::gen<G>(Gen::H)), std::invalid_argument);
    CHECK_THROWS_AS(r.of(Gen::E), std::invalid_argument);
}

TEST_CASE("truncation margin is reported") {
    const auto r = rho_c(G(1));
    auto ok = apply_element(r, algebra::gen<G>(Gen::a), basis_vector<G>({3}), 10);
    CHECK(ok.margin_ok);
    auto edge = apply_element(r, algebra::gen<G>(Gen::a), basis_vector<G>({10}), 10);
    CHECK_FALSE(edge.margin_ok);
}

TEST_CASE("bracket relations and Casimir value") {
    for (const auto& k : {Rational(1, 2), Rational(2), Rational(5, 3)}) {
        const auto r = bracket_residual<Stencil<G>, G>(pi_k(G(k), G(Rational(2, 3))));
        CHECK(r.max_abs_residual == 0.0);
        CHECK(casimir_check(G(k), G(Rational(2, 3))).max_abs_residual == 0.0);
    }
    CHECK(bracket_residual<Stencil<G>, G>(rho_c(G(Rational(1, 7)))).max_abs_residual == 0.0);
    // flipping one generator breaks the brackets
    CHECK(bracket_residual<Stencil<G>, G>(corrupted(rho_c(G(Rational(1, 7))))).max_abs_residual > 0.0);
}

TEST_CASE("shift representation: the sign-corrected table closes, the printed one does not") {
    CarrierSize size;
    size.maxdeg = 10;
    CHECK(bracket_residual<ShiftOp<Complex>, Complex>(rho_k(Complex(1.25)), size).pass);
    CHECK(bracket_residual<ShiftOp<Complex>, Complex>(rho_k(Complex(1.25), true), size).max_abs_residual > 1e-3);
}

TEST_CASE("rescaling c is an equivalence only with exponent n") {
    CHECK(scale_equivalence_check(G(Rational(3, 2)), G(Rational(1, 2)), G(Rational(2, 3))).pass);
    auto wrong = scale_equivalence_check(G(Rational(3, 2)), G(Rational(1, 2)), G(Rational(2, 3)), 24, 2);
    CHECK(wrong.pass);  // negative control: passes when the residual is large
    CHECK(wrong.max_rel_residual > 1e-3);
}

TEST_CASE("star adjointness against the matching weights") {
    const Rational c(2, 5);
    auto poisson = [&](long n) { return G(kernels::poisson_unnormalized(n, c)); };
    CHECK(star_adjointness_residual<G>(rho_c(G(c)), algebra::StarName::Dagger, poisson).max_rel_residual == 0.0);
    auto wrong = [&](long n) { return G(kernels::poisson_unnormalized(n, Rational(1, 2))); };
    CHECK(star_adjointness_residual<G>(rho_c(G(c)), algebra::StarName::Dagger, wrong).max_rel_residual > 1e-3);
    CHECK(star_adjointness_residual<G>(sigma_c(G(c)), algebra::StarName::Dagger, quad::gauss_hermite(12, 0.4)).pass);
}

TEST_CASE("representation suite passes") {
    for (const auto& r : suite::representation_suite()) {
        INFO(r.name << " residual " << r.residual());
        CHECK(r.pass);
    }
}
