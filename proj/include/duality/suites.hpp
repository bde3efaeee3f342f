#pragma once

#include "duality/montecarlo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace duality::suite {

using algebra::AlgebraKind;
using algebra::Element;
using algebra::Gen;
using algebra::StarName;
using algebra::TensorElement;
using G = GaussRational;

// ---------- algebra ----------

namespace detail {

template <class T>
void observe_zero(Report& r, const T& difference) {
    r.observe(difference.max_abs_coefficient());
}

inline Report exact_report(std::string name) { return make_report(std::move(name), "exact", 0.0); }

template <class Fn>
Report timed(Report r, Fn&& body) {
    Stopwatch sw;
    body(r);
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// All words of length ≤ 2 plus the unit: a small spanning set for identity checks.
template <class S>
std::vector<Element<S>> short_words(AlgebraKind k) {
    std::vector<Element<S>> out{Element<S>::unit(k)};
    for (Gen x : algebra::generators(k)) {
        out.push_back(algebra::gen<S>(x));
        for (Gen y : algebra::generators(k)) out.push_back(algebra::gen<S>(x) * algebra::gen<S>(y));
    }
    return out;
}

inline std::vector<algebra::Morphism<G>> exact_morphisms(const Rational& sqrt_c) {
    using namespace algebra;
    return {theta_charlier<G>(),         theta_exp<G>(),
            theta_exp_inverse<G>(),      theta_fourier<G>(),
            theta_fourier_inverse<G>(),  theta_sqrt_c<G>(G(sqrt_c)),
            theta_sqrt_c<G>(G(Rational(-sqrt_c))), theta_parabolic<G>(),
            theta_parabolic_inverse<G>()};
}

}  // namespace detail

inline std::vector<Report> algebra_suite(const Rational& sqrt_c = Rational(1, 2), double phi = std::numbers::pi / 3) {
    using namespace algebra;
    using detail::exact_report;
    using detail::observe_zero;
    using detail::timed;
    std::vector<Report> out;
    const auto kinds = {AlgebraKind::Heisenberg, AlgebraKind::Sl2};

    for (auto k : kinds) {
        const std::string tag = name_of(k);
        out.push_back(timed(exact_report("jacobi/" + tag), [&](Report& r) {
            for (Gen x : generators(k))
                for (Gen y : generators(k))
                    for (Gen z : generators(k)) {
                        auto X = gen<G>(x), Y = gen<G>(y), Z = gen<G>(z);
                        observe_zero(r, commutator(X, commutator(Y, Z)) + commutator(Y, commutator(Z, X)) +
                                            commutator(Z, commutator(X, Y)));
                    }
        }));
        out.push_back(timed(exact_report("bracket-table/" + tag), [&](Report& r) {
            for (Gen x : generators(k))
                for (Gen y : generators(k)) {
                    Element<G> expected(k);
                    for (const auto& [g, c] : bracket(x, y)) expected += gen<G>(g) * from_int<G>(c);
                    observe_zero(r, commutator(gen<G>(x), gen<G>(y)) - expected);
                    observe_zero(r, commutator(gen<G>(x), gen<G>(y)) + commutator(gen<G>(y), gen<G>(x)));
                }
        }));
        for (StarName s : {StarName::Dagger, StarName::Su11, StarName::IslR, StarName::Su2}) {
            if (!star_defined(s, k)) continue;
            out.push_back(timed(exact_report("star/" + tag + "/" + name_of(s)), [&](Report& r) {
                const auto words = detail::short_words<G>(k);
                const G w = G(Rational(2), Rational(-1, 3));
                for (const auto& x : words) {
                    observe_zero(r, star(star(x * w, s), s) - x * w);
                    for (const auto& y : words) observe_zero(r, star(x * y, s) - star(y, s) * star(x, s));
                }
                for (Gen x : generators(k))
                    for (Gen y : generators(k)) {
                        // [X,Y]* = [Y*,X*]
                        observe_zero(r, star(commutator(gen<G>(x), gen<G>(y)), s) -
                                            commutator(star(gen<G>(y), s), star(gen<G>(x), s)));
                    }
            }));
        }
    }

    for (const auto& m : detail::exact_morphisms(sqrt_c)) {
        out.push_back(timed(exact_report("morphism/" + m.label()), [&](Report& r) { r.observe(m.bracket_defect()); }));
    }
    out.push_back(timed(exact_report("morphism/inverses"), [&](Report& r) {
        r.observe(inverse_defect(theta_exp<G>(), theta_exp_inverse<G>()));
        r.observe(inverse_defect(theta_fourier<G>(), theta_fourier_inverse<G>()));
        r.observe(inverse_defect(theta_parabolic<G>(), theta_parabolic_inverse<G>()));
        r.observe(inverse_defect(theta_charlier<G>(), theta_charlier<G>()));
        r.observe(inverse_defect(theta_sqrt_c<G>(G(sqrt_c)), theta_sqrt_c<G>(G(Rational(-sqrt_c)))));
    }));
    out.push_back(timed(make_report("morphism/theta-phi", "float", 1e-12), [&](Report& r) {
        const auto m = theta_phi(phi);
        r.observe(m.bracket_defect());
        r.observe(inverse_defect(m, invert(m)));
    }));
    out.push_back(timed(make_report("morphism/theta-phi-printed", "float", 1e-3, Measure::Absolute, Expectation::Exceeds),
                        [&](Report& r) { r.observe(theta_phi_printed(phi).bracket_defect()); }));

    const auto omega = casimir<G>();
    out.push_back(timed(exact_report("casimir/invariance"), [&](Report& r) {
        observe_zero(r, theta_sqrt_c<G>(G(sqrt_c)).apply(omega) - omega);
        observe_zero(r, theta_parabolic<G>().apply(omega) - omega);
        observe_zero(r, star(omega, StarName::Su11) - omega);
        for (Gen g : generators(AlgebraKind::Sl2)) observe_zero(r, commutator(omega, gen<G>(g)));
    }));
    out.push_back(timed(exact_report("coproduct/casimir"), [&](Report& r) {
        auto one = Element<G>::unit(AlgebraKind::Sl2);
        auto H = gen<G>(Gen::H), E = gen<G>(Gen::E), F = gen<G>(Gen::F);
        const auto expected = tensor(one, omega) + tensor(omega, one) + tensor(H, H) + tensor(F, E) * from_int<G>(2) +
                              tensor(E, F) * from_int<G>(2);
        observe_zero(r, coproduct(omega) - expected);
        // the su(1,1) pair element expands to −½(H⊗H + 2F⊗E + 2E⊗F)
        observe_zero(r, pair_element<G>(AlgebraKind::Sl2) +
                            (tensor(H, H) + tensor(F, E) * from_int<G>(2) + tensor(E, F) * from_int<G>(2)) *
                                from_rational<G>(Rational(1, 2)));
    }));
    out.push_back(timed(exact_report("charlier-twist/pair-element"), [&](Report& r) {
        const auto Y = pair_element<G>(AlgebraKind::Heisenberg);
        observe_zero(r, theta_charlier<G>().apply(Y) - Y - charlier_remainder<G>());
    }));
    out.push_back(timed(exact_report("charlier-twist/star"), [&](Report& r) {
        const auto th = theta_charlier<G>();
        for (Gen g : generators(AlgebraKind::Heisenberg))
            observe_zero(r, star(th.image(g), StarName::Dagger) - th.apply(star(gen<G>(g), StarName::Dagger)));
    }));
    out.push_back(timed(exact_report("parabolic-twist/star"), [&](Report& r) {
        const auto th = theta_parabolic<G>();
        for (Gen g : generators(AlgebraKind::Sl2))
            observe_zero(r, th.apply(star(gen<G>(g), StarName::IslR)) - star(th.image(g), StarName::Su11));
    }));
    {
        const G s(sqrt_c), c = s * s, one = from_int<G>(1);
        const auto basis = elliptic_basis(s);
        const auto H = gen<G>(Gen::H);
        out.push_back(timed(exact_report("elliptic-basis/difference"), [&](Report& r) {
            observe_zero(r, basis[1] - basis[2] - H * ((one - c) / (from_int<G>(2) * s)) +
                                basis[0] * ((one + c) / (from_int<G>(2) * s)));
        }));
        // with [H,E] = 2E and [H,F] = −2F the sum carries an overall minus sign
        const G factor = (one - c) / (from_int<G>(4) * s);
        out.push_back(timed(exact_report("elliptic-basis/sum"), [&](Report& r) {
            observe_zero(r, basis[1] + basis[2] + commutator(H, basis[0]) * factor);
        }));
        auto printed = timed(make_report("elliptic-basis/sum/printed-sign", "exact", 1e-3, Measure::Absolute,
                                         Expectation::Exceeds),
                             [&](Report& r) { observe_zero(r, basis[1] + basis[2] - commutator(H, basis[0]) * factor); });
        out.push_back(printed);
    }
    return out;
}

// ---------- representations ----------

inline std::vector<Report> representation_suite(const rep::CarrierSize& size = {}) {
    using namespace rep;
    std::vector<Report> out;
    const G c(Rational(3, 4));
    out.push_back(bracket_residual<Stencil<G>, G>(rho_c(c), size));
    for (const auto& k : {Rational(1, 2), Rational(1), Rational(3, 4)})
        out.push_back(bracket_residual<Stencil<G>, G>(pi_k(G(k), G(Rational(1, 2))), size));
    out.push_back(bracket_residual<DiffOp<G>, G>(sigma_c(c), size));
    out.push_back(bracket_residual<DiffOp<G>, G>(sigma_k(G(Rational(3, 4))), size));
    {
        rep::CarrierSize small = size;
        small.maxdeg = std::min(size.maxdeg, 12);
        out.push_back(bracket_residual<ShiftOp<Complex>, Complex>(rho_k(Complex(0.75)), small));
        auto printed = bracket_residual<ShiftOp<Complex>, Complex>(rho_k(Complex(0.75), true), small);
        printed.name += "/printed";
        printed.expectation = Expectation::Exceeds;
        printed.tolerance = 1e-3;
        out.push_back(printed.finish());
    }
    {
        auto bad = bracket_residual<Stencil<G>, G>(corrupted(rho_c(c)), size);
        bad.expectation = Expectation::Exceeds;
        bad.tolerance = 1e-3;
        out.push_back(bad.finish());
    }
    for (const auto& k : {Rational(1, 2), Rational(1), Rational(3, 4)}) {
        auto r = casimir_check(G(k), G(Rational(1, 2)), size.nmax);
        r.name += "/k=" + k.get_str();
        out.push_back(r);
    }
    out.push_back(detail::timed(detail::exact_report("charlier-twist/remainder-vanishes"), [&](Report& r) {
        const auto op = tensor_operator<Stencil<G>, G>({rho_c(c), rho_c(c)}, algebra::charlier_remainder<G>());
        r.observe(rep::detail::residual_on_basis(op, size.nmax, 2));
    }));
    out.push_back(scale_equivalence_check(G(1), G(Rational(1, 2)), G(Rational(1, 3)), size.nmax));
    {
        auto r = scale_equivalence_check(Complex(1.0), Complex(0.5), Complex(std::sqrt(0.5)), size.nmax);
        r.name += "/float";
        out.push_back(r);
    }
    out.push_back(scale_equivalence_check(G(1), G(Rational(1, 2)), G(Rational(1, 3)), size.nmax, 2));

    // star structures
    const Rational cr(3, 4), kr(3, 4);
    out.push_back(star_adjointness_residual<G>(rho_c(c), StarName::Dagger,
                                               [&](long n) { return G(kernels::poisson_unnormalized(n, cr)); }));
    out.push_back(star_adjointness_residual<G>(pi_k(G(kr), G(Rational(1, 2))), StarName::Su11, [&](long n) {
        return G(kernels::negbin_unnormalized(n, kr, Rational(1, 4)));
    }));
    {
        auto r = star_adjointness_residual<G>(pi_k(G(kr), G(Rational(1, 2))), StarName::Su11,
                                              [&](long n) { return G(kernels::negbin_unnormalized(n, kr, Rational(1, 3))); });
        r.name += "/mismatched-weight";
        r.expectation = Expectation::Exceeds;
        r.tolerance = 1e-3;
        out.push_back(r.finish());
    }
    out.push_back(star_adjointness_residual<G>(sigma_c(c), StarName::Dagger, quad::gauss_hermite(12, 0.75)));
    out.push_back(star_adjointness_residual<G>(sigma_k(G(kr)), StarName::IslR, quad::gauss_laguerre(12, 2 * 0.75 - 1)));
    {
        auto r = star_adjointness_residual<G>(sigma_k(G(kr)), StarName::Su11, quad::gauss_laguerre(12, 2 * 0.75 - 1), 8,
                                              algebra::theta_parabolic_inverse<G>());
        r.name += "/parabolic-twist";
        out.push_back(r);
    }
    return out;
}

// ---------- generators ----------

inline std::vector<Report> generator_suite() {
    using proc::Family;
    using proc::ProcessSpec;
    std::vector<Report> out;
    auto spec = [](Family f, std::size_t n) {
        ProcessSpec p;
        p.family = f;
        p.sites = n;
        p.k.assign(n, Rational(1));
        p.j.assign(n, 2);
        return p;
    };
    std::vector<ProcessSpec> exact;
    for (std::size_t n : {2u, 3u}) {
        auto p = spec(Family::IRW, n);
        p.c = Rational(3, 4);
        p.trunc = 16;
        exact.push_back(p);
    }
    {
        auto p = spec(Family::SIP, 2);
        p.k = {Rational(1, 2), Rational(2)};
        exact.push_back(p);
        auto q = spec(Family::SIP, 3);
        q.k = {Rational(1, 2), Rational(1), Rational(2)};
        q.trunc = 8;
        exact.push_back(q);
    }
    {
        auto p = spec(Family::SEP, 2);
        p.j = {3, 2};
        exact.push_back(p);
    }
    for (std::size_t n : {2u, 3u}) {
        auto p = spec(Family::DIF, n);
        p.maxdeg = 8;
        exact.push_back(p);
    }
    {
        auto p = spec(Family::BEP, 2);
        p.k = {Rational(1, 3), Rational(2)};
        p.maxdeg = 8;
        exact.push_back(p);
    }
    {
        auto p = spec(Family::HYP, 2);
        p.k = {Rational(1, 2), Rational(3, 2)};
        p.maxdeg = 6;
        exact.push_back(p);
    }
    for (const auto& p : exact) {
        out.push_back(proc::generator_equivalence<G>(p));
        if (p.family != Family::HYP) out.push_back(proc::conservation_check<G>(p, proc::build_generator_direct<G>(p)));
        if (proc::is_discrete(p.family)) {
            out.push_back(proc::rate_check<G>(p));
            if (p.sites == 2) out.push_back(proc::reversibility_residual<G>(p));
        } else if (p.family != Family::HYP && p.sites == 2) {
            out.push_back(proc::reversibility_residual_continuous(p));
        }
    }
    // variants whose residual must not vanish
    auto control = [&](Report r, const std::string& note) {
        r.name += "/control";
        r.expectation = Expectation::Exceeds;
        r.measure = Measure::Absolute;
        r.tolerance = 1e-3;
        r.notes.push_back(note);
        out.push_back(r.finish());
    };
    {
        auto p = spec(Family::BEP, 2);
        p.k = {Rational(1, 3), Rational(2)};
        p.maxdeg = 8;
        p.bep_drift = proc::BepDrift::Literal;
        control(proc::generator_equivalence<G>(p),
                "drift (k_i x_i - k_j x_j) as displayed disagrees with the pair-sum (x_i k_j - x_j k_i) when k_i != k_j");
    }
    {
        auto p = spec(Family::HYP, 2);
        p.k = {Rational(1, 2), Rational(3, 2)};
        p.maxdeg = 6;
        p.hyp_shift = 1;
        control(proc::generator_equivalence<G>(p), "scalar shift k1k2 instead of 2k1k2");
        p.hyp_shift = 2;
        p.hyp_direct = proc::HypDirect::Displayed;
        control(proc::generator_equivalence<G>(p), "hyp operator as displayed equals -2 times the pair-sum");
    }
    return out;
}

// ---------- duality and intertwining ----------

inline std::vector<Report> duality_suite(const dual::CaseParams& p, std::optional<dual::CaseId> only = std::nullopt,
                                         bool controls = true) {
    std::vector<Report> out;
    for (const auto& ci : dual::catalog()) {
        if (only && *only != ci.id) continue;
        out.push_back(dual::duality_residual(ci.id, p));
        if (controls) out.push_back(dual::negative_control(ci.id, p));
    }
    return out;
}

inline std::vector<Report> intertwining_suite(const dual::IntertwineParams& p,
                                              std::optional<dual::KernelCase> only = std::nullopt,
                                              bool printed = true) {
    std::vector<Report> out;
    for (const auto& ic : dual::intertwining_catalog()) {
        if (only && *only != ic.id) continue;
        auto q = p;
        q.printed = false;
        for (auto& r : dual::intertwining_residual(ic.id, q)) out.push_back(r);
        if (!printed) continue;
        q.printed = true;
        for (auto& r : dual::intertwining_residual(ic.id, q)) out.push_back(r);
    }
    return out;
}

// ---------- orthogonality and kernel evaluation ----------

struct OrthogonalityOptions {
    Rational c{1, 2};
    Rational k{3, 4};
    long j = 12;
    // the Binomial weight needs c < 0 in the Meixner parametrization
    Rational krawtchouk_c{-1, 2};
    double phi = std::numbers::pi / 3;
};

inline std::vector<Report> orthogonality_suite(const OrthogonalityOptions& o = {}) {
    using kernels::Family;
    std::vector<Report> out;
    out.push_back(kernels::charlier_gram(o.c.get_d(), {12}));
    out.push_back(kernels::meixner_gram(o.k.get_d(), o.c.get_d(), {12}));
    out.push_back(kernels::krawtchouk_gram(o.j, o.krawtchouk_c));
    out.push_back(kernels::hermite_orthogonality(o.c.get_d(), 10));
    out.push_back(kernels::laguerre_orthogonality(o.k.get_d(), o.c.get_d(), 10));
    out.push_back(kernels::mp_orthogonality(o.k.get_d(), o.phi, 6));
    return out;
}

inline std::vector<Report> cross_validation_suite(const kernels::CrossParams& p = {}) {
    using kernels::Family;
    std::vector<Report> out;
    for (auto f : {Family::Charlier, Family::Meixner, Family::Krawtchouk, Family::Hermite, Family::Laguerre,
                   Family::MeixnerPollaczek})
        out.push_back(kernels::cross_validation(f, p));
    return out;
}

// ---------- simulation ----------

// The three expectation-level checks with their default initial states.
inline std::vector<mc::McConfig> default_simulations(std::size_t trials = 100000, std::uint64_t seed = 42) {
    std::vector<mc::McConfig> out(3);
    out[0].id = dual::CaseId::IrwCharlier;
    out[0].t = 0.5;
    out[1].id = dual::CaseId::SipMeixner;
    out[1].t = 0.5;
    out[2].id = dual::CaseId::SipBepLaguerre;
    out[2].t = 0.3;
    out[2].right_init = {3.0, 0.5};
    for (auto& c : out) {
        c.trials = trials;
        c.seed = seed;
    }
    return out;
}

// Re-runs a configuration and requires bit-identical estimates.
inline Report determinism_check(const mc::McConfig& cfg) {
    Stopwatch sw;
    const auto a = mc::mc_duality(cfg), b = mc::mc_duality(cfg);
    auto r = make_report(std::string("simulate/") + dual::info(cfg.id).name + "/rerun", "monte-carlo", 0.0);
    r.seed = cfg.seed;
    r.observe(std::abs(a.left.mean - b.left.mean));
    r.observe(std::abs(a.right.mean - b.right.mean));
    r.observe(std::abs(a.left.se - b.left.se));
    r.observe(std::abs(a.right.se - b.right.se));
    r.wall_time_ms = sw.ms();
    return r.finish();
}

}  // namespace duality::suite
