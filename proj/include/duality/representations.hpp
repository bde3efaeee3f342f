#pragma once

#include "duality/algebra.hpp"
#include "duality/kernels.hpp"
#include "duality/morphism.hpp"
#include "duality/poly.hpp"
#include "duality/quadrature.hpp"
#include "duality/report.hpp"
#include "duality/stencil.hpp"

#include <array>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace duality::rep {

using algebra::AlgebraKind;
using algebra::Element;
using algebra::Gen;
using algebra::StarName;
using algebra::TensorElement;
using algebra::Morphism;

enum class RepName { RhoC, SigmaC, PiK, SigmaK, RhoK, RhoKPrinted };
enum class Orientation { Homomorphism, AntiHomomorphism };
enum class CarrierKind { TruncatedSeq, Poly, ExpPoly };

inline const char* name_of(RepName r) {
    switch (r) {
        case RepName::RhoC: return "rho_c";
        case RepName::SigmaC: return "sigma_c";
        case RepName::PiK: return "pi_k";
        case RepName::SigmaK: return "sigma_k";
        case RepName::RhoK: return "rho_k";
        case RepName::RhoKPrinted: return "rho_k_printed";
    }
    return "?";
}

// Generator actions on one site; Op is Stencil, DiffOp or ShiftOp.
template <class Op>
struct Representation {
    std::string name;
    AlgebraKind kind;
    Orientation orientation = Orientation::Homomorphism;
    std::array<Op, 3> action;

    const Op& of(Gen g) const {
        if (algebra::kind_of(g) != kind) throw std::invalid_argument("generator outside the representation's algebra");
        return action[static_cast<std::size_t>(g) % 3];
    }
};

template <class S>
using DiscreteRep = Representation<Stencil<S>>;
template <class S>
using PolyRep = Representation<DiffOp<S>>;
template <class S>
using ShiftRep = Representation<ShiftOp<S>>;

// ---------- the concrete representations ----------

// [a f](n) = n f(n−1), [a† f](n) = c f(n+1), Z = c
template <class S>
DiscreteRep<S> rho_c(const S& c) {
    const auto n = Poly<S>::variable(1, 0);
    return {"rho_c",
            AlgebraKind::Heisenberg,
            Orientation::Homomorphism,
            {Stencil<S>::single(-1, n), Stencil<S>::single(1, Poly<S>::constant(1, c)), Stencil<S>::scalar(1, c)}};
}

// H = 2(k+n), E f(n) = (n/s) f(n−1), F f(n) = −s(2k+n) f(n+1), s = √c (either sign)
template <class S>
DiscreteRep<S> pi_k(const S& k, const S& s) {
    if (duality::is_zero(s)) throw std::invalid_argument("pi_k needs a nonzero square root of c");
    const auto n = Poly<S>::variable(1, 0);
    const auto one = Poly<S>::constant(1, from_int<S>(1));
    const S two = from_int<S>(2);
    auto H = Stencil<S>::single(0, (one * k + n) * two);
    auto E = Stencil<S>::single(-1, n * (from_int<S>(1) / s));
    auto F = Stencil<S>::single(1, (one * (two * k) + n) * S(-s));
    return {"pi_k", AlgebraKind::Sl2, Orientation::Homomorphism, {H, E, F}};
}

// a = x − c∂, a† = c∂, Z = c
template <class S>
PolyRep<S> sigma_c(const S& c) {
    using D = DiffOp<S>;
    return {"sigma_c",
            AlgebraKind::Heisenberg,
            Orientation::Homomorphism,
            {D::term(1, 0, 1, 0) - D::term(1, 0, 0, 1, c), D::term(1, 0, 0, 1, c), D::scalar(1, c)}};
}

// H = −2x∂ − (2k − x), E = −(i/2)x, F = −2ix∂² − 2i(2k − x)∂ + (i/2)(4k − x); an anti-representation.
template <class S>
PolyRep<S> sigma_k(const S& k) {
    using D = DiffOp<S>;
    const S i = imag_unit<S>();
    const S two = from_int<S>(2), half = from_int<S>(1) / two;
    D H = D::term(1, 0, 1, 1, from_int<S>(-2)) + D::scalar(1, S(-(two * k))) + D::term(1, 0, 1, 0);
    D E = D::term(1, 0, 1, 0, S(-(half * i)));
    D F = D::term(1, 0, 1, 2, S(-(two * i))) + D::term(1, 0, 0, 1, S(-(two * i) * two * k)) +
          D::term(1, 0, 1, 1, S(two * i)) + D::scalar(1, S(half * i * from_int<S>(4) * k)) +
          D::term(1, 0, 1, 0, S(-(half * i)));
    return {"sigma_k", AlgebraKind::Sl2, Orientation::AntiHomomorphism, {H, E, F}};
}

// H = 2ix, E = (k − ix) f(x+i), F = ±(k + ix) f(x−i); the printed table has the minus sign.
template <class S>
ShiftRep<S> rho_k(const S& k, bool printed = false) {
    using T = ShiftOp<S>;
    const S i = imag_unit<S>();
    T H(1);
    H += T::affine_shift(1, 0, S{}, S(from_int<S>(2) * i), 0);
    T E = T::affine_shift(1, 0, k, S(-i), 1);
    T F = T::affine_shift(1, 0, k, i, -1);
    if (printed) F *= from_int<S>(-1);
    return {printed ? "rho_k_printed" : "rho_k", AlgebraKind::Sl2, Orientation::Homomorphism, {H, E, F}};
}

// ---------- building from a spec ----------

template <class S>
struct RepSpec {
    RepName which = RepName::RhoC;
    CarrierKind carrier = CarrierKind::TruncatedSeq;
    S c = from_int<S>(1);
    S k = from_int<S>(1);
    // √c for pi_k; required in exact mode because it enters the action.
    std::optional<S> sqrt_c;
    double phi = std::numbers::pi / 3;
    // pi_k with c ≥ 1 is allowed only when the weight normalization is dropped.
    bool normalized_weight = true;
};

template <class S>
using AnyRep = std::variant<DiscreteRep<S>, PolyRep<S>, ShiftRep<S>>;

namespace detail {
template <class S>
double real_part(const S& s) {
    if constexpr (std::is_same_v<S, GaussRational>) {
        if (!s.is_real()) throw std::invalid_argument("parameter must be real");
        return s.re().get_d();
    } else {
        if (s.imag() != 0.0) throw std::invalid_argument("parameter must be real");
        return s.real();
    }
}
}  // namespace detail

template <class S>
AnyRep<S> build_representation(const RepSpec<S>& spec) {
    const double c = detail::real_part(spec.c);
    const double k = detail::real_part(spec.k);
    auto need_carrier = [&](CarrierKind want) {
        if (spec.carrier != want) throw std::invalid_argument(std::string("wrong carrier kind for ") + name_of(spec.which));
    };
    switch (spec.which) {
        case RepName::RhoC:
            need_carrier(CarrierKind::TruncatedSeq);
            if (c <= 0) throw std::invalid_argument("rho_c needs c > 0");
            return rho_c(spec.c);
        case RepName::SigmaC:
            need_carrier(CarrierKind::Poly);
            if (c <= 0) throw std::invalid_argument("sigma_c needs c > 0");
            return sigma_c(spec.c);
        case RepName::PiK: {
            need_carrier(CarrierKind::TruncatedSeq);
            if (k <= 0) throw std::invalid_argument("pi_k needs k > 0");
            if (c <= 0 || (spec.normalized_weight && c >= 1))
                throw std::invalid_argument("pi_k needs 0 < c < 1 (or an unnormalized weight)");
            S s;
            if (spec.sqrt_c) {
                s = *spec.sqrt_c;
                if (!(s * s == spec.c) && is_exact_v<S>) throw std::invalid_argument("sqrt_c does not square to c");
            } else if constexpr (is_exact_v<S>) {
                throw std::invalid_argument("exact pi_k needs a rational square root of c");
            } else {
                s = std::sqrt(spec.c);
            }
            return pi_k(spec.k, s);
        }
        case RepName::SigmaK:
            need_carrier(CarrierKind::Poly);
            if (k <= 0) throw std::invalid_argument("sigma_k needs k > 0");
            return sigma_k(spec.k);
        case RepName::RhoK:
        case RepName::RhoKPrinted:
            need_carrier(CarrierKind::ExpPoly);
            if (k <= 0) throw std::invalid_argument("rho_k needs k > 0");
            if (!(spec.phi > 0 && spec.phi < std::numbers::pi)) throw std::invalid_argument("phi must lie in (0, pi)");
            return rho_k(spec.k, spec.which == RepName::RhoKPrinted);
    }
    throw std::invalid_argument("unknown representation");
}

// ---------- elements and tensors as operators ----------

template <class Op, class S>
Op word_operator(const Representation<Op>& rep, const algebra::Word& w) {
    Op out = Op::identity(1);
    // leftmost symbol acts last for a homomorphism, first for an anti-homomorphism
    if (rep.orientation == Orientation::Homomorphism) {
        for (auto it = w.rbegin(); it != w.rend(); ++it) out = compose(rep.of(*it), out);
    } else {
        for (Gen g : w) out = compose(rep.of(g), out);
    }
    return out;
}

template <class Op, class S>
Op element_operator(const Representation<Op>& rep, const Element<S>& x) {
    if (x.kind() != rep.kind) throw std::invalid_argument("element and representation use different algebras");
    Op out(1);
    for (const auto& [w, c] : x.terms()) out += word_operator<Op, S>(rep, w) * c;
    return out;
}

template <class Op, class S>
Op tensor_operator(const std::vector<Representation<Op>>& reps, const TensorElement<S>& t) {
    if (reps.size() != t.factors()) throw std::invalid_argument("factor count mismatch");
    const std::size_t n = reps.size();
    for (const auto& r : reps)
        if (r.kind != t.kind()) throw std::invalid_argument("tensor and representation use different algebras");
    Op out(n);
    for (const auto& [key, c] : t.terms()) {
        Op term = Op::identity(n);
        for (std::size_t f = 0; f < n; ++f) {
            if (key[f].empty()) continue;
            term = compose(word_operator<Op, S>(reps[f], key[f]).lift(f, n), term);
        }
        out += term * c;
    }
    return out;
}

template <class S>
Applied<S> apply_element(const DiscreteRep<S>& rep, const Element<S>& x, const SparseVec<S>& f, long nmax) {
    return element_operator<Stencil<S>, S>(rep, x).apply(f, nmax);
}

template <class S>
Applied<S> apply_tensor(const std::vector<DiscreteRep<S>>& reps, const TensorElement<S>& t, const SparseVec<S>& f,
                        long nmax) {
    return tensor_operator<Stencil<S>, S>(reps, t).apply(f, nmax);
}

template <class S>
struct AppliedPoly {
    Poly<S> values;
    bool margin_ok = true;
};

// Largest degree increase of an operator in any variable.
template <class S>
int degree_raise(const DiffOp<S>& op) {
    int r = 0;
    for (const auto& [key, c] : op.terms())
        for (std::size_t v = 0; v < key.first.size(); ++v) r = std::max(r, key.first[v] - key.second[v]);
    return r;
}

template <class S>
int degree_raise(const ShiftOp<S>& op) {
    int r = 0;
    for (const auto& [key, c] : op.terms())
        for (int p : key.first) r = std::max(r, p);
    return r;
}

template <class S>
bool within_degree(const Poly<S>& f, int limit) {
    for (std::size_t v = 0; v < f.nvars(); ++v)
        if (f.degree(v) > limit) return false;
    return true;
}

template <class S>
AppliedPoly<S> apply_element(const PolyRep<S>& rep, const Element<S>& x, const Poly<S>& f, int maxdeg) {
    const auto op = element_operator<DiffOp<S>, S>(rep, x);
    return {op.apply(f), within_degree(f, maxdeg - degree_raise(op))};
}

template <class S>
AppliedPoly<S> apply_tensor(const std::vector<PolyRep<S>>& reps, const TensorElement<S>& t, const Poly<S>& f,
                            int maxdeg) {
    const auto op = tensor_operator<DiffOp<S>, S>(reps, t);
    return {op.apply(f), within_degree(f, maxdeg - degree_raise(op))};
}

// e^{φΣx} q(x) ↦ e^{φΣx} (result)
template <class S>
AppliedPoly<Complex> apply_element(const ShiftRep<S>& rep, const Element<S>& x, const Poly<Complex>& q, double phi,
                                   int maxdeg) {
    const auto op = element_operator<ShiftOp<S>, S>(rep, x);
    return {op.apply_exp(q, phi), within_degree(q, maxdeg - degree_raise(op))};
}

// ---------- identity checks ----------

// Flips the sign of the first generator's action (negative control).
template <class Op>
Representation<Op> corrupted(Representation<Op> rep) {
    rep.action[0] *= from_int<typename Op::scalar_type>(-1);
    rep.name += "_corrupted";
    return rep;
}

namespace detail {

template <class S>
double residual_on_basis(const Stencil<S>& d, long nmax, std::size_t sites = 1) {
    double worst = 0.0;
    const long limit = nmax - d.shift_radius();
    for (const auto& m : box_indices(sites, limit)) worst = std::max(worst, max_abs(d.column(m)));
    return worst;
}

template <class S>
double residual_on_basis(const DiffOp<S>& d, int maxdeg) {
    double worst = 0.0;
    const int limit = maxdeg - std::max(0, degree_raise(d));
    for (int m = 0; m <= limit; ++m) worst = std::max(worst, d.apply(Poly<S>::monomial(1, {m})).max_abs_coefficient());
    return worst;
}

template <class S>
double residual_on_basis(const ShiftOp<S>& d, int maxdeg, double phi) {
    double worst = 0.0;
    const int limit = maxdeg - std::max(0, degree_raise(d));
    for (int m = 0; m <= limit; ++m)
        worst = std::max(worst, d.apply_exp(Poly<Complex>::monomial(1, {m}), phi).max_abs_coefficient());
    return worst;
}

}  // namespace detail

// Carrier size for each operator type: truncation for stencils, maximal degree otherwise.
struct CarrierSize {
    long nmax = 24;
    int maxdeg = 16;
    double phi = std::numbers::pi / 3;
};

template <class Op, class S = typename Op::scalar_type>
double apply_difference(const Op& d, const CarrierSize& size) {
    if constexpr (std::is_same_v<Op, Stencil<S>>)
        return detail::residual_on_basis(d, size.nmax);
    else if constexpr (std::is_same_v<Op, DiffOp<S>>)
        return detail::residual_on_basis(d, size.maxdeg);
    else
        return detail::residual_on_basis(d, size.maxdeg, size.phi);
}

// ρ([X,Y]) − σ[ρX, ρY] on interior basis vectors, σ = −1 for anti-representations.
template <class Op, class S>
Report bracket_residual(const Representation<Op>& rep, const CarrierSize& size = {}) {
    Stopwatch sw;
    auto r = make_report("bracket/" + rep.name, is_exact_v<S> ? "exact" : "float", is_exact_v<S> ? 0.0 : 1e-12);
    const S sign = from_int<S>(rep.orientation == Orientation::Homomorphism ? 1 : -1);
    for (Gen x : algebra::generators(rep.kind))
        for (Gen y : algebra::generators(rep.kind)) {
            const auto br = element_operator<Op, S>(rep, algebra::commutator(algebra::gen<S>(x), algebra::gen<S>(y)));
            const Op comm = compose(rep.of(x), rep.of(y)) - compose(rep.of(y), rep.of(x));
            r.observe(apply_difference<Op, S>(br - comm * sign, size));
        }
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// ⟨ρ(X)δ_m, δ_l⟩_w − ⟨δ_m, ρ(X*)δ_l⟩_w over interior m, l with an exact (possibly unnormalized) weight.
template <class S>
Report star_adjointness_residual(const DiscreteRep<S>& rep, StarName star, const std::function<S(long)>& weight,
                                 long nmax = 24) {
    Stopwatch sw;
    auto r = make_report("star/" + rep.name + "/" + algebra::name_of(star), is_exact_v<S> ? "exact" : "float",
                         is_exact_v<S> ? 0.0 : 1e-12, Measure::Relative);
    if (!algebra::star_defined(star, rep.kind)) throw std::invalid_argument("star structure not defined here");
    for (Gen g : algebra::generators(rep.kind)) {
        const auto X = element_operator<Stencil<S>, S>(rep, algebra::gen<S>(g));
        const auto Xs = element_operator<Stencil<S>, S>(rep, algebra::star(algebra::gen<S>(g), star));
        const long limit = nmax - std::max(X.shift_radius(), Xs.shift_radius());
        for (long m = 0; m <= limit; ++m) {
            const auto col = X.column({m});
            for (long l = 0; l <= limit; ++l) {
                const auto it = col.find({l});
                const S lhs = it == col.end() ? S{} : S(weight(l) * it->second);
                const auto col2 = Xs.column({l});
                const auto jt = col2.find({m});
                const S rhs = jt == col2.end() ? S{} : S(weight(m) * ScalarTraits<S>::conj(jt->second));
                r.observe_pair(magnitude(lhs), magnitude(rhs), magnitude(S(lhs - rhs)));
            }
        }
    }
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// Continuous version through a quadrature rule on monomials; `pre` is composed before the representation.
template <class S>
Report star_adjointness_residual(const PolyRep<S>& rep, StarName star, const quad::Rule& rule, int maxdeg = 8,
                                 const std::optional<Morphism<S>>& pre = std::nullopt, double tolerance = 1e-10) {
    Stopwatch sw;
    auto r = make_report("star/" + rep.name + "/" + algebra::name_of(star), "float", tolerance, Measure::Relative);
    if (!algebra::star_defined(star, rep.kind)) throw std::invalid_argument("star structure not defined here");
    auto mapped = [&](const Element<S>& e) { return pre ? pre->apply(e) : e; };
    auto eval = [](const Poly<S>& p, double x) { return p.template eval<Complex>({Complex(x)}); };
    for (Gen g : algebra::generators(rep.kind)) {
        const auto X = element_operator<DiffOp<S>, S>(rep, mapped(algebra::gen<S>(g)));
        const auto Xs = element_operator<DiffOp<S>, S>(rep, mapped(algebra::star(algebra::gen<S>(g), star)));
        for (int m = 0; m <= maxdeg; ++m)
            for (int l = 0; l <= maxdeg; ++l) {
                const auto f = Poly<S>::monomial(1, {m});
                const auto h = Poly<S>::monomial(1, {l});
                const auto Xf = X.apply(f);
                const auto Xsh = Xs.apply(h);
                if (Xf.total_degree() + l > 2 * int(rule.nodes.size()) - 1 ||
                    Xsh.total_degree() + m > 2 * int(rule.nodes.size()) - 1)
                    throw std::invalid_argument("quadrature not exact for this degree");
                const Complex lhs = rule.integrate([&](double x) { return eval(Xf, x) * std::conj(eval(h, x)); });
                const Complex rhs = rule.integrate([&](double x) { return eval(f, x) * std::conj(eval(Xsh, x)); });
                auto norm = [&](const Poly<S>& p) { return std::sqrt(rule.integrate([&](double x) { return std::norm(eval(p, x)); })); };
                // relative to the Cauchy–Schwarz bound; pairs that vanish exactly are common
                const double scale = std::max(norm(Xf) * norm(h) + norm(f) * norm(Xsh), 1e-300);
                r.observe(std::abs(lhs - rhs), std::abs(lhs - rhs) / scale);
            }
    }
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// π_{k,c}(Ω) = 2k(k−1) on interior basis vectors.
template <class S>
Report casimir_check(const S& k, const S& s, long nmax = 24) {
    Stopwatch sw;
    auto r = make_report("casimir/pi_k", is_exact_v<S> ? "exact" : "float", is_exact_v<S> ? 0.0 : 1e-12);
    const auto rep = pi_k(k, s);
    const auto omega = element_operator<Stencil<S>, S>(rep, algebra::casimir<S>());
    const S two = from_int<S>(2);
    const auto d = omega - Stencil<S>::scalar(1, S(two * k * (k - from_int<S>(1))));
    r.observe(detail::residual_on_basis(d, nmax));
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// I∘π_{k,c1}(X) − π_{k,c2}(X)∘I with (I f)(n) = (s1/s2)^{e n} f(n), e = 1 for the correct map.
template <class S>
Report scale_equivalence_check(const S& k, const S& s1, const S& s2, long nmax = 24, int exponent_factor = 1) {
    Stopwatch sw;
    auto r = make_report(exponent_factor == 1 ? "scale-equivalence" : "scale-equivalence/wrong-exponent",
                         is_exact_v<S> ? "exact" : "float", is_exact_v<S> ? 0.0 : 1e-12, Measure::Relative,
                         exponent_factor == 1 ? Expectation::Within : Expectation::Exceeds);
    if (!is_exact_v<S>) r.tolerance = exponent_factor == 1 ? 1e-12 : 1e-3;
    if (is_exact_v<S> && exponent_factor != 1) r.tolerance = 1e-3;
    const auto p1 = pi_k(k, s1), p2 = pi_k(k, s2);
    S ratio = s1 / s2;
    if (exponent_factor != 1) ratio = ratio * ratio;
    auto I = [&](long n) {
        S v = from_int<S>(1);
        for (long i = 0; i < n; ++i) v = v * ratio;
        return v;
    };
    for (Gen g : algebra::generators(AlgebraKind::Sl2)) {
        const auto& A = p1.of(g);
        const auto& B = p2.of(g);
        const long limit = nmax - std::max(A.shift_radius(), B.shift_radius());
        for (long m = 0; m <= limit; ++m) {
            SparseVec<S> lhs;
            for (const auto& [n, v] : A.column({m})) lhs[n] = I(n[0]) * v;
            SparseVec<S> rhs;
            for (const auto& [n, v] : B.column({m})) rhs[n] = v * I(m);
            for (const auto& [n, v] : lhs) {
                const S w = rhs.count(n) ? rhs[n] : S{};
                r.observe_pair(magnitude(v), magnitude(w), magnitude(S(v - w)));
            }
        }
    }
    r.wall_time_ms = sw.ms();
    return r.finish();
}

}  // namespace duality::rep
