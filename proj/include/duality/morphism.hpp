#pragma once

#include "duality/algebra.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace duality::algebra {

enum class MorphismName {
    Identity,
    ThetaCharlier,
    ThetaExp,
    ThetaExpInverse,
    ThetaFourier,
    ThetaFourierInverse,
    ThetaSqrtC,
    ThetaParabolic,
    ThetaParabolicInverse,
    ThetaPhi,
    ThetaPhiInverse,
    ThetaPhiPrinted,
    Custom
};

struct MorphismParams {
    Rational sqrt_c{1, 2};
    double phi = std::numbers::pi / 3.0;
};

// Linear map on generators, extended multiplicatively to U(g).
template <class S>
class Morphism {
public:
    Morphism(MorphismName name, std::string label, AlgebraKind kind, std::array<Element<S>, 3> images,
             std::string inverse_label = {})
        : name_(name), label_(std::move(label)), inverse_label_(std::move(inverse_label)), kind_(kind),
          images_(std::move(images)) {
        for (const auto& e : images_)
            if (e.kind() != kind_) throw std::invalid_argument("morphism image from a different algebra");
    }

    MorphismName name() const { return name_; }
    const std::string& label() const { return label_; }
    const std::string& inverse_label() const { return inverse_label_; }
    AlgebraKind kind() const { return kind_; }

    const Element<S>& image(Gen g) const {
        if (kind_of(g) != kind_) throw std::invalid_argument("generator outside the morphism's algebra");
        return images_[index(g)];
    }

    Element<S> apply(const Element<S>& x) const {
        if (x.kind() != kind_) throw std::invalid_argument("morphism applied to element of another algebra");
        Element<S> out(kind_);
        for (const auto& [w, c] : x.terms()) {
            auto term = Element<S>::scalar(kind_, c);
            for (Gen g : w) term = term * image(g);
            out += term;
        }
        return out;
    }

    // θ⊗…⊗θ
    TensorElement<S> apply(const TensorElement<S>& t) const {
        if (t.kind() != kind_) throw std::invalid_argument("morphism applied to tensor of another algebra");
        TensorElement<S> out(kind_, t.factors());
        for (const auto& [key, c] : t.terms()) {
            std::vector<Element<S>> parts;
            for (const auto& w : key) {
                Element<S> e(kind_);
                e.add_term(w, from_int<S>(1));
                parts.push_back(apply(e));
            }
            out += TensorElement<S>::product(parts) * c;
        }
        return out;
    }

    // Largest coefficient of θ([X,Y]) − [θX, θY] over generator pairs.
    double bracket_defect() const {
        double worst = 0.0;
        for (Gen x : generators(kind_))
            for (Gen y : generators(kind_)) {
                auto lhs = apply(commutator(gen<S>(x), gen<S>(y)));
                auto rhs = commutator(image(x), image(y));
                worst = std::max(worst, (lhs - rhs).max_abs_coefficient());
            }
        return worst;
    }

    bool preserves_brackets() const {
        for (Gen x : generators(kind_))
            for (Gen y : generators(kind_))
                if (!(apply(commutator(gen<S>(x), gen<S>(y))) == commutator(image(x), image(y)))) return false;
        return true;
    }

private:
    static std::size_t index(Gen g) { return static_cast<std::size_t>(g) % 3; }

    MorphismName name_;
    std::string label_;
    std::string inverse_label_;
    AlgebraKind kind_;
    std::array<Element<S>, 3> images_;
};

// outer ∘ inner
template <class S>
Morphism<S> compose(const Morphism<S>& outer, const Morphism<S>& inner, std::string label = {}) {
    auto gens = generators(inner.kind());
    return Morphism<S>(MorphismName::Custom, label.empty() ? outer.label() + "*" + inner.label() : label,
                       inner.kind(),
                       {outer.apply(inner.image(gens[0])), outer.apply(inner.image(gens[1])),
                        outer.apply(inner.image(gens[2]))});
}

// Inverse of a morphism whose generator images are linear in the generators.
template <class S>
Morphism<S> invert(const Morphism<S>& m, std::string label = {}) {
    auto gens = generators(m.kind());
    // column j holds the coordinates of image(gens[j])
    std::array<std::array<S, 6>, 3> aug;
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t j = 0; j < 3; ++j) {
            const auto& img = m.image(gens[j]);
            for (const auto& [w, c] : img.terms())
                if (w.size() != 1) throw std::invalid_argument("invert: image is not linear in generators");
            aug[r][j] = img.coefficient(Word{gens[r]});
        }
        for (std::size_t j = 0; j < 3; ++j) aug[r][3 + j] = r == j ? from_int<S>(1) : S{};
    }
    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col; r < 3; ++r)
            if (magnitude(aug[r][col]) > magnitude(aug[piv][col])) piv = r;
        if (duality::is_zero(aug[piv][col])) throw std::domain_error("invert: singular morphism");
        std::swap(aug[piv], aug[col]);
        S p = aug[col][col];
        for (auto& v : aug[col]) v = v / p;
        for (std::size_t r = 0; r < 3; ++r) {
            if (r == col || duality::is_zero(aug[r][col])) continue;
            S f = aug[r][col];
            for (std::size_t j = 0; j < 6; ++j) aug[r][j] -= f * aug[col][j];
        }
    }
    std::array<Element<S>, 3> images{Element<S>(m.kind()), Element<S>(m.kind()), Element<S>(m.kind())};
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t r = 0; r < 3; ++r) images[j].add_term(Word{gens[r]}, aug[r][3 + j]);
    return Morphism<S>(MorphismName::Custom, label.empty() ? m.label() + "^-1" : label, m.kind(), images,
                       m.label());
}

// True when inner∘outer is the identity on generators.
template <class S>
double inverse_defect(const Morphism<S>& m, const Morphism<S>& inv) {
    double worst = 0.0;
    for (Gen g : generators(m.kind())) {
        worst = std::max(worst, (inv.apply(m.image(g)) - gen<S>(g)).max_abs_coefficient());
        worst = std::max(worst, (m.apply(inv.image(g)) - gen<S>(g)).max_abs_coefficient());
    }
    return worst;
}

// ---- catalog ----

template <class S>
Morphism<S> identity_morphism(AlgebraKind k) {
    auto g = generators(k);
    return Morphism<S>(MorphismName::Identity, "id", k, {gen<S>(g[0]), gen<S>(g[1]), gen<S>(g[2])}, "id");
}

// a → Z − a, a† → Z − a†, Z → Z
template <class S>
Morphism<S> theta_charlier() {
    auto a = gen<S>(Gen::a), ad = gen<S>(Gen::ad), Z = gen<S>(Gen::Z);
    return Morphism<S>(MorphismName::ThetaCharlier, "theta-charlier", AlgebraKind::Heisenberg,
                       {Z - a, Z - ad, Z}, "theta-charlier");
}

// a → ½(a − a†), a† → i(a + a†), Z → iZ
template <class S>
Morphism<S> theta_exp() {
    auto a = gen<S>(Gen::a), ad = gen<S>(Gen::ad), Z = gen<S>(Gen::Z);
    auto i = imag_unit<S>();
    auto half = from_rational<S>(Rational(1, 2));
    return Morphism<S>(MorphismName::ThetaExp, "theta-exp", AlgebraKind::Heisenberg,
                       {(a - ad) * half, (a + ad) * i, Z * i}, "theta-exp-inverse");
}

// a → a − (i/2)a†, a† → −a − (i/2)a†, Z → −iZ
template <class S>
Morphism<S> theta_exp_inverse() {
    auto a = gen<S>(Gen::a), ad = gen<S>(Gen::ad), Z = gen<S>(Gen::Z);
    auto i = imag_unit<S>();
    auto ih = i * from_rational<S>(Rational(1, 2));
    return Morphism<S>(MorphismName::ThetaExpInverse, "theta-exp-inverse", AlgebraKind::Heisenberg,
                       {a - ad * ih, -a - ad * ih, Z * (-i)}, "theta-exp");
}

// a → −ia, a† → ia†, Z → Z: the twist carried by the Gaussian-normalized exponential kernel.
template <class S>
Morphism<S> theta_fourier() {
    auto a = gen<S>(Gen::a), ad = gen<S>(Gen::ad), Z = gen<S>(Gen::Z);
    auto i = imag_unit<S>();
    return Morphism<S>(MorphismName::ThetaFourier, "theta-fourier", AlgebraKind::Heisenberg,
                       {a * (-i), ad * i, Z}, "theta-fourier-inverse");
}

template <class S>
Morphism<S> theta_fourier_inverse() {
    auto a = gen<S>(Gen::a), ad = gen<S>(Gen::ad), Z = gen<S>(Gen::Z);
    auto i = imag_unit<S>();
    return Morphism<S>(MorphismName::ThetaFourierInverse, "theta-fourier-inverse", AlgebraKind::Heisenberg,
                       {a * i, ad * (-i), Z}, "theta-fourier");
}

// H → H_√c, E → E_√c, F → F_√c with √c = s; inverse is the same map at −s.
template <class S>
Morphism<S> theta_sqrt_c(const S& s) {
    auto basis = elliptic_basis(s);
    return Morphism<S>(MorphismName::ThetaSqrtC, "theta-sqrtc", AlgebraKind::Sl2, basis, "theta-sqrtc(-s)");
}

// H → E + F, E → (i/2)(−H + E − F), F → (i/2)(H + E − F)
template <class S>
Morphism<S> theta_parabolic() {
    auto H = gen<S>(Gen::H), E = gen<S>(Gen::E), F = gen<S>(Gen::F);
    auto ih = imag_unit<S>() * from_rational<S>(Rational(1, 2));
    return Morphism<S>(MorphismName::ThetaParabolic, "theta-parabolic", AlgebraKind::Sl2,
                       {E + F, (-H + E - F) * ih, (H + E - F) * ih}, "theta-parabolic-inverse");
}

// H → i(E − F), E → ½H − (i/2)(E + F), F → ½H + (i/2)(E + F)
template <class S>
Morphism<S> theta_parabolic_inverse() {
    auto H = gen<S>(Gen::H), E = gen<S>(Gen::E), F = gen<S>(Gen::F);
    auto i = imag_unit<S>();
    auto half = from_rational<S>(Rational(1, 2));
    auto ih = i * half;
    return Morphism<S>(MorphismName::ThetaParabolicInverse, "theta-parabolic-inverse", AlgebraKind::Sl2,
                       {(E - F) * i, H * half - (E + F) * ih, H * half + (E + F) * ih}, "theta-parabolic");
}

// Hyperbolic twist used with the Meixner–Pollaczek kernel (float only).
//   H → (i/sinφ)(−cosφ H + E − F)
//   E → (1/(2i sinφ))(−H + e^{iφ}E − e^{−iφ}F)
//   F → (1/(2i sinφ))(H − e^{−iφ}E + e^{iφ}F)
inline Morphism<Complex> theta_phi(double phi) {
    if (!(phi > 0.0 && phi < std::numbers::pi)) throw std::domain_error("theta_phi: phi must lie in (0, pi)");
    const Complex i(0.0, 1.0);
    const double s = std::sin(phi), c = std::cos(phi);
    const Complex e = std::exp(i * phi), einv = std::exp(-i * phi);
    const Complex pre = 1.0 / (2.0 * i * s);
    auto H = gen<Complex>(Gen::H), E = gen<Complex>(Gen::E), F = gen<Complex>(Gen::F);
    return Morphism<Complex>(MorphismName::ThetaPhi, "theta-phi", AlgebraKind::Sl2,
                             {(H * Complex(-c) + E - F) * (i / s), (-H + E * e - F * einv) * pre,
                              (H - E * einv + F * e) * pre},
                             "theta-phi-inverse");
}

// The table exactly as printed; it does not preserve brackets.
inline Morphism<Complex> theta_phi_printed(double phi) {
    if (!(phi > 0.0 && phi < std::numbers::pi)) throw std::domain_error("theta_phi: phi must lie in (0, pi)");
    const Complex i(0.0, 1.0);
    const double s = std::sin(phi), c = std::cos(phi);
    const Complex e = std::exp(i * phi), einv = std::exp(-i * phi);
    const Complex pre = 1.0 / (2.0 * i * s);
    auto H = gen<Complex>(Gen::H), E = gen<Complex>(Gen::E), F = gen<Complex>(Gen::F);
    return Morphism<Complex>(MorphismName::ThetaPhiPrinted, "theta-phi-printed", AlgebraKind::Sl2,
                             {(H * Complex(-c) + E - F) * (i / s), (-H + E * einv - F * e) * pre,
                              (-H + E * e - F * einv) * pre});
}

// Factory used by the CLI: rejects float-only morphisms in exact mode.
template <class S>
Morphism<S> make_morphism(MorphismName name, const MorphismParams& p = {}) {
    switch (name) {
        case MorphismName::ThetaCharlier: return theta_charlier<S>();
        case MorphismName::ThetaExp: return theta_exp<S>();
        case MorphismName::ThetaExpInverse: return theta_exp_inverse<S>();
        case MorphismName::ThetaFourier: return theta_fourier<S>();
        case MorphismName::ThetaFourierInverse: return theta_fourier_inverse<S>();
        case MorphismName::ThetaSqrtC: return theta_sqrt_c<S>(from_rational<S>(p.sqrt_c));
        case MorphismName::ThetaParabolic: return theta_parabolic<S>();
        case MorphismName::ThetaParabolicInverse: return theta_parabolic_inverse<S>();
        case MorphismName::ThetaPhi:
        case MorphismName::ThetaPhiInverse:
        case MorphismName::ThetaPhiPrinted:
            if constexpr (is_exact_v<S>) {
                throw std::invalid_argument("theta-phi is float-only");
            } else {
                if (name == MorphismName::ThetaPhi) return theta_phi(p.phi);
                if (name == MorphismName::ThetaPhiPrinted) return theta_phi_printed(p.phi);
                return invert(theta_phi(p.phi), "theta-phi-inverse");
            }
        case MorphismName::Identity:
        case MorphismName::Custom: break;
    }
    throw std::invalid_argument("no catalog entry for this morphism");
}

}  // namespace duality::algebra
