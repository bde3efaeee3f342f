#pragma once

#include "duality/scalar.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace duality::algebra {

enum class AlgebraKind { Heisenberg, Sl2 };

// Enum order is the normal order: a < a† < Z and H < E < F.
enum class Gen : std::uint8_t { a, ad, Z, H, E, F };

enum class StarName { Dagger, Su11, IslR, Su2 };

inline AlgebraKind kind_of(Gen g) { return g <= Gen::Z ? AlgebraKind::Heisenberg : AlgebraKind::Sl2; }

inline const char* name_of(Gen g) {
    switch (g) {
        case Gen::a: return "a";
        case Gen::ad: return "a+";
        case Gen::Z: return "Z";
        case Gen::H: return "H";
        case Gen::E: return "E";
        case Gen::F: return "F";
    }
    return "?";
}

inline const char* name_of(AlgebraKind k) { return k == AlgebraKind::Heisenberg ? "heisenberg" : "sl2"; }

inline const char* name_of(StarName s) {
    switch (s) {
        case StarName::Dagger: return "dagger";
        case StarName::Su11: return "su11";
        case StarName::IslR: return "isl2r";
        case StarName::Su2: return "su2";
    }
    return "?";
}

inline std::array<Gen, 3> generators(AlgebraKind k) {
    if (k == AlgebraKind::Heisenberg) return {Gen::a, Gen::ad, Gen::Z};
    return {Gen::H, Gen::E, Gen::F};
}

inline bool star_defined(StarName s, AlgebraKind k) {
    return (s == StarName::Dagger) == (k == AlgebraKind::Heisenberg);
}

// [x, y] for generators, as (generator, integer coefficient) pairs.
inline std::vector<std::pair<Gen, int>> bracket(Gen x, Gen y) {
    if (kind_of(x) != kind_of(y)) throw std::invalid_argument("bracket of generators from different algebras");
    if (x == y) return {};
    auto flip = [](std::vector<std::pair<Gen, int>> v) {
        for (auto& t : v) t.second = -t.second;
        return v;
    };
    if (kind_of(x) == AlgebraKind::Heisenberg) {
        if (x == Gen::ad && y == Gen::a) return {{Gen::Z, 1}};
        if (x == Gen::a && y == Gen::ad) return {{Gen::Z, -1}};
        return {};
    }
    if (x == Gen::H && y == Gen::E) return {{Gen::E, 2}};
    if (x == Gen::H && y == Gen::F) return {{Gen::F, -2}};
    if (x == Gen::E && y == Gen::F) return {{Gen::H, 1}};
    return flip(bracket(y, x));
}

using Word = std::vector<Gen>;

template <class S>
class Element {
public:
    using Terms = std::map<Word, S>;

    explicit Element(AlgebraKind kind) : kind_(kind) {}

    static Element gen(Gen g) {
        Element e(kind_of(g));
        e.terms_[Word{g}] = from_int<S>(1);
        return e;
    }
    static Element unit(AlgebraKind kind) { return scalar(kind, from_int<S>(1)); }
    static Element scalar(AlgebraKind kind, const S& s) {
        Element e(kind);
        if (!duality::is_zero(s)) e.terms_[Word{}] = s;
        return e;
    }
    // Linear combination of generators.
    static Element linear(AlgebraKind kind, std::initializer_list<std::pair<Gen, S>> parts) {
        Element e(kind);
        for (const auto& [g, c] : parts) e.add_term(Word{g}, c);
        return e;
    }

    AlgebraKind kind() const { return kind_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    S coefficient(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? S{} : it->second;
    }

    // Adds c * w after rewriting w into normal order.
    void add_term(const Word& w, const S& c) {
        if (duality::is_zero(c)) return;
        for (Gen g : w)
            if (kind_of(g) != kind_) throw std::invalid_argument("generator from a different algebra");
        std::vector<std::pair<Word, S>> stack{{w, c}};
        while (!stack.empty()) {
            auto [word, coef] = std::move(stack.back());
            stack.pop_back();
            std::size_t i = 0;
            while (i + 1 < word.size() && !(word[i] > word[i + 1])) ++i;
            if (i + 1 >= word.size()) {
                accumulate(word, coef);
                continue;
            }
            // XY = YX + [X,Y]
            Word swapped = word;
            std::swap(swapped[i], swapped[i + 1]);
            auto br = bracket(word[i], word[i + 1]);
            stack.emplace_back(std::move(swapped), coef);
            for (const auto& [g, b] : br) {
                Word shorter(word.begin(), word.begin() + static_cast<long>(i));
                shorter.push_back(g);
                shorter.insert(shorter.end(), word.begin() + static_cast<long>(i) + 2, word.end());
                stack.emplace_back(std::move(shorter), coef * from_int<S>(b));
            }
        }
    }

    Element& operator+=(const Element& o) {
        check_kind(o);
        for (const auto& [w, c] : o.terms_) accumulate(w, c);
        return *this;
    }
    Element& operator-=(const Element& o) {
        check_kind(o);
        for (const auto& [w, c] : o.terms_) accumulate(w, -c);
        return *this;
    }
    Element& operator*=(const S& s) {
        if (duality::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [w, c] : terms_) c = c * s;
        return *this;
    }

    friend Element operator+(Element x, const Element& y) { return x += y; }
    friend Element operator-(Element x, const Element& y) { return x -= y; }
    friend Element operator-(Element x) { return x *= from_int<S>(-1); }
    friend Element operator*(Element x, const S& s) { return x *= s; }
    friend Element operator*(const S& s, Element x) { return x *= s; }

    friend Element operator*(const Element& x, const Element& y) {
        x.check_kind(y);
        Element out(x.kind_);
        for (const auto& [wx, cx] : x.terms_)
            for (const auto& [wy, cy] : y.terms_) {
                Word w = wx;
                w.insert(w.end(), wy.begin(), wy.end());
                out.add_term(w, cx * cy);
            }
        return out;
    }

    friend bool operator==(const Element& x, const Element& y) {
        return x.kind_ == y.kind_ && x.terms_ == y.terms_;
    }

    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& [w, c] : terms_) m = std::max(m, magnitude(c));
        return m;
    }

    // Largest word length present.
    std::size_t degree() const {
        std::size_t d = 0;
        for (const auto& [w, c] : terms_) d = std::max(d, w.size());
        return d;
    }

    friend std::ostream& operator<<(std::ostream& os, const Element& e) {
        if (e.terms_.empty()) return os << "0";
        bool first = true;
        for (const auto& [w, c] : e.terms_) {
            if (!first) os << " + ";
            first = false;
            os << c;
            for (Gen g : w) os << "*" << name_of(g);
        }
        return os;
    }

private:
    void check_kind(const Element& o) const {
        if (o.kind_ != kind_) throw std::invalid_argument("mixed-algebra elements");
    }
    void accumulate(const Word& w, const S& c) {
        if (duality::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (duality::is_zero(it->second)) terms_.erase(it);
        }
    }

    AlgebraKind kind_;
    Terms terms_;
};

template <class S>
Element<S> gen(Gen g) { return Element<S>::gen(g); }

template <class S>
Element<S> commutator(const Element<S>& x, const Element<S>& y) {
    return x * y - y * x;
}

// Image of a generator under a star structure.
template <class S>
Element<S> star_of(Gen g, StarName s) {
    auto k = kind_of(g);
    if (!star_defined(s, k))
        throw std::invalid_argument(std::string("star ") + name_of(s) + " is not defined on " + name_of(k));
    switch (s) {
        case StarName::Dagger:
            if (g == Gen::a) return gen<S>(Gen::ad);
            if (g == Gen::ad) return gen<S>(Gen::a);
            return gen<S>(Gen::Z);
        case StarName::Su11:
            if (g == Gen::H) return gen<S>(Gen::H);
            if (g == Gen::E) return -gen<S>(Gen::F);
            return -gen<S>(Gen::E);
        case StarName::IslR:
            return -gen<S>(g);
        case StarName::Su2:
            if (g == Gen::H) return gen<S>(Gen::H);
            if (g == Gen::E) return gen<S>(Gen::F);
            return gen<S>(Gen::E);
    }
    throw std::invalid_argument("unknown star");
}

// Antilinear antihomomorphism extension of the generator table.
template <class S>
Element<S> star(const Element<S>& x, StarName s) {
    Element<S> out(x.kind());
    for (const auto& [w, c] : x.terms()) {
        Element<S> term = Element<S>::scalar(x.kind(), ScalarTraits<S>::conj(c));
        for (auto it = w.rbegin(); it != w.rend(); ++it) term = term * star_of<S>(*it, s);
        out += term;
    }
    return out;
}

// Elements of U(g)^{⊗N}: maps from N-tuples of normal-ordered words to coefficients.
template <class S>
class TensorElement {
public:
    using Key = std::vector<Word>;
    using Terms = std::map<Key, S>;

    TensorElement(AlgebraKind kind, std::size_t factors) : kind_(kind), n_(factors) {
        if (factors == 0) throw std::invalid_argument("tensor needs at least one factor");
    }

    static TensorElement unit(AlgebraKind kind, std::size_t factors) {
        TensorElement t(kind, factors);
        t.terms_[Key(factors)] = from_int<S>(1);
        return t;
    }

    // x_1 ⊗ ... ⊗ x_N
    static TensorElement product(const std::vector<Element<S>>& parts) {
        if (parts.empty()) throw std::invalid_argument("empty tensor product");
        TensorElement t(parts.front().kind(), parts.size());
        std::vector<std::pair<Key, S>> acc{{Key{}, from_int<S>(1)}};
        for (const auto& p : parts) {
            if (p.kind() != t.kind_) throw std::invalid_argument("mixed-algebra tensor factors");
            std::vector<std::pair<Key, S>> next;
            for (const auto& [k, c] : acc)
                for (const auto& [w, d] : p.terms()) {
                    Key nk = k;
                    nk.push_back(w);
                    next.emplace_back(std::move(nk), c * d);
                }
            acc = std::move(next);
        }
        for (const auto& [k, c] : acc) t.accumulate(k, c);
        return t;
    }

    AlgebraKind kind() const { return kind_; }
    std::size_t factors() const { return n_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    TensorElement& operator+=(const TensorElement& o) {
        check(o);
        for (const auto& [k, c] : o.terms_) accumulate(k, c);
        return *this;
    }
    TensorElement& operator-=(const TensorElement& o) {
        check(o);
        for (const auto& [k, c] : o.terms_) accumulate(k, -c);
        return *this;
    }
    TensorElement& operator*=(const S& s) {
        if (duality::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c = c * s;
        return *this;
    }
    friend TensorElement operator+(TensorElement x, const TensorElement& y) { return x += y; }
    friend TensorElement operator-(TensorElement x, const TensorElement& y) { return x -= y; }
    friend TensorElement operator*(TensorElement x, const S& s) { return x *= s; }
    friend TensorElement operator*(const S& s, TensorElement x) { return x *= s; }

    friend TensorElement operator*(const TensorElement& x, const TensorElement& y) {
        x.check(y);
        TensorElement out(x.kind_, x.n_);
        for (const auto& [kx, cx] : x.terms_)
            for (const auto& [ky, cy] : y.terms_) {
                std::vector<Element<S>> parts;
                parts.reserve(x.n_);
                for (std::size_t f = 0; f < x.n_; ++f) {
                    Element<S> e(x.kind_);
                    Word w = kx[f];
                    w.insert(w.end(), ky[f].begin(), ky[f].end());
                    e.add_term(w, from_int<S>(1));
                    parts.push_back(std::move(e));
                }
                out += product(parts) * (cx * cy);
            }
        return out;
    }

    friend bool operator==(const TensorElement& x, const TensorElement& y) {
        return x.kind_ == y.kind_ && x.n_ == y.n_ && x.terms_ == y.terms_;
    }

    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& [k, c] : terms_) m = std::max(m, magnitude(c));
        return m;
    }

    friend std::ostream& operator<<(std::ostream& os, const TensorElement& t) {
        if (t.terms_.empty()) return os << "0";
        bool first = true;
        for (const auto& [k, c] : t.terms_) {
            if (!first) os << " + ";
            first = false;
            os << c << "*";
            for (std::size_t f = 0; f < k.size(); ++f) {
                if (f) os << "(x)";
                if (k[f].empty()) os << "1";
                for (std::size_t i = 0; i < k[f].size(); ++i) os << (i ? "." : "") << name_of(k[f][i]);
            }
        }
        return os;
    }

private:
    void check(const TensorElement& o) const {
        if (o.kind_ != kind_ || o.n_ != n_) throw std::invalid_argument("tensor factor mismatch");
    }
    void accumulate(const Key& k, const S& c) {
        if (duality::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (duality::is_zero(it->second)) terms_.erase(it);
        }
    }

    AlgebraKind kind_;
    std::size_t n_;
    Terms terms_;
};

template <class S>
TensorElement<S> tensor(const Element<S>& x, const Element<S>& y) {
    return TensorElement<S>::product({x, y});
}

// Δ(X) = 1⊗X + X⊗1, extended multiplicatively.
template <class S>
TensorElement<S> coproduct(const Element<S>& x) {
    auto kind = x.kind();
    auto one = Element<S>::unit(kind);
    TensorElement<S> out(kind, 2);
    for (const auto& [w, c] : x.terms()) {
        auto term = TensorElement<S>::unit(kind, 2);
        for (Gen g : w) {
            auto dg = tensor(one, gen<S>(g)) + tensor(gen<S>(g), one);
            term = term * dg;
        }
        out += term * c;
    }
    return out;
}

// Places the two factors of y at sites i < j (1-based) of an N-fold tensor.
template <class S>
TensorElement<S> embed_pair(const TensorElement<S>& y, std::size_t i, std::size_t j, std::size_t n) {
    if (y.factors() != 2) throw std::invalid_argument("embed_pair needs a two-fold tensor");
    if (!(1 <= i && i < j && j <= n)) throw std::out_of_range("embed_pair: need 1 <= i < j <= N");
    TensorElement<S> out(y.kind(), n);
    for (const auto& [k, c] : y.terms()) {
        std::vector<Element<S>> parts(n, Element<S>::unit(y.kind()));
        parts[i - 1] = Element<S>(y.kind());
        parts[i - 1].add_term(k[0], from_int<S>(1));
        parts[j - 1] = Element<S>(y.kind());
        parts[j - 1].add_term(k[1], from_int<S>(1));
        out += TensorElement<S>::product(parts) * c;
    }
    return out;
}

// ---- named elements ----

// ½H² + EF + FE
template <class S>
Element<S> casimir() {
    auto H = gen<S>(Gen::H), E = gen<S>(Gen::E), F = gen<S>(Gen::F);
    return H * H * from_rational<S>(Rational(1, 2)) + E * F + F * E;
}

// −aH + E − F
template <class S>
Element<S> x_a(const S& a) {
    return gen<S>(Gen::H) * (-a) + gen<S>(Gen::E) - gen<S>(Gen::F);
}

// (1⊗a − a⊗1)(a†⊗1 − 1⊗a†)
template <class S>
TensorElement<S> heisenberg_pair_element() {
    auto one = Element<S>::unit(AlgebraKind::Heisenberg);
    auto a = gen<S>(Gen::a), ad = gen<S>(Gen::ad);
    return (tensor(one, a) - tensor(a, one)) * (tensor(ad, one) - tensor(one, ad));
}

// ½(1⊗Ω + Ω⊗1 − Δ(Ω))
template <class S>
TensorElement<S> sl2_pair_element() {
    auto one = Element<S>::unit(AlgebraKind::Sl2);
    auto om = casimir<S>();
    return (tensor(one, om) + tensor(om, one) - coproduct(om)) * from_rational<S>(Rational(1, 2));
}

template <class S>
TensorElement<S> pair_element(AlgebraKind k) {
    return k == AlgebraKind::Heisenberg ? heisenberg_pair_element<S>() : sl2_pair_element<S>();
}

// The correction term with (θ⊗θ)(Y) = Y + R for the Charlier twist.
template <class S>
TensorElement<S> charlier_remainder() {
    auto one = Element<S>::unit(AlgebraKind::Heisenberg);
    auto a = gen<S>(Gen::a), ad = gen<S>(Gen::ad), Z = gen<S>(Gen::Z);
    auto two = from_int<S>(2);
    return tensor(one, Z * ad) - tensor(Z, ad) + tensor(Z * ad, one) - tensor(ad, Z) + tensor(one, a * Z) -
           tensor(Z, a) + tensor(a * Z, one) - tensor(a, Z) + tensor(Z, Z) * two - tensor(Z * Z, one) -
           tensor(one, Z * Z);
}

// Elliptic basis attached to √c = s.
template <class S>
std::array<Element<S>, 3> elliptic_basis(const S& s) {
    auto one = from_int<S>(1);
    auto c = s * s;
    if (c == one) throw std::invalid_argument("elliptic basis needs c != 1");
    auto d = one / (one - c);
    auto two = from_int<S>(2);
    auto H = gen<S>(Gen::H), E = gen<S>(Gen::E), F = gen<S>(Gen::F);
    return {H * ((one + c) * d) - E * (two * s * d) + F * (two * s * d),
            H * (-s * d) + E * d - F * (c * d),
            H * (s * d) - E * (c * d) + F * d};
}

}  // namespace duality::algebra
