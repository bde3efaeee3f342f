#pragma once

#include "duality/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace duality {

using Exponents = std::vector<int>;

namespace detail {

inline long falling(long m, int d) {
    long r = 1;
    for (int i = 0; i < d; ++i) r *= (m - i);
    return r;
}

inline long binom(int n, int r) {
    if (r < 0 || r > n) return 0;
    long b = 1;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
}

template <class K, class S>
void accumulate(std::map<K, S>& m, const K& k, const S& c) {
    if (is_zero(c)) return;
    auto [it, inserted] = m.try_emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (is_zero(it->second)) m.erase(it);
    }
}

template <class T, class S>
T lift_scalar(const S& s) {
    if constexpr (std::is_same_v<T, S>) {
        return s;
    } else if constexpr (std::is_same_v<S, GaussRational>) {
        return T(s.to_complex());
    } else {
        return T(s);
    }
}

}  // namespace detail

// Sparse multivariate polynomial with exponent vectors as keys.
template <class S>
class Poly {
public:
    using Terms = std::map<Exponents, S>;

    explicit Poly(std::size_t nvars = 1) : nvars_(nvars) {}

    static Poly constant(std::size_t nvars, const S& c) {
        Poly p(nvars);
        detail::accumulate(p.terms_, Exponents(nvars, 0), c);
        return p;
    }
    static Poly monomial(std::size_t nvars, Exponents e, const S& c = from_int<S>(1)) {
        if (e.size() != nvars) throw std::invalid_argument("monomial exponent length mismatch");
        Poly p(nvars);
        detail::accumulate(p.terms_, e, c);
        return p;
    }
    static Poly variable(std::size_t nvars, std::size_t var) {
        Exponents e(nvars, 0);
        e.at(var) = 1;
        return monomial(nvars, e);
    }
    // Univariate polynomial from dense coefficients c0 + c1 x + ...
    static Poly univariate(const std::vector<S>& coeffs) {
        Poly p(1);
        for (std::size_t d = 0; d < coeffs.size(); ++d) detail::accumulate(p.terms_, Exponents{int(d)}, coeffs[d]);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    S coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? S{} : it->second;
    }

    int degree(std::size_t var) const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }
    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int v : e) s += v;
            d = std::max(d, s);
        }
        return d;
    }

    void add_term(const Exponents& e, const S& c) {
        if (e.size() != nvars_) throw std::invalid_argument("exponent length mismatch");
        detail::accumulate(terms_, e, c);
    }

    Poly& operator+=(const Poly& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) detail::accumulate(terms_, e, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) detail::accumulate(terms_, e, S(-c));
        return *this;
    }
    Poly& operator*=(const S& s) {
        if (duality::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c = c * s;
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) { return a *= from_int<S>(-1); }
    friend Poly operator*(Poly a, const S& s) { return a *= s; }
    friend Poly operator*(const S& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check(b);
        Poly out(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(a.nvars_);
                for (std::size_t v = 0; v < a.nvars_; ++v) e[v] = ea[v] + eb[v];
                detail::accumulate(out.terms_, e, S(ca * cb));
            }
        return out;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

    Poly derivative(std::size_t var, int order = 1) const {
        Poly out(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] < order) continue;
            Exponents f = e;
            f[var] -= order;
            detail::accumulate(out.terms_, f, S(c * from_int<S>(detail::falling(e[var], order))));
        }
        return out;
    }

    Poly times_variable(std::size_t var, int power = 1) const {
        Poly out(nvars_);
        for (const auto& [e, c] : terms_) {
            Exponents f = e;
            f[var] += power;
            out.terms_.emplace(std::move(f), c);
        }
        return out;
    }

    // p(x + delta e_var)
    Poly shift(std::size_t var, const S& delta) const {
        Poly out(nvars_);
        for (const auto& [e, c] : terms_) {
            S pw = from_int<S>(1);
            std::vector<S> powers{pw};
            for (int r = 1; r <= e[var]; ++r) powers.push_back(powers.back() * delta);
            for (int r = 0; r <= e[var]; ++r) {
                Exponents f = e;
                f[var] = e[var] - r;
                detail::accumulate(out.terms_, f, S(c * powers[r] * from_int<S>(detail::binom(e[var], r))));
            }
        }
        return out;
    }

    // Shift every variable by the matching entry of delta.
    Poly shift(const std::vector<S>& delta) const {
        Poly out = *this;
        for (std::size_t v = 0; v < nvars_; ++v)
            if (!duality::is_zero(delta[v])) out = out.shift(v, delta[v]);
        return out;
    }

    // Evaluation at a point; T is a float or complex type.
    template <class T>
    T eval(const std::vector<T>& x) const {
        if (x.size() != nvars_) throw std::invalid_argument("evaluation point dimension mismatch");
        T sum{};
        for (const auto& [e, c] : terms_) {
            T term = detail::lift_scalar<T>(c);
            for (std::size_t v = 0; v < nvars_; ++v)
                for (int p = 0; p < e[v]; ++p) term *= x[v];
            sum += term;
        }
        return sum;
    }

    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, magnitude(c));
        return m;
    }

    // Same polynomial viewed with extra variables; var_map[i] is the new index of old variable i.
    Poly embed(std::size_t new_nvars, const std::vector<std::size_t>& var_map) const {
        Poly out(new_nvars);
        for (const auto& [e, c] : terms_) {
            Exponents f(new_nvars, 0);
            for (std::size_t v = 0; v < nvars_; ++v) f[var_map[v]] += e[v];
            detail::accumulate(out.terms_, f, c);
        }
        return out;
    }

    template <class T>
    Poly<T> convert() const {
        Poly<T> out(nvars_);
        for (const auto& [e, c] : terms_) out.add_term(e, detail::lift_scalar<T>(c));
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const Poly& p) {
        if (p.terms_.empty()) return os << "0";
        bool first = true;
        for (const auto& [e, c] : p.terms_) {
            if (!first) os << " + ";
            first = false;
            os << c;
            for (std::size_t v = 0; v < e.size(); ++v)
                if (e[v]) os << "*x" << v << (e[v] > 1 ? "^" + std::to_string(e[v]) : "");
        }
        return os;
    }

private:
    void check(const Poly& o) const {
        if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial variable count mismatch");
    }

    std::size_t nvars_;
    Terms terms_;
};

// Σ c · x^p ∂^d over multi-indices p, d (coefficients to the left of derivatives).
template <class S>
class DiffOp {
public:
    using scalar_type = S;
    using Key = std::pair<Exponents, Exponents>;
    using Terms = std::map<Key, S>;

    explicit DiffOp(std::size_t nvars = 1) : nvars_(nvars) {}

    static DiffOp identity(std::size_t nvars) { return scalar(nvars, from_int<S>(1)); }
    static DiffOp scalar(std::size_t nvars, const S& s) {
        DiffOp op(nvars);
        detail::accumulate(op.terms_, Key{Exponents(nvars, 0), Exponents(nvars, 0)}, s);
        return op;
    }
    // c x_var^power ∂_var^order
    static DiffOp term(std::size_t nvars, std::size_t var, int power, int order, const S& c = from_int<S>(1)) {
        DiffOp op(nvars);
        Exponents p(nvars, 0), d(nvars, 0);
        p.at(var) = power;
        d.at(var) = order;
        detail::accumulate(op.terms_, Key{p, d}, c);
        return op;
    }
    // Multiplication by a polynomial.
    static DiffOp multiply(const Poly<S>& q) {
        DiffOp op(q.nvars());
        for (const auto& [e, c] : q.terms()) detail::accumulate(op.terms_, Key{e, Exponents(q.nvars(), 0)}, c);
        return op;
    }
    static DiffOp derivative(std::size_t nvars, std::size_t var, int order = 1) {
        return term(nvars, var, 0, order);
    }

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    DiffOp& operator+=(const DiffOp& o) {
        check(o);
        for (const auto& [k, c] : o.terms_) detail::accumulate(terms_, k, c);
        return *this;
    }
    DiffOp& operator-=(const DiffOp& o) {
        check(o);
        for (const auto& [k, c] : o.terms_) detail::accumulate(terms_, k, S(-c));
        return *this;
    }
    DiffOp& operator*=(const S& s) {
        if (duality::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c = c * s;
        return *this;
    }
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
    friend DiffOp operator*(DiffOp a, const S& s) { return a *= s; }
    friend DiffOp operator*(const S& s, DiffOp a) { return a *= s; }
    friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

    // a ∘ b by the Leibniz rule, variable by variable.
    friend DiffOp compose(const DiffOp& a, const DiffOp& b) {
        a.check(b);
        const std::size_t n = a.nvars_;
        DiffOp out(n);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                // per variable: x^p ∂^d ∘ x^q ∂^e = Σ_r C(d,r) q!/(q−r)! x^{p+q−r} ∂^{d−r+e}
                std::vector<std::pair<Key, long>> partial{{Key{Exponents(), Exponents()}, 1}};
                for (std::size_t v = 0; v < n; ++v) {
                    int p = ka.first[v], d = ka.second[v], q = kb.first[v], e = kb.second[v];
                    std::vector<std::pair<Key, long>> next;
                    for (const auto& [key, w] : partial)
                        for (int r = 0; r <= std::min(d, q); ++r) {
                            Key nk = key;
                            nk.first.push_back(p + q - r);
                            nk.second.push_back(d - r + e);
                            next.emplace_back(std::move(nk), w * detail::binom(d, r) * detail::falling(q, r));
                        }
                    partial = std::move(next);
                }
                for (const auto& [key, w] : partial) detail::accumulate(out.terms_, key, S(ca * cb * from_int<S>(w)));
            }
        return out;
    }

    Poly<S> apply(const Poly<S>& f) const {
        if (f.nvars() != nvars_) throw std::invalid_argument("operator/polynomial variable mismatch");
        Poly<S> out(nvars_);
        for (const auto& [k, c] : terms_)
            for (const auto& [e, fc] : f.terms()) {
                long w = 1;
                Exponents g(nvars_);
                bool vanish = false;
                for (std::size_t v = 0; v < nvars_; ++v) {
                    if (e[v] < k.second[v]) {
                        vanish = true;
                        break;
                    }
                    w *= detail::falling(e[v], k.second[v]);
                    g[v] = e[v] - k.second[v] + k.first[v];
                }
                if (vanish) continue;
                out.add_term(g, S(c * fc * from_int<S>(w)));
            }
        return out;
    }

    int max_order(std::size_t var) const {
        int m = 0;
        for (const auto& [k, c] : terms_) m = std::max(m, k.second[var]);
        return m;
    }

    // Pointwise application to a product function ∏_v g_v(x_v), given jets[v][j] = g_v^{(j)}(x_v).
    template <class T>
    T apply_to_product(const std::vector<T>& x, const std::vector<std::vector<T>>& jets) const {
        T sum{};
        for (const auto& [k, c] : terms_) {
            T term = detail::lift_scalar<T>(c);
            for (std::size_t v = 0; v < nvars_; ++v) {
                for (int p = 0; p < k.first[v]; ++p) term *= x[v];
                if (static_cast<std::size_t>(k.second[v]) >= jets[v].size())
                    throw std::out_of_range("derivative order exceeds supplied jet");
                term *= jets[v][k.second[v]];
            }
            sum += term;
        }
        return sum;
    }

    template <class T>
    double product_scale(const std::vector<T>& x, const std::vector<std::vector<T>>& jets) const {
        double sum = 0;
        for (const auto& [k, c] : terms_) {
            double term = double(magnitude(c));
            for (std::size_t v = 0; v < nvars_; ++v)
                term *= std::pow(magnitude(x[v]), k.first[v]) * magnitude(jets[v].at(k.second[v]));
            sum += term;
        }
        return sum;
    }

    // Single-variable operator placed on variable `var` of an nvars-variable space.
    DiffOp lift(std::size_t var, std::size_t nvars) const {
        if (nvars_ != 1) throw std::invalid_argument("lift expects a single-variable operator");
        DiffOp out(nvars);
        for (const auto& [k, c] : terms_) {
            Exponents p(nvars, 0), d(nvars, 0);
            p[var] = k.first[0];
            d[var] = k.second[0];
            detail::accumulate(out.terms_, Key{p, d}, c);
        }
        return out;
    }

    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& [k, c] : terms_) m = std::max(m, magnitude(c));
        return m;
    }

private:
    void check(const DiffOp& o) const {
        if (o.nvars_ != nvars_) throw std::invalid_argument("operator variable count mismatch");
    }

    std::size_t nvars_;
    Terms terms_;
};

// Σ c · x^p T^m where (T^m f)(x) = f(x + i m), m an integer vector.
template <class S>
class ShiftOp {
public:
    using scalar_type = S;
    using Key = std::pair<Exponents, std::vector<int>>;
    using Terms = std::map<Key, S>;

    explicit ShiftOp(std::size_t nvars = 1) : nvars_(nvars) {}

    static ShiftOp identity(std::size_t nvars) { return scalar(nvars, from_int<S>(1)); }
    static ShiftOp scalar(std::size_t nvars, const S& s) {
        ShiftOp op(nvars);
        detail::accumulate(op.terms_, Key{Exponents(nvars, 0), std::vector<int>(nvars, 0)}, s);
        return op;
    }
    // (a + b x_var) T^{shift} on variable var
    static ShiftOp affine_shift(std::size_t nvars, std::size_t var, const S& a, const S& b, int shift) {
        ShiftOp op(nvars);
        Exponents p0(nvars, 0), p1(nvars, 0);
        p1.at(var) = 1;
        std::vector<int> m(nvars, 0);
        m.at(var) = shift;
        detail::accumulate(op.terms_, Key{p0, m}, a);
        detail::accumulate(op.terms_, Key{p1, m}, b);
        return op;
    }

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    ShiftOp& operator+=(const ShiftOp& o) {
        check(o);
        for (const auto& [k, c] : o.terms_) detail::accumulate(terms_, k, c);
        return *this;
    }
    ShiftOp& operator-=(const ShiftOp& o) {
        check(o);
        for (const auto& [k, c] : o.terms_) detail::accumulate(terms_, k, S(-c));
        return *this;
    }
    ShiftOp& operator*=(const S& s) {
        if (duality::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c = c * s;
        return *this;
    }
    friend ShiftOp operator+(ShiftOp a, const ShiftOp& b) { return a += b; }
    friend ShiftOp operator-(ShiftOp a, const ShiftOp& b) { return a -= b; }
    friend ShiftOp operator*(ShiftOp a, const S& s) { return a *= s; }
    friend ShiftOp operator*(const S& s, ShiftOp a) { return a *= s; }
    friend bool operator==(const ShiftOp& a, const ShiftOp& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

    // x^p T^m ∘ x^q T^n = x^p (x + i m)^q T^{m+n}
    friend ShiftOp compose(const ShiftOp& a, const ShiftOp& b) {
        a.check(b);
        const std::size_t n = a.nvars_;
        ShiftOp out(n);
        const S i = imag_unit<S>();
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                Poly<S> q = Poly<S>::monomial(n, kb.first, S(ca * cb));
                std::vector<S> delta(n);
                for (std::size_t v = 0; v < n; ++v) delta[v] = i * from_int<S>(ka.second[v]);
                q = q.shift(delta);
                std::vector<int> m(n);
                for (std::size_t v = 0; v < n; ++v) m[v] = ka.second[v] + kb.second[v];
                for (const auto& [e, c] : q.terms()) {
                    Exponents p(n);
                    for (std::size_t v = 0; v < n; ++v) p[v] = e[v] + ka.first[v];
                    detail::accumulate(out.terms_, Key{p, m}, c);
                }
            }
        return out;
    }

    ShiftOp lift(std::size_t var, std::size_t nvars) const {
        if (nvars_ != 1) throw std::invalid_argument("lift expects a single-variable operator");
        ShiftOp out(nvars);
        for (const auto& [k, c] : terms_) {
            Exponents p(nvars, 0);
            std::vector<int> m(nvars, 0);
            p[var] = k.first[0];
            m[var] = k.second[0];
            detail::accumulate(out.terms_, Key{p, m}, c);
        }
        return out;
    }

    // Action on e^{φ Σx} q(x), returned as the new polynomial factor.
    Poly<Complex> apply_exp(const Poly<Complex>& q, double phi) const {
        if (q.nvars() != nvars_) throw std::invalid_argument("operator/polynomial variable mismatch");
        Poly<Complex> out(nvars_);
        const Complex i(0.0, 1.0);
        for (const auto& [k, c] : terms_) {
            std::vector<Complex> delta(nvars_);
            int total = 0;
            for (std::size_t v = 0; v < nvars_; ++v) {
                delta[v] = i * double(k.second[v]);
                total += k.second[v];
            }
            Complex factor = detail::lift_scalar<Complex>(c) * std::exp(i * phi * double(total));
            out += Poly<Complex>::monomial(nvars_, k.first, factor) * q.shift(delta);
        }
        return out;
    }

    // Pointwise action on an arbitrary function of complex arguments.
    template <class Fn>
    Complex apply_point(Fn&& f, const std::vector<Complex>& x) const {
        Complex sum{};
        const Complex i(0.0, 1.0);
        for (const auto& [k, c] : terms_) {
            Complex term = detail::lift_scalar<Complex>(c);
            std::vector<Complex> y = x;
            for (std::size_t v = 0; v < nvars_; ++v) {
                for (int p = 0; p < k.first[v]; ++p) term *= x[v];
                y[v] += i * double(k.second[v]);
            }
            sum += term * f(y);
        }
        return sum;
    }

    template <class Fn>
    double point_scale(Fn&& f, const std::vector<Complex>& x) const {
        double sum = 0;
        const Complex i(0.0, 1.0);
        for (const auto& [k, c] : terms_) {
            double term = double(magnitude(c));
            std::vector<Complex> y = x;
            for (std::size_t v = 0; v < nvars_; ++v) {
                term *= std::pow(magnitude(x[v]), k.first[v]);
                y[v] += i * double(k.second[v]);
            }
            sum += term * magnitude(f(y));
        }
        return sum;
    }

    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& [k, c] : terms_) m = std::max(m, magnitude(c));
        return m;
    }

private:
    void check(const ShiftOp& o) const {
        if (o.nvars_ != nvars_) throw std::invalid_argument("operator variable count mismatch");
    }

    std::size_t nvars_;
    Terms terms_;
};

}  // namespace duality
