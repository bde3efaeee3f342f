#pragma once

#include "duality/poly.hpp"

#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace duality {

using Index = std::vector<long>;

// Finitely supported function on ℕ^N.
template <class S>
using SparseVec = std::map<Index, S>;

template <class S>
SparseVec<S> basis_vector(const Index& m) {
    return SparseVec<S>{{m, from_int<S>(1)}};
}

// Result of applying an operator to a truncated input.
template <class S>
struct Applied {
    SparseVec<S> values;
    bool margin_ok = true;
};

// (T f)(n) = Σ_d c_d(n) f(n + d), c_d polynomial in the site indices, f(n) = 0 off ℕ^N.
template <class S>
class Stencil {
public:
    using scalar_type = S;
    using Offset = std::vector<int>;
    using Terms = std::map<Offset, Poly<S>>;

    explicit Stencil(std::size_t sites = 1) : sites_(sites) {}

    static Stencil identity(std::size_t sites) { return scalar(sites, from_int<S>(1)); }
    static Stencil scalar(std::size_t sites, const S& s) {
        Stencil st(sites);
        st.add(Offset(sites, 0), Poly<S>::constant(sites, s));
        return st;
    }
    // Single-site term: coefficient polynomial coef(n) times f(n + offset).
    static Stencil single(int offset, const Poly<S>& coef) {
        Stencil st(1);
        st.add(Offset{offset}, coef);
        return st;
    }

    std::size_t sites() const { return sites_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Offset& d, const Poly<S>& coef) {
        if (d.size() != sites_ || coef.nvars() != sites_) throw std::invalid_argument("stencil term dimension mismatch");
        if (coef.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(d, coef);
        if (!inserted) {
            it->second += coef;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Stencil& operator+=(const Stencil& o) {
        check(o);
        for (const auto& [d, c] : o.terms_) add(d, c);
        return *this;
    }
    Stencil& operator-=(const Stencil& o) {
        check(o);
        for (const auto& [d, c] : o.terms_) add(d, -c);
        return *this;
    }
    Stencil& operator*=(const S& s) {
        Terms scaled;
        for (auto& [d, c] : terms_) {
            auto p = c * s;
            if (!p.is_zero()) scaled.emplace(d, std::move(p));
        }
        terms_ = std::move(scaled);
        return *this;
    }
    friend Stencil operator+(Stencil a, const Stencil& b) { return a += b; }
    friend Stencil operator-(Stencil a, const Stencil& b) { return a -= b; }
    friend Stencil operator*(Stencil a, const S& s) { return a *= s; }
    friend Stencil operator*(const S& s, Stencil a) { return a *= s; }
    friend bool operator==(const Stencil& a, const Stencil& b) { return a.sites_ == b.sites_ && a.terms_ == b.terms_; }

    // (A∘B f)(n) = Σ_a A_a(n) Σ_b B_b(n + a) f(n + a + b)
    friend Stencil compose(const Stencil& a, const Stencil& b) {
        a.check(b);
        Stencil out(a.sites_);
        for (const auto& [da, ca] : a.terms_)
            for (const auto& [db, cb] : b.terms_) {
                std::vector<S> delta(a.sites_);
                Offset d(a.sites_);
                for (std::size_t v = 0; v < a.sites_; ++v) {
                    delta[v] = from_int<S>(da[v]);
                    d[v] = da[v] + db[v];
                }
                out.add(d, ca * cb.shift(delta));
            }
        return out;
    }

    Stencil lift(std::size_t site, std::size_t sites) const {
        if (sites_ != 1) throw std::invalid_argument("lift expects a single-site stencil");
        Stencil out(sites);
        for (const auto& [d, c] : terms_) {
            Offset e(sites, 0);
            e[site] = d[0];
            out.add(e, c.embed(sites, {site}));
        }
        return out;
    }

    // Largest index displacement in any single site.
    int shift_radius() const {
        int r = 0;
        for (const auto& [d, c] : terms_)
            for (int v : d) r = std::max(r, std::abs(v));
        return r;
    }

    S coefficient(const Offset& d, const Index& n) const {
        auto it = terms_.find(d);
        if (it == terms_.end()) return S{};
        return it->second.eval(to_scalars(n));
    }

    // Pointwise: Σ_d c_d(n) f(n+d) for an arbitrary f on ℕ^N.
    template <class T, class Fn>
    T apply_at(Fn&& f, const Index& n) const {
        T sum{};
        for (const auto& [d, c] : terms_) {
            Index m = n;
            bool outside = false;
            for (std::size_t v = 0; v < sites_; ++v) {
                m[v] += d[v];
                outside = outside || m[v] < 0;
            }
            if (outside) continue;
            T coef;
            if constexpr (std::is_same_v<T, S>)
                coef = c.eval(to_scalars(n));
            else
                coef = detail::lift_scalar<T>(c.eval(to_scalars(n)));
            if (coef == T{}) continue;
            sum += coef * f(m);
        }
        return sum;
    }

    // Σ_d |c_d(n)| |f(n+d)|: the size of the terms that apply_at cancels against each other.
    template <class Fn>
    double scale_at(Fn&& f, const Index& n) const {
        double sum = 0;
        for (const auto& [d, c] : terms_) {
            Index m = n;
            bool outside = false;
            for (std::size_t v = 0; v < sites_; ++v) {
                m[v] += d[v];
                outside = outside || m[v] < 0;
            }
            if (outside) continue;
            sum += double(magnitude(c.eval(to_scalars(n)))) * magnitude(f(m));
        }
        return sum;
    }

    // Image of the basis vector δ_m: entries at n = m − d with value c_d(n).
    SparseVec<S> column(const Index& m) const {
        SparseVec<S> out;
        for (const auto& [d, c] : terms_) {
            Index n = m;
            bool outside = false;
            for (std::size_t v = 0; v < sites_; ++v) {
                n[v] -= d[v];
                outside = outside || n[v] < 0;
            }
            if (outside) continue;
            detail::accumulate(out, n, c.eval(to_scalars(n)));
        }
        return out;
    }

    // Applies to f known on {0..nmax}^N; flags inputs beyond nmax − radius.
    Applied<S> apply(const SparseVec<S>& f, long nmax) const {
        Applied<S> res;
        const long limit = nmax - shift_radius();
        for (const auto& [m, fm] : f) {
            for (long v : m)
                if (v > limit) res.margin_ok = false;
            for (const auto& [n, c] : column(m)) detail::accumulate(res.values, n, S(c * fm));
        }
        return res;
    }

    // Off-diagonal coefficients must be ≥ 0 and rows must sum to 0 (for real exact stencils).
    struct RowCheck {
        bool nonnegative = true;
        bool conservative = true;
    };
    RowCheck rate_check(const Index& n) const {
        RowCheck rc;
        S row{};
        for (const auto& [d, c] : terms_) {
            Index m = n;
            bool outside = false;
            bool diag = true;
            for (std::size_t v = 0; v < sites_; ++v) {
                m[v] += d[v];
                outside = outside || m[v] < 0;
                diag = diag && d[v] == 0;
            }
            S val = c.eval(to_scalars(n));
            if (outside) {
                if (!duality::is_zero(val)) rc.conservative = false;
                continue;
            }
            row += val;
            if (!diag && real_negative(val)) rc.nonnegative = false;
        }
        if (!duality::is_zero(row)) rc.conservative = false;
        return rc;
    }

private:
    static bool real_negative(const S& s) {
        if constexpr (std::is_same_v<S, GaussRational>)
            return sgn(s.re()) < 0;
        else
            return s.real() < 0;
    }
    std::vector<S> to_scalars(const Index& n) const {
        std::vector<S> x(sites_);
        for (std::size_t v = 0; v < sites_; ++v) x[v] = from_int<S>(n[v]);
        return x;
    }
    void check(const Stencil& o) const {
        if (o.sites_ != sites_) throw std::invalid_argument("stencil site count mismatch");
    }

    std::size_t sites_;
    Terms terms_;
};

// Every multi-index in {0..limit}^sites, in lexicographic order.
inline std::vector<Index> box_indices(std::size_t sites, long limit) {
    std::vector<Index> out;
    if (limit < 0) return out;
    Index cur(sites, 0);
    while (true) {
        out.push_back(cur);
        std::size_t v = sites;
        while (v > 0) {
            --v;
            if (cur[v] < limit) {
                ++cur[v];
                break;
            }
            cur[v] = 0;
            if (v == 0) return out;
        }
        if (sites == 0) return out;
    }
}

template <class S>
double max_abs(const SparseVec<S>& v) {
    double m = 0.0;
    for (const auto& [n, c] : v) m = std::max(m, magnitude(c));
    return m;
}

template <class S>
SparseVec<S> subtract(SparseVec<S> a, const SparseVec<S>& b) {
    for (const auto& [n, c] : b) detail::accumulate(a, n, S(-c));
    return a;
}

}  // namespace duality
