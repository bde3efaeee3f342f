#pragma once

#include "duality/representations.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace duality::proc {

enum class Family { IRW, DIF, SIP, SEP, BEP, HYP };

inline const char* name_of(Family f) {
    switch (f) {
        case Family::IRW: return "irw";
        case Family::DIF: return "dif";
        case Family::SIP: return "sip";
        case Family::SEP: return "sep";
        case Family::BEP: return "bep";
        case Family::HYP: return "hyp";
    }
    return "?";
}

inline bool is_discrete(Family f) { return f == Family::IRW || f == Family::SIP || f == Family::SEP; }

// Pair drift for BEP: Derived is −2(k_j x_i − k_i x_j), Literal is −2(k_i x_i − k_j x_j).
enum class BepDrift { Derived, Literal };

// Direct HYP operator: Derived is −½ times the displayed difference operator.
enum class HypDirect { Derived, Displayed };

struct ProcessSpec {
    Family family = Family::IRW;
    std::size_t sites = 2;
    Rational c{1};
    std::vector<Rational> k;
    std::vector<long> j;
    double phi = std::numbers::pi / 3;
    long trunc = 16;
    int maxdeg = 8;
    BepDrift bep_drift = BepDrift::Derived;
    HypDirect hyp_direct = HypDirect::Derived;
    // scalar added per pair in the algebraic HYP generator, as a multiple of k_i k_j
    int hyp_shift = 2;
};

inline void validate(const ProcessSpec& p) {
    if (p.sites < 2) throw std::invalid_argument("a process needs at least two sites");
    switch (p.family) {
        case Family::IRW:
        case Family::DIF:
            if (p.c <= 0) throw std::invalid_argument("c must be positive");
            break;
        case Family::SIP:
        case Family::BEP:
        case Family::HYP:
            if (p.k.size() != p.sites) throw std::invalid_argument("k needs one entry per site");
            for (const auto& v : p.k)
                if (v <= 0) throw std::invalid_argument("k must be positive");
            if (p.family == Family::HYP && !(p.phi > 0 && p.phi < std::numbers::pi))
                throw std::invalid_argument("phi must lie in (0, pi)");
            break;
        case Family::SEP:
            if (p.j.size() != p.sites) throw std::invalid_argument("j needs one entry per site");
            for (long v : p.j)
                if (v <= 0) throw std::invalid_argument("j must be positive integers");
            break;
    }
    if (is_discrete(p.family) && p.trunc < 2) throw std::invalid_argument("truncation too small for margin 2");
    if (!is_discrete(p.family) && p.maxdeg < 2) throw std::invalid_argument("maxdeg too small for margin 2");
}

// Site parameter used by the su(1,1) families; SEP is the formal k = −j/2.
inline Rational site_k(const ProcessSpec& p, std::size_t i) {
    if (p.family == Family::SEP) return Rational(-p.j.at(i), 2);
    return p.k.at(i);
}

template <class S>
using Generator = std::variant<Stencil<S>, DiffOp<S>, ShiftOp<S>>;

// ---------- direct formulas ----------

// Rate for a particle jumping i → j as a polynomial in the occupations.
template <class S>
Poly<S> jump_rate(const ProcessSpec& p, std::size_t i, std::size_t j) {
    const std::size_t n = p.sites;
    const auto ni = Poly<S>::variable(n, i), nj = Poly<S>::variable(n, j);
    switch (p.family) {
        case Family::IRW: return ni;
        case Family::SIP: return ni * (nj + Poly<S>::constant(n, from_rational<S>(2 * p.k.at(j))));
        case Family::SEP: return ni * (Poly<S>::constant(n, from_int<S>(p.j.at(j))) - nj);
        default: throw std::invalid_argument("not a jump process");
    }
}

template <class S>
Stencil<S> discrete_direct(const ProcessSpec& p) {
    validate(p);
    const std::size_t n = p.sites;
    Stencil<S> out(n);
    auto hop = [&](std::size_t from, std::size_t to) {
        const auto r = jump_rate<S>(p, from, to);
        std::vector<int> d(n, 0);
        d[from] = -1;
        d[to] = 1;
        out.add(d, r);
        out.add(std::vector<int>(n, 0), -r);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            hop(i, j);
            hop(j, i);
        }
    return out;
}

template <class S>
DiffOp<S> diffusion_direct(const ProcessSpec& p) {
    validate(p);
    const std::size_t n = p.sites;
    DiffOp<S> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto d = DiffOp<S>::derivative(n, i) - DiffOp<S>::derivative(n, j);
            const auto dd = compose(d, d);
            const auto xi = Poly<S>::variable(n, i), xj = Poly<S>::variable(n, j);
            if (p.family == Family::DIF) {
                out += dd * from_rational<S>(p.c);
                out -= compose(DiffOp<S>::multiply(xi - xj), d);
            } else if (p.family == Family::BEP) {
                const S ki = from_rational<S>(p.k[i]), kj = from_rational<S>(p.k[j]);
                out += compose(DiffOp<S>::multiply(xi * xj), dd);
                const auto drift = p.bep_drift == BepDrift::Derived ? xi * kj - xj * ki : xi * ki - xj * kj;
                out += compose(DiffOp<S>::multiply(drift * from_int<S>(-2)), d);
            } else {
                throw std::invalid_argument("not a diffusion");
            }
        }
    return out;
}

template <class S>
ShiftOp<S> hyp_direct(const ProcessSpec& p) {
    validate(p);
    if (p.family != Family::HYP) throw std::invalid_argument("not the hyp process");
    const std::size_t n = p.sites;
    const S i_ = imag_unit<S>();
    const S scale = p.hyp_direct == HypDirect::Derived ? from_int<S>(-1) : from_int<S>(2);
    using T = ShiftOp<S>;
    ShiftOp<S> out(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const S ka = from_rational<S>(p.k[a]), kb = from_rational<S>(p.k[b]);
            // (k_a ∓ i x_a)(k_b ± i x_b) (f(x ± i e_a ∓ i e_b) − f(x))
            for (int sgn : {1, -1}) {
                const S s = from_int<S>(sgn);
                const T coef = compose(T::affine_shift(n, a, ka, S(-(s * i_)), 0), T::affine_shift(n, b, kb, S(s * i_), 0));
                const T shift = compose(T::affine_shift(n, a, from_int<S>(1), S{}, sgn),
                                        T::affine_shift(n, b, from_int<S>(1), S{}, -sgn));
                out += (compose(coef, shift) - coef) * scale;
            }
        }
    return out;
}

template <class S>
Generator<S> build_generator_direct(const ProcessSpec& p) {
    if (is_discrete(p.family)) return discrete_direct<S>(p);
    if (p.family == Family::HYP) return hyp_direct<S>(p);
    return diffusion_direct<S>(p);
}

// ---------- algebraic assembly ----------

template <class Op, class S>
Op pair_sum(const std::vector<rep::Representation<Op>>& reps, algebra::AlgebraKind kind,
            const std::function<S(std::size_t, std::size_t)>& shift, const S& scale) {
    const std::size_t n = reps.size();
    const auto y = algebra::pair_element<S>(kind);
    Op out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto yij = algebra::embed_pair(y, i + 1, j + 1, n);
            out += rep::tensor_operator<Op, S>(reps, yij) * scale;
            out += Op::scalar(n, shift(i, j));
        }
    return out;
}

template <class S>
Stencil<S> discrete_algebraic(const ProcessSpec& p) {
    validate(p);
    const std::size_t n = p.sites;
    if (p.family == Family::IRW) {
        std::vector<rep::DiscreteRep<S>> reps(n, rep::rho_c(from_rational<S>(p.c)));
        return pair_sum<Stencil<S>, S>(reps, algebra::AlgebraKind::Heisenberg, [](std::size_t, std::size_t) { return S{}; },
                                       from_rational<S>(1 / p.c));
    }
    std::vector<rep::DiscreteRep<S>> reps;
    for (std::size_t i = 0; i < n; ++i) reps.push_back(rep::pi_k(from_rational<S>(site_k(p, i)), from_int<S>(1)));
    auto shift = [&](std::size_t i, std::size_t j) { return from_rational<S>(2 * site_k(p, i) * site_k(p, j)); };
    auto op = pair_sum<Stencil<S>, S>(reps, algebra::AlgebraKind::Sl2, shift, from_int<S>(1));
    // with k = −j/2 the su(1,1) expression is minus the exclusion generator
    if (p.family == Family::SEP) op *= from_int<S>(-1);
    return op;
}

template <class S>
DiffOp<S> diffusion_algebraic(const ProcessSpec& p) {
    validate(p);
    const std::size_t n = p.sites;
    if (p.family == Family::DIF) {
        std::vector<rep::PolyRep<S>> reps(n, rep::sigma_c(from_rational<S>(p.c)));
        return pair_sum<DiffOp<S>, S>(reps, algebra::AlgebraKind::Heisenberg, [](std::size_t, std::size_t) { return S{}; },
                                      from_rational<S>(1 / p.c));
    }
    std::vector<rep::PolyRep<S>> reps;
    for (std::size_t i = 0; i < n; ++i) reps.push_back(rep::sigma_k(from_rational<S>(p.k[i])));
    auto shift = [&](std::size_t i, std::size_t j) { return from_rational<S>(2 * p.k[i] * p.k[j]); };
    return pair_sum<DiffOp<S>, S>(reps, algebra::AlgebraKind::Sl2, shift, from_int<S>(1));
}

template <class S>
ShiftOp<S> hyp_algebraic(const ProcessSpec& p, bool printed_rep = false) {
    validate(p);
    std::vector<rep::ShiftRep<S>> reps;
    for (std::size_t i = 0; i < p.sites; ++i) reps.push_back(rep::rho_k(from_rational<S>(p.k[i]), printed_rep));
    auto shift = [&](std::size_t i, std::size_t j) { return from_rational<S>(p.hyp_shift * p.k[i] * p.k[j]); };
    return pair_sum<ShiftOp<S>, S>(reps, algebra::AlgebraKind::Sl2, shift, from_int<S>(1));
}

template <class S>
Generator<S> build_generator_algebraic(const ProcessSpec& p) {
    if (is_discrete(p.family)) return discrete_algebraic<S>(p);
    if (p.family == Family::HYP) return hyp_algebraic<S>(p);
    return diffusion_algebraic<S>(p);
}

// ---------- checks ----------

namespace detail {

inline std::string label(const ProcessSpec& p) {
    std::string s = std::string(name_of(p.family)) + "/N=" + std::to_string(p.sites);
    if (p.family == Family::BEP && p.bep_drift == BepDrift::Literal) s += "/literal-drift";
    if (p.family == Family::HYP && p.hyp_direct == HypDirect::Displayed) s += "/displayed";
    if (p.family == Family::HYP && p.hyp_shift != 2) s += "/shift=" + std::to_string(p.hyp_shift) + "k1k2";
    return s;
}

// Every exponent vector with entries in {0..limit}.
inline std::vector<Exponents> exponent_box(std::size_t nvars, int limit) {
    std::vector<Exponents> out;
    for (const auto& idx : box_indices(nvars, limit)) out.emplace_back(idx.begin(), idx.end());
    return out;
}

template <class S>
double difference_on_basis(const Generator<S>& a, const Generator<S>& b, const ProcessSpec& p, std::size_t& points) {
    double worst = 0.0;
    const std::size_t n = p.sites;
    if (is_discrete(p.family)) {
        const auto d = std::get<Stencil<S>>(a) - std::get<Stencil<S>>(b);
        for (const auto& m : box_indices(n, p.trunc - 2)) {
            worst = std::max(worst, max_abs(d.column(m)));
            ++points;
        }
    } else if (p.family == Family::HYP) {
        const auto d = std::get<ShiftOp<S>>(a) - std::get<ShiftOp<S>>(b);
        for (const auto& e : exponent_box(n, p.maxdeg - 2)) {
            worst = std::max(worst, d.apply_exp(Poly<Complex>::monomial(n, e), p.phi).max_abs_coefficient());
            ++points;
        }
    } else {
        const auto d = std::get<DiffOp<S>>(a) - std::get<DiffOp<S>>(b);
        for (const auto& e : exponent_box(n, p.maxdeg - 2)) {
            worst = std::max(worst, d.apply(Poly<S>::monomial(n, e)).max_abs_coefficient());
            ++points;
        }
    }
    return worst;
}

}  // namespace detail

// Direct − Algebraic on every interior product basis function.
template <class S>
Report generator_equivalence(const ProcessSpec& p) {
    Stopwatch sw;
    const bool exact = is_exact_v<S>;
    auto r = make_report("equivalence/" + detail::label(p), exact ? "exact" : "float", exact ? 0.0 : 1e-12);
    if (p.family == Family::BEP && p.bep_drift == BepDrift::Literal)
        r.notes.push_back("drift -2(k_i x_i - k_j x_j) as displayed in the generator formula");
    const auto direct = build_generator_direct<S>(p);
    const auto algebraic = build_generator_algebraic<S>(p);
    std::size_t points = 0;
    r.observe(detail::difference_on_basis(direct, algebraic, p, points));
    r.points = points;
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// L·1 = 0 and L·Σ_i n_i = 0 on the interior.
template <class S>
Report conservation_check(const ProcessSpec& p, const Generator<S>& gen) {
    Stopwatch sw;
    const bool exact = is_exact_v<S>;
    auto r = make_report("conservation/" + detail::label(p), exact ? "exact" : "float", exact ? 0.0 : 1e-12);
    const std::size_t n = p.sites;
    if (is_discrete(p.family)) {
        const auto& st = std::get<Stencil<S>>(gen);
        for (const auto& m : box_indices(n, p.trunc - 2)) {
            if (p.family == Family::SEP) {
                bool inside = true;
                for (std::size_t i = 0; i < n; ++i) inside = inside && m[i] <= p.j[i];
                if (!inside) continue;
            }
            auto one = [](const Index&) { return from_int<S>(1); };
            auto total = [](const Index& x) {
                long s = 0;
                for (long v : x) s += v;
                return from_int<S>(s);
            };
            r.observe(magnitude(st.template apply_at<S>(one, m)));
            r.observe(magnitude(st.template apply_at<S>(total, m)));
        }
    } else if (p.family == Family::HYP) {
        const auto& op = std::get<ShiftOp<S>>(gen);
        for (double x : {-1.5, 0.25, 2.0})
            for (double y : {-0.5, 1.0}) {
                std::vector<Complex> pt(n, Complex(y));
                pt[0] = x;
                r.observe(std::abs(op.apply_point([](const std::vector<Complex>&) { return Complex(1.0); }, pt)));
                r.observe(std::abs(op.apply_point(
                    [](const std::vector<Complex>& z) {
                        Complex s = 0.0;
                        for (auto v : z) s += v;
                        return s;
                    },
                    pt)));
            }
    } else {
        const auto& op = std::get<DiffOp<S>>(gen);
        Poly<S> total(n);
        for (std::size_t i = 0; i < n; ++i) total += Poly<S>::variable(n, i);
        r.observe(op.apply(Poly<S>::constant(n, from_int<S>(1))).max_abs_coefficient());
        r.observe(op.apply(total).max_abs_coefficient());
    }
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// Off-diagonal rates ≥ 0 and zero row sums on the interior (discrete families).
template <class S>
Report rate_check(const ProcessSpec& p) {
    Stopwatch sw;
    auto r = make_report("rates/" + detail::label(p), is_exact_v<S> ? "exact" : "float", 0.0);
    if (!is_discrete(p.family)) throw std::invalid_argument("rate check needs a jump process");
    const auto st = discrete_direct<S>(p);
    for (const auto& m : box_indices(p.sites, p.trunc - 2)) {
        if (p.family == Family::SEP) {
            bool inside = true;
            for (std::size_t i = 0; i < p.sites; ++i) inside = inside && m[i] <= p.j[i];
            if (!inside) continue;
        }
        const auto rc = st.rate_check(m);
        r.observe((rc.nonnegative ? 0.0 : 1.0) + (rc.conservative ? 0.0 : 1.0));
    }
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// Unnormalized single-site reversible weight for a jump process.
inline Rational site_weight(const ProcessSpec& p, std::size_t i, long n, const Rational& c) {
    Rational w = 1;
    switch (p.family) {
        case Family::IRW:
            for (long m = 1; m <= n; ++m) w = w * p.c / m;
            return w;
        case Family::SIP:
            for (long m = 0; m < n; ++m) w = w * (2 * p.k[i] + m) * c / (m + 1);
            return w;
        case Family::SEP:
            if (n > p.j[i]) return 0;
            for (long m = 0; m < n; ++m) w = w * (p.j[i] - m) * c / (m + 1);
            return w;
        default: throw std::invalid_argument("not a jump process");
    }
}

// ⟨Lf, g⟩_w − ⟨f, Lg⟩_w for product weights; `weight_c` is the NegBinomial/Binomial parameter.
template <class S>
Report reversibility_residual(const ProcessSpec& p, const Rational& weight_c = Rational(1, 3)) {
    Stopwatch sw;
    auto r = make_report("reversibility/" + detail::label(p), is_exact_v<S> ? "exact" : "float",
                         is_exact_v<S> ? 0.0 : 1e-12, Measure::Relative);
    const auto st = discrete_direct<S>(p);
    auto w = [&](const Index& m) {
        Rational v = 1;
        for (std::size_t i = 0; i < p.sites; ++i) v *= site_weight(p, i, m[i], weight_c);
        return from_rational<S>(v);
    };
    const auto idx = box_indices(p.sites, p.trunc - 2);
    std::map<Index, SparseVec<S>> cols;
    for (const auto& m : idx) cols[m] = st.column(m);
    // only pairs joined by a nonzero entry in either direction can disagree
    std::set<std::pair<Index, Index>> pairs;
    for (const auto& [m, col] : cols)
        for (const auto& [l, v] : col)
            if (cols.count(l)) {
                pairs.emplace(m, l);
                pairs.emplace(l, m);
            }
    for (const auto& [m, l] : pairs) {
        const auto it = cols[m].find(l);
        const auto jt = cols[l].find(m);
        const S lhs = it == cols[m].end() ? S{} : S(w(l) * it->second);
        const S rhs = jt == cols[l].end() ? S{} : S(w(m) * jt->second);
        r.observe_pair(magnitude(lhs), magnitude(rhs), magnitude(S(lhs - rhs)));
    }
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// Continuous version with product Gauss rules (Gaussian for DIF, Gamma for BEP).
inline Report reversibility_residual_continuous(const ProcessSpec& p, int maxdeg = 4, int nodes = 12) {
    Stopwatch sw;
    auto r = make_report("reversibility/" + detail::label(p), "float", 1e-10, Measure::Relative);
    const auto op = diffusion_direct<GaussRational>(p);
    const std::size_t n = p.sites;
    std::vector<quad::Rule> rules;
    for (std::size_t i = 0; i < n; ++i)
        rules.push_back(p.family == Family::DIF ? quad::gauss_hermite(nodes, p.c.get_d())
                                                : quad::gauss_laguerre(nodes, 2 * p.k[i].get_d() - 1));
    auto integrate = [&](const std::function<double(const std::vector<double>&)>& f) {
        double sum = 0.0;
        for (const auto& idx : box_indices(n, nodes - 1)) {
            std::vector<double> x(n);
            double wt = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = rules[i].nodes[idx[i]];
                wt *= rules[i].weights[idx[i]];
            }
            sum += wt * f(x);
        }
        return sum;
    };
    auto ev = [](const Poly<GaussRational>& q, const std::vector<double>& x) {
        return q.eval(std::vector<Complex>(x.begin(), x.end())).real();
    };
    auto norm = [&](const Poly<GaussRational>& q) { return std::sqrt(integrate([&](auto& x) { return ev(q, x) * ev(q, x); })); };
    const auto basis = detail::exponent_box(n, maxdeg);
    for (const auto& a : basis)
        for (const auto& b : basis) {
            const auto f = Poly<GaussRational>::monomial(n, a), g = Poly<GaussRational>::monomial(n, b);
            const auto Lf = op.apply(f), Lg = op.apply(g);
            const double lhs = integrate([&](auto& x) { return ev(Lf, x) * ev(g, x); });
            const double rhs = integrate([&](auto& x) { return ev(f, x) * ev(Lg, x); });
            const double scale = std::max(norm(Lf) * norm(g) + norm(f) * norm(Lg), 1e-300);
            r.observe(std::abs(lhs - rhs), std::abs(lhs - rhs) / scale);
        }
    r.wall_time_ms = sw.ms();
    return r.finish();
}

}  // namespace duality::proc
