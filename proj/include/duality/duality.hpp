#pragma once

#include "duality/kernels.hpp"
#include "duality/processes.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace duality::dual {

using algebra::Gen;
using algebra::StarName;
using proc::Family;
using proc::ProcessSpec;

enum class CaseId { IrwCharlier, IrwDifHermite, DifExp, SipMeixner, SepKrawtchouk, SipBepLaguerre, BepBessel, SipHypMp };
enum class Plan { ExactDiscrete, ExactPolynomial, FloatAnalytic };

struct CaseInfo {
    CaseId id;
    const char* name;
    Family left;
    Family right;
    kernels::Family kernel;
    Plan plan;
    const char* anchor;
};

inline const std::vector<CaseInfo>& catalog() {
    static const std::vector<CaseInfo> cases{
        {CaseId::IrwCharlier, "irw-charlier", Family::IRW, Family::IRW, kernels::Family::Charlier, Plan::ExactDiscrete,
         "3.1 IRW self-duality"},
        {CaseId::IrwDifHermite, "irw-dif-hermite", Family::IRW, Family::DIF, kernels::Family::Hermite,
         Plan::ExactPolynomial, "3.2 IRW-DIF duality"},
        {CaseId::DifExp, "dif-exp", Family::DIF, Family::DIF, kernels::Family::ExpKernel, Plan::FloatAnalytic,
         "3.3 DIF self-duality"},
        {CaseId::SipMeixner, "sip-meixner", Family::SIP, Family::SIP, kernels::Family::Meixner, Plan::ExactDiscrete,
         "4.1 SIP self-duality"},
        {CaseId::SepKrawtchouk, "sep-krawtchouk", Family::SEP, Family::SEP, kernels::Family::Krawtchouk,
         Plan::ExactDiscrete, "4.1 SEP remark"},
        {CaseId::SipBepLaguerre, "sip-bep-laguerre", Family::SIP, Family::BEP, kernels::Family::Laguerre,
         Plan::ExactPolynomial, "4.2 SIP-BEP duality"},
        {CaseId::BepBessel, "bep-bessel", Family::BEP, Family::BEP, kernels::Family::Bessel, Plan::FloatAnalytic,
         "4.3 BEP self-duality"},
        {CaseId::SipHypMp, "sip-hyp-mp", Family::SIP, Family::HYP, kernels::Family::MeixnerPollaczek,
         Plan::FloatAnalytic, "4.4 SIP-hyp duality"},
    };
    return cases;
}

inline const CaseInfo& info(CaseId id) {
    for (const auto& c : catalog())
        if (c.id == id) return c;
    throw std::invalid_argument("unknown duality case");
}

inline CaseId case_by_name(const std::string& name) {
    for (const auto& c : catalog())
        if (name == c.name) return c.id;
    throw std::invalid_argument("unknown duality case: " + name);
}

// Parameters for one run of a duality case; the kernel_* fields perturb the kernel only.
struct CaseParams {
    Rational c{3, 4};
    std::vector<Rational> k{Rational(1), Rational(1)};
    std::vector<long> j{3, 2};
    double phi = std::numbers::pi / 3;
    std::size_t sites = 2;
    long trunc = 12;
    int grid = 25;
    Rational kernel_scale{1};
    std::optional<std::vector<Rational>> kernel_c;  // per site
    std::optional<std::vector<Rational>> kernel_k;  // per site
    std::optional<std::vector<long>> kernel_j;      // per site
    kernels::ExpVariant exp_variant = kernels::ExpVariant::Corrected;
    proc::BepDrift bep_drift = proc::BepDrift::Derived;
    proc::HypDirect hyp_direct = proc::HypDirect::Derived;
    double float_tolerance = 1e-9;
};

inline std::optional<Rational> rational_sqrt(const Rational& q) {
    if (sgn(q) < 0) return std::nullopt;
    mpz_class num = q.get_num(), den = q.get_den(), rn, rd;
    rn = sqrt(num);
    rd = sqrt(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return Rational(rn, rd);
}

namespace detail {

using G = GaussRational;

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return out;
}

inline ProcessSpec spec_for(Family f, const CaseParams& p) {
    ProcessSpec s;
    s.family = f;
    s.sites = p.sites;
    s.c = p.c;
    s.k = p.k;
    s.j = p.j;
    s.phi = p.phi;
    s.trunc = p.trunc;
    s.bep_drift = p.bep_drift;
    s.hyp_direct = p.hyp_direct;
    proc::validate(s);
    return s;
}

template <class T>
std::vector<T> per_site(const std::optional<std::vector<T>>& v, const T& fallback, std::size_t n) {
    if (!v) return std::vector<T>(n, fallback);
    if (v->size() != n) throw std::invalid_argument("kernel parameter needs one entry per site");
    return *v;
}

inline std::vector<Rational> kernel_ks(const CaseParams& p) {
    if (p.kernel_k) {
        if (p.kernel_k->size() != p.sites) throw std::invalid_argument("kernel k needs one entry per site");
        return *p.kernel_k;
    }
    return p.k;
}

// Multi-indices in {0..limit}^N, optionally capped per site.
inline std::vector<Index> grid_indices(std::size_t n, long limit, const std::vector<long>& caps = {}) {
    std::vector<Index> out;
    for (auto& m : box_indices(n, limit)) {
        bool ok = true;
        for (std::size_t i = 0; i < caps.size(); ++i) ok = ok && m[i] <= caps[i];
        if (ok) out.push_back(std::move(m));
    }
    return out;
}

// Σ_d coef_d(n) K(n + d) for a polynomial-valued kernel slice K.
template <class Fn>
Poly<G> stencil_combination(const Stencil<G>& st, const Index& n, std::size_t nvars, Fn&& slice) {
    Poly<G> out(nvars);
    for (const auto& [d, coef] : st.terms()) {
        Index m = n;
        bool outside = false;
        for (std::size_t v = 0; v < n.size(); ++v) {
            m[v] += d[v];
            outside = outside || m[v] < 0;
        }
        if (outside) continue;
        std::vector<G> pt;
        for (long v : n) pt.push_back(G(v));
        out += slice(m) * coef.eval(pt);
    }
    return out;
}

inline void observe_poly(Report& r, const Poly<G>& lhs, const Poly<G>& rhs) {
    const double diff = (lhs - rhs).max_abs_coefficient();
    r.observe_pair(lhs.max_abs_coefficient(), rhs.max_abs_coefficient(), diff);
}

// Product of per-site univariate polynomials, site s placed on variable s.
inline Poly<G> product_poly(const std::vector<const Poly<G>*>& parts) {
    const std::size_t n = parts.size();
    Poly<G> out = Poly<G>::constant(n, G(1));
    for (std::size_t s = 0; s < n; ++s) out = out * parts[s]->embed(n, {s});
    return out;
}

inline std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << v;
    return os.str();
}

inline std::string mode_of(Plan p) { return p == Plan::FloatAnalytic ? "float" : "exact"; }

}  // namespace detail

// ---------- duality residuals ----------

namespace detail {

// Both slots discrete: [L₁D(·,x)](n) − [L₂D(n,·)](x) over interior pairs.
template <class KernelFn>
void discrete_discrete(Report& r, const Stencil<G>& l1, const Stencil<G>& l2, std::size_t n, long trunc,
                       const std::vector<long>& caps, KernelFn&& kernel) {
    // tables[s][a][b] = K_s(a, b)
    std::vector<std::vector<std::vector<G>>> tables(n);
    for (std::size_t s = 0; s < n; ++s) {
        const long top = caps.empty() ? trunc : std::min(trunc, caps[s]);
        tables[s].assign(static_cast<std::size_t>(trunc + 1), std::vector<G>(static_cast<std::size_t>(trunc + 1)));
        for (long a = 0; a <= top; ++a)
            for (long b = 0; b <= top; ++b) tables[s][a][b] = kernel(s, a, b);
    }
    auto D = [&](const Index& a, const Index& b) {
        G v(1);
        for (std::size_t s = 0; s < n; ++s) {
            if (a[s] > trunc || b[s] > trunc) throw std::logic_error("kernel read outside the truncation");
            v = v * tables[s][a[s]][b[s]];
        }
        return v;
    };
    const auto idx = grid_indices(n, trunc - 2, caps);
    for (const auto& a : idx)
        for (const auto& b : idx) {
            const G lhs = l1.apply_at<G>([&](const Index& m) { return D(m, b); }, a);
            const G rhs = l2.apply_at<G>([&](const Index& y) { return D(a, y); }, b);
            r.observe_pair(magnitude(lhs), magnitude(rhs), magnitude(G(lhs - rhs)));
        }
}

// Discrete first slot, polynomial second slot, compared coefficient-wise.
inline void discrete_polynomial(Report& r, const Stencil<G>& l1, const DiffOp<G>& l2, std::size_t n, long trunc,
                                const std::vector<std::vector<Poly<G>>>& slices) {
    auto D = [&](const Index& m) {
        std::vector<const Poly<G>*> parts;
        for (std::size_t s = 0; s < n; ++s) parts.push_back(&slices[s].at(static_cast<std::size_t>(m[s])));
        return product_poly(parts);
    };
    for (const auto& a : grid_indices(n, trunc - 2)) {
        const auto lhs = stencil_combination(l1, a, n, D);
        const auto rhs = l2.apply(D(a));
        observe_poly(r, lhs, rhs);
    }
}

// Both slots continuous; jets[s][ix][iy] holds ∂_x^a ∂_y^b K_s at grid point (x_ix, y_iy).
template <class Jet>
void continuous_continuous(Report& r, const DiffOp<Complex>& l1, const DiffOp<Complex>& l2, std::size_t n,
                           const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<std::vector<std::vector<Jet>>>& jets) {
    const long gx = static_cast<long>(xs.size()) - 1, gy = static_cast<long>(ys.size()) - 1;
    const auto xi = box_indices(n, gx);
    const auto yi = gx == gy ? xi : box_indices(n, gy);
    std::vector<std::vector<Complex>> jx(n, std::vector<Complex>(3)), jy(n, std::vector<Complex>(3));
    std::vector<Complex> px(n), py(n);
    for (const auto& a : xi)
        for (const auto& b : yi) {
            for (std::size_t s = 0; s < n; ++s) {
                const auto& jet = jets[s][a[s]][b[s]];
                for (int o = 0; o < 3; ++o) {
                    jx[s][o] = jet[o][0];
                    jy[s][o] = jet[0][o];
                }
                px[s] = xs[a[s]];
                py[s] = ys[b[s]];
            }
            const Complex lhs = l1.apply_to_product(px, jx);
            const Complex rhs = l2.apply_to_product(py, jy);
            r.observe_scaled(std::abs(lhs - rhs), std::max(l1.product_scale(px, jx), l2.product_scale(py, jy)));
        }
}

// SIP stencil on the occupation slot against a shift operator on the real slot.
inline void mp_sweep(Report& r, const Stencil<Complex>& l1, const ShiftOp<Complex>& l2, const CaseParams& p,
                     const std::vector<Rational>& ks, double fscale) {
    const std::size_t n = p.sites;
    const auto xs = linspace(-5, 5, p.grid);
    auto row = [&](std::size_t s, Complex z) {
        auto v = kernels::mp_row(p.trunc, z, ks[s].get_d(), p.phi);
        const Complex e = std::exp(z * p.phi) * fscale;
        for (auto& q : v) q *= e;
        return v;
    };
    // rows at the real grid points, per site
    std::vector<std::vector<std::vector<Complex>>> rows(n);
    for (std::size_t s = 0; s < n; ++s)
        for (double x : xs) rows[s].push_back(row(s, Complex(x)));
    const auto xi = box_indices(n, p.grid - 1);
    for (const auto& a : grid_indices(n, p.trunc - 2))
        for (const auto& b : xi) {
            std::vector<Complex> pt(n);
            for (std::size_t s = 0; s < n; ++s) pt[s] = xs[b[s]];
            auto on_n = [&](const Index& m) {
                Complex v = 1.0;
                for (std::size_t s = 0; s < n; ++s) v *= rows[s][b[s]].at(m[s]);
                return v;
            };
            auto on_x = [&](const std::vector<Complex>& z) {
                Complex v = 1.0;
                for (std::size_t s = 0; s < n; ++s) v *= row(s, z[s]).at(a[s]);
                return v;
            };
            const Complex lhs = l1.apply_at<Complex>(on_n, a);
            const Complex rhs = l2.apply_point(on_x, pt);
            r.observe_scaled(std::abs(lhs - rhs), std::max(l1.scale_at(on_n, a), l2.point_scale(on_x, pt)));
        }
}

}  // namespace detail

inline Report duality_residual(CaseId id, const CaseParams& p) {
    using detail::G;
    Stopwatch sw;
    const auto& ci = info(id);
    const bool exact = ci.plan != Plan::FloatAnalytic;
    auto r = make_report(std::string("duality/") + ci.name, detail::mode_of(ci.plan), exact ? 0.0 : p.float_tolerance,
                         exact ? Measure::Absolute : Measure::Relative);
    const std::size_t n = p.sites;
    const auto left = detail::spec_for(ci.left, p);
    const auto right = detail::spec_for(ci.right, p);
    const G scale(p.kernel_scale);
    const double fscale = p.kernel_scale.get_d();
    const auto ks = detail::kernel_ks(p);

    switch (id) {
        case CaseId::IrwCharlier: {
            const auto cs = detail::per_site(p.kernel_c, p.c, n);
            detail::discrete_discrete(r, proc::discrete_direct<G>(left), proc::discrete_direct<G>(right), n, p.trunc,
                                      {}, [&](std::size_t s, long a, long b) {
                                          return G(kernels::charlier(a, b, cs[s])) * scale;
                                      });
            break;
        }
        case CaseId::SipMeixner: {
            const auto cs = detail::per_site(p.kernel_c, p.c, n);
            for (const auto& c : cs)
                if (!(c > 0 && c < 1)) throw std::invalid_argument("Meixner kernel needs 0 < c < 1");
            detail::discrete_discrete(r, proc::discrete_direct<G>(left), proc::discrete_direct<G>(right), n, p.trunc,
                                      {}, [&](std::size_t s, long a, long b) {
                                          return G(kernels::meixner(a, b, ks[s], cs[s])) * scale;
                                      });
            break;
        }
        case CaseId::SepKrawtchouk: {
            const auto cs = detail::per_site(p.kernel_c, p.c, n);
            const auto js = detail::per_site(p.kernel_j, 0L, n);
            std::vector<long> kj(n);
            for (std::size_t s = 0; s < n; ++s) kj[s] = p.kernel_j ? js[s] : p.j[s];
            detail::discrete_discrete(r, proc::discrete_direct<G>(left), proc::discrete_direct<G>(right), n, p.trunc,
                                      p.j, [&](std::size_t s, long a, long b) {
                                          if (a > kj[s] || b > kj[s]) return G(0);
                                          return G(kernels::krawtchouk(a, b, kj[s], cs[s])) * scale;
                                      });
            break;
        }
        case CaseId::IrwDifHermite: {
            const auto cs = detail::per_site(p.kernel_c, p.c, n);
            std::vector<std::vector<Poly<G>>> slices(n);
            for (std::size_t s = 0; s < n; ++s)
                for (long m = 0; m <= p.trunc; ++m) slices[s].push_back(kernels::hermite_poly(m, cs[s]) * scale);
            detail::discrete_polynomial(r, proc::discrete_direct<G>(left), proc::diffusion_direct<G>(right), n, p.trunc,
                                        slices);
            break;
        }
        case CaseId::SipBepLaguerre: {
            // c enters only through c^{−n/2}, a Σn-conserving factor; irrational √c falls back to the bare kernel
            const auto cs = detail::per_site(p.kernel_c, p.c, n);
            std::vector<std::vector<Poly<G>>> slices(n);
            for (std::size_t s = 0; s < n; ++s) {
                const auto root = rational_sqrt(cs[s]);
                if (!root && s == 0) r.notes.push_back("c has no rational square root; c^(-n/2) factor dropped");
                for (long m = 0; m <= p.trunc; ++m)
                    slices[s].push_back(kernels::laguerre_poly(m, ks[s], root.value_or(Rational(1))) * scale);
            }
            detail::discrete_polynomial(r, proc::discrete_direct<G>(left), proc::diffusion_direct<G>(right), n, p.trunc,
                                        slices);
            break;
        }
        case CaseId::DifExp: {
            const auto cs = detail::per_site(p.kernel_c, p.c, n);
            const auto xs = detail::linspace(-5, 5, p.grid);
            std::vector<std::vector<std::vector<std::array<std::array<Complex, 3>, 3>>>> jets(n);
            for (std::size_t s = 0; s < n; ++s) {
                jets[s].assign(xs.size(), std::vector<std::array<std::array<Complex, 3>, 3>>(xs.size()));
                for (std::size_t a = 0; a < xs.size(); ++a)
                    for (std::size_t b = 0; b < xs.size(); ++b) {
                        auto j = kernels::exp_jets(xs[a], xs[b], cs[s].get_d(), p.exp_variant).d;
                        for (auto& row : j)
                            for (auto& e : row) e *= fscale;
                        jets[s][a][b] = j;
                    }
            }
            detail::continuous_continuous(r, proc::diffusion_direct<Complex>(left), proc::diffusion_direct<Complex>(right),
                                          n, xs, xs, jets);
            if (p.exp_variant == kernels::ExpVariant::Printed) r.notes.push_back("kernel exponent -ixy/c as printed");
            break;
        }
        case CaseId::BepBessel: {
            const auto xs = detail::linspace(0.1, 10, p.grid);
            std::vector<std::vector<std::vector<std::array<std::array<Complex, 3>, 3>>>> jets(n);
            for (std::size_t s = 0; s < n; ++s) {
                jets[s].assign(xs.size(), std::vector<std::array<std::array<Complex, 3>, 3>>(xs.size()));
                for (std::size_t a = 0; a < xs.size(); ++a)
                    for (std::size_t b = 0; b < xs.size(); ++b) {
                        const auto bj = kernels::bessel_jets(xs[a], xs[b], ks[s].get_d());
                        if (!bj.converged) throw std::runtime_error("Bessel series did not converge");
                        for (int u = 0; u < 3; ++u)
                            for (int v = 0; v < 3; ++v) jets[s][a][b][u][v] = Complex(double(bj.d[u][v]) * fscale);
                    }
            }
            detail::continuous_continuous(r, proc::diffusion_direct<Complex>(left), proc::diffusion_direct<Complex>(right),
                                          n, xs, xs, jets);
            break;
        }
        case CaseId::SipHypMp: {
            detail::mp_sweep(r, proc::discrete_direct<Complex>(left), proc::hyp_direct<Complex>(right), p, ks, fscale);
            // the pair-sum assembly with the two candidate scalar shifts, on a coarser grid
            CaseParams coarse = p;
            coarse.grid = 7;
            coarse.trunc = std::min(p.trunc, 8L);
            for (int shift : {1, 2}) {
                auto spec = right;
                spec.hyp_shift = shift;
                Report probe = make_report("", "float", p.float_tolerance, Measure::Relative);
                detail::mp_sweep(probe, proc::discrete_direct<Complex>(left), proc::hyp_algebraic<Complex>(spec),
                                 coarse, ks, fscale);
                probe.finish();
                r.notes.push_back("pair-sum shift " + std::string(shift == 1 ? "k1k2" : "2k1k2") + ": relative residual " +
                                  detail::sci(probe.max_rel_residual) + (probe.pass ? " (dual)" : " (not dual)"));
            }
            if (p.hyp_direct == proc::HypDirect::Displayed) r.notes.push_back("hyp operator as displayed");
            break;
        }
    }
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// A perturbed variant whose residual must exceed 1e-3 (relative).
inline CaseParams control_params(CaseId id, CaseParams p) {
    auto bump = [](std::vector<Rational> v) {
        v.at(0) = v.at(0) * Rational(3, 2);
        return v;
    };
    switch (id) {
        case CaseId::IrwCharlier:
        case CaseId::IrwDifHermite: {
            // IRW rates do not see c, so the sites must disagree
            std::vector<Rational> cs(p.sites, p.c);
            cs[0] = Rational(1, 2) == p.c ? Rational(3, 4) : Rational(1, 2);
            p.kernel_c = cs;
            break;
        }
        case CaseId::DifExp: p.exp_variant = kernels::ExpVariant::Printed; break;
        case CaseId::SipMeixner:
        case CaseId::SipBepLaguerre:
        case CaseId::BepBessel: p.kernel_k = bump(p.k); break;
        case CaseId::SepKrawtchouk: {
            auto js = p.j;
            js.at(0) += 1;
            p.kernel_j = js;
            break;
        }
        case CaseId::SipHypMp: p.hyp_direct = proc::HypDirect::Displayed; break;
    }
    return p;
}

inline Report negative_control(CaseId id, const CaseParams& p) {
    Report r = duality_residual(id, control_params(id, p));
    r.name += "/control";
    r.measure = Measure::Relative;
    r.expectation = Expectation::Exceeds;
    r.tolerance = 1e-3;
    return r.finish();
}

// ---------- intertwining ----------

enum class KernelCase { Charlier, Hermite, ExpKernel, Meixner, Laguerre, Bessel, MeixnerPollaczek };

struct IntertwineInfo {
    KernelCase id;
    const char* name;
    const char* relation;
    const char* anchor;
};

inline const std::vector<IntertwineInfo>& intertwining_catalog() {
    static const std::vector<IntertwineInfo> cases{
        {KernelCase::Charlier, "charlier", "rho_c(X*) on n = rho_c(theta_charlier X) on x", "3.1 Charlier intertwiner"},
        {KernelCase::Hermite, "hermite", "rho_c(X*) on n = sigma_c(X) on x", "3.2 Hermite intertwiner"},
        {KernelCase::ExpKernel, "exp", "sigma_c(X*) on x = sigma_c(theta_fourier X) on y", "3.3 exponential intertwiner"},
        {KernelCase::Meixner, "meixner", "pi_{k,s}(X*) on n = pi_{k,-s}(theta_{-s} X) on x", "4.1 Meixner intertwiner"},
        {KernelCase::Laguerre, "laguerre", "pi_{k,s}(X) on n = sigma_k(theta_parabolic^-1 X) on x", "4.2 Laguerre intertwiner"},
        {KernelCase::Bessel, "bessel", "sigma_k(X*) on x = sigma_k(X) on y", "4.3 Bessel intertwiner"},
        {KernelCase::MeixnerPollaczek, "meixner-pollaczek", "pi_{k,1}(X*) on n = rho_k(theta_phi^-1 X) on x", "4.4 Meixner-Pollaczek intertwiner"},
    };
    return cases;
}

inline KernelCase kernel_case_by_name(const std::string& name) {
    for (const auto& c : intertwining_catalog())
        if (name == c.name) return c.id;
    throw std::invalid_argument("unknown intertwining case: " + name);
}

struct IntertwineParams {
    Rational c{1, 4};
    Rational k{3, 4};
    double phi = std::numbers::pi / 3;
    long trunc = 12;
    int grid = 25;
    // the relation as printed instead of the one that holds
    bool printed = false;
    double float_tolerance = 1e-9;
};

namespace detail {

template <class S>
algebra::Element<S> starred(Gen g, StarName s) {
    return algebra::star(algebra::gen<S>(g), s);
}

// Single-site discrete-discrete intertwining for one generator.
template <class KernelFn>
void intertwine_discrete(Report& r, const Stencil<G>& A, const Stencil<G>& B, long trunc, KernelFn&& K) {
    for (long a = 0; a <= trunc - 2; ++a)
        for (long b = 0; b <= trunc - 2; ++b) {
            const G lhs = A.apply_at<G>([&](const Index& m) { return K(m[0], b); }, {a});
            const G rhs = B.apply_at<G>([&](const Index& y) { return K(a, y[0]); }, {b});
            r.observe_pair(magnitude(lhs), magnitude(rhs), magnitude(G(lhs - rhs)));
        }
}

inline void intertwine_polynomial(Report& r, const Stencil<G>& A, const DiffOp<G>& B, long trunc,
                                  const std::vector<Poly<G>>& slices) {
    for (long a = 0; a <= trunc - 2; ++a) {
        const auto lhs = stencil_combination(A, {a}, 1, [&](const Index& m) { return slices.at(m[0]); });
        observe_poly(r, lhs, B.apply(slices.at(a)));
    }
}

template <class Jets>
void intertwine_continuous(Report& r, const DiffOp<Complex>& A, const DiffOp<Complex>& B, const std::vector<double>& xs,
                           Jets&& jets) {
    std::vector<std::vector<Complex>> jx(1, std::vector<Complex>(3)), jy(1, std::vector<Complex>(3));
    for (double x : xs)
        for (double y : xs) {
            const auto d = jets(x, y);
            for (int o = 0; o < 3; ++o) {
                jx[0][o] = d[o][0];
                jy[0][o] = d[0][o];
            }
            const std::vector<Complex> px{x}, py{y};
            const Complex lhs = A.apply_to_product(px, jx);
            const Complex rhs = B.apply_to_product(py, jy);
            r.observe_scaled(std::abs(lhs - rhs), std::max(A.product_scale(px, jx), B.product_scale(py, jy)));
        }
}

}  // namespace detail

// Per-generator intertwining residuals for one kernel.
inline std::vector<Report> intertwining_residual(KernelCase id, const IntertwineParams& p) {
    using detail::G;
    using rep::element_operator;
    std::vector<Report> out;
    std::string base;
    for (const auto& c : intertwining_catalog())
        if (c.id == id) base = c.name;
    const bool exact = id == KernelCase::Charlier || id == KernelCase::Hermite || id == KernelCase::Meixner ||
                       id == KernelCase::Laguerre;
    auto start = [&](Gen g) {
        return make_report("intertwining/" + base + "/" + algebra::name_of(g), exact ? "exact" : "float",
                           exact ? 0.0 : p.float_tolerance, exact ? Measure::Absolute : Measure::Relative);
    };
    const auto heis = algebra::generators(algebra::AlgebraKind::Heisenberg);
    const auto sl2 = algebra::generators(algebra::AlgebraKind::Sl2);

    switch (id) {
        case KernelCase::Charlier: {
            const auto rho = rep::rho_c(G(p.c));
            const auto th = algebra::theta_charlier<G>();
            for (Gen g : heis) {
                Stopwatch sw;
                auto r = start(g);
                const auto A = element_operator<Stencil<G>, G>(rho, detail::starred<G>(g, StarName::Dagger));
                const auto B = element_operator<Stencil<G>, G>(rho, p.printed ? algebra::gen<G>(g) : th.image(g));
                detail::intertwine_discrete(r, A, B, p.trunc, [&](long a, long b) { return G(kernels::charlier(a, b, p.c)); });
                r.wall_time_ms = sw.ms();
                out.push_back(r.finish());
            }
            break;
        }
        case KernelCase::Hermite: {
            const auto rho = rep::rho_c(G(p.c));
            const auto sig = rep::sigma_c(G(p.c));
            std::vector<Poly<G>> slices;
            for (long m = 0; m <= p.trunc; ++m) slices.push_back(kernels::hermite_poly(m, p.c));
            for (Gen g : heis) {
                Stopwatch sw;
                auto r = start(g);
                const auto A = element_operator<Stencil<G>, G>(rho, detail::starred<G>(g, StarName::Dagger));
                const auto B = element_operator<DiffOp<G>, G>(sig, p.printed ? algebra::theta_charlier<G>().image(g)
                                                                             : algebra::gen<G>(g));
                detail::intertwine_polynomial(r, A, B, p.trunc, slices);
                r.wall_time_ms = sw.ms();
                out.push_back(r.finish());
            }
            break;
        }
        case KernelCase::Meixner: {
            const auto s = rational_sqrt(p.c);
            if (!s) throw std::invalid_argument("exact Meixner intertwining needs c with a rational square root");
            const auto left = rep::pi_k(G(p.k), G(*s));
            // the relation that holds uses the other square-root branch on the x side
            const auto right = rep::pi_k(G(p.k), G(p.printed ? *s : Rational(-*s)));
            const auto th = algebra::theta_sqrt_c<G>(G(Rational(-*s)));
            for (Gen g : sl2) {
                Stopwatch sw;
                auto r = start(g);
                const auto A = element_operator<Stencil<G>, G>(left, detail::starred<G>(g, StarName::Su11));
                const auto B = element_operator<Stencil<G>, G>(right, th.image(g));
                detail::intertwine_discrete(r, A, B, p.trunc,
                                            [&](long a, long b) { return G(kernels::meixner(a, b, p.k, p.c)); });
                r.wall_time_ms = sw.ms();
                out.push_back(r.finish());
            }
            break;
        }
        case KernelCase::Laguerre: {
            const auto s = rational_sqrt(p.c);
            if (!s) throw std::invalid_argument("exact Laguerre intertwining needs c with a rational square root");
            const auto left = rep::pi_k(G(p.k), G(*s));
            const auto sig = rep::sigma_k(G(p.k));
            const auto th = algebra::theta_parabolic_inverse<G>();
            std::vector<Poly<G>> slices;
            for (long m = 0; m <= p.trunc; ++m) slices.push_back(kernels::laguerre_poly(m, p.k, *s));
            for (Gen g : sl2) {
                Stopwatch sw;
                auto r = start(g);
                const auto X = p.printed ? detail::starred<G>(g, StarName::Su11) : algebra::gen<G>(g);
                const auto A = element_operator<Stencil<G>, G>(left, X);
                const auto B = element_operator<DiffOp<G>, G>(sig, th.image(g));
                detail::intertwine_polynomial(r, A, B, p.trunc, slices);
                r.wall_time_ms = sw.ms();
                out.push_back(r.finish());
            }
            break;
        }
        case KernelCase::ExpKernel: {
            const double c = p.c.get_d();
            const auto sig = rep::sigma_c(Complex(c));
            const auto th = algebra::theta_fourier<Complex>();
            const auto xs = detail::linspace(-5, 5, p.grid);
            const auto variant = p.printed ? kernels::ExpVariant::Printed : kernels::ExpVariant::Corrected;
            for (Gen g : heis) {
                Stopwatch sw;
                auto r = start(g);
                const auto A = element_operator<DiffOp<Complex>, Complex>(sig, detail::starred<Complex>(g, StarName::Dagger));
                const auto B = element_operator<DiffOp<Complex>, Complex>(sig, th.image(g));
                detail::intertwine_continuous(r, A, B, xs, [&](double x, double y) { return kernels::exp_jets(x, y, c, variant).d; });
                r.wall_time_ms = sw.ms();
                out.push_back(r.finish());
            }
            break;
        }
        case KernelCase::Bessel: {
            const double k = p.k.get_d();
            const auto sig = rep::sigma_k(Complex(k));
            const auto xs = detail::linspace(0.1, 10, p.grid);
            for (Gen g : sl2) {
                Stopwatch sw;
                auto r = start(g);
                const auto A = element_operator<DiffOp<Complex>, Complex>(
                    sig, detail::starred<Complex>(g, p.printed ? StarName::IslR : StarName::Su11));
                const auto B = element_operator<DiffOp<Complex>, Complex>(sig, algebra::gen<Complex>(g));
                detail::intertwine_continuous(r, A, B, xs, [&](double x, double y) {
                    const auto j = kernels::bessel_jets(x, y, k);
                    std::array<std::array<Complex, 3>, 3> d;
                    for (int u = 0; u < 3; ++u)
                        for (int v = 0; v < 3; ++v) d[u][v] = Complex(double(j.d[u][v]));
                    return d;
                });
                r.wall_time_ms = sw.ms();
                out.push_back(r.finish());
            }
            break;
        }
        case KernelCase::MeixnerPollaczek: {
            const double k = p.k.get_d();
            const auto left = rep::pi_k(Complex(k), Complex(1.0));
            const auto right = rep::rho_k(Complex(k), p.printed);
            const auto th = p.printed ? algebra::invert(algebra::theta_phi_printed(p.phi), "printed-inverse")
                                      : algebra::make_morphism<Complex>(algebra::MorphismName::ThetaPhiInverse,
                                                                        {Rational(1, 2), p.phi});
            const auto xs = detail::linspace(-5, 5, p.grid);
            auto row = [&](Complex z) {
                auto v = kernels::mp_row(p.trunc, z, k, p.phi);
                for (auto& q : v) q *= std::exp(z * p.phi);
                return v;
            };
            for (Gen g : sl2) {
                Stopwatch sw;
                auto r = start(g);
                const auto A = element_operator<Stencil<Complex>, Complex>(left, detail::starred<Complex>(g, StarName::Su11));
                const auto B = element_operator<ShiftOp<Complex>, Complex>(right, th.image(g));
                for (double x : xs) {
                    const auto base_row = row(Complex(x));
                    for (long n = 0; n <= p.trunc - 2; ++n) {
                        auto on_n = [&](const Index& m) { return base_row.at(m[0]); };
                        auto on_x = [&](const std::vector<Complex>& z) { return row(z[0]).at(n); };
                        const std::vector<Complex> pt{Complex(x)};
                        const Complex lhs = A.apply_at<Complex>(on_n, {n});
                        const Complex rhs = B.apply_point(on_x, pt);
                        r.observe_scaled(std::abs(lhs - rhs), std::max(A.scale_at(on_n, {n}), B.point_scale(on_x, pt)));
                    }
                }
                r.wall_time_ms = sw.ms();
                out.push_back(r.finish());
            }
            break;
        }
    }
    if (!p.printed) return out;
    // The printed relation may agree on some generators; it is a control as a whole.
    auto agg = make_report("intertwining/" + base + "/printed", exact ? "exact" : "float", 1e-3, Measure::Relative,
                           Expectation::Exceeds);
    for (const auto& r : out) {
        agg.max_abs_residual = std::max(agg.max_abs_residual, r.max_abs_residual);
        agg.max_rel_residual = std::max(agg.max_rel_residual, r.max_rel_residual);
        agg.points += r.points;
        agg.wall_time_ms += r.wall_time_ms;
    }
    return {agg.finish()};
}

// ---------- Gram ----------

inline Report gram_residual(kernels::Family f, const Rational& c, const Rational& k, long j, double phi,
                            long trunc = 12) {
    switch (f) {
        case kernels::Family::Charlier: return kernels::charlier_gram(c.get_d(), {trunc});
        case kernels::Family::Meixner: return kernels::meixner_gram(k.get_d(), c.get_d(), {trunc});
        case kernels::Family::Krawtchouk: return kernels::krawtchouk_gram(j, c);
        case kernels::Family::Hermite: return kernels::hermite_orthogonality(c.get_d(), std::min(trunc, 10L));
        case kernels::Family::Laguerre: return kernels::laguerre_orthogonality(k.get_d(), c.get_d(), std::min(trunc, 10L));
        case kernels::Family::MeixnerPollaczek: return kernels::mp_orthogonality(k.get_d(), phi, std::min(trunc, 6L));
        default: throw std::invalid_argument("no Gram check for this kernel");
    }
}

}  // namespace duality::dual
