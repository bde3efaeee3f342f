#pragma once

#include "duality/poly.hpp"
#include "duality/quadrature.hpp"
#include "duality/report.hpp"
#include "duality/scalar.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace duality::kernels {

enum class Family { Charlier, Hermite, Meixner, Laguerre, Krawtchouk, Bessel, ExpKernel, MeixnerPollaczek };

inline const char* name_of(Family f) {
    switch (f) {
        case Family::Charlier: return "charlier";
        case Family::Hermite: return "hermite";
        case Family::Meixner: return "meixner";
        case Family::Laguerre: return "laguerre";
        case Family::Krawtchouk: return "krawtchouk";
        case Family::Bessel: return "bessel";
        case Family::ExpKernel: return "exp";
        case Family::MeixnerPollaczek: return "meixner-pollaczek";
    }
    return "?";
}

// Factor separating the normalized kernel from the bare one.
inline const char* prefactor_of(Family f) {
    switch (f) {
        case Family::Charlier: return "e^c";
        case Family::Hermite: return "e^(c/2)";
        case Family::Meixner: return "1";
        case Family::Laguerre: return "1 (c^(-n/2) kept in the bare form)";
        case Family::Krawtchouk: return "1";
        case Family::Bessel: return "e^((x+y)/2) 2^(1-2k)/Gamma(2k)";
        case Family::ExpKernel: return "1";
        case Family::MeixnerPollaczek: return "e^(x phi)";
    }
    return "?";
}

using Real = long double;

inline Rational pochhammer(const Rational& a, long n) {
    Rational p(1);
    for (long i = 0; i < n; ++i) p *= a + i;
    return p;
}

inline Rational factorial(long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

inline Rational power(const Rational& q, long n) {
    Rational r(1);
    if (n < 0) return 1 / power(q, -n);
    for (long i = 0; i < n; ++i) r *= q;
    return r;
}

// ---------- Charlier ----------

// ₂F₀(−n, −x; ; −1/c)
inline Rational charlier(long n, long x, const Rational& c) {
    if (n < 0 || x < 0) throw std::invalid_argument("Charlier indices must be nonnegative");
    if (sgn(c) <= 0) throw std::invalid_argument("Charlier parameter must be positive");
    Rational sum(0), term(1);
    const Rational z = -1 / c;
    for (long j = 0; j <= std::min(n, x); ++j) {
        sum += term;
        term *= Rational((-n + j) * (-x + j)) * z / (j + 1);
    }
    return sum;
}

// C_0..C_nmax at x by c C_{n+1} = (n + c − x) C_n − n C_{n−1}.
inline std::vector<Real> charlier_row(long nmax, Real x, Real c) {
    std::vector<Real> out(static_cast<std::size_t>(nmax + 1));
    out[0] = 1;
    if (nmax >= 1) out[1] = (c - x) / c;
    for (long n = 1; n < nmax; ++n) out[n + 1] = ((n + c - x) * out[n] - n * out[n - 1]) / c;
    return out;
}

// The forward recurrence in n loses the polynomial solution once n > x, so it is run
// in the smaller index, using C_n(x) = C_x(n).
inline Real charlier_float(long n, long x, Real c) {
    const long lo = std::min(n, x), hi = std::max(n, x);
    return charlier_row(lo, Real(hi), c)[static_cast<std::size_t>(lo)];
}

inline double charlier_normalized(long n, long x, double c) {
    return static_cast<double>(std::exp(Real(c)) * charlier_float(n, x, c));
}

// ---------- Meixner / Krawtchouk ----------

// ₂F₁(−n, −x; β; 1 − 1/c)
inline Rational meixner_beta(long n, long x, const Rational& beta, const Rational& c) {
    if (n < 0 || x < 0) throw std::invalid_argument("Meixner indices must be nonnegative");
    if (sgn(c) == 0) throw std::invalid_argument("Meixner parameter must be nonzero");
    const Rational z = 1 - 1 / c;
    Rational sum(0), term(1);
    for (long j = 0; j <= std::min(n, x); ++j) {
        sum += term;
        const Rational den = (beta + j) * (j + 1);
        if (sgn(den) == 0) {
            if (j < std::min(n, x)) throw std::domain_error("Meixner series hits a zero denominator");
            break;
        }
        term *= Rational((-n + j) * (-x + j)) * z / den;
    }
    return sum;
}

inline Rational meixner(long n, long x, const Rational& k, const Rational& c) {
    if (sgn(k) <= 0) throw std::invalid_argument("Meixner k must be positive");
    return meixner_beta(n, x, 2 * k, c);
}

// (c−1) x M_n = c(n+β) M_{n+1} − (n + (n+β)c) M_n + n M_{n−1}
inline std::vector<Real> meixner_row(long nmax, Real x, Real beta, Real c) {
    std::vector<Real> out(static_cast<std::size_t>(nmax + 1));
    out[0] = 1;
    for (long n = 0; n < nmax; ++n) {
        const Real prev = n > 0 ? out[n - 1] : 0;
        const Real den = c * (n + beta);
        if (den == 0) throw std::domain_error("Meixner recurrence breaks down");
        out[n + 1] = ((c - 1) * x * out[n] + (n + (n + beta) * c) * out[n] - n * prev) / den;
    }
    return out;
}

inline Real meixner_float(long n, long x, Real beta, Real c) {
    const long lo = std::min(n, x), hi = std::max(n, x);
    return meixner_row(lo, Real(hi), beta, c)[static_cast<std::size_t>(lo)];
}

// Meixner with β = −j; indices capped at j.
inline Rational krawtchouk(long n, long x, long j, const Rational& c) {
    if (j < 1) throw std::invalid_argument("Krawtchouk cap must be positive");
    if (n > j || x > j || n < 0 || x < 0) throw std::out_of_range("Krawtchouk index exceeds cap");
    return meixner_beta(n, x, Rational(-j), c);
}

inline Real krawtchouk_float(long n, long x, long j, Real c) {
    if (n > j || x > j || n < 0 || x < 0) throw std::out_of_range("Krawtchouk index exceeds cap");
    return meixner_float(n, x, Real(-j), c);
}

// ---------- Hermite ----------

// (2c)^{−n/2} H_n(x/√(2c)) = n! Σ_m (−1)^m (2x)^{n−2m} (2c)^{m−n} / (m!(n−2m)!)
inline Poly<GaussRational> hermite_poly(long n, const Rational& c) {
    if (sgn(c) <= 0) throw std::invalid_argument("Hermite parameter must be positive");
    Poly<GaussRational> p(1);
    const Rational nf = factorial(n);
    for (long m = 0; 2 * m <= n; ++m) {
        Rational coef = nf * power(Rational(2), n - 2 * m) * power(2 * c, m - n) / (factorial(m) * factorial(n - 2 * m));
        if (m % 2) coef = -coef;
        p.add_term({int(n - 2 * m)}, GaussRational(coef));
    }
    return p;
}

inline Rational hermite(long n, const Rational& x, const Rational& c) {
    return hermite_poly(n, c).eval(std::vector<GaussRational>{GaussRational(x)}).re();
}

// h_{n+1} = (x/c) h_n − (n/c) h_{n−1}
inline std::vector<Real> hermite_row(long nmax, Real x, Real c) {
    std::vector<Real> out(static_cast<std::size_t>(nmax + 1));
    out[0] = 1;
    if (nmax >= 1) out[1] = x / c;
    for (long n = 1; n < nmax; ++n) out[n + 1] = (x * out[n] - n * out[n - 1]) / c;
    return out;
}

inline double hermite_normalized(long n, double x, double c) {
    return static_cast<double>(std::exp(Real(c) / 2) * hermite_row(n, x, c)[static_cast<std::size_t>(n)]);
}

// ---------- Laguerre ----------

// n! c^{−n/2}/(2k)_n · L_n^{(2k−1)}(x) = s^{−n} ₁F₁(−n; 2k; x), with s = √c
inline Poly<GaussRational> laguerre_poly(long n, const Rational& k, const Rational& s) {
    if (sgn(k) <= 0) throw std::invalid_argument("Laguerre k must be positive");
    if (sgn(s) == 0) throw std::invalid_argument("Laguerre scale must be nonzero");
    Poly<GaussRational> p(1);
    const Rational scale = power(s, -n);
    Rational term(1);
    for (long j = 0; j <= n; ++j) {
        p.add_term({int(j)}, GaussRational(scale * term));
        term *= Rational(-n + j) / ((2 * k + j) * (j + 1));
    }
    return p;
}

inline Rational laguerre(long n, const Rational& x, const Rational& k, const Rational& s) {
    return laguerre_poly(n, k, s).eval(std::vector<GaussRational>{GaussRational(x)}).re();
}

// (2k+n) ℓ_{n+1} = (2n + 2k − x) ℓ_n − n ℓ_{n−1}, then the c^{−n/2} factor.
inline std::vector<Real> laguerre_row(long nmax, Real x, Real k, Real c) {
    std::vector<Real> out(static_cast<std::size_t>(nmax + 1));
    out[0] = 1;
    if (nmax >= 1) out[1] = 1 - x / (2 * k);
    for (long n = 1; n < nmax; ++n) out[n + 1] = ((2 * n + 2 * k - x) * out[n] - n * out[n - 1]) / (2 * k + n);
    const Real f = 1 / std::sqrt(c);
    Real scale = 1;
    for (long n = 0; n <= nmax; ++n) {
        out[n] *= scale;
        scale *= f;
    }
    return out;
}

// ---------- Bessel ----------

struct BesselJets {
    // d[a][b] = ∂_x^a ∂_y^b J(x, y; k), a, b ≤ 2
    std::array<std::array<Real, 3>, 3> d{};
    bool converged = true;
    int terms = 0;
};

// J(x,y;k) = e^{(x+y)/2} 2^{1−2k}/Γ(2k) ₀F₁(; 2k; −xy/4), with all partials up to order 2 in each slot.
inline BesselJets bessel_jets(Real x, Real y, Real k) {
    if (k <= 0) throw std::invalid_argument("Bessel k must be positive");
    BesselJets out;
    // g[a][b] = ∂_x^a ∂_y^b ₀F₁(;2k;−xy/4), summed term by term over (xy)^m
    std::array<std::array<Real, 3>, 3> g{};
    Real t = 1;  // (−1/4)^m / ((2k)_m m!)
    int m = 0;
    for (; m < 500; ++m) {
        Real biggest = 0;
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; b <= 2; ++b) {
                if (m < a || m < b) continue;
                Real fa = 1, fb = 1;
                for (int i = 0; i < a; ++i) fa *= (m - i);
                for (int i = 0; i < b; ++i) fb *= (m - i);
                const Real term = t * fa * fb * std::pow(x, Real(m - a)) * std::pow(y, Real(m - b));
                g[a][b] += term;
                biggest = std::max(biggest, std::fabs(term) / std::max(std::fabs(g[a][b]), Real(1e-300)));
            }
        if (m >= 30 && biggest < 1e-16L) break;
        t *= Real(-0.25) / ((2 * k + m) * (m + 1));
    }
    out.terms = m;
    out.converged = m < 500;
    const Real pre = std::exp((x + y) / 2) * std::pow(Real(2), 1 - 2 * k) / std::tgamma(2 * k);
    // product rule with e^{(x+y)/2}
    static constexpr int binom[3][3] = {{1, 0, 0}, {1, 1, 0}, {1, 2, 1}};
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b) {
            Real s = 0;
            for (int p = 0; p <= a; ++p)
                for (int q = 0; q <= b; ++q)
                    s += binom[a][p] * binom[b][q] * std::pow(Real(0.5), Real(a - p + b - q)) * g[p][q];
            out.d[a][b] = pre * s;
        }
    return out;
}

inline double bessel(double x, double y, double k, int dx = 0, int dy = 0) {
    if (x < 0 || y < 0) throw std::domain_error("Bessel kernel needs nonnegative arguments");
    if (dx < 0 || dx > 2 || dy < 0 || dy > 2) throw std::invalid_argument("derivative order must be 0..2");
    auto j = bessel_jets(x, y, k);
    if (!j.converged) throw std::runtime_error("Bessel series did not converge");
    return static_cast<double>(j.d[dx][dy]);
}

// ---------- exponential kernel ----------

enum class ExpVariant { Corrected, Printed };

// exp((x²+y²)/(4c) − i β x y) with β = 1/(2c) (corrected) or 1/c (printed).
struct ExpJets {
    std::array<std::array<Complex, 3>, 3> d{};
};

inline ExpJets exp_jets(double x, double y, double c, ExpVariant v = ExpVariant::Corrected) {
    if (c <= 0) throw std::invalid_argument("exponential kernel parameter must be positive");
    const Complex i(0.0, 1.0);
    const double beta = v == ExpVariant::Corrected ? 1.0 / (2.0 * c) : 1.0 / c;
    const Complex f = std::exp((x * x + y * y) / (4.0 * c) - i * beta * x * y);
    const Complex qx = x / (2.0 * c) - i * beta * y;
    const Complex qy = y / (2.0 * c) - i * beta * x;
    const Complex qxx = 1.0 / (2.0 * c), qyy = 1.0 / (2.0 * c), qxy = -i * beta;
    const Complex p20 = qxx + qx * qx, p02 = qyy + qy * qy;
    ExpJets j;
    j.d[0][0] = 1.0;
    j.d[1][0] = qx;
    j.d[0][1] = qy;
    j.d[2][0] = p20;
    j.d[0][2] = p02;
    j.d[1][1] = qxy + qx * qy;
    j.d[2][1] = 2.0 * qx * qxy + qy * p20;
    j.d[1][2] = 2.0 * qy * qxy + qx * p02;
    j.d[2][2] = 2.0 * qxy * qxy + p02 * p20 + 4.0 * qx * qy * qxy;
    for (auto& row : j.d)
        for (auto& e : row) e *= f;
    return j;
}

inline Complex exp_kernel(double x, double y, double c, int dx = 0, int dy = 0,
                          ExpVariant v = ExpVariant::Corrected) {
    if (dx < 0 || dx > 2 || dy < 0 || dy > 2) throw std::invalid_argument("derivative order must be 0..2");
    return exp_jets(x, y, c, v).d[dx][dy];
}

// ---------- Meixner–Pollaczek ----------

// n!/(2k)_n P_n^{(k)}(x; φ) = e^{inφ} ₂F₁(−n, k + ix; 2k; 1 − e^{−2iφ}) at complex x
inline Complex mp_poly(long n, Complex x, double k, double phi) {
    if (k <= 0) throw std::invalid_argument("Meixner-Pollaczek k must be positive");
    if (!(phi > 0 && phi < std::numbers::pi)) throw std::invalid_argument("phi must lie in (0, pi)");
    using C = std::complex<Real>;
    const C i(0, 1);
    const Real ph = phi;
    const C z = Real(1) - std::exp(Real(-2) * i * ph);
    const C a = Real(k) + i * C(x);
    C sum = 0, term = 1;
    for (long j = 0; j <= n; ++j) {
        sum += term;
        term *= Real(-n + j) * (a + Real(j)) * z / ((2 * Real(k) + j) * (j + Real(1)));
    }
    const C out = std::exp(i * Real(n) * ph) * sum;
    return Complex(double(out.real()), double(out.imag()));
}

// (2k+n) p_{n+1} = (2x sinφ + 2(n+k) cosφ) p_n − n p_{n−1}
inline std::vector<Complex> mp_row(long nmax, Complex x, double k, double phi) {
    std::vector<Complex> out(static_cast<std::size_t>(nmax + 1));
    out[0] = 1.0;
    for (long n = 0; n < nmax; ++n) {
        const Complex prev = n > 0 ? out[n - 1] : Complex(0.0);
        out[n + 1] = ((2.0 * x * std::sin(phi) + 2.0 * (n + k) * std::cos(phi)) * out[n] - double(n) * prev) /
                     (2.0 * k + n);
    }
    return out;
}

// P(n, x; k, φ) = e^{xφ} n!/(2k)_n P_n^{(k)}(x; φ)
inline Complex mp_kernel(long n, Complex x, double k, double phi) { return std::exp(x * phi) * mp_poly(n, x, k, phi); }

// ---------- weights ----------

enum class WeightFamily { Poisson, Gaussian, NegBinomial, Gamma, MP, Binomial };

struct Weight {
    WeightFamily family;
    double c = 0.5;
    double k = 1.0;
    double phi = std::numbers::pi / 3;
    long j = 4;

    double operator()(double point) const {
        switch (family) {
            case WeightFamily::Poisson: {
                check_discrete(point);
                return std::exp(-c + point * std::log(c) - std::lgamma(point + 1));
            }
            case WeightFamily::NegBinomial: {
                check_discrete(point);
                const double n = point;
                return std::exp(std::lgamma(2 * k + n) - std::lgamma(2 * k) - std::lgamma(n + 1) + n * std::log(c) +
                                2 * k * std::log1p(-c));
            }
            case WeightFamily::Binomial: {
                check_discrete(point);
                if (point > double(j)) throw std::domain_error("point outside the binomial support");
                const double n = point;
                return std::exp(std::lgamma(j + 1.0) - std::lgamma(n + 1) - std::lgamma(j - n + 1) + n * std::log(c) +
                                (j - n) * std::log1p(-c));
            }
            case WeightFamily::Gaussian:
                return std::exp(-point * point / (2 * c)) / std::sqrt(2 * c * std::numbers::pi);
            case WeightFamily::Gamma:
                if (point <= 0) throw std::domain_error("point outside the Gamma support");
                return std::exp((2 * k - 1) * std::log(point) - point - std::lgamma(2 * k));
            case WeightFamily::MP:
                return std::pow(2 * std::sin(phi), 2 * k) / (2 * std::numbers::pi * std::tgamma(2 * k)) *
                       std::exp(-std::numbers::pi * point) * quad::gamma_abs_sq(k, point);
        }
        return 0.0;
    }

private:
    static void check_discrete(double point) {
        if (point < 0 || point != std::floor(point)) throw std::domain_error("point outside the discrete support");
    }
};

// c^n/n! (Poisson without e^{−c})
inline Rational poisson_unnormalized(long n, const Rational& c) { return power(c, n) / factorial(n); }

// (2k)_n c^n / n! (negative binomial without (1−c)^{2k})
inline Rational negbin_unnormalized(long n, const Rational& k, const Rational& c) {
    return pochhammer(2 * k, n) * power(c, n) / factorial(n);
}

// (β)_n c^n / n! for general β
inline Rational meixner_weight_unnormalized(long n, const Rational& beta, const Rational& c) {
    return pochhammer(beta, n) * power(c, n) / factorial(n);
}

// ---------- orthogonality / Gram ----------

struct GramOptions {
    long maxdeg = 12;
    double tail = 1e-18;
};

// Gram checks for the discrete kernels: max |√(w_m w_n) Σ_x w(x) K(m,x) K(n,x) − δ_mn|.
// K carries the constant that makes its row norms equal 1/w(m): e^{c/2} for Charlier,
// (1−c)^{−k} for Meixner, (1−c)^{j/2} for Krawtchouk (normalized weights throughout).
namespace detail {

// Σ_x w(x) unit K(m,x) K(n,x), stopping once every normalized summand is below the tail bound.
template <class RowFn>
Report discrete_gram(Report r, const Weight& w, Real unit, long maxdeg, double tail, RowFn&& row_at) {
    const std::size_t M = static_cast<std::size_t>(maxdeg + 1);
    std::vector<std::vector<Real>> G(M, std::vector<Real>(M, 0));
    std::vector<Real> wm(M);
    for (std::size_t m = 0; m < M; ++m) wm[m] = w(double(m));
    for (long x = 0;; ++x) {
        const Real wx = w(double(x));
        const std::vector<Real> row = row_at(x);
        Real biggest = 0;
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t n = 0; n < M; ++n) {
                const Real term = wx * unit * row[m] * row[n];
                G[m][n] += term;
                biggest = std::max(biggest, std::fabs(term) * std::sqrt(wm[m] * wm[n]));
            }
        if (x > 2 * maxdeg && biggest < tail) break;
        if (x > 100000) throw std::runtime_error("Gram sum did not reach its tail bound");
    }
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < M; ++n)
            r.observe(static_cast<double>(std::fabs(std::sqrt(wm[m] * wm[n]) * G[m][n] - (m == n ? 1 : 0))));
    return r;
}

}  // namespace detail

inline Report charlier_gram(double c, const GramOptions& o = {}) {
    Stopwatch sw;
    auto r = detail::discrete_gram(make_report("gram/charlier", "float", 1e-10), Weight{WeightFamily::Poisson, c},
                                   std::exp(Real(c)), o.maxdeg, o.tail, [&](long x) {
                                       std::vector<Real> row(static_cast<std::size_t>(o.maxdeg + 1));
                                       for (long n = 0; n <= o.maxdeg; ++n) row[n] = charlier_float(n, x, c);
                                       return row;
                                   });
    r.notes.push_back("kernel scaled by e^(c/2); with the e^c normalization the row norms are e^c/w(m)");
    r.wall_time_ms = sw.ms();
    return r.finish();
}

inline Report meixner_gram(double k, double c, const GramOptions& o = {}) {
    Stopwatch sw;
    auto r = detail::discrete_gram(make_report("gram/meixner", "float", 1e-10), Weight{WeightFamily::NegBinomial, c, k},
                                   std::pow(1 - Real(c), -2 * Real(k)), o.maxdeg, o.tail, [&](long x) {
                                       std::vector<Real> row(static_cast<std::size_t>(o.maxdeg + 1));
                                       for (long n = 0; n <= o.maxdeg; ++n) row[n] = meixner_float(n, x, 2 * Real(k), c);
                                       return row;
                                   });
    r.notes.push_back("kernel scaled by (1-c)^(-k)");
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// Finite exact sum; with β = −j the Meixner weight (β)_x c^x/x! (1−c)^β is Binomial(j, c/(c−1)).
inline Report krawtchouk_gram(long j, const Rational& c) {
    Stopwatch sw;
    auto r = make_report("gram/krawtchouk", "exact", 1e-10);
    const Rational beta(-j);
    auto weight = [&](long x) -> Rational { return meixner_weight_unnormalized(x, beta, c) * power(1 - c, -j); };
    const Rational unit = power(1 - c, j);
    for (long x = 0; x <= j; ++x)
        if (sgn(weight(x)) <= 0) throw std::domain_error("Krawtchouk weight not positive for this c");
    for (long m = 0; m <= j; ++m)
        for (long n = 0; n <= j; ++n) {
            Rational g(0);
            for (long x = 0; x <= j; ++x) g += weight(x) * krawtchouk(m, x, j, c) * krawtchouk(n, x, j, c);
            g *= unit;
            const Rational dev = m == n ? Rational(weight(m) * g - 1) : g;
            const double scale = m == n ? 1.0 : std::sqrt(Rational(weight(m)).get_d() * Rational(weight(n)).get_d());
            r.observe(std::fabs(dev.get_d()) * scale);
        }
    r.notes.push_back("kernel scaled by (1-c)^(j/2)");
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// Continuous families: bare kernels against their norms, normalized deviation.
inline Report hermite_orthogonality(double c, long maxdeg = 10) {
    Stopwatch sw;
    auto r = make_report("orthogonality/hermite", "float", 1e-12);
    const auto rule = quad::gauss_hermite(int(maxdeg + 2), c);
    const std::size_t M = static_cast<std::size_t>(maxdeg + 1);
    std::vector<std::vector<Real>> G(M, std::vector<Real>(M, 0));
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        auto row = hermite_row(maxdeg, rule.nodes[q], c);
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t n = 0; n < M; ++n) G[m][n] += Real(rule.weights[q]) * row[m] * row[n];
    }
    // ‖h_n‖² = n!/c^n
    auto norm = [&](std::size_t n) { return std::tgamma(Real(n) + 1) / std::pow(Real(c), Real(n)); };
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < M; ++n)
            r.observe(static_cast<double>(std::fabs(G[m][n] / std::sqrt(norm(m) * norm(n)) - (m == n ? 1 : 0))));
    r.wall_time_ms = sw.ms();
    return r.finish();
}

inline Report laguerre_orthogonality(double k, double c, long maxdeg = 10) {
    Stopwatch sw;
    auto r = make_report("orthogonality/laguerre", "float", 1e-12);
    const auto rule = quad::gauss_laguerre(int(maxdeg + 2), 2 * k - 1);
    const std::size_t M = static_cast<std::size_t>(maxdeg + 1);
    std::vector<std::vector<Real>> G(M, std::vector<Real>(M, 0));
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        auto row = laguerre_row(maxdeg, rule.nodes[q], k, c);
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t n = 0; n < M; ++n) G[m][n] += Real(rule.weights[q]) * row[m] * row[n];
    }
    // ‖L(n,·)‖² = c^{−n} n!/(2k)_n
    auto norm = [&](std::size_t n) {
        Real p = 1;
        for (std::size_t i = 0; i < n; ++i) p *= Real(i + 1) / (2 * Real(k) + Real(i)) / Real(c);
        return p;
    };
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < M; ++n)
            r.observe(static_cast<double>(std::fabs(G[m][n] / std::sqrt(norm(m) * norm(n)) - (m == n ? 1 : 0))));
    r.wall_time_ms = sw.ms();
    return r.finish();
}

struct LineOptions {
    int nodes_per_panel = 20;
    int panels = 120;
    double cut = 40.0;
};

inline Report mp_orthogonality(double k, double phi, long maxdeg = 6, const LineOptions& o = {}) {
    Stopwatch sw;
    auto r = make_report("orthogonality/meixner-pollaczek", "float", 1e-8);
    const auto rule = quad::truncated_line(o.nodes_per_panel, o.panels, o.cut);
    const std::size_t M = static_cast<std::size_t>(maxdeg + 1);
    std::vector<std::vector<Complex>> G(M, std::vector<Complex>(M, 0.0));
    // weight without the (1−c)^{2k}-type normalization: (2 sinφ)^{2k}/(2πΓ(2k)) e^{−πx} |Γ(k+ix)|²
    const Weight w{WeightFamily::MP, 1.0, k, phi};
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double x = rule.nodes[q];
        const double wx = w(x) * std::exp(2 * x * phi);
        auto row = mp_row(maxdeg, Complex(x), k, phi);
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t n = 0; n < M; ++n) G[m][n] += rule.weights[q] * wx * row[m] * row[n];
    }
    // ‖P(n,·)‖² = n!/(2k)_n
    auto norm = [&](std::size_t n) {
        double p = 1;
        for (std::size_t i = 0; i < n; ++i) p *= double(i + 1) / (2 * k + double(i));
        return p;
    };
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < M; ++n)
            r.observe(std::abs(G[m][n] / std::sqrt(norm(m) * norm(n)) - (m == n ? 1.0 : 0.0)));
    r.wall_time_ms = sw.ms();
    return r.finish();
}

// Single (m, n) entry, as a plain deviation; checks quadrature exactness for Gauss rules.
inline double orthogonality_residual(Family f, long m, long n, double c, double k, double phi, int nodes) {
    const std::size_t M = static_cast<std::size_t>(std::max(m, n));
    switch (f) {
        case Family::Hermite:
        case Family::Laguerre: {
            if (m + n > 2 * nodes - 1) throw std::invalid_argument("quadrature not exact for this degree");
            const auto rule = f == Family::Hermite ? quad::gauss_hermite(nodes, c) : quad::gauss_laguerre(nodes, 2 * k - 1);
            Real g = 0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                auto row = f == Family::Hermite ? hermite_row(long(M), rule.nodes[q], c)
                                                : laguerre_row(long(M), rule.nodes[q], k, c);
                g += Real(rule.weights[q]) * row[m] * row[n];
            }
            Real nm = 1, nn = 1;
            for (long i = 0; i < m; ++i) nm *= f == Family::Hermite ? Real(i + 1) / c : Real(i + 1) / ((2 * k + i) * c);
            for (long i = 0; i < n; ++i) nn *= f == Family::Hermite ? Real(i + 1) / c : Real(i + 1) / ((2 * k + i) * c);
            return static_cast<double>(std::fabs(g / std::sqrt(nm * nn) - (m == n ? 1 : 0)));
        }
        case Family::MeixnerPollaczek: {
            auto rep = mp_orthogonality(k, phi, long(M));
            return rep.max_abs_residual;
        }
        case Family::Charlier: return charlier_gram(c, {long(M)}).max_abs_residual;
        case Family::Meixner: return meixner_gram(k, c, {long(M)}).max_abs_residual;
        default: throw std::invalid_argument("family has no orthogonality relation in this library");
    }
}

// ---------- exact series against float recurrences ----------

struct CrossParams {
    Rational c{3, 4};
    Rational k{3, 4};
    long j = 20;
    Rational s{1, 2};  // Laguerre scale, s² plays the role of c
    double phi = std::numbers::pi / 3;
    long nmax = 20;
};

// max relative deviation of the float recurrence from the exact hypergeometric series.
inline Report cross_validation(Family f, const CrossParams& p = {}) {
    Stopwatch sw;
    auto r = make_report(std::string("cross-validation/") + name_of(f), "float", 1e-12, Measure::Relative);
    const long N = p.nmax;
    auto compare = [&](const Rational& exact, Real approx) {
        const double e = exact.get_d(), a = static_cast<double>(approx);
        r.observe_pair(std::fabs(e), std::fabs(a), std::fabs(double(Real(e) - approx)));
    };
    // continuous slots are sampled on a half-integer grid
    auto grid = [](long lo, long hi) {
        std::vector<Rational> xs;
        for (long q = 2 * lo; q <= 2 * hi; ++q) xs.emplace_back(q, 2);
        return xs;
    };
    switch (f) {
        case Family::Charlier:
            for (long x = 0; x <= N; ++x)
                for (long n = 0; n <= N; ++n) compare(charlier(n, x, p.c), charlier_float(n, x, p.c.get_d()));
            break;
        case Family::Meixner: {
            const Real beta = 2 * p.k.get_d();
            for (long x = 0; x <= N; ++x)
                for (long n = 0; n <= N; ++n) compare(meixner(n, x, p.k, p.c), meixner_float(n, x, beta, p.c.get_d()));
            break;
        }
        case Family::Krawtchouk: {
            const long cap = std::min(N, p.j);
            for (long x = 0; x <= cap; ++x)
                for (long n = 0; n <= cap; ++n)
                    compare(krawtchouk(n, x, p.j, p.c), krawtchouk_float(n, x, p.j, p.c.get_d()));
            break;
        }
        case Family::Hermite:
            for (const auto& x : grid(-5, 5)) {
                const auto row = hermite_row(N, x.get_d(), p.c.get_d());
                for (long n = 0; n <= N; ++n) compare(hermite(n, x, p.c), row[n]);
            }
            break;
        case Family::Laguerre:
            for (const auto& x : grid(0, 10)) {
                const auto row = laguerre_row(N, x.get_d(), p.k.get_d(), Rational(p.s * p.s).get_d());
                for (long n = 0; n <= N; ++n) compare(laguerre(n, x, p.k, p.s), row[n]);
            }
            break;
        case Family::MeixnerPollaczek:
            // the series has no exact form at transcendental φ; it is checked against the recurrence up to n = 8
            for (const auto& x : grid(-5, 5)) {
                const auto row = mp_row(8, Complex(x.get_d()), p.k.get_d(), p.phi);
                for (long n = 0; n <= 8; ++n) {
                    const Complex a = mp_poly(n, Complex(x.get_d()), p.k.get_d(), p.phi);
                    r.observe_pair(std::abs(a), std::abs(row[n]), std::abs(a - row[n]));
                }
            }
            break;
        default: throw std::invalid_argument("no series/recurrence pair for this family");
    }
    r.wall_time_ms = sw.ms();
    return r.finish();
}

}  // namespace duality::kernels
