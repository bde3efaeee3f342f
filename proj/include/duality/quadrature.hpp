#pragma once

#include "duality/scalar.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace duality::quad {

// Lanczos approximation, g = 7, nine coefficients.
inline Complex gamma(Complex z) {
    static constexpr std::array<double, 9> p{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double pi = std::numbers::pi;
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma(1.0 - z));
    z -= 1.0;
    Complex x = p[0];
    for (std::size_t i = 1; i < p.size(); ++i) x += p[i] / (z + double(i));
    const Complex t = z + 7.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// |Γ(k + i x)|²
inline double gamma_abs_sq(double k, double x) { return std::norm(gamma(Complex(k, x))); }

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class Fn>
    auto integrate(Fn&& f) const {
        decltype(f(0.0)) sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

// Golub–Welsch for a symmetric Jacobi matrix; mass is the total weight of the measure.
inline Rule golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag, double mass) {
    const auto m = static_cast<Eigen::Index>(diag.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) J(i, i) = diag[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < m; ++i) J(i, i + 1) = J(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw std::runtime_error("Golub-Welsch eigensolver failed");
    Rule r;
    for (Eigen::Index i = 0; i < m; ++i) {
        r.nodes.push_back(es.eigenvalues()(i));
        const double v = es.eigenvectors()(0, i);
        r.weights.push_back(mass * v * v);
    }
    return r;
}

// Nodes/weights for the N(0, variance) law; exact for polynomials of degree ≤ 2m − 1.
inline Rule gauss_hermite(int m, double variance = 1.0) {
    if (m < 1) throw std::invalid_argument("quadrature needs at least one node");
    std::vector<double> d(m, 0.0), e;
    for (int i = 1; i < m; ++i) e.push_back(std::sqrt(double(i)));
    Rule r = golub_welsch(d, e, 1.0);
    const double s = std::sqrt(variance);
    for (double& x : r.nodes) x *= s;
    return r;
}

// Nodes/weights for the Gamma(α+1, 1) law x^α e^{−x}/Γ(α+1).
inline Rule gauss_laguerre(int m, double alpha) {
    if (m < 1) throw std::invalid_argument("quadrature needs at least one node");
    if (alpha <= -1.0) throw std::invalid_argument("Laguerre parameter must exceed -1");
    std::vector<double> d, e;
    for (int i = 0; i < m; ++i) d.push_back(2.0 * i + alpha + 1.0);
    for (int i = 1; i < m; ++i) e.push_back(std::sqrt(double(i) * (i + alpha)));
    return golub_welsch(d, e, 1.0);
}

// Lebesgue measure on [−1, 1].
inline Rule gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("quadrature needs at least one node");
    std::vector<double> d(m, 0.0), e;
    for (int i = 1; i < m; ++i) e.push_back(i / std::sqrt(4.0 * i * i - 1.0));
    return golub_welsch(d, e, 2.0);
}

// Composite Gauss–Legendre on [−cut, cut] with equal panels.
inline Rule truncated_line(int nodes_per_panel, int panels, double cut) {
    if (panels < 1 || cut <= 0.0) throw std::invalid_argument("bad truncated-line rule");
    const Rule base = gauss_legendre(nodes_per_panel);
    const double h = 2.0 * cut / panels;
    Rule r;
    for (int p = 0; p < panels; ++p) {
        const double mid = -cut + (p + 0.5) * h;
        for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            r.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
            r.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return r;
}

}  // namespace duality::quad
