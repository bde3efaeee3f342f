// From the Heisenberg algebra to the Charlier self-duality of independent random walkers.
#include "duality/suites.hpp"

#include <iomanip>
#include <iostream>

using namespace duality;
using G = GaussRational;

int main() {
    // 1. the pair element whose image under rho_c x rho_c is the walker generator
    const auto Y = algebra::heisenberg_pair_element<G>();
    std::cout << "pair element Y = " << Y << "\n";

    // 2. twisting both legs by theta_charlier leaves Y up to a remainder
    const auto theta = algebra::theta_charlier<G>();
    const auto R = theta.apply(Y) - Y;
    std::cout << "(theta x theta)(Y) - Y = " << R << "\n";
    std::cout << "matches the stored remainder: " << std::boolalpha << (R == algebra::charlier_remainder<G>()) << "\n";

    // 3. the remainder is annihilated by the representation on interior basis vectors
    for (const auto& r : suite::representation_suite())
        if (r.name == "charlier-twist/remainder-vanishes")
            std::cout << "rho_c x rho_c (R) residual: " << r.max_abs_residual << "\n";

    // 4. the kernel that intertwines: Charlier polynomials, symmetric in n and x
    const Rational c(1, 2);
    std::cout << "\nC_n(x; 1/2) for n, x < 5\n";
    for (long n = 0; n < 5; ++n) {
        for (long x = 0; x < 5; ++x) std::cout << std::setw(10) << kernels::charlier(n, x, c).get_str();
        std::cout << "\n";
    }

    // 5. exact duality residual of the walker generator against this kernel
    dual::CaseParams p;
    p.c = c;
    const auto ok = dual::duality_residual(dual::CaseId::IrwCharlier, p);
    const auto bad = dual::negative_control(dual::CaseId::IrwCharlier, p);
    std::cout << "\n" << ok.name << ": residual " << ok.max_abs_residual << " over " << ok.points << " pairs\n";
    std::cout << bad.name << ": relative residual " << bad.max_rel_residual << "\n";
    return ok.pass && bad.pass ? 0 : 1;
}
