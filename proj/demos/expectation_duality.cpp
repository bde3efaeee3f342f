// E_x D(x_t, y) = E_y D(x, y_t), estimated by simulation on both sides.
#include "duality/suites.hpp"

#include <cstdlib>
#include <iostream>

using namespace duality;

int main(int argc, char** argv) {
    const std::size_t trials = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20000;
    int failed = 0;
    for (const auto& cfg : suite::default_simulations(trials, 7)) {
        const auto r = mc::mc_duality(cfg);
        std::cout << dual::info(cfg.id).name << " t=" << cfg.t << "\n"
                  << "  left  " << r.left.mean << " +- " << r.left.se << "\n"
                  << "  right " << r.right.mean << " +- " << r.right.se << "\n";
        if (r.right_fine)
            std::cout << "  right at dt/2 " << r.right_fine->mean << ", bias allowance " << r.bias_allowance << "\n";
        std::cout << "  z " << r.z << "  " << r.report.status() << "\n";
        failed += !r.report.pass;
    }
    return failed;
}
