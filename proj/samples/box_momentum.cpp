// Momentum statistics of a particle in [0, pi]: moments of |F phi|^2 against
// ||phi'||^2, and the low spectrum of the Dirichlet P_0^* P_0.

#include <iomanip>
#include <iostream>

#include "opint/box/lemmas.hpp"
#include "opint/box/momentum.hpp"
#include "opint/box/operators.hpp"

using namespace opint;
using namespace opint::box;

int main()
{
    const BoxConfig cfg;
    const std::vector<BoxState> states{sine_state(1, cfg.ell), sine_state(2, cfg.ell), bump_state(cfg.ell),
                                       linear_state(1.0, 1.0, cfg.ell).named("constant")};

    std::cout << std::left << std::setw(14) << "state" << std::setw(15) << "domain" << std::setw(28)
              << "int x^2 |F phi|^2" << "||phi'||^2\n";
    for (const BoxState& s : states) {
        const IntegrationVerdict m2 = moment(s, 2, cfg);
        std::cout << std::setw(14) << s.name() << std::setw(15) << to_string(boundary_domain_detector(s, 1));
        if (m2.converged())
            std::cout << std::setw(28) << std::setprecision(8) << m2.value.real();
        else
            std::cout << std::setw(28) << to_string(m2.status);
        std::cout << s.norm_sq(1) << '\n';
    }

    const EigenReport eig = eigen_p0star_p0(cfg, 5);
    std::cout << "\nP_0^* P_0 on " << cfg.M << " intervals:\n";
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
        std::cout << "  n = " << k + 1 << "  " << std::setprecision(10) << eig.eigenvalues[k] << "  (Galerkin "
                  << eig.galerkin[k] << ")\n";
}
