// Dilates a qubit trine POVM and a seeded random POVM, then compares the
// bounded integral int f dE with its compression V^* F(f) V.

#include <cmath>
#include <iomanip>
#include <iostream>

#include "opint/naimark.hpp"
#include "opint/operator_integrals.hpp"

using namespace opint;

namespace {

DiscretePovm trine()
{
    std::vector<Matrix> effects;
    for (int k = 0; k < 3; ++k) {
        const double a = 2.0 * pi * k / 3.0;
        Vector v(2);
        v << std::cos(a / 2.0), std::sin(a / 2.0);
        effects.push_back((2.0 / 3.0) * v * v.adjoint());
    }
    return DiscretePovm::from_matrices(effects, {-1.0, 0.0, 1.0});
}

void report(const std::string& label, const DiscretePovm& e)
{
    const NaimarkDilation dil = naimark_dilate(e);
    const DilationReport r = verify_dilation(e, dil);
    const ScalarFunction f = [](double x) { return cplx{x * x, std::sin(x)}; };
    std::cout << label << ": d = " << e.dim() << ", outcomes = " << e.size() << ", K = " << dil.dilation_dim
              << (r.dimension_is_rank_sum ? " (rank sum)" : " (not minimal)") << '\n'
              << std::scientific << std::setprecision(2) << "  ||V*V - I||          " << r.isometry_defect << '\n'
              << "  max ||V*F_iV - E_i|| " << r.compression_defect << '\n'
              << "  ||sum F_i - I||      " << r.resolution_defect << '\n'
              << "  integral via F       " << dilation_integral_check(f, e, dil) << '\n';

    const OperatorIntegral first = tilde_integral([](double x) { return cplx{x, 0.0}; }, e);
    std::cout << "  first moment operator:\n" << std::fixed << std::setprecision(4) << first.matrix << "\n\n";
}

} // namespace

int main()
{
    report("trine", trine());
    Rng rng(2024);
    report("random", DiscretePovm::random(4, 5, rng, {-2.0, -1.0, 0.0, 1.0, 2.0}));
}
