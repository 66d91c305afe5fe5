#include <cmath>

#include <gtest/gtest.h>

#include "opint/box/lemmas.hpp"
#include "opint/box/momentum.hpp"
#include "opint/box/operators.hpp"
#include "opint/box/state.hpp"
#include "opint/linalg.hpp"

using namespace opint;
using namespace opint::box;

namespace {

const double s2 = 1.0 / std::sqrt(2.0);
const double s6 = 1.0 / std::sqrt(6.0);

BoxConfig config(int M = 2000)
{
    BoxConfig c;
    c.M = M;
    return c;
}

Vector interior(const std::vector<cplx>& s, int first, int last)
{
    Vector v(last - first + 1);
    for (int j = first; j <= last; ++j) v(j - first) = s[static_cast<std::size_t>(j)];
    return v;
}

} // namespace

TEST(BoxConfig, RejectsCoarseGridsAndBadLengths)
{
    BoxConfig c;
    c.M = 4 * c.N - 1;
    EXPECT_THROW(c.validate(), Error);
    c = BoxConfig{};
    c.ell = -1.0;
    EXPECT_THROW(c.validate(), Error);
    EXPECT_NO_THROW(BoxConfig{}.validate());
    EXPECT_DOUBLE_EQ(BoxConfig{}.cutoff(), 200.0 / pi);
    EXPECT_THROW(BoxState(0.0, {1.0}, {}), Error);
}

TEST(BoxStates, DerivativesAndAlgebra)
{
    const BoxState bump = bump_state(pi);
    const BoxState d2 = bump.derived(2);
    for (double t : {0.0, 0.4, 1.3, 2.9, pi}) {
        EXPECT_NEAR(std::abs(d2(t) - bump.derivative(2, t)), 0.0, 1e-12);
        // t^2 (pi - t)^2 has phi'' = 2 pi^2 - 12 pi t + 12 t^2.
        EXPECT_NEAR(d2(t).real(), 2.0 * pi * pi - 12.0 * pi * t + 12.0 * t * t, 1e-10);
    }
    const BoxState sum = sine_state(1, pi) + bump.scaled(cplx{0.0, 2.0});
    for (double t : {0.3, 1.7}) {
        EXPECT_NEAR(std::abs(sum(t) - (sine_state(1, pi)(t) + cplx{0.0, 2.0} * bump(t))), 0.0, 1e-13);
    }
    EXPECT_THROW(sine_state(0, pi), Error);
    EXPECT_THROW(sine_state(1, pi) + sine_state(1, 2.0), Error);
    const BoxState lin = linear_state(1.0, cplx{0.0, 3.0}, 2.0);
    EXPECT_EQ(lin(0.0), cplx(1.0, 0.0));
    EXPECT_NEAR(std::abs(lin(2.0) - cplx{0.0, 3.0}), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(plane_wave(0.7, pi)(1.2) - std::exp(cplx{0.0, -0.84})), 0.0, 1e-15);
}

TEST(BoxStates, DerivativeNormsMatchClosedForms)
{
    const double bump[] = {47.316030688009859788, 57.529394814796039381, 244.81574782822516261};
    const double parabola[] = {10.200656159509381775, 10.335425560099940058, 12.566370614359172954};
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(bump_state(pi).norm_sq(k), bump[k], 1e-10 * bump[k]);
        EXPECT_NEAR(parabola_state(pi).norm_sq(k), parabola[k], 1e-10 * parabola[k]);
    }
    for (int n = 1; n <= 6; ++n) {
        EXPECT_NEAR(sine_state(n, pi).norm_sq(0), 1.0, 1e-12);
        EXPECT_NEAR(sine_state(n, pi).norm_sq(1), n * n, 1e-10 * n * n);
    }
    EXPECT_NEAR(sine_series({s2, s2}, pi).norm_sq(1), 2.5, 1e-10);
    EXPECT_NEAR(sine_series({s6, 0.0, -2.0 * s6, 0.0, s6}, pi).norm_sq(1), 10.333333333333333, 1e-9);
}

TEST(BoxStates, GridStates)
{
    EXPECT_THROW(BoxState::from_grid(pi, std::vector<cplx>(8, 0.0)), Error);
    EXPECT_THROW(BoxState::from_grid(pi, std::vector<cplx>(10, 0.0)), Error);
    const BoxState g = BoxState::from_grid(pi, sine_state(1, pi).sample(400));
    EXPECT_FALSE(g.analytic());
    EXPECT_NEAR(g.norm_sq(), 1.0, 1e-8);
    EXPECT_THROW(g.norm_sq(1), Error);
    EXPECT_THROW(g(0.5), Error);
    EXPECT_THROW(g.sample(200), Error);
    EXPECT_EQ(g.sample(400).size(), 401u);
}

TEST(SineCoefficients, RecoverBandLimitedStates)
{
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<cplx> c(8);
        for (cplx& z : c) z = rng.complex_normal();
        const std::vector<cplx> got = sine_coefficients(sine_series(c, pi).sample(64), pi, 8);
        for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(std::abs(got[i] - c[i]), 0.0, 1e-12);
    }
    EXPECT_THROW(sine_coefficients(std::vector<cplx>(11, 0.0), pi, 8), Error);
}

TEST(Fourier, BumpTransformMatchesClosedForm)
{
    const BoxState bump = bump_state(pi);
    EXPECT_NEAR(std::abs(bump.fourier(0.0) - cplx{4.069473029865593165734839, 0.0}), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(bump.fourier(1.5) - cplx{-1.898397762946589837691999, -1.898397762946589837691999}), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(bump.fourier(7.0) - cplx{0.0, 0.04477786980907537329262356}), 0.0, 1e-13);
}

TEST(Fourier, QuadratureAgreesWithClosedForm)
{
    std::vector<double> xs;
    for (double x = -40.0; x <= 40.0; x += 0.37) xs.push_back(x);
    for (const BoxState& s : {bump_state(pi), sine_state(3, pi), linear_state(1.0, -2.0, pi), parabola_state(2.0)}) {
        const FourierSamples f = fourier_transform(s, xs);
        EXPECT_TRUE(f.bounded) << s.name();
        EXPECT_TRUE(f.continuous) << s.name();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            EXPECT_TRUE(f.ok[i]);
            EXPECT_NEAR(std::abs(f.value[i] - s.fourier(xs[i])), 0.0, 1e-11) << s.name() << " x=" << xs[i];
        }
    }
    const FourierSamples g = fourier_transform(BoxState::from_grid(pi, bump_state(pi).sample(2000)), {0.0, 1.5, 7.0});
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(g.value[i] - bump_state(pi).fourier(g.x[i])), 0.0, 1e-9);
}

TEST(Fourier, SineStateDensity)
{
    const MomentumDensity d = momentum_density(sine_state(1, pi), config());
    EXPECT_NEAR(d.sampler(0.0).real(), 0.40528473456935108578, 1e-14);
    EXPECT_NEAR(d.sampler(2.5).real(), 0.007352104028468953937, 1e-15);
    // Removable singularity at |x| = 1.
    EXPECT_NEAR(d.sampler(1.0).real(), 0.25, 1e-12);
    EXPECT_NEAR(d.tail_exponent, 4.0, 0.1);
    EXPECT_NEAR(momentum_density(linear_state(1.0, 1.0, pi), config()).tail_exponent, 2.0, 0.1);
}

TEST(Fourier, WindowMassMatchesOracle)
{
    const cplx m = momentum_scalar_measure(sine_state(1, pi), sine_state(1, pi), {{-8.0, 8.0}}, config());
    EXPECT_NEAR(m.real(), 0.99972609478337697773, 1e-11);
    const cplx split = momentum_scalar_measure(sine_state(1, pi), sine_state(1, pi), {{-8.0, 0.0}, {0.0, 8.0}}, config());
    EXPECT_NEAR(std::abs(split - m), 0.0, 1e-13);
    EXPECT_THROW(momentum_scalar_measure(sine_state(1, pi), sine_state(1, pi), {{1.0, 0.0}}, config()), Error);
}

TEST(Plancherel, TotalMassIsTheInnerProduct)
{
    const BoxConfig cfg = config();
    const std::vector<BoxState> states{sine_state(1, pi), sine_state(2, pi), bump_state(pi),
                                       linear_state(1.0, cplx{0.0, 1.0}, pi)};
    for (const BoxState& a : states)
        for (const BoxState& b : states) {
            const IntegrationVerdict v = momentum_total(a, b, cfg);
            ASSERT_TRUE(v.converged()) << a.name() << " " << b.name();
            const auto ip = [&](double t) { return std::conj(a(t)) * b(t); };
            const cplx exact = quad::panels(ip, 0.0, pi, pi / 64.0).value;
            EXPECT_NEAR(std::abs(v.value - exact), 0.0, 1e-6 * (1.0 + std::abs(exact))) << a.name() << " " << b.name();
        }
}

TEST(Moments, SineStatesAreVarianceFree)
{
    const BoxConfig cfg = config();
    for (int n = 1; n <= 5; ++n) {
        const BoxState s = sine_state(n, pi);
        const IntegrationVerdict first = moment(s, 1, cfg);
        ASSERT_TRUE(first.converged());
        EXPECT_NEAR(first.value.real(), 0.0, 1e-12); // |F psi_n|^2 is even
        const VarianceFreeResult r = variance_free_check(s, cfg);
        EXPECT_EQ(r.status, Status::Converged);
        EXPECT_TRUE(r.within_tolerance);
        EXPECT_NEAR(r.second_moment, n * n, 1e-4 * n * n);
    }
}

TEST(Moments, SuperpositionsAndPolynomials)
{
    const BoxConfig cfg = config();
    const std::vector<std::pair<BoxState, double>> cases{
        {sine_series({s2, s2}, pi), 2.5},
        {sine_series({s6, 0.0, -2.0 * s6, 0.0, s6}, pi), 10.333333333333333},
        {parabola_state(pi), 10.335425560099940058},
        {bump_state(pi), 57.529394814796039381}};
    for (const auto& [s, expected] : cases) {
        const VarianceFreeResult r = variance_free_check(s, cfg);
        EXPECT_EQ(r.status, Status::Converged) << s.name();
        EXPECT_NEAR(r.derivative_norm_sq, expected, 1e-9 * expected);
        EXPECT_LE(r.relative_defect, 1e-4) << s.name();
    }
}

TEST(Moments, NonVanishingEndpointsDiverge)
{
    const BoxConfig cfg = config();
    const BoxState flat = linear_state(1.0, 1.0, pi);
    EXPECT_THROW(variance_free_check(flat, cfg), Error);
    const IntegrationVerdict mass = moment(flat, 0, cfg);
    ASSERT_TRUE(mass.converged());
    EXPECT_NEAR(mass.value.real(), pi, 1e-5);
    EXPECT_EQ(moment(flat, 2, cfg).status, Status::Divergent);
    EXPECT_EQ(moment(sine_state(1, pi), 4, cfg).status, Status::Divergent);
    EXPECT_EQ(moment(bump_state(pi), 4, cfg).status, Status::Converged);
}

TEST(Operators, FirstPowerApproximatesTheDerivative)
{
    for (int M : {200, 400}) {
        const BoxConfig cfg = config(M);
        const Matrix p = p0_power_matrix(1, cfg);
        ASSERT_EQ(p.rows(), M - 1);
        ASSERT_EQ(p.cols(), M - 1);
        const BoxState s = bump_state(pi);
        const Vector got = p * interior(s.sample(M), 1, M - 1);
        const Vector want = cplx{0.0, -1.0} * interior(s.derived(1).sample(M), 1, M - 1);
        EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 50.0 * cfg.h() * cfg.h());
        EXPECT_EQ(p0_power_matrix(1, cfg, Flavor::Adjoint), Matrix(p.adjoint()));
    }
}

TEST(Operators, SecondPowerOnDirichletNodes)
{
    const BoxConfig cfg = config(400);
    const Matrix p2 = p0_power_matrix(2, cfg);
    EXPECT_EQ(p2.rows(), 399);
    EXPECT_EQ(p2.cols(), 397);
    const BoxState s = bump_state(pi);
    const Vector got = p2 * interior(s.sample(400), 2, 398);
    const Vector want = -interior(s.derived(2).sample(400), 1, 399);
    // Rows at nodes 3..397 see only unknowns; nodes 1, 2 and their mirrors drop phi(h) by construction.
    EXPECT_LE((got - want).segment(2, 395).cwiseAbs().maxCoeff(), 100.0 * cfg.h() * cfg.h());
    EXPECT_NEAR(std::abs(got(0) - want(0)), 2.0 * std::abs(s(cfg.h())) / (cfg.h() * cfg.h()), 0.1);
    EXPECT_THROW(p0_power_matrix(0, cfg), Error);
}

TEST(Operators, TridiagonalIsTheDirichletLaplacian)
{
    const BoxConfig cfg = config(100);
    const Tridiagonal t = p0star_p0_tridiagonal(cfg);
    ASSERT_EQ(t.diag.size(), 99);
    ASSERT_EQ(t.off.size(), 98);
    const double h2 = cfg.h() * cfg.h();
    EXPECT_DOUBLE_EQ(t.diag(0), 2.0 / h2);
    EXPECT_DOUBLE_EQ(t.off(97), -1.0 / h2);
}

TEST(Eigen, FiniteDifferenceSpectrum)
{
    const double oracle[] = {0.99999979438325855527, 3.9999967101329486266, 8.9999833450549014949,
                             15.999947362179129495, 24.999871489790266262};
    const EigenReport r = eigen_p0star_p0(config(), 5);
    ASSERT_EQ(r.eigenvalues.size(), 5u);
    for (std::size_t k = 0; k < 5; ++k) {
        const double n = static_cast<double>(k + 1);
        EXPECT_NEAR(r.eigenvalues[k], oracle[k], 1e-8 * oracle[k]);
        EXPECT_NEAR(r.exact_discrete[k], oracle[k], 1e-10 * oracle[k]);
        EXPECT_NEAR(r.galerkin[k], n * n, 1e-8 * n * n);
        EXPECT_NEAR(r.overlap[k], 1.0, 1e-6);
        EXPECT_NEAR(r.hamiltonian[k], 0.5 * r.eigenvalues[k], 1e-15 * r.eigenvalues[k]);
        EXPECT_LE(std::abs(r.eigenvalues[k] / (n * n) - 1.0), BoxConfig{}.tol_eig);
        if (k > 0) {
            EXPECT_NEAR(r.eigenvalues[k] / r.eigenvalues[0], n * n, 1e-3 * n * n);
        }
    }
    // The printed formula n^2 pi^2 / (2 ell^2) is half the computed eigenvalue.
    EXPECT_TRUE(r.paper_discrepancy);
    EXPECT_NEAR(r.paper_values[0], 0.5, 1e-15);
    EXPECT_THROW(eigen_p0star_p0(config(), 0), Error);
}

TEST(Eigen, ScalesWithTheIntervalLength)
{
    BoxConfig cfg = config();
    cfg.ell = 2.0;
    const EigenReport r = eigen_p0star_p0(cfg, 3);
    for (std::size_t k = 0; k < 3; ++k) {
        const double exact = std::pow((k + 1) * pi / 2.0, 2);
        EXPECT_NEAR(r.eigenvalues[k], exact, 5e-6 * exact);
    }
}

TEST(LemmaA2, FirstDerivativeIdentity)
{
    std::vector<double> xs;
    for (double x = -8.0; x <= 8.0; x += 0.25) xs.push_back(x);
    const IdentityResidual bump = lemma_a2_identity_check(bump_state(pi), xs, 2000);
    EXPECT_LE(bump.sup_residual, 1e-8);
    EXPECT_LE(bump.boundary_term_size, 1e-13);
    const IdentityResidual lin = lemma_a2_identity_check(linear_state(0.0, 1.0, pi), xs, 2000);
    EXPECT_LE(lin.sup_residual, 1e-8);
    EXPECT_GT(lin.boundary_term_size, 0.1);
    const IdentityResidual sine = lemma_a2_identity_check(sine_state(2, pi), xs, 2000, 2);
    EXPECT_LE(sine.sup_residual, 1e-8);
}

TEST(LemmaA2, ResidualIsFourthOrder)
{
    const std::vector<double> xs{0.5, 1.5, 3.0, 6.0};
    const double coarse = lemma_a2_identity_check(sine_state(1, pi), xs, 100).sup_residual;
    const double fine = lemma_a2_identity_check(sine_state(1, pi), xs, 200).sup_residual;
    EXPECT_NEAR(coarse / fine, 16.0, 2.0);
}

TEST(LemmaA2, RejectsBadInputs)
{
    EXPECT_THROW(lemma_a2_identity_check(bump_state(pi), {1.0}, 201), Error);
    EXPECT_THROW(lemma_a2_identity_check(bump_state(pi), {1.0}, 200, 0), Error);
    try {
        lemma_a2_identity_check(linear_state(0.0, 1.0, pi), {1.0}, 200, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DomainViolation);
    }
}

TEST(LemmaA3, ThetaSolvesTheEndpointRelation)
{
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const double ell = rng.uniform(0.5, 4.0);
        const cplx b = std::polar(rng.uniform(0.1, 2.0), rng.uniform(-pi, pi));
        const cplx a = std::polar(std::abs(b), rng.uniform(-pi, pi));
        const double th = lemma_a3_theta(a, b, ell);
        EXPECT_NEAR(std::abs(a + std::exp(cplx{0.0, -th * ell}) * b), 0.0, 1e-12);
    }
    EXPECT_EQ(lemma_a3_theta(1.0, 0.5, pi), 0.0);
    EXPECT_EQ(lemma_a3_theta(1.0, 0.0, pi), 0.0);
    EXPECT_NEAR(std::abs(lemma_a3_theta(1.0, 1.0, pi)), 1.0, 1e-15);
}

TEST(LemmaA3, ConstantStatePartialsMatchOracle)
{
    const A3Result r = lemma_a3_divergence_probe(1.0, 1.0, pi, {100.0, 1000.0, 10000.0});
    ASSERT_TRUE(r.density);
    const double oracle[] = {1.4893236474151678956, 2.2222560535886932475, 2.955191620539121504};
    ASSERT_EQ(r.density->evidence.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.density->evidence[i].partial.real(), oracle[i], 1e-8);
}

TEST(LemmaA3, NonzeroEndpointsDiverge)
{
    const std::vector<double> horizons = doubling_schedule(4, 13);
    ASSERT_EQ(horizons.size(), 10u);
    for (const auto& [a, b] : std::vector<std::pair<cplx, cplx>>{{1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, -1.0}}) {
        const A3Result r = lemma_a3_divergence_probe(a, b, pi, horizons);
        EXPECT_EQ(r.witness.status, Status::Divergent) << a << b;
        EXPECT_EQ(r.density->status, Status::Divergent) << a << b;
        ASSERT_TRUE(r.density->fit);
        // x G(x) averages (|a|^2 + |b|^2) / (2 pi x).
        const double expected = (std::norm(a) + std::norm(b)) / (2.0 * pi);
        EXPECT_NEAR(r.density->fit->slope, expected, 0.1 * expected) << a << b;
    }
    const A3Result zero = lemma_a3_divergence_probe(0.0, 0.0, pi, horizons);
    EXPECT_EQ(zero.witness.status, Status::Converged);
    EXPECT_EQ(zero.density->status, Status::Converged);
}

TEST(BoundaryDetector, AnalyticFamilies)
{
    for (int m = 1; m <= 4; ++m) {
        EXPECT_EQ(boundary_domain_detector(sine_state(m, pi), 1), BoundaryDomain::InDomPprime2n);
        EXPECT_EQ(boundary_domain_detector(sine_state(m, pi), 2), BoundaryDomain::Neither);
    }
    EXPECT_EQ(boundary_domain_detector(parabola_state(pi), 1), BoundaryDomain::InDomPprime2n);
    EXPECT_EQ(boundary_domain_detector(bump_state(pi), 1), BoundaryDomain::InDomP2n);
    EXPECT_EQ(boundary_domain_detector(bump_state(pi), 2), BoundaryDomain::InDomPprime2n);
    EXPECT_EQ(boundary_domain_detector(linear_state(1.0, 1.0, pi), 1), BoundaryDomain::Neither);
    EXPECT_EQ(boundary_domain_detector(linear_state(0.0, 1.0, pi), 1), BoundaryDomain::Neither);
    EXPECT_EQ(boundary_domain_detector(linear_state(0.0, 0.0, pi), 3), BoundaryDomain::InDomP2n);
}

TEST(BoundaryDetector, InclusionHolds)
{
    // Membership at order n forces full membership at order n - 1.
    const std::vector<BoxState> states{sine_state(1, pi), parabola_state(pi), bump_state(pi),
                                       linear_state(1.0, 0.0, pi), sine_series({s2, s2}, pi)};
    for (const BoxState& s : states)
        for (int n = 1; n <= 3; ++n) {
            const BoundaryDomain d = boundary_domain_detector(s, n);
            if (d == BoundaryDomain::InDomP2n) {
                EXPECT_NE(boundary_domain_detector(s, 1), BoundaryDomain::Neither);
            }
            if (n > 1 && d != BoundaryDomain::Neither) {
                EXPECT_EQ(boundary_domain_detector(s, n - 1), BoundaryDomain::InDomP2n) << s.name() << n;
            }
        }
}

TEST(BoundaryDetector, GridStates)
{
    const BoxState bump = BoxState::from_grid(pi, bump_state(pi).sample(2000));
    const BoxState sine = BoxState::from_grid(pi, sine_state(1, pi).sample(2000));
    const BoxState flat = BoxState::from_grid(pi, linear_state(1.0, 1.0, pi).sample(2000));
    EXPECT_EQ(boundary_domain_detector(bump, 1), BoundaryDomain::InDomP2n);
    EXPECT_EQ(boundary_domain_detector(sine, 1), BoundaryDomain::InDomPprime2n);
    EXPECT_EQ(boundary_domain_detector(flat, 1), BoundaryDomain::Neither);
    EXPECT_FALSE(bump.boundary(1).analytic);
}

TEST(BoundaryDetector, RejectsMissingData)
{
    try {
        boundary_domain_detector(bump_state(pi).boundary(0), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientBoundaryData);
    }
    EXPECT_THROW(boundary_domain_detector(bump_state(pi), 0), Error);
    EXPECT_THROW(bump_state(pi).boundary(-1), Error);
}

TEST(RangeStability, ZeroExtensionOfVanishingStates)
{
    const RangeStability bump = range_stability_check(bump_state(pi), 2000, 1.0);
    EXPECT_LE(bump.outside_mass, 1e-9);
    EXPECT_LE(bump.inside_error, 1e-4);
    EXPECT_LE(bump.boundary_value, 1e-13);
    const RangeStability a = range_stability_check(linear_state(1.0, 1.0, pi), 1000, 1.0);
    const RangeStability b = range_stability_check(linear_state(1.0, 1.0, pi), 2000, 1.0);
    EXPECT_NEAR(b.outside_mass / a.outside_mass, 2.0, 1e-9);
    EXPECT_NEAR(a.boundary_value, 1.0, 1e-15);
}
