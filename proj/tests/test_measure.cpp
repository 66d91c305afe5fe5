#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "opint/measure.hpp"
#include "opint/povm.hpp"
#include "opint/quadrature.hpp"

using namespace opint;

namespace {

// Frozen reference values (tests/oracles/generate.py).
constexpr double zeta2 = 1.6449340668482264365;
constexpr double zeta3 = 1.2020569031595942854;
constexpr double psi1_density_at_0 = 0.40528473456935108578;
constexpr double psi1_density_at_2p5 = 0.007352104028468953937;
constexpr double psi1_mass_window8 = 0.99972609478337697773;
constexpr double psi1_second_window8 = 0.94863674833866308289;
constexpr double xG_T100 = 1.4893236474151678956;
constexpr double xG_T1000 = 2.2222560535886932475;
constexpr double xG_T10000 = 2.955191620539121504;

const ScalarFunction one = [](double) { return cplx{1.0, 0.0}; };
const ScalarFunction ident = [](double x) { return cplx{x, 0.0}; };

ScalarFunction power(int k)
{
    return [k](double x) { return cplx{std::pow(x, k), 0.0}; };
}

// |F psi_1|^2 for psi_1 = sqrt(2/pi) sin t on [0, pi].
cplx psi1_density(double x)
{
    const double d = 1.0 - x * x;
    if (std::abs(d) < 1e-6) return 0.25;
    return 2.0 * (1.0 + std::cos(pi * x)) / (pi * pi * d * d);
}

// |F phi_{1,1}|^2 on [0, pi]: (1 - cos(pi x)) / (pi x^2).
cplx constant_state_density(double x)
{
    if (std::abs(x) < 1e-6) return pi / 2.0;
    return (1.0 - std::cos(pi * x)) / (pi * x * x);
}

DensityMeasure psi1_measure()
{
    DensityMeasure m;
    m.density = psi1_density;
    m.policy.x_max = 64.0;
    m.policy.doublings = 3;
    m.policy.panel_width = 0.5;
    m.policy.tail_model = true;
    m.policy.tail_period = 2.0;
    return m;
}

AtomicSequence inverse_powers(double p, std::size_t n_max = 1u << 20)
{
    AtomicSequence s;
    s.block = [p](std::size_t n) { return AtomicMeasure::point_mass(static_cast<double>(n + 1), std::pow(n + 1.0, -p)); };
    s.first_horizon = 64;
    s.n_max = n_max;
    return s;
}

void expect_status_contract(const IntegrationVerdict& v, const Tolerances& tol, double conv_tol)
{
    if (v.converged() && v.evidence.size() >= 2 && !v.extrapolated) {
        const cplx a = v.evidence.back().partial;
        const cplx b = v.evidence[v.evidence.size() - 2].partial;
        EXPECT_LE(std::abs(a - b), conv_tol * std::max({std::abs(a), std::abs(b), 1e-300}) + 1e-15);
    }
    if (v.divergent()) {
        ASSERT_TRUE(v.fit.has_value());
        EXPECT_GT(v.fit->slope, 0.0);
        EXPECT_GT(v.fit->slope, tol.divergence_margin * v.fit->residual);
    }
}

} // namespace

TEST(AtomicIntegration, NormalizedWeightsIntegrateOneToOne)
{
    const auto mu = AtomicMeasure::positive({0.0, 1.0, 2.0}, {0.2, 0.3, 0.5});
    const IntegrationVerdict v = integrate(one, mu);
    EXPECT_EQ(v.status, Status::Converged);
    EXPECT_NEAR(v.value.real(), 1.0, 1e-15);
    EXPECT_EQ(v.value.imag(), 0.0);
}

TEST(AtomicIntegration, FiniteSumIsExact)
{
    const AtomicMeasure mu({-1.0, 0.5, 3.0}, {cplx{0.0, 1.0}, -1.0, 0.5});
    const IntegrationVerdict v = integrate(power(2), mu);
    const cplx expected = 1.0 * cplx{0.0, 1.0} + 0.25 * -1.0 + 9.0 * 0.5;
    EXPECT_EQ(v.value, expected);
}

TEST(AtomicIntegration, RejectsBadInput)
{
    EXPECT_THROW(AtomicMeasure({0.0, 1.0}, {1.0}), Error);
    try {
        AtomicMeasure({0.0}, {cplx{std::nan(""), 0.0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonEvaluable);
    }
    try {
        AtomicMeasure::positive({0.0, 1.0}, {0.5, -0.1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPositive);
    }
}

TEST(AtomicIntegration, NonFiniteIntegrandIsReported)
{
    const auto mu = AtomicMeasure::positive({0.0, 1.0}, {0.5, 0.5});
    const ScalarFunction inv = [](double x) { return cplx{1.0 / x, 0.0}; };
    try {
        integrate(inv, mu);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonEvaluable);
    }
    // A zero weight masks the bad node.
    const auto masked = AtomicMeasure::positive({0.0, 1.0}, {0.0, 1.0});
    EXPECT_NEAR(integrate(inv, masked).value.real(), 1.0, 0.0);
}

TEST(TotalVariation, TakesModulusAtomwise)
{
    const AtomicMeasure mu({0.0, 1.0, 2.0}, {cplx{0.0, 1.0}, -1.0, 0.5});
    const AtomicMeasure tv = total_variation(mu);
    ASSERT_EQ(tv.size(), 3u);
    EXPECT_EQ(tv.weights[0], cplx(1.0, 0.0));
    EXPECT_EQ(tv.weights[1], cplx(1.0, 0.0));
    EXPECT_EQ(tv.weights[2], cplx(0.5, 0.0));
    EXPECT_DOUBLE_EQ(tv.total().real(), mu.variation_mass());
}

TEST(TotalVariation, PositiveMeasureIsFixed)
{
    const auto mu = AtomicMeasure::positive({0.0, 1.0, 4.0}, {0.1, 0.0, 2.5});
    const AtomicMeasure tv = total_variation(mu);
    EXPECT_EQ(tv.weights, mu.weights);
    EXPECT_EQ(tv.locations, mu.locations);
}

TEST(TotalVariation, MatchesBruteForceOnQubitPovm)
{
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const DiscretePovm e = DiscretePovm::random(2, 3, rng);
        const Vector psi = rng.vector(2);
        const Vector phi = rng.vector(2);
        double brute = 0.0;
        for (const Effect& eff : e.effects()) brute += std::abs(psi.dot(eff.matrix() * phi));
        EXPECT_NEAR(total_variation(scalar_measure(e, psi, phi)).total().real(), brute, 1e-12 * (1.0 + brute));
    }
}

TEST(TotalVariation, ComplexDensityBecomesModulus)
{
    DensityMeasure m;
    m.density = [](double x) { return std::exp(cplx{0.0, x}) * std::exp(-x * x); };
    const DensityMeasure tv = total_variation(m);
    for (double x : {-2.0, 0.0, 0.7, 3.0}) {
        EXPECT_NEAR(tv.density(x).real(), std::exp(-x * x), 1e-15);
        EXPECT_EQ(tv.density(x).imag(), 0.0);
    }
}

TEST(AtomicSeries, InverseSquaresConverge)
{
    const IntegrationVerdict v = integrate(one, ComplexMeasure{inverse_powers(2.0)});
    EXPECT_EQ(v.status, Status::Converged);
    EXPECT_NEAR(v.value.real(), zeta2, 1e-7);
    expect_status_contract(v, {}, Tolerances{}.conv_atomic);
}

TEST(AtomicSeries, InverseCubesConverge)
{
    const IntegrationVerdict v = integrate(one, ComplexMeasure{inverse_powers(3.0)});
    EXPECT_EQ(v.status, Status::Converged);
    EXPECT_NEAR(v.value.real(), zeta3, 1e-8);
}

TEST(AtomicSeries, HarmonicSeriesDiverges)
{
    const Tolerances tol;
    const IntegrationVerdict v = integrate(one, ComplexMeasure{inverse_powers(1.0)}, tol);
    EXPECT_EQ(v.status, Status::Divergent);
    ASSERT_TRUE(v.fit.has_value());
    // Partial sums grow like log N: unit slope against log N.
    EXPECT_NEAR(v.fit->slope, 1.0, 0.05);
    expect_status_contract(v, tol, tol.conv_atomic);
}

TEST(AtomicSeries, SlowSeriesIsNeverDeclaredConverged)
{
    // sum n^{-1.05} converges too slowly to settle before n_max, and grows too slowly to diverge.
    const IntegrationVerdict v = integrate(one, ComplexMeasure{inverse_powers(1.05, 4096)});
    EXPECT_NE(v.status, Status::Converged);
    EXPECT_FALSE(v.evidence.empty());
}

TEST(AtomicSeries, FiniteLengthIsExact)
{
    AtomicSequence s = inverse_powers(1.0);
    s.finite_length = 10;
    const IntegrationVerdict v = integrate(one, ComplexMeasure{s});
    EXPECT_EQ(v.status, Status::Converged);
    double h10 = 0.0;
    for (int n = 1; n <= 10; ++n) h10 += 1.0 / n;
    EXPECT_NEAR(v.value.real(), h10, 1e-14);
}

TEST(Quadrature, WindowIntegralsMatchReference)
{
    const auto mass = quad::panels(psi1_density, -8.0, 8.0, 0.5);
    const auto second = quad::panels([](double x) { return x * x * psi1_density(x); }, -8.0, 8.0, 0.5);
    EXPECT_NEAR(mass.value.real(), psi1_mass_window8, 1e-12);
    EXPECT_NEAR(second.value.real(), psi1_second_window8, 1e-12);
    EXPECT_NEAR(psi1_density(0.0).real(), psi1_density_at_0, 1e-15);
    EXPECT_NEAR(psi1_density(2.5).real(), psi1_density_at_2p5, 1e-15);
}

TEST(Quadrature, SimpsonIsExactForCubics)
{
    std::vector<cplx> s;
    const int m = 10;
    for (int j = 0; j <= m; ++j) {
        const double t = 2.0 * j / m;
        s.emplace_back(t * t * t - t, t);
    }
    const cplx v = quad::simpson(s, 2.0 / m);
    EXPECT_NEAR(v.real(), 2.0, 1e-13);
    EXPECT_NEAR(v.imag(), 2.0, 1e-13);
    EXPECT_THROW(quad::simpson(std::vector<cplx>(4), 0.1), Error);
}

TEST(DensityIntegration, MomentumDensityOfGroundStateHasUnitMass)
{
    const IntegrationVerdict v = integrate(one, ComplexMeasure{psi1_measure()});
    EXPECT_EQ(v.status, Status::Converged);
    EXPECT_NEAR(v.value.real(), 1.0, 1e-6);
    expect_status_contract(v, {}, psi1_measure().policy.tol_conv);
}

TEST(DensityIntegration, FirstMomentOfRealStateVanishes)
{
    const IntegrationVerdict v = integrate(ident, ComplexMeasure{psi1_measure()});
    EXPECT_EQ(v.status, Status::Converged);
    EXPECT_NEAR(std::abs(v.value), 0.0, 1e-12);
}

TEST(DensityIntegration, SecondMomentEqualsDerivativeNorm)
{
    const IntegrationVerdict v = integrability_test(power(2), ComplexMeasure{psi1_measure()});
    EXPECT_EQ(v.status, Status::Converged);
    EXPECT_NEAR(v.value.real(), 1.0, 1e-3);
    // x^2 |F psi_1|^2 decays like x^{-2}.
    EXPECT_NEAR(v.tail_exponent, 2.0, 0.1);
}

TEST(DensityIntegration, FourthMomentDiverges)
{
    const Tolerances tol;
    const IntegrationVerdict v = integrate(power(4), ComplexMeasure{psi1_measure()}, tol);
    EXPECT_EQ(v.status, Status::Divergent);
    expect_status_contract(v, tol, psi1_measure().policy.tol_conv);
}

TEST(DensityIntegration, ZeroDensityIsTriviallyIntegrable)
{
    DensityMeasure m;
    m.density = [](double) { return cplx{}; };
    m.policy.x_max = 32.0;
    const IntegrationVerdict v = integrability_test(ident, ComplexMeasure{m});
    EXPECT_EQ(v.status, Status::Converged);
    EXPECT_EQ(v.value, cplx{});
}

TEST(DensityIntegration, ConstantStateFirstMomentDivergesLogarithmically)
{
    DensityMeasure m;
    m.density = constant_state_density;
    m.policy.horizons = {100.0, 1000.0, 10000.0};
    m.policy.symmetric = false;
    m.policy.lower = 1.0;
    m.policy.panel_width = 0.5;
    const IntegrationVerdict v = integrate(ident, m);
    ASSERT_EQ(v.evidence.size(), 3u);
    EXPECT_NEAR(v.evidence[0].partial.real(), xG_T100, 1e-9);
    EXPECT_NEAR(v.evidence[1].partial.real(), xG_T1000, 1e-9);
    EXPECT_NEAR(v.evidence[2].partial.real(), xG_T10000, 1e-9);
    // Three horizons are too few for a verdict; a doubling schedule decides.
    m.policy.horizons = {64, 128, 256, 512, 1024, 2048, 4096, 8192};
    const IntegrationVerdict w = integrate(ident, m);
    EXPECT_EQ(w.status, Status::Divergent);
    ASSERT_TRUE(w.fit.has_value());
    EXPECT_NEAR(w.fit->slope, 1.0 / pi, 0.1 / pi);
}

TEST(DensityIntegration, NonFiniteDensityIsReported)
{
    DensityMeasure m;
    m.density = [](double x) { return cplx{x > 3.0 ? std::nan("") : 1.0, 0.0}; };
    m.policy.x_max = 8.0;
    EXPECT_THROW(integrate(one, m), Error);
}

TEST(Evidence, CsvListsEveryHorizon)
{
    const IntegrationVerdict v = integrate(one, ComplexMeasure{inverse_powers(2.0)});
    std::ostringstream os;
    write_evidence_csv(os, v);
    const std::string csv = os.str();
    EXPECT_EQ(csv.rfind("horizon,partial_real,partial_imag\n", 0), 0u);
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), v.evidence.size() + 1);
}

TEST(Evidence, StatusContractHoldsOnRandomSeries)
{
    Rng rng(5);
    const Tolerances tol;
    for (int trial = 0; trial < 12; ++trial) {
        const double p = rng.uniform(0.8, 3.0);
        const IntegrationVerdict v = integrate(one, ComplexMeasure{inverse_powers(p, 1u << 16)}, tol);
        expect_status_contract(v, tol, tol.conv_atomic);
        if (p >= 2.0) { EXPECT_TRUE(v.converged()) << "p = " << p; }
        if (p <= 1.0) { EXPECT_FALSE(v.converged()) << "p = " << p; }
    }
}
