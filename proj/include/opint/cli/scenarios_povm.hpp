#pragma once

// Scenarios on finite and structured POVMs: dilations, spectral coincidence,
// the scalar POVM mu*I, the diagonal family, the inclusion chain and the form
// machinery.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "opint/certificates.hpp"
#include "opint/cli/config.hpp"
#include "opint/cli/report.hpp"
#include "opint/form_measure.hpp"
#include "opint/forms.hpp"
#include "opint/linalg.hpp"
#include "opint/naimark.hpp"
#include "opint/operator_integrals.hpp"
#include "opint/povm.hpp"

namespace opint::cli {

namespace detail {

inline ScalarFunction power(int k)
{
    return [k](double x) { return cplx{std::pow(x, k), 0.0}; };
}

inline std::vector<double> random_locations(Rng& rng, std::size_t k, double half_width)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(rng.uniform(-half_width, half_width));
    return out;
}

inline DiscretePovm random_povm(Rng& rng, int max_dim, int max_outcomes, double half_width = 3.0)
{
    const auto d = static_cast<std::size_t>(rng.uniform_int(2, max_dim));
    const auto k = static_cast<std::size_t>(rng.uniform_int(2, max_outcomes));
    std::vector<double> locs = random_locations(rng, k, half_width);
    return DiscretePovm::random(d, k, rng, std::move(locs));
}

/// Orthonormal columns spanning a random m-dimensional subspace.
inline Matrix random_frame(Rng& rng, Eigen::Index d, Eigen::Index m)
{
    const Matrix g = rng.gaussian(d, m);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(d, m);
}

inline double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

} // namespace detail

inline std::vector<ParamSpec> naimark_params()
{
    return {{"count", ParamType::Int, "50", "number of random POVMs"},
            {"max_dim", ParamType::Int, "6", "largest model dimension"},
            {"max_outcomes", ParamType::Int, "8", "largest outcome count"},
            {"bound", ParamType::Real, "1e-10", "defect bound"}};
}

inline void run_naimark(const Params& p, std::uint64_t seed, const Tolerances&, RunReport& r)
{
    Rng rng(seed);
    const double bound = p.real("bound");
    double iso = 0, comp = 0, orth = 0, resol = 0, integ = 0;
    long long rank_mismatch = 0;
    Table& t = r.table("dilations", {"trial", "dim", "outcomes", "dilation_dim", "rank_sum", "isometry", "compression",
                                     "orthogonality", "integral_1", "integral_x", "integral_x2"});
    for (long long i = 0; i < p.integer("count"); ++i) {
        const DiscretePovm e = detail::random_povm(rng, static_cast<int>(p.integer("max_dim")),
                                                   static_cast<int>(p.integer("max_outcomes")));
        const NaimarkDilation dil = naimark_dilate(e);
        const DilationReport rep = verify_dilation(e, dil);
        std::size_t rank_sum = 0;
        for (const Effect& eff : e.effects()) rank_sum += numerical_rank(eff.matrix());
        if (rank_sum != dil.dilation_dim) ++rank_mismatch;
        double defects[3];
        for (int k = 0; k < 3; ++k) defects[k] = dilation_integral_check(detail::power(k), e, dil);
        iso = std::max(iso, rep.isometry_defect);
        comp = std::max(comp, rep.compression_defect);
        orth = std::max(orth, rep.orthogonality_defect);
        resol = std::max(resol, rep.resolution_defect);
        integ = std::max({integ, defects[0], defects[1], defects[2]});
        t.add(i, e.dim(), e.size(), dil.dilation_dim, rank_sum, rep.isometry_defect, rep.compression_defect,
              rep.orthogonality_defect, defects[0], defects[1], defects[2]);
    }
    r.le("naimark.isometry", 1, iso, bound, "max ||V*V - I||");
    r.le("naimark.compression", 1, comp, bound, "max_i ||V*F_iV - E_i||");
    r.le("naimark.orthogonality", 1, orth, bound, "max ||F_iF_j - delta_ij F_i||");
    r.le("naimark.resolution", 0, resol, bound, "||sum F_i - I||");
    r.le("naimark.rank_sum_mismatches", 1, static_cast<double>(rank_mismatch), 0.0, "dilation_dim = sum rank(E_i)");
    r.le("naimark.integral_defect", 1, integ, bound, "||int f dE - V*(int f dF)V||, f in {1, x, x^2}");
}

inline std::vector<ParamSpec> pvm_params()
{
    return {{"count", ParamType::Int, "20", "random Hermitian matrices"},
            {"dim", ParamType::Int, "6", "matrix size"},
            {"diagonal_size", ParamType::Int, "50", "truncation of the diagonal spectral family"},
            {"bound", ParamType::Real, "1e-10", "agreement bound"}};
}

inline void run_pvm_coincidence(const Params& p, std::uint64_t seed, const Tolerances& tol, RunReport& r)
{
    Rng rng(seed);
    const auto d = static_cast<Eigen::Index>(p.integer("dim"));
    const double bound = p.real("bound");
    const ScalarFunction x = detail::power(1);
    double pair = 0, spectral = 0, variance = 0;
    long long short_domains = 0;
    Table& t = r.table("coincidence", {"trial", "atoms", "tilde_strong", "strong_maxweak", "tilde_maxweak",
                                       "tilde_vs_matrix", "variance_form"});
    for (long long i = 0; i < p.integer("count"); ++i) {
        const Matrix h = rng.hermitian(d);
        const OperatorMeasure e = DiscretePovm::spectral(h);
        const OperatorIntegral ti = tilde_integral(x, e, tol);
        const OperatorIntegral st = strong_integral(x, e, tol);
        const OperatorIntegral mw = max_weak_sym_integral(x, e, tol);
        if (ti.certified.size() != static_cast<std::size_t>(d) || st.certified.size() != static_cast<std::size_t>(d) ||
            mw.certified.size() != static_cast<std::size_t>(d))
            ++short_domains;
        const double a = opnorm(ti.compressed() - st.compressed());
        const double b = opnorm(st.compressed() - mw.compressed());
        const double c = opnorm(ti.compressed() - mw.compressed());
        const double s = opnorm(ti.compressed() - h);
        const Vector psi = rng.unit_vector(d);
        const Vector phi = rng.unit_vector(d);
        const double v = std::abs(variance_form(e, psi, phi, tol));
        pair = std::max({pair, a, b, c});
        spectral = std::max(spectral, s);
        variance = std::max(variance, v);
        t.add(i, std::get<DiscretePovm>(e).size(), a, b, c, s, v);
    }
    r.le("pvm.pairwise", 2, pair, bound, "Tilde/Strong/MaxWeakSym pairwise operator-norm difference");
    r.le("pvm.variance_form", 2, variance, bound, "|variance form| on random unit pairs");
    r.le("pvm.uncertified_columns", 2, static_cast<double>(short_domains), 0.0, "every basis vector certified by all kinds");
    r.le("pvm.spectral_matrix", 0, spectral, bound, "Tilde integral of x reproduces the matrix");

    // A truncated spectral family: mu_m = delta_m.
    const auto n = static_cast<std::size_t>(p.integer("diagonal_size"));
    const OperatorMeasure diag = FormMeasure::diagonal(
        ModelSpace(n), [](std::size_t m) { return ComplexMeasure(AtomicMeasure({static_cast<double>(m)}, {1.0})); }, n);
    const Matrix dt = tilde_integral(x, diag, tol).compressed();
    const Matrix ds = strong_integral(x, diag, tol).compressed();
    const Matrix dw = max_weak_sym_integral(x, diag, tol).compressed();
    r.le("pvm.diagonal_family", 2, std::max({detail::max_abs(dt - ds), detail::max_abs(ds - dw), detail::max_abs(dt - dw)}),
         bound, "truncated diagonal spectral family");
}

inline std::vector<ParamSpec> trivial_params()
{
    return {{"dim", ParamType::Int, "4", "model dimension"},
            {"atoms", ParamType::Int, "6", "atoms of mu"},
            {"probes", ParamType::Int, "10", "random vectors for the non-integrable case"},
            {"bound", ParamType::Real, "1e-12", "agreement bound for atomic mu"}};
}

inline void run_trivial_povm(const Params& p, std::uint64_t seed, const Tolerances& tol, RunReport& r)
{
    Rng rng(seed);
    const auto d = static_cast<std::size_t>(p.integer("dim"));
    const auto di = static_cast<Eigen::Index>(d);
    const auto k = static_cast<std::size_t>(p.integer("atoms"));
    const double bound = p.real("bound");

    std::vector<double> locs = detail::random_locations(rng, k, 3.0);
    std::vector<double> raw;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += raw.emplace_back(rng.uniform(0.1, 1.0));
    std::vector<cplx> weights;
    for (double w : raw) weights.emplace_back(w / total, 0.0);
    const OperatorMeasure e = ScalarIdentityPovm{AtomicMeasure(locs, weights), d};

    struct Named {
        std::string name;
        ScalarFunction f;
    };
    const std::vector<Named> fs{
        {"x", detail::power(1)},
        {"x2", detail::power(2)},
        {"osc", [](double x) { return cplx{std::cos(x), std::sin(2.0 * x)}; }},
    };
    Table& t = r.table("atomic", {"f", "expected_re", "expected_im", "tilde", "strong", "maxweak", "weaksym"});
    double worst = 0.0;
    for (const Named& nf : fs) {
        long double re = 0.0L, im = 0.0L;
        for (std::size_t i = 0; i < k; ++i) {
            const cplx v = nf.f(locs[i]) * weights[i];
            re += v.real();
            im += v.imag();
        }
        const cplx c{static_cast<double>(re), static_cast<double>(im)};
        const Matrix ci = c * Matrix::Identity(di, di);
        const double a = detail::max_abs(tilde_integral(nf.f, e, tol).compressed() - ci);
        const double b = detail::max_abs(strong_integral(nf.f, e, tol).compressed() - ci);
        const double w = detail::max_abs(max_weak_sym_integral(nf.f, e, tol).compressed() - ci);
        const Matrix frame = detail::random_frame(rng, di, 2);
        const OperatorIntegral ws = weak_sym_integral(nf.f, e, frame, tol);
        const double s = ws.certified.size() == 2 ? detail::max_abs(ws.matrix - c * frame) : 1.0;
        worst = std::max({worst, a, b, w, s});
        t.add(nf.name, c.real(), c.imag(), a, b, w, s);
    }
    r.le("trivial.atomic_weak_integrals", 3, worst, bound, "all weak integrals equal (int f dmu) I");

    // mu_n = (6/pi^2) / n^2 at n: f = x is not mu-integrable.
    AtomicSequence heavy;
    heavy.block = [](std::size_t n) {
        const double m = static_cast<double>(n + 1);
        return AtomicMeasure({m}, {6.0 / (pi * pi * m * m)});
    };
    const OperatorMeasure eh = ScalarIdentityPovm{heavy, d};
    long long nonmembers = 0, form_nonmembers = 0;
    const auto probes = p.integer("probes");
    Table& h = r.table("non-integrable", {"probe", "sq_verdict", "form_verdict"});
    for (long long i = 0; i < probes; ++i) {
        const Vector phi = rng.vector(di);
        const DomainCertificate sq = sq_domain_member(detail::power(1), eh, phi, "phi" + std::to_string(i), tol);
        const DomainCertificate fd = form_domain_member(detail::power(1), eh, phi, "phi" + std::to_string(i), tol);
        nonmembers += sq.verdict == Verdict::NonMember;
        form_nonmembers += fd.verdict == Verdict::NonMember;
        h.add(i, to_string(sq.verdict), to_string(fd.verdict));
    }
    r.ge("trivial.sq_nonmembers", 3, static_cast<double>(nonmembers), static_cast<double>(probes),
         "sq-domain NonMember for every probe");
    r.ge("trivial.form_nonmembers", 0, static_cast<double>(form_nonmembers), static_cast<double>(probes),
         "form-domain NonMember for every probe");

    // mu_n = n^-3 / zeta(3): f = x integrable, |f|^2 not. The square-integrability
    // domain collapses to {0} while the weak integral is total.
    constexpr double zeta3 = 1.2020569031595942854;
    AtomicSequence light;
    light.block = [](std::size_t n) {
        const double m = static_cast<double>(n + 1);
        return AtomicMeasure({m}, {1.0 / (zeta3 * m * m * m)});
    };
    const OperatorMeasure el = ScalarIdentityPovm{light, d};
    const Vector phi = rng.vector(di);
    const DomainCertificate sq = sq_domain_member(detail::power(1), el, phi, "phi", tol);
    r.truth("trivial.collapse_sq_nonmember", 0, sq.verdict == Verdict::NonMember, "int |x|^2 dmu diverges");
    const OperatorIntegral mw = max_weak_sym_integral(detail::power(1), el, tol);
    const double expected = pi * pi / 6.0 / zeta3;
    const double err = mw.certified.size() == d
                           ? detail::max_abs(mw.compressed() - expected * Matrix::Identity(di, di)) / expected
                           : 1.0;
    r.le("trivial.collapse_weak_total", 0, err, 1e-6, "MaxWeakSym = zeta(2)/zeta(3) I on the whole basis");
}

inline std::vector<ParamSpec> diagonal_params()
{
    return {{"sizes", ParamType::RealList, "10,100,1000", "truncation sizes N"},
            {"gap_size", ParamType::Int, "64", "truncation for the strong/weak gap example"},
            {"bound", ParamType::Real, "1e-12", "bounded-case norm slack"}};
}

inline void run_diagonal_povm(const Params& p, std::uint64_t seed, const Tolerances& tol, RunReport& r)
{
    const ScalarFunction x = detail::power(1);
    const ScalarFunction inv = [](double t) { return cplx{1.0 / (t + 1.0), 0.0}; };
    std::vector<double> norms;
    double exact = 0.0, bounded = 0.0;
    Table& t = r.table("norms", {"N", "unbounded_norm", "bounded_norm", "atom_defect"});
    for (double nd : p.reals("sizes")) {
        const auto n = static_cast<std::size_t>(nd);
        const OperatorMeasure e = FormMeasure::diagonal(
            ModelSpace(n), [](std::size_t m) { return ComplexMeasure(AtomicMeasure({static_cast<double>(m)}, {1.0})); },
            n);
        const OperatorIntegral wu = max_weak_sym_integral(x, e, tol);
        const OperatorIntegral wb = max_weak_sym_integral(inv, e, tol);
        Matrix expect = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t m = 0; m < n; ++m) expect(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) = static_cast<double>(m);
        const double defect = wu.certified.size() == n ? detail::max_abs(wu.compressed() - expect) : 1.0;
        exact = std::max(exact, defect);
        norms.push_back(opnorm(wu.compressed()));
        const double nb = opnorm(wb.compressed());
        bounded = std::max(bounded, nb);
        t.add(n, norms.back(), nb, defect);
    }
    r.le("diagonal.atom_action", 4, exact, 0.0, "L'phi_m = f_m phi_m exactly");
    bool monotone = true;
    for (std::size_t i = 1; i < norms.size(); ++i) monotone = monotone && norms[i] > norms[i - 1];
    r.truth("diagonal.unbounded_monotone", 4, monotone && norms.size() >= 2, "norm increases with N for f_m = m");
    const std::vector<double> sizes = p.reals("sizes");
    double slope = 0.0;
    if (norms.size() >= 2 && norms.front() > 0.0)
        slope = std::log(norms.back() / norms.front()) / std::log(sizes.back() / sizes.front());
    r.ge("diagonal.unbounded_growth", 4, slope, 0.5, "log-log growth of the norm in N");
    r.le("diagonal.bounded_norm", 4, bounded, 1.0 + p.real("bound"), "f_m = 1/(m+1)");

    // mu_m = (1+1/m)/2 delta_{m^2} + (1-1/m)/2 delta_{-m^2}: f_m = m but int |x| dmu_m = m^2.
    // phi_m = 1/m^2 lies in dom L' while its strong tails stay bounded away from zero.
    const auto g = static_cast<std::size_t>(p.integer("gap_size"));
    const OperatorMeasure gap = FormMeasure::diagonal(
        ModelSpace(g),
        [](std::size_t n) {
            const double m = static_cast<double>(n + 1);
            return ComplexMeasure(AtomicMeasure({m * m, -m * m}, {0.5 * (1.0 + 1.0 / m), 0.5 * (1.0 - 1.0 / m)}));
        },
        g);
    const Coefficients phi = Coefficients::sequence(
        [](std::size_t n) {
            const double m = static_cast<double>(n + 1);
            return cplx{1.0 / (m * m), 0.0};
        },
        g);
    const Matrix ds = Matrix::Identity(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(g));
    const std::vector<double> thresholds{1, 4, 16, 64, 256, 1024};
    const GapReport rep = strong_weak_gap_probe(x, gap, ds, phi, thresholds, seed, 8, tol);
    Table& gt = r.table("gap", {"threshold", "sup_estimate"});
    for (const GapRow& row : rep.rows) gt.add(row.threshold, row.sup_estimate);
    r.truth("diagonal.gap_tail_persists", 0, !rep.tail_vanishes, "strong tails of phi_m = 1/m^2 do not vanish");
}

inline std::vector<ParamSpec> chain_params()
{
    return {{"povms", ParamType::Int, "30", "random POVMs for the inclusion chain"},
            {"vectors", ParamType::Int, "5", "random vectors per POVM for the norm inequality"},
            {"max_dim", ParamType::Int, "6", "largest model dimension"},
            {"max_outcomes", ParamType::Int, "8", "largest outcome count"},
            {"bound", ParamType::Real, "1e-10", "agreement bound"}};
}

inline void run_inclusion_chain(const Params& p, std::uint64_t seed, const Tolerances& tol, RunReport& r)
{
    Rng rng(seed);
    const ScalarFunction x = detail::power(1);
    const ScalarFunction x2 = detail::power(2);
    const double bound = p.real("bound");
    bool chain = true;
    double mismatch = 0.0, excess = -std::numeric_limits<double>::infinity(), dilation = 0.0;
    Table& t = r.table("chain", {"povm", "dim", "outcomes", "chain_ok", "max_mismatch", "worst_inequality_gap", "dilation_defect"});
    for (long long i = 0; i < p.integer("povms"); ++i) {
        const DiscretePovm povm = detail::random_povm(rng, static_cast<int>(p.integer("max_dim")),
                                                      static_cast<int>(p.integer("max_outcomes")));
        const OperatorMeasure e = povm;
        const MomentOperators mo = moment_operators(e, 1, tol);
        chain = chain && mo.chain_ok;
        mismatch = std::max(mismatch, mo.max_mismatch);
        const NaimarkDilation dil = naimark_dilate(povm);
        const Matrix basis = Matrix::Identity(static_cast<Eigen::Index>(povm.dim()), static_cast<Eigen::Index>(povm.dim()));
        const double dd = opnorm(tilde_via_dilation(x, povm, dil, basis) - mo.tilde.compressed());
        dilation = std::max(dilation, dd);
        double worst = -std::numeric_limits<double>::infinity();
        for (long long j = 0; j < p.integer("vectors"); ++j) {
            const Vector phi = rng.unit_vector(static_cast<Eigen::Index>(povm.dim()));
            const double lhs = mo.tilde.apply(phi).squaredNorm();
            const double rhs = integrate(x2, scalar_measure(e, phi, phi), tol).value.real();
            worst = std::max(worst, lhs - rhs);
        }
        excess = std::max(excess, worst);
        t.add(i, povm.dim(), povm.size(), mo.chain_ok, mo.max_mismatch, worst, dd);
    }
    r.truth("chain.inclusion", 10, chain, "Tilde-certified => Strong- and MaxWeakSym-certified");
    r.le("chain.action_mismatch", 10, mismatch, bound, "actions agree on shared vectors");
    r.le("chain.norm_inequality", 10, excess, bound, "||L~ phi||^2 - int |x|^2 dE_phi,phi");
    r.le("chain.dilation_route", 0, dilation, bound, "L~ against V*(int x dF)V");
}

inline std::vector<ParamSpec> forms_params()
{
    return {{"trials", ParamType::Int, "100", "seeded trials"},
            {"max_dim", ParamType::Int, "5", "largest model dimension"},
            {"max_outcomes", ParamType::Int, "6", "largest outcome count"},
            {"bound", ParamType::Real, "1e-12", "form identity bound (relative to the form scale)"},
            {"kato_bound", ParamType::Real, "1e-10", "Kato route bound"}};
}

inline void run_bounded_integrals(const Params& p, std::uint64_t seed, const Tolerances& tol, RunReport& r)
{
    Rng rng(seed);
    double ineq = 0, sesq = 0, adj = 0, decomp = 0, kato = 0, positivity = 0, multiplicative = 0;
    Table& t = r.table("forms", {"trial", "dim", "outcomes", "inequality_excess", "sesquilinearity", "adjoint",
                                 "decomposition", "kato"});
    for (long long i = 0; i < p.integer("trials"); ++i) {
        const DiscretePovm povm = detail::random_povm(rng, static_cast<int>(p.integer("max_dim")),
                                                      static_cast<int>(p.integer("max_outcomes")), 2.0);
        const OperatorMeasure e = povm;
        const auto d = static_cast<Eigen::Index>(povm.dim());
        const double c2 = rng.normal(), c1 = rng.normal(), c0 = rng.normal(), w = rng.uniform(0.5, 3.0);
        const ScalarFunction f = [=](double x) { return cplx{c2 * x * x + c1 * x + c0, std::sin(w * x)}; };
        const ScalarFunction absf = [f](double x) { return cplx{std::abs(f(x)), 0.0}; };
        const ScalarFunction conjf = [f](double x) { return std::conj(f(x)); };
        const Vector psi = rng.vector(d), phi = rng.vector(d), chi = rng.vector(d);
        const cplx a = rng.complex_normal(), b = rng.complex_normal();
        auto form = [&](const ScalarFunction& g, const Vector& u, const Vector& v) { return form_integral(g, e, u, v, tol); };

        const double qs = form(absf, Vector(phi + psi), Vector(phi + psi)).real();
        const double q1 = form(absf, phi, phi).real(), q2 = form(absf, psi, psi).real();
        const double scale = std::max({1.0, q1, q2, qs});
        const double ie = std::max(0.0, qs - 2.0 * q1 - 2.0 * q2) / scale;

        const cplx fpp = form(f, psi, phi), fpc = form(f, psi, chi), fcp = form(f, chi, phi);
        const double lin = std::abs(form(f, psi, Vector(a * phi + b * chi)) - a * fpp - b * fpc);
        const double anti = std::abs(form(f, Vector(a * psi + b * chi), phi) - std::conj(a) * fpp - std::conj(b) * fcp);
        const double fscale = std::max({1.0, std::abs(a), std::abs(b)}) * std::max({1.0, std::abs(fpp), std::abs(fpc), std::abs(fcp)});
        const double se = std::max(lin, anti) / fscale;

        const QuadraticFormRecord rec = form_record(f, e, Matrix::Identity(d, d), tol);
        const double ad = std::abs(form(conjf, psi, phi) - rec.adjoint()(psi, phi)) / std::max(1.0, std::abs(fpp));

        const FunctionParts parts = decompose_function(f);
        const cplx recomposed = form(parts.f1, psi, phi) - form(parts.f2, psi, phi) +
                                cplx{0.0, 1.0} * form(parts.f3, psi, phi) - cplx{0.0, 1.0} * form(parts.f4, psi, phi);
        const double de = std::abs(recomposed - fpp) / std::max(1.0, std::abs(fpp));

        const ScalarFunction pos = [=](double x) { return cplx{c2 * c2 * x * x + 0.5, 0.0}; };
        const NaimarkDilation dil = naimark_dilate(povm);
        const Matrix tk = kato_operator_from_form(kato_factor_via_dilation(pos, povm, dil));
        const double ka = opnorm(tk - max_weak_sym_integral(pos, e, tol).compressed());

        positivity = std::max(positivity, -min_eigenvalue(bounded_integral(absf, povm)));
        ineq = std::max(ineq, ie);
        sesq = std::max(sesq, se);
        adj = std::max(adj, ad);
        decomp = std::max(decomp, de);
        kato = std::max(kato, ka);
        t.add(i, povm.dim(), povm.size(), ie, se, ad, de, ka);

        // Spectral measures multiply on characteristic functions.
        const DiscretePovm pvm = DiscretePovm::spectral(rng.hermitian(d));
        const double cut_a = rng.normal(), cut_b = rng.normal();
        const ScalarFunction chi_a = [cut_a](double x) { return cplx{x < cut_a ? 1.0 : 0.0, 0.0}; };
        const ScalarFunction chi_b = [cut_b](double x) { return cplx{x > cut_b ? 1.0 : 0.0, 0.0}; };
        const ScalarFunction chi_ab = [chi_a, chi_b](double x) { return chi_a(x) * chi_b(x); };
        multiplicative = std::max(multiplicative, opnorm(bounded_integral(chi_ab, pvm) -
                                                         bounded_integral(chi_a, pvm) * bounded_integral(chi_b, pvm)));
    }
    const double bound = p.real("bound");
    r.le("forms.inequality", 11, ineq, bound, "q(phi+psi) <= 2q(phi) + 2q(psi) for q = form of |f|");
    r.le("forms.sesquilinearity", 11, sesq, bound, "linear in the second, antilinear in the first argument");
    r.le("forms.adjoint", 11, adj, bound, "form of conj f equals the adjoint form");
    r.le("forms.decomposition", 11, decomp, bound, "f = f1 - f2 + i(f3 - f4)");
    r.le("forms.kato", 11, kato, p.real("kato_bound"), "(sqrt f F V)^*(sqrt f F V) = MaxWeakSym");
    r.le("bounded.positivity", 0, positivity, 1e-12, "int |f| dE is positive");
    r.le("bounded.pvm_multiplicative", 0, multiplicative, 1e-12, "chi_X chi_Y integrates to E(X)E(Y)");
}

} // namespace opint::cli
