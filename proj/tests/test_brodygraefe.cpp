#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nhosc/brodygraefe.hpp"
#include "nhosc/units.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace nhosc;

namespace {

double quad_dev(const ProbabilityQuad& x, const ProbabilityQuad& y) {
    return std::max(std::max(std::abs(x.p_aa - y.p_aa), std::abs(x.p_ab - y.p_ab)),
                    std::max(std::abs(x.p_ba - y.p_ba), std::abs(x.p_bb - y.p_bb)));
}

}  // namespace

TEST_CASE("initial density matrices") {
    const DensityMatrix a0 = initial_density(0.0, FlavorLabel::a);
    CHECK(std::abs(a0.matrix().a - Complex(1.0)) < 1e-15);
    CHECK(std::abs(a0.matrix().d) < 1e-15);

    const DensityMatrix b = initial_density(0.25 * M_PI, FlavorLabel::b);
    CHECK(std::abs(b.matrix().a - Complex(0.5)) < 1e-15);
    CHECK(std::abs(b.matrix().b - Complex(0.5)) < 1e-15);
    CHECK(std::abs(b.matrix().c - Complex(0.5)) < 1e-15);
    CHECK(std::abs(b.matrix().d - Complex(0.5)) < 1e-15);

    // The two initial states are orthogonal, so Tr(rho_a rho_b) = 0.
    const double theta = M_PI / 3.0;
    const DensityMatrix ra = initial_density(theta, FlavorLabel::a);
    const DensityMatrix rb = initial_density(theta, FlavorLabel::b);
    CHECK(std::abs((ra.matrix() * rb.matrix()).trace()) < 1e-15);
    CHECK(ra.purity() == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("density matrix validation") {
    CMat2 not_hermitian{Complex(0.5), Complex(0.3, 0.2), Complex(0.3, 0.2), Complex(0.5)};
    CHECK_THROWS_AS(DensityMatrix::from_matrix(not_hermitian), InvalidParams);
    CMat2 wrong_trace{Complex(0.7), Complex(0.0), Complex(0.0), Complex(0.5)};
    CHECK_THROWS_AS(DensityMatrix::from_matrix(wrong_trace), InvalidParams);
    CMat2 indefinite{Complex(1.2), Complex(0.0), Complex(0.0), Complex(-0.2)};
    CHECK_THROWS_AS(DensityMatrix::from_matrix(indefinite), InvalidParams);
    CHECK_NOTHROW(DensityMatrix::from_matrix(CMat2{Complex(0.5), Complex(0.0, 0.25),
                                                   Complex(0.0, -0.25), Complex(0.5)}));
}

TEST_CASE("master equation right-hand side") {
    gen::Rng rng(11);
    SECTION("Hermitian limit reduces to the commutator and is traceless") {
        for (int i = 0; i < 100; ++i) {
            const CMat2 b = gen::random_hermitian(rng);
            const DensityMatrix rho = DensityMatrix::pure(gen::random_vector(rng));
            const CMat2 rhs = rhs_density({b, CMat2::zero()}, rho);
            const CMat2 expected =
                (-kImagUnit) * (b * rho.matrix() - rho.matrix() * b);
            CHECK((rhs - expected).frobenius_norm() < 1e-14 * std::max(1.0, b.frobenius_norm()));
            CHECK(std::abs(rhs.trace()) < 1e-13 * std::max(1.0, rhs.frobenius_norm()));
        }
    }
    SECTION("trace preservation in differential form for random input") {
        for (int i = 0; i < 200; ++i) {
            const HermitianSplit split = hermitian_split(gen::random_matrix(rng));
            const DensityMatrix rho = DensityMatrix::pure(gen::random_vector(rng));
            const CMat2 rhs = rhs_density(split, rho);
            CHECK(std::abs(rhs.trace()) < 1e-13 * std::max(1.0, rhs.frobenius_norm()));
        }
    }
    SECTION("matches central finite differences of the analytic solution") {
        for (int i = 0; i < 100; ++i) {
            const OscillationParams p = gen::random_params(rng, gen::RegimeTarget::AnyGeneral);
            const CMat2 h = build_hamiltonian(p);
            const HermitianSplit split = hermitian_split(h);
            const DensityMatrix rho0 = initial_density(p.theta, FlavorLabel::a);
            // Natural time unit from the traceless part of H.
            const double rate = (h - Complex(0.5) * h.trace() * CMat2::identity()).frobenius_norm();
            const double t = gen::uniform(rng, 0.1, 10.0) / rate;
            const double step = 1e-6 / rate;
            const DensityMatrix rho_t = evolve_density_analytic(h, rho0, t);
            const CMat2 fwd = evolve_density_analytic(h, rho0, t + step).matrix();
            const CMat2 bwd = evolve_density_analytic(h, rho0, t - step).matrix();
            const CMat2 fd = (1.0 / (2.0 * step)) * (fwd - bwd);
            const CMat2 rhs = rhs_density(split, rho_t);
            // Compare in natural units (both sides scale like the rate).
            CHECK((fd - rhs).frobenius_norm() / rate < 1e-5);
        }
    }
}

TEST_CASE("analytic density evolution") {
    gen::Rng rng(12);
    SECTION("t = 0 returns the initial state") {
        const DensityMatrix rho0 = initial_density(0.9, FlavorLabel::a);
        const OscillationParams p = gen::random_params(rng, gen::RegimeTarget::AnyGeneral);
        const DensityMatrix rho = evolve_density_analytic(p, rho0, 0.0);
        CHECK((rho.matrix() - rho0.matrix()).frobenius_norm() < 1e-15);
    }
    SECTION("unitary conjugation conserves purity for Hermitian H") {
        for (int i = 0; i < 100; ++i) {
            OscillationParams p = gen::random_params(rng, gen::RegimeTarget::AnyGeneral);
            p.kappa = 0.0;
            p.sigma = std::abs(p.sigma);
            p.phi = 0.0;
            p.chi = 0.0;
            const DensityMatrix rho0 = initial_density(p.theta, FlavorLabel::b);
            const DensityMatrix rho = evolve_density_analytic(p, rho0, gen::random_time(rng, p));
            CHECK(rho.purity() == Catch::Approx(1.0).margin(1e-12));
        }
    }
    SECTION("trace one, positivity, and purity preservation for non-Hermitian draws") {
        for (int i = 0; i < 300; ++i) {
            const auto target = i % 3 == 0 ? gen::RegimeTarget::Broken
                               : i % 3 == 1 ? gen::RegimeTarget::Unbroken
                                            : gen::RegimeTarget::AnyGeneral;
            OscillationParams p = gen::random_params(rng, target);
            if (i % 5 == 0) p.chi = gen::uniform(rng, -M_PI, M_PI);
            const DensityMatrix rho0 = initial_density(p.theta, FlavorLabel::a);
            const DensityMatrix rho = evolve_density_analytic(p, rho0, gen::random_time(rng, p));
            CHECK(std::abs(rho.matrix().trace() - Complex(1.0)) < 1e-12);
            const auto [lo, hi] = DensityMatrix::eigenvalue_bounds(rho.matrix());
            CHECK(lo >= -1e-12);
            CHECK(hi <= 1.0 + 1e-12);
            CHECK(rho.purity() == Catch::Approx(1.0).margin(1e-10));
        }
    }
    SECTION("long broken-regime times stay finite thanks to growth factoring") {
        OscillationParams p;
        p.energy = 1.0;
        p.dm2 = 2.5e-21;
        p.theta = 0.25 * M_PI;
        p.phi = 0.5 * M_PI;
        p.kappa = 4.0 * p.dm2;  // deep in the broken regime
        const DensityMatrix rho0 = initial_density(p.theta, FlavorLabel::a);
        // zeta' ~ 2.4e-21; t chosen so zeta' t ~ 500, far beyond exp overflow.
        const DensityMatrix rho = evolve_density_analytic(p, rho0, 2.1e23);
        CHECK(rho.matrix().finite());
        CHECK(std::abs(rho.matrix().trace() - Complex(1.0)) < 1e-12);
    }
    SECTION("vanishing numerator trace is reported") {
        // Pure decay of the populated state: numerator trace e^{-2gt} underflows.
        const CMat2 h{Complex(0.0), Complex(0.0), Complex(0.0), Complex(0.0, -1.0)};
        const DensityMatrix rho0 = DensityMatrix::pure(CVec2{Complex(0.0), Complex(1.0)});
        CHECK_THROWS_AS(evolve_density_analytic(h, rho0, 400.0), VanishingNorm);
    }
}

TEST_CASE("trace probability") {
    gen::Rng rng(13);
    const DensityMatrix pure_x = DensityMatrix::pure(CVec2{Complex(1.0), Complex(0.0)});
    CHECK(probability_trace(pure_x, pure_x) == Catch::Approx(1.0).margin(1e-15));
    const DensityMatrix pure_y = DensityMatrix::pure(CVec2{Complex(0.0), Complex(1.0)});
    CHECK(probability_trace(pure_y, pure_x) == Catch::Approx(0.0).margin(1e-15));
    for (int i = 0; i < 200; ++i) {
        const DensityMatrix target = DensityMatrix::pure(gen::random_vector(rng));
        const OscillationParams p = gen::random_params(rng, gen::RegimeTarget::AnyGeneral);
        const DensityMatrix evolved = evolve_density_analytic(
            p, DensityMatrix::pure(gen::random_vector(rng)), gen::random_time(rng, p));
        const double prob = probability_trace(target, evolved);
        CHECK(prob >= -1e-12);
        CHECK(prob <= 1.0 + 1e-12);
    }
}

TEST_CASE("closed-form parameterization") {
    SECTION("Hermitian PT-symmetric limit has z = 0") {
        OscillationParams p;
        p.energy = 1.4;
        p.dm2 = 2.5e-21;
        p.sigma = 1e-21;
        p.theta = 0.25 * M_PI;
        const ClosedFormParams c = closed_form_params(p);
        // cos(2 theta) at theta = pi/4 rounds to ~6e-17, not exactly zero.
        CHECK(std::abs(c.z) < 1e-14);
        CHECK(std::abs(c.alpha) < 1e-14);
        CHECK(c.Gamma.imag() == Catch::Approx(0.0).margin(1e-36));
        CHECK(c.Gamma.real() ==
              Catch::Approx((p.sigma + p.dm2) / (4.0 * p.energy)).epsilon(1e-14));
    }
    SECTION("defining relations hold over random draws") {
        gen::Rng rng(14);
        for (int i = 0; i < 400; ++i) {
            const auto target = i % 3 == 0 ? gen::RegimeTarget::Broken
                               : i % 3 == 1 ? gen::RegimeTarget::Unbroken
                                            : gen::RegimeTarget::AnyGeneral;
            const OscillationParams p = gen::random_params(rng, target);
            const ClosedFormParams c = closed_form_params(p);
            const double s = p.sigma + p.dm2 * std::sin(2.0 * p.theta);
            const Complex d =
                -kImagUnit * (p.kappa * std::sin(p.phi)) + p.dm2 * std::cos(2.0 * p.theta);
            const Complex r = std::sqrt(Complex(s * s) + d * d);
            CHECK(std::abs(std::tanh(c.z) - d / r) < 1e-11);
            CHECK(std::abs(1.0 / std::cosh(c.z) - s / r) < 1e-11);
            CHECK(std::abs(std::cosh(c.z) / std::cosh(c.z) - Complex(1.0)) < 1e-12);
            // Recomputing cosh(z) loses ~eps*|z| relative accuracy at large alpha.
            CHECK(std::abs(c.Gamma - s * std::cosh(c.z) / (4.0 * p.energy)) <
                  1e-12 * std::abs(c.Gamma) * (1.0 + std::abs(c.z)));
            CHECK(c.gamma_r == Catch::Approx(s * std::cosh(c.alpha) * std::cos(c.beta) /
                                             (4.0 * p.energy)).margin(1e-12 * std::abs(c.Gamma)));
            CHECK(c.xi == Catch::Approx(s * std::sinh(c.alpha) * std::sin(c.beta) /
                                        (4.0 * p.energy)).margin(1e-12 * std::abs(c.Gamma)));
            // Same branch as the direct logarithm form exp(z) = (R + D)/S.
            CHECK(std::abs(std::exp(c.z) - (r + d) / s) < 1e-11 * std::abs((r + d) / s));
        }
    }
    SECTION("round trip at the alpha = pi/6, beta = pi/3 benchmark point") {
        const double s = 2.5e-21 * std::sin(2.0 * M_PI / 3.0);
        const Complex z_target{M_PI / 6.0, M_PI / 3.0};
        const Complex d = s * std::sinh(z_target);
        const ClosedFormParams c = closed_form_params_from(d, s, 1.0);
        CHECK(std::abs(c.z - z_target) < 1e-10);
    }
    SECTION("degenerate and unsupported inputs") {
        OscillationParams p;
        p.energy = 1.0;
        p.dm2 = 2.5e-21;
        p.theta = 0.25 * M_PI;
        p.sigma = -p.dm2;  // sigma + dm2 sin(2 theta) = 0
        CHECK_THROWS_AS(closed_form_params(p), DegenerateSech);
        OscillationParams q;
        q.energy = 1.0;
        q.dm2 = 2.5e-21;
        q.theta = 0.25 * M_PI;
        q.chi = 0.3;
        CHECK_THROWS_AS(closed_form_params(q), UnsupportedChi);
        // Exceptional point: R = 0.
        OscillationParams ep;
        ep.energy = 1.0;
        ep.dm2 = 2.5e-21;
        ep.theta = 0.25 * M_PI;
        ep.phi = 0.5 * M_PI;
        ep.kappa = ep.dm2;
        CHECK_THROWS_AS(closed_form_params(ep), WrongRegime);
    }
}

TEST_CASE("closed-form probabilities") {
    gen::Rng rng(15);
    SECTION("t = 0 is the identity channel") {
        for (int i = 0; i < 50; ++i) {
            const OscillationParams p = gen::random_params(rng, gen::RegimeTarget::AnyGeneral);
            const ProbabilityQuad q = probabilities_closed_form(p, 0.0);
            CHECK(q.p_aa == Catch::Approx(1.0).margin(1e-13));
            CHECK(q.p_bb == Catch::Approx(1.0).margin(1e-13));
            CHECK(q.p_ab == Catch::Approx(0.0).margin(1e-13));
            CHECK(q.p_ba == Catch::Approx(0.0).margin(1e-13));
        }
    }
    SECTION("kappa = 0 reduces to the textbook two-level formula") {
        for (int i = 0; i < 200; ++i) {
            OscillationParams p = gen::random_params(rng, gen::RegimeTarget::AnyGeneral);
            p.kappa = 0.0;
            const double s = p.sigma + p.dm2 * std::sin(2.0 * p.theta);
            const double d = p.dm2 * std::cos(2.0 * p.theta);
            if (std::abs(s) < 1e-24) continue;
            const double t = gen::random_time(rng, p);
            const ProbabilityQuad q = probabilities_closed_form(p, t);
            const double expected = oracles::two_level_transition(d, s, p.theta, p.energy, t);
            CHECK(q.p_ab == Catch::Approx(expected).margin(1e-11));
            CHECK(q.p_ba == Catch::Approx(expected).margin(1e-11));
            CHECK(q.sum_a() == Catch::Approx(1.0).margin(1e-12));
        }
    }
    SECTION("stationary initial states in the fully Hermitian limit") {
        for (int i = 0; i < 50; ++i) {
            OscillationParams p = gen::random_params(rng, gen::RegimeTarget::AnyGeneral);
            p.kappa = 0.0;
            p.sigma = 0.0;
            const ProbabilityQuad q = probabilities_closed_form(p, gen::random_time(rng, p));
            CHECK(q.p_ab == Catch::Approx(0.0).margin(1e-12));
            CHECK(q.p_aa == Catch::Approx(1.0).margin(1e-12));
        }
    }
    SECTION("agrees with the trace pipeline over random draws") {
        for (int i = 0; i < 300; ++i) {
            const auto target = i % 3 == 0 ? gen::RegimeTarget::Broken
                               : i % 3 == 1 ? gen::RegimeTarget::Unbroken
                                            : gen::RegimeTarget::AnyGeneral;
            const OscillationParams p = gen::random_params(rng, target);
            const double t = gen::random_time(rng, p);
            const ProbabilityQuad closed = probabilities_closed_form(p, t);
            const ProbabilityQuad pipeline = probabilities_trace(p, t);
            CHECK(quad_dev(closed, pipeline) < 1e-9);
        }
    }
    SECTION("conservation for both routes, including chi != 0 through the pipeline") {
        for (int i = 0; i < 300; ++i) {
            OscillationParams p = gen::random_params(
                rng, i % 2 ? gen::RegimeTarget::Broken : gen::RegimeTarget::AnyGeneral);
            const bool with_chi = i % 3 == 0;
            if (with_chi) p.chi = gen::uniform(rng, -M_PI, M_PI);
            const double t = gen::random_time(rng, p);
            const ProbabilityQuad pipeline = probabilities_trace(p, t);
            CHECK(pipeline.sum_a() == Catch::Approx(1.0).margin(1e-10));
            CHECK(pipeline.sum_b() == Catch::Approx(1.0).margin(1e-10));
            if (!with_chi) {
                const ProbabilityQuad closed = probabilities_closed_form(p, t);
                CHECK(closed.sum_a() == Catch::Approx(1.0).margin(1e-10));
                CHECK(closed.sum_b() == Catch::Approx(1.0).margin(1e-10));
            }
        }
    }
}

TEST_CASE("PT-limit probabilities") {
    gen::Rng rng(16);
    SECTION("t = 0 and the theta = pi/4 specialization") {
        for (int i = 0; i < 300; ++i) {
            const OscillationParams p = gen::random_params(
                rng, i % 2 ? gen::RegimeTarget::Unbroken : gen::RegimeTarget::Broken);
            const ProbabilityQuad q0 = probabilities_pt_limit(p, 0.0);
            CHECK(q0.p_aa == Catch::Approx(1.0).margin(1e-13));
            CHECK(q0.p_ab == Catch::Approx(0.0).margin(1e-13));
            const double t = gen::random_time(rng, p);
            CHECK(quad_dev(probabilities_pt_limit(p, t), probabilities_closed_form(p, t)) < 1e-12);
        }
    }
    SECTION("rejects non-PT-symmetric parameters") {
        OscillationParams p = gen::random_params(rng, gen::RegimeTarget::AnyGeneral);
        p.theta = 1.0;
        CHECK_THROWS_AS(probabilities_pt_limit(p, 1.0), NotPTSymmetric);
    }
    SECTION("benchmark-point plateaus are distinct and away from 1/2") {
        // alpha = pi/6, beta = pi/3 at theta = pi/4: at large 2 xi t the
        // channels settle on different constants.
        const double alpha = M_PI / 6.0, beta = M_PI / 3.0;
        const double cha = std::cosh(alpha), ch2a = std::cosh(2.0 * alpha);
        const double cb = std::cos(beta), cb2 = std::cos(2.0 * beta);
        const double plateau_ab = (ch2a - cb2) / (4.0 * (cha * cha - cb * cha));
        const double plateau_ba = (ch2a - cb2) / (4.0 * (cha * cha + cb * cha));
        const ProbabilityQuad q = density_quad_pt_limit(alpha, beta, 987.6, 40.0);
        CHECK(q.p_ab == Catch::Approx(plateau_ab).margin(1e-10));
        CHECK(q.p_ba == Catch::Approx(plateau_ba).margin(1e-10));
        CHECK(std::abs(q.p_ab - q.p_ba) > 1e-3);
        CHECK(std::abs(q.p_ab - 0.5) > 1e-3);
        CHECK(std::abs(q.p_ba - 0.5) > 1e-3);
    }
}

TEST_CASE("alpha/beta effective Hamiltonian") {
    AlphaBetaParams bench;
    bench.alpha = M_PI / 6.0;
    bench.beta = M_PI / 3.0;
    bench.theta = M_PI / 3.0;
    bench.dm2 = ev2_to_gev2(2.5e-3);
    bench.sigma = 0.0;
    bench.energy = 1.0;

    SECTION("realizes the requested z exactly") {
        const CMat2 h = effective_hamiltonian(bench);
        const double s = bench.s_term();
        const Complex d = -h.a + Complex(0.5) * h.trace();
        const ClosedFormParams c = closed_form_params_from(d * (4.0 * bench.energy), s, bench.energy);
        CHECK(std::abs(c.z - Complex(bench.alpha, bench.beta)) < 1e-12);
        CHECK(std::abs(h.b - Complex(s / (4.0 * bench.energy))) < 1e-30);
    }
    SECTION("closed form matches the trace pipeline on the effective dynamics") {
        for (int i = 0; i <= 100; ++i) {
            const double l_km = 3000.0 * i / 100.0;
            const double t = km_to_inverse_gev(l_km, UnitsMode::Exact);
            const ProbabilityQuad closed = probabilities_closed_form(bench, t);
            const ProbabilityQuad pipeline = probabilities_trace(bench, t);
            CHECK(quad_dev(closed, pipeline) < 1e-9);
            CHECK(closed.sum_a() == Catch::Approx(1.0).margin(1e-10));
            CHECK(closed.sum_b() == Catch::Approx(1.0).margin(1e-10));
        }
    }
}

TEST_CASE("baseline/energy density closed form") {
    AlphaBetaParams bench;
    bench.alpha = M_PI / 6.0;
    bench.beta = M_PI / 3.0;
    bench.theta = M_PI / 3.0;
    bench.dm2 = ev2_to_gev2(2.5e-3);
    bench.energy = 1.0;

    SECTION("L = 0 is the identity channel") {
        const ProbabilityQuad q = probabilities_closed_form_LE(
            bench.alpha, bench.beta, bench.theta, 2.5e-3, 0.0, 0.0, 1.0, UnitsMode::PaperRounded);
        CHECK(q.p_aa == Catch::Approx(1.0).margin(1e-14));
        CHECK(q.p_ab == Catch::Approx(0.0).margin(1e-14));
    }
    SECTION("doubled exact phase constant") {
        CHECK(2.0 * kOscPhaseExact == Catch::Approx(2.5338654).margin(2e-7));
        CHECK(2.0 * kOscPhaseExact == Catch::Approx(2.0 * 1.2669327).margin(2e-7));
    }
    SECTION("Exact mode agrees with the natural-unit closed form") {
        for (double l_km : {0.0, 250.0, 1717.0, 2900.0}) {
            const double t = km_to_inverse_gev(l_km, UnitsMode::Exact);
            const ProbabilityQuad a = probabilities_closed_form(bench, t);
            const ProbabilityQuad b = probabilities_closed_form_LE(
                bench.alpha, bench.beta, bench.theta, 2.5e-3, 0.0, l_km, 1.0, UnitsMode::Exact);
            CHECK(quad_dev(a, b) < 1e-12);
        }
    }
    SECTION("PaperRounded rate carries sin^2(2 theta): the documented discrepancy") {
        CHECK(kRoundedModeRateUsesSinSquared);
        const double l_km = 1500.0;
        const double s2 = std::sin(2.0 * bench.theta);
        const ProbabilityQuad paper = probabilities_closed_form_LE(
            bench.alpha, bench.beta, bench.theta, 2.5e-3, 0.0, l_km, 1.0, UnitsMode::PaperRounded);
        // Rebuild with the main-text sin(2 theta) rate at the same rounded constant.
        const double rate_main = 2.5e-3 * s2;
        const double base = 2.0 * kOscPhasePaper * rate_main * l_km / 1.0;
        const ProbabilityQuad main_text = density_quad_general(
            bench.theta, bench.alpha, bench.beta, base * std::cosh(bench.alpha) * std::cos(bench.beta),
            base * std::sinh(bench.alpha) * std::sin(bench.beta));
        // At theta = pi/3 the two rates genuinely differ...
        CHECK(quad_dev(paper, main_text) > 1e-3);
        // ...and replacing sin^2(2 theta) by sin(2 theta) restores agreement.
        const double rate_sq = 2.5e-3 * s2 * s2;
        const double base_sq = 2.0 * kOscPhasePaper * rate_sq * l_km / 1.0;
        const ProbabilityQuad rebuilt = density_quad_general(
            bench.theta, bench.alpha, bench.beta,
            base_sq * std::cosh(bench.alpha) * std::cos(bench.beta),
            base_sq * std::sinh(bench.alpha) * std::sin(bench.beta));
        CHECK(quad_dev(paper, rebuilt) < 1e-14);
        // At theta = pi/4 the discrepancy vanishes.
        const ProbabilityQuad p4 = probabilities_closed_form_LE(
            bench.alpha, bench.beta, 0.25 * M_PI, 2.5e-3, 0.0, l_km, 1.0, UnitsMode::PaperRounded);
        const double base4 = 2.0 * kOscPhasePaper * 2.5e-3 * l_km;
        const ProbabilityQuad main4 = density_quad_general(
            0.25 * M_PI, bench.alpha, bench.beta, base4 * std::cosh(bench.alpha) * std::cos(bench.beta),
            base4 * std::sinh(bench.alpha) * std::sin(bench.beta));
        CHECK(quad_dev(p4, main4) < 1e-14);
    }
}
