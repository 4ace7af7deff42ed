#include <doctest.h>

#include "qblab/rmatrix.hpp"
#include "qblab/rng.hpp"

using namespace qblab;

TEST_CASE("constant matrices at rank one are scalars") {
    const cplx q(0.4, 0.3);
    const auto [r, rb] = build_constant_r(ParityProfile(1, 0), q);
    CHECK(r.entry(0, 0) == q);
    CHECK(std::abs(rb.entry(0, 0) - cplx(1.0) / q) < 1e-16);
}

TEST_CASE("named coefficients") {
    const cplx q(0.52, 0.17);
    const cplx w = q - cplx(1.0) / q;
    {
        // exchange coefficient at (2,0): row (1,2), column (2,1)
        const auto [r, rb] = build_constant_r(ParityProfile(2, 0), q);
        CHECK(std::abs(r.entry(0 * 2 + 1, 1 * 2 + 0) - w) < 1e-16);
    }
    {
        // odd-odd diagonal at (1,1) carries the inverse power
        const auto [r, rb] = build_constant_r(ParityProfile(1, 1), q);
        CHECK(std::abs(r.entry(3, 3) - cplx(1.0) / q) < 1e-16);
    }
    CHECK_THROWS_AS(build_constant_r(ParityProfile(2, 0), cplx(1.0)), std::invalid_argument);
}

TEST_CASE("spectral combination") {
    const cplx q(0.61, -0.2), x1(1.3, 0.4), x2(0.7, -0.1);
    {
        const auto r = build_ps_rmatrix(ParityProfile(1, 0), q, x1, x2);
        CHECK(std::abs(r.entry(0, 0) - (q - (x1 / x2) / q)) < 1e-15);
    }
    {
        const auto r = build_ps_rmatrix(ParityProfile(2, 0), q, cplx(0.0), x2);
        const auto [rc, rb] = build_constant_r(ParityProfile(2, 0), q);
        CHECK(residual(r, rc) == 0.0);
    }
    {
        // mixed diagonal sector picks up both sums: entry ((1,2),(1,2)) = 1 - x1/x2
        const auto r = build_ps_rmatrix(ParityProfile(2, 0), q, x1, x2);
        CHECK(std::abs(r.entry(1, 1) - (cplx(1.0) - x1 / x2)) < 1e-15);
    }
    CHECK_THROWS_AS(build_ps_rmatrix(ParityProfile(2, 0), q, x1, cplx(0.0)), std::invalid_argument);
}

TEST_CASE("graded exchange equation across profiles") {
    for (std::uint64_t t = 0; t < 5; ++t) {
        Sampler rng = Sampler::derive(1207, t);
        const cplx q = rng.q_sample();
        const cplx x1 = rng.spectral(), x2 = rng.spectral(), x3 = rng.spectral();
        for (auto [m, n] : {std::pair{1, 0}, {2, 0}, {1, 1}, {2, 1}, {1, 2}, {3, 0}, {2, 2}, {3, 1}, {0, 4}})
            CHECK(check_graded_ybe(ParityProfile(m, n), q, x1, x2, x3) < 1e-12);
    }
}

TEST_CASE("spectral dependence only through the ratio") {
    Sampler rng(5150);
    const cplx q = rng.q_sample();
    const cplx x1 = rng.spectral(), x2 = rng.spectral(), c = rng.spectral();
    const auto a = build_ps_rmatrix(ParityProfile(2, 1), q, c * x1, c * x2);
    const auto b = build_ps_rmatrix(ParityProfile(2, 1), q, x1, x2);
    CHECK(residual(a, b) < 1e-13);
}

TEST_CASE("difference of the constant matrices is the graded swap") {
    Sampler rng(7);
    const cplx q = rng.q_sample();
    for (auto [m, n] : {std::pair{2, 0}, {1, 1}, {2, 1}, {2, 2}}) {
        const ParityProfile prof(m, n);
        const auto [r, rb] = build_constant_r(prof, q);
        const GradedSpace v = GradedSpace::fundamental(prof);
        CHECK(residual(r - rb, graded_swap(v, v).scaled(q - cplx(1.0) / q)) < 1e-14);
    }
}

TEST_CASE("fundamental evaluation images") {
    const cplx q(0.5, 0.25), x(1.2, -0.4);
    {
        const auto rep = fundamental_rep(ParityProfile(2, 0), q, x);
        CHECK(std::abs(rep.e[0].entry(1, 0) - x) < 1e-16);  // affine raising hits the corner
        CHECK(rep.h[1][0] == 1);                            // h_1 exponents (1, -1)
        CHECK(rep.h[1][1] == -1);
        CHECK(rep.e[1].entry(0, 1) == cplx(1.0));
    }
    {
        const auto rep = fundamental_rep(ParityProfile(1, 2), q, x);
        CHECK(rep.f[1].entry(1, 0) == cplx(1.0));   // sign (+1) since p(1) = 0
        CHECK(rep.f[2].entry(2, 1) == cplx(-1.0));  // sign (-1) since p(2) = 1
    }
}

TEST_CASE("the rank (1,1) affine evaluation is rejected") {
    const cplx q(0.5, 0.25), x(1.2, -0.4);
    CHECK_THROWS_WITH_AS(fundamental_rep(ParityProfile(1, 1), q, x),
                         doctest::Contains("(1,1)"), std::invalid_argument);
    const auto finite = fundamental_rep(ParityProfile(1, 1), q, x, false);
    CHECK_FALSE(finite.affine);
    CHECK(check_chevalley_relations(finite).max_residual() < 1e-13);
}

TEST_CASE("defining relations of the evaluated generators") {
    for (std::uint64_t t = 0; t < 4; ++t) {
        Sampler rng = Sampler::derive(88, t);
        const cplx q = rng.q_sample();
        const cplx x = rng.spectral();
        for (auto [m, n] : {std::pair{2, 0}, {0, 2}, {2, 1}, {1, 2}, {3, 0}, {2, 2}, {3, 1}, {1, 3}}) {
            const auto rep = fundamental_rep(ParityProfile(m, n), q, x);
            const auto report = check_chevalley_relations(rep);
            CHECK(report.max_residual() < 1e-12);
        }
    }
}

TEST_CASE("level zero condition is exact") {
    const auto rep = fundamental_rep(ParityProfile(2, 1), cplx(0.5, 0.1), cplx(1.0, 0.3));
    for (int t = 0; t < 3; ++t) {
        long long s = 0;
        for (int i = 0; i < 3; ++i) s += rep.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
        CHECK(s == 0);
    }
}
