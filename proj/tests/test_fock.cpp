#include <doctest.h>

#include "qblab/fock.hpp"
#include "qblab/rng.hpp"

using namespace qblab;

TEST_CASE("index set shapes") {
    const ParityProfile p(2, 2);
    CHECK(IndexSet(p, {}).shape() == IndexSet::Shape::empty);
    CHECK(IndexSet(p, {3}).shape() == IndexSet::Shape::single);
    CHECK(IndexSet(p, {1, 2, 4}).shape() == IndexSet::Shape::co_single);
    CHECK(IndexSet(p, {1, 2, 3, 4}).shape() == IndexSet::Shape::full);
    CHECK(IndexSet(p, {1, 2}).shape() == IndexSet::Shape::unsupported);
    CHECK_THROWS_AS(IndexSet(p, {5}), std::out_of_range);
}

TEST_CASE("mode statistics and dimensions") {
    const ParityProfile p(2, 1);
    const IndexSet iset(p, {1});
    const FockSpace space(iset, 4, cplx(0.5, 0.1));
    REQUIRE(space.modes().size() == 2);
    CHECK_FALSE(space.modes()[0].fermionic);  // (1,2): parities 0,0
    CHECK(space.modes()[1].fermionic);        // (1,3): parities 0,1
    CHECK(space.dim() == 5 * 2);
    // basis parity comes from the fermionic occupancy
    CHECK(space.space().parity(0) == 0);
    CHECK(space.space().parity(1) == 1);
}

TEST_CASE("vacuum state") {
    const ParityProfile p(2, 0);
    const FockSpace space(IndexSet(p, {1}), 3, cplx(0.4, 0.2));
    const auto vac = build_vacuum(space);
    REQUIRE(vac.size() == 4);
    CHECK(vac[0] == cplx(1.0));
    CHECK(vac[1] == cplx(0.0));

    const auto osc = OscillatorSet::canonical(space);
    const auto nv = osc.n(1, 2).apply(vac);
    for (const auto& v : nv) CHECK(v == cplx(0.0));
    const auto cv = osc.c(1, 2).apply(vac);
    for (const auto& v : cv) CHECK(v == cplx(0.0));
    const auto up = osc.cdag(1, 2).apply(vac);
    CHECK(up[1] == cplx(1.0));  // occupancy one
}

TEST_CASE("generator matrix elements") {
    const cplx q(0.5, 0.0);
    const ParityProfile p(2, 0);
    const FockSpace space(IndexSet(p, {1}), 5, q);
    const auto osc = OscillatorSet::canonical(space);
    const auto num = osc.cdag(1, 2) * osc.c(1, 2);
    // [1]_q = 1 on occupancy one, [2]_{1/2} = 2.5 on occupancy two
    CHECK(std::abs(num.entry(1, 1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(num.entry(2, 2) - cplx(2.5)) < 1e-15);
}

TEST_CASE("fermionic pair acts as occupation complement") {
    const cplx q(0.47, 0.21);
    const ParityProfile p(1, 1);
    const FockSpace space(IndexSet(p, {1}), 4, q);
    const auto osc = OscillatorSet::canonical(space);
    const auto a = osc.c(1, 2) * osc.cdag(1, 2) + osc.cdag(1, 2) * osc.c(1, 2);
    CHECK(residual(a, SparseOperator::identity(space.space())) == 0.0);
    CHECK((osc.c(1, 2) * osc.c(1, 2)).is_zero());
    CHECK((osc.cdag(1, 2) * osc.cdag(1, 2)).is_zero());
}

TEST_CASE("defining relations on the interior") {
    for (std::uint64_t t = 0; t < 4; ++t) {
        Sampler rng = Sampler::derive(31, t);
        const cplx q = rng.q_sample();
        {
            const FockSpace space(IndexSet(ParityProfile(1, 1), {1}), 4, q);
            CHECK(check_osc_relations(OscillatorSet::canonical(space)).max_residual() < 1e-14);
        }
        {
            const FockSpace space(IndexSet(ParityProfile(2, 0), {1}), 6, q);
            CHECK(check_osc_relations(OscillatorSet::canonical(space)).max_residual() < 1e-12);
        }
        {
            const FockSpace space(IndexSet(ParityProfile(2, 1), {1}), 6, q);
            CHECK(check_osc_relations(OscillatorSet::canonical(space)).max_residual() < 1e-12);
        }
    }
}

TEST_CASE("continuous automorphism") {
    Sampler rng(91);
    const cplx q = rng.q_sample();
    const FockSpace space(IndexSet(ParityProfile(2, 1), {1}), 6, q);
    const auto osc = OscillatorSet::canonical(space);

    SUBCASE("trivial parameters reproduce the generators") {
        const auto t = osc.transformed_continuous({});
        CHECK(residual(t.c(0), osc.c(0)) == 0.0);
        CHECK(residual(t.cdag(1), osc.cdag(1)) == 0.0);
    }
    SUBCASE("pure scaling leaves c cdag invariant") {
        OscAutomorphismParams params;
        params.xi[0] = 2.0;
        const auto t = osc.transformed_continuous(params);
        CHECK(residual(t.c(0) * t.cdag(0), osc.c(0) * osc.cdag(0)) < 1e-14);
    }
    SUBCASE("random parameters preserve the relations") {
        OscAutomorphismParams params;
        params.xi[0] = cplx(1.4, -0.2);
        params.xi[1] = cplx(0.8, 0.3);
        params.eta[{0, 1}] = cplx(-0.4, 0.05);
        const double base = check_osc_relations(osc).max_residual();
        const double after = check_osc_relations(osc.transformed_continuous(params)).max_residual();
        CHECK(after < std::max(1e-12, 10 * std::max(base, 1e-15)));
    }
    SUBCASE("zero scale is rejected") {
        OscAutomorphismParams params;
        params.xi[0] = 0.0;
        CHECK_THROWS_AS(osc.transformed_continuous(params), std::invalid_argument);
    }
}

TEST_CASE("discrete automorphism") {
    Sampler rng(17);
    const cplx q = rng.q_sample();

    SUBCASE("fermionic mode flips the occupation") {
        const FockSpace space(IndexSet(ParityProfile(1, 1), {1}), 4, q);
        const auto osc = OscillatorSet::canonical(space);
        const auto t = osc.transformed_discrete(0);
        // n -> 1 - n on the two-state mode
        CHECK(t.n(0).entry(0, 0) == cplx(1.0));
        CHECK(t.n(0).entry(1, 1) == cplx(0.0));
        CHECK(check_osc_relations(t).max_residual() < 1e-13);
    }
    SUBCASE("applying twice forces the composed sign") {
        const FockSpace space(IndexSet(ParityProfile(2, 0), {1}), 5, q);
        const auto osc = OscillatorSet::canonical(space);
        const auto t2 = osc.transformed_discrete(0).transformed_discrete(0);
        // c -> cdag -> -(-1)^p c, so twice gives -c and n returns to itself
        CHECK(residual(t2.c(0), osc.c(0).scaled(-1.0)) == 0.0);
        CHECK(residual(t2.n(0), osc.n(0)) == 0.0);
    }
    SUBCASE("bosonic relations survive on the interior") {
        const FockSpace space(IndexSet(ParityProfile(2, 0), {1}), 6, q);
        const auto t = OscillatorSet::canonical(space).transformed_discrete(0);
        CHECK(check_osc_relations(t).max_residual() < 1e-12);
    }
}

TEST_CASE("interior masks and flipped number values") {
    const cplx q(0.5, 0.2);
    const FockSpace plain(IndexSet(ParityProfile(2, 0), {1}), 5, q);
    const auto mask = plain.interior(2);
    CHECK(mask[3] == 1);
    CHECK(mask[4] == 0);
    CHECK(mask[5] == 0);

    const FockSpace flipped(IndexSet(ParityProfile(2, 0), {1}), 5, q, {0});
    CHECK(flipped.number_value(0, 0) == -1);
    CHECK(flipped.number_value(3, 0) == -4);
    CHECK_THROWS_AS(FockSpace(IndexSet(ParityProfile(1, 1), {1}), 5, q, {0}), std::invalid_argument);
}
