#include <doctest.h>

#include "qblab/loperators.hpp"
#include "qblab/rng.hpp"

using namespace qblab;

namespace {

LOperatorPair make_pair_for(const ParityProfile& prof, const std::vector<int>& members, cplx q,
                            int cutoff = 6) {
    const IndexSet iset(prof, members);
    const FockSpace space(iset, cutoff, q);
    const auto osc = OscillatorSet::canonical(space);
    return build_L_pair(iset, space, osc, q);
}

std::vector<std::vector<int>> supported_sets(int d) {
    std::vector<std::vector<int>> out;
    for (int mask = 0; mask < (1 << d); ++mask) {
        std::vector<int> s;
        for (int k = 0; k < d; ++k)
            if (mask & (1 << k)) s.push_back(k + 1);
        const std::size_t n = s.size();
        if (n == 0 || n == 1 || n + 1 == static_cast<std::size_t>(d) || n == static_cast<std::size_t>(d))
            out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

TEST_CASE("degenerate families are scalar") {
    const cplx q(0.5, 0.2), x(1.4, 0.3);
    const ParityProfile prof(2, 1);
    {
        const auto p = make_pair_for(prof, {}, q);
        for (int i = 1; i <= 3; ++i) {
            CHECK(residual(p.L(i, i), SparseOperator::identity(p.space().space())) == 0.0);
            CHECK(p.Lbar(i, i).is_zero());
        }
        const auto ev = evaluate_L(p, x);
        CHECK(residual(ev.matrix, SparseOperator::identity(ev.matrix.rows())) == 0.0);
    }
    {
        const auto p = make_pair_for(prof, {1, 2, 3}, q);
        const auto ev = evaluate_L(p, x);
        const auto expect = SparseOperator::identity(ev.matrix.rows()).scaled(cplx(1.0) - cplx(1.0) / x);
        CHECK(residual(ev.matrix, expect) < 1e-16);
    }
}

TEST_CASE("single-member entries at rank two") {
    const cplx q(0.52, 0.31);
    const ParityProfile prof(2, 0);
    const IndexSet iset(prof, {1});
    const FockSpace space(iset, 5, q);
    const auto osc = OscillatorSet::canonical(space);
    const auto p = build_L_pair(iset, space, osc, q);
    // lower corner is the bare annihilator (positive sign, empty string)
    CHECK(residual(p.L(2, 1), osc.c(1, 2)) == 0.0);
    CHECK(p.L(1, 2).is_zero());
    CHECK(p.Lbar(2, 1).is_zero());
    // barred upper corner carries (q - 1/q) cdag q^{n}
    const auto expect = (osc.cdag(1, 2) * osc.q_power({{0, 1}})).scaled(q - cplx(1.0) / q);
    CHECK(residual(p.Lbar(1, 2), expect) == 0.0);
}

TEST_CASE("diagonal exponent bookkeeping is exact") {
    const cplx q(0.61, 0.11);
    for (auto [m, n] : {std::pair{2, 1}, {1, 2}, {3, 0}}) {
        const ParityProfile prof(m, n);
        for (const auto& s : supported_sets(m + n)) {
            const auto p = make_pair_for(prof, s, q, 5);
            const IndexSet iset(prof, s);
            for (int i : iset.members()) {
                const auto& el = p.diag_exp_L(i);
                const auto& eb = p.diag_exp_Lbar(i);
                for (std::size_t t = 0; t < el.size(); ++t) CHECK(el[t] + eb[t] == 0);
            }
        }
    }
}

TEST_CASE("unsupported subsets are rejected with a clear message") {
    const cplx q(0.5, 0.2);
    const ParityProfile prof(2, 2);
    const IndexSet good(prof, {1});
    const FockSpace space(good, 4, q);
    const auto osc = OscillatorSet::canonical(space);
    CHECK_THROWS_WITH_AS(build_L_pair(IndexSet(prof, {1, 2}), space, osc, q),
                         doctest::Contains("intermediate"), std::invalid_argument);
}

TEST_CASE("spectral and constant exchange relations") {
    for (std::uint64_t t = 0; t < 3; ++t) {
        Sampler rng = Sampler::derive(314, t);
        const cplx q = rng.q_sample();
        const cplx x = rng.spectral(), y = rng.spectral();
        for (auto [m, n] : {std::pair{2, 0}, {1, 1}, {2, 1}, {1, 2}, {0, 3}}) {
            const ParityProfile prof(m, n);
            for (const auto& s : supported_sets(m + n)) {
                const auto p = make_pair_for(prof, s, q);
                CHECK(check_rll_affine(p, x, y) < 1e-10);
                CHECK(check_rll_affine_all(p, x, y).max_residual() < 1e-10);
                CHECK(check_rll_finite(p).max_residual() < 1e-10);
            }
        }
    }
}

TEST_CASE("element-wise generator relations") {
    Sampler rng(2718);
    const cplx q = rng.q_sample();
    for (auto [m, n] : {std::pair{2, 1}, {1, 2}, {2, 2}}) {
        const ParityProfile prof(m, n);
        for (const auto& s : supported_sets(m + n)) {
            const auto p = make_pair_for(prof, s, q, 5);
            const auto rep = check_appendix_a(p);
            CHECK(rep.max_residual() < 1e-10);
            for (const auto& c : rep.checks)
                if (c.name.rfind("nilpotency", 0) == 0) CHECK(c.exact_zero);
        }
    }
}

TEST_CASE("diagonal twist covariance") {
    Sampler rng(99);
    const cplx q = rng.q_sample();
    const cplx x = rng.spectral(), y = rng.spectral();
    const ParityProfile prof(2, 1);
    const auto p = make_pair_for(prof, {1}, q);

    SUBCASE("unit diagonals do nothing") {
        const std::vector<cplx> ones(3, 1.0);
        const auto t = apply_diagonal_twist(p, ones, ones);
        CHECK(residual(t.L(2, 1), p.L(2, 1)) == 0.0);
    }
    SUBCASE("random diagonals keep the exchange relation") {
        std::vector<cplx> hl, hr;
        for (int k = 0; k < 3; ++k) {
            hl.push_back(rng.annulus(0.5, 1.5));
            hr.push_back(rng.annulus(0.5, 1.5));
        }
        const auto t = apply_diagonal_twist(p, hl, hr);
        CHECK(check_rll_affine(t, x, y) < 1e-9);
        for (int i : p.index_set().members()) {
            const cplx want = hl[static_cast<std::size_t>(i - 1)] * hr[static_cast<std::size_t>(i - 1)];
            const auto target = SparseOperator::identity(p.space().space()).scaled(want * want);
            CHECK(residual(t.L(i, i) * t.Lbar(i, i), target) < 1e-14);
        }
    }
    SUBCASE("zero diagonal is rejected") {
        std::vector<cplx> hl(3, 1.0), hr(3, 1.0);
        hl[1] = 0.0;
        CHECK_THROWS_AS(apply_diagonal_twist(p, hl, hr), std::invalid_argument);
    }
}

TEST_CASE("transformed oscillators still satisfy the exchange relation") {
    Sampler rng(123);
    const cplx q = rng.q_sample();
    const cplx x = rng.spectral(), y = rng.spectral();
    const ParityProfile prof(2, 1);
    const IndexSet iset(prof, {2});
    const FockSpace space(iset, 6, q);
    OscAutomorphismParams params;
    params.xi[0] = cplx(1.3, 0.4);
    params.xi[1] = cplx(0.7, -0.2);
    params.eta[{0, 1}] = cplx(0.5, 0.2);
    const auto osc = OscillatorSet::canonical(space).transformed_continuous(params);
    const auto p = build_L_pair(iset, space, osc, q);
    CHECK(check_rll_affine(p, x, y) < 1e-10);
}

TEST_CASE("evaluation-map images") {
    Sampler rng(555);
    const cplx q = rng.q_sample();
    const cplx x = rng.spectral();
    const ParityProfile prof(2, 1);

    SUBCASE("barred Cartan data") {
        const auto p = make_pair_for(prof, {1}, q);
        const auto im = rho_I(p, x);
        CHECK(im.q_kbar_image(2).is_zero());
        CHECK(im.q_kbar_image(3).is_zero());
        // on members the barred exponent is exactly the negated one
        CHECK(residual(im.q_kbar_image(1), im.q_k(1, -1)) == 0.0);
        CHECK(residual(im.q_k(1, 1) * im.q_k(1, -1), SparseOperator::identity(im.basis)) < 1e-14);
    }
    SUBCASE("structurally vanishing lowering generators") {
        const auto p = make_pair_for(prof, {3}, q);
        const auto im = rho_I(p, x);
        CHECK(im.f[1].is_zero());  // 1, 2 both outside the member set
    }
    SUBCASE("twisted pairs are rejected") {
        const auto p = make_pair_for(prof, {1}, q);
        const std::vector<cplx> h(3, cplx(2.0));
        CHECK_THROWS_AS(rho_I(apply_diagonal_twist(p, h, h), x), std::invalid_argument);
    }
}

TEST_CASE("contracted relation sweep") {
    for (std::uint64_t t = 0; t < 2; ++t) {
        Sampler rng = Sampler::derive(808, t);
        const cplx q = rng.q_sample();
        const cplx x = rng.spectral();
        for (auto [m, n] : {std::pair{2, 0}, {0, 2}, {1, 1}, {2, 1}, {1, 2}, {3, 0}, {0, 3}}) {
            const ParityProfile prof(m, n);
            for (const auto& s : supported_sets(m + n)) {
                const auto p = make_pair_for(prof, s, q, 8);
                CHECK(check_contracted_relations(p, x).max_residual() < 1e-10);
            }
        }
    }
}

TEST_CASE("intertwining relations including degenerate branches") {
    for (std::uint64_t t = 0; t < 2; ++t) {
        Sampler rng = Sampler::derive(909, t);
        const cplx q = rng.q_sample();
        const cplx x = rng.spectral(), y = rng.spectral();
        for (auto [m, n] : {std::pair{2, 0}, {1, 1}, {2, 1}, {1, 2}, {0, 3}}) {
            const ParityProfile prof(m, n);
            for (const auto& s : supported_sets(m + n)) {
                const auto p = make_pair_for(prof, s, q);
                const auto rep = check_intertwining(p, x, y);
                CHECK(rep.max_residual() < 1e-10);
                if (s.empty())
                    for (const auto& c : rep.checks)
                        if (c.name.find("degenerate") != std::string::npos) CHECK(c.exact_zero);
            }
        }
    }
}

TEST_CASE("vacuum weights and the rational fraction structure") {
    Sampler rng(1010);
    const cplx q = rng.q_sample();
    const cplx x = rng.spectral();
    const ParityProfile prof(2, 1);

    {
        const auto rep = vacuum_highest_weight(make_pair_for(prof, {1}, q), x);
        CHECK(rep.checks.max_residual() < 1e-12);
        const cplx ratio = rep.weights[0] / rep.weights[1];
        CHECK(std::abs(ratio - (cplx(1.0) - cplx(1.0) / x)) < 1e-12);
        CHECK(std::abs(rep.weights[1] / rep.weights[2] - cplx(1.0)) < 1e-12);
    }
    {
        const auto rep = vacuum_highest_weight(make_pair_for(prof, {}, q), x);
        for (const auto& w : rep.weights) CHECK(std::abs(w - cplx(1.0)) < 1e-15);
    }
    {
        const auto rep = vacuum_highest_weight(make_pair_for(prof, {1, 2, 3}, q), x);
        CHECK(rep.checks.max_residual() < 1e-15);
        for (const auto& w : rep.weights) CHECK(std::abs(w - (cplx(1.0) - cplx(1.0) / x)) < 1e-15);
    }
}

TEST_CASE("rank-four spectral exchange spot checks") {
    Sampler rng(4444);
    const cplx q = rng.q_sample();
    const cplx x = rng.spectral(), y = rng.spectral();
    for (auto [m, n, s] : {std::tuple<int, int, std::vector<int>>{2, 2, {3}},
                           {3, 1, {2}},
                           {4, 0, {1}},
                           {1, 3, {1, 3, 4}},
                           {0, 4, {2}},
                           {2, 2, {1, 2, 4}}}) {
        const auto p = make_pair_for(ParityProfile(m, n), s, q);
        CHECK(check_rll_affine_all(p, x, y).max_residual() < 1e-10);
    }
}

TEST_CASE("mirror-transformed oscillators also satisfy the exchange relation") {
    Sampler rng(311);
    const cplx q = rng.q_sample();
    const cplx x = rng.spectral(), y = rng.spectral();
    for (auto [m, n, s] : {std::tuple<int, int, std::vector<int>>{2, 1, {1}},
                           {1, 2, {2, 3}},
                           {3, 0, {2}},
                           {0, 3, {1, 2}}}) {
        const ParityProfile prof(m, n);
        const IndexSet iset(prof, s);
        const FockSpace space(iset, 6, q);
        auto osc = OscillatorSet::canonical(space);
        for (int mode = 0; mode < static_cast<int>(space.modes().size()); ++mode)
            osc = apply_discrete_automorphism(osc, mode);
        const auto pair = build_L_pair(iset, space, osc, q);
        CHECK(check_rll_affine(pair, x, y) < 1e-10);
    }
}
