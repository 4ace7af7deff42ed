#include <doctest.h>

#include "qblab/rng.hpp"
#include "qblab/tq.hpp"

using namespace qblab;

namespace {

TwistParams geometric_twist(const ParityProfile& prof, double step, double phase = 0.17) {
    std::vector<cplx> z;
    for (int k = 0; k < prof.size(); ++k)
        z.push_back(std::pow(step, k) * std::exp(cplx(0.0, phase * (k + 1))));
    return TwistParams(std::move(z));
}

TwistParams chamber_twist(const ParityProfile& prof, cplx q, int sites, std::uint64_t seed) {
    Sampler rng(seed);
    return random_convergent_twist(rng, prof, q, sites);
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

TEST_CASE("boundary weight diagonals") {
    const cplx q(0.5, 0.2);
    const ParityProfile prof(2, 0);
    {
        // equal twists give the identity
        const FockSpace space(IndexSet(prof, {1}), 4, q);
        const TwistParams tw({cplx(1.3, 0.2), cplx(1.3, 0.2)});
        CHECK(residual(boundary_operator_fock(space, tw),
                       SparseOperator::identity(space.space())) == 0.0);
    }
    {
        const FockSpace space(IndexSet(prof, {1}), 3, q);
        const TwistParams tw({cplx(8.0), cplx(1.0)});  // w = z_2/z_1 = 1/8
        const auto b = boundary_operator_fock(space, tw);
        CHECK(std::abs(b.entry(0, 0) - cplx(1.0)) < 1e-16);
        CHECK(std::abs(b.entry(1, 1) - cplx(0.125)) < 1e-16);
        CHECK(std::abs(b.entry(2, 2) - cplx(0.015625)) < 1e-16);
    }
    {
        const ParityProfile pf(1, 1);
        const FockSpace space(IndexSet(pf, {1}), 4, q);
        const TwistParams tw({cplx(4.0), cplx(1.0)});
        const auto b = boundary_operator_fock(space, tw);
        CHECK(std::abs(b.entry(0, 0) - cplx(1.0)) < 1e-16);
        CHECK(std::abs(b.entry(1, 1) - cplx(0.25)) < 1e-16);
    }
}

TEST_CASE("normalization closed form and trace") {
    const ParityProfile prof(2, 0);
    {
        CHECK(std::abs(normalization_Z(IndexSet(prof, {}), geometric_twist(prof, 0.125)) - cplx(1.0)) == 0.0);
        CHECK(std::abs(normalization_Z(IndexSet(prof, {1, 2}), geometric_twist(prof, 0.125)) - cplx(1.0)) ==
              0.0);
    }
    {
        const TwistParams tw({cplx(8.0), cplx(1.0)});
        CHECK(std::abs(normalization_Z(IndexSet(prof, {1}), tw) - cplx(8.0 / 7.0)) < 1e-15);
        const FockSpace space(IndexSet(prof, {1}), 12, cplx(0.5, 0.1));
        const auto tr = normalization_Z_trace(space, tw);
        CHECK(std::abs(tr.value - cplx(8.0 / 7.0)) < 1e-10);
        CHECK(tr.tail_bound < 1e-10);
    }
    {
        // fermionic exponent carries the opposite sign
        const ParityProfile pf(1, 1);
        const TwistParams tw({cplx(8.0), cplx(1.0)});
        CHECK(std::abs(normalization_Z(IndexSet(pf, {1}), tw) - cplx(7.0 / 8.0)) < 1e-15);
        const FockSpace space(IndexSet(pf, {1}), 6, cplx(0.5, 0.1));
        CHECK(std::abs(normalization_Z_trace(space, tw).value - cplx(7.0 / 8.0)) < 1e-15);
    }
    {
        const TwistParams bad({cplx(1.0), cplx(2.0)});  // |z_2/z_1| > 1
        CHECK_THROWS_AS(normalization_Z(IndexSet(prof, {1}), bad), std::invalid_argument);
    }
}

TEST_CASE("one-site closed form") {
    const cplx q(0.6, 0.2), x(1.3, 0.4), xi1(0.8, -0.2);
    {
        const ParityProfile prof(1, 0);
        const auto qm = one_site_Q(IndexSet(prof, {1}), q, x, xi1, TwistParams({cplx(1.0)}));
        CHECK(std::abs(qm.at(0, 0) - (cplx(1.0) - x / xi1)) < 1e-15);
    }
    {
        const ParityProfile prof(2, 1);
        const auto tw = geometric_twist(prof, 1.0 / 9.0);
        const auto qm = one_site_Q(IndexSet(prof, {1}), q, x, xi1, tw);
        CHECK(qm.at(1, 1) == cplx(1.0));
        CHECK(qm.at(2, 2) == cplx(1.0));
        CHECK(qm.at(0, 1) == cplx(0.0));
        // vanishing argument leaves the identity
        const auto q0 = one_site_Q(IndexSet(prof, {1}), q, cplx(0.0), xi1, tw);
        CHECK(max_abs_diff(q0, CMatrix::identity(3)) == 0.0);
    }
}

TEST_CASE("traced one-site operator matches the closed form") {
    Sampler rng(24601);
    const cplx q = rng.annulus(0.5, 0.7);
    const cplx x = rng.spectral(), xi1 = rng.spectral();
    for (auto [m, n] : {std::pair{2, 0}, {1, 1}, {2, 1}, {1, 2}, {3, 0}, {0, 3}}) {
        const ParityProfile prof(m, n);
        const auto tw = chamber_twist(prof, q, 1, 11u);
        for (const auto& s : supported_sets(m + n)) {
            const IndexSet iset(prof, s);
            const auto traced = lattice_Q(iset, q, x, LatticeConfig({xi1}), tw, 22, true);
            const auto closed = one_site_Q(iset, q, x, xi1, tw);
            CHECK(max_abs_diff(traced.matrix, closed) < std::max(1e-9, traced.tail_bound));
        }
    }
}

TEST_CASE("empty member set gives the identity operator") {
    const cplx q(0.55, 0.2), x(1.4, 0.1), xi1(1.1, 0.2);
    const ParityProfile prof(2, 1);
    const auto r =
        lattice_Q(IndexSet(prof, {}), q, x, LatticeConfig({xi1}), geometric_twist(prof, 0.1), 8);
    CHECK(max_abs_diff(r.matrix, CMatrix::identity(3)) < 1e-14);
}

TEST_CASE("convergence guard") {
    const cplx q(0.55, 0.2), x(1.4, 0.1), xi1(1.1, 0.2);
    const ParityProfile prof(2, 0);
    const TwistParams increasing({cplx(1.0), cplx(40.0)});
    CHECK_THROWS_AS(lattice_Q(IndexSet(prof, {1}), q, x, LatticeConfig({xi1}), increasing, 8, false),
                    std::invalid_argument);
    // with continuation the mirrored chamber gives the closed-form value
    const auto traced = lattice_Q(IndexSet(prof, {1}), q, x, LatticeConfig({xi1}), increasing, 24, true);
    const auto closed = one_site_Q(IndexSet(prof, {1}), q, x, xi1, increasing);
    CHECK(max_abs_diff(traced.matrix, closed) < 1e-9);
}

TEST_CASE("one-site transfer matrix for trivial weight at rank one") {
    const cplx q(0.6, 0.1), x(1.2, 0.4), xi1(0.9, -0.1);
    const ParityProfile prof(1, 0);
    const auto t = one_site_T_verma(prof, q, WeightVector{{cplx(0.0)}}, x, xi1, TwistParams({cplx(1.0)}));
    CHECK(std::abs(t.at(0, 0) - (cplx(1.0) - x / xi1)) < 1e-15);
}

TEST_CASE("one-site transfer trace structure vs direct summation") {
    Sampler rng(31415);
    const cplx q = rng.annulus(0.5, 0.7);
    const cplx x = rng.spectral(), xi1 = rng.spectral();
    const ParityProfile prof(2, 1);
    const auto tw = geometric_twist(prof, 1.0 / 9.0);
    const auto t = lattice_T_fundamental(prof, q, x, LatticeConfig({xi1}), tw);
    // direct summation over the auxiliary index
    const auto [rc, rbc] = build_constant_r(prof, q);
    const auto rmat = rc - rbc.scaled(x / xi1);
    const GradedSpace v = GradedSpace::fundamental(prof);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx s = 0.0;
            for (int a = 0; a < 3; ++a) {
                const double sgn = v.parity(a) ? -1.0 : 1.0;
                s += sgn * rmat.entry(a * 3 + i, a * 3 + j) * tw.at(a + 1);
            }
            CHECK(std::abs(t.at(i, j) - s) < 1e-14);
        }
}

TEST_CASE("transfer matrices commute among themselves and with traced operators") {
    Sampler rng(999);
    const cplx q = rng.annulus(0.5, 0.7);
    for (auto [m, n] : {std::pair{2, 0}, {1, 1}, {2, 1}}) {
        const ParityProfile prof(m, n);
        const auto tw = chamber_twist(prof, q, 2, 13u);
        for (int sites = 1; sites <= 2; ++sites) {
            std::vector<cplx> xi;
            for (int t = 0; t < sites; ++t) xi.push_back(rng.spectral());
            const LatticeConfig config(xi);
            const cplx x = rng.spectral(), y = rng.spectral();
            const auto t1 = lattice_T_fundamental(prof, q, x, config, tw);
            const auto t2 = lattice_T_fundamental(prof, q, y, config, tw);
            CHECK(commutator_residual(t1, t2) < 1e-8);
            const auto q1 = lattice_Q(IndexSet(prof, {1}), q, y, config, tw, 18, true);
            CHECK(commutator_residual(t1, q1.matrix) < 1e-8);
            std::vector<int> other;
            for (int k = 1; k < m + n; ++k) other.push_back(k);
            if (other.empty()) other.push_back(1);
            const auto q2 = lattice_Q(IndexSet(prof, other), q, x, config, tw, 18, true);
            CHECK(commutator_residual(q1.matrix, q2.matrix) < 1e-8);
        }
    }
}

TEST_CASE("functional relations between the four neighboring operators") {
    Sampler rng(777);
    const cplx q = rng.annulus(0.5, 0.7);
    const cplx x = rng.spectral();
    const cplx xi1 = rng.spectral(), xi2 = rng.spectral();
    for (auto [m, n] : {std::pair{2, 0}, {1, 1}, {2, 1}, {1, 2}, {3, 0}, {0, 3}}) {
        const ParityProfile prof(m, n);
        const int d = m + n;
        const auto tw = chamber_twist(prof, q, 2, 17u);
        for (int i = 1; i <= d; ++i)
            for (int j = i + 1; j <= d; ++j) {
                for (const auto& base : supported_sets(d)) {
                    if (IndexSet(prof, base).contains(i) || IndexSet(prof, base).contains(j)) continue;
                    bool ok = true;
                    for (auto extra : {std::vector<int>{i}, {j}, {i, j}}) {
                        auto s = base;
                        s.insert(s.end(), extra.begin(), extra.end());
                        if (!IndexSet(prof, s).supported()) ok = false;
                    }
                    if (!ok) continue;
                    const auto closed =
                        check_qq_relations(IndexSet(prof, base), i, j, q, x, LatticeConfig({xi1}), tw, 0);
                    CHECK(closed.residual < 1e-12);
                    const auto traced = check_qq_relations(IndexSet(prof, base), i, j, q, x,
                                                           LatticeConfig({xi1, xi2}), tw, 14);
                    CHECK(traced.residual < 1e-7);
                }
            }
    }
}

TEST_CASE("one-site factorization into single-member operators") {
    for (std::uint64_t t = 0; t < 5; ++t) {
        Sampler rng = Sampler::derive(6022, t);
        const cplx q = rng.annulus(0.4, 0.7);
        const cplx x = rng.spectral(), xi1 = rng.spectral();
        for (auto [m, n] : {std::pair{2, 0}, {1, 1}, {2, 1}, {1, 2}, {3, 0}}) {
            const ParityProfile prof(m, n);
            const auto tw = geometric_twist(prof, 1.0 / 11.0, 0.23);
            std::vector<cplx> lam;
            for (int k = 0; k < m + n; ++k)
                lam.push_back(cplx(rng.uniform(-1.5, 1.5), rng.uniform(-0.4, 0.4)));
            CHECK(check_verma_factorization(prof, q, WeightVector{lam}, x, xi1, tw) < 1e-12);
        }
    }
}

TEST_CASE("traced operators preserve the site content") {
    Sampler rng(2222);
    const cplx q = rng.annulus(0.5, 0.7);
    const ParityProfile prof(2, 0);
    const auto tw = chamber_twist(prof, q, 2, 5u);
    const LatticeConfig config({rng.spectral(), rng.spectral()});
    const auto r = lattice_Q(IndexSet(prof, {1}), q, rng.spectral(), config, tw, 16, true);
    for (std::int64_t a = 0; a < 4; ++a)
        for (std::int64_t b = 0; b < 4; ++b) {
            if (site_content(prof, 2, a) == site_content(prof, 2, b)) continue;
            CHECK(std::abs(r.matrix.at(static_cast<int>(a), static_cast<int>(b))) < 1e-13);
        }
}

TEST_CASE("frozen closed-form values") {
    const cplx q(0.6, 0.2), x(1.3, 0.4), xi1(0.8, -0.2);
    const TwistParams tw({cplx(1.5, 0.2), cplx(0.11, 0.05)});
    {
        const auto m = one_site_Q(IndexSet(ParityProfile(2, 0), {1}), q, x, xi1, tw);
        CHECK(std::abs(m.at(0, 0) - cplx(-0.25855786539689896, -0.8207784100807154)) < 1e-14);
    }
    {
        // the odd complement direction inverts the ratio exponent
        const auto m = one_site_Q(IndexSet(ParityProfile(1, 1), {1}), q, x, xi1, tw);
        CHECK(std::abs(m.at(0, 0) - cplx(-0.5810627596763611, -0.8824404111086813)) < 1e-14);
    }
    {
        const WeightVector lam{{cplx(0.7, 0.1), cplx(-0.4, 0.3)}};
        const auto t = one_site_T_verma(ParityProfile(1, 1), q, lam, x, xi1, tw);
        CHECK(std::abs(t.at(0, 0) - cplx(-4.276517713139766, 1.2342359964391036)) < 1e-12);
        CHECK(std::abs(t.at(1, 1) - cplx(-2.2568987146619857, 1.0725849847117117)) < 1e-12);
        CHECK(t.at(0, 1) == cplx(0.0));
    }
}
