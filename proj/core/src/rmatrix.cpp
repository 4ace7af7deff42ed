#include "qblab/rmatrix.hpp"

#include <array>
#include <cmath>

namespace qblab {

namespace {

int setel(int d, int i) { return ((i - 1) % d + d) % d + 1; }

int pcyc(const ParityProfile& p, int i) { return p.parity(setel(p.size(), i)); }

SparseOperator diag_from_exponents(const GradedSpace& s, cplx q, const std::vector<long long>& e,
                                   long long mult) {
    std::vector<cplx> d(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) d[k] = pow_int(q, mult * e[k]);
    return SparseOperator::diagonal(s, d);
}

}  // namespace

ConstantRPair build_constant_r(const ParityProfile& profile, cplx q) {
    if (q == 0.0 || q == 1.0 || q == -1.0) throw std::invalid_argument("build_constant_r: degenerate q");
    const GradedSpace v = GradedSpace::fundamental(profile);
    const int d = profile.size();
    const cplx w = q - cplx(1.0) / q;
    SparseOperator r(tensor(v, v), tensor(v, v), 0);
    SparseOperator rb(tensor(v, v), tensor(v, v), 0);
    auto addk = [&](SparseOperator& dst, int i, int j, int k, int l, cplx coeff) {
        const auto t = graded_kron(matrix_unit(v, i, j), matrix_unit(v, k, l));
        for (const auto& e : t.entries()) dst.insert(e.row, e.col, coeff * e.val);
    };
    for (int i = 1; i <= d; ++i) {
        addk(r, i, i, i, i, pow_int(q, 1 - 2 * profile.parity(i)));
        addk(rb, i, i, i, i, pow_int(q, -1 + 2 * profile.parity(i)));
        for (int j = 1; j <= d; ++j) {
            if (i == j) continue;
            addk(r, i, i, j, j, 1.0);
            addk(rb, i, i, j, j, 1.0);
            const double sj = profile.parity(j) ? -1.0 : 1.0;
            if (i < j) addk(r, i, j, j, i, w * sj);
            if (i > j) addk(rb, i, j, j, i, -w * sj);
        }
    }
    r.finalize(0.0);
    rb.finalize(0.0);
    return {std::move(r), std::move(rb)};
}

SparseOperator build_ps_rmatrix(const ParityProfile& profile, cplx q, cplx x1, cplx x2) {
    if (x2 == 0.0) throw std::invalid_argument("build_ps_rmatrix: x2 must be nonzero");
    auto [r, rb] = build_constant_r(profile, q);
    return r - rb.scaled(x1 / x2);
}

double check_graded_ybe(const ParityProfile& profile, cplx q, cplx x1, cplx x2, cplx x3) {
    if (x1 == 0.0 || x2 == 0.0 || x3 == 0.0)
        throw std::invalid_argument("check_graded_ybe: spectral parameters must be nonzero");
    const GradedSpace v = GradedSpace::fundamental(profile);
    const SparseOperator id = SparseOperator::identity(v);
    const SparseOperator s23 = graded_kron(id, graded_swap(v, v));
    const SparseOperator r12 = graded_kron(build_ps_rmatrix(profile, q, x1, x2), id);
    const SparseOperator r23 = graded_kron(id, build_ps_rmatrix(profile, q, x2, x3));
    const SparseOperator r13 = s23 * graded_kron(build_ps_rmatrix(profile, q, x1, x3), id) * s23;
    const SparseOperator lhs = r12 * r13 * r23;
    const SparseOperator rhs = r23 * r13 * r12;
    const double sc = std::max({1.0, lhs.max_abs(), rhs.max_abs()});
    return residual(lhs, rhs) / sc;
}

SparseOperator FundamentalRep::q_h(int i, long long mult) const {
    return diag_from_exponents(GradedSpace::fundamental(profile), q, h[static_cast<std::size_t>(i)], mult);
}

SparseOperator FundamentalRep::q_k(int i, long long mult) const {
    return diag_from_exponents(GradedSpace::fundamental(profile), q, k[static_cast<std::size_t>(i - 1)], mult);
}

FundamentalRep fundamental_rep(const ParityProfile& profile, cplx q, cplx x, bool include_affine) {
    if (x == 0.0) throw std::invalid_argument("fundamental_rep: x must be nonzero");
    const int d = profile.size();
    if (d < 2) throw std::invalid_argument("fundamental_rep: need M+N >= 2");
    if (include_affine && profile.bosonic() == 1 && profile.fermionic() == 1)
        throw std::invalid_argument(
            "fundamental_rep: the (1,1) affine evaluation is undefined; request the finite part only");
    const GradedSpace v = GradedSpace::fundamental(profile);
    FundamentalRep rep{profile, q, x, include_affine, {}, {}, {}, {}};
    const SparseOperator zero(v, v, 0);
    for (int i = 0; i < d; ++i) {
        rep.e.push_back(zero);
        rep.f.push_back(zero);
        rep.h.push_back(std::vector<long long>(static_cast<std::size_t>(d), 0));
    }
    for (int i = 1; i < d; ++i) {
        rep.e[static_cast<std::size_t>(i)] = matrix_unit(v, i, i + 1);
        rep.f[static_cast<std::size_t>(i)] =
            matrix_unit(v, i + 1, i).scaled(static_cast<double>(profile.sign(i)));
        rep.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(i - 1)] = profile.sign(i);
        rep.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = -profile.sign(i + 1);
    }
    if (include_affine) {
        rep.e[0] = matrix_unit(v, d, 1).scaled(x);
        rep.f[0] = matrix_unit(v, 1, d).scaled(static_cast<double>(profile.sign(d)) / x);
        rep.h[0][static_cast<std::size_t>(d - 1)] = profile.sign(d);
        rep.h[0][0] = -profile.sign(1);
    }
    for (int i = 1; i <= d; ++i) {
        std::vector<long long> kv(static_cast<std::size_t>(d), 0);
        kv[static_cast<std::size_t>(i - 1)] = 1;
        rep.k.push_back(std::move(kv));
    }
    return rep;
}

int cartan_entry(const ParityProfile& profile, int i, int j) {
    const int d = profile.size();
    const int si = pcyc(profile, i) ? -1 : 1;
    const int si1 = pcyc(profile, i + 1) ? -1 : 1;
    int a = (i == j) ? si + si1 : 0;
    // offset deltas are cyclic: at d <= 2 they can coincide or fire together
    if (((j - i) % d + d) % d == 1 % d) a -= si1;
    if (((i - j) % d + d) % d == 1 % d) a -= si;
    return a;
}

RelationReport check_chevalley_relations(const FundamentalRep& rep) {
    const ParityProfile& prof = rep.profile;
    const int d = prof.size();
    const cplx q = rep.q;
    const cplx w = q - cplx(1.0) / q;
    const GradedSpace v = GradedSpace::fundamental(prof);
    const int lo = rep.affine ? 0 : 1;
    RelationReport out;

    auto E = [&](int i) { return ScaledOperator{rep.e[static_cast<std::size_t>(i)]}; };
    auto F = [&](int i) { return ScaledOperator{rep.f[static_cast<std::size_t>(i)]}; };
    auto hdiag = [&](int i) {
        std::vector<cplx> dg(static_cast<std::size_t>(d));
        for (int t = 0; t < d; ++t)
            dg[static_cast<std::size_t>(t)] = static_cast<double>(rep.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]);
        return ScaledOperator{SparseOperator::diagonal(v, dg)};
    };
    const ScaledOperator zero{SparseOperator(v, v, 0)};

    for (int i = lo; i < d; ++i)
        for (int j = lo; j < d; ++j) {
            out.add("h-h [" + std::to_string(i) + "," + std::to_string(j) + "]",
                    scaled_residual(graded_bracket(hdiag(i), hdiag(j)), zero));
            const double a = cartan_entry(prof, i, j);
            out.add("h-e [" + std::to_string(i) + "," + std::to_string(j) + "]",
                    scaled_residual(graded_bracket(hdiag(i), E(j)), scaled(a, E(j))));
            out.add("h-f [" + std::to_string(i) + "," + std::to_string(j) + "]",
                    scaled_residual(graded_bracket(hdiag(i), F(j)), scaled(-a, F(j))));
            ScaledOperator target = zero;
            if (i == j)
                target = scaled(1.0 / w, ScaledOperator{rep.q_h(i, 1) - rep.q_h(i, -1)});
            out.add("e-f [" + std::to_string(i) + "," + std::to_string(j) + "]",
                    scaled_residual(graded_bracket(E(i), F(j)), target));
        }

    for (int i = lo; i < d; ++i)
        for (int j = lo; j < d; ++j) {
            if (i == j) continue;
            if (cartan_entry(prof, i, j) == 0) {
                out.add("ee-zero [" + std::to_string(i) + "," + std::to_string(j) + "]",
                        scaled_residual(graded_bracket(E(i), E(j)), zero));
                out.add("ff-zero [" + std::to_string(i) + "," + std::to_string(j) + "]",
                        scaled_residual(graded_bracket(F(i), F(j)), zero));
            }
            if (std::abs(cartan_entry(prof, i, j)) == 1 && cartan_entry(prof, i, i) != 0) {
                out.add("serre-e [" + std::to_string(i) + "," + std::to_string(j) + "]",
                        scaled_residual(graded_bracket(E(i), graded_bracket(E(i), E(j), q), cplx(1.0) / q), zero));
                out.add("serre-f [" + std::to_string(i) + "," + std::to_string(j) + "]",
                        scaled_residual(graded_bracket(F(i), graded_bracket(F(i), F(j), cplx(1.0) / q), q), zero));
            }
        }

    // odd generators square to zero
    for (int i = lo; i < d; ++i)
        if (rep.e[static_cast<std::size_t>(i)].parity() == 1) {
            const bool ez = (rep.e[static_cast<std::size_t>(i)] * rep.e[static_cast<std::size_t>(i)]).is_zero();
            const bool fz = (rep.f[static_cast<std::size_t>(i)] * rep.f[static_cast<std::size_t>(i)]).is_zero();
            out.add("e-squared [" + std::to_string(i) + "]", ez ? 0.0 : 1.0, ez);
            out.add("f-squared [" + std::to_string(i) + "]", fz ? 0.0 : 1.0, fz);
        }

    const auto mn = std::make_pair(prof.bosonic(), prof.fermionic());
    if (rep.affine && (mn == std::make_pair(2, 0) || mn == std::make_pair(0, 2))) {
        const cplx q2 = q * q;
        for (int i = 0; i <= 1; ++i) {
            const int j = 1 - i;
            out.add("rank2-quartic-e [" + std::to_string(i) + "]",
                    scaled_residual(graded_bracket(E(i), graded_bracket(E(i), graded_bracket(E(i), E(j), q2)), cplx(1.0) / q2), zero));
            out.add("rank2-quartic-f [" + std::to_string(i) + "]",
                    scaled_residual(graded_bracket(F(i), graded_bracket(F(i), graded_bracket(F(i), F(j), cplx(1.0) / q2)), q2), zero));
        }
    }

    if (rep.affine && d >= 4 && prof.bosonic() != 0 && prof.fermionic() != 0) {
        const int M = prof.bosonic();
        const std::vector<std::array<int, 3>> triples = {{d - 1, 0, 1}, {M - 1, M, M + 1}};
        for (const auto& t : triples) {
            const int i = t[0], j = t[1], kk = t[2] % d;
            out.add("extra-serre-e (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(kk) + ")",
                    scaled_residual(graded_bracket(graded_bracket(graded_bracket(E(i), E(j), q), E(kk), cplx(1.0) / q), E(j)), zero));
            out.add("extra-serre-f (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(kk) + ")",
                    scaled_residual(graded_bracket(graded_bracket(graded_bracket(F(i), F(j), cplx(1.0) / q), F(kk), q), F(j)), zero));
        }
    }

    if (rep.affine && (mn == std::make_pair(2, 1) || mn == std::make_pair(1, 2))) {
        // length-5 identities specific to rank 3 with one odd index
        const int b = (mn == std::make_pair(2, 1)) ? 2 : 1;
        const int c = (mn == std::make_pair(2, 1)) ? 1 : 2;
        auto nest_e = [&](int o1, int o2, int o3, int o4, int tail) {
            return graded_bracket(E(o1), graded_bracket(E(o2), graded_bracket(E(o3), graded_bracket(E(o4), E(tail), cplx(1.0) / q))), q);
        };
        auto nest_f = [&](int o1, int o2, int o3, int o4, int tail) {
            return graded_bracket(F(o1), graded_bracket(F(o2), graded_bracket(F(o3), graded_bracket(F(o4), F(tail), cplx(1.0) / q))), q);
        };
        out.add("rank3-quintic-e", scaled_residual(nest_e(0, b, 0, b, c), nest_e(b, 0, b, 0, c)));
        out.add("rank3-quintic-f", scaled_residual(nest_f(0, b, 0, b, c), nest_f(b, 0, b, 0, c)));
    }

    // level zero: sum of Cartan exponents vanishes identically
    if (rep.affine) {
        long long worst = 0;
        for (int t = 0; t < d; ++t) {
            long long s = 0;
            for (int i = 0; i < d; ++i) s += rep.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
            worst = std::max(worst, std::abs(s));
        }
        out.add("level-zero", static_cast<double>(worst), worst == 0);
    }
    return out;
}

}  // namespace qblab
