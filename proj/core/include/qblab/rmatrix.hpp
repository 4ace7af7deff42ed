#pragma once

#include "qblab/graded.hpp"
#include "qblab/report.hpp"

namespace qblab {

struct ConstantRPair {
    SparseOperator r;
    SparseOperator rbar;
};

/// Constant R-matrices on fundamental (x) fundamental.
ConstantRPair build_constant_r(const ParityProfile& profile, cplx q);

/// R(x1,x2) = R - (x1/x2) Rbar.
SparseOperator build_ps_rmatrix(const ParityProfile& profile, cplx q, cplx x1, cplx x2);

/// max-entry residual of R12 R13 R23 = R23 R13 R12 with graded embeddings.
double check_graded_ybe(const ParityProfile& profile, cplx q, cplx x1, cplx x2, cplx x3);

/// Chevalley generators evaluated on the fundamental space. Cartan data is
/// kept as integer diagonal exponents (h_i = diag of q-power exponents).
struct FundamentalRep {
    ParityProfile profile;
    cplx q;
    cplx x;
    bool affine;  // whether index 0 generators are present
    std::vector<SparseOperator> e, f;          // index 0..M+N-1; f[0]/e[0] zero ops when !affine
    std::vector<std::vector<long long>> h;     // integer diagonal exponents
    std::vector<std::vector<long long>> k;     // k_i = e_ii eigenvalues, i = 1..M+N

    SparseOperator q_h(int i, long long mult = 1) const;
    SparseOperator q_k(int i, long long mult = 1) const;
};

/// Throws for (1,1) when include_affine (the affine evaluation is undefined there).
FundamentalRep fundamental_rep(const ParityProfile& profile, cplx q, cplx x,
                               bool include_affine = true);

/// Cartan matrix entry a_ij, indices 0..M+N-1 interpreted cyclically.
int cartan_entry(const ParityProfile& profile, int i, int j);

/// Full defining-relation sweep for the fundamental evaluation:
/// Cartan brackets, e-f pairing, distance-two commutators, Serre relations
/// (including the rank-2 cubic and the length-4 identities), level zero.
RelationReport check_chevalley_relations(const FundamentalRep& rep);

}  // namespace qblab
