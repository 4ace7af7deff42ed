#pragma once

#include "qblab/fock.hpp"
#include "qblab/rmatrix.hpp"
#include "qblab/report.hpp"

namespace qblab {

/// The (M+N)x(M+N) pair of operator matrices of a contracted algebra over a
/// truncated oscillator space, plus integer exponent bookkeeping for the
/// diagonal q-powers (diagonals are never stored through logarithms).
class LOperatorPair {
public:
    LOperatorPair(IndexSet iset, FockSpace space, cplx q);

    const IndexSet& index_set() const { return iset_; }
    const FockSpace& space() const { return space_; }
    cplx q() const { return q_; }
    IndexSet::Shape tag() const { return iset_.shape(); }
    int dim() const { return iset_.profile().size(); }

    const SparseOperator& L(int i, int j) const { return l_[at(i, j)]; }
    const SparseOperator& Lbar(int i, int j) const { return lbar_[at(i, j)]; }

    /// Diagonal L_ii = pref_L(i) * q^{diag_exp_L(i)}; same for Lbar on members.
    const std::vector<long long>& diag_exp_L(int i) const { return exp_l_[static_cast<std::size_t>(i - 1)]; }
    const std::vector<long long>& diag_exp_Lbar(int i) const { return exp_lbar_[static_cast<std::size_t>(i - 1)]; }
    cplx pref_L(int i) const { return pref_l_[static_cast<std::size_t>(i - 1)]; }
    cplx pref_Lbar(int i) const { return pref_lbar_[static_cast<std::size_t>(i - 1)]; }
    bool twisted() const;

    SparseOperator L_inv_diag(int i) const;  // exact inverse of L_ii from exponents

    void set_L(int i, int j, SparseOperator op);
    void set_Lbar(int i, int j, SparseOperator op);
    void set_diag(int i, std::vector<long long> exp_l, bool has_lbar);
    void scale_entry(int i, int j, cplx hl_hr);  // used by the diagonal twist

private:
    IndexSet iset_;
    FockSpace space_;
    cplx q_;
    std::vector<SparseOperator> l_, lbar_;
    std::vector<std::vector<long long>> exp_l_, exp_lbar_;
    std::vector<cplx> pref_l_, pref_lbar_;

    std::size_t at(int i, int j) const;
};

struct EvaluatedL {
    cplx x;
    SparseOperator matrix;  // on Fock (x) fundamental
};

/// Explicit oscillator realization for the four supported index-set shapes.
/// Throws for any other subset (no closed form is implemented for those).
LOperatorPair build_L_pair(const IndexSet& iset, const FockSpace& space, const OscillatorSet& osc,
                           cplx q);

EvaluatedL evaluate_L(const LOperatorPair& pair, cplx x);

/// Spectral RLL relation on Fock (x) fund (x) fund, interior columns, margin 2.
double check_rll_affine(const LOperatorPair& pair, cplx x, cplx y);

/// All three spectral exchange relations: (L,L), (Lbar,Lbar) and the mixed
/// one, with Lbar(x) evaluated as Lbar - L x.
RelationReport check_rll_affine_all(const LOperatorPair& pair, cplx x, cplx y);

/// The three constant-R exchange relations for (L,L), (Lbar,Lbar), (L,Lbar).
RelationReport check_rll_finite(const LOperatorPair& pair);

/// Element-wise commutation relation families for the generators
/// (plain, quadratic-exchange, q-commutator, nilpotency, mixed diagonal).
RelationReport check_appendix_a(const LOperatorPair& pair);

LOperatorPair apply_diagonal_twist(const LOperatorPair& pair, const std::vector<cplx>& hl,
                                   const std::vector<cplx>& hr);

/// Chevalley images on the Fock space under the contracted evaluation map.
struct BorelImages {
    IndexSet iset;
    GradedSpace basis;
    cplx q, x;
    std::vector<SparseOperator> e, f;       // index 0..M+N-1
    std::vector<std::vector<long long>> h;  // integer exponents per basis state
    std::vector<std::vector<long long>> k;  // i = 1..M+N (access k[i-1])

    SparseOperator q_h(int i, long long mult = 1) const;
    SparseOperator q_k(int i, long long mult = 1) const;
    /// Operator image of the barred Cartan exponential: inverse diagonal on
    /// members, the zero operator on the complement.
    SparseOperator q_kbar_image(int i) const;
};

BorelImages rho_I(const LOperatorPair& pair, cplx x);

/// Contracted e-f pairing (all four membership branches), Cartan relations,
/// vanishing distance->=2 brackets, Serre relations (original + contracted
/// variants selected by membership patterns), and structural f = 0.
RelationReport check_contracted_relations(const LOperatorPair& pair, cplx x);

/// Co-product intertwining relations for k_i, e_i and the contracted f_i
/// (with membership truncations), against the evaluated L at ratio y/x.
RelationReport check_intertwining(const LOperatorPair& pair, cplx x, cplx y);

struct VacuumReport {
    std::vector<cplx> weights;  // nu_i(x), i = 1..M+N
    RelationReport checks;
};

/// Diagonal vacuum eigenvalues, annihilation of the vacuum by the lower
/// triangle for cyclic-prefix member sets, and eigenvalue-ratio structure.
VacuumReport vacuum_highest_weight(const LOperatorPair& pair, cplx x);

}  // namespace qblab
