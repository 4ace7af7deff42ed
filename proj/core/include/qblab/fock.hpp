#pragma once

#include <map>
#include <optional>
#include <set>

#include "qblab/graded.hpp"
#include "qblab/report.hpp"

namespace qblab {

/// Subset I of {1..M+N} and its complement.
class IndexSet {
public:
    enum class Shape { empty, single, co_single, full, unsupported };

    IndexSet(ParityProfile profile, std::vector<int> members);

    const ParityProfile& profile() const { return profile_; }
    const std::vector<int>& members() const { return members_; }
    const std::vector<int>& complement() const { return complement_; }
    bool contains(int k) const;

    Shape shape() const;
    bool supported() const { return shape() != Shape::unsupported; }

    std::string to_string() const;

private:
    ParityProfile profile_;
    std::vector<int> members_, complement_;
};

struct FockMode {
    int i;  // element of I
    int a;  // element of the complement
    bool fermionic;
};

/// Truncated multi-mode oscillator space for the mode set I x complement.
///
/// Modes are ordered lexicographically in (i,a); the basis is row-major over
/// the mode list with the first mode slowest. Basis parity is the sum of
/// fermionic occupancies mod 2. Bosonic modes hold levels m = 0..cutoff.
/// A mode listed in `flipped` is represented on the mirrored module with
/// number values n = -1-m (levels still m = 0..cutoff); traces over such a
/// mode sum the n <= -1 tail, which continues the n >= 0 geometric series.
class FockSpace {
public:
    FockSpace(IndexSet iset, int cutoff, cplx q, std::set<int> flipped_modes = {});

    const IndexSet& index_set() const { return iset_; }
    const std::vector<FockMode>& modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    cplx q() const { return q_; }
    const GradedSpace& space() const { return space_; }
    int dim() const { return space_.dim(); }
    bool flipped(int mode) const { return flipped_.count(mode) > 0; }
    int mode_index(int i, int a) const;

    int level(std::int64_t state, int mode) const;           // m = 0..local_dim-1
    long long number_value(std::int64_t state, int mode) const;  // n = m, or -1-m if flipped

    /// Columns with every bosonic level <= cutoff - margin.
    std::vector<std::uint8_t> interior(int margin) const;

    std::vector<cplx> vacuum() const;

private:
    IndexSet iset_;
    int cutoff_;
    cplx q_;
    std::set<int> flipped_;
    std::vector<FockMode> modes_;
    std::vector<int> local_dim_;
    GradedSpace space_;

    GradedSpace build_space() const;
};

struct OscAutomorphismParams {
    /// xi keyed by mode index; eta keyed by unordered mode-index pair.
    std::map<int, cplx> xi;
    std::map<std::pair<int, int>, cplx> eta;

    cplx xi_for(int mode) const;
    cplx eta_for(int m1, int m2) const;
};

/// Generator matrices c_{ai}, cdag_{ia}, n_{ia} on the full Fock space,
/// one triple per mode. Number operators stay diagonal under both
/// automorphisms, so q-power strings are built from stored diagonals.
class OscillatorSet {
public:
    static OscillatorSet canonical(const FockSpace& space);

    const FockSpace& space() const { return space_; }

    const SparseOperator& c(int mode) const { return c_[static_cast<std::size_t>(mode)]; }
    const SparseOperator& cdag(int mode) const { return cdag_[static_cast<std::size_t>(mode)]; }
    const SparseOperator& n(int mode) const { return n_[static_cast<std::size_t>(mode)]; }
    const SparseOperator& c(int i, int a) const { return c(space_.mode_index(i, a)); }
    const SparseOperator& cdag(int i, int a) const { return cdag(space_.mode_index(i, a)); }
    const SparseOperator& n(int i, int a) const { return n(space_.mode_index(i, a)); }

    /// Integer number-value of mode at a basis state (diagonal of n).
    long long n_value(std::int64_t state, int mode) const;

    /// q^{sum_k coeff_k * n_{mode_k}} with integer coefficients, exact powers.
    SparseOperator q_power(const std::vector<std::pair<int, long long>>& terms) const;
    /// Corresponding integer exponent per basis state.
    std::vector<long long> exponent(const std::vector<std::pair<int, long long>>& terms) const;
    /// q^{sum_k w_k * n_{mode_k}} with complex weights.
    SparseOperator q_power_weighted(const std::vector<std::pair<int, cplx>>& terms) const;

    OscillatorSet transformed_continuous(const OscAutomorphismParams& params) const;
    OscillatorSet transformed_discrete(int mode) const;

private:
    explicit OscillatorSet(FockSpace space) : space_(std::move(space)) {}

    FockSpace space_;
    std::vector<SparseOperator> c_, cdag_, n_;
    std::vector<std::vector<long long>> nvals_;  // integer diagonal of n per mode
};

std::vector<cplx> build_vacuum(const FockSpace& space);
SparseOperator build_generator(const OscillatorSet& set, char kind, int i, int a);

OscillatorSet apply_osc_automorphism(const OscillatorSet& set, const OscAutomorphismParams& params);
OscillatorSet apply_discrete_automorphism(const OscillatorSet& set, int mode);

/// Defining q-oscillator relations on the interior subspace.
RelationReport check_osc_relations(const OscillatorSet& set);

}  // namespace qblab
