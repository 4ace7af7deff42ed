#pragma once

#include "qblab/fock.hpp"

namespace qblab {

struct WeightVector {
    std::vector<cplx> lambda;  // entries 1..M+N
};

struct TwistParams {
    std::vector<cplx> z;  // nonzero twist values z_1..z_{M+N}

    explicit TwistParams(std::vector<cplx> values);
    cplx at(int k) const { return z[static_cast<std::size_t>(k - 1)]; }
    int size() const { return static_cast<int>(z.size()); }

    /// Twist with z_k multiplied by q^{(-1)^{p(k)} c_k} for a content vector.
    TwistParams shifted(const ParityProfile& prof, const std::vector<int>& content, cplx q) const;
};

/// Supertrace of the twist monomial over the Verma module with highest
/// weight lambda: z^lambda times a ratio of difference products.
cplx verma_supercharacter(const WeightVector& lambda, const ParityProfile& prof,
                          const TwistParams& twist);

/// Same character normalized by z^lambda (integer powers only, branch-free).
cplx verma_supercharacter_normalized(const ParityProfile& prof, const TwistParams& twist);

/// Brute-force oracle: sum the signed twist monomials over lowering-operator
/// multisets up to total degree `degree_cap`, normalized by z^lambda.
/// Also exposed per degree for coefficient-level comparisons.
std::vector<cplx> verma_series_by_degree(const ParityProfile& prof, const TwistParams& twist,
                                         int degree_cap);
cplx verma_character_series_normalized(const ParityProfile& prof, const TwistParams& twist,
                                       int degree_cap);
cplx verma_character_series(const WeightVector& lambda, const ParityProfile& prof,
                            const TwistParams& twist, int degree_cap);

/// Degree-wise expansion of the closed product form (independent route:
/// truncated polynomial convolution of the per-root factors).
std::vector<cplx> verma_product_by_degree(const ParityProfile& prof, const TwistParams& twist,
                                          int degree_cap);

/// det(z_i^{M+lambda_j-j}) / det(z_i^{M-j}).
cplx schur_function(const std::vector<long long>& lambda, const std::vector<cplx>& z);

struct KrLimitRow {
    int m;
    cplx value;
    double error;
};

struct KrLimitTable {
    std::vector<KrLimitRow> rows;
    cplx target;
    double predicted_ratio;  // dominant |z_a/z_i|
};

/// Rectangular-weight Schur ratios approaching the oscillator normalization
/// (purely even profiles only).
KrLimitTable check_kr_limit(const IndexSet& iset, const TwistParams& twist,
                            const std::vector<int>& m_list);

/// Coefficient list (ascending powers) of the classifying polynomial at node i.
std::vector<cplx> drinfeld_polynomial(const WeightVector& lambda, int i, const ParityProfile& prof,
                                      cplx q);

}  // namespace qblab
