#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qblab {

using cplx = std::complex<double>;

/// Grading (M,N): basis indices 1..M are even, M+1..M+N are odd.
class ParityProfile {
public:
    ParityProfile(int m, int n);

    int bosonic() const { return m_; }
    int fermionic() const { return n_; }
    int size() const { return m_ + n_; }

    /// p(i) for 1 <= i <= M+N.
    int parity(int i) const;
    /// (-1)^{p(i)}
    int sign(int i) const { return parity(i) == 0 ? 1 : -1; }

    bool operator==(const ParityProfile& o) const { return m_ == o.m_ && n_ == o.n_; }

private:
    int m_, n_;
};

/// A finite-dimensional space with a Z2 parity per basis vector.
class GradedSpace {
public:
    explicit GradedSpace(std::vector<std::uint8_t> parity);

    static GradedSpace fundamental(const ParityProfile& p);
    static GradedSpace even(int dim);

    int dim() const { return static_cast<int>(parity_.size()); }
    int parity(int k) const { return parity_[static_cast<std::size_t>(k)]; }
    const std::vector<std::uint8_t>& parities() const { return parity_; }

    bool operator==(const GradedSpace& o) const { return parity_ == o.parity_; }
    bool operator!=(const GradedSpace& o) const { return !(*this == o); }

private:
    std::vector<std::uint8_t> parity_;
};

/// Product space in row-major order (first factor slowest).
GradedSpace tensor(const GradedSpace& a, const GradedSpace& b);

struct Tolerance {
    double abs_tol = 1e-10;
    double drop_tol = 1e-14;

    Tolerance() = default;
    Tolerance(double abs, double drop);
};

/// Sparse homogeneous linear operator between graded spaces.
///
/// Entries are kept sorted row-major. The graded structure enters only
/// through graded_kron / embeddings / supertraces; plain products and sums
/// are ordinary matrix operations.
class SparseOperator {
public:
    struct Entry {
        std::int64_t row;
        std::int64_t col;
        cplx val;
    };

    SparseOperator(GradedSpace rows, GradedSpace cols, int parity);

    static SparseOperator identity(const GradedSpace& s);
    /// Diagonal operator (parity 0) from explicit values.
    static SparseOperator diagonal(const GradedSpace& s, const std::vector<cplx>& values);

    const GradedSpace& rows() const { return rows_; }
    const GradedSpace& cols() const { return cols_; }
    int parity() const { return parity_; }

    std::int64_t nnz() const { return static_cast<std::int64_t>(entries_.size()); }
    bool is_zero() const { return entries_.empty(); }
    const std::vector<Entry>& entries() const { return entries_; }

    cplx entry(std::int64_t r, std::int64_t c) const;

    /// Builder interface: insert accumulates, finalize() sorts/merges/prunes.
    void insert(std::int64_t r, std::int64_t c, cplx v);
    void finalize(double drop_tol = 1e-14);

    SparseOperator operator+(const SparseOperator& o) const;
    SparseOperator operator-(const SparseOperator& o) const;
    SparseOperator operator*(const SparseOperator& o) const;
    SparseOperator scaled(cplx c) const;
    SparseOperator transpose() const;

    double max_abs() const;
    std::vector<cplx> apply(std::span<const cplx> v) const;

    /// Zero out all columns c with keep[c] == 0.
    SparseOperator restrict_cols(const std::vector<std::uint8_t>& keep) const;

private:
    GradedSpace rows_, cols_;
    int parity_;
    std::vector<Entry> entries_;
    bool finalized_ = true;

    void require_finalized() const;
};

/// E_{ij} on the given space, 1-based indices; parity p(i)+p(j).
SparseOperator matrix_unit(const GradedSpace& s, int i, int j);

/// Koszul-signed Kronecker product:
/// entry((rA,rB),(cA,cB)) = A(rA,cA) B(rB,cB) (-1)^{p(B) par(cA)}.
/// Both operands must be homogeneous.
SparseOperator graded_kron(const SparseOperator& a, const SparseOperator& b);

/// A acting on factors[pos], identity elsewhere.
SparseOperator embed_factor(const SparseOperator& a, int pos,
                            std::span<const GradedSpace> factors);

/// Graded swap A (x) B -> B (x) A, entry((b,a),(a,b)) = (-1)^{p(a)p(b)}.
SparseOperator graded_swap(const GradedSpace& a, const GradedSpace& b);

/// Signed permutation operator for reordering tensor factors.
/// perm[t] = source factor placed at target slot t.
SparseOperator factor_permutation(std::span<const GradedSpace> factors,
                                  std::span<const int> perm);

cplx supertrace(const SparseOperator& a);

/// (Str (x) 1) over the leading factor `first`; remaining spaces supplied by caller.
SparseOperator partial_supertrace_first(const SparseOperator& a, const GradedSpace& first,
                                        const GradedSpace& rest_rows, const GradedSpace& rest_cols);

/// max-absolute-entry norm of A - B.
double residual(const SparseOperator& a, const SparseOperator& b);

/// Exact integer power by binary exponentiation (no transcendental calls).
cplx pow_int(cplx base, long long e);

/// Operator together with a running magnitude bound for the words that
/// produced it. Identity checks divide the raw residual by this scale so
/// a relation between numerically large words is judged relative to them.
struct ScaledOperator {
    SparseOperator op;
    double scale = 1.0;

    ScaledOperator(SparseOperator o);
    ScaledOperator(SparseOperator o, double s) : op(std::move(o)), scale(s) {}
};

ScaledOperator operator*(const ScaledOperator& a, const ScaledOperator& b);
ScaledOperator operator+(const ScaledOperator& a, const ScaledOperator& b);
ScaledOperator operator-(const ScaledOperator& a, const ScaledOperator& b);
ScaledOperator scaled(cplx c, const ScaledOperator& a);

/// [A,B]_f = AB - (-1)^{p(A)p(B)} f BA
ScaledOperator graded_bracket(const ScaledOperator& a, const ScaledOperator& b, cplx f = 1.0);

/// residual(a,b) / max(1, scale(a), scale(b))
double scaled_residual(const ScaledOperator& a, const ScaledOperator& b);
double scaled_residual_cols(const ScaledOperator& a, const ScaledOperator& b,
                            const std::vector<std::uint8_t>& keep_cols);

}  // namespace qblab
