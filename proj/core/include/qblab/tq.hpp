#pragma once

#include "qblab/characters.hpp"
#include "qblab/loperators.hpp"

namespace qblab {

class Sampler;

struct LatticeConfig {
    std::vector<cplx> xi;  // one inhomogeneity per site

    explicit LatticeConfig(std::vector<cplx> inhomogeneities);
    int sites() const { return static_cast<int>(xi.size()); }
};

/// Small dense complex matrix for transfer-matrix results.
class CMatrix {
public:
    explicit CMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {}
    static CMatrix identity(int n);

    int size() const { return n_; }
    cplx& at(int r, int c) { return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c)]; }
    cplx at(int r, int c) const { return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c)]; }

    CMatrix operator*(const CMatrix& o) const;
    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator-(const CMatrix& o) const;
    CMatrix scaled(cplx c) const;
    CMatrix left_diag(std::span<const cplx> d) const;  // diag(d) * M
    double max_abs() const;

private:
    int n_;
    std::vector<cplx> a_;
};

double max_abs_diff(const CMatrix& a, const CMatrix& b);
double commutator_residual(const CMatrix& a, const CMatrix& b);

/// Per-mode trace chamber for a twist: bosonic modes whose geometric ratio
/// exceeds one are summed over the mirrored module (analytic continuation of
/// the same rational entries). `margin_powers` guards the q-power corrections
/// the monodromy and content shifts can apply to the ratio.
struct TraceChamber {
    std::set<int> flipped;
    double worst_ratio = 0.0;  // max effective |ratio| among summed tails

    double tail(int cutoff) const;
};

TraceChamber classify_twist(const IndexSet& iset, const TwistParams& twist, cplx q,
                            int margin_powers, bool allow_continuation);

/// Twist values with geometric modulus separation wide enough that every
/// chamber decision at the given site count clears its q-power margin.
TwistParams random_convergent_twist(Sampler& rng, const ParityProfile& prof, cplx q, int sites);

/// Diagonal trace weight on the Fock basis: product over modes of
/// (z_a / z_i)^{n_{ia}}.
SparseOperator boundary_operator_fock(const FockSpace& space, const TwistParams& twist);

/// Closed product form of the graded trace of the boundary weight.
cplx normalization_Z(const IndexSet& iset, const TwistParams& twist);

struct ZTraceResult {
    cplx value;
    double tail_bound;
};

ZTraceResult normalization_Z_trace(const FockSpace& space, const TwistParams& twist);

struct LatticeQResult {
    CMatrix matrix;
    double tail_bound;
    int cutoff;
};

/// Normalized graded trace of the oscillator monodromy over the truncated
/// Fock space. The normalization is the trace of the boundary weight at
/// content-shifted twist values on the same truncated space.
LatticeQResult lattice_Q(const IndexSet& iset, cplx q, cplx x, const LatticeConfig& config,
                         const TwistParams& twist, int cutoff, bool allow_continuation = false);

/// Recompute at cutoff and cutoff+3 until the change drops below tol
/// (cutoff doubles, capped); throws on cutoff exhaustion.
LatticeQResult lattice_Q_adaptive(const IndexSet& iset, cplx q, cplx x, const LatticeConfig& config,
                                  const TwistParams& twist, double tol, int start_cutoff,
                                  int max_cutoff, bool allow_continuation = false);

/// Diagonal closed form at one site; twist values are taken at their
/// row-dependent matrix elements z_k -> z_k q^{(-1)^{p(k)} delta_{ik}}.
CMatrix one_site_Q(const IndexSet& iset, cplx q, cplx x, cplx xi1, const TwistParams& twist);

/// Diagonal one-site transfer matrix for a Verma-type auxiliary weight.
CMatrix one_site_T_verma(const ParityProfile& prof, cplx q, const WeightVector& lambda, cplx x,
                         cplx xi1, const TwistParams& twist);

/// Graded auxiliary trace of spectral R-matrix products with the diagonal
/// twist on the auxiliary fundamental.
CMatrix lattice_T_fundamental(const ParityProfile& prof, cplx q, cplx x, const LatticeConfig& config,
                              const TwistParams& twist);

struct QQResult {
    double residual;
    int cutoff;     // 0 when evaluated from one-site closed forms
    double tail_bound;
};

/// Functional relation between the four index sets I, I+{i}, I+{j}, I+{i,j}
/// with the convention-fixed spectral shifts; same-parity and mixed-parity forms.
/// cutoff == 0 evaluates the one-site closed forms; otherwise traced lattice
/// operators with analytic continuation where a chamber requires it.
QQResult check_qq_relations(const IndexSet& base, int i, int j, cplx q, cplx x,
                            const LatticeConfig& config, const TwistParams& twist, int cutoff,
                            double adaptive_tol = 0.0, int max_cutoff = 0);

/// One-site factorization of the Verma transfer matrix into single-index Q's.
double check_verma_factorization(const ParityProfile& prof, cplx q, const WeightVector& lambda,
                                 cplx x, cplx xi1, const TwistParams& twist);

/// Content vector (multiplicity of each letter 1..M+N) of a product-basis state.
std::vector<int> site_content(const ParityProfile& prof, int sites, std::int64_t state);

}  // namespace qblab
