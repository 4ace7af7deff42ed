#include "qblab/graded.hpp"

#include <algorithm>
#include <cmath>

namespace qblab {

ParityProfile::ParityProfile(int m, int n) : m_(m), n_(n) {
    if (m < 0 || n < 0 || m + n < 1)
        throw std::invalid_argument("ParityProfile: need M,N >= 0 and M+N >= 1");
}

int ParityProfile::parity(int i) const {
    if (i < 1 || i > m_ + n_) throw std::out_of_range("ParityProfile::parity: index out of range");
    return i <= m_ ? 0 : 1;
}

GradedSpace::GradedSpace(std::vector<std::uint8_t> parity) : parity_(std::move(parity)) {
    if (parity_.empty()) throw std::invalid_argument("GradedSpace: empty basis");
    for (auto p : parity_)
        if (p > 1) throw std::invalid_argument("GradedSpace: parity must be 0 or 1");
}

GradedSpace GradedSpace::fundamental(const ParityProfile& p) {
    std::vector<std::uint8_t> par(static_cast<std::size_t>(p.size()));
    for (int i = 1; i <= p.size(); ++i) par[static_cast<std::size_t>(i - 1)] = static_cast<std::uint8_t>(p.parity(i));
    return GradedSpace(std::move(par));
}

GradedSpace GradedSpace::even(int dim) {
    if (dim < 1) throw std::invalid_argument("GradedSpace::even: dim must be positive");
    return GradedSpace(std::vector<std::uint8_t>(static_cast<std::size_t>(dim), 0));
}

GradedSpace tensor(const GradedSpace& a, const GradedSpace& b) {
    std::vector<std::uint8_t> par;
    par.reserve(static_cast<std::size_t>(a.dim()) * static_cast<std::size_t>(b.dim()));
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            par.push_back(static_cast<std::uint8_t>((a.parity(i) + b.parity(j)) % 2));
    return GradedSpace(std::move(par));
}

Tolerance::Tolerance(double abs, double drop) : abs_tol(abs), drop_tol(drop) {
    if (!(0 < drop && drop < abs && abs < 1))
        throw std::invalid_argument("Tolerance: need 0 < drop_tol < abs_tol < 1");
}

SparseOperator::SparseOperator(GradedSpace rows, GradedSpace cols, int parity)
    : rows_(std::move(rows)), cols_(std::move(cols)), parity_(parity % 2) {
    if (parity < 0) throw std::invalid_argument("SparseOperator: parity must be 0 or 1");
}

SparseOperator SparseOperator::identity(const GradedSpace& s) {
    SparseOperator r(s, s, 0);
    r.entries_.reserve(static_cast<std::size_t>(s.dim()));
    for (int i = 0; i < s.dim(); ++i) r.entries_.push_back({i, i, 1.0});
    return r;
}

SparseOperator SparseOperator::diagonal(const GradedSpace& s, const std::vector<cplx>& values) {
    if (static_cast<int>(values.size()) != s.dim())
        throw std::invalid_argument("SparseOperator::diagonal: size mismatch");
    SparseOperator r(s, s, 0);
    for (int i = 0; i < s.dim(); ++i)
        if (values[static_cast<std::size_t>(i)] != 0.0) r.entries_.push_back({i, i, values[static_cast<std::size_t>(i)]});
    return r;
}

cplx SparseOperator::entry(std::int64_t r, std::int64_t c) const {
    require_finalized();
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<std::int64_t, std::int64_t>{r, c},
                               [](const Entry& e, const std::pair<std::int64_t, std::int64_t>& k) {
                                   return e.row != k.first ? e.row < k.first : e.col < k.second;
                               });
    if (it != entries_.end() && it->row == r && it->col == c) return it->val;
    return 0.0;
}

void SparseOperator::insert(std::int64_t r, std::int64_t c, cplx v) {
    if (r < 0 || r >= rows_.dim() || c < 0 || c >= cols_.dim())
        throw std::out_of_range("SparseOperator::insert: index out of range");
    entries_.push_back({r, c, v});
    finalized_ = false;
}

void SparseOperator::finalize(double drop_tol) {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Entry> merged;
    merged.reserve(entries_.size());
    for (const auto& e : entries_) {
        if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col)
            merged.back().val += e.val;
        else
            merged.push_back(e);
    }
    entries_.clear();
    for (const auto& e : merged)
        if (std::abs(e.val) > drop_tol) entries_.push_back(e);
    for (const auto& e : entries_)
        if ((rows_.parity(static_cast<int>(e.row)) + cols_.parity(static_cast<int>(e.col))) % 2 != parity_)
            throw std::invalid_argument("SparseOperator: entry violates the declared parity");
    finalized_ = true;
}

void SparseOperator::require_finalized() const {
    if (!finalized_) throw std::logic_error("SparseOperator: finalize() required before use");
}

SparseOperator SparseOperator::operator+(const SparseOperator& o) const {
    require_finalized();
    o.require_finalized();
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("operator+: shape mismatch");
    if (!entries_.empty() && !o.entries_.empty() && parity_ != o.parity_)
        throw std::invalid_argument("operator+: parity mismatch");
    SparseOperator r(rows_, cols_, entries_.empty() ? o.parity_ : parity_);
    r.entries_.reserve(entries_.size() + o.entries_.size());
    std::size_t i = 0, j = 0;
    auto less = [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    };
    while (i < entries_.size() || j < o.entries_.size()) {
        if (j == o.entries_.size() || (i < entries_.size() && less(entries_[i], o.entries_[j]))) {
            r.entries_.push_back(entries_[i++]);
        } else if (i == entries_.size() || less(o.entries_[j], entries_[i])) {
            r.entries_.push_back(o.entries_[j++]);
        } else {
            cplx v = entries_[i].val + o.entries_[j].val;
            if (v != 0.0) r.entries_.push_back({entries_[i].row, entries_[i].col, v});
            ++i;
            ++j;
        }
    }
    return r;
}

SparseOperator SparseOperator::operator-(const SparseOperator& o) const { return *this + o.scaled(-1.0); }

SparseOperator SparseOperator::operator*(const SparseOperator& o) const {
    require_finalized();
    o.require_finalized();
    if (cols_ != o.rows_) throw std::invalid_argument("operator*: inner space mismatch");
    // row pointer for o
    const std::int64_t orows = o.rows_.dim();
    std::vector<std::size_t> rptr(static_cast<std::size_t>(orows) + 1, 0);
    for (const auto& e : o.entries_) ++rptr[static_cast<std::size_t>(e.row) + 1];
    for (std::size_t k = 1; k < rptr.size(); ++k) rptr[k] += rptr[k - 1];

    SparseOperator r(rows_, o.cols_, (parity_ + o.parity_) % 2);
    std::vector<cplx> scratch(static_cast<std::size_t>(o.cols_.dim()), 0.0);
    std::vector<std::int64_t> touched;
    std::size_t i = 0;
    while (i < entries_.size()) {
        const std::int64_t row = entries_[i].row;
        touched.clear();
        for (; i < entries_.size() && entries_[i].row == row; ++i) {
            const std::int64_t k = entries_[i].col;
            const cplx v = entries_[i].val;
            for (std::size_t t = rptr[static_cast<std::size_t>(k)]; t < rptr[static_cast<std::size_t>(k) + 1]; ++t) {
                const auto& be = o.entries_[t];
                if (scratch[static_cast<std::size_t>(be.col)] == 0.0) touched.push_back(be.col);
                scratch[static_cast<std::size_t>(be.col)] += v * be.val;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (auto c : touched) {
            if (std::abs(scratch[static_cast<std::size_t>(c)]) > 0.0)
                r.entries_.push_back({row, c, scratch[static_cast<std::size_t>(c)]});
            scratch[static_cast<std::size_t>(c)] = 0.0;
        }
    }
    return r;
}

SparseOperator SparseOperator::scaled(cplx c) const {
    require_finalized();
    SparseOperator r(rows_, cols_, parity_);
    if (c == 0.0) return r;
    r.entries_ = entries_;
    for (auto& e : r.entries_) e.val *= c;
    return r;
}

SparseOperator SparseOperator::transpose() const {
    require_finalized();
    SparseOperator r(cols_, rows_, parity_);
    r.entries_.reserve(entries_.size());
    for (const auto& e : entries_) r.entries_.push_back({e.col, e.row, e.val});
    std::sort(r.entries_.begin(), r.entries_.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return r;
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e.val));
    return m;
}

std::vector<cplx> SparseOperator::apply(std::span<const cplx> v) const {
    require_finalized();
    if (static_cast<std::int64_t>(v.size()) != cols_.dim())
        throw std::invalid_argument("apply: vector size mismatch");
    std::vector<cplx> out(static_cast<std::size_t>(rows_.dim()), 0.0);
    for (const auto& e : entries_) out[static_cast<std::size_t>(e.row)] += e.val * v[static_cast<std::size_t>(e.col)];
    return out;
}

SparseOperator SparseOperator::restrict_cols(const std::vector<std::uint8_t>& keep) const {
    require_finalized();
    if (static_cast<int>(keep.size()) != cols_.dim())
        throw std::invalid_argument("restrict_cols: mask size mismatch");
    SparseOperator r(rows_, cols_, parity_);
    for (const auto& e : entries_)
        if (keep[static_cast<std::size_t>(e.col)]) r.entries_.push_back(e);
    return r;
}

SparseOperator matrix_unit(const GradedSpace& s, int i, int j) {
    if (i < 1 || j < 1 || i > s.dim() || j > s.dim())
        throw std::out_of_range("matrix_unit: index out of range");
    SparseOperator r(s, s, (s.parity(i - 1) + s.parity(j - 1)) % 2);
    r.insert(i - 1, j - 1, 1.0);
    r.finalize();
    return r;
}

SparseOperator graded_kron(const SparseOperator& a, const SparseOperator& b) {
    GradedSpace rows = tensor(a.rows(), b.rows());
    GradedSpace cols = tensor(a.cols(), b.cols());
    SparseOperator r(rows, cols, (a.parity() + b.parity()) % 2);
    const std::int64_t br = b.rows().dim(), bc = b.cols().dim();
    for (const auto& ea : a.entries()) {
        const double sgn = (b.parity() && a.cols().parity(static_cast<int>(ea.col))) ? -1.0 : 1.0;
        for (const auto& eb : b.entries()) {
            r.insert(ea.row * br + eb.row, ea.col * bc + eb.col, ea.val * sgn * eb.val);
        }
    }
    r.finalize(0.0);
    return r;
}

SparseOperator embed_factor(const SparseOperator& a, int pos, std::span<const GradedSpace> factors) {
    if (pos < 0 || pos >= static_cast<int>(factors.size()))
        throw std::out_of_range("embed_factor: position out of range");
    if (a.rows() != factors[static_cast<std::size_t>(pos)] || a.cols() != factors[static_cast<std::size_t>(pos)])
        throw std::invalid_argument("embed_factor: space mismatch at position");
    SparseOperator acc = (pos == 0) ? a : SparseOperator::identity(factors[0]);
    for (std::size_t k = 1; k < factors.size(); ++k)
        acc = graded_kron(acc, static_cast<int>(k) == pos ? a : SparseOperator::identity(factors[k]));
    return acc;
}

SparseOperator graded_swap(const GradedSpace& a, const GradedSpace& b) {
    SparseOperator r(tensor(b, a), tensor(a, b), 0);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j) {
            const double sgn = (a.parity(i) && b.parity(j)) ? -1.0 : 1.0;
            r.insert(static_cast<std::int64_t>(j) * a.dim() + i, static_cast<std::int64_t>(i) * b.dim() + j, sgn);
        }
    r.finalize(0.0);
    return r;
}

SparseOperator factor_permutation(std::span<const GradedSpace> factors, std::span<const int> perm) {
    const int n = static_cast<int>(factors.size());
    if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("factor_permutation: size mismatch");
    std::vector<GradedSpace> out_factors;
    out_factors.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) out_factors.push_back(factors[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])]);

    GradedSpace cols = factors[0];
    for (int k = 1; k < n; ++k) cols = tensor(cols, factors[static_cast<std::size_t>(k)]);
    GradedSpace rows = out_factors[0];
    for (int k = 1; k < n; ++k) rows = tensor(rows, out_factors[static_cast<std::size_t>(k)]);

    std::vector<std::int64_t> dims(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) dims[static_cast<std::size_t>(k)] = factors[static_cast<std::size_t>(k)].dim();

    SparseOperator r(rows, cols, 0);
    std::vector<int> idx(static_cast<std::size_t>(n));
    const std::int64_t total = cols.dim();
    for (std::int64_t c = 0; c < total; ++c) {
        std::int64_t t = c;
        for (int k = n - 1; k >= 0; --k) {
            idx[static_cast<std::size_t>(k)] = static_cast<int>(t % dims[static_cast<std::size_t>(k)]);
            t /= dims[static_cast<std::size_t>(k)];
        }
        std::int64_t rrow = 0;
        for (int s = 0; s < n; ++s) {
            const int src = perm[static_cast<std::size_t>(s)];
            rrow = rrow * dims[static_cast<std::size_t>(src)] + idx[static_cast<std::size_t>(src)];
        }
        // Koszul sign: source pairs whose order is reversed by the permutation
        int sgn = 0;
        for (int s1 = 0; s1 < n; ++s1)
            for (int s2 = s1 + 1; s2 < n; ++s2) {
                // positions of source factors s1, s2 in the target order
                int t1 = 0, t2 = 0;
                for (int t0 = 0; t0 < n; ++t0) {
                    if (perm[static_cast<std::size_t>(t0)] == s1) t1 = t0;
                    if (perm[static_cast<std::size_t>(t0)] == s2) t2 = t0;
                }
                if (t1 > t2) {
                    const int p1 = factors[static_cast<std::size_t>(s1)].parity(idx[static_cast<std::size_t>(s1)]);
                    const int p2 = factors[static_cast<std::size_t>(s2)].parity(idx[static_cast<std::size_t>(s2)]);
                    sgn += p1 * p2;
                }
            }
        r.insert(rrow, c, (sgn % 2) ? -1.0 : 1.0);
    }
    r.finalize(0.0);
    return r;
}

cplx supertrace(const SparseOperator& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("supertrace: operator not square");
    cplx s = 0.0;
    for (const auto& e : a.entries())
        if (e.row == e.col) s += (a.rows().parity(static_cast<int>(e.row)) ? -1.0 : 1.0) * e.val;
    return s;
}

SparseOperator partial_supertrace_first(const SparseOperator& a, const GradedSpace& first,
                                        const GradedSpace& rest_rows, const GradedSpace& rest_cols) {
    const std::int64_t d0 = first.dim();
    const std::int64_t rr = rest_rows.dim(), rc = rest_cols.dim();
    if (a.rows().dim() != d0 * rr || a.cols().dim() != d0 * rc)
        throw std::invalid_argument("partial_supertrace_first: dimension mismatch");
    SparseOperator out(rest_rows, rest_cols, a.parity());
    for (const auto& e : a.entries()) {
        const std::int64_t s_r = e.row / rr, r = e.row % rr;
        const std::int64_t s_c = e.col / rc, c = e.col % rc;
        if (s_r != s_c) continue;
        out.insert(r, c, (first.parity(static_cast<int>(s_r)) ? -1.0 : 1.0) * e.val);
    }
    out.finalize(0.0);
    return out;
}

double residual(const SparseOperator& a, const SparseOperator& b) {
    if (a.rows().dim() != b.rows().dim() || a.cols().dim() != b.cols().dim())
        throw std::invalid_argument("residual: shape mismatch");
    double m = 0.0;
    std::size_t i = 0, j = 0;
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    auto less = [](const SparseOperator::Entry& x, const SparseOperator::Entry& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    };
    while (i < ea.size() || j < eb.size()) {
        if (j == eb.size() || (i < ea.size() && less(ea[i], eb[j]))) {
            m = std::max(m, std::abs(ea[i].val));
            ++i;
        } else if (i == ea.size() || less(eb[j], ea[i])) {
            m = std::max(m, std::abs(eb[j].val));
            ++j;
        } else {
            m = std::max(m, std::abs(ea[i].val - eb[j].val));
            ++i;
            ++j;
        }
    }
    return m;
}

cplx pow_int(cplx base, long long e) {
    if (e == 0) return 1.0;
    const bool neg = e < 0;
    unsigned long long k = neg ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    cplx acc = 1.0, b = neg ? cplx(1.0) / base : base;
    while (k) {
        if (k & 1ULL) acc *= b;
        b *= b;
        k >>= 1ULL;
    }
    return acc;
}

ScaledOperator::ScaledOperator(SparseOperator o) : op(std::move(o)) { scale = std::max(1.0, op.max_abs()); }

ScaledOperator operator*(const ScaledOperator& a, const ScaledOperator& b) {
    return {a.op * b.op, a.scale * b.scale};
}

ScaledOperator operator+(const ScaledOperator& a, const ScaledOperator& b) {
    return {a.op + b.op, std::max(a.scale, b.scale)};
}

ScaledOperator operator-(const ScaledOperator& a, const ScaledOperator& b) {
    return {a.op - b.op, std::max(a.scale, b.scale)};
}

ScaledOperator scaled(cplx c, const ScaledOperator& a) { return {a.op.scaled(c), std::abs(c) * a.scale}; }

ScaledOperator graded_bracket(const ScaledOperator& a, const ScaledOperator& b, cplx f) {
    const double sgn = (a.op.parity() && b.op.parity()) ? -1.0 : 1.0;
    SparseOperator r = a.op * b.op - (b.op * a.op).scaled(sgn * f);
    return {std::move(r), std::max(1.0, std::max(std::abs(f), 1.0) * a.scale * b.scale)};
}

double scaled_residual(const ScaledOperator& a, const ScaledOperator& b) {
    return residual(a.op, b.op) / std::max({1.0, a.scale, b.scale});
}

double scaled_residual_cols(const ScaledOperator& a, const ScaledOperator& b,
                            const std::vector<std::uint8_t>& keep_cols) {
    return residual(a.op.restrict_cols(keep_cols), b.op.restrict_cols(keep_cols)) /
           std::max({1.0, a.scale, b.scale});
}

}  // namespace qblab
