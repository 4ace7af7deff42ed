#include "qblab/tq.hpp"

#include "qblab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace qblab {

LatticeConfig::LatticeConfig(std::vector<cplx> inhomogeneities) : xi(std::move(inhomogeneities)) {
    if (xi.empty()) throw std::invalid_argument("LatticeConfig: need at least one site");
    for (const auto& v : xi)
        if (v == 0.0) throw std::invalid_argument("LatticeConfig: inhomogeneities must be nonzero");
}

CMatrix CMatrix::identity(int n) {
    CMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    if (n_ != o.n_) throw std::invalid_argument("CMatrix: size mismatch");
    CMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            const cplx v = at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < n_; ++j) r.at(i, j) += v * o.at(k, j);
        }
    return r;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    CMatrix r(n_);
    for (std::size_t t = 0; t < a_.size(); ++t) r.a_[t] = a_[t] + o.a_[t];
    return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    CMatrix r(n_);
    for (std::size_t t = 0; t < a_.size(); ++t) r.a_[t] = a_[t] - o.a_[t];
    return r;
}

CMatrix CMatrix::scaled(cplx c) const {
    CMatrix r(n_);
    for (std::size_t t = 0; t < a_.size(); ++t) r.a_[t] = c * a_[t];
    return r;
}

CMatrix CMatrix::left_diag(std::span<const cplx> d) const {
    CMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.at(i, j) = d[static_cast<std::size_t>(i)] * at(i, j);
    return r;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.at(i, j) - b.at(i, j)));
    return m;
}

double commutator_residual(const CMatrix& a, const CMatrix& b) {
    const CMatrix ab = a * b, ba = b * a;
    const double sc = std::max({1.0, ab.max_abs(), ba.max_abs()});
    return max_abs_diff(ab, ba) / sc;
}

double TraceChamber::tail(int cutoff) const {
    if (worst_ratio <= 0.0) return 0.0;
    if (worst_ratio >= 1.0) return 1.0;
    return std::pow(worst_ratio, cutoff + 1) / (1.0 - worst_ratio);
}

TraceChamber classify_twist(const IndexSet& iset, const TwistParams& twist, cplx q,
                            int margin_powers, bool allow_continuation) {
    const auto& prof = iset.profile();
    TraceChamber ch;
    const double aq = std::abs(q);
    const double qspread = std::pow(std::max(aq, 1.0 / aq), margin_powers);
    int mode = 0;
    for (int i : iset.members())
        for (int a : iset.complement()) {
            const bool fermionic = (prof.parity(i) + prof.parity(a)) % 2 == 1;
            if (!fermionic) {
                const double w = std::abs(twist.at(a) / twist.at(i));
                if (w * qspread < 1.0) {
                    ch.worst_ratio = std::max(ch.worst_ratio, w * qspread);
                } else if (w / qspread > 1.0 && allow_continuation) {
                    ch.flipped.insert(mode);
                    ch.worst_ratio = std::max(ch.worst_ratio, qspread / w);
                } else if (w >= 1.0 && !allow_continuation) {
                    throw std::invalid_argument(
                        "non-convergent twist: need |z_a/z_i| < 1 for every bosonic mode");
                } else {
                    // content-shifted normalization traces sample ratios up to
                    // w q^{-margin}, so the boundary needs clearance either way
                    throw std::invalid_argument(
                        "twist sits too close to the trace convergence boundary for mode ratio |z_a/z_i|");
                }
            }
            ++mode;
        }
    return ch;
}

TwistParams random_convergent_twist(Sampler& rng, const ParityProfile& prof, cplx q, int sites) {
    const double aq = std::abs(q);
    const double sep = std::pow(std::min(aq, 1.0 / aq), 2 * sites + 2) / 4.0;
    std::vector<cplx> z;
    double mod = 1.0;
    for (int k = 0; k < prof.size(); ++k) {
        const double th = rng.uniform(0.0, 6.283185307179586);
        z.push_back(cplx(mod * std::cos(th), mod * std::sin(th)));
        mod *= sep * rng.uniform(0.6, 1.0);
    }
    return TwistParams(std::move(z));
}

SparseOperator boundary_operator_fock(const FockSpace& space, const TwistParams& twist) {
    const auto& modes = space.modes();
    std::vector<cplx> diag(static_cast<std::size_t>(space.dim()), 1.0);
    for (std::int64_t s = 0; s < space.dim(); ++s)
        for (int k = 0; k < static_cast<int>(modes.size()); ++k) {
            const auto& m = modes[static_cast<std::size_t>(k)];
            const cplx w = twist.at(m.a) / twist.at(m.i);
            diag[static_cast<std::size_t>(s)] *= pow_int(w, space.number_value(s, k));
        }
    return SparseOperator::diagonal(space.space(), diag);
}

cplx normalization_Z(const IndexSet& iset, const TwistParams& twist) {
    const auto& prof = iset.profile();
    cplx val = 1.0;
    for (int i : iset.members())
        for (int a : iset.complement()) {
            const cplx w = twist.at(a) / twist.at(i);
            const bool fermionic = (prof.parity(i) + prof.parity(a)) % 2 == 1;
            if (!fermionic && !(std::abs(w) < 1.0))
                throw std::invalid_argument("normalization_Z: non-convergent twist (|z_a/z_i| >= 1)");
            const cplx f = cplx(1.0) - w;
            val *= fermionic ? f : cplx(1.0) / f;
        }
    return val;
}

ZTraceResult normalization_Z_trace(const FockSpace& space, const TwistParams& twist) {
    const auto& prof = space.index_set().profile();
    cplx val = supertrace(boundary_operator_fock(space, twist));
    double tail = 0.0;
    int mode = 0;
    for (int i : space.index_set().members())
        for (int a : space.index_set().complement()) {
            const bool fermionic = (prof.parity(i) + prof.parity(a)) % 2 == 1;
            if (!fermionic) {
                double w = std::abs(twist.at(a) / twist.at(i));
                if (space.flipped(mode)) w = 1.0 / w;
                if (w >= 1.0)
                    throw std::invalid_argument("normalization_Z_trace: non-convergent twist for the chamber");
                tail += std::pow(w, space.cutoff() + 1) / (1.0 - w);
            }
            ++mode;
        }
    return {val, tail};
}

std::vector<int> site_content(const ParityProfile& prof, int sites, std::int64_t state) {
    const int d = prof.size();
    std::vector<int> c(static_cast<std::size_t>(d), 0);
    for (int s = 0; s < sites; ++s) {
        ++c[static_cast<std::size_t>(state % d)];
        state /= d;
    }
    return c;
}

namespace {

// trace weight with content-shifted twists, over the same flipped space
cplx content_Z(const FockSpace& space, const TwistParams& twist, const ParityProfile& prof,
               const std::vector<int>& content, cplx q) {
    const TwistParams shifted = twist.shifted(prof, content, q);
    return supertrace(boundary_operator_fock(space, shifted));
}

}  // namespace

LatticeQResult lattice_Q(const IndexSet& iset, cplx q, cplx x, const LatticeConfig& config,
                         const TwistParams& twist, int cutoff, bool allow_continuation) {
    if (x == 0.0) throw std::invalid_argument("lattice_Q: x must be nonzero");
    const auto& prof = iset.profile();
    const int L = config.sites();
    const TraceChamber ch = classify_twist(iset, twist, q, 2 * L + 2, allow_continuation);

    const FockSpace space(iset, cutoff, q, ch.flipped);
    const OscillatorSet osc = OscillatorSet::canonical(space);
    const LOperatorPair pair = build_L_pair(iset, space, osc, q);
    const GradedSpace v = GradedSpace::fundamental(prof);

    std::vector<GradedSpace> factors = {space.space()};
    for (int s = 0; s < L; ++s) factors.push_back(v);

    GradedSpace full = factors[0];
    for (int s = 1; s <= L; ++s) full = tensor(full, factors[static_cast<std::size_t>(s)]);
    SparseOperator mono = SparseOperator::identity(full);
    for (int k = L; k >= 1; --k) {
        SparseOperator a = evaluate_L(pair, config.xi[static_cast<std::size_t>(k - 1)] / x).matrix;
        for (int s = 2; s <= L; ++s) a = graded_kron(a, SparseOperator::identity(v));
        if (k != 1) {
            std::vector<int> perm(factors.size());
            for (std::size_t t = 0; t < perm.size(); ++t) perm[t] = static_cast<int>(t);
            std::swap(perm[1], perm[static_cast<std::size_t>(k)]);
            const SparseOperator p = factor_permutation(factors, perm);
            a = p * a * p;
        }
        mono = mono * a;
    }
    mono = mono * graded_kron(boundary_operator_fock(space, twist),
                              SparseOperator::identity([&] {
                                  GradedSpace rest = v;
                                  for (int s = 1; s < L; ++s) rest = tensor(rest, v);
                                  return rest;
                              }()));

    GradedSpace rest = v;
    for (int s = 1; s < L; ++s) rest = tensor(rest, v);
    const SparseOperator traced = partial_supertrace_first(mono, space.space(), rest, rest);

    const std::int64_t dim_w = rest.dim();
    CMatrix out(static_cast<int>(dim_w));
    std::vector<cplx> zinv(static_cast<std::size_t>(dim_w));
    for (std::int64_t s = 0; s < dim_w; ++s) {
        const cplx zc = content_Z(space, twist, prof, site_content(prof, L, s), q);
        if (zc == 0.0) throw std::invalid_argument("lattice_Q: vanishing normalization trace");
        zinv[static_cast<std::size_t>(s)] = cplx(1.0) / zc;
    }
    for (const auto& e : traced.entries()) out.at(static_cast<int>(e.row), static_cast<int>(e.col)) = e.val;
    out = out.left_diag(zinv);
    return {std::move(out), ch.tail(cutoff), cutoff};
}

LatticeQResult lattice_Q_adaptive(const IndexSet& iset, cplx q, cplx x, const LatticeConfig& config,
                                  const TwistParams& twist, double tol, int start_cutoff,
                                  int max_cutoff, bool allow_continuation) {
    int c = start_cutoff;
    while (true) {
        LatticeQResult lo = lattice_Q(iset, q, x, config, twist, c, allow_continuation);
        LatticeQResult hi = lattice_Q(iset, q, x, config, twist, c + 3, allow_continuation);
        const double delta = max_abs_diff(lo.matrix, hi.matrix);
        if (delta < tol) {
            hi.tail_bound = std::max(delta, hi.tail_bound);
            return hi;
        }
        if (2 * c > max_cutoff)
            throw std::runtime_error("lattice_Q_adaptive: cutoff exhaustion before reaching tolerance");
        c *= 2;
    }
}

CMatrix one_site_Q(const IndexSet& iset, cplx q, cplx x, cplx xi1, const TwistParams& twist) {
    const auto& prof = iset.profile();
    const int d = prof.size();
    CMatrix out = CMatrix::identity(d);
    for (int i : iset.members()) {
        const long long si = prof.sign(i);
        cplx prod = 1.0;
        for (int b : iset.complement()) {
            const cplx num = cplx(1.0) - twist.at(b) * pow_int(q, -si) / twist.at(i);
            const cplx den = cplx(1.0) - twist.at(b) * pow_int(q, si) / twist.at(i);
            if (den == 0.0) throw std::invalid_argument("one_site_Q: pole in the twist product");
            const cplx ratio = num / den;
            prod *= ((prof.parity(i) + prof.parity(b)) % 2) ? cplx(1.0) / ratio : ratio;
        }
        out.at(i - 1, i - 1) = cplx(1.0) - (x / xi1) * prod;
    }
    return out;
}

CMatrix one_site_T_verma(const ParityProfile& prof, cplx q, const WeightVector& lambda, cplx x,
                         cplx xi1, const TwistParams& twist) {
    const int d = prof.size();
    if (static_cast<int>(lambda.lambda.size()) != d)
        throw std::invalid_argument("one_site_T_verma: weight size mismatch");
    CMatrix out(d);
    for (int i = 1; i <= d; ++i) {
        const long long si = prof.sign(i);
        // row-dependent twist matrix elements
        std::vector<cplx> zr = twist.z;
        zr[static_cast<std::size_t>(i - 1)] *= pow_int(q, si);
        const TwistParams tw(zr);
        cplx prod = 1.0;
        for (int b = 1; b <= d; ++b) {
            if (b == i) continue;
            const cplx num = cplx(1.0) - tw.at(b) / tw.at(i);
            const cplx den = cplx(1.0) - tw.at(b) * pow_int(q, 2 * si) / tw.at(i);
            if (den == 0.0) throw std::invalid_argument("one_site_T_verma: pole in the twist product");
            const cplx ratio = num / den;
            prod *= ((prof.parity(i) + prof.parity(b)) % 2) ? cplx(1.0) / ratio : ratio;
        }
        cplx shift_exp = static_cast<double>(si) * lambda.lambda[static_cast<std::size_t>(i - 1)];
        for (int k = 1; k < i; ++k) shift_exp -= static_cast<double>(prof.sign(k));
        const cplx zp = verma_supercharacter(lambda, prof, tw);
        out.at(i - 1, i - 1) = zp * (cplx(1.0) - (x / xi1) * std::pow(q, cplx(-2.0) * shift_exp) * prod);
    }
    return out;
}

CMatrix lattice_T_fundamental(const ParityProfile& prof, cplx q, cplx x, const LatticeConfig& config,
                              const TwistParams& twist) {
    if (x == 0.0) throw std::invalid_argument("lattice_T_fundamental: x must be nonzero");
    const int d = prof.size();
    const int L = config.sites();
    const GradedSpace v = GradedSpace::fundamental(prof);
    const auto [rc, rbc] = build_constant_r(prof, q);

    std::vector<GradedSpace> factors(static_cast<std::size_t>(L) + 1, v);
    GradedSpace full = v;
    for (int s = 1; s <= L; ++s) full = tensor(full, v);

    SparseOperator mono = SparseOperator::identity(full);
    for (int k = L; k >= 1; --k) {
        SparseOperator a = rc - rbc.scaled(x / config.xi[static_cast<std::size_t>(k - 1)]);
        for (int s = 2; s <= L; ++s) a = graded_kron(a, SparseOperator::identity(v));
        if (k != 1) {
            std::vector<int> perm(factors.size());
            for (std::size_t t = 0; t < perm.size(); ++t) perm[t] = static_cast<int>(t);
            std::swap(perm[1], perm[static_cast<std::size_t>(k)]);
            const SparseOperator p = factor_permutation(factors, perm);
            a = p * a * p;
        }
        mono = mono * a;
    }
    std::vector<cplx> dz(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) dz[static_cast<std::size_t>(k - 1)] = twist.at(k);
    GradedSpace rest = v;
    for (int s = 1; s < L; ++s) rest = tensor(rest, v);
    mono = mono * graded_kron(SparseOperator::diagonal(v, dz), SparseOperator::identity(rest));

    const SparseOperator traced = partial_supertrace_first(mono, v, rest, rest);
    CMatrix out(rest.dim());
    for (const auto& e : traced.entries()) out.at(static_cast<int>(e.row), static_cast<int>(e.col)) = e.val;
    return out;
}

QQResult check_qq_relations(const IndexSet& base, int i, int j, cplx q, cplx x,
                            const LatticeConfig& config, const TwistParams& twist, int cutoff,
                            double adaptive_tol, int max_cutoff) {
    const auto& prof = base.profile();
    const int d = prof.size();
    if (i == j || base.contains(i) || base.contains(j))
        throw std::invalid_argument("check_qq_relations: need distinct i, j outside the base set");

    auto with = [&](std::initializer_list<int> extra) {
        std::vector<int> m = base.members();
        m.insert(m.end(), extra.begin(), extra.end());
        return IndexSet(prof, std::move(m));
    };
    const IndexSet set_i = with({i}), set_j = with({j}), set_ij = with({i, j});
    for (const auto* s : {&base, &set_i, &set_j, &set_ij})
        if (!s->supported())
            throw std::invalid_argument("check_qq_relations: index set " + s->to_string() +
                                        " has no oscillator realization");

    const long long si = 1 - 2 * prof.parity(i);
    const cplx shp = pow_int(q, si);   // x q^{1-2p(i)}
    const cplx shm = pow_int(q, -si);  // x q^{-1+2p(i)}

    const int L = config.sites();
    const std::int64_t dim_w = [&] {
        std::int64_t t = 1;
        for (int s = 0; s < L; ++s) t *= d;
        return t;
    }();

    int used_cutoff = 0;
    double tail = 0.0;
    auto evalq = [&](const IndexSet& s, cplx arg) {
        if (cutoff == 0) {
            if (L != 1)
                throw std::invalid_argument("check_qq_relations: closed forms are single-site only");
            return one_site_Q(s, q, arg, config.xi[0], twist);
        }
        LatticeQResult r = (adaptive_tol > 0.0)
                               ? lattice_Q_adaptive(s, q, arg, config, twist, adaptive_tol, cutoff,
                                                    max_cutoff > 0 ? max_cutoff : 8 * cutoff, true)
                               : lattice_Q(s, q, arg, config, twist, cutoff, true);
        used_cutoff = std::max(used_cutoff, r.cutoff);
        tail = std::max(tail, r.tail_bound);
        return r.matrix;
    };

    std::vector<cplx> zi(static_cast<std::size_t>(dim_w)), zj(static_cast<std::size_t>(dim_w));
    for (std::int64_t s = 0; s < dim_w; ++s) {
        const auto c = site_content(prof, L, s);
        zi[static_cast<std::size_t>(s)] =
            twist.at(i) * pow_int(q, static_cast<long long>(prof.sign(i)) * c[static_cast<std::size_t>(i - 1)]);
        zj[static_cast<std::size_t>(s)] =
            twist.at(j) * pow_int(q, static_cast<long long>(prof.sign(j)) * c[static_cast<std::size_t>(j - 1)]);
    }
    std::vector<cplx> zdiff(static_cast<std::size_t>(dim_w));
    for (std::size_t s = 0; s < zdiff.size(); ++s) zdiff[s] = zi[s] - zj[s];

    CMatrix lhs(static_cast<int>(dim_w)), rhs(static_cast<int>(dim_w));
    if (prof.parity(i) == prof.parity(j)) {
        lhs = (evalq(base, x * shp) * evalq(set_ij, x * shm)).left_diag(zdiff);
        rhs = (evalq(set_i, x * shm) * evalq(set_j, x * shp)).left_diag(zi) -
              (evalq(set_i, x * shp) * evalq(set_j, x * shm)).left_diag(zj);
    } else {
        lhs = (evalq(set_i, x * shm) * evalq(set_j, x * shp)).left_diag(zdiff);
        rhs = (evalq(base, x * shp) * evalq(set_ij, x * shm)).left_diag(zi) -
              (evalq(base, x * shm) * evalq(set_ij, x * shp)).left_diag(zj);
    }
    const double sc = std::max({1.0, lhs.max_abs(), rhs.max_abs()});
    return {max_abs_diff(lhs, rhs) / sc, used_cutoff, tail};
}

double check_verma_factorization(const ParityProfile& prof, cplx q, const WeightVector& lambda,
                                 cplx x, cplx xi1, const TwistParams& twist) {
    const int d = prof.size();
    const CMatrix t = one_site_T_verma(prof, q, lambda, x, xi1, twist);

    CMatrix rhs(d);
    for (int i = 1; i <= d; ++i) {
        // the row's matrix elements of the operator-valued twist
        std::vector<cplx> zr = twist.z;
        zr[static_cast<std::size_t>(i - 1)] *= pow_int(q, prof.sign(i));
        cplx acc = verma_supercharacter(lambda, prof, TwistParams(zr));
        for (int jj = 1; jj <= d; ++jj) {
            cplx shift_exp = static_cast<double>(prof.sign(jj)) * lambda.lambda[static_cast<std::size_t>(jj - 1)];
            for (int k = 1; k < jj; ++k) shift_exp -= static_cast<double>(prof.sign(k));
            const cplx arg = x * std::pow(q, cplx(-2.0) * shift_exp);
            const CMatrix qj = one_site_Q(IndexSet(prof, {jj}), q, arg, xi1, twist);
            acc *= qj.at(i - 1, i - 1);
        }
        rhs.at(i - 1, i - 1) = acc;
    }
    const double sc = std::max({1.0, t.max_abs(), rhs.max_abs()});
    return max_abs_diff(t, rhs) / sc;
}

}  // namespace qblab
