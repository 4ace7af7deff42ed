#include "qblab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qblab {

IndexSet::IndexSet(ParityProfile profile, std::vector<int> members)
    : profile_(profile), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (int k : members_)
        if (k < 1 || k > profile_.size()) throw std::out_of_range("IndexSet: member out of range");
    for (int k = 1; k <= profile_.size(); ++k)
        if (!std::binary_search(members_.begin(), members_.end(), k)) complement_.push_back(k);
}

bool IndexSet::contains(int k) const {
    return std::binary_search(members_.begin(), members_.end(), k);
}

IndexSet::Shape IndexSet::shape() const {
    const std::size_t n = members_.size();
    const std::size_t d = static_cast<std::size_t>(profile_.size());
    if (n == 0) return Shape::empty;
    if (n == d) return Shape::full;
    if (n == 1) return Shape::single;
    if (n == d - 1) return Shape::co_single;
    return Shape::unsupported;
}

std::string IndexSet::to_string() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t k = 0; k < members_.size(); ++k) os << (k ? "," : "") << members_[k];
    os << "}";
    return os.str();
}

FockSpace::FockSpace(IndexSet iset, int cutoff, cplx q, std::set<int> flipped_modes)
    : iset_(std::move(iset)), cutoff_(cutoff), q_(q), flipped_(std::move(flipped_modes)), space_(GradedSpace::even(1)) {
    if (cutoff_ < 2) throw std::invalid_argument("FockSpace: cutoff must be >= 2");
    const auto& p = iset_.profile();
    for (int i : iset_.members())
        for (int a : iset_.complement())
            modes_.push_back({i, a, (p.parity(i) + p.parity(a)) % 2 == 1});
    for (const auto& m : modes_) local_dim_.push_back(m.fermionic ? 2 : cutoff_ + 1);
    for (int k : flipped_)
        if (k < 0 || k >= static_cast<int>(modes_.size()) || modes_[static_cast<std::size_t>(k)].fermionic)
            throw std::invalid_argument("FockSpace: only bosonic modes can be flipped");
    space_ = build_space();
}

GradedSpace FockSpace::build_space() const {
    std::int64_t dim = 1;
    for (int d : local_dim_) dim *= d;
    std::vector<std::uint8_t> par(static_cast<std::size_t>(dim));
    for (std::int64_t s = 0; s < dim; ++s) {
        int pr = 0;
        std::int64_t t = s;
        for (int k = static_cast<int>(modes_.size()) - 1; k >= 0; --k) {
            const int m = static_cast<int>(t % local_dim_[static_cast<std::size_t>(k)]);
            t /= local_dim_[static_cast<std::size_t>(k)];
            if (modes_[static_cast<std::size_t>(k)].fermionic) pr += m;
        }
        par[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(pr % 2);
    }
    return GradedSpace(std::move(par));
}

int FockSpace::mode_index(int i, int a) const {
    for (int k = 0; k < static_cast<int>(modes_.size()); ++k)
        if (modes_[static_cast<std::size_t>(k)].i == i && modes_[static_cast<std::size_t>(k)].a == a) return k;
    throw std::invalid_argument("FockSpace: unknown mode");
}

int FockSpace::level(std::int64_t state, int mode) const {
    for (int k = static_cast<int>(modes_.size()) - 1; k > mode; --k)
        state /= local_dim_[static_cast<std::size_t>(k)];
    return static_cast<int>(state % local_dim_[static_cast<std::size_t>(mode)]);
}

long long FockSpace::number_value(std::int64_t state, int mode) const {
    const int m = level(state, mode);
    return flipped(mode) ? -1LL - m : m;
}

std::vector<std::uint8_t> FockSpace::interior(int margin) const {
    std::vector<std::uint8_t> keep(static_cast<std::size_t>(dim()), 1);
    for (std::int64_t s = 0; s < dim(); ++s)
        for (int k = 0; k < static_cast<int>(modes_.size()); ++k)
            if (!modes_[static_cast<std::size_t>(k)].fermionic && level(s, k) > cutoff_ - margin) {
                keep[static_cast<std::size_t>(s)] = 0;
                break;
            }
    return keep;
}

std::vector<cplx> FockSpace::vacuum() const {
    std::vector<cplx> v(static_cast<std::size_t>(dim()), 0.0);
    v[0] = 1.0;
    return v;
}

cplx OscAutomorphismParams::xi_for(int mode) const {
    auto it = xi.find(mode);
    return it == xi.end() ? cplx(1.0) : it->second;
}

cplx OscAutomorphismParams::eta_for(int m1, int m2) const {
    if (m1 > m2) std::swap(m1, m2);
    auto it = eta.find({m1, m2});
    return it == eta.end() ? cplx(0.0) : it->second;
}

namespace {

cplx q_number(cplx q, long long n) {
    // [n]_q = (q^n - q^{-n})/(q - q^{-1})
    return (pow_int(q, n) - pow_int(q, -n)) / (q - cplx(1.0) / q);
}

}  // namespace

OscillatorSet OscillatorSet::canonical(const FockSpace& space) {
    OscillatorSet set(space);
    const auto& modes = space.modes();
    const cplx q = space.q();
    const int nm = static_cast<int>(modes.size());
    const std::int64_t dim = space.dim();

    // local matrices embedded with graded signs via graded_kron
    std::vector<GradedSpace> locals;
    for (int k = 0; k < nm; ++k) {
        if (modes[static_cast<std::size_t>(k)].fermionic)
            locals.push_back(GradedSpace({0, 1}));
        else
            locals.push_back(GradedSpace::even(space.cutoff() + 1));
    }
    if (nm == 0) {
        return set;  // one-dimensional space, no generators
    }
    for (int k = 0; k < nm; ++k) {
        const bool fm = modes[static_cast<std::size_t>(k)].fermionic;
        const bool fl = space.flipped(k);
        const int ld = fm ? 2 : space.cutoff() + 1;
        SparseOperator lc(locals[static_cast<std::size_t>(k)], locals[static_cast<std::size_t>(k)], fm ? 1 : 0);
        SparseOperator lcd(locals[static_cast<std::size_t>(k)], locals[static_cast<std::size_t>(k)], fm ? 1 : 0);
        for (int m = 1; m < ld; ++m) {
            if (!fl) {
                lc.insert(m - 1, m, fm ? cplx(static_cast<double>(m)) : q_number(q, m));
                lcd.insert(m, m - 1, 1.0);
            } else {
                // mirrored module: c raises the level, cdag carries -[m]_q
                lc.insert(m, m - 1, 1.0);
                lcd.insert(m - 1, m, -q_number(q, m));
            }
        }
        lc.finalize(0.0);
        lcd.finalize(0.0);
        set.c_.push_back(embed_factor(lc, k, locals));
        set.cdag_.push_back(embed_factor(lcd, k, locals));
        std::vector<long long> nv(static_cast<std::size_t>(dim));
        std::vector<cplx> nd(static_cast<std::size_t>(dim));
        for (std::int64_t s = 0; s < dim; ++s) {
            nv[static_cast<std::size_t>(s)] = space.number_value(s, k);
            nd[static_cast<std::size_t>(s)] = static_cast<double>(nv[static_cast<std::size_t>(s)]);
        }
        set.nvals_.push_back(std::move(nv));
        set.n_.push_back(SparseOperator::diagonal(space.space(), nd));
    }
    return set;
}

long long OscillatorSet::n_value(std::int64_t state, int mode) const {
    return nvals_[static_cast<std::size_t>(mode)][static_cast<std::size_t>(state)];
}

std::vector<long long> OscillatorSet::exponent(const std::vector<std::pair<int, long long>>& terms) const {
    std::vector<long long> e(static_cast<std::size_t>(space_.dim()), 0);
    for (const auto& [mode, coeff] : terms)
        for (std::int64_t s = 0; s < space_.dim(); ++s)
            e[static_cast<std::size_t>(s)] += coeff * n_value(s, mode);
    return e;
}

SparseOperator OscillatorSet::q_power(const std::vector<std::pair<int, long long>>& terms) const {
    const auto e = exponent(terms);
    std::vector<cplx> d(e.size());
    for (std::size_t s = 0; s < e.size(); ++s) d[s] = pow_int(space_.q(), e[s]);
    return SparseOperator::diagonal(space_.space(), d);
}

SparseOperator OscillatorSet::q_power_weighted(const std::vector<std::pair<int, cplx>>& terms) const {
    std::vector<cplx> expo(static_cast<std::size_t>(space_.dim()), 0.0);
    for (const auto& [mode, w] : terms)
        for (std::int64_t s = 0; s < space_.dim(); ++s)
            expo[static_cast<std::size_t>(s)] += w * static_cast<double>(n_value(s, mode));
    std::vector<cplx> d(expo.size());
    for (std::size_t s = 0; s < expo.size(); ++s) d[s] = std::pow(space_.q(), expo[s]);
    return SparseOperator::diagonal(space_.space(), d);
}

OscillatorSet OscillatorSet::transformed_continuous(const OscAutomorphismParams& params) const {
    const int nm = static_cast<int>(space_.modes().size());
    for (int k = 0; k < nm; ++k) {
        if (params.xi_for(k) == 0.0) throw std::invalid_argument("oscillator automorphism: xi must be nonzero");
        // a self-pairing weight rescales c cdag and cdag c by the same power,
        // which no relation-preserving map can do
        if (params.eta_for(k, k) != 0.0)
            throw std::invalid_argument("oscillator automorphism: self-pairing weights are not admissible");
    }
    OscillatorSet out(space_);
    out.n_ = n_;
    out.nvals_ = nvals_;
    for (int k = 0; k < nm; ++k) {
        std::vector<std::pair<int, cplx>> terms;
        for (int j = 0; j < nm; ++j) {
            const cplx eta = params.eta_for(k, j);
            if (eta != 0.0) terms.push_back({j, eta});
        }
        const SparseOperator qp = q_power_weighted(terms);
        const SparseOperator qm = q_power_weighted([&] {
            auto t = terms;
            for (auto& [m, w] : t) w = -w;
            return t;
        }());
        out.c_.push_back((c_[static_cast<std::size_t>(k)] * qp).scaled(params.xi_for(k)));
        out.cdag_.push_back((cdag_[static_cast<std::size_t>(k)] * qm).scaled(cplx(1.0) / params.xi_for(k)));
    }
    return out;
}

OscillatorSet OscillatorSet::transformed_discrete(int mode) const {
    const auto& modes = space_.modes();
    if (mode < 0 || mode >= static_cast<int>(modes.size()))
        throw std::invalid_argument("transformed_discrete: unknown mode");
    const double s = modes[static_cast<std::size_t>(mode)].fermionic ? -1.0 : 1.0;
    OscillatorSet out(space_);
    out.c_ = c_;
    out.cdag_ = cdag_;
    out.n_ = n_;
    out.nvals_ = nvals_;
    // n -> -n - (-1)^{p(i)+p(a)}, c -> cdag, cdag -> -(-1)^{p(i)+p(a)} c
    out.c_[static_cast<std::size_t>(mode)] = cdag_[static_cast<std::size_t>(mode)];
    out.cdag_[static_cast<std::size_t>(mode)] = c_[static_cast<std::size_t>(mode)].scaled(-s);
    for (auto& v : out.nvals_[static_cast<std::size_t>(mode)]) v = -v - static_cast<long long>(s);
    std::vector<cplx> nd(out.nvals_[static_cast<std::size_t>(mode)].size());
    for (std::size_t k = 0; k < nd.size(); ++k)
        nd[k] = static_cast<double>(out.nvals_[static_cast<std::size_t>(mode)][k]);
    out.n_[static_cast<std::size_t>(mode)] = SparseOperator::diagonal(space_.space(), nd);
    return out;
}

std::vector<cplx> build_vacuum(const FockSpace& space) { return space.vacuum(); }

OscillatorSet apply_osc_automorphism(const OscillatorSet& set, const OscAutomorphismParams& params) {
    return set.transformed_continuous(params);
}

OscillatorSet apply_discrete_automorphism(const OscillatorSet& set, int mode) {
    return set.transformed_discrete(mode);
}

SparseOperator build_generator(const OscillatorSet& set, char kind, int i, int a) {
    const int k = set.space().mode_index(i, a);
    switch (kind) {
        case 'c': return set.c(k);
        case 'd': return set.cdag(k);
        case 'n': return set.n(k);
        default: throw std::invalid_argument("build_generator: kind must be c, d or n");
    }
}

RelationReport check_osc_relations(const OscillatorSet& set) {
    const FockSpace& F = set.space();
    const cplx q = F.q();
    const auto& modes = F.modes();
    const int nm = static_cast<int>(modes.size());
    const auto& prof = F.index_set().profile();
    RelationReport rep;
    const auto interior2 = F.interior(2);

    for (int k = 0; k < nm; ++k) {
        const auto& m = modes[static_cast<std::size_t>(k)];
        const int sa = prof.sign(m.a), si = prof.sign(m.i);
        ScaledOperator c{set.c(k)}, cd{set.cdag(k)};
        // [c, cdag]_{q^{(-1)^{p(a)}}} = q^{-(-1)^{p(i)} n},  [c, cdag]_{q^{-(-1)^{p(a)}}} = q^{(-1)^{p(i)} n}
        {
            ScaledOperator lhs = graded_bracket(c, cd, pow_int(q, sa));
            ScaledOperator rhs{set.q_power({{k, -si}})};
            rep.add("qosc-plus mode " + std::to_string(k), scaled_residual_cols(lhs, rhs, interior2));
        }
        {
            ScaledOperator lhs = graded_bracket(c, cd, pow_int(q, -sa));
            ScaledOperator rhs{set.q_power({{k, si}})};
            rep.add("qosc-minus mode " + std::to_string(k), scaled_residual_cols(lhs, rhs, interior2));
        }
        if (!m.fermionic) {
            // c cdag - cdag c equals the diagonal q-number difference
            ScaledOperator lhs = graded_bracket(c, cd);
            std::vector<cplx> dg(static_cast<std::size_t>(F.dim()));
            for (std::int64_t s = 0; s < F.dim(); ++s) {
                const long long nv = set.n_value(s, k);
                dg[static_cast<std::size_t>(s)] = q_number(q, nv + 1) - q_number(q, nv);
            }
            ScaledOperator rhs{SparseOperator::diagonal(F.space(), dg)};
            rep.add("number-difference mode " + std::to_string(k),
                    scaled_residual_cols(lhs, rhs, interior2));
        }
        // [n, c] = -c, [n, cdag] = cdag
        {
            ScaledOperator nk{set.n(k)};
            ScaledOperator lhs = graded_bracket(nk, c);
            rep.add("n-c mode " + std::to_string(k), scaled_residual_cols(lhs, scaled(-1.0, c), interior2));
            ScaledOperator lhs2 = graded_bracket(nk, cd);
            rep.add("n-cdag mode " + std::to_string(k), scaled_residual_cols(lhs2, cd, interior2));
        }
        if (m.fermionic) {
            const bool c2 = (set.c(k) * set.c(k)).is_zero();
            const bool d2 = (set.cdag(k) * set.cdag(k)).is_zero();
            rep.add("nilpotent-c mode " + std::to_string(k), c2 ? 0.0 : 1.0, c2);
            rep.add("nilpotent-cdag mode " + std::to_string(k), d2 ? 0.0 : 1.0, d2);
        }
        // cross-mode graded commutators vanish
        for (int j = k + 1; j < nm; ++j) {
            ScaledOperator cj{set.c(j)}, cdj{set.cdag(j)};
            double r = scaled_residual_cols(graded_bracket(c, cj), ScaledOperator{SparseOperator(F.space(), F.space(), 0)}, interior2);
            r = std::max(r, scaled_residual_cols(graded_bracket(c, cdj), ScaledOperator{SparseOperator(F.space(), F.space(), 0)}, interior2));
            r = std::max(r, scaled_residual_cols(graded_bracket(cd, cdj), ScaledOperator{SparseOperator(F.space(), F.space(), 0)}, interior2));
            rep.add("cross modes " + std::to_string(k) + "," + std::to_string(j), r);
        }
    }
    return rep;
}

}  // namespace qblab
