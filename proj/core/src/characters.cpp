#include "qblab/characters.hpp"

#include <algorithm>
#include <cmath>

namespace qblab {

TwistParams::TwistParams(std::vector<cplx> values) : z(std::move(values)) {
    if (z.empty()) throw std::invalid_argument("TwistParams: empty");
    for (const auto& v : z)
        if (v == 0.0) throw std::invalid_argument("TwistParams: twist values must be nonzero");
}

TwistParams TwistParams::shifted(const ParityProfile& prof, const std::vector<int>& content, cplx q) const {
    std::vector<cplx> out = z;
    for (int k = 1; k <= prof.size(); ++k)
        out[static_cast<std::size_t>(k - 1)] *=
            pow_int(q, static_cast<long long>(prof.sign(k)) * content[static_cast<std::size_t>(k - 1)]);
    return TwistParams(std::move(out));
}

namespace {

struct Root {
    int i, j;   // i < j
    bool odd;   // p(i) + p(j) odd
};

std::vector<Root> positive_roots(const ParityProfile& prof) {
    std::vector<Root> roots;
    for (int i = 1; i <= prof.size(); ++i)
        for (int j = i + 1; j <= prof.size(); ++j)
            roots.push_back({i, j, (prof.parity(i) + prof.parity(j)) % 2 == 1});
    return roots;
}

}  // namespace

cplx verma_supercharacter_normalized(const ParityProfile& prof, const TwistParams& twist) {
    const int m = prof.bosonic(), n = prof.fermionic();
    if (twist.size() != m + n) throw std::invalid_argument("verma_supercharacter: twist size mismatch");
    cplx val = 1.0;
    for (int b = 1; b <= m; ++b)
        for (int b2 = b + 1; b2 <= m; ++b2) {
            const cplx f = cplx(1.0) - twist.at(b2) / twist.at(b);
            if (f == 0.0) throw std::invalid_argument("verma_supercharacter: coincident twist values");
            val /= f;
        }
    for (int f1 = m + 1; f1 <= m + n; ++f1)
        for (int f2 = f1 + 1; f2 <= m + n; ++f2) {
            const cplx f = cplx(1.0) - twist.at(f2) / twist.at(f1);
            if (f == 0.0) throw std::invalid_argument("verma_supercharacter: coincident twist values");
            val /= f;
        }
    for (int b = 1; b <= m; ++b)
        for (int f = m + 1; f <= m + n; ++f) val *= cplx(1.0) - twist.at(f) / twist.at(b);
    return val;
}

cplx verma_supercharacter(const WeightVector& lambda, const ParityProfile& prof, const TwistParams& twist) {
    if (static_cast<int>(lambda.lambda.size()) != prof.size())
        throw std::invalid_argument("verma_supercharacter: weight size mismatch");
    cplx val = verma_supercharacter_normalized(prof, twist);
    for (int k = 1; k <= prof.size(); ++k)
        val *= std::pow(twist.at(k), lambda.lambda[static_cast<std::size_t>(k - 1)]);
    return val;
}

std::vector<cplx> verma_series_by_degree(const ParityProfile& prof, const TwistParams& twist,
                                         int degree_cap) {
    const auto roots = positive_roots(prof);
    std::vector<cplx> ratios;
    for (const auto& r : roots) ratios.push_back(twist.at(r.j) / twist.at(r.i));
    std::vector<cplx> out(static_cast<std::size_t>(degree_cap) + 1, 0.0);

    // multiset enumeration over root occupancies
    std::vector<int> occ(roots.size(), 0);
    auto rec = [&](auto&& self, std::size_t k, int deg, cplx term, int oddcount) -> void {
        if (k == roots.size()) {
            out[static_cast<std::size_t>(deg)] += (oddcount % 2 ? -1.0 : 1.0) * term;
            return;
        }
        const int maxocc = roots[k].odd ? 1 : degree_cap - deg;
        cplx pw = 1.0;
        for (int c = 0; c <= maxocc && deg + c <= degree_cap; ++c) {
            self(self, k + 1, deg + c, term * pw, oddcount + (roots[k].odd ? c : 0));
            pw *= ratios[k];
        }
    };
    rec(rec, 0, 0, 1.0, 0);
    return out;
}

cplx verma_character_series_normalized(const ParityProfile& prof, const TwistParams& twist,
                                       int degree_cap) {
    for (const auto& r : positive_roots(prof))
        if (!(std::abs(twist.at(r.j) / twist.at(r.i)) < 1.0))
            throw std::invalid_argument("verma_character_series: non-convergent twist ratios");
    const auto by_deg = verma_series_by_degree(prof, twist, degree_cap);
    cplx s = 0.0;
    for (const auto& v : by_deg) s += v;
    return s;
}

cplx verma_character_series(const WeightVector& lambda, const ParityProfile& prof,
                            const TwistParams& twist, int degree_cap) {
    cplx val = verma_character_series_normalized(prof, twist, degree_cap);
    for (int k = 1; k <= prof.size(); ++k)
        val *= std::pow(twist.at(k), lambda.lambda[static_cast<std::size_t>(k - 1)]);
    return val;
}

std::vector<cplx> verma_product_by_degree(const ParityProfile& prof, const TwistParams& twist,
                                          int degree_cap) {
    const auto roots = positive_roots(prof);
    std::vector<cplx> poly(static_cast<std::size_t>(degree_cap) + 1, 0.0);
    poly[0] = 1.0;
    for (const auto& r : roots) {
        const cplx ratio = twist.at(r.j) / twist.at(r.i);
        std::vector<cplx> factor(static_cast<std::size_t>(degree_cap) + 1, 0.0);
        if (r.odd) {
            factor[0] = 1.0;
            if (degree_cap >= 1) factor[1] = -ratio;
        } else {
            cplx pw = 1.0;
            for (int k = 0; k <= degree_cap; ++k) {
                factor[static_cast<std::size_t>(k)] = pw;
                pw *= ratio;
            }
        }
        std::vector<cplx> next(static_cast<std::size_t>(degree_cap) + 1, 0.0);
        for (int a = 0; a <= degree_cap; ++a)
            for (int b = 0; a + b <= degree_cap; ++b)
                next[static_cast<std::size_t>(a + b)] += poly[static_cast<std::size_t>(a)] * factor[static_cast<std::size_t>(b)];
        poly = std::move(next);
    }
    return poly;
}

cplx schur_function(const std::vector<long long>& lambda, const std::vector<cplx>& z) {
    const int m = static_cast<int>(z.size());
    if (static_cast<int>(lambda.size()) != m) throw std::invalid_argument("schur_function: size mismatch");
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (z[static_cast<std::size_t>(i)] == z[static_cast<std::size_t>(j)])
                throw std::invalid_argument("schur_function: coincident variables");

    auto det = [m](std::vector<cplx> a) {
        cplx d = 1.0;
        for (int c = 0; c < m; ++c) {
            int piv = c;
            double best = 0.0;
            for (int r = c; r < m; ++r) {
                const double v = std::abs(a[static_cast<std::size_t>(r * m + c)]);
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
            if (best == 0.0) return cplx(0.0);
            if (piv != c) {
                for (int t = 0; t < m; ++t)
                    std::swap(a[static_cast<std::size_t>(piv * m + t)], a[static_cast<std::size_t>(c * m + t)]);
                d = -d;
            }
            d *= a[static_cast<std::size_t>(c * m + c)];
            for (int r = c + 1; r < m; ++r) {
                const cplx f = a[static_cast<std::size_t>(r * m + c)] / a[static_cast<std::size_t>(c * m + c)];
                for (int t = c; t < m; ++t)
                    a[static_cast<std::size_t>(r * m + t)] -= f * a[static_cast<std::size_t>(c * m + t)];
            }
        }
        return d;
    };

    std::vector<cplx> num(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    std::vector<cplx> den(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            num[static_cast<std::size_t>(i * m + j)] =
                pow_int(z[static_cast<std::size_t>(i)], m + lambda[static_cast<std::size_t>(j)] - (j + 1));
            den[static_cast<std::size_t>(i * m + j)] = pow_int(z[static_cast<std::size_t>(i)], m - (j + 1));
        }
    return det(std::move(num)) / det(std::move(den));
}

KrLimitTable check_kr_limit(const IndexSet& iset, const TwistParams& twist,
                            const std::vector<int>& m_list) {
    const auto& prof = iset.profile();
    if (prof.fermionic() != 0)
        throw std::invalid_argument("check_kr_limit: defined for purely even profiles");
    const int m = prof.size();
    for (int i : iset.members())
        for (int a : iset.complement())
            if (!(std::abs(twist.at(a)) < std::abs(twist.at(i))))
                throw std::invalid_argument("check_kr_limit: need |z_a| < |z_i| for members over complement");

    cplx target = 1.0;
    double pred = 0.0;
    for (int i : iset.members())
        for (int a : iset.complement()) {
            target /= cplx(1.0) - twist.at(a) / twist.at(i);
            pred = std::max(pred, std::abs(twist.at(a) / twist.at(i)));
        }

    KrLimitTable table;
    table.target = target;
    table.predicted_ratio = pred;
    const int k = static_cast<int>(iset.members().size());
    for (int mm : m_list) {
        std::vector<long long> lam(static_cast<std::size_t>(m), 0);
        for (int t = 0; t < k; ++t) lam[static_cast<std::size_t>(t)] = mm;  // sorted rectangle
        cplx val = schur_function(lam, twist.z);
        for (int i : iset.members()) val /= pow_int(twist.at(i), mm);
        table.rows.push_back({mm, val, std::abs(val - target)});
    }
    return table;
}

std::vector<cplx> drinfeld_polynomial(const WeightVector& lambda, int i, const ParityProfile& prof,
                                      cplx q) {
    const int d = prof.size();
    if (i < 1 || i > d - 1) throw std::out_of_range("drinfeld_polynomial: node out of range");
    const cplx li = lambda.lambda[static_cast<std::size_t>(i - 1)];
    const cplx li1 = lambda.lambda[static_cast<std::size_t>(i)];
    const double rel = (prof.parity(i) + prof.parity(i + 1)) % 2 ? -1.0 : 1.0;
    const cplx diff = li - rel * li1;
    const double rounded = std::round(diff.real());
    if (std::abs(diff - cplx(rounded)) > 1e-9 || rounded < -0.5)
        throw std::invalid_argument("drinfeld_polynomial: weight difference is not a non-negative integer");
    const long long deg = static_cast<long long>(rounded);

    std::vector<cplx> coeffs = {1.0};
    const long long si = prof.sign(i), si1 = prof.sign(i + 1);
    for (long long k = 1; k <= deg; ++k) {
        const cplx root = std::pow(q, cplx(-2.0) * (static_cast<double>(si1) * li1 +
                                                    static_cast<double>(si) * cplx(static_cast<double>(k - 1))));
        coeffs.push_back(0.0);
        for (std::size_t t = coeffs.size() - 1; t > 0; --t)
            coeffs[t] = coeffs[t] - root * coeffs[t - 1];
    }
    return coeffs;
}

}  // namespace qblab
