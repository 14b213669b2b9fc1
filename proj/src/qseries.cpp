#include "bps/qseries.hpp"

#include <algorithm>
#include <cmath>

namespace bps {

namespace {

// dense product prod_{n=1}^{N} (1 - q^n) up to degree N
std::vector<Int> dedekind_dense(long long N) {
    std::vector<Int> p(N + 1, 0);
    p[0] = 1;
    for (long long n = 1; n <= N; ++n)
        for (long long j = N; j >= n; --j) p[j] -= p[j - n];
    return p;
}

std::vector<Int> dense_mul(const std::vector<Int>& a, const std::vector<Int>& b, long long N) {
    std::vector<Int> p(N + 1, 0);
    for (long long i = 0; i <= N && i < (long long)a.size(); ++i) {
        if (a[i] == 0) continue;
        for (long long j = 0; i + j <= N && j < (long long)b.size(); ++j)
            if (b[j] != 0) p[i + j] += a[i] * b[j];
    }
    return p;
}

// inverse of a unit power series (u[0] = +-1)
std::vector<Int> dense_inv(const std::vector<Int>& u, long long N) {
    if (u.empty() || (u[0] != 1 && u[0] != -1))
        throw NotInvertible("dense_inv: leading coefficient must be +-1");
    std::vector<Int> v(N + 1, 0);
    v[0] = u[0];  // 1/(+-1)
    for (long long j = 1; j <= N; ++j) {
        Int acc = 0;
        for (long long i = 1; i <= j && i < (long long)u.size(); ++i) acc += u[i] * v[j - i];
        v[j] = -acc * u[0];
    }
    return v;
}

std::vector<int> multiset_union_max(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (i == a.size()) out.push_back(b[j++]);
        else if (j == b.size()) out.push_back(a[i++]);
        else if (a[i] < b[j]) out.push_back(a[i++]);
        else if (b[j] < a[i]) out.push_back(b[j++]);
        else { out.push_back(a[i]); ++i; ++j; }
    }
    return out;
}

// multiset difference a \ b (b must be contained in a)
std::vector<int> multiset_diff(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::size_t j = 0;
    for (int x : a) {
        if (j < b.size() && b[j] == x) { ++j; continue; }
        out.push_back(x);
    }
    return out;
}

QSeries mul_brackets(QSeries s, const std::vector<int>& ms) {
    for (int m : ms) {
        QSeries t(s.qmax());
        WLaurent br = WLaurent::bracket(m);
        for (const auto& [e, c] : s.terms()) t.add_term(e, c * br);
        s = std::move(t);
    }
    return s;
}

QSeries div_bracket_q(const QSeries& s, int m) {
    QSeries t(s.qmax());
    for (const auto& [e, c] : s.terms()) t.add_term(e, c.div_bracket(m));
    return t;
}

}  // namespace

PoleSeries::PoleSeries(std::vector<int> d, QSeries b) : den(std::move(d)), body(std::move(b)) {
    std::sort(den.begin(), den.end());
    for (int m : den)
        if (m < 1) throw DomainError("PoleSeries: den factors must be positive");
}

PoleSeries operator+(const PoleSeries& a, const PoleSeries& b) {
    std::vector<int> d = multiset_union_max(a.den, b.den);
    QSeries ba = mul_brackets(a.body, multiset_diff(d, a.den));
    QSeries bb = mul_brackets(b.body, multiset_diff(d, b.den));
    return PoleSeries(d, ba + bb);
}

PoleSeries operator-(const PoleSeries& a, const PoleSeries& b) { return a + pole_neg(b); }

PoleSeries operator*(const PoleSeries& a, const PoleSeries& b) {
    std::vector<int> d = a.den;
    d.insert(d.end(), b.den.begin(), b.den.end());
    return PoleSeries(std::move(d), a.body * b.body);
}

PoleSeries operator*(const PoleSeries& a, const QSeries& b) {
    return PoleSeries(a.den, a.body * b);
}

PoleSeries pole_neg(const PoleSeries& a) { return PoleSeries(a.den, a.body.neg()); }

PoleSeries pole_pow(const PoleSeries& a, int n) {
    if (n < 1) throw DomainError("pole_pow: n >= 1");
    PoleSeries p = a;
    for (int i = 1; i < n; ++i) p = p * a;
    return p;
}

PoleSeries pole_shifted(const PoleSeries& a, const Rat& e, long long wexp, const Coef& k) {
    return PoleSeries(a.den, a.body.shifted(e, wexp, k));
}

bool pole_equal(const PoleSeries& a, const PoleSeries& b) {
    return (a - b).body.is_zero();
}

PoleSeries reduce_pole(const PoleSeries& a, int m) {
    auto it = std::find(a.den.begin(), a.den.end(), m);
    if (it == a.den.end()) throw NotDivisible("reduce_pole: factor not present in den");
    std::vector<int> d = a.den;
    d.erase(d.begin() + (it - a.den.begin()));
    return PoleSeries(std::move(d), div_bracket_q(a.body, m));
}

QSeries invert_unit(const QSeries& u, Rat qmax) {
    if (u.is_zero()) throw NotInvertible("invert_unit: zero series");
    Rat e0 = u.lead();
    const WLaurent& l = u.terms().begin()->second;
    if (l.term_count() != 1) throw NotInvertible("invert_unit: leading term is not a monomial");
    long long k0 = l.min_exp();
    Coef c0 = l.coeff(k0);
    if (c0 != 1 && c0 != -1) throw NotInvertible("invert_unit: leading coefficient must be +-1");

    // u = c0 q^{e0} w^{k0} (1 + v), v with strictly positive q-lead
    QSeries v = u.shifted(-e0, -k0, c0).truncated(qmax);  // 1/c0 = c0
    v.add_monomial(Rat(0), 0, Coef(-1));
    if (!v.is_zero() && !(v.lead() > Rat(0)))
        throw NotInvertible("invert_unit: non-monomial content at leading order");

    QSeries acc = QSeries::constant(1, qmax);
    if (!v.is_zero()) {
        QSeries pw = QSeries::constant(1, qmax);
        Rat vl = v.lead();
        Rat order(0);
        while (order + vl <= qmax) {
            pw = (pw * v.neg()).truncated(qmax);
            if (pw.is_zero()) break;
            acc += pw;
            order += vl;
        }
    }
    return acc.shifted(-e0, -k0, c0);
}

QSeries eta(Rat qmax) {
    return eta_pow(1, qmax);
}

QSeries eta_pow(int k, Rat qmax) {
    Rat top = qmax - Rat(k, 24);
    long long N = top.floor();
    QSeries s(qmax);
    if (N < 0) return s;
    std::vector<Int> u = dedekind_dense(N);
    std::vector<Int> p(N + 1, 0);
    p[0] = 1;
    if (k < 0) u = dense_inv(u, N);
    for (int i = 0; i < std::abs(k); ++i) p = dense_mul(p, u, N);
    for (long long j = 0; j <= N; ++j)
        if (p[j] != 0) s.add_monomial(Rat(k, 24) + Rat(j), 0, Coef(p[j]));
    return s;
}

QSeries theta(int kind, int zscale, int tauscale, Rat qmax) {
    if (kind < 1 || kind > 3) throw DomainError("theta: kind must be 1, 2 or 3");
    if (zscale < 0 || tauscale < 1) throw DomainError("theta: need zscale >= 0, tauscale >= 1");
    QSeries s(qmax);
    if (kind == 3) {
        for (long long n = 0;; ++n) {
            Rat e(tauscale * n * n, 2);
            if (e > qmax) break;
            s.add_monomial(e, zscale * n, 1);
            if (n > 0) s.add_monomial(e, -zscale * n, 1);
        }
        return s;
    }
    if (zscale % 2 != 0)
        throw DomainError("theta: kinds 1 and 2 need an even z-scale for integral w-powers");
    // r = t + 1/2; theta_1 stored without the overall i
    for (long long t = 0;; ++t) {
        long long o = 2 * t + 1;
        Rat e(tauscale * o * o, 8);
        if (e > qmax) break;
        Coef c = (kind == 1 && t % 2 == 1) ? Coef(-1) : Coef(1);
        s.add_monomial(e, zscale * o / 2, c);
        // mirror r -> -r: theta_1 picks (-1)^{r-1/2} = -c there, theta_2 keeps c
        s.add_monomial(e, -zscale * o / 2, kind == 1 ? -c : c);
    }
    return s;
}

PoleSeries theta1_inv(int zscale, Rat qmax) {
    if (zscale != 2 && zscale != 4) throw DomainError("theta1_inv: zscale must be 2 or 4");
    const int m = zscale / 2;
    Rat qu = qmax + Rat(1, 8);
    QSeries u = QSeries::constant(1, qu);
    long long N = qu.floor();
    for (long long n = 1; n <= N; ++n) {
        for (long long wexp : {0LL, (long long)zscale, -(long long)zscale}) {
            QSeries f(qu);
            f.add_monomial(Rat(0), 0, 1);
            f.add_monomial(Rat(n), wexp, -1);
            u = u * f;
        }
    }
    QSeries body = invert_unit(u, qu).shifted(Rat(-1, 8));
    return PoleSeries({m}, body.truncated(qmax));
}

QSeries blowup_factor(int r, int k, bool z_refined, Rat qmax) {
    if (r < 1 || r > 3) throw UnsupportedRank("blowup_factor: r must be 1, 2 or 3");
    Rat qlat = qmax + Rat(r, 24) + Rat(1);
    QSeries lat(qlat);
    if (r == 1) {
        lat.add_monomial(Rat(0), 0, 1);
    } else if (r == 2) {
        long long T = (long long)std::sqrt(4.0 * qlat.to_double()) + 3;
        for (long long t = -T; t <= T; ++t) {
            Rat e((2 * t + k) * (2 * t + k), 4);
            if (e > qlat) continue;
            lat.add_monomial(e, z_refined ? 2 * t + k : 0, 1);
        }
    } else {
        long long T = (long long)std::sqrt(2.0 * qlat.to_double()) + 3;
        for (long long t1 = -T; t1 <= T; ++t1)
            for (long long t2 = -T; t2 <= T; ++t2) {
                long long u1 = 3 * t1 + k, u2 = 3 * t2 + k, u3 = -(u1 + u2);
                Rat e(u1 * u1 + u2 * u2 + u3 * u3, 18);
                if (e > qlat) continue;
                lat.add_monomial(e, z_refined ? 2 * (2 * t1 + t2 + k) : 0, 1);
            }
    }
    return (lat * eta_pow(-r, qlat)).truncated(qmax);
}

}  // namespace bps
