#include "bps/invariants.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace bps {

namespace {

long long mod2(long long x) { return ((x % 2) + 2) % 2; }
long long mod3(long long x) { return ((x % 3) + 3) % 3; }

std::vector<Coef> poly_mul_trunc(const std::vector<Coef>& a, const std::vector<Coef>& b,
                                 int order) {
    std::vector<Coef> p(order + 1, Coef(0));
    for (int i = 0; i <= order && i < (int)a.size(); ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; i + j <= order && j < (int)b.size(); ++j) p[i + j] += a[i] * b[j];
    }
    return p;
}

// Taylor coefficients to s^order of prod_m (w^m - w^{-m}) at w = -e^s;
// each factor equals (-1)^m 2 sinh(m s).
std::vector<Coef> den_taylor(const std::vector<int>& den, int order) {
    std::vector<Coef> acc(order + 1, Coef(0));
    acc[0] = 1;
    for (int m : den) {
        std::vector<Coef> f(order + 1, Coef(0));
        Coef fact = 1, pw = 1;
        for (int j = 1; j <= order; ++j) {
            fact *= j;
            pw *= m;
            if (j % 2 == 1) f[j] = Coef(2) * pw / fact;
        }
        if (m % 2 != 0)
            for (auto& c : f) c = -c;
        acc = poly_mul_trunc(acc, f, order);
    }
    return acc;
}

// Quotient coefficients c_0..c_{nc-1} of N(s)/D(s) where D = D_t s^t + ...;
// requires N to vanish below s^t.
std::vector<Coef> taylor_quotient(const std::vector<Coef>& N, const std::vector<Coef>& D, int t,
                                  int nc, const char* what) {
    for (int j = 0; j < t; ++j)
        if (j < (int)N.size() && N[j] != 0)
            throw NotPolynomial(std::string(what) + ": uncancelled pole at w = -1");
    std::vector<Coef> c(nc, Coef(0));
    for (int j = 0; j < nc; ++j) {
        Coef acc = (t + j) < (int)N.size() ? N[t + j] : Coef(0);
        for (int i = 0; i < j; ++i) acc -= c[i] * D[t + j - i];
        c[j] = acc / D[t];
    }
    return c;
}

// q^{base} w^{wbase} / (1 - q^{p} w^4) expanded in positive q-powers.
// p > 0: sum_{j>=0} q^{base+pj} w^{wbase+4j}
// p < 0: -sum_{j>=1} q^{base+|p|j} w^{wbase-4j}
void add_geometric(QSeries& out, const Rat& base, long long wbase, long long p,
                   const Coef& scale) {
    if (p == 0) throw DomainError("add_geometric: p = 0 is a w-pole, handled by caller");
    if (p > 0) {
        for (long long j = 0;; ++j) {
            Rat e = base + Rat(p * j);
            if (e > out.qmax()) break;
            out.add_monomial(e, wbase + 4 * j, scale);
        }
    } else {
        for (long long j = 1;; ++j) {
            Rat e = base + Rat(-p * j);
            if (e > out.qmax()) break;
            out.add_monomial(e, wbase - 4 * j, -scale);
        }
    }
}

}  // namespace

// --- PoleCoeff -------------------------------------------------------------

PoleCoeff pc_mul(const PoleCoeff& a, const PoleCoeff& b) {
    std::vector<int> d = a.den;
    d.insert(d.end(), b.den.begin(), b.den.end());
    std::sort(d.begin(), d.end());
    return {std::move(d), a.num * b.num};
}

PoleCoeff pc_scale(const PoleCoeff& a, const Coef& k) { return {a.den, a.num.scaled(k)}; }
PoleCoeff pc_neg(const PoleCoeff& a) { return {a.den, a.num.neg()}; }

namespace {
std::vector<int> pc_union(const std::vector<int>& a, const std::vector<int>& b) {
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
WLaurent complement_brackets(const WLaurent& n, const std::vector<int>& have,
                             const std::vector<int>& want) {
    WLaurent out = n;
    std::size_t j = 0;
    for (int m : want) {
        if (j < have.size() && have[j] == m) { ++j; continue; }
        out = out * WLaurent::bracket(m);
    }
    return out;
}
}  // namespace

PoleCoeff pc_add(const PoleCoeff& a, const PoleCoeff& b) {
    std::vector<int> d = pc_union(a.den, b.den);
    WLaurent n = complement_brackets(a.num, a.den, d) + complement_brackets(b.num, b.den, d);
    return {std::move(d), std::move(n)};
}

bool pc_equal(const PoleCoeff& a, const PoleCoeff& b) {
    return pc_add(a, pc_neg(b)).num.is_zero();
}

PoleCoeff pc_substitute(const PoleCoeff& a, int m) {
    PoleCoeff out;
    Coef sign = 1;
    for (int j : a.den) {
        out.den.push_back(j * m);
        if ((j * (m + 1)) % 2 != 0) sign = -sign;
    }
    std::sort(out.den.begin(), out.den.end());
    for (const auto& [k, c] : a.num.terms()) {
        Coef cc = ((k * (m + 1)) % 2 != 0) ? -c : c;
        out.num.add_term(k * m, cc * sign);
    }
    return out;
}

WLaurent pc_simple_pole_numerator(const PoleCoeff& a) {
    WLaurent p = a.num * WLaurent::bracket(1);
    for (int m : a.den) p = p.div_bracket(m);
    return p;
}

// --- generating functions ---------------------------------------------------

QSeries f1(Rat qmax) { return QSeries::constant(1, qmax); }

PoleSeries appell_a(int ell, int alpha, int beta, Rat qmax) {
    if (ell < 1) throw UnsupportedEll("appell_a: level ell must be >= 1");
    if (alpha != 0 && alpha != 1) throw DomainError("appell_a: alpha in {0,1}");
    if (beta != 0 && beta != 1) throw DomainError("appell_a: beta in {0,1}");
    const long long L = ell;
    QSeries reg(qmax);

    if (beta == 1) {
        if (alpha == 1) {
            // q^{(l+2)/4} w^l sum_n q^{l n(n+1)+n} w^{2(l-2)n} / (1-q^{2n+1} w^4)
            Rat pre(L + 2, 4);
            for (long long n = 0;; ++n) {
                Rat base = pre + Rat(L * n * (n + 1) + n);
                if (base > qmax) break;
                add_geometric(reg, base, L + 2 * (L - 2) * n, 2 * n + 1, Coef(1));
            }
            for (long long t = 0;; ++t) {
                long long n = -1 - t;
                Rat base = pre + Rat(L * n * (n + 1) + n);
                if (base + Rat(2 * t + 1) > qmax) break;
                add_geometric(reg, base, L + 2 * (L - 2) * n, 2 * n + 1, Coef(1));
            }
        } else {
            // -1/2 sum_n q^{l(2n+1)^2/4} w^{(l-2)(2n+1)}
            for (long long t = 0;; ++t) {
                Rat e(L * (2 * t + 1) * (2 * t + 1), 4);
                if (e > qmax) break;
                reg.add_monomial(e, (L - 2) * (2 * t + 1), Coef(-1, 2));
                reg.add_monomial(e, -(L - 2) * (2 * t + 1), Coef(-1, 2));
            }
            // q^{l/4} w^{l-2} sum_n q^{l n(n+1)} w^{2(l-2)n} / (1-q^{2n+1} w^4)
            Rat pre(L, 4);
            for (long long n = 0;; ++n) {
                Rat base = pre + Rat(L * n * (n + 1));
                if (base > qmax) break;
                add_geometric(reg, base, (L - 2) + 2 * (L - 2) * n, 2 * n + 1, Coef(1));
            }
            for (long long t = 0;; ++t) {
                long long n = -1 - t;
                Rat base = pre + Rat(L * n * (n + 1));
                if (base + Rat(2 * t + 1) > qmax) break;
                add_geometric(reg, base, (L - 2) + 2 * (L - 2) * n, 2 * n + 1, Coef(1));
            }
        }
        return PoleSeries::plain(reg);
    }

    // beta = 0: lattice part with 1/(1-q^{2n} w^4); the n = 0 term and the
    // i eta^3/theta_1(4z) term carry the (w^2 - w^{-2}) pole.
    QSeries polebody(qmax);
    if (alpha == 1) {
        // w^2 sum_n q^{l n^2 + n} w^{2(l-2)n} / (1-q^{2n} w^4)
        polebody.add_monomial(Rat(0), 0, Coef(-1));  // w^2/(1-w^4)
        for (long long n = 1;; ++n) {
            Rat base(L * n * n + n);
            if (base > qmax) break;
            add_geometric(reg, base, 2 + 2 * (L - 2) * n, 2 * n, Coef(1));
        }
        for (long long n = -1;; --n) {
            Rat base(L * n * n + n);
            if (base + Rat(-2 * n) > qmax) break;
            add_geometric(reg, base, 2 + 2 * (L - 2) * n, 2 * n, Coef(1));
        }
    } else {
        // -1/2 sum_n q^{l n^2} w^{2(l-2)n}
        for (long long n = 0;; ++n) {
            Rat e(L * n * n);
            if (e > qmax) break;
            reg.add_monomial(e, 2 * (L - 2) * n, Coef(-1, 2));
            if (n > 0) reg.add_monomial(e, -2 * (L - 2) * n, Coef(-1, 2));
        }
        // sum_n q^{l n^2} w^{2(l-2)n} / (1-q^{2n} w^4)
        polebody.add_monomial(Rat(0), -2, Coef(-1));  // 1/(1-w^4)
        for (long long n = 1;; ++n) {
            Rat base(L * n * n);
            if (base > qmax) break;
            add_geometric(reg, base, 2 * (L - 2) * n, 2 * n, Coef(1));
        }
        for (long long n = -1;; --n) {
            Rat base(L * n * n);
            if (base + Rat(-2 * n) > qmax) break;
            add_geometric(reg, base, 2 * (L - 2) * n, 2 * n, Coef(1));
        }
    }
    // i eta^3 / theta_1(4z,tau): integer-coefficient body over (w^2 - w^{-2})
    QSeries eta3body = eta_pow(3, qmax + Rat(1, 8)) * theta1_inv(4, qmax + Rat(1)).body;

    QSeries body = reg.times_w(WLaurent::bracket(2)) + polebody + eta3body.truncated(qmax);
    return PoleSeries({2}, body);
}

QSeries indef_theta(int ell, int alpha, int beta, const Polarization& j, Rat qmax) {
    if (ell < 1) throw UnsupportedEll("indef_theta: level ell must be >= 1");
    if (beta % 2 == 0 && j.m.is_zero())
        throw DegeneratePolarization(
            "indef_theta: J on the f-ray is a wall for c1.f even classes");
    const long long L = ell;
    QSeries out(qmax);
    Rat bound = Rat(4) * qmax;
    for (int branch : {+1, -1}) {
        for (long long Babs = (mod2(beta) == 0 ? 2 : 1); Rat(L * Babs * Babs) <= bound;
             Babs += 2) {
            long long B = branch * Babs;
            for (long long Aabs = mod2(alpha); Rat(Babs * (L * Babs + 2 * Aabs)) <= bound;
                 Aabs += 2) {
                long long A = branch * Aabs;
                int d = sgn(-A) - sign_against(B, A, j);
                if (d == 0) continue;
                out.add_monomial(Rat(Babs * (L * Babs + 2 * Aabs), 4), (L - 2) * B + 2 * A,
                                 Coef(d, 2));
            }
        }
    }
    return out;
}

PoleSeries f2(int ell, int alpha, int beta, const Polarization& j, Rat qmax) {
    return appell_a(ell, alpha, beta, qmax) + PoleSeries::plain(indef_theta(ell, alpha, beta, j, qmax));
}

QSeries f2_wallsum(int ell, int alpha, const Polarization& j, Rat qmax) {
    const long long L = ell;
    QSeries out(qmax);
    Rat bound = Rat(4) * qmax;
    for (int branch : {+1, -1}) {
        for (long long Babs = 1; Rat(L * Babs * Babs) <= bound; Babs += 2) {
            long long B = branch * Babs;
            for (long long Aabs = mod2(alpha); Rat(Babs * (L * Babs + 2 * Aabs)) <= bound;
                 Aabs += 2) {
                long long A = branch * Aabs;
                int d = sign_against(B, A, j) - sgn(B);
                if (d == 0) continue;
                Rat e(Babs * (L * Babs + 2 * Aabs), 4);
                long long X = (L - 2) * B + 2 * A;
                out.add_monomial(e, X, Coef(-d, 4));
                out.add_monomial(e, -X, Coef(d, 4));
            }
        }
    }
    return out;
}

PoleSeries f3(int ell, long long alpha, long long beta, const Polarization& j, Rat qmax) {
    if (ell < 1) throw UnsupportedEll("f3: level ell must be >= 1");
    if (mod3(beta) == 0) throw BetaDivisible("f3: beta must be 1 or 2 mod 3");
    const long long L = ell;
    PoleSeries acc = PoleSeries::plain(QSeries(qmax));
    Rat bound = Rat(12) * qmax;
    for (int branch : {+1, -1}) {
        for (long long Babs = 1; Rat(L * Babs * Babs) <= bound; ++Babs) {
            long long B = branch * Babs;
            if (mod3(B) != mod3(beta)) continue;
            for (long long Aabs = 0; Rat(Babs * (L * Babs + 2 * Aabs)) <= bound; ++Aabs) {
                long long A = branch * Aabs;
                if (mod3(A) != mod3(alpha)) continue;
                int d = sign_against(B, A, j) - sgn(B);
                if (d == 0) continue;
                long long X = (L - 2) * B + 2 * A;
                if (X == 0) continue;  // the w-bracket vanishes identically
                Rat Q(Babs * (L * Babs + 2 * Aabs), 12);
                long long b = (B + 2 * beta) / 3, a = (A + 2 * alpha) / 3;
                PoleSeries inner =
                    f2(ell, int(mod2(a)), int(mod2(b)),
                       Polarization(Rat(Babs), Rat(Aabs), Side::exact), qmax - Q + Rat(1));
                WLaurent br = WLaurent::bracket(1);  // placeholder, replaced below
                br = WLaurent::monomial(X, Coef(-d, 2)) + WLaurent::monomial(-X, Coef(d, 2));
                acc = acc + pole_shifted(PoleSeries(inner.den, inner.body.times_w(br)), Q);
            }
        }
    }
    return PoleSeries(acc.den, acc.body.truncated(qmax));
}

PoleSeries h_prefactor(int r, Rat qmax) {
    PoleSeries t1 = theta1_inv(2, qmax + Rat(1));
    QSeries em1 = eta_pow(-1, qmax + Rat(1));
    PoleSeries pre(t1.den, (t1.body * em1).truncated(qmax));
    return pole_pow(pre, r);
}

PoleSeries h_from_f(const PoleSeries& f, int r) {
    PoleSeries pre = h_prefactor(r, f.body.qmax() + Rat(r, 6) + Rat(1));
    return pre * f;
}

PoleSeries f_from_h(const PoleSeries& h, int r) {
    // multiply by (theta_1(2z) eta / i)^r = (q^{1/8}(w-w^{-1}) U eta)^r and
    // cancel r poles
    Rat qb = h.body.qmax() + Rat(r) + Rat(1);
    QSeries u = theta(1, 2, 1, qb) * eta(qb);
    PoleSeries out = h;
    for (int i = 0; i < r; ++i) {
        out = out * u;
        out = reduce_pole(out, 1);
    }
    return out;
}

QSeries euler_specialize(const PoleSeries& f, int r) {
    const int t = (int)f.den.size();
    const int order = t + r - 1;
    std::vector<Coef> D = den_taylor(f.den, order);
    QSeries out(f.body.qmax());
    Coef pref = Coef((r % 2 == 1) ? 1 : -1, 1LL << (r - 1));
    for (const auto& [e, W] : f.body.terms()) {
        std::vector<Coef> N = W.taylor_at_minus_exp(order);
        std::vector<Coef> c = taylor_quotient(N, D, t, r, "euler_specialize");
        for (int jj = 0; jj + 1 < r; ++jj)
            if (c[jj] != 0)
                throw NotPolynomial("euler_specialize: z-Taylor term below degree r-1 survives");
        if (c[r - 1] != 0) out.add_monomial(e, 0, pref * c[r - 1]);
    }
    return out;
}

PoleCoeff extract_refined(const PoleSeries& h, const ChernVector& g, const Surface& s) {
    Rat e = Rat(g.r) * discriminant(g, s) - Rat(g.r, 6);
    if (e > h.body.qmax())
        throw ExponentBeyondTruncation("extract_refined: exponent " + e.str() +
                                       " beyond qmax " + h.body.qmax().str());
    return {h.den, h.body.coeff(e)};
}

std::vector<int> chern_divisors(const ChernVector& g, const Surface& s) {
    std::vector<int> out;
    Rat c1sq = intersect(g.c1, g.c1, s);
    for (int m = 1; m <= g.r; ++m) {
        if (g.r % m != 0) continue;
        if (g.c1.cC % m != 0 || g.c1.cF % m != 0) continue;
        Rat c2q = g.c2 / Rat(m) - c1sq * Rat(m - 1, 2LL * m * m);
        if (!c2q.is_integer()) continue;
        out.push_back(m);
    }
    return out;
}

ChernVector chern_quotient(const ChernVector& g, int m, const Surface& s) {
    Rat c1sq = intersect(g.c1, g.c1, s);
    Rat c2q = g.c2 / Rat(m) - c1sq * Rat(m - 1, 2LL * m * m);
    return ChernVector(g.r / m, DivisorClass{g.c1.cC / m, g.c1.cF / m}, c2q);
}

PoleCoeff rational_to_integer(const std::map<int, PoleCoeff>& omegabar_by_divisor,
                              const ChernVector& g, const Surface& s) {
    std::map<int, PoleCoeff> memo;
    std::function<PoleCoeff(int, const ChernVector&)> omega_of =
        [&](int d, const ChernVector& gd) -> PoleCoeff {
        auto it = memo.find(d);
        if (it != memo.end()) return it->second;
        auto bar = omegabar_by_divisor.find(d);
        if (bar == omegabar_by_divisor.end())
            throw MissingDivisorData("rational_to_integer: no data for divisor " +
                                     std::to_string(d));
        PoleCoeff om = bar->second;
        for (int e : chern_divisors(gd, s)) {
            if (e == 1) continue;
            PoleCoeff sub = omega_of(d * e, chern_quotient(gd, e, s));
            om = pc_add(om, pc_neg(pc_scale(pc_substitute(sub, e), Coef(1, e))));
        }
        memo[d] = om;
        return om;
    };
    return omega_of(1, g);
}

InvariantRecord betti_extract(const PoleCoeff& omega, const ChernVector& g, const Surface& s,
                              const Polarization& j) {
    InvariantRecord rec{s.ell, g, j, PoleCoeff{}, {}, 0, 0, {}};
    rec.dim = moduli_dim(g, s);
    if (s.ell > 2)
        rec.warnings.push_back(
            "ell > 2: wall-crossing input beyond the established validity range; "
            "results are conjectural");
    if (omega.is_zero()) return rec;

    const long long d = rec.dim;
    WLaurent W = pc_simple_pole_numerator(omega);  // (w - w^{-1}) Omega
    rec.refined = PoleCoeff{{1}, W};

    // p(M,w) = w^d (w - w^{-1}) Omega
    if (W.min_exp() < -d || W.max_exp() > d)
        throw NotPolynomial("betti_extract: degree outside [0, 2 dim]");
    std::vector<Int> b(2 * d + 1, Int(0));
    for (const auto& [k, c] : W.terms()) {
        if ((k + d) % 2 != 0)
            throw NotPolynomial("betti_extract: odd Betti number is nonzero");
        if (denominator(c) != 1)
            throw NotPolynomial("betti_extract: non-integer coefficient " + c.str());
        if (c < 0) throw NegativeBetti("betti_extract: negative coefficient " + c.str());
        b[k + d] = numerator(c);
    }
    for (long long i = 0; i <= 2 * d; ++i)
        if (b[i] != b[2 * d - i]) throw NotPalindromic("betti_extract: b_i != b_{2d-i}");

    Int chi = 0;
    for (const auto& x : b) chi += x;

    // independent route: chi = (-1)^dim lim_{w->-1} (w-w^{-1}) Omega from the
    // unreduced coefficient
    {
        const int t = (int)omega.den.size();
        std::vector<Coef> N = (omega.num * WLaurent::bracket(1)).taylor_at_minus_exp(t);
        std::vector<Coef> D = den_taylor(omega.den, t);
        Coef lim = taylor_quotient(N, D, t, 1, "betti_extract limit route")[0];
        if (d % 2 != 0) lim = -lim;
        if (lim != Coef(chi))
            throw TripwireError("betti_extract: Euler routes disagree: p(1) = " + chi.str() +
                                " vs limit " + lim.str());
    }

    rec.poincare = std::move(b);
    rec.euler = chi;
    return rec;
}

PoleCoeff delta_omega_primitive(const ChernVector& g1, const ChernVector& g2,
                                const Polarization& jfrom, const Polarization& jto,
                                const PoleCoeff& o1, const PoleCoeff& o2, const Surface& s) {
    auto primitive = [](const ChernVector& g) {
        return std::gcd(std::gcd((long long)g.r, g.c1.cC), g.c1.cF) == 1;
    };
    if (!primitive(g1) || !primitive(g2))
        throw DomainError("delta_omega_primitive: constituents must be primitive");
    DivisorClass dd = (long long)g1.r * g2.c1 - (long long)g2.r * g1.c1;
    long long B = dd.cC, A = -dd.cF;
    int d = sign_against(B, A, jto) - sign_against(B, A, jfrom);
    long long gamma = pairing(g1, g2, s);
    if (d == 0 || gamma == 0) return PoleCoeff{};
    WLaurent br = WLaurent::monomial(gamma, Coef(-d, 2)) + WLaurent::monomial(-gamma, Coef(d, 2));
    PoleCoeff out = pc_mul(o1, o2);
    out.num = out.num * br;
    return out;
}

PoleSeries wallcross_transport(const ChernVector& g, const Polarization& jfrom,
                               const Polarization& jto, const Surface& s, Rat qmax) {
    if (g.r > 3) throw UnsupportedRank("wallcross_transport: rank must be <= 3");
    const long long L = s.ell;
    long long beta = g.c1.cC, alpha = -g.c1.cF;
    if (g.r == 1) return PoleSeries::plain(QSeries(qmax));

    if (g.r == 2) {
        if (beta % 2 == 0 && (jfrom.m.is_zero() || jto.m.is_zero()))
            throw DegeneratePolarization(
                "wallcross_transport: endpoint on the f-ray wall for c1.f even");
        PoleSeries h1sq = pole_pow(h_prefactor(1, qmax + Rat(1)), 2);
        PoleSeries acc(h1sq.den, QSeries(qmax));
        Rat bound = Rat(4) * qmax;
        for (long long B = (mod2(beta) == 0 ? 2 : 1); Rat(L * B * B) <= bound; B += 2) {
            for (long long A = mod2(alpha); Rat(B * (L * B + 2 * A)) <= bound; A += 2) {
                int d = sign_against(B, A, jto) - sign_against(B, A, jfrom);
                if (d == 0) continue;
                long long X = (L - 2) * B + 2 * A;
                if (X == 0) continue;
                WLaurent br =
                    WLaurent::monomial(X, Coef(-d, 2)) + WLaurent::monomial(-X, Coef(d, 2));
                acc = acc + pole_shifted(PoleSeries(h1sq.den, h1sq.body.times_w(br)),
                                          Rat(B * (L * B + 2 * A), 4));
            }
        }
        return PoleSeries(acc.den, acc.body.truncated(qmax));
    }

    // r = 3: rank 1 + rank 2 constituents, the rank-2 side evaluated on the wall
    if (mod3(beta) == 0)
        throw BetaDivisible("wallcross_transport: rank 3 needs c1.C != 0 mod 3");
    PoleSeries h1 = h_prefactor(1, qmax + Rat(1));
    PoleSeries acc = PoleSeries::plain(QSeries(qmax));
    Rat bound = Rat(12) * qmax;
    for (int branch : {+1, -1}) {
        for (long long Babs = 1; Rat(L * Babs * Babs) <= bound; ++Babs) {
            long long B = branch * Babs;
            if (mod3(B) != mod3(beta)) continue;
            for (long long Aabs = 0; Rat(Babs * (L * Babs + 2 * Aabs)) <= bound; ++Aabs) {
                long long A = branch * Aabs;
                if (mod3(A) != mod3(alpha)) continue;
                int d = sign_against(B, A, jto) - sign_against(B, A, jfrom);
                if (d == 0) continue;
                long long X = (L - 2) * B + 2 * A;
                if (X == 0) continue;
                Rat Q(Babs * (L * Babs + 2 * Aabs), 12);
                long long b = (B + 2 * beta) / 3, a = (A + 2 * alpha) / 3;
                PoleSeries hw = h_from_f(
                    f2(s.ell, int(mod2(a)), int(mod2(b)),
                       Polarization(Rat(Babs), Rat(Aabs), Side::exact), qmax - Q + Rat(1)),
                    2);
                PoleSeries term = h1 * hw;
                WLaurent br =
                    WLaurent::monomial(X, Coef(-d, 2)) + WLaurent::monomial(-X, Coef(d, 2));
                acc = acc + pole_shifted(PoleSeries(term.den, term.body.times_w(br)), Q);
            }
        }
    }
    return PoleSeries(acc.den, acc.body.truncated(qmax));
}

BlowupReport blowup_check(int ell, Rat qmax) {
    BlowupReport rep;
    Rat qb = qmax + Rat(2);
    QSeries th2 = theta(2, 2, 2, qb), th3 = theta(3, 2, 2, qb);
    PoleSeries a11 = appell_a(ell, 1, 1, qmax), a10 = appell_a(ell, 1, 0, qmax);
    PoleSeries a01 = appell_a(ell, 0, 1, qmax), a00 = appell_a(ell, 0, 0, qmax);
    PoleSeries d1 = a10 * th3 - a11 * th2;
    PoleSeries d0 = a00 * th2 - a01 * th3;
    rep.holds = d1.body.is_zero() && d0.body.is_zero();
    if (!rep.holds) {
        Rat e = !d1.body.is_zero() ? d1.body.lead() : d0.body.lead();
        rep.detail = "first mismatch at q^" + e.str();
    }
    QSeries b20 = blowup_factor(2, 0, true, qmax), b21 = blowup_factor(2, 1, true, qmax);
    rep.ratio_consistent = (b21 * th3 - b20 * th2).is_zero();
    return rep;
}

InvariantRecord compute_invariant(const Surface& s, const ChernVector& g, const Polarization& j,
                                  std::optional<Rat> qmax_opt) {
    Rat delta = discriminant(g, s);
    Rat qmax = qmax_opt.value_or(Rat(g.r) * delta + Rat(1));
    PoleSeries f = PoleSeries::plain(QSeries(qmax));
    switch (g.r) {
        case 1: f = PoleSeries::plain(f1(qmax)); break;
        case 2:
            f = f2(s.ell, int(mod2(-g.c1.cF)), int(mod2(g.c1.cC)), j, qmax);
            break;
        case 3:
            f = f3(s.ell, -g.c1.cF, g.c1.cC, j, qmax);
            break;
        default:
            throw UnsupportedRank("compute_invariant: rank must be <= 3");
    }
    PoleSeries h = h_from_f(f, g.r);
    std::map<int, PoleCoeff> obar;
    obar[1] = extract_refined(h, g, s);
    for (int m : chern_divisors(g, s)) {
        if (m == 1) continue;
        ChernVector gq = chern_quotient(g, m, s);
        if (gq.r == 1) {
            PoleSeries h1 = h_from_f(PoleSeries::plain(f1(gq.c2 + Rat(1))), 1);
            obar[m] = extract_refined(h1, gq, s);
        } else {
            throw UnsupportedRank("compute_invariant: unsupported divisor chain");
        }
    }
    PoleCoeff omega = rational_to_integer(obar, g, s);
    return betti_extract(omega, g, s, j);
}

Int euler_derivative_route(const Surface& s, const ChernVector& g, const Polarization& j) {
    Rat delta = discriminant(g, s);
    Rat qmax = Rat(g.r) * delta + Rat(1);
    PoleSeries f = PoleSeries::plain(QSeries(qmax));
    switch (g.r) {
        case 1: f = PoleSeries::plain(f1(qmax)); break;
        case 2: f = f2(s.ell, int(mod2(-g.c1.cF)), int(mod2(g.c1.cC)), j, qmax); break;
        case 3: f = f3(s.ell, -g.c1.cF, g.c1.cC, j, qmax); break;
        default: throw UnsupportedRank("euler_derivative_route: rank must be <= 3");
    }
    QSeries ftau = euler_specialize(f, g.r);
    QSeries htau = ftau * eta_pow(-4 * g.r, qmax + Rat(1));
    Rat e = Rat(g.r) * delta - Rat(g.r, 6);
    if (e > htau.qmax())
        throw ExponentBeyondTruncation("euler_derivative_route: beyond truncation");
    Coef v = htau.coeff(e).coeff(0);
    long long d = moduli_dim(g, s);
    if (d % 2 != 0) v = -v;
    if (denominator(v) != 1)
        throw NotPolynomial("euler_derivative_route: non-integer Euler number " + v.str());
    return numerator(v);
}

}  // namespace bps
