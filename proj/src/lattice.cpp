#include "bps/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace bps {

Rat intersect(const SlopeVector& x, const SlopeVector& y, const Surface& s) {
    // C^2 = -ell, C.f = 1, f^2 = 0
    return Rat(-s.ell) * x.cC * y.cC + x.cC * y.cF + x.cF * y.cC;
}

Rat discriminant(const ChernVector& g, const Surface& s) {
    Rat c1sq = intersect(g.c1, g.c1, s);
    return (g.c2 - Rat(g.r - 1, 2 * g.r) * c1sq) / Rat(g.r);
}

long long moduli_dim(const ChernVector& g, const Surface& s) {
    Rat d = Rat(2 * g.r * g.r) * discriminant(g, s) - Rat(g.r * g.r) * Surface::chi_o + Rat(1);
    if (!d.is_integer())
        throw NonIntegerDimension("moduli_dim: 2r^2*Delta - r^2 + 1 = " + d.str());
    if (d.sign() < 0)
        throw NegativeDimension("moduli_dim: negative dimension " + d.str());
    return d.num();
}

std::pair<SlopeVector, SlopeVector> project_pm(const SlopeVector& c, const Polarization& j,
                                               const Surface& s) {
    Rat j2 = j.j2(s);
    if (j2.is_zero()) throw DegeneratePolarization("project_pm: J^2 = 0");
    SlopeVector jc = j.as_class(s);
    Rat t = intersect(c, jc, s) / j2;
    SlopeVector plus = t * jc;
    return {plus, c - plus};
}

long long pairing(const ChernVector& g1, const ChernVector& g2, const Surface& s) {
    // r1 r2 (mu2 - mu1) = r1 c1(g2) - r2 c1(g1), an integral class
    DivisorClass d = (long long)g1.r * g2.c1 - (long long)g2.r * g1.c1;
    Rat v = intersect(d, canonical_class(s), s);
    return v.num();
}

Rat ical(const ChernVector& g1, const ChernVector& g2, const Polarization& j, const Surface& s) {
    DivisorClass d = (long long)g1.r * g2.c1 - (long long)g2.r * g1.c1;
    return intersect(SlopeVector(d), j.as_class(s), s);
}

int sign_against(long long B, long long A, const Polarization& j) {
    Rat i = Rat(B) * j.n - Rat(A) * j.m;
    if (!i.is_zero()) return i.sign();
    switch (j.side) {
        case Side::plus: return sgn(B);
        case Side::minus: return -sgn(B);
        default: return 0;
    }
}

namespace {

// ch_2-additive c2 of a subobject pair: c2(F) = c2(E1) + c2(E2) + c1(E1).c1(E2)
Rat c2_pair_sum(const ChernVector& g, const DivisorClass& c1a, const DivisorClass& c1b,
                const Surface& s) {
    return g.c2 - intersect(c1a, c1b, s);
}

struct RatioKey {
    long long m, n;
    bool operator<(const RatioKey& o) const {
        // ascending slope m/n; n = 0 sorts last (ratio +infinity)
        if (n == 0 && o.n == 0) return false;
        if (n == 0) return false;
        if (o.n == 0) return true;
        return m * o.n < o.m * n;
    }
};

RatioKey ratio_of(long long B, long long A) {
    long long g = std::gcd(B < 0 ? -B : B, A < 0 ? -A : A);
    return {std::abs(B) / g, std::abs(A) / g};
}

bool cv_less(const ChernVector& a, const ChernVector& b) {
    return std::tuple(a.r, a.c1.cC, a.c1.cF, a.c2) < std::tuple(b.r, b.c1.cC, b.c1.cF, b.c2);
}

WallDecomposition canonical(std::vector<ChernVector> parts) {
    std::sort(parts.begin(), parts.end(), cv_less);
    WallDecomposition out;
    for (const auto& p : parts) {
        if (!out.empty() && out.back().gamma == p)
            ++out.back().multiplicity;
        else
            out.push_back({p, 1});
    }
    return out;
}

bool decomp_less(const WallDecomposition& a, const WallDecomposition& b) {
    auto key = [](const WallDecomposition& d) {
        std::vector<std::tuple<int, long long, long long, Rat, int>> k;
        for (const auto& c : d)
            k.emplace_back(c.gamma.r, c.gamma.c1.cC, c.gamma.c1.cF, c.gamma.c2, c.multiplicity);
        return k;
    };
    return key(a) < key(b);
}

void walls_rank2(const ChernVector& g, const Surface& s,
                 std::map<RatioKey, std::vector<WallDecomposition>>& acc) {
    long long beta = g.c1.cC, alpha = -g.c1.cF;
    Rat delta = discriminant(g, s);
    Rat bound = Rat(8) * delta;  // B(ell B + 2A) <= 8 Delta
    for (long long B = (beta % 2 == 0 ? 2 : 1); Rat(s.ell * B * B) <= bound; B += 2) {
        long long A0 = ((alpha % 2) + 2) % 2;
        for (long long A = A0; Rat(B * (s.ell * B + 2 * A)) <= bound; A += 2) {
            if (s.ell * B * B + 2 * A * B <= 0) continue;
            // c1(E2) - c1(E1) = B C - A f; parity makes the split integral
            DivisorClass c1b{(g.c1.cC + B) / 2, (g.c1.cF - A) / 2};
            DivisorClass c1a = g.c1 - c1b;
            Rat c2sum = c2_pair_sum(g, c1a, c1b, s);
            if (!c2sum.is_integer() || c2sum.sign() < 0) continue;
            auto& dec = acc[ratio_of(B, A)];
            for (long long k = 0; k <= c2sum.num(); ++k) {
                dec.push_back(canonical({ChernVector(1, c1a, Rat(k)),
                                         ChernVector(1, c1b, c2sum - Rat(k))}));
            }
        }
    }
}

void walls_rank3_12(const ChernVector& g, const Surface& s,
                    std::map<RatioKey, std::vector<WallDecomposition>>& acc) {
    long long beta = g.c1.cC, alpha = -g.c1.cF;
    Rat delta = discriminant(g, s);
    Rat bound = Rat(36) * delta;  // B(ell B + 2A) <= 36 Delta
    auto mod3 = [](long long x) { return ((x % 3) + 3) % 3; };
    for (int sign_branch : {+1, -1}) {
        for (long long Babs = 1; Rat(s.ell * Babs * Babs) <= bound; ++Babs) {
            long long B = sign_branch * Babs;
            if (mod3(B) != mod3(beta)) continue;
            for (long long Aabs = 0; Rat(Babs * (s.ell * Babs + 2 * Aabs)) <= bound; ++Aabs) {
                long long A = sign_branch * Aabs;
                if (mod3(A) != mod3(alpha)) continue;
                long long q = s.ell * B * B + 2 * A * B;
                if (q <= 0) continue;
                // rank-1 part (beta - B)/3 C + (A - alpha)/3 * (-f)... see below
                DivisorClass c1a{(beta - B) / 3, (A - alpha) / 3};
                DivisorClass c1b = g.c1 - c1a;
                // Delta_1 + 2 Delta_2 = 3 Delta - B(ell B + 2A)/12
                Rat t = Rat(3) * delta - Rat(q, 12);
                if (t.sign() < 0) continue;
                Rat c2sum = c2_pair_sum(g, c1a, c1b, s);
                bool any = false;
                std::vector<WallDecomposition> local;
                for (long long k = 0; Rat(k) <= t; ++k) {
                    Rat c2b = c2sum - Rat(k);
                    ChernVector g2(2, c1b, c2b);
                    if (discriminant(g2, s).sign() < 0) continue;
                    local.push_back(canonical({ChernVector(1, c1a, Rat(k)), g2}));
                    any = true;
                }
                if (any) {
                    auto& dec = acc[ratio_of(B, A)];
                    dec.insert(dec.end(), local.begin(), local.end());
                }
            }
        }
    }
}

void walls_rank3_triples(const ChernVector& g, const Surface& s,
                         std::map<RatioKey, std::vector<WallDecomposition>>& acc) {
    Rat delta = discriminant(g, s);
    Rat bound = Rat(36) * delta;
    std::set<std::vector<std::tuple<long long, long long, long long>>> seen;
    // primitive directions v = B0 C - A0 f with v.J = 0 on the wall
    for (long long B0 = 1; Rat(4 * s.ell * B0 * B0) <= bound; ++B0) {
        for (long long A0 = 0; Rat(4 * B0 * (s.ell * B0 + 2 * A0)) <= bound; ++A0) {
            if (std::gcd(B0, A0) != 1) continue;
            long long V = s.ell * B0 * B0 + 2 * A0 * B0;  // = -v^2
            if (V <= 0) continue;
            // x - y = p v, y - z = t v; sum of Delta_i >= 0 bounds (p,t)
            for (long long p = -6; p <= 6; ++p) {
                for (long long t = -6; t <= 6; ++t) {
                    if (p == 0 && t == 0) continue;
                    long long form = 3 * p * p + (p + 2 * t) * (p + 2 * t);
                    Rat sum = Rat(3) * delta - Rat(V * form, 12);
                    if (sum.sign() < 0) continue;
                    DivisorClass v{B0, -A0};
                    DivisorClass rem = g.c1 - (p + 2 * t) * v;
                    if (rem.cC % 3 != 0 || rem.cF % 3 != 0) continue;
                    DivisorClass z{rem.cC / 3, rem.cF / 3};
                    DivisorClass y = z + t * v;
                    DivisorClass x = y + p * v;
                    Rat c2sum = g.c2 - intersect(x, y, s) - intersect(x, z, s) - intersect(y, z, s);
                    if (!c2sum.is_integer() || c2sum.sign() < 0) continue;
                    for (long long i = 0; i <= c2sum.num(); ++i) {
                        for (long long j = 0; Rat(i + j) <= c2sum; ++j) {
                            long long k = c2sum.num() - i - j;
                            std::vector<std::tuple<long long, long long, long long>> key = {
                                {x.cC, x.cF, i}, {y.cC, y.cF, j}, {z.cC, z.cF, k}};
                            std::sort(key.begin(), key.end());
                            if (!seen.insert(key).second) continue;
                            acc[ratio_of(B0, A0)].push_back(
                                canonical({ChernVector(1, x, Rat(i)), ChernVector(1, y, Rat(j)),
                                           ChernVector(1, z, Rat(k))}));
                        }
                    }
                }
            }
        }
    }
}

}  // namespace

std::vector<Wall> walls(const ChernVector& g, const Surface& s) {
    if (g.r != 2 && g.r != 3) throw UnsupportedRank("walls: rank must be 2 or 3");
    std::vector<Wall> out;
    if (discriminant(g, s).sign() < 0) return out;

    std::map<RatioKey, std::vector<WallDecomposition>> acc;
    if (g.r == 2) {
        walls_rank2(g, s, acc);
    } else {
        walls_rank3_12(g, s, acc);
        walls_rank3_triples(g, s, acc);
    }
    for (auto& [key, decs] : acc) {
        std::sort(decs.begin(), decs.end(), decomp_less);
        decs.erase(std::unique(decs.begin(), decs.end(),
                               [](const WallDecomposition& a, const WallDecomposition& b) {
                                   return !decomp_less(a, b) && !decomp_less(b, a);
                               }),
                   decs.end());
        out.push_back({key.m, key.n, std::move(decs)});
    }
    return out;
}

}  // namespace bps
