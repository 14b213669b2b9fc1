#pragma once

#include <compare>
#include <utility>
#include <vector>

#include "bps/rational.hpp"

namespace bps {

// Exact intersection theory of the Hirzebruch surface S_ell: H_2 = Z C + Z f
// with C^2 = -ell, f^2 = 0, C.f = 1.  Everything here is an immutable value
// and every operation is a pure function.

struct Surface {
    int ell = 1;

    explicit Surface(int l) : ell(l) {
        if (l < 1) throw UnsupportedEll("Surface: ell must be >= 1");
    }

    static constexpr int chi_o = 1;    // holomorphic Euler characteristic
    static constexpr int chi_top = 4;  // topological Euler characteristic
    static constexpr int b2 = 2;
};

// Integral class a*C + b*f.
struct DivisorClass {
    long long cC = 0;
    long long cF = 0;

    friend DivisorClass operator+(DivisorClass a, DivisorClass b) { return {a.cC + b.cC, a.cF + b.cF}; }
    friend DivisorClass operator-(DivisorClass a, DivisorClass b) { return {a.cC - b.cC, a.cF - b.cF}; }
    DivisorClass operator-() const { return {-cC, -cF}; }
    friend DivisorClass operator*(long long k, DivisorClass a) { return {k * a.cC, k * a.cF}; }
    friend bool operator==(DivisorClass, DivisorClass) = default;
    friend auto operator<=>(DivisorClass, DivisorClass) = default;
    bool is_zero() const { return cC == 0 && cF == 0; }
};

// Rational class, e.g. a slope mu(F) = c_1(F)/r(F).
struct SlopeVector {
    Rat cC;
    Rat cF;

    SlopeVector() = default;
    SlopeVector(Rat a, Rat b) : cC(a), cF(b) {}
    SlopeVector(DivisorClass d) : cC(d.cC), cF(d.cF) {}

    friend SlopeVector operator+(const SlopeVector& a, const SlopeVector& b) { return {a.cC + b.cC, a.cF + b.cF}; }
    friend SlopeVector operator-(const SlopeVector& a, const SlopeVector& b) { return {a.cC - b.cC, a.cF - b.cF}; }
    friend SlopeVector operator*(const Rat& k, const SlopeVector& a) { return {k * a.cC, k * a.cF}; }
    friend bool operator==(const SlopeVector&, const SlopeVector&) = default;
    bool is_zero() const { return cC.is_zero() && cF.is_zero(); }
};

inline DivisorClass canonical_class(const Surface& s) { return {-2, -2 - s.ell}; }

// Side of a wall used to resolve sgn(0) in lattice sums: `exact` keeps
// sgn(0) = 0, `plus`/`minus` emulate J_{m,n +/- eps}.
enum class Side { minus, exact, plus };

// Ample-cone element J_{m,n} = m(C + ell f) + n f, plus the tie-break side.
struct Polarization {
    Rat m;
    Rat n;
    Side side = Side::exact;

    Polarization(Rat m_, Rat n_, Side s = Side::exact) : m(m_), n(n_), side(s) {
        if (m.sign() < 0 || n.sign() < 0 || (m.is_zero() && n.is_zero()))
            throw DegeneratePolarization("Polarization: need m,n >= 0, (m,n) != (0,0)");
    }

    bool strictly_ample() const { return m.sign() > 0 && n.sign() > 0; }
    Rat j2(const Surface& s) const { return m * (Rat(s.ell) * m + Rat(2) * n); }
    SlopeVector as_class(const Surface& s) const { return {m, Rat(s.ell) * m + n}; }
};

// Topological type (r, c1, c2) of a sheaf; c2 is kept rational so that
// constituent charges arising from ch_2 arithmetic stay representable.
struct ChernVector {
    int r = 1;
    DivisorClass c1;
    Rat c2;

    ChernVector(int r_, DivisorClass c1_, Rat c2_) : r(r_), c1(c1_), c2(c2_) {
        if (r_ < 1) throw UnsupportedRank("ChernVector: rank must be >= 1");
    }

    SlopeVector slope() const { return {Rat(c1.cC, r), Rat(c1.cF, r)}; }
    // ch_2 = c1^2/2 - c2
    friend bool operator==(const ChernVector&, const ChernVector&) = default;
};

// Bilinear intersection form.
Rat intersect(const SlopeVector& x, const SlopeVector& y, const Surface& s);
inline Rat intersect(const DivisorClass& x, const DivisorClass& y, const Surface& s) {
    return intersect(SlopeVector(x), SlopeVector(y), s);
}

Rat discriminant(const ChernVector& g, const Surface& s);
long long moduli_dim(const ChernVector& g, const Surface& s);

// Orthogonal projections of c along / against J (needs J^2 > 0).
std::pair<SlopeVector, SlopeVector> project_pm(const SlopeVector& c, const Polarization& j,
                                               const Surface& s);

// <Gamma1,Gamma2> = r1 r2 (mu2 - mu1).K  and  I(Gamma1,Gamma2;J).
long long pairing(const ChernVector& g1, const ChernVector& g2, const Surface& s);
Rat ical(const ChernVector& g1, const ChernVector& g2, const Polarization& j, const Surface& s);

// Sign of (B C - A f).J with the polarization's tie-break: when the exact
// pairing vanishes, side=plus resolves by sgn(B) (= sgn of the class paired
// with f), side=minus by -sgn(B), side=exact keeps 0.
int sign_against(long long B, long long A, const Polarization& j);

// A wall of marginal stability, keyed by the exact ratio m:n of the
// polarizations J_{m,n} lying on it (independent of c2).
struct WallConstituent {
    ChernVector gamma;
    int multiplicity = 1;
};
using WallDecomposition = std::vector<WallConstituent>;

struct Wall {
    long long m = 1;  // coprime ratio m:n, n may be 0 for the J_{1,0} boundary ray
    long long n = 0;
    std::vector<WallDecomposition> decompositions;
};

// All walls for g inside the closed ample cone, sorted by increasing m/n.
// Supports r = 2 and r = 3 (with 1+2 splittings and triple coincidences).
std::vector<Wall> walls(const ChernVector& g, const Surface& s);

}  // namespace bps
