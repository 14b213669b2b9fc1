#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bps/lattice.hpp"
#include "bps/qseries.hpp"

namespace bps {

// c1 = beta C - alpha f modulo r H^2
struct ResidueClass {
    int r = 1;
    int alpha = 0;
    int beta = 0;
    static ResidueClass of(const ChernVector& g) {
        auto m = [&](long long x) { return int(((x % g.r) + g.r) % g.r); };
        return {g.r, m(-g.c1.cF), m(g.c1.cC)};
    }
};

// A single q-coefficient of a PoleSeries: num / prod_i (w^{m_i} - w^{-m_i}).
// This is the shape in which refined invariants Omega(Gamma,w;J) circulate.
struct PoleCoeff {
    std::vector<int> den;
    WLaurent num;

    bool is_zero() const { return num.is_zero(); }
};

PoleCoeff pc_mul(const PoleCoeff& a, const PoleCoeff& b);
PoleCoeff pc_scale(const PoleCoeff& a, const Coef& k);
PoleCoeff pc_add(const PoleCoeff& a, const PoleCoeff& b);
PoleCoeff pc_neg(const PoleCoeff& a);
bool pc_equal(const PoleCoeff& a, const PoleCoeff& b);
// w -> -(-w)^m multi-cover substitution
PoleCoeff pc_substitute(const PoleCoeff& a, int m);
// (w - w^{-1}) * value, divided down to a Laurent polynomial.
// Throws NotDivisible when the pole order exceeds one (strictly semi-stable).
WLaurent pc_simple_pole_numerator(const PoleCoeff& a);

struct InvariantRecord {
    int ell = 1;
    ChernVector gamma;
    Polarization j;
    PoleCoeff refined;          // Omega = refined.num / (w - w^{-1})
    std::vector<Int> poincare;  // b_0..b_{2 dim}; empty when the moduli space is empty
    Int euler = 0;
    long long dim = 0;
    std::vector<std::string> warnings;
};

// --- generating functions ------------------------------------------------

QSeries f1(Rat qmax);

// Level-ell Appell series A_{ell,(alpha,beta)}; beta=1 gives a plain series,
// beta=0 carries the (w^2 - w^{-2}) pole (den {2}).
PoleSeries appell_a(int ell, int alpha, int beta, Rat qmax);

QSeries indef_theta(int ell, int alpha, int beta, const Polarization& j, Rat qmax);

// f_{2, beta C - alpha f}(z,tau; S_ell, J) = A + vartheta.
PoleSeries f2(int ell, int alpha, int beta, const Polarization& j, Rat qmax);

// Independent wall-sum route for f_{2, C - alpha f} (cross-check oracle).
QSeries f2_wallsum(int ell, int alpha, const Polarization& j, Rat qmax);

// Rank-3 generating function for c1 = beta C - alpha f, beta != 0 mod 3.
PoleSeries f3(int ell, long long alpha, long long beta, const Polarization& j, Rat qmax);

// (i / (theta_1(2z) eta))^r and h = prefactor^r * f; f_from_h undoes it.
PoleSeries h_prefactor(int r, Rat qmax);
PoleSeries h_from_f(const PoleSeries& f, int r);
PoleSeries f_from_h(const PoleSeries& h, int r);

// Euler specialization f_{r,c1}(tau) of f_{r,c1}(z,tau): per q-order the
// coefficient of s^{r-1} in f(-e^s) times (-1)^{r-1}/2^{r-1}; orders below
// s^{r-1} must vanish (tripwire).
QSeries euler_specialize(const PoleSeries& f, int r);

// Coefficient of q^{r Delta(Gamma) - r/6} of h: the rational invariant
// Omega-bar(Gamma,w;J) over h's denominator.
PoleCoeff extract_refined(const PoleSeries& h, const ChernVector& g, const Surface& s);

// Invert Omega-bar(Gamma,w) = sum_{m | Gamma} Omega(Gamma/m, -(-w)^m)/m.
// Input maps every divisor m of Gamma to Omega-bar(Gamma/m,w).
PoleCoeff rational_to_integer(const std::map<int, PoleCoeff>& omegabar_by_divisor,
                              const ChernVector& g, const Surface& s);

// Divisors m >= 1 with Gamma/m an integral Chern vector, and the quotient.
std::vector<int> chern_divisors(const ChernVector& g);
ChernVector chern_quotient(const ChernVector& g, int m, const Surface& s);

InvariantRecord betti_extract(const PoleCoeff& omega, const ChernVector& g, const Surface& s,
                              const Polarization& j);

// Primitive wall-crossing increment for Gamma = g1 + g2.
PoleCoeff delta_omega_primitive(const ChernVector& g1, const ChernVector& g2,
                                const Polarization& jfrom, const Polarization& jto,
                                const PoleCoeff& o1, const PoleCoeff& o2, const Surface& s);

// Accumulated wall-crossing of h_{r,c1} between polarizations (r <= 3);
// h(jto) = h(jfrom) + transport.
PoleSeries wallcross_transport(const ChernVector& g, const Polarization& jfrom,
                               const Polarization& jto, const Surface& s, Rat qmax);

struct BlowupReport {
    bool holds = false;
    bool ratio_consistent = false;
    std::string detail;
};
// Checks the multiplicative theta_2/theta_3 relations between the
// A_{ell,(a,0)} and A_{ell,(a,1)} series (exact at ell=1, fails for ell>1)
// and B_{2,1}/B_{2,0} = theta_2/theta_3 consistency.
BlowupReport blowup_check(int ell, Rat qmax);

// Full pipeline: generating function -> h -> rational/integer invariants ->
// Betti numbers, with the two built-in Euler cross-checks.
InvariantRecord compute_invariant(const Surface& s, const ChernVector& g, const Polarization& j,
                                  std::optional<Rat> qmax = std::nullopt);

// Third Euler route (z-derivative specialization, eq-independent of the
// refined extraction); primitive Gamma only.
Int euler_derivative_route(const Surface& s, const ChernVector& g, const Polarization& j);

}  // namespace bps
