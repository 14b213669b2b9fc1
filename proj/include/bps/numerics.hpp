#pragma once

#include <complex>
#include <utility>

#include "bps/invariants.hpp"
#include "bps/lattice.hpp"

// Floating-point evaluation of the non-holomorphic completions and the
// modular / holomorphic-anomaly verification layer.  Everything here is
// double precision with explicit truncation tails; exact statements live in
// the series modules.
namespace bps::num {

using cplx = std::complex<double>;

struct HPoint {
    cplx tau;  // Im tau > 0
    cplx z;
    cplx u;
    cplx v;
    std::pair<cplx, cplx> rho;  // components along C and f
};

struct NumericResult {
    cplx value;
    double tail_bound = 0.0;
};

// E(x) = 2 int_0^x e^{-pi u^2} du = erf(sqrt(pi) x)
double E(double x);

// beta_nu(x) = int_x^infty u^{-nu} e^{-pi u} du for nu = 1/2, 3/2
// (twice_nu = 1 or 3)
double beta_nu(int twice_nu, double x);

// Zwegers R-function at (u, tau)
NumericResult R_function(cplx u, cplx tau);

cplx theta1(cplx z, cplx tau);  // includes the overall i
cplx eta_fn(cplx tau);

// Level-ell Appell function and its completion (appendix normalization)
NumericResult appell_numeric(int ell, cplx u, cplx v, cplx tau);
NumericResult appell_completed(int ell, cplx u, cplx v, cplx tau);

// Specialized holomorphic series A_{ell,(alpha,beta)}(z,tau), evaluated with
// closed-form geometric denominators, and its modular completion.
cplx a_series_numeric(int ell, int alpha, int beta, cplx z, cplx tau);
cplx a_hat_completion_term(int ell, int alpha, int beta, cplx z, cplx tau);
NumericResult a_hat_spec(int ell, int alpha, int beta, cplx z, cplx tau);

// Completed indefinite theta (z-refined) and the first-line delta
// sum_{a,b} (E_1 - sgn(-A))/2 w^X q^Q used by the cancellation check.
NumericResult theta_hat(int ell, int alpha, int beta, const Polarization& j, cplx z, cplx tau);
cplx theta_hat_first_line_delta(int ell, int alpha, int beta, cplx z, cplx tau);

// Euler-specialized f_2 and its completion.  The non-holomorphic modulus y
// is passed separately so d/d(tau-bar) = (i/2) d/dy can be taken by finite
// differences at fixed tau; y defaults to Im tau.
cplx f2_euler_exact(int ell, DivisorClass c1, const Polarization& j, cplx tau);
NumericResult f2hat_euler(int ell, DivisorClass c1, const Polarization& j, cplx tau, double y);
NumericResult dtaubar_f2hat(int ell, DivisorClass c1, const Polarization& j, cplx tau, double y);

// Siegel-Narain theta; taubar is independent so D_r can be checked by
// finite differences (taubar = conj(tau) on the physical slice).
NumericResult siegel_narain_theta(int r, const ResidueClass& mu, std::pair<cplx, cplx> rho,
                                  cplx tau, cplx taubar, const Surface& s, const Polarization& j);

cplx upsilon(int ell, DivisorClass c1, const Polarization& j, cplx tau);
// max |K . c_-| over the contributing lattice box (exact; 0 iff the Upsilon
// term vanishes term-by-term, e.g. at J = -K)
Rat upsilon_max_termwise(int ell, const Polarization& j, long long box);

struct AnomalyReport {
    double full_residual = 0.0;      // |D2 Zhat - rhs| / scale
    double dtheta_residual = 0.0;    // |D_r Theta_{r,mu}| by finite differences
    double upsilon_mag = 0.0;        // |Upsilon| summed over classes
    cplx lhs;
    cplx rhs;
};
AnomalyReport anomaly_check(int ell, const Polarization& j, std::pair<cplx, cplx> rho, cplx tau);

}  // namespace bps::num
