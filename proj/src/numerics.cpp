#include "bps/numerics.hpp"

#include <cmath>
#include <functional>

namespace bps::num {

namespace {

constexpr double PI = 3.14159265358979323846;
const cplx I(0.0, 1.0);

cplx expi(cplx x) { return std::exp(2.0 * PI * I * x); }  // e^{2 pi i x}

// q^e for rational/real exponent
cplx qpow(cplx tau, double e) { return expi(tau * e); }

// 1-d sum over t = 0, 1, 2, ... of term(t) + term(-1-t) style enumerations is
// handled by the callers; this helper sums shells until two consecutive
// shells fall below the floor, returning a tail bound.
struct ShellSum {
    cplx value{0.0, 0.0};
    double tail = 0.0;
};

ShellSum sum_shells_2d(const std::function<cplx(long long, long long)>& term, double floor_abs,
                       long long max_shell = 400) {
    ShellSum out;
    double prev = 1e300;
    int quiet = 0;
    for (long long s = 0; s <= max_shell; ++s) {
        double shell_abs = 0;
        auto eat = [&](long long a, long long b) {
            cplx t = term(a, b);
            out.value += t;
            shell_abs += std::abs(t);
        };
        if (s == 0) {
            eat(0, 0);
        } else {
            for (long long a = -s; a <= s; ++a) { eat(a, s); eat(a, -s); }
            for (long long b = -s + 1; b <= s - 1; ++b) { eat(s, b); eat(-s, b); }
        }
        if (shell_abs < floor_abs && prev < floor_abs) {
            ++quiet;
            if (quiet >= 2) {
                out.tail = 10.0 * (shell_abs + prev);
                return out;
            }
        } else {
            quiet = 0;
        }
        prev = shell_abs;
    }
    out.tail = 1e10 * prev;  // did not converge within max_shell
    return out;
}

ShellSum sum_line_1d(const std::function<cplx(long long)>& term, double floor_abs,
                     long long max_t = 4000) {
    ShellSum out;
    double prev = 1e300;
    for (long long t = 0; t <= max_t; ++t) {
        cplx a = term(t), b = term(-1 - t);
        out.value += a + b;
        double m = std::abs(a) + std::abs(b);
        if (m < floor_abs && prev < floor_abs) {
            out.tail = 10.0 * (m + prev);
            return out;
        }
        prev = m;
    }
    out.tail = 1e10 * prev;
    return out;
}

int sgn_ll(long long v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

double E(double x) { return std::erf(std::sqrt(PI) * x); }

double beta_nu(int twice_nu, double x) {
    if (twice_nu == 1) {
        if (x < 0) throw DomainError("beta_nu: need x >= 0 for nu = 1/2");
        return std::erfc(std::sqrt(PI * x));
    }
    if (twice_nu == 3) {
        if (x <= 0) throw DomainError("beta_nu: need x > 0 for nu = 3/2");
        return 2.0 / std::sqrt(x) * std::exp(-PI * x) - 2.0 * PI * beta_nu(1, x);
    }
    throw DomainError("beta_nu: nu must be 1/2 or 3/2");
}

NumericResult R_function(cplx u, cplx tau) {
    double y = tau.imag();
    if (y <= 0) throw DomainError("R_function: need Im tau > 0");
    double iu = u.imag();
    auto term = [&](long long t) -> cplx {
        double r = t + 0.5;
        double weight = (r > 0 ? 1.0 : -1.0) - E((r + iu / y) * std::sqrt(2.0 * y));
        double sign = (((t % 2) + 2) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{r-1/2} = (-1)^t
        return weight * sign * expi(-u * r) * qpow(tau, -r * r / 2.0);
    };
    ShellSum s = sum_line_1d(term, 1e-19, 4000);
    return {s.value, s.tail};
}

cplx theta1(cplx z, cplx tau) {
    cplx acc = 0;
    for (long long t = 0; t < 200; ++t) {
        double r = t + 0.5;
        double sign = (t % 2 == 0) ? 1.0 : -1.0;
        cplx a = sign * qpow(tau, r * r / 2.0) * expi(z * r);
        cplx b = -sign * qpow(tau, r * r / 2.0) * expi(-z * r);
        acc += a + b;
        if (std::abs(a) + std::abs(b) < 1e-19 * (1.0 + std::abs(acc)) && t > 3) break;
    }
    return I * acc;
}

cplx eta_fn(cplx tau) {
    cplx acc = 1;
    for (long long n = 1; n < 400; ++n) {
        cplx qn = qpow(tau, double(n));
        acc *= (1.0 - qn);
        if (std::abs(qn) < 1e-19 && n > 3) break;
    }
    return qpow(tau, 1.0 / 24.0) * acc;
}

NumericResult appell_numeric(int ell, cplx u, cplx v, cplx tau) {
    if (ell < 1) throw UnsupportedEll("appell_numeric: ell >= 1");
    cplx apow_half = expi(u * (ell / 2.0));
    auto term = [&](long long n) -> cplx {
        cplx den = 1.0 - expi(u) * qpow(tau, double(n));
        if (std::abs(den) < 1e-8) throw NearPole("appell_numeric: 1 - a q^n ~ 0");
        double sign = (ell % 2 == 0) ? 1.0 : ((((n % 2) + 2) % 2 == 0) ? 1.0 : -1.0);
        return sign * qpow(tau, 0.5 * ell * double(n) * double(n + 1)) * expi(v * double(n)) / den;
    };
    ShellSum s = sum_line_1d(term, 1e-19);
    return {apow_half * s.value, std::abs(apow_half) * s.tail};
}

NumericResult appell_completed(int ell, cplx u, cplx v, cplx tau) {
    NumericResult a = appell_numeric(ell, u, v, tau);
    cplx corr = 0;
    double tail = a.tail_bound;
    for (int k = 0; k < ell; ++k) {
        cplx ak = expi(u * double(k));
        cplx th = theta1(v + double(k) * tau + (ell - 1) / 2.0, double(ell) * tau);
        NumericResult r = R_function(double(ell) * u - v - double(k) * tau - (ell - 1) / 2.0,
                                     double(ell) * tau);
        corr += ak * th * r.value;
        tail += std::abs(ak * th) * r.tail_bound;
    }
    return {a.value + 0.5 * I * corr, tail};
}

cplx a_series_numeric(int ell, int alpha, int beta, cplx z, cplx tau) {
    const double L = ell;
    cplx w4 = expi(4.0 * z);
    auto geom_den = [&](long long p) -> cplx {
        cplx d = 1.0 - qpow(tau, double(p)) * w4;
        if (std::abs(d) < 1e-8) throw NearPole("a_series_numeric: geometric pole");
        return d;
    };
    cplx acc = 0;
    if (beta == 1 && alpha == 1) {
        auto term = [&](long long n) {
            return qpow(tau, L * n * (n + 1.0) + n) * expi(z * (2.0 * (L - 2) * n)) /
                   geom_den(2 * n + 1);
        };
        acc = sum_line_1d(term, 1e-19).value;
        return qpow(tau, (L + 2) / 4.0) * expi(z * L) * acc;
    }
    if (beta == 1 && alpha == 0) {
        auto t1 = [&](long long n) {
            double o = 2.0 * n + 1.0;
            return qpow(tau, L / 4.0 * o * o) * expi(z * ((L - 2) * o));
        };
        auto t2 = [&](long long n) {
            return qpow(tau, L * n * (n + 1.0)) * expi(z * (2.0 * (L - 2) * n)) /
                   geom_den(2 * n + 1);
        };
        cplx s1 = sum_line_1d(t1, 1e-19).value;
        cplx s2 = sum_line_1d(t2, 1e-19).value;
        return -0.5 * s1 + qpow(tau, L / 4.0) * expi(z * (L - 2.0)) * s2;
    }
    // beta = 0 rows, eq. with the eta^3/theta_1(4z) tail
    cplx eta3 = std::pow(eta_fn(tau), 3.0);
    cplx th4 = theta1(4.0 * z, tau);
    if (std::abs(th4) < 1e-10) throw NearPole("a_series_numeric: theta_1(4z) ~ 0");
    cplx tail_term = I * eta3 / th4;
    if (alpha == 1) {
        auto term = [&](long long n) {
            return qpow(tau, L * n * n + n) * expi(z * (2.0 * (L - 2) * n)) / geom_den(2 * n);
        };
        acc = sum_line_1d(term, 1e-19).value;
        return expi(2.0 * z) * acc + tail_term;
    }
    auto t1 = [&](long long n) {
        return qpow(tau, L * n * n) * expi(z * (2.0 * (L - 2) * n));
    };
    auto t2 = [&](long long n) {
        return qpow(tau, L * n * n) * expi(z * (2.0 * (L - 2) * n)) / geom_den(2 * n);
    };
    return -0.5 * sum_line_1d(t1, 1e-19).value + sum_line_1d(t2, 1e-19).value + tail_term;
}

cplx a_hat_completion_term(int ell, int alpha, int beta, cplx z, cplx tau) {
    const double L = ell;
    const double y = tau.imag();
    const double iz = z.imag();
    cplx total = 0;
    for (int k = 0; k < ell; ++k) {
        long long r1 = ((2 * k + beta * ell + alpha) % (2 * ell) + 2 * ell) % (2 * ell);
        long long r2 = ((-2 * k - alpha) % (2 * ell) + 2 * ell) % (2 * ell);
        auto n1term = [&](long long t) {
            double n1 = double(2 * ell * t + r1);
            return expi(z * ((L - 2) / L * n1)) * qpow(tau, n1 * n1 / (4 * L));
        };
        auto n2term = [&](long long t) {
            double n2 = double(2 * ell * t + r2);
            double weight = double(sgn_ll(2 * ell * t + r2)) -
                            E((n2 + 2 * (L + 2) * iz / y) * std::sqrt(y / L));
            return weight * expi(-z * ((L + 2) / L * n2)) * qpow(tau, -n2 * n2 / (4 * L));
        };
        cplx s1 = sum_line_1d(n1term, 1e-19).value;
        cplx s2 = sum_line_1d(n2term, 1e-19).value;
        total += s1 * s2;
    }
    return 0.5 * total;
}

NumericResult a_hat_spec(int ell, int alpha, int beta, cplx z, cplx tau) {
    cplx hol = a_series_numeric(ell, alpha, beta, z, tau);
    cplx corr = a_hat_completion_term(ell, alpha, beta, z, tau);
    return {hol + corr, 1e-13 * (1.0 + std::abs(hol) + std::abs(corr))};
}

NumericResult theta_hat(int ell, int alpha, int beta, const Polarization& j, cplx z, cplx tau) {
    const double L = ell;
    const double y = tau.imag();
    const double iz = z.imag();
    const double m = j.m.to_double(), n = j.n.to_double();
    const double j2 = j.j2(Surface(ell)).to_double();
    if (j2 <= 0) throw DegeneratePolarization("theta_hat: J^2 must be positive");
    auto term = [&](long long a, long long b) -> cplx {
        double B = 2.0 * b - beta, A = 2.0 * a - alpha;
        double e1 = E((-A + 2 * (L + 2) * iz / y) * std::sqrt(y / L));
        double e2 = E((B * n - A * m + 2 * (2 * n + (L + 2) * m) * iz / y) * std::sqrt(y / j2));
        if (e1 == e2) return 0.0;
        return 0.5 * (e1 - e2) * expi(z * ((L - 2) * B + 2 * A)) *
               qpow(tau, (L * B * B + 2 * A * B) / 4.0);
    };
    ShellSum s = sum_shells_2d(term, 1e-19);
    return {s.value, s.tail};
}

cplx theta_hat_first_line_delta(int ell, int alpha, int beta, cplx z, cplx tau) {
    const double L = ell;
    const double y = tau.imag();
    const double iz = z.imag();
    auto term = [&](long long a, long long b) -> cplx {
        double B = 2.0 * b - beta;
        long long An = 2 * a - alpha;
        double A = double(An);
        double e1 = E((-A + 2 * (L + 2) * iz / y) * std::sqrt(y / L));
        double d = e1 - double(sgn_ll(-An));
        if (d == 0) return 0.0;
        return 0.5 * d * expi(z * ((L - 2) * B + 2 * A)) *
               qpow(tau, (L * B * B + 2 * A * B) / 4.0);
    };
    return sum_shells_2d(term, 1e-19).value;
}

cplx f2_euler_exact(int ell, DivisorClass c1, const Polarization& j, cplx tau) {
    double y = tau.imag();
    long long qmax = (long long)std::ceil(18.0 * std::log(10.0) / (2.0 * PI * y)) + 2;
    int alpha = int(((-c1.cF) % 2 + 2) % 2), beta = int((c1.cC % 2 + 2) % 2);
    PoleSeries f = f2(ell, alpha, beta, j, Rat(qmax));
    QSeries ftau = euler_specialize(f, 2);
    cplx acc = 0;
    for (const auto& [e, W] : ftau.terms()) {
        Coef c = W.coeff(0);
        acc += qpow(tau, e.to_double()) * c.convert_to<double>();
    }
    return acc;
}

namespace {

struct LatticeGeom {
    double KJ, J2;
    int ell;
    Rat m, n;
};

// per-class data for c = X C + Y f
struct ClassTerm {
    double cJ, c2, cplus2, Kc, Kcminus;
    int KcInt;
};

ClassTerm class_term(const LatticeGeom& g, long long X, long long Y) {
    ClassTerm t;
    Rat cJ = Rat(X) * g.n + Rat(Y) * g.m;
    Rat c2 = Rat(-g.ell * X * X + 2 * X * Y);
    Rat J2 = g.m * (Rat(g.ell) * g.m + Rat(2) * g.n);
    Rat KJ = Rat(-(g.ell + 2)) * g.m - Rat(2) * g.n;
    Rat Kc = Rat((g.ell - 2) * X - 2 * Y);
    Rat Kcm = Kc - cJ * KJ / J2;
    t.cJ = cJ.to_double();
    t.c2 = c2.to_double();
    t.cplus2 = (cJ * cJ / J2).to_double();
    t.Kc = Kc.to_double();
    t.Kcminus = Kcm.to_double();
    t.KcInt = int(((((g.ell - 2) * X - 2 * Y) % 2) + 2) % 2);
    return t;
}

}  // namespace

NumericResult f2hat_euler(int ell, DivisorClass c1, const Polarization& j, cplx tau, double y) {
    cplx hol = f2_euler_exact(ell, c1, j, tau);
    LatticeGeom g{0, 0, ell, j.m, j.n};
    double J2 = j.j2(Surface(ell)).to_double();
    double KJ = (Rat(-(ell + 2)) * j.m - Rat(2) * j.n).to_double();
    auto term = [&](long long p, long long s) -> cplx {
        long long X = -c1.cC + 2 * p, Y = -c1.cF + 2 * s;
        ClassTerm t = class_term(g, X, Y);
        double x = t.cplus2 * y;
        double val = 0.25 * KJ / (PI * std::sqrt(y * J2)) * std::exp(-PI * x);
        if (t.cJ != 0) val -= 0.25 * t.Kc * (t.cJ > 0 ? 1.0 : -1.0) * beta_nu(1, x);
        double sign = t.KcInt == 0 ? 1.0 : -1.0;
        return val * sign * qpow(tau, -t.c2 / 4.0);
    };
    ShellSum sum = sum_shells_2d(term, 1e-19);
    return {hol + sum.value, sum.tail + 1e-13 * std::abs(hol)};
}

NumericResult dtaubar_f2hat(int ell, DivisorClass c1, const Polarization& j, cplx tau, double y) {
    LatticeGeom g{0, 0, ell, j.m, j.n};
    double J2 = j.j2(Surface(ell)).to_double();
    double KJ = (Rat(-(ell + 2)) * j.m - Rat(2) * j.n).to_double();
    auto term = [&](long long p, long long s) -> cplx {
        long long X = -c1.cC + 2 * p, Y = -c1.cF + 2 * s;
        ClassTerm t = class_term(g, X, Y);
        double x = t.cplus2 * y;
        cplx val = -I * KJ / (16.0 * PI * std::sqrt(J2) * std::pow(y, 1.5));
        val += I * t.Kcminus * t.cJ / (8.0 * std::sqrt(y * J2));
        double sign = t.KcInt == 0 ? 1.0 : -1.0;
        return val * std::exp(-PI * x) * sign * qpow(tau, -t.c2 / 4.0);
    };
    ShellSum sum = sum_shells_2d(term, 1e-19);
    return {sum.value, sum.tail};
}

NumericResult siegel_narain_theta(int r, const ResidueClass& mu, std::pair<cplx, cplx> rho,
                                  cplx tau, cplx taubar, const Surface& s,
                                  const Polarization& j) {
    Rat J2 = j.j2(s);
    if (!(J2.sign() > 0)) throw DegeneratePolarization("siegel_narain_theta: J^2 > 0");
    // k = (r K + 2 mu + 2 r (i1, i2)) / 2 componentwise
    long long KC = -2, KF = -2 - s.ell;
    long long muC = mu.beta, muF = -mu.alpha;
    auto term = [&](long long i1, long long i2) -> cplx {
        Rat kC = Rat(r * KC + 2 * muC + 2 * r * i1, 2);
        Rat kF = Rat(r * KF + 2 * muF + 2 * r * i2, 2);
        Rat kJ = kC * j.n + kF * j.m;  // (kC C + kF f).J
        Rat k2 = Rat(-s.ell) * kC * kC + Rat(2) * kC * kF;
        Rat kplus2 = kJ * kJ / J2;
        Rat kminus2 = k2 - kplus2;
        // phase (-1)^{r k.K}
        Rat rkK = Rat(r) * (Rat(-s.ell) * kC * Rat(KC) + kC * Rat(KF) + kF * Rat(KC));
        if (!rkK.is_integer()) throw TripwireError("siegel_narain_theta: non-integer phase");
        double sign = (rkK.num() % 2 == 0) ? 1.0 : -1.0;
        cplx rhok = rho.first * kC.to_double() * double(-s.ell) + rho.first * kF.to_double() +
                    rho.second * kC.to_double();
        return sign * expi(tau * (kplus2.to_double() / (2.0 * r))) *
               expi(-taubar * (-kminus2.to_double() / (2.0 * r))) * expi(rhok);
    };
    ShellSum sum = sum_shells_2d(term, 1e-19);
    return {sum.value, sum.tail};
}

cplx upsilon(int ell, DivisorClass c1, const Polarization& j, cplx tau) {
    LatticeGeom g{0, 0, ell, j.m, j.n};
    double J2 = j.j2(Surface(ell)).to_double();
    cplx taubar = std::conj(tau);
    auto term = [&](long long p, long long s) -> cplx {
        long long X = -c1.cC + 2 * p, Y = -c1.cF + 2 * s;
        ClassTerm t = class_term(g, X, Y);
        double sign = t.KcInt == 0 ? 1.0 : -1.0;
        double cminus2 = t.c2 - t.cplus2;
        return t.Kcminus * (t.cJ / std::sqrt(J2)) * sign *
               expi(tau * (t.cplus2 / 4.0)) * expi(-taubar * (-cminus2 / 4.0));
    };
    return sum_shells_2d(term, 1e-19).value;
}

Rat upsilon_max_termwise(int ell, const Polarization& j, long long box) {
    Rat J2 = j.j2(Surface(ell));
    Rat KJ = Rat(-(ell + 2)) * j.m - Rat(2) * j.n;
    Rat best(0);
    for (long long X = -box; X <= box; ++X)
        for (long long Y = -box; Y <= box; ++Y) {
            Rat cJ = Rat(X) * j.n + Rat(Y) * j.m;
            Rat Kc = Rat((ell - 2) * X - 2 * Y);
            Rat kcm = Kc - cJ * KJ / J2;
            if (kcm.sign() < 0) kcm = -kcm;
            if (kcm > best) best = kcm;
        }
    return best;
}

AnomalyReport anomaly_check(int ell, const Polarization& j, std::pair<cplx, cplx> rho, cplx tau) {
    AnomalyReport rep;
    Surface s(ell);
    double y = tau.imag();
    double J2 = j.j2(s).to_double();
    double KJ = (Rat(-(ell + 2)) * j.m - Rat(2) * j.n).to_double();
    cplx taubar = std::conj(tau);
    cplx etav = eta_fn(tau);
    cplx eta8conj = std::conj(std::pow(etav, -8.0));

    // LHS: sum over the four c1 classes of conj(dtaubar h-hat) Theta_{2,mu}
    cplx lhs = 0;
    const std::pair<int, int> classes[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};  // (beta, alpha)
    for (auto [beta, alpha] : classes) {
        DivisorClass c1{beta, -alpha};
        NumericResult df = dtaubar_f2hat(ell, c1, j, tau, y);
        ResidueClass mu{2, alpha, beta};
        NumericResult th = siegel_narain_theta(2, mu, rho, tau, taubar, s, j);
        lhs += std::conj(std::pow(etav, -8.0) * df.value) * th.value;
    }

    // RHS: +i KJ/(16 pi sqrt(J2) y^{3/2}) Z1^2 - i/(8 sqrt(y)) etabar^{-8} sum Upsilon Theta
    ResidueClass mu1{1, 0, 0};
    NumericResult th1 = siegel_narain_theta(1, mu1, rho, tau, taubar, s, j);
    cplx z1 = std::conj(std::pow(etav, -4.0)) * th1.value;
    cplx rhs = I * KJ / (16.0 * PI * std::sqrt(J2) * std::pow(y, 1.5)) * z1 * z1;
    cplx upsum = 0;
    double upsmag = 0;
    for (auto [beta, alpha] : classes) {
        DivisorClass c1{beta, -alpha};
        ResidueClass mu{2, alpha, beta};
        cplx up = upsilon(ell, c1, j, tau);
        upsmag += std::abs(up);
        NumericResult th = siegel_narain_theta(2, mu, rho, tau, taubar, s, j);
        upsum += up * th.value;
    }
    rhs -= I / (8.0 * std::sqrt(y)) * eta8conj * upsum;

    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.upsilon_mag = upsmag;
    double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
    rep.full_residual = std::abs(lhs - rhs) / scale;

    // D_r Theta = 0 by finite differences (r = 2, mu = 0)
    {
        const double h = 1e-3;
        ResidueClass mu{2, 0, 0};
        auto th = [&](cplx t, std::pair<cplx, cplx> rr) {
            return siegel_narain_theta(2, mu, rr, t, taubar, s, j).value;
        };
        cplx dtau = (th(tau + h, rho) - th(tau - h, rho)) / (2.0 * h);
        // rho-shift along J/sqrt(J2): rho +/- sigma (C + ell f + (n/m)-mix)
        SlopeVector Jc = j.as_class(s);
        double jn = std::sqrt(J2);
        auto shift = [&](double sig) {
            return std::pair<cplx, cplx>{rho.first + sig * Jc.cC.to_double() / jn,
                                         rho.second + sig * Jc.cF.to_double() / jn};
        };
        cplx d2rho = (th(tau, shift(h)) - 2.0 * th(tau, rho) + th(tau, shift(-h))) / (h * h);
        cplx dr = dtau + I / (4.0 * PI * 2.0) * d2rho;
        rep.dtheta_residual = std::abs(dr) / std::max(1.0, std::abs(th(tau, rho)));
    }
    return rep;
}

}  // namespace bps::num
