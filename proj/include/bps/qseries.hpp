#pragma once

#include <map>
#include <vector>

#include "bps/rational.hpp"
#include "bps/wlaurent.hpp"

namespace bps {

// Truncated series in rational powers of q with WLaurent coefficients.
// qmax is the order up to which the stored terms are guaranteed correct;
// anything beyond it is dropped on insertion.  Under multiplication
//   qmax(ab) = min(qmax(a) + lead(b), qmax(b) + lead(a)),
// which prevents silently wrong high-order terms.
class QSeries {
  public:
    QSeries() : qmax_(0) {}
    explicit QSeries(Rat qmax) : qmax_(qmax) {}

    static QSeries constant(const Coef& c, Rat qmax) {
        QSeries s(qmax);
        s.add_term(Rat(0), WLaurent::monomial(0, c));
        return s;
    }

    const Rat& qmax() const { return qmax_; }
    bool is_zero() const { return t_.empty(); }
    const std::map<Rat, WLaurent>& terms() const { return t_; }

    // Smallest stored exponent; for the zero series the truncation order
    // (the conservative "we know nothing below qmax" value).
    Rat lead() const { return t_.empty() ? qmax_ : t_.begin()->first; }

    WLaurent coeff(const Rat& e) const {
        auto it = t_.find(e);
        return it == t_.end() ? WLaurent() : it->second;
    }

    void add_term(const Rat& e, const WLaurent& c) {
        if (c.is_zero() || e > qmax_) return;
        auto [it, fresh] = t_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    void add_monomial(const Rat& e, long long wexp, const Coef& c) {
        add_term(e, WLaurent::monomial(wexp, c));
    }

    QSeries truncated(Rat new_qmax) const {
        QSeries s(new_qmax < qmax_ ? new_qmax : qmax_);
        for (const auto& [e, c] : t_) {
            if (e > s.qmax_) break;
            s.t_[e] = c;
        }
        return s;
    }

    QSeries& operator+=(const QSeries& o) {
        if (o.qmax_ < qmax_) *this = truncated(o.qmax_);
        for (const auto& [e, c] : o.t_) add_term(e, c);
        return *this;
    }
    friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries& b) { return a += b.neg(); }

    QSeries neg() const {
        QSeries s(qmax_);
        for (const auto& [e, c] : t_) s.t_[e] = c.neg();
        return s;
    }

    QSeries scaled(const Coef& k) const {
        QSeries s(qmax_);
        if (k == 0) return s;
        for (const auto& [e, c] : t_) s.t_[e] = c.scaled(k);
        return s;
    }

    // multiply by c * q^e w^k (exact; shifts the truncation order)
    QSeries shifted(const Rat& e, long long wexp = 0, const Coef& k = Coef(1)) const {
        QSeries s(qmax_ + e);
        if (k == 0) return s;
        WLaurent mono = WLaurent::monomial(wexp, k);
        for (const auto& [q, c] : t_) s.t_[q + e] = c * mono;
        return s;
    }

    // exact multiplication by a fixed Laurent polynomial (no q content)
    QSeries times_w(const WLaurent& l) const {
        QSeries s(qmax_);
        if (l.is_zero()) return s;
        for (const auto& [e, c] : t_) s.add_term(e, c * l);
        return s;
    }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        Rat qa = a.qmax_ + b.lead();
        Rat qb = b.qmax_ + a.lead();
        QSeries s(qa < qb ? qa : qb);
        for (const auto& [ea, ca] : a.t_) {
            if (ea + b.lead() > s.qmax_) break;
            for (const auto& [eb, cb] : b.t_) {
                Rat e = ea + eb;
                if (e > s.qmax_) break;
                s.add_term(e, ca * cb);
            }
        }
        return s;
    }

    QSeries w_inverted() const {
        QSeries s(qmax_);
        for (const auto& [e, c] : t_) s.t_[e] = c.w_inverted();
        return s;
    }

    QSeries w_log_deriv() const {
        QSeries s(qmax_);
        for (const auto& [e, c] : t_) {
            WLaurent d = c.w_log_deriv();
            if (!d.is_zero()) s.t_[e] = d;
        }
        return s;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) {
        return a.t_ == b.t_;  // compares stored terms; caller aligns qmax
    }

  private:
    Rat qmax_;
    std::map<Rat, WLaurent> t_;
};

// body / prod_i (w^{m_i} - w^{-m_i}), den kept sorted.
struct PoleSeries {
    std::vector<int> den;
    QSeries body;

    PoleSeries() = default;
    PoleSeries(std::vector<int> d, QSeries b);
    static PoleSeries plain(QSeries b) { return PoleSeries({}, std::move(b)); }

    bool is_plain() const { return den.empty(); }
    bool is_zero() const { return body.is_zero(); }
};

PoleSeries operator+(const PoleSeries& a, const PoleSeries& b);
PoleSeries operator-(const PoleSeries& a, const PoleSeries& b);
PoleSeries operator*(const PoleSeries& a, const PoleSeries& b);
PoleSeries operator*(const PoleSeries& a, const QSeries& b);
PoleSeries pole_neg(const PoleSeries& a);
PoleSeries pole_pow(const PoleSeries& a, int n);
PoleSeries pole_shifted(const PoleSeries& a, const Rat& e, long long wexp = 0,
                        const Coef& k = Coef(1));
// exact equality of the represented rational functions up to the common qmax
bool pole_equal(const PoleSeries& a, const PoleSeries& b);

// Removes one den factor m, dividing the body exactly; NotDivisible on failure.
PoleSeries reduce_pole(const PoleSeries& a, int m);

// Inverse of a series whose leading coefficient is a +-1 monomial and whose
// remaining terms all have strictly larger q-exponent.
QSeries invert_unit(const QSeries& u, Rat qmax);

// Dedekind eta q^{1/24} prod (1-q^n) and its integer powers (k may be < 0).
QSeries eta(Rat qmax);
QSeries eta_pow(int k, Rat qmax);

// theta_kind(a z, b tau) as a sum-form series; theta_1 is stored with the
// overall i stripped, so all coefficients stay rational.  For kinds 1 and 2
// the z-scale a must be even so that w-exponents are integral.
QSeries theta(int kind, int zscale, int tauscale, Rat qmax);

// i / theta_1(a z, tau) for a in {2,4}: den {a/2}, integer-coefficient body.
PoleSeries theta1_inv(int zscale, Rat qmax);

// Blow-up factor B_{r,k}(z,tau) (eta^{-r} included); z_refined=false sets w=1.
QSeries blowup_factor(int r, int k, bool z_refined, Rat qmax);

}  // namespace bps
