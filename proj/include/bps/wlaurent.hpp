#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <map>
#include <utility>
#include <vector>

#include "bps/errors.hpp"

namespace bps {

using Int = boost::multiprecision::mpz_int;
using Coef = boost::multiprecision::mpq_rational;

// Sparse Laurent polynomial in w over exact rationals.  Zero coefficients are
// never stored.  Coefficients are rational because lattice sums weight
// wall-sitting terms by sgn(0)-halves; honest invariants come out integral
// and are checked for integrality on extraction.
class WLaurent {
  public:
    WLaurent() = default;

    static WLaurent monomial(long long k, Coef c) {
        WLaurent p;
        if (c != 0) p.c_[k] = std::move(c);
        return p;
    }
    static WLaurent one() { return monomial(0, 1); }
    // w^m - w^{-m}
    static WLaurent bracket(long long m) {
        WLaurent p;
        p.c_[m] = 1;
        p.c_[-m] = -1;
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    long long min_exp() const { return c_.begin()->first; }
    long long max_exp() const { return c_.rbegin()->first; }
    std::size_t term_count() const { return c_.size(); }
    const std::map<long long, Coef>& terms() const { return c_; }

    Coef coeff(long long k) const {
        auto it = c_.find(k);
        return it == c_.end() ? Coef(0) : it->second;
    }

    void add_term(long long k, const Coef& c) {
        if (c == 0) return;
        auto [it, fresh] = c_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) c_.erase(it);
        }
    }

    WLaurent& operator+=(const WLaurent& o) {
        for (const auto& [k, c] : o.c_) add_term(k, c);
        return *this;
    }
    friend WLaurent operator+(WLaurent a, const WLaurent& b) { return a += b; }
    friend WLaurent operator-(const WLaurent& a, const WLaurent& b) { return a + b.neg(); }

    WLaurent neg() const {
        WLaurent p;
        for (const auto& [k, c] : c_) p.c_[k] = -c;
        return p;
    }

    WLaurent scaled(const Coef& s) const {
        WLaurent p;
        if (s == 0) return p;
        for (const auto& [k, c] : c_) p.c_[k] = c * s;
        return p;
    }

    friend WLaurent operator*(const WLaurent& a, const WLaurent& b) {
        WLaurent p;
        for (const auto& [ka, ca] : a.c_)
            for (const auto& [kb, cb] : b.c_) p.add_term(ka + kb, ca * cb);
        return p;
    }

    // w -> w^{-1}
    WLaurent w_inverted() const {
        WLaurent p;
        for (const auto& [k, c] : c_) p.c_[-k] = c;
        return p;
    }

    // w d/dw
    WLaurent w_log_deriv() const {
        WLaurent p;
        for (const auto& [k, c] : c_)
            if (k != 0) p.c_[k] = Coef(k) * c;
        return p;
    }

    // exact value at w = +1 / w = -1
    Coef eval_one() const {
        Coef v = 0;
        for (const auto& [k, c] : c_) v += c;
        return v;
    }
    Coef eval_minus_one() const {
        Coef v = 0;
        for (const auto& [k, c] : c_) v += (k % 2 == 0 ? c : -c);
        return v;
    }
    // exact value at w = i as (re, im)
    std::pair<Coef, Coef> eval_i() const {
        Coef re = 0, im = 0;
        for (const auto& [k, c] : c_) {
            switch (((k % 4) + 4) % 4) {
                case 0: re += c; break;
                case 1: im += c; break;
                case 2: re -= c; break;
                case 3: im -= c; break;
            }
        }
        return {re, im};
    }

    // Taylor coefficients b_0..b_N of p(-e^s) around s = 0:
    // b_j = sum_k a_k (-1)^k k^j / j!
    std::vector<Coef> taylor_at_minus_exp(int order) const {
        std::vector<Coef> out(order + 1, Coef(0));
        for (const auto& [k, c] : c_) {
            Coef signc = (k % 2 == 0) ? c : -c;
            Coef pw = 1, fact = 1;
            for (int j = 0; j <= order; ++j) {
                if (j > 0) {
                    pw *= k;
                    fact *= j;
                }
                out[j] += signc * pw / fact;
            }
        }
        return out;
    }

    // Exact division by (w^m - w^{-m}); throws NotDivisible.
    // Writes this = w^{L} P(w) and divides the polynomial P by w^{2m} - 1.
    WLaurent div_bracket(long long m) const {
        if (is_zero()) return {};
        long long L = min_exp();
        WLaurent rem;
        for (const auto& [k, c] : c_) rem.c_[k - L] = c;
        WLaurent q;
        while (!rem.is_zero() && rem.max_exp() >= 2 * m) {
            long long d = rem.max_exp();
            Coef c = rem.c_.rbegin()->second;
            q.add_term(d - 2 * m, c);
            rem.add_term(d, -c);
            rem.add_term(d - 2 * m, c);
        }
        if (!rem.is_zero()) throw NotDivisible("div_bracket: remainder is nonzero");
        WLaurent out;
        for (const auto& [k, c] : q.c_) out.c_[k + L + m] = c;
        return out;
    }

    bool divisible_by_bracket(long long m) const {
        try {
            (void)div_bracket(m);
            return true;
        } catch (const NotDivisible&) {
            return false;
        }
    }

    friend bool operator==(const WLaurent& a, const WLaurent& b) { return a.c_ == b.c_; }

  private:
    std::map<long long, Coef> c_;
};

}  // namespace bps
