#ifndef DRLAB_POLY_HPP
#define DRLAB_POLY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "drlab/rational.hpp"

namespace drlab {

// Sparse exact polynomial in an open-ended set of commuting variables plus the
// two distinguished formal parameters eps and hbar.  Variables are identified
// by opaque 32-bit ids; what an id means is up to the layer above (jet
// variables, time variables, ...).

using VarId = uint32_t;

struct Monomial {
    // sorted by var id, exponents > 0
    std::vector<std::pair<VarId, uint32_t>> vars;
    uint32_t eps = 0;
    uint32_t hbar = 0;

    bool is_constant() const { return vars.empty(); }

    uint32_t exponent(VarId v) const {
        for (auto& [id, e] : vars)
            if (id == v) return e;
        return 0;
    }

    uint32_t total_var_degree() const {
        uint32_t d = 0;
        for (auto& [id, e] : vars) d += e;
        return d;
    }

    // grading used by truncation: eps and hbar both count genus
    uint32_t genus_weight() const { return eps + 2 * hbar; }

    Monomial with_var(VarId v, int delta) const;  // adjust exponent by delta (>= -current)

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.eps == b.eps && a.hbar == b.hbar && a.vars == b.vars;
    }
    friend bool operator<(const Monomial& a, const Monomial& b) {
        if (a.eps != b.eps) return a.eps < b.eps;
        if (a.hbar != b.hbar) return a.hbar < b.hbar;
        return a.vars < b.vars;
    }
};

struct TruncationPolicy {
    int genus_cap = 1;                 // retain eps + 2*hbar <= 2*genus_cap
    std::optional<int> u_degree_cap;   // optional cap on the number of variable factors

    bool keeps(const Monomial& m) const {
        if (m.genus_weight() > 2u * static_cast<unsigned>(genus_cap)) return false;
        if (u_degree_cap && m.total_var_degree() > static_cast<unsigned>(*u_degree_cap)) return false;
        return true;
    }
    friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

class Poly {
  public:
    using Terms = std::map<Monomial, GQ>;

    Poly() = default;
    explicit Poly(GQ c) {
        if (!c.is_zero()) terms_[Monomial{}] = std::move(c);
    }
    static Poly var(VarId v, uint32_t exp = 1) {
        Poly p;
        Monomial m;
        if (exp) m.vars.push_back({v, exp});
        p.terms_[m] = GQ(1);
        return p;
    }
    static Poly eps(uint32_t exp = 1) {
        Poly p;
        Monomial m;
        m.eps = exp;
        p.terms_[m] = GQ(1);
        return p;
    }
    static Poly hbar(uint32_t exp = 1) {
        Poly p;
        Monomial m;
        m.hbar = exp;
        p.terms_[m] = GQ(1);
        return p;
    }
    static Poly term(Monomial m, GQ c) {
        Poly p;
        if (!c.is_zero()) p.terms_[std::move(m)] = std::move(c);
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    GQ coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? GQ() : it->second;
    }

    void add_term(const Monomial& m, const GQ& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(const Poly& a) {
        Poly r;
        for (auto& [m, c] : a.terms_) r.terms_[m] = -c;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const GQ& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    friend Poly operator*(Poly a, const GQ& c) { return a *= c; }
    friend Poly operator*(const GQ& c, Poly a) { return a *= c; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    Poly truncated(const TruncationPolicy& pol) const {
        Poly r;
        for (auto& [m, c] : terms_)
            if (pol.keeps(m)) r.terms_[m] = c;
        return r;
    }

    void truncate(const TruncationPolicy& pol) {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = pol.keeps(it->first) ? std::next(it) : terms_.erase(it);
    }

    // part with no variable factors (still a polynomial in eps, hbar)
    Poly constant_part() const {
        Poly r;
        for (auto& [m, c] : terms_)
            if (m.is_constant()) r.terms_[m] = c;
        return r;
    }

    // substitute hbar -> 0
    Poly at_hbar_zero() const {
        Poly r;
        for (auto& [m, c] : terms_)
            if (m.hbar == 0) r.terms_[m] = c;
        return r;
    }

    // multiply by hbar^k or eps^k
    Poly times_hbar(uint32_t k) const {
        Poly r;
        for (auto& [m, c] : terms_) {
            Monomial mm = m;
            mm.hbar += k;
            r.terms_[std::move(mm)] = c;
        }
        return r;
    }

    // exact division by hbar; throws if some term lacks it
    Poly div_hbar() const {
        Poly r;
        for (auto& [m, c] : terms_) {
            if (m.hbar == 0) throw arithmetic_error("polynomial not divisible by hbar");
            Monomial mm = m;
            mm.hbar -= 1;
            r.terms_[std::move(mm)] = c;
        }
        return r;
    }

  private:
    Terms terms_;
};

}  // namespace drlab

#endif
