#ifndef DRLAB_DIFFPOLY_HPP
#define DRLAB_DIFFPOLY_HPP

#include <functional>
#include <string>
#include <vector>

#include "drlab/poly.hpp"

namespace drlab {

// Jet variable u^alpha_k: the k-th x-derivative of the field component alpha.
// alpha runs 1..N, k >= 0.
struct JetVariable {
    int alpha;
    int order;

    friend bool operator==(const JetVariable&, const JetVariable&) = default;
    friend auto operator<=>(const JetVariable&, const JetVariable&) = default;
};

// id layout: alpha in the high bits, order in the low byte-pair, so that ids
// sort jets of one component by order
inline VarId jet_id(const JetVariable& j) {
    return (static_cast<VarId>(j.alpha) << 16) | static_cast<VarId>(j.order);
}
inline JetVariable jet_of(VarId v) {
    return {static_cast<int>(v >> 16), static_cast<int>(v & 0xffff)};
}

struct incompatibility_error : std::runtime_error {
    explicit incompatibility_error(const std::string& w) : std::runtime_error(w) {}
};

struct exactness_error : std::runtime_error {
    exactness_error(const std::string& w, std::string witness_text)
        : std::runtime_error(w), witness(std::move(witness_text)) {}
    std::string witness;  // printed nonzero variational derivative
};

struct weight_resonance_error : std::runtime_error {
    weight_resonance_error(const std::string& w, std::string monomials_text)
        : std::runtime_error(w), monomials(std::move(monomials_text)) {}
    std::string monomials;
};

// Graded differential polynomial in jet variables, eps and hbar, kept exact
// modulo the ideal of monomials exceeding the truncation policy.
struct DiffPoly {
    int rank = 1;
    TruncationPolicy policy{};
    Poly p;

    DiffPoly() = default;
    DiffPoly(int N, TruncationPolicy pol) : rank(N), policy(pol) {}
    DiffPoly(int N, TruncationPolicy pol, Poly q) : rank(N), policy(pol), p(std::move(q)) {
        p.truncate(policy);
    }

    bool is_zero() const { return p.is_zero(); }

    void check_compatible(const DiffPoly& o, const char* where) const {
        if (rank != o.rank || !(policy == o.policy))
            throw incompatibility_error(std::string(where) + ": rank/policy mismatch");
    }

    DiffPoly with(Poly q) const { return DiffPoly(rank, policy, std::move(q)); }

    DiffPoly& operator+=(const DiffPoly& o) {
        check_compatible(o, "add");
        p += o.p;
        return *this;
    }
    DiffPoly& operator-=(const DiffPoly& o) {
        check_compatible(o, "sub");
        p -= o.p;
        return *this;
    }
    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator-(const DiffPoly& a) { return a.with(-a.p); }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
        a.check_compatible(b, "mul");
        return a.with(a.p * b.p);
    }
    friend DiffPoly operator*(DiffPoly a, const GQ& c) {
        a.p *= c;
        return a;
    }
    friend DiffPoly operator*(const GQ& c, DiffPoly a) {
        a.p *= c;
        return a;
    }
    friend bool operator==(const DiffPoly& a, const DiffPoly& b) {
        return a.rank == b.rank && a.policy == b.policy && a.p == b.p;
    }
};

// ---- building blocks ----

DiffPoly dp_zero(int rank, TruncationPolicy pol);
DiffPoly dp_const(int rank, TruncationPolicy pol, GQ c);
DiffPoly dp_jet(int rank, TruncationPolicy pol, int alpha, int order, uint32_t exp = 1);
DiffPoly dp_eps(int rank, TruncationPolicy pol, uint32_t exp);
DiffPoly dp_hbar(int rank, TruncationPolicy pol, uint32_t exp);

// ---- calculus ----

// total x-derivative
DiffPoly dx(const DiffPoly& f);
DiffPoly dx_pow(const DiffPoly& f, int n);

// formal partial derivative d/du^alpha_k
DiffPoly dpartial(const DiffPoly& f, JetVariable v);

// Euler-Lagrange operator sum (-dx)^k d/du^alpha_k
DiffPoly var_deriv(const DiffPoly& f, int alpha);

// D-weight of a monomial under D = eps d/deps + 2 hbar d/dhbar + sum u d/du
uint32_t dweight(const Monomial& m);

// (D - shift) applied monomial-wise
DiffPoly euler_apply(const DiffPoly& f, int shift);

// (D - shift)^{-1}; monomials with weight == shift are returned separately
struct EulerInverse {
    DiffPoly main;
    DiffPoly obstruction;
};
EulerInverse euler_invert(const DiffPoly& f, int shift);

// constant (jet-free) part, a polynomial in eps and hbar
DiffPoly const_part(const DiffPoly& f);

// g with dx(g) = f - const(f) and const(g) = 0; requires f exact
DiffPoly antiderivative(const DiffPoly& f);

// max differential degree (sum of jet orders) over monomials; -1 for zero
int diff_degree(const DiffPoly& f);

// every eps^k hbar^j part has differential degree <= k + 2j
bool is_hierarchy_admissible(const DiffPoly& f);

// ---- local functionals ----

// Equivalence class of a density modulo total x-derivatives and constants.
// The jet-free part of the density is stripped and kept on the side, so the
// stored density always has zero constant term.
struct LocalFunctional {
    DiffPoly density;   // constant-free representative
    DiffPoly constant;  // the stripped jet-free part (eps/hbar polynomial)

    int rank() const { return density.rank; }
    const TruncationPolicy& policy() const { return density.policy; }
};

LocalFunctional integrate(const DiffPoly& f);
bool functional_equal(const LocalFunctional& a, const LocalFunctional& b);
bool integrates_to_zero(const DiffPoly& f);

// ---- text form ----
// term grammar: coef * eps^a * hbar^b * u[alpha,k]^m * ...
std::string to_text(const DiffPoly& f);
DiffPoly parse_diffpoly(const std::string& text, int rank, TruncationPolicy pol);

// all jet variables appearing in f (with nonzero exponent somewhere)
std::vector<JetVariable> jet_support(const DiffPoly& f);

// substitute every jet u^alpha_k by dx^k(images[alpha-1]); used by Miura maps
DiffPoly substitute_fields(const DiffPoly& f, const std::vector<DiffPoly>& images);

// classical limit
DiffPoly at_hbar_zero(const DiffPoly& f);

}  // namespace drlab

#endif
