#include "drlab/diffpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace drlab {

DiffPoly dp_zero(int rank, TruncationPolicy pol) { return DiffPoly(rank, pol); }

DiffPoly dp_const(int rank, TruncationPolicy pol, GQ c) {
    return DiffPoly(rank, pol, Poly(std::move(c)));
}

DiffPoly dp_jet(int rank, TruncationPolicy pol, int alpha, int order, uint32_t exp) {
    if (alpha < 1 || alpha > rank) throw incompatibility_error("jet component out of range");
    return DiffPoly(rank, pol, Poly::var(jet_id({alpha, order}), exp));
}

DiffPoly dp_eps(int rank, TruncationPolicy pol, uint32_t exp) {
    return DiffPoly(rank, pol, Poly::eps(exp));
}

DiffPoly dp_hbar(int rank, TruncationPolicy pol, uint32_t exp) {
    return DiffPoly(rank, pol, Poly::hbar(exp));
}

Monomial Monomial::with_var(VarId v, int delta) const {
    Monomial r = *this;
    for (auto it = r.vars.begin(); it != r.vars.end(); ++it) {
        if (it->first == v) {
            long e = static_cast<long>(it->second) + delta;
            if (e < 0) throw arithmetic_error("negative exponent");
            if (e == 0) r.vars.erase(it);
            else it->second = static_cast<uint32_t>(e);
            return r;
        }
        if (it->first > v) {
            if (delta < 0) throw arithmetic_error("negative exponent");
            if (delta > 0) r.vars.insert(it, {v, static_cast<uint32_t>(delta)});
            return r;
        }
    }
    if (delta < 0) throw arithmetic_error("negative exponent");
    if (delta > 0) r.vars.push_back({v, static_cast<uint32_t>(delta)});
    return r;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.eps = a.eps + b.eps;
    r.hbar = a.hbar + b.hbar;
    r.vars.reserve(a.vars.size() + b.vars.size());
    auto ia = a.vars.begin(), ib = b.vars.begin();
    while (ia != a.vars.end() && ib != b.vars.end()) {
        if (ia->first < ib->first) r.vars.push_back(*ia++);
        else if (ib->first < ia->first) r.vars.push_back(*ib++);
        else {
            r.vars.push_back({ia->first, ia->second + ib->second});
            ++ia;
            ++ib;
        }
    }
    r.vars.insert(r.vars.end(), ia, a.vars.end());
    r.vars.insert(r.vars.end(), ib, b.vars.end());
    return r;
}

DiffPoly dx(const DiffPoly& f) {
    Poly out;
    for (auto& [m, c] : f.p.terms()) {
        for (auto& [v, e] : m.vars) {
            // d/d u_k -> u_{k+1}, Leibniz over factors
            Monomial mm = m.with_var(v, -1).with_var(v + 1, +1);
            out.add_term(mm, c * GQ(static_cast<long>(e)));
        }
    }
    return f.with(std::move(out));
}

DiffPoly dx_pow(const DiffPoly& f, int n) {
    DiffPoly r = f;
    for (int i = 0; i < n; ++i) r = dx(r);
    return r;
}

DiffPoly dpartial(const DiffPoly& f, JetVariable v) {
    VarId id = jet_id(v);
    Poly out;
    for (auto& [m, c] : f.p.terms()) {
        uint32_t e = m.exponent(id);
        if (e == 0) continue;
        out.add_term(m.with_var(id, -1), c * GQ(static_cast<long>(e)));
    }
    return f.with(std::move(out));
}

DiffPoly var_deriv(const DiffPoly& f, int alpha) {
    // collect max order for this component
    int kmax = -1;
    for (auto& [m, c] : f.p.terms())
        for (auto& [v, e] : m.vars) {
            JetVariable j = jet_of(v);
            if (j.alpha == alpha) kmax = std::max(kmax, j.order);
        }
    DiffPoly acc = dp_zero(f.rank, f.policy);
    for (int k = 0; k <= kmax; ++k) {
        DiffPoly d = dpartial(f, {alpha, k});
        for (int i = 0; i < k; ++i) d = -dx(d);
        acc += d;
    }
    return acc;
}

uint32_t dweight(const Monomial& m) { return m.total_var_degree() + m.eps + 2 * m.hbar; }

DiffPoly euler_apply(const DiffPoly& f, int shift) {
    Poly out;
    for (auto& [m, c] : f.p.terms()) {
        long w = static_cast<long>(dweight(m)) - shift;
        if (w != 0) out.add_term(m, c * GQ(w));
    }
    return f.with(std::move(out));
}

EulerInverse euler_invert(const DiffPoly& f, int shift) {
    Poly main, obs;
    for (auto& [m, c] : f.p.terms()) {
        long w = static_cast<long>(dweight(m)) - shift;
        if (w == 0) obs.add_term(m, c);
        else main.add_term(m, c / GQ(w));
    }
    return {f.with(std::move(main)), f.with(std::move(obs))};
}

DiffPoly const_part(const DiffPoly& f) { return f.with(f.p.constant_part()); }

namespace {

// order used by the antiderivative peel: maximal jet of a monomial under
// (order, alpha), then the sorted jet multiset
struct TopJet {
    JetVariable jet{0, -1};
    bool found = false;
};

TopJet top_jet(const Monomial& m) {
    TopJet t;
    for (auto& [v, e] : m.vars) {
        JetVariable j = jet_of(v);
        if (!t.found || std::pair(j.order, j.alpha) > std::pair(t.jet.order, t.jet.alpha)) {
            t.jet = j;
            t.found = true;
        }
    }
    return t;
}

}  // namespace

DiffPoly antiderivative(const DiffPoly& f) {
    // precondition: dx-exact up to a constant
    for (int a = 1; a <= f.rank; ++a) {
        DiffPoly vd = var_deriv(f, a);
        if (!vd.is_zero())
            throw exactness_error("antiderivative: input is not a total x-derivative",
                                  to_text(vd));
    }
    DiffPoly work = f - const_part(f);
    DiffPoly result = dp_zero(f.rank, f.policy);
    size_t guard = 0;
    const size_t guard_max = 200000;
    while (!work.is_zero()) {
        if (++guard > guard_max)
            throw exactness_error("antiderivative: reduction did not terminate", to_text(work));
        // monomial whose maximal jet is largest; map order breaks ties
        const Monomial* best = nullptr;
        TopJet best_top;
        for (auto& [m, c] : work.p.terms()) {
            TopJet t = top_jet(m);
            if (!t.found)
                throw exactness_error("antiderivative: constant remainder", to_text(work));
            if (!best || std::pair(t.jet.order, t.jet.alpha) >
                             std::pair(best_top.jet.order, best_top.jet.alpha)) {
                best = &m;
                best_top = t;
            }
        }
        const Monomial mono = *best;
        GQ coef = work.p.coeff(mono);
        JetVariable tj = best_top.jet;
        if (tj.order == 0)
            throw exactness_error("antiderivative: zero-order remainder", to_text(work));
        VarId tid = jet_id(tj);
        if (mono.exponent(tid) != 1)
            throw exactness_error("antiderivative: top jet appears nonlinearly", to_text(work));
        // peel via one integration by parts:
        //   c * u_k * u_{k-1}^m * rest  <-  dx( c * u_{k-1}^{m+1}/(m+1) * rest )
        VarId low = jet_id({tj.alpha, tj.order - 1});
        uint32_t mult = mono.exponent(low);
        Monomial cand = mono.with_var(tid, -1).with_var(low, +1);
        DiffPoly piece =
            DiffPoly(f.rank, f.policy, Poly::term(cand, coef / GQ(static_cast<long>(mult) + 1)));
        result += piece;
        work -= dx(piece);
    }
    return result;
}

int diff_degree(const DiffPoly& f) {
    int d = -1;
    for (auto& [m, c] : f.p.terms()) {
        int deg = 0;
        for (auto& [v, e] : m.vars) deg += jet_of(v).order * static_cast<int>(e);
        d = std::max(d, deg);
    }
    return d;
}

bool is_hierarchy_admissible(const DiffPoly& f) {
    for (auto& [m, c] : f.p.terms()) {
        int deg = 0;
        for (auto& [v, e] : m.vars) deg += jet_of(v).order * static_cast<int>(e);
        if (deg > static_cast<int>(m.eps + 2 * m.hbar)) return false;
    }
    return true;
}

LocalFunctional integrate(const DiffPoly& f) {
    LocalFunctional lf;
    lf.constant = const_part(f);
    lf.density = f - lf.constant;
    return lf;
}

bool integrates_to_zero(const DiffPoly& f) {
    if (!const_part(f).is_zero()) return false;
    for (int a = 1; a <= f.rank; ++a)
        if (!var_deriv(f, a).is_zero()) return false;
    return true;
}

bool functional_equal(const LocalFunctional& a, const LocalFunctional& b) {
    a.density.check_compatible(b.density, "functional_equal");
    DiffPoly d = a.density - b.density;
    for (int al = 1; al <= d.rank; ++al)
        if (!var_deriv(d, al).is_zero()) return false;
    return true;
}

// ---- text form ----

namespace {

std::string coef_text(const GQ& c) {
    if (c.is_real() || c.re == 0) return c.str();
    return "(" + c.str() + ")";
}

}  // namespace

std::string to_text(const DiffPoly& f) {
    if (f.p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : f.p.terms()) {
        if (!first) os << " + ";
        first = false;
        os << coef_text(c);
        if (m.eps) os << "*eps^" << m.eps;
        if (m.hbar) os << "*hbar^" << m.hbar;
        for (auto& [v, e] : m.vars) {
            JetVariable j = jet_of(v);
            os << "*u[" << j.alpha << "," << j.order << "]";
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

namespace {

struct Cursor {
    const std::string& s;
    size_t k = 0;
    bool eof() const { return k >= s.size(); }
    char peek() const { return s[k]; }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    }
    bool accept(char c) {
        skip_ws();
        if (!eof() && s[k] == c) {
            ++k;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) throw incompatibility_error(std::string("parse error: expected ") + what);
    }
};

long parse_int(Cursor& cur) {
    cur.skip_ws();
    size_t start = cur.k;
    if (!cur.eof() && (cur.s[cur.k] == '-' || cur.s[cur.k] == '+')) ++cur.k;
    while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.s[cur.k]))) ++cur.k;
    if (cur.k == start) throw incompatibility_error("parse error: integer expected");
    return std::stol(cur.s.substr(start, cur.k - start));
}

// coefficient: either parenthesized Q(i) text, or a plain rational / I-part
GQ parse_coef(Cursor& cur) {
    cur.skip_ws();
    if (cur.accept('(')) {
        size_t start = cur.k;
        int depth = 1;
        while (!cur.eof() && depth) {
            if (cur.s[cur.k] == '(') ++depth;
            if (cur.s[cur.k] == ')') --depth;
            ++cur.k;
        }
        if (depth) throw incompatibility_error("parse error: unbalanced parenthesis");
        return parse_gq(cur.s.substr(start, cur.k - 1 - start));
    }
    size_t start = cur.k;
    while (!cur.eof()) {
        char c = cur.s[cur.k];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == 'I' ||
            ((c == '-' || c == '+') && cur.k == start))
            ++cur.k;
        else if (c == '*' && cur.k + 1 < cur.s.size() && cur.s[cur.k + 1] == 'I')
            ++cur.k;  // the '*' of "*I"
        else
            break;
    }
    if (cur.k == start) throw incompatibility_error("parse error: coefficient expected");
    return parse_gq(cur.s.substr(start, cur.k - start));
}

}  // namespace

DiffPoly parse_diffpoly(const std::string& text, int rank, TruncationPolicy pol) {
    DiffPoly out = dp_zero(rank, pol);
    Cursor cur{text};
    cur.skip_ws();
    if (cur.eof()) throw incompatibility_error("parse error: empty polynomial");
    bool negate = false;
    if (cur.accept('-')) negate = true;
    else cur.accept('+');
    while (true) {
        // one term: coef [* factor]*  |  factor [* factor]* (implied coef 1)
        GQ coef(1);
        Monomial mono;
        bool saw_factor = false;
        cur.skip_ws();
        char c0 = cur.eof() ? '\0' : cur.peek();
        if (std::isdigit(static_cast<unsigned char>(c0)) || c0 == '(' || c0 == 'I' || c0 == '-' ||
            c0 == '+') {
            coef = parse_coef(cur);
            saw_factor = true;
        }
        while (true) {
            cur.skip_ws();
            size_t save = cur.k;
            if (!cur.accept('*')) {
                if (saw_factor) break;
            }
            cur.skip_ws();
            if (cur.eof()) {
                cur.k = save;
                break;
            }
            char c = cur.peek();
            if (c == 'e' && cur.s.compare(cur.k, 3, "eps") == 0) {
                cur.k += 3;
                uint32_t e = 1;
                if (cur.accept('^')) e = static_cast<uint32_t>(parse_int(cur));
                mono.eps += e;
                saw_factor = true;
            } else if (c == 'h' && cur.s.compare(cur.k, 4, "hbar") == 0) {
                cur.k += 4;
                uint32_t e = 1;
                if (cur.accept('^')) e = static_cast<uint32_t>(parse_int(cur));
                mono.hbar += e;
                saw_factor = true;
            } else if (c == 'u') {
                cur.k += 1;
                cur.expect('[', "[");
                long alpha = parse_int(cur);
                cur.expect(',', ",");
                long order = parse_int(cur);
                cur.expect(']', "]");
                uint32_t e = 1;
                if (cur.accept('^')) e = static_cast<uint32_t>(parse_int(cur));
                if (alpha < 1 || alpha > rank)
                    throw incompatibility_error("parse error: component out of range");
                mono = mono.with_var(jet_id({static_cast<int>(alpha), static_cast<int>(order)}),
                                     static_cast<int>(e));
                saw_factor = true;
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == 'I') {
                coef *= parse_coef(cur);
                saw_factor = true;
            } else {
                cur.k = save;
                break;
            }
        }
        if (!saw_factor) throw incompatibility_error("parse error: term expected");
        out.p.add_term(mono, negate ? -coef : coef);
        cur.skip_ws();
        if (cur.accept('+')) negate = false;
        else if (cur.accept('-')) negate = true;
        else break;
    }
    cur.skip_ws();
    if (!cur.eof()) throw incompatibility_error("parse error: trailing input");
    out.p.truncate(pol);
    return out;
}

std::vector<JetVariable> jet_support(const DiffPoly& f) {
    std::vector<JetVariable> out;
    for (auto& [m, c] : f.p.terms())
        for (auto& [v, e] : m.vars) {
            JetVariable j = jet_of(v);
            if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
        }
    std::sort(out.begin(), out.end());
    return out;
}

DiffPoly substitute_fields(const DiffPoly& f, const std::vector<DiffPoly>& images) {
    if (static_cast<int>(images.size()) != f.rank)
        throw incompatibility_error("substitute_fields: one image per component required");
    // precompute dx powers of the images on demand
    std::vector<std::vector<DiffPoly>> jets(images.size());
    for (size_t a = 0; a < images.size(); ++a) jets[a].push_back(images[a]);
    auto jet_value = [&](int alpha, int order) -> const DiffPoly& {
        auto& v = jets[alpha - 1];
        while (static_cast<int>(v.size()) <= order) v.push_back(dx(v.back()));
        return v[order];
    };
    DiffPoly out = dp_zero(f.rank, f.policy);
    for (auto& [m, c] : f.p.terms()) {
        Monomial scalar;
        scalar.eps = m.eps;
        scalar.hbar = m.hbar;
        DiffPoly term(f.rank, f.policy, Poly::term(scalar, c));
        for (auto& [v, e] : m.vars) {
            JetVariable j = jet_of(v);
            const DiffPoly& val = jet_value(j.alpha, j.order);
            for (uint32_t i = 0; i < e; ++i) term = term * val;
        }
        out += term;
    }
    return out;
}

DiffPoly at_hbar_zero(const DiffPoly& f) { return f.with(f.p.at_hbar_zero()); }

}  // namespace drlab
