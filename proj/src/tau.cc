#include "drlab/tau.hpp"

#include <algorithm>
#include <sstream>

namespace drlab {

LocalFunctional TauStructure::functional(int alpha, int q) const {
    return integrate(density(alpha, q));
}

TauStructure tau_densities(const HierarchyTable& h) {
    TauStructure t;
    t.hierarchy = h;
    t.q_max = h.p_max - 1;
    // precondition: d(Hbar_{b,q})/du^1 = Hbar_{b,q-1} as functionals
    for (int a = 1; a <= h.rank; ++a)
        for (int p = 0; p <= h.p_max; ++p) {
            LocalFunctional lhs = integrate(dpartial(h.density(a, p), {1, 0}));
            LocalFunctional rhs = h.functional(a, p - 1);
            if (!functional_equal(lhs, rhs))
                throw not_tau_compatible_error(
                    "functional string equation fails at (alpha=" + std::to_string(a) +
                        ", p=" + std::to_string(p) + ")",
                    to_text((lhs.density - rhs.density)));
        }
    for (int a = 1; a <= h.rank; ++a)
        for (int q = -1; q < h.p_max; ++q)
            t.densities[{a, q}] = var_deriv(h.density(a, q + 1), 1);
    return t;
}

namespace {

DiffPoly tau_bracket_density(const TauStructure& t, const DiffPoly& density,
                             const LocalFunctional& F) {
    if (t.hierarchy.mode == RecursionMode::quantum)
        return qcommutator_scaled(density, F, t.hierarchy.eta);
    HamiltonianOperator K = HamiltonianOperator::eta_dx(t.hierarchy.eta, t.hierarchy.policy);
    return hamiltonian_flow(density, F, K);
}

}  // namespace

TauReport tau_symmetry_check(const TauStructure& t, int p_max) {
    TauReport rep;
    int cap = std::min(p_max, t.q_max);  // needs H_{*, p-1} and Hbar_{*, q}
    for (int a = 1; a <= t.hierarchy.rank; ++a)
        for (int b = a; b <= t.hierarchy.rank; ++b)
            for (int p = 0; p <= cap; ++p)
                for (int q = (a == b ? p : 0); q <= cap; ++q) {
                    DiffPoly lhs =
                        tau_bracket_density(t, t.density(a, p - 1), t.functional(b, q));
                    DiffPoly rhs =
                        tau_bracket_density(t, t.density(b, q - 1), t.functional(a, p));
                    std::ostringstream name;
                    name << "tau-symmetry(" << a << "," << p << ";" << b << "," << q << ")";
                    if (lhs == rhs) rep.checks.push_back({name.str(), true, ""});
                    else rep.checks.push_back({name.str(), false, to_text(lhs - rhs)});
                }
    return rep;
}

TwoPoint two_point(const TauStructure& t, int alpha, int p, int beta, int q) {
    // the Hamiltonian side comes from the hierarchy table, which reaches one
    // index further than the tau densities
    DiffPoly b = tau_bracket_density(t, t.density(alpha, p - 1),
                                     t.hierarchy.functional(beta, q));
    TwoPoint out{alpha, p, beta, q, dp_zero(t.hierarchy.rank, t.hierarchy.policy)};
    try {
        out.omega = antiderivative(b);
    } catch (const exactness_error& e) {
        throw not_tau_compatible_error("two-point bracket is not exact", e.witness);
    }
    return out;
}

// ---------------------------------------------------------------------------
// classical correlators via the string solution
// ---------------------------------------------------------------------------

namespace {

// variable ids for the evaluation ring: times and the loop variable x
constexpr VarId kXVar = 0x80000000u;
inline VarId time_id(int alpha, int d) {
    return 0x40000000u | (static_cast<VarId>(alpha) << 16) | static_cast<VarId>(d);
}
inline bool is_time(VarId v) { return (v & 0x40000000u) != 0; }
inline std::pair<int, int> time_of(VarId v) {
    return {static_cast<int>((v >> 16) & 0x3fff), static_cast<int>(v & 0xffff)};
}

// formal d/dx on the evaluation ring
Poly ddx(const Poly& p) {
    Poly out;
    for (auto& [m, c] : p.terms()) {
        uint32_t e = m.exponent(kXVar);
        if (e == 0) continue;
        out.add_term(m.with_var(kXVar, -1), c * GQ(static_cast<long>(e)));
    }
    return out;
}

Poly at_x_zero(const Poly& p) {
    Poly out;
    for (auto& [m, c] : p.terms())
        if (m.exponent(kXVar) == 0) out.add_term(m, c);
    return out;
}

uint32_t t_degree(const Monomial& m) {
    uint32_t d = 0;
    for (auto& [v, e] : m.vars)
        if (is_time(v)) d += e;
    return d;
}

Poly t_degree_part(const Poly& p, uint32_t deg) {
    Poly out;
    for (auto& [m, c] : p.terms())
        if (t_degree(m) == deg) out.add_term(m, c);
    return out;
}

// substitute jets by evaluation-ring values; eps carried through, genus-capped;
// jets[alpha-1][k] = k-th x-derivative of the solution component, extended on
// demand
Poly eval_diffpoly(const DiffPoly& f, std::vector<std::vector<Poly>>& jets, int genus_cap,
                   uint32_t t_cap) {
    TruncationPolicy pol{genus_cap, std::nullopt};
    Poly out;
    for (auto& [m, c] : f.p.terms()) {
        Monomial scalar;
        scalar.eps = m.eps;
        scalar.hbar = m.hbar;
        Poly term = Poly::term(scalar, c);
        for (auto& [v, e] : m.vars) {
            JetVariable j = jet_of(v);
            auto& comp = jets[j.alpha - 1];
            while (static_cast<int>(comp.size()) <= j.order) comp.push_back(ddx(comp.back()));
            const Poly& val = comp[j.order];
            for (uint32_t i = 0; i < e && !term.is_zero(); ++i) {
                term = term * val;
                // cap both gradings to keep the product small
                Poly kept;
                for (auto& [mm, cc] : term.terms())
                    if (pol.keeps(mm) && t_degree(mm) <= t_cap) kept.add_term(mm, cc);
                term = std::move(kept);
            }
        }
        out += term;
    }
    return out;
}

}  // namespace

std::string CorrelatorTable::to_json() const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (auto& [key, val] : entries) {
        if (!first) os << ",";
        first = false;
        os << "{\"g\":" << key.g << ",\"legs\":[";
        for (size_t i = 0; i < key.legs.size(); ++i) {
            if (i) os << ",";
            os << "[" << key.legs[i].second << "," << key.legs[i].first << "]";
        }
        os << "],\"value\":\"" << rat_str(val) << "\"}";
    }
    os << "]";
    return os.str();
}

CorrelatorTable dr_correlators(const HierarchyTable& h, int n_max, int d_max) {
    if (h.mode != RecursionMode::classical)
        throw incompatibility_error("dr_correlators needs a classical hierarchy");
    if (h.p_max < d_max + 1)
        throw cap_exceeded_error("hierarchy depth " + std::to_string(h.p_max) +
                                 " insufficient for descendants up to " + std::to_string(d_max));
    const int N = h.rank;
    const int gcap = h.policy.genus_cap;
    const uint32_t t_cap = n_max >= 2 ? static_cast<uint32_t>(n_max - 2) : 0u;

    TauStructure tau = tau_densities(h);

    // flow right-hand sides P^gamma_{beta,q} = eta^{gamma mu} dx (delta gbar_{beta,q} / delta u^mu)
    std::map<std::pair<int, int>, std::vector<DiffPoly>> flows;
    for (int b = 1; b <= N; ++b)
        for (int q = 0; q <= d_max; ++q) {
            std::vector<DiffPoly> vel;
            std::vector<DiffPoly> vd;
            for (int mu = 1; mu <= N; ++mu) vd.push_back(var_deriv(h.density(b, q), mu));
            for (int gma = 1; gma <= N; ++gma) {
                DiffPoly acc = dp_zero(N, h.policy);
                for (int mu = 1; mu <= N; ++mu)
                    if (h.eta.upper(gma, mu) != 0) acc += GQ(h.eta.upper(gma, mu)) * dx(vd[mu - 1]);
                vel.push_back(acc);
            }
            flows[{b, q}] = std::move(vel);
        }

    // string solution degree by degree: U[alpha-1] over the evaluation ring
    std::vector<Poly> U(N);
    U[0] = Poly::var(kXVar);  // u^1|_{t=0} = x, other components 0
    auto jets_of = [&](const std::vector<Poly>& comps) {
        std::vector<std::vector<Poly>> jets(N);
        for (int a = 0; a < N; ++a) jets[a].push_back(comps[a]);
        return jets;
    };

    for (uint32_t D = 0; D < t_cap; ++D) {
        auto jets = jets_of(U);
        std::vector<Poly> delta(N);
        std::map<std::pair<int, int>, std::vector<Poly>> rhs_deg;
        for (auto& [key, vel] : flows) {
            std::vector<Poly> r;
            for (int a = 0; a < N; ++a)
                r.push_back(t_degree_part(eval_diffpoly(vel[a], jets, gcap, t_cap), D));
            rhs_deg[key] = std::move(r);
        }
        // each degree-(D+1) coefficient is fixed by any flow present in its index;
        // build from the canonical (largest) one and assert agreement for the rest
        std::map<std::pair<int, Monomial>, GQ> assigned;
        for (auto& [key, r] : rhs_deg) {
            VarId tv = time_id(key.first, key.second);
            for (int a = 0; a < N; ++a)
                for (auto& [m, c] : r[a].terms()) {
                    Monomial target = m.with_var(tv, +1);
                    GQ val = c / GQ(static_cast<long>(target.exponent(tv)));
                    auto it = assigned.find({a, target});
                    if (it == assigned.end()) assigned[{a, target}] = val;
                    else if (!(it->second == val))
                        throw cap_exceeded_error(
                            "string solution coefficients disagree between flows");
                }
        }
        for (auto& [key, val] : assigned) delta[key.first].add_term(key.second, val);
        for (int a = 0; a < N; ++a) U[a] += delta[a];
    }

    auto jets = jets_of(U);

    CorrelatorTable table;
    table.g_max = gcap;
    table.t_degree_max = n_max;
    table.d_max = d_max;

    // two-point functions evaluated on the string solution at x = 0
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, Poly> omega_eval;
    auto omega_on_string = [&](int a, int p, int b, int q) -> const Poly& {
        auto key = std::make_pair(std::make_pair(a, p), std::make_pair(b, q));
        auto it = omega_eval.find(key);
        if (it != omega_eval.end()) return it->second;
        TwoPoint tp = two_point(tau, a, p, b, q);
        Poly ev = at_x_zero(eval_diffpoly(tp.omega, jets, gcap, t_cap));
        return omega_eval.emplace(key, std::move(ev)).first->second;
    };

    // enumerate leg multisets: n legs, each (d, alpha), d <= d_max
    std::vector<std::pair<int, int>> alphabet;
    for (int d = 0; d <= d_max; ++d)
        for (int a = 1; a <= N; ++a) alphabet.push_back({d, a});

    std::vector<std::vector<std::pair<int, int>>> multisets;
    std::vector<std::pair<int, int>> cur;
    std::function<void(size_t, int)> gen = [&](size_t start, int slots) {
        if (!cur.empty()) multisets.push_back(cur);
        if (slots == 0) return;
        for (size_t i = start; i < alphabet.size(); ++i) {
            cur.push_back(alphabet[i]);
            gen(i, slots - 1);
            cur.pop_back();
        }
    };
    gen(0, n_max);

    for (auto& legs : multisets) {
        const int n = static_cast<int>(legs.size());
        for (int g = 0; g <= gcap; ++g) {
            if (2 * g - 2 + n <= 0) continue;
            CorrelatorKey key{g, legs};
            Rat value(0);
            if (n == 1) {
                // string equation: <tau_d(e_a)>_g = <tau_0(e_1) tau_{d+1}(e_a)>_g
                auto [d, a] = legs[0];
                if (d + 1 > h.p_max) throw cap_exceeded_error("descendant cap");
                const Poly& om = omega_on_string(1, 0, a, d + 1);
                Monomial want;
                want.eps = 2 * static_cast<uint32_t>(g);
                GQ c = om.coeff(want);
                if (c.im != 0) throw arithmetic_error("classical correlator not real");
                value = c.re;
            } else {
                auto [d1, a1] = legs[0];
                auto [d2, a2] = legs[1];
                const Poly& om = omega_on_string(a1, d1, a2, d2);
                Monomial want;
                want.eps = 2 * static_cast<uint32_t>(g);
                Rat mult(1);
                std::map<std::pair<int, int>, int> rest;
                for (int i = 2; i < n; ++i) rest[legs[i]]++;
                for (auto& [leg, m] : rest) {
                    want = want.with_var(time_id(leg.second, leg.first), m);
                    for (int t = 2; t <= m; ++t) mult *= t;
                }
                GQ c = om.coeff(want);
                if (c.im != 0) throw arithmetic_error("classical correlator not real");
                value = c.re * mult;
            }
            table.entries[key] = value;
        }
    }
    return table;
}

std::vector<CheckResult> correlator_string_check(const CorrelatorTable& table,
                                                 const Metric& eta) {
    std::vector<CheckResult> out;
    for (auto& [key, val] : table.entries) {
        // look for a (d=0, alpha=1) leg
        auto it = std::find(key.legs.begin(), key.legs.end(), std::make_pair(0, 1));
        if (it == key.legs.end()) continue;
        std::vector<std::pair<int, int>> rest = key.legs;
        rest.erase(rest.begin() + (it - key.legs.begin()));
        Rat expect(0);
        for (size_t j = 0; j < rest.size(); ++j) {
            if (rest[j].first == 0) continue;
            std::vector<std::pair<int, int>> lowered = rest;
            lowered[j].first -= 1;
            std::sort(lowered.begin(), lowered.end());
            expect += table.value({key.g, lowered});
        }
        if (key.g == 0 && rest.size() == 2 && rest[0].first == 0 && rest[1].first == 0)
            expect += eta.lower(rest[0].second, rest[1].second);
        std::ostringstream name;
        name << "string(g=" << key.g << ",n=" << key.legs.size() << ")";
        if (val == expect) out.push_back({name.str(), true, ""});
        else
            out.push_back({name.str(), false,
                           "got " + rat_str(val) + " expected " + rat_str(expect)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// quantum multi-time Taylor data
// ---------------------------------------------------------------------------

QuantumTaylorReport quantum_taylor(const TauStructure& t, int idx_max, int t_deg_max) {
    QuantumTaylorReport rep;
    const int N = t.hierarchy.rank;
    const int qmax = std::min(idx_max, t.q_max);
    auto push = [&](std::string name, bool pass, std::string witness = "") {
        rep.checks.push_back({std::move(name), pass, std::move(witness)});
    };

    // degree 0: omega itself, symmetric
    std::map<std::tuple<int, int, int, int>, DiffPoly> omega;
    for (int a = 1; a <= N; ++a)
        for (int p = 0; p <= qmax; ++p)
            for (int b = 1; b <= N; ++b)
                for (int q = 0; q <= qmax; ++q)
                    omega[{a, p, b, q}] = two_point(t, a, p, b, q).omega;
    {
        bool ok = true;
        std::string wit;
        for (auto& [k, om] : omega) {
            auto [a, p, b, q] = k;
            const DiffPoly& sym = omega.at({b, q, a, p});
            if (!(om == sym)) {
                ok = false;
                wit = "omega(" + std::to_string(a) + "," + std::to_string(p) + ";" +
                      std::to_string(b) + "," + std::to_string(q) + ") asymmetric";
                break;
            }
        }
        push("two-point-symmetry", ok, wit);
    }
    // degree 0 cross-derivative: dx omega = bracket (holds by construction; assert anyway)
    {
        bool ok = true;
        std::string wit;
        for (auto& [k, om] : omega) {
            auto [a, p, b, q] = k;
            DiffPoly lhs = dx(om);
            DiffPoly rhs = tau_bracket_density(t, t.density(a, p - 1), t.functional(b, q));
            if (!(lhs == rhs)) {
                ok = false;
                wit = "(a,p;b,q)=(" + std::to_string(a) + "," + std::to_string(p) + ";" +
                      std::to_string(b) + "," + std::to_string(q) + ")";
                break;
            }
        }
        push("two-point-defining-relation", ok, wit);
    }

    if (t_deg_max >= 1) {
        bool sym_ok = true, cross_ok = true;
        std::string sym_wit, cross_wit;
        for (int a = 1; a <= N; ++a)
            for (int p = 0; p <= qmax; ++p)
                for (int b = 1; b <= N; ++b)
                    for (int q = 0; q <= qmax; ++q)
                        for (int c = 1; c <= N; ++c)
                            for (int r = 0; r <= qmax; ++r) {
                                DiffPoly d1 = tau_bracket_density(t, omega.at({a, p, b, q}),
                                                                  t.functional(c, r));
                                rep.first_order[{a, p, b, q, c, r}] = d1;
                                // total symmetry under pair permutations
                                DiffPoly d2 = tau_bracket_density(t, omega.at({a, p, c, r}),
                                                                  t.functional(b, q));
                                DiffPoly d3 = tau_bracket_density(t, omega.at({b, q, c, r}),
                                                                  t.functional(a, p));
                                if (!(d1 == d2) || !(d1 == d3)) {
                                    sym_ok = false;
                                    sym_wit = "triple (" + std::to_string(a) + "," +
                                              std::to_string(p) + ")(" + std::to_string(b) + "," +
                                              std::to_string(q) + ")(" + std::to_string(c) + "," +
                                              std::to_string(r) + ")";
                                }
                                // cross-derivative in dx-form at degree 1
                                DiffPoly lhs = tau_bracket_density(
                                    t,
                                    tau_bracket_density(t, t.density(a, p - 1),
                                                        t.functional(c, r)),
                                    t.functional(b, q));
                                if (!(lhs == dx(d1))) {
                                    cross_ok = false;
                                    cross_wit = "pair ((" + std::to_string(a) + "," +
                                                std::to_string(p) + ");(" + std::to_string(b) +
                                                "," + std::to_string(q) + ")) at t(" +
                                                std::to_string(c) + "," + std::to_string(r) + ")";
                                }
                            }
        push("three-point-total-symmetry", sym_ok, sym_wit);
        push("cross-derivative-degree-1", cross_ok, cross_wit);
    }
    return rep;
}

}  // namespace drlab
