#ifndef DRLAB_TAU_HPP
#define DRLAB_TAU_HPP

#include <tuple>

#include "drlab/drtype.hpp"

namespace drlab {

struct not_tau_compatible_error : std::runtime_error {
    not_tau_compatible_error(const std::string& w, std::string witness_text)
        : std::runtime_error(w), witness(std::move(witness_text)) {}
    std::string witness;
};

// Tau densities H_{beta,q} = delta(Hbar_{beta,q+1}) / delta u^1, q >= -1.
// Unlike the recursion densities these keep their canonical constant terms.
struct TauStructure {
    HierarchyTable hierarchy;
    int q_max = -1;  // densities stored for -1 <= q <= q_max (= hierarchy.p_max - 1)
    std::map<std::pair<int, int>, DiffPoly> densities;

    const DiffPoly& density(int alpha, int q) const { return densities.at({alpha, q}); }
    LocalFunctional functional(int alpha, int q) const;
};

TauStructure tau_densities(const HierarchyTable& h);

struct TauReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// verifies [H_{a,p-1}, Hbar_{b,q}] = [H_{b,q-1}, Hbar_{a,p}] for p,q <= p_max
TauReport tau_symmetry_check(const TauStructure& t, int p_max);

struct TwoPoint {
    int alpha, p, beta, q;
    DiffPoly omega;     // dx(omega) = bracket, omega|_{u=0} = 0
};

// mode-appropriate normalization: quantum uses (1/hbar)[.,.], classical {.,.}
TwoPoint two_point(const TauStructure& t, int alpha, int p, int beta, int q);

// ---- classical DR correlators through the string solution ----

struct CorrelatorKey {
    int g;                                   // genus
    std::vector<std::pair<int, int>> legs;   // sorted (d_i, alpha_i)
    friend bool operator<(const CorrelatorKey& a, const CorrelatorKey& b) {
        if (a.g != b.g) return a.g < b.g;
        return a.legs < b.legs;
    }
};

struct CorrelatorTable {
    int g_max = 0;
    int t_degree_max = 0;  // max number of insertions n
    int d_max = 0;         // max descendant index per insertion
    std::map<CorrelatorKey, Rat> entries;

    Rat value(const CorrelatorKey& k) const {
        auto it = entries.find(k);
        return it == entries.end() ? Rat(0) : it->second;
    }
    std::string to_json() const;
};

struct cap_exceeded_error : std::runtime_error {
    explicit cap_exceeded_error(const std::string& w) : std::runtime_error(w) {}
};

// classical-mode table built to p_max; n_max = max insertions, d_max = max
// descendant index, g capped by the table's policy
CorrelatorTable dr_correlators(const HierarchyTable& classical, int n_max, int d_max);

// verifies the descendant-lowering identity (and the genus-0 metric term) on
// every table entry containing a (d=0, alpha=1) leg
std::vector<CheckResult> correlator_string_check(const CorrelatorTable& table,
                                                 const Metric& eta);

// ---- quantum multi-time Taylor coefficients of the two-point functions ----

struct QuantumTaylorReport {
    // coefficient of t^{gamma}_{r} in Omega^{hbar,t}_{alpha,p;beta,q}
    std::map<std::tuple<int, int, int, int, int, int>, DiffPoly> first_order;
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// degree-0 and degree-1 Taylor data of the evolved two-point functions with
// the exactness/symmetry identities verified at each computed order
QuantumTaylorReport quantum_taylor(const TauStructure& t, int idx_max, int t_deg_max);

}  // namespace drlab

#endif
