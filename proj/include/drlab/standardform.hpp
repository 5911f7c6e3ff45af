#ifndef DRLAB_STANDARDFORM_HPP
#define DRLAB_STANDARDFORM_HPP

#include <array>
#include <string>
#include <vector>

#include "drlab/models.hpp"

namespace drlab {

// weakly decreasing positive parts; records the jet orders of one monomial
struct Partition {
    std::vector<int> parts;

    int length() const { return static_cast<int>(parts.size()); }
    int total() const {
        int s = 0;
        for (int p : parts) s += p;
        return s;
    }
    // lambda_1 = lambda_2 and length >= 2
    bool in_ring_class() const {
        return parts.size() >= 2 && parts[0] == parts[1];
    }
    // ring class with every part >= 2
    bool in_strict_class() const {
        return in_ring_class() && parts.back() >= 2;
    }
    friend auto operator<=>(const Partition&, const Partition&) = default;
};

// the unique representative with every jet-order partition in the ring class
// (lambda_1 = lambda_2, length >= 2); rank 1, applied per (eps, hbar) block
DiffPoly canonical_density(const LocalFunctional& h);

struct StandardCheckResult {
    bool ok = true;
    std::string witness;
};

// both conditions:  d(hbar)/du = 0  and  d/du_x (delta h / delta u) = 0
StandardCheckResult standard_check(const LocalFunctional& h);

// closed-form deformation coefficient of u_{xx}^g at genus g = 2..5 in the
// parameters s1..s4, assembled from the Hodge integral constants
Rat alpha_dr(int g, const std::vector<Rat>& s);

// fixture: coefficients of the reduced density table through genus 5;
// keyed by (genus, partition); provenance notes where the data came from
struct ThetaTableEntry {
    int genus;
    Partition partition;
    // value as a polynomial in s1..s4: list of (coefficient, exponents e1..e4)
    std::vector<std::pair<Rat, std::array<int, 4>>> value;
    std::string provenance;
};
const std::vector<ThetaTableEntry>& theta_table();
Rat theta_coefficient(const ThetaTableEntry& e, const std::vector<Rat>& s);

struct CoefficientDiff {
    std::string monomial;
    std::string expected;
    std::string got;
    std::string source;
    bool match;
};

struct StandardCompareReport {
    std::vector<CoefficientDiff> diffs;
    bool all_match() const {
        for (auto& d : diffs)
            if (!d.match) return false;
        return true;
    }
    std::string to_json() const;
};

// (a) classical limit of the rank-1 seed, canonicalized, against the density
// table through eps^{2 min(gMax,3)};  (b) alpha_dr(g) against the table's
// u_{xx}^g coefficients for g <= min(gMax,5)
StandardCompareReport compare_dz_standard(const std::vector<Rat>& s, int g_max);

}  // namespace drlab

#endif
