#ifndef DRLAB_MODELS_HPP
#define DRLAB_MODELS_HPP

#include <map>
#include <string>
#include <vector>

#include "drlab/drtype.hpp"

namespace drlab {

struct ModelSpec {
    std::string name;
    int rank = 1;
    Metric eta;
    LocalFunctional seed;  // the generating Hamiltonian of the hierarchy
    std::map<std::string, Rat> params;
    std::map<std::string, std::string> provenance;  // constant -> data source note

    std::string to_json() const;
};

// Witten r-spin seeds, r = 3 or 4, all coefficients exact.
ModelSpec spin_model(int r, TruncationPolicy policy);

// Deformation parameters of the rank-1 family; gMax <= 3 is the supported
// expansion depth.  s may list up to four parameters s1..s4 (trailing zeros
// implied).  At s = 0 the seed is  int(u^3/6 - eps^2 u_x^2/24 - i hbar u/24).
ModelSpec rank1_seed(const std::vector<Rat>& s, int g_max, TruncationPolicy policy);

// the (a, b, c) data of the rank-1 classification, as polynomials in eps and
// hbar divided by the indicated power of (i hbar); exposed for the
// coefficient-relation regression  7a * coeff(u_3^2, (i hbar)^3) = 10 b^2 - c
struct Rank1Classification {
    DiffPoly A;  // (i hbar)   * a
    DiffPoly B;  // (i hbar)^2 * b
    DiffPoly C;  // (i hbar)^3 * c
    DiffPoly u3sq_coeff_times_ihbar3;  // (i hbar)^3 * coeff(u_3^2)
};
Rank1Classification rank1_classification(const std::vector<Rat>& s, TruncationPolicy policy);

// Genus-0 and genus-1 data of a rank-N field theory: the potential and the
// genus-1 function, both in the fields only.
struct FrobeniusData {
    int rank = 1;
    Metric eta;
    DiffPoly F;     // genus-0 potential, no jets/eps/hbar
    DiffPoly Gfun;  // genus-1 function, no jets/eps/hbar
};

struct Genus1Target {
    bool descendant = false;  // false: the (D-2)-normalized generating functional
    int alpha = 1;
    int d = 0;
};

// The order-(i hbar) correction functional:
//   int [ (1/48 c^mu_{ab mu} + 1/2 c^mu_{ab} dG/du^mu) u^a_x u^b_x - 1/24 c^mu_mu ] dx
// and its descendant analogue, which needs the dispersionless genus-0
// densities g0_d and g0_{d-1} (d = 0 takes the mixed term absent).
LocalFunctional genus1_correction(const FrobeniusData& fd, const Genus1Target& target,
                                  const std::vector<DiffPoly>& genus0_densities);

// dispersionless (eps = hbar = 0) genus-0 densities g^{[0]}_{alpha,d} in the
// fields only, from the classical recursion of the dispersionless seed
std::vector<DiffPoly> genus0_densities(const FrobeniusData& fd, int alpha, int d_max,
                                       TruncationPolicy policy);

// registry used by the command-line driver; includes the falsification
// fixtures ("3spin-perturbed", "non-wdvv")
std::vector<std::string> model_names();
ModelSpec get_model(const std::string& name, TruncationPolicy policy);

// rank-3 potential violating associativity, with its metric (fixture)
FrobeniusData non_wdvv_fixture(TruncationPolicy policy);

}  // namespace drlab

#endif
