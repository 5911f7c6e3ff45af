#ifndef DRLAB_QUANTUM_HPP
#define DRLAB_QUANTUM_HPP

#include <map>
#include <vector>

#include "drlab/operators.hpp"

namespace drlab {

// Coefficients of  prod_i Li_{-d_i}(z) = sum_j C~_j Li_{-j}(z),
// 1 <= j <= k - 1 + sum d_i.
struct PolylogDecomposition {
    std::vector<int> inputs;      // d_1..d_k, each >= 1
    std::map<int, Rat> coeffs;    // j -> C~_j (zeros omitted)
};

PolylogDecomposition polylog_decompose(std::vector<int> d);

// C_j with the parity/sign rule on top of the decomposition.
struct CCoefficients {
    std::vector<int> inputs;
    std::map<int, GQ> coeffs;  // j -> C_j (zeros omitted)
};

// memoized on the sorted input multiset
const CCoefficients& c_coeffs(std::vector<int> a);

// (1/hbar)[f, G-bar]: the hbar-normalized quantum commutator of a density
// against a local functional, exact under f's truncation policy.  This is the
// primitive; the raw commutator is hbar times it.
DiffPoly qcommutator_scaled(const DiffPoly& f, const LocalFunctional& G, const Metric& eta);

// [f, G-bar] itself (divisible by hbar)
DiffPoly qcommutator_density(const DiffPoly& f, const LocalFunctional& G, const Metric& eta);

// [F-bar, G-bar] as a local functional
LocalFunctional qcommutator(const LocalFunctional& F, const LocalFunctional& G,
                            const Metric& eta);

}  // namespace drlab

#endif
