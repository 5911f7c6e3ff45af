#ifndef DRLAB_OPERATORS_HPP
#define DRLAB_OPERATORS_HPP

#include <map>
#include <string>
#include <vector>

#include "drlab/diffpoly.hpp"

namespace drlab {

// Symmetric invertible rational matrix with its exact inverse.
struct Metric {
    int rank = 1;
    std::vector<Rat> mat;      // row-major, rank x rank
    std::vector<Rat> inv_mat;  // exact inverse

    Metric() = default;
    Metric(int N, std::vector<Rat> entries);

    const Rat& lower(int a, int b) const { return mat[(a - 1) * rank + (b - 1)]; }
    const Rat& upper(int a, int b) const { return inv_mat[(a - 1) * rank + (b - 1)]; }

    static Metric identity(int N);
    static Metric antidiagonal(int N);  // eta_{ab} = delta_{a+b, N+1}
};

// Matrix of finite-order differential operators sum_j coef_j dx^j with
// differential-polynomial coefficients.  Normal form: coefficients on the
// left, dx powers on the right.
struct HamiltonianOperator {
    int rank = 1;
    TruncationPolicy policy{};
    // entries[a-1][b-1]: map dx-power -> coefficient
    std::vector<std::vector<std::map<int, DiffPoly>>> entries;

    HamiltonianOperator() = default;
    HamiltonianOperator(int N, TruncationPolicy pol);

    static HamiltonianOperator eta_dx(const Metric& eta, TruncationPolicy pol);

    void add(int a, int b, int power, const DiffPoly& coef);

    // operator row applied to a column of variational derivatives:
    // (K w)^a = sum_b sum_j coef^{ab}_j dx^j (w_b)
    DiffPoly apply_row(int a, const std::vector<DiffPoly>& w) const;

    HamiltonianOperator adjoint() const;
    bool is_skew_adjoint() const;

    std::string to_json() const;
};

// {F, G}_K = int( dF/du^mu K^{mu nu} dG/du^nu )
LocalFunctional poisson_bracket(const LocalFunctional& F, const LocalFunctional& G,
                                const HamiltonianOperator& K);

// evolution of a density f along the flow of G:
// df/dtau = sum_{alpha,k} df/du^alpha_k dx^k ( K^{alpha mu} dG/du^mu )
DiffPoly hamiltonian_flow(const DiffPoly& f, const LocalFunctional& G,
                          const HamiltonianOperator& K);

// Change of field variables  u~^alpha = u^alpha + higher-weight terms.
struct MiuraTransform {
    int rank = 1;
    TruncationPolicy policy{};
    std::vector<DiffPoly> images;  // images[a-1] = u~^{a}(u; eps, hbar)

    MiuraTransform() = default;
    MiuraTransform(int N, TruncationPolicy pol, std::vector<DiffPoly> imgs);

    static MiuraTransform identity(int N, TruncationPolicy pol);

    // order-by-order inverse; exact under the policy
    MiuraTransform inverse() const;
};

struct invalid_transform_error : std::runtime_error {
    explicit invalid_transform_error(const std::string& w) : std::runtime_error(w) {}
};

enum class MiuraDirection { forward, inverse };

// forward: substitute the images for the fields; inverse: substitute the
// inverse images
DiffPoly miura_apply(const DiffPoly& f, const MiuraTransform& M, MiuraDirection dir);

// K'^{ab} = sum_{p,q} (d u~^a / du^mu_p) dx^p o K^{mu nu} o (-dx)^q o (d u~^b / du^nu_q)
HamiltonianOperator miura_transform_operator(const HamiltonianOperator& K,
                                             const MiuraTransform& M);

}  // namespace drlab

#endif
