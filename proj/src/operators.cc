#include "drlab/operators.hpp"

#include <sstream>

namespace drlab {

namespace {

// exact inverse by Gauss-Jordan elimination
std::vector<Rat> invert(int n, const std::vector<Rat>& a_in) {
    std::vector<Rat> a = a_in;
    std::vector<Rat> inv(n * n, Rat(0));
    for (int i = 0; i < n; ++i) inv[i * n + i] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r * n + col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw incompatibility_error("metric is singular");
        if (piv != col)
            for (int c = 0; c < n; ++c) {
                std::swap(a[piv * n + c], a[col * n + c]);
                std::swap(inv[piv * n + c], inv[col * n + c]);
            }
        Rat d = a[col * n + col];
        for (int c = 0; c < n; ++c) {
            a[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r * n + col] == 0) continue;
            Rat f = a[r * n + col];
            for (int c = 0; c < n; ++c) {
                a[r * n + c] -= f * a[col * n + c];
                inv[r * n + c] -= f * inv[col * n + c];
            }
        }
    }
    return inv;
}

}  // namespace

Metric::Metric(int N, std::vector<Rat> entries) : rank(N), mat(std::move(entries)) {
    if (static_cast<int>(mat.size()) != N * N)
        throw incompatibility_error("metric entry count mismatch");
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < a; ++b)
            if (mat[a * N + b] != mat[b * N + a])
                throw incompatibility_error("metric must be symmetric");
    inv_mat = invert(N, mat);
}

Metric Metric::identity(int N) {
    std::vector<Rat> m(N * N, Rat(0));
    for (int i = 0; i < N; ++i) m[i * N + i] = 1;
    return Metric(N, std::move(m));
}

Metric Metric::antidiagonal(int N) {
    std::vector<Rat> m(N * N, Rat(0));
    for (int i = 0; i < N; ++i) m[i * N + (N - 1 - i)] = 1;
    return Metric(N, std::move(m));
}

HamiltonianOperator::HamiltonianOperator(int N, TruncationPolicy pol) : rank(N), policy(pol) {
    entries.assign(N, std::vector<std::map<int, DiffPoly>>(N));
}

HamiltonianOperator HamiltonianOperator::eta_dx(const Metric& eta, TruncationPolicy pol) {
    HamiltonianOperator K(eta.rank, pol);
    for (int a = 1; a <= eta.rank; ++a)
        for (int b = 1; b <= eta.rank; ++b)
            if (eta.upper(a, b) != 0)
                K.add(a, b, 1, dp_const(eta.rank, pol, GQ(eta.upper(a, b))));
    return K;
}

void HamiltonianOperator::add(int a, int b, int power, const DiffPoly& coef) {
    if (coef.is_zero()) return;
    auto& cell = entries[a - 1][b - 1];
    auto it = cell.find(power);
    if (it == cell.end()) cell.emplace(power, coef);
    else {
        it->second += coef;
        if (it->second.is_zero()) cell.erase(it);
    }
}

DiffPoly HamiltonianOperator::apply_row(int a, const std::vector<DiffPoly>& w) const {
    DiffPoly acc = dp_zero(rank, policy);
    for (int b = 1; b <= rank; ++b)
        for (auto& [j, coef] : entries[a - 1][b - 1]) acc += coef * dx_pow(w[b - 1], j);
    return acc;
}

HamiltonianOperator HamiltonianOperator::adjoint() const {
    // (c dx^j)^dagger = (-dx)^j o c  expanded to normal form, transposed in (a,b)
    HamiltonianOperator A(rank, policy);
    for (int a = 1; a <= rank; ++a)
        for (int b = 1; b <= rank; ++b)
            for (auto& [j, coef] : entries[a - 1][b - 1]) {
                // (-dx)^j o c = sum_i (-1)^j C(j,i) dx^i(c) dx^{j-i}
                Rat binom(1);
                DiffPoly der = coef;
                for (int i = 0; i <= j; ++i) {
                    if (i > 0) {
                        binom = binom * Rat(j - i + 1) / Rat(i);
                        der = dx(der);
                    }
                    GQ sign = (j % 2 == 0) ? GQ(1) : GQ(-1);
                    A.add(b, a, j - i, der * (sign * GQ(binom)));
                }
            }
    return A;
}

bool HamiltonianOperator::is_skew_adjoint() const {
    HamiltonianOperator A = adjoint();
    for (int a = 1; a <= rank; ++a)
        for (int b = 1; b <= rank; ++b) {
            std::map<int, DiffPoly> sum = entries[a - 1][b - 1];
            for (auto& [j, coef] : A.entries[a - 1][b - 1]) {
                auto it = sum.find(j);
                if (it == sum.end()) sum.emplace(j, coef);
                else {
                    it->second += coef;
                    if (it->second.is_zero()) sum.erase(it);
                }
            }
            if (!sum.empty()) return false;
        }
    return true;
}

std::string HamiltonianOperator::to_json() const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (int a = 1; a <= rank; ++a)
        for (int b = 1; b <= rank; ++b)
            for (auto& [j, coef] : entries[a - 1][b - 1]) {
                if (!first) os << ",";
                first = false;
                os << "{\"alpha\":" << a << ",\"beta\":" << b << ",\"dxPower\":" << j
                   << ",\"coefficient\":\"" << to_text(coef) << "\"}";
            }
    os << "]";
    return os.str();
}

LocalFunctional poisson_bracket(const LocalFunctional& F, const LocalFunctional& G,
                                const HamiltonianOperator& K) {
    F.density.check_compatible(G.density, "poisson_bracket");
    if (K.rank != F.rank()) throw incompatibility_error("poisson_bracket: operator rank mismatch");
    std::vector<DiffPoly> dG;
    for (int b = 1; b <= K.rank; ++b) dG.push_back(var_deriv(G.density, b));
    DiffPoly acc = dp_zero(K.rank, K.policy);
    for (int a = 1; a <= K.rank; ++a) acc += var_deriv(F.density, a) * K.apply_row(a, dG);
    return integrate(acc);
}

DiffPoly hamiltonian_flow(const DiffPoly& f, const LocalFunctional& G,
                          const HamiltonianOperator& K) {
    std::vector<DiffPoly> dG;
    for (int b = 1; b <= K.rank; ++b) dG.push_back(var_deriv(G.density, b));
    // velocities du^a/dtau = (K dG)^a and their x-derivatives on demand
    std::vector<std::vector<DiffPoly>> vel(K.rank);
    for (int a = 1; a <= K.rank; ++a) vel[a - 1].push_back(K.apply_row(a, dG));
    auto vel_jet = [&](int alpha, int order) -> const DiffPoly& {
        auto& v = vel[alpha - 1];
        while (static_cast<int>(v.size()) <= order) v.push_back(dx(v.back()));
        return v[order];
    };
    DiffPoly acc = dp_zero(f.rank, f.policy);
    for (const JetVariable& j : jet_support(f)) acc += dpartial(f, j) * vel_jet(j.alpha, j.order);
    return acc;
}

MiuraTransform::MiuraTransform(int N, TruncationPolicy pol, std::vector<DiffPoly> imgs)
    : rank(N), policy(pol), images(std::move(imgs)) {
    if (static_cast<int>(images.size()) != N)
        throw invalid_transform_error("one image per component required");
    for (int a = 1; a <= N; ++a) {
        DiffPoly lead = images[a - 1] - dp_jet(N, pol, a, 0);
        for (auto& [m, c] : lead.p.terms())
            if (dweight(m) <= 1)
                throw invalid_transform_error(
                    "transform must be the identity at leading weight, component " +
                    std::to_string(a));
    }
}

MiuraTransform MiuraTransform::identity(int N, TruncationPolicy pol) {
    std::vector<DiffPoly> imgs;
    for (int a = 1; a <= N; ++a) imgs.push_back(dp_jet(N, pol, a, 0));
    return MiuraTransform(N, pol, std::move(imgs));
}

MiuraTransform MiuraTransform::inverse() const {
    // fixed point: W^{(i+1)}_a = u^a - (M_a(W^{(i)}) - W^{(i)}_a)
    std::vector<DiffPoly> W;
    for (int a = 1; a <= rank; ++a) W.push_back(dp_jet(rank, policy, a, 0));
    int iters = 2 * policy.genus_cap + 2;
    for (int i = 0; i < iters; ++i) {
        std::vector<DiffPoly> next;
        for (int a = 1; a <= rank; ++a)
            next.push_back(dp_jet(rank, policy, a, 0) -
                           (substitute_fields(images[a - 1], W) - W[a - 1]));
        W = std::move(next);
    }
    // verify exact inversion under the policy
    for (int a = 1; a <= rank; ++a) {
        DiffPoly round = substitute_fields(images[a - 1], W);
        if (!(round == dp_jet(rank, policy, a, 0)))
            throw invalid_transform_error("inverse did not close under the policy");
    }
    return MiuraTransform(rank, policy, std::move(W));
}

DiffPoly miura_apply(const DiffPoly& f, const MiuraTransform& M, MiuraDirection dir) {
    if (dir == MiuraDirection::forward) return substitute_fields(f, M.images);
    return substitute_fields(f, M.inverse().images);
}

HamiltonianOperator miura_transform_operator(const HamiltonianOperator& K,
                                             const MiuraTransform& M) {
    const int N = K.rank;
    HamiltonianOperator out(N, K.policy);
    // J[a][mu] = map p -> d u~^a / du^mu_p
    std::vector<std::vector<std::map<int, DiffPoly>>> J(N,
                                                        std::vector<std::map<int, DiffPoly>>(N));
    for (int a = 1; a <= N; ++a)
        for (const JetVariable& j : jet_support(M.images[a - 1]))
            J[a - 1][j.alpha - 1][j.order] = dpartial(M.images[a - 1], j);

    // compose  c1 dx^{p} o K^{mu nu} o (-dx)^q o c2 dx^{0}, normal ordering as we go
    auto compose_right = [&](const DiffPoly& coef, int pow, const DiffPoly& c2,
                             std::map<int, DiffPoly>& acc) {
        // coef dx^pow o c2 = coef * sum_i C(pow, i) dx^i(c2) dx^{pow-i}
        Rat binom(1);
        DiffPoly der = c2;
        for (int i = 0; i <= pow; ++i) {
            if (i > 0) {
                binom = binom * Rat(pow - i + 1) / Rat(i);
                der = dx(der);
            }
            DiffPoly piece = coef * der * GQ(binom);
            if (piece.is_zero()) continue;
            auto it = acc.find(pow - i);
            if (it == acc.end()) acc.emplace(pow - i, piece);
            else it->second += piece;
        }
    };

    for (int a = 1; a <= N; ++a)
        for (int b = 1; b <= N; ++b)
            for (int mu = 1; mu <= N; ++mu)
                for (int nu = 1; nu <= N; ++nu)
                    for (auto& [p, Ja] : J[a - 1][mu - 1])
                        for (auto& [j, Kcoef] : K.entries[mu - 1][nu - 1])
                            for (auto& [q, Jb] : J[b - 1][nu - 1]) {
                                // Ja dx^p o Kcoef dx^j o (-1)^q dx^q o Jb
                                GQ sign = (q % 2 == 0) ? GQ(1) : GQ(-1);
                                // first: dx^p o Kcoef -> sum_i C(p,i) dx^i(Kcoef) dx^{p-i}
                                Rat binom(1);
                                DiffPoly der = Kcoef;
                                for (int i = 0; i <= p; ++i) {
                                    if (i > 0) {
                                        binom = binom * Rat(p - i + 1) / Rat(i);
                                        der = dx(der);
                                    }
                                    // now (Ja * der * binom) dx^{p-i+j+q} o Jb
                                    std::map<int, DiffPoly> tmp;
                                    compose_right(Ja * der * (GQ(binom) * sign), p - i + j + q,
                                                  Jb, tmp);
                                    for (auto& [pw, cf] : tmp) out.add(a, b, pw, cf);
                                }
                            }
    return out;
}

}  // namespace drlab
