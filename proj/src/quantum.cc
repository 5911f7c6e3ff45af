#include "drlab/quantum.hpp"

#include <algorithm>
#include <mutex>

namespace drlab {

PolylogDecomposition polylog_decompose(std::vector<int> d) {
    for (int di : d)
        if (di < 1) throw incompatibility_error("polylog_decompose: inputs must be >= 1");
    const int k = static_cast<int>(d.size());
    int J = k - 1;
    for (int di : d) J += di;
    // z^n coefficient of prod Li_{-d_i}: truncated series product up to z^J
    std::vector<Rat> prod(J + 1, Rat(0));
    prod[0] = 1;
    for (int di : d) {
        std::vector<Rat> next(J + 1, Rat(0));
        for (int n = 0; n <= J; ++n) {
            if (prod[n] == 0) continue;
            for (int m = 1; n + m <= J; ++m) {
                Rat p(1);
                for (int t = 0; t < di; ++t) p *= m;
                next[n + m] += prod[n] * p;
            }
        }
        prod = std::move(next);
    }
    // Vandermonde system sum_j C~_j n^j = prod[n], n = 1..J
    std::vector<std::vector<Rat>> A(J, std::vector<Rat>(J + 1, Rat(0)));
    for (int n = 1; n <= J; ++n) {
        Rat pw(1);
        for (int j = 1; j <= J; ++j) {
            pw *= n;
            A[n - 1][j - 1] = pw;
        }
        A[n - 1][J] = prod[n];
    }
    for (int col = 0; col < J; ++col) {
        int piv = -1;
        for (int r = col; r < J; ++r)
            if (A[r][col] != 0) {
                piv = r;
                break;
            }
        std::swap(A[piv], A[col]);
        Rat dv = A[col][col];
        for (int c = col; c <= J; ++c) A[col][c] /= dv;
        for (int r = 0; r < J; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rat f = A[r][col];
            for (int c = col; c <= J; ++c) A[r][c] -= f * A[col][c];
        }
    }
    PolylogDecomposition out;
    out.inputs = std::move(d);
    for (int j = 1; j <= J; ++j)
        if (A[j - 1][J] != 0) out.coeffs[j] = A[j - 1][J];
    return out;
}

const CCoefficients& c_coeffs(std::vector<int> a) {
    static std::map<std::vector<int>, CCoefficients> cache;
    static std::mutex mu;
    std::sort(a.begin(), a.end());
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    PolylogDecomposition dec = polylog_decompose(a);
    CCoefficients cc;
    cc.inputs = a;
    long sum = 0;
    for (int ai : a) sum += ai;
    const long n = static_cast<long>(a.size());
    const long parity = (n - 1 + sum) % 2;
    for (auto& [j, v] : dec.coeffs) {
        if (j % 2 != parity) continue;  // off-parity classes vanish
        long e = (n - 1 + sum - j) / 2;
        GQ c = (e % 2 == 0) ? GQ(v) : GQ(-v);
        cc.coeffs[j] = c;
    }
    return cache.emplace(std::move(a), std::move(cc)).first->second;
}

namespace {

// nonzero iterated partial derivatives of h of a given depth, keyed by the
// sorted tuple of jet variables
using DerivMap = std::map<std::vector<JetVariable>, DiffPoly>;

DerivMap derivatives(const DiffPoly& h, int depth) {
    DerivMap cur;
    cur[{}] = h;
    for (int d = 0; d < depth; ++d) {
        DerivMap next;
        for (auto& [key, val] : cur) {
            for (const JetVariable& j : jet_support(val)) {
                if (!key.empty() && j < key.back()) continue;  // keep keys sorted, no dup work
                DiffPoly dv = dpartial(val, j);
                if (dv.is_zero()) continue;
                std::vector<JetVariable> k2 = key;
                k2.push_back(j);
                next.emplace(std::move(k2), std::move(dv));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

long multiset_orbit(const std::vector<JetVariable>& v) {
    // number of distinct orderings = n! / prod (multiplicities!)
    long n = static_cast<long>(v.size());
    long fact = 1;
    for (long i = 2; i <= n; ++i) fact *= i;
    long i = 0;
    while (i < n) {
        long j = i;
        while (j < n && v[j] == v[i]) ++j;
        long m = j - i;
        for (long t = 2; t <= m; ++t) fact /= t;
        i = j;
    }
    return fact;
}

}  // namespace

DiffPoly qcommutator_scaled(const DiffPoly& f, const LocalFunctional& G, const Metric& eta) {
    f.check_compatible(G.density, "qcommutator");
    if (eta.rank != f.rank) throw incompatibility_error("qcommutator: metric rank mismatch");
    const DiffPoly& g = G.density;
    const TruncationPolicy& pol = f.policy;
    DiffPoly out = dp_zero(f.rank, pol);

    // after dividing by hbar the n-th layer carries hbar^{n-1}, so layers up
    // to genus_cap + 1 can still contribute under the policy
    const int nmax = pol.genus_cap + 1;
    GQ pref(1);  // (-i)^{n-1} / n!
    for (int n = 1; n <= nmax; ++n) {
        pref = pref * GQ(Rat(1, n));
        if (n > 1) pref = pref * (-GQ::i());

        DerivMap df = derivatives(f, n);
        DerivMap dg = derivatives(g, n);
        if (df.empty() || dg.empty()) break;

        long smax_all = 0;
        for (auto& [S, fval] : df) {
            long s = 0;
            for (auto& jv : S) s += jv.order;
            smax_all = std::max(smax_all, s);
        }
        // dx powers of each g-derivative, shared across the f-side loop
        std::map<std::vector<JetVariable>, std::vector<DiffPoly>> dxg_all;
        for (auto& [R, gval] : dg) {
            long rsum = 0;
            for (auto& jv : R) rsum += jv.order;
            const int Jmax = static_cast<int>(2 * n - 1 + smax_all + rsum);
            std::vector<DiffPoly> dxg;
            dxg.reserve(Jmax + 1);
            dxg.push_back(gval);
            for (int j = 1; j <= Jmax; ++j) dxg.push_back(dx(dxg.back()));
            dxg_all.emplace(R, std::move(dxg));
        }

        DiffPoly layer = dp_zero(f.rank, pol);
        for (auto& [S, fval] : df) {
            // summing ordered tuples: all arrangements of S give the same
            // total over R-arrangements, hence the orbit-size factor
            GQ s_factor(Rat(multiset_orbit(S)));
            for (auto& [R, gval] : dg) {
                long rsum = 0;
                for (auto& jv : R) rsum += jv.order;
                GQ sign = (rsum % 2 == 0) ? GQ(1) : GQ(-1);
                const std::vector<DiffPoly>& dxg = dxg_all.at(R);

                std::vector<JetVariable> arr = R;
                DiffPoly inner = dp_zero(f.rank, pol);
                do {
                    GQ etaprod(1);
                    bool ok = true;
                    for (int i = 0; i < n; ++i) {
                        const Rat& e = eta.upper(S[i].alpha, arr[i].alpha);
                        if (e == 0) {
                            ok = false;
                            break;
                        }
                        etaprod *= GQ(e);
                    }
                    if (!ok) continue;
                    std::vector<int> As(n);
                    for (int i = 0; i < n; ++i) As[i] = S[i].order + arr[i].order + 1;
                    const CCoefficients& cc = c_coeffs(As);
                    DiffPoly jsum = dp_zero(f.rank, pol);
                    for (auto& [j, Cj] : cc.coeffs) jsum += Cj * dxg[j];
                    inner += etaprod * jsum;
                } while (std::next_permutation(arr.begin(), arr.end()));
                if (inner.is_zero()) continue;
                layer += (s_factor * sign) * (fval * inner);
            }
        }
        out += DiffPoly(f.rank, pol, (pref * layer).p.times_hbar(n - 1));
    }
    return out;
}

DiffPoly qcommutator_density(const DiffPoly& f, const LocalFunctional& G, const Metric& eta) {
    DiffPoly scaled = qcommutator_scaled(f, G, eta);
    return DiffPoly(f.rank, f.policy, scaled.p.times_hbar(1));
}

LocalFunctional qcommutator(const LocalFunctional& F, const LocalFunctional& G,
                            const Metric& eta) {
    return integrate(qcommutator_density(F.density, G, eta));
}

}  // namespace drlab
