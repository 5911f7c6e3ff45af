#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "drlab/operators.hpp"

using namespace drlab;

namespace {

const TruncationPolicy kPol{3, std::nullopt};

DiffPoly u(int k, uint32_t e = 1) { return dp_jet(1, kPol, 1, k, e); }
GQ q(long n, long d = 1) { return GQ(n, d); }

HamiltonianOperator dxop() { return HamiltonianOperator::eta_dx(Metric::identity(1), kPol); }

struct Rng {
    std::mt19937 gen{777};
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
    DiffPoly poly(int rank, int max_order, int terms) {
        DiffPoly f = dp_zero(rank, kPol);
        for (int t = 0; t < terms; ++t) {
            DiffPoly mono = dp_const(rank, kPol, GQ(pick(-5, 5), pick(1, 3)));
            int nf = pick(1, 3);
            for (int i = 0; i < nf; ++i)
                mono = mono * dp_jet(rank, kPol, pick(1, rank), pick(0, max_order));
            f += mono;
        }
        return f;
    }
};

}  // namespace

TEST_CASE("metric inverse") {
    Metric eta = Metric::antidiagonal(2);
    CHECK(eta.upper(1, 2) == 1);
    CHECK(eta.upper(1, 1) == 0);
    Metric m(2, {Rat(2), Rat(1), Rat(1), Rat(1)});
    CHECK(m.upper(1, 1) == Rat(1));
    CHECK(m.upper(1, 2) == Rat(-1));
    CHECK(m.upper(2, 2) == Rat(2));
    CHECK_THROWS_AS(Metric(2, {Rat(0), Rat(0), Rat(0), Rat(0)}), incompatibility_error);
}

TEST_CASE("poisson bracket examples") {
    auto K = dxop();
    LocalFunctional cubic = integrate(q(1, 6) * u(0, 3));
    LocalFunctional quad = integrate(q(1, 2) * u(0, 2));
    LocalFunctional quart = integrate(q(1, 24) * u(0, 4));
    CHECK(functional_equal(poisson_bracket(cubic, quad, K), integrate(dp_zero(1, kPol))));
    CHECK(functional_equal(poisson_bracket(quad, quad, K), integrate(dp_zero(1, kPol))));
    CHECK(functional_equal(poisson_bracket(cubic, quart, K), integrate(dp_zero(1, kPol))));
}

TEST_CASE("bracket antisymmetry and jacobi") {
    auto K = dxop();
    Rng rng;
    for (int trial = 0; trial < 12; ++trial) {
        LocalFunctional F = integrate(rng.poly(1, 2, 3));
        LocalFunctional G = integrate(rng.poly(1, 2, 3));
        LocalFunctional H = integrate(rng.poly(1, 2, 3));
        DiffPoly anti = poisson_bracket(F, G, K).density + poisson_bracket(G, F, K).density;
        CHECK(integrates_to_zero(anti));
        DiffPoly jac = poisson_bracket(poisson_bracket(F, G, K), H, K).density +
                       poisson_bracket(poisson_bracket(G, H, K), F, K).density +
                       poisson_bracket(poisson_bracket(H, F, K), G, K).density;
        CHECK(integrates_to_zero(jac));
    }
}

TEST_CASE("hamiltonian flows") {
    auto K = dxop();
    CHECK(hamiltonian_flow(u(0), integrate(q(1, 2) * u(0, 2)), K) == u(1));
    CHECK(hamiltonian_flow(u(0), integrate(q(1, 6) * u(0, 3)), K) == u(0) * u(1));
    LocalFunctional kdv =
        integrate(q(1, 6) * u(0, 3) - q(1, 24) * (dp_eps(1, kPol, 2) * u(1, 2)));
    DiffPoly expect = u(0) * u(1) + q(1, 12) * (dp_eps(1, kPol, 2) * u(3));
    CHECK(hamiltonian_flow(u(0), kdv, K) == expect);
}

TEST_CASE("quadratic functional generates x-translation") {
    auto K = dxop();
    LocalFunctional quad = integrate(q(1, 2) * u(0, 2));
    Rng rng;
    for (int trial = 0; trial < 20; ++trial) {
        DiffPoly f = rng.poly(1, 3, 4);
        CHECK(hamiltonian_flow(f, quad, K) == dx(f));
    }
}

TEST_CASE("miura substitution") {
    MiuraTransform id = MiuraTransform::identity(1, kPol);
    DiffPoly f = q(1, 2) * u(0, 2) + u(1) * u(2);
    CHECK(miura_apply(f, id, MiuraDirection::forward) == f);

    GQ c(3, 7);
    MiuraTransform M(1, kPol, {u(0) + c * (dp_eps(1, kPol, 2) * u(2))});
    DiffPoly got = miura_apply(q(1, 2) * u(0, 2), M, MiuraDirection::forward);
    DiffPoly expect = q(1, 2) * u(0, 2) + c * (dp_eps(1, kPol, 2) * (u(0) * u(2))) +
                      (c * c * q(1, 2)) * (dp_eps(1, kPol, 4) * u(2, 2));
    CHECK(got == expect);

    // round trip within the policy
    DiffPoly f3 = u(0, 3);
    MiuraTransform M2(1, kPol, {u(0) + dp_eps(1, kPol, 2) * u(2)});
    DiffPoly there = miura_apply(f3, M2, MiuraDirection::forward);
    CHECK(miura_apply(there, M2, MiuraDirection::inverse) == f3);

    CHECK_THROWS_AS(MiuraTransform(1, kPol, {q(2) * u(0)}), invalid_transform_error);
}

TEST_CASE("miura operator transform") {
    MiuraTransform id = MiuraTransform::identity(1, kPol);
    auto K = dxop();
    HamiltonianOperator K1 = miura_transform_operator(K, id);
    CHECK(K1.entries[0][0].size() == 1);
    CHECK(K1.entries[0][0].at(1) == dp_const(1, kPol, q(1)));

    MiuraTransform M(1, kPol, {u(0) + dp_eps(1, kPol, 2) * u(2)});
    HamiltonianOperator K2 = miura_transform_operator(K, M);
    CHECK(K2.entries[0][0].at(1) == dp_const(1, kPol, q(1)));
    CHECK(K2.entries[0][0].at(3) == q(2) * dp_eps(1, kPol, 2));
    CHECK(K2.entries[0][0].at(5) == dp_eps(1, kPol, 4));
    CHECK(K2.is_skew_adjoint());
}

TEST_CASE("operator transforms preserve skew-adjointness") {
    Rng rng;
    Metric eta = Metric::antidiagonal(2);
    HamiltonianOperator K = HamiltonianOperator::eta_dx(eta, kPol);
    CHECK(K.is_skew_adjoint());
    for (int trial = 0; trial < 6; ++trial) {
        // random valid transform: identity + eps^2 * (second-order corrections)
        std::vector<DiffPoly> imgs;
        for (int a = 1; a <= 2; ++a) {
            DiffPoly corr = dp_zero(2, kPol);
            int terms = rng.pick(1, 2);
            for (int t = 0; t < terms; ++t)
                corr += GQ(rng.pick(-3, 3), rng.pick(1, 2)) *
                        (dp_eps(2, kPol, 2) * dp_jet(2, kPol, rng.pick(1, 2), 2));
            imgs.push_back(dp_jet(2, kPol, a, 0) + corr);
        }
        MiuraTransform M(2, kPol, std::move(imgs));
        CHECK(miura_transform_operator(K, M).is_skew_adjoint());
    }
}

TEST_CASE("operator json") {
    auto K = dxop();
    CHECK(K.to_json() == "[{\"alpha\":1,\"beta\":1,\"dxPower\":1,\"coefficient\":\"1\"}]");
}
