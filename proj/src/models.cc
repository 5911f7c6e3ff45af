#include "drlab/models.hpp"

#include <sstream>

namespace drlab {

namespace {

// convenience builders
DiffPoly jet(int N, TruncationPolicy pol, int a, int k, uint32_t e = 1) {
    return dp_jet(N, pol, a, k, e);
}

GQ q(long n, long d = 1) { return GQ(n, d); }

// exact division of P by A in the eps/hbar coefficient ring (no jets);
// remainder must vanish
Poly divide_exact(const Poly& P, const Poly& A) {
    if (A.is_zero()) throw arithmetic_error("division by zero polynomial");
    // leading term of A under the monomial order (eps-dominant via Monomial's
    // ordering: compare eps, then hbar)
    auto lead = [](const Poly& f) { return std::prev(f.terms().end()); };
    Poly rem = P, quot;
    auto la = lead(A);
    while (!rem.is_zero()) {
        auto lr = lead(rem);
        const Monomial &mr = lr->first, &ma = la->first;
        if (mr.eps < ma.eps || mr.hbar < ma.hbar)
            throw arithmetic_error("inexact polynomial division");
        Monomial mq;
        mq.eps = mr.eps - ma.eps;
        mq.hbar = mr.hbar - ma.hbar;
        GQ cq = lr->second / la->second;
        Poly piece = Poly::term(mq, cq);
        quot += piece;
        rem -= piece * A;
    }
    return quot;
}

}  // namespace

std::string ModelSpec::to_json() const {
    std::ostringstream os;
    os << "{\"name\":\"" << name << "\",\"rank\":" << rank << ",\"eta\":[";
    for (size_t i = 0; i < eta.mat.size(); ++i) {
        if (i) os << ",";
        os << "\"" << rat_str(eta.mat[i]) << "\"";
    }
    os << "],\"seed\":\"" << to_text(seed.density + seed.constant) << "\",\"params\":{";
    bool first = true;
    for (auto& [k, v] : params) {
        if (!first) os << ",";
        first = false;
        os << "\"" << k << "\":\"" << rat_str(v) << "\"";
    }
    os << "}}";
    return os.str();
}

ModelSpec spin_model(int r, TruncationPolicy pol) {
    if (r != 3 && r != 4) throw incompatibility_error("spin model supports r = 3 or 4 only");
    ModelSpec m;
    m.rank = r - 1;
    m.eta = Metric::antidiagonal(r - 1);
    const int N = m.rank;
    const GQ I = GQ::i();
    auto u = [&](int a, int k, uint32_t e = 1) { return jet(N, pol, a, k, e); };
    auto eps = [&](uint32_t e) { return dp_eps(N, pol, e); };
    auto hb = [&](uint32_t e) { return dp_hbar(N, pol, e); };
    if (r == 3) {
        m.name = "3spin";
        DiffPoly h = q(1, 2) * (u(1, 0, 2) * u(2, 0)) + q(1, 36) * u(2, 0, 4) +
                     eps(2) * (q(-1, 12) * u(1, 1, 2) + q(-1, 24) * (u(2, 0) * u(2, 1, 2))) +
                     q(1, 432) * (eps(4) * u(2, 2, 2)) + (I * q(-1, 12)) * (hb(1) * u(1, 0));
        m.seed = integrate(h);
        m.provenance["eps4-u22-coefficient"] = "genus-2 intersection data";
        m.provenance["ihbar-u1-coefficient"] = "genus-1 correction formula";
        return m;
    }
    m.name = "4spin";
    DiffPoly h =
        q(1, 2) * (u(1, 0) * u(2, 0, 2)) + q(1, 2) * (u(1, 0, 2) * u(3, 0)) +
        q(1, 8) * (u(2, 0, 2) * u(3, 0, 2)) + q(1, 320) * u(3, 0, 5) +
        eps(2) * (q(-1, 8) * u(1, 1, 2) + q(-1, 16) * (u(3, 0) * u(2, 1, 2)) +
                  q(-1, 32) * (u(3, 0) * u(1, 1) * u(3, 1)) +
                  q(3, 64) * (u(2, 0, 2) * u(3, 2)) + q(1, 192) * (u(3, 0, 3) * u(3, 2))) +
        eps(4) * (q(1, 160) * u(2, 2, 2) + q(3, 640) * (u(1, 2) * u(3, 2)) +
                  q(5, 4096) * (u(3, 0, 2) * u(3, 4))) +
        q(-1, 8192) * (eps(6) * u(3, 3, 2)) +
        hb(1) * (I * (q(1, 96) * u(3, 1, 2) + q(-1, 96) * u(3, 0, 2) + q(-1, 8) * u(1, 0))) +
        (I * q(-1, 1280)) * (hb(1) * (eps(2) * u(3, 0)));
    m.seed = integrate(h);
    m.provenance["ihbar-eps2-u3-coefficient"] = "genus-2 intersection data (-1/1280)";
    return m;
}

Rank1Classification rank1_classification(const std::vector<Rat>& s_in, TruncationPolicy pol) {
    std::vector<Rat> s(4, Rat(0));
    for (size_t i = 0; i < s_in.size() && i < 4; ++i) s[i] = s_in[i];
    const GQ I = GQ::i();
    auto eps = [&](uint32_t e) { return Poly::eps(e); };
    auto hb = [&](uint32_t e) { return Poly::hbar(e); };
    auto ih = [&](uint32_t e) {  // (i hbar)^e
        GQ c(1);
        for (uint32_t k = 0; k < e; ++k) c *= I;
        return Poly(c) * hb(e);
    };
    auto rq = [](Rat v) { return Poly(GQ(v)); };

    // A = (i hbar) a,  B = (i hbar)^2 b,  C = (i hbar)^3 c
    Poly A = rq(Rat(-1, 24)) * eps(2) + rq(-s[0] / 2) * ih(1);
    Poly B = rq(-s[0] / 120) * eps(4) + rq(-s[0] * s[0] / 10) * (ih(1) * eps(2)) +
             rq(-(Rat(2, 5) * s[0] * s[0] * s[0] + s[1] / 12)) * ih(2);
    Poly C = rq(-(s[0] * s[0] * s[0] / 360 + s[1] / 1728)) * eps(6) +
             rq(-(Rat(24) * s[0] * s[0] * s[0] * s[0] + Rat(5) * s[0] * s[1]) / 720) *
                 (ih(1) * eps(4)) +
             rq(-(Rat(4608) * s[0] * s[0] * s[0] * s[0] * s[0] +
                  Rat(2400) * s[1] * s[0] * s[0] + Rat(35) * s[2]) /
                28800) *
                 (ih(2) * eps(2)) +
             rq(-(Rat(2304) * s[0] * s[0] * s[0] * s[0] * s[0] * s[0] +
                  Rat(2400) * s[1] * s[0] * s[0] * s[0] + Rat(105) * s[2] * s[0] -
                  Rat(500) * s[1] * s[1]) /
                7200) *
                 ih(3);

    // coeff(u_3^2) * (i hbar)^3 = (10 B^2 - (i hbar) C) / (7 A), exact
    Poly numer = Poly(GQ(10)) * (B * B) - (Poly(I) * hb(1)) * C;
    Poly D;
    if (!numer.is_zero()) D = divide_exact(numer, Poly(GQ(7)) * A);

    Rank1Classification out;
    out.A = DiffPoly(1, pol, A);
    out.B = DiffPoly(1, pol, B);
    out.C = DiffPoly(1, pol, C);
    out.u3sq_coeff_times_ihbar3 = DiffPoly(1, pol, D);
    return out;
}

ModelSpec rank1_seed(const std::vector<Rat>& s_in, int g_max, TruncationPolicy pol) {
    if (g_max > 3)
        throw incompatibility_error("rank1_seed: expansion depth supports g_max <= 3 only");
    Rank1Classification cls = rank1_classification(s_in, pol);
    ModelSpec m;
    m.name = "rank1";
    m.rank = 1;
    m.eta = Metric::identity(1);
    const GQ I = GQ::i();
    auto u = [&](int k, uint32_t e = 1) { return jet(1, pol, 1, k, e); };
    DiffPoly h = q(1, 6) * u(0, 3) + cls.A * u(1, 2) +
                 (I * q(-1, 24)) * (dp_hbar(1, pol, 1) * u(0)) + cls.B * u(2, 2) +
                 cls.C * u(2, 3) + cls.u3sq_coeff_times_ihbar3 * u(3, 2);
    // keep only genus <= g_max
    TruncationPolicy cap = pol;
    cap.genus_cap = std::min(cap.genus_cap, g_max);
    h.p.truncate(cap);
    m.seed = integrate(h);
    std::vector<Rat> s(4, Rat(0));
    for (size_t i = 0; i < s_in.size() && i < 4; ++i) s[i] = s_in[i];
    for (int i = 0; i < 4; ++i) m.params["s" + std::to_string(i + 1)] = s[i];
    return m;
}

LocalFunctional genus1_correction(const FrobeniusData& fd, const Genus1Target& target,
                                  const std::vector<DiffPoly>& g0) {
    const int N = fd.rank;
    const TruncationPolicy pol = fd.F.policy;
    const GQ I = GQ::i();
    auto d0 = [&](const DiffPoly& f, int a) { return dpartial(f, {a, 0}); };

    DiffPoly ux2_part = dp_zero(N, pol);  // multiplies u^a_x u^b_x
    DiffPoly scalar_part = dp_zero(N, pol);

    if (!target.descendant) {
        for (int a = 1; a <= N; ++a)
            for (int b = 1; b <= N; ++b) {
                DiffPoly coef = dp_zero(N, pol);
                for (int mu = 1; mu <= N; ++mu)
                    for (int nu = 1; nu <= N; ++nu) {
                        if (fd.eta.upper(mu, nu) == 0) continue;
                        GQ e{fd.eta.upper(mu, nu)};
                        coef += (q(1, 48) * e) * d0(d0(d0(d0(fd.F, a), b), mu), nu);
                        coef += (q(1, 2) * e) * (d0(d0(d0(fd.F, a), b), mu) * d0(fd.Gfun, nu));
                    }
                ux2_part += coef * (jet(N, pol, a, 1) * jet(N, pol, b, 1));
            }
        for (int mu = 1; mu <= N; ++mu)
            for (int nu = 1; nu <= N; ++nu)
                if (fd.eta.upper(mu, nu) != 0)
                    scalar_part +=
                        (q(-1, 24) * GQ(fd.eta.upper(mu, nu))) * d0(d0(fd.F, mu), nu);
    } else {
        if (g0.empty())
            throw incompatibility_error("genus1_correction: genus-0 densities required");
        const DiffPoly& gd = g0.back();            // g0_{alpha,d}
        const DiffPoly* gdm1 = nullptr;            // g0_{alpha,d-1}
        if (target.d >= 1) {
            if (g0.size() < 2)
                throw incompatibility_error("genus1_correction: need g0_{alpha,d-1}");
            gdm1 = &g0[g0.size() - 2];
        }
        for (int a = 1; a <= N; ++a)
            for (int b = 1; b <= N; ++b) {
                DiffPoly coef = dp_zero(N, pol);
                for (int mu = 1; mu <= N; ++mu)
                    for (int nu = 1; nu <= N; ++nu) {
                        if (fd.eta.upper(mu, nu) == 0) continue;
                        GQ e{fd.eta.upper(mu, nu)};
                        coef += (q(1, 48) * e) * d0(d0(d0(d0(gd, a), b), mu), nu);
                        coef += (q(1, 2) * e) * (d0(d0(d0(gd, a), b), mu) * d0(fd.Gfun, nu));
                    }
                if (gdm1) {
                    // 1/2 c^mu_{ab} d/du^mu ( 1/24 d2 g0_{d-1} eta + d g0_{d-1} eta dG )
                    DiffPoly inner = dp_zero(N, pol);
                    for (int ep = 1; ep <= N; ++ep)
                        for (int de = 1; de <= N; ++de) {
                            if (fd.eta.upper(ep, de) == 0) continue;
                            GQ e{fd.eta.upper(ep, de)};
                            inner += (q(1, 24) * e) * d0(d0(*gdm1, ep), de);
                            inner += e * (d0(*gdm1, ep) * d0(fd.Gfun, de));
                        }
                    for (int mu = 1; mu <= N; ++mu)
                        for (int nu = 1; nu <= N; ++nu) {
                            if (fd.eta.upper(mu, nu) == 0) continue;
                            GQ e{fd.eta.upper(mu, nu)};
                            coef += (q(1, 2) * e) *
                                    (d0(d0(d0(fd.F, a), b), mu) * d0(inner, nu));
                        }
                }
                ux2_part += coef * (jet(N, pol, a, 1) * jet(N, pol, b, 1));
            }
        for (int mu = 1; mu <= N; ++mu)
            for (int nu = 1; nu <= N; ++nu)
                if (fd.eta.upper(mu, nu) != 0)
                    scalar_part += (q(-1, 24) * GQ(fd.eta.upper(mu, nu))) * d0(d0(gd, mu), nu);
    }
    DiffPoly total = (I * dp_hbar(N, pol, 1)) * (ux2_part + scalar_part);
    return integrate(total);
}

std::vector<DiffPoly> genus0_densities(const FrobeniusData& fd, int alpha, int d_max,
                                       TruncationPolicy pol) {
    // dispersionless classical recursion from the seed (D-2) int F
    DiffPoly seed = euler_apply(fd.F, 2);
    TruncationPolicy p0 = pol;
    p0.genus_cap = 0;
    DiffPoly seed0(fd.rank, p0, seed.p);
    HierarchyTable t =
        build_hierarchy(integrate(seed0), fd.eta, d_max, p0, RecursionMode::classical);
    std::vector<DiffPoly> out;
    for (int d = 0; d <= d_max; ++d) out.push_back(DiffPoly(fd.rank, pol, t.density(alpha, d).p));
    return out;
}

FrobeniusData non_wdvv_fixture(TruncationPolicy pol) {
    FrobeniusData fd;
    fd.rank = 3;
    fd.eta = Metric::antidiagonal(3);
    auto u = [&](int a, uint32_t e = 1) { return jet(3, pol, a, 0, e); };
    fd.F = q(1, 2) * (u(1) * u(2, 2)) + q(1, 2) * (u(1, 2) * u(3)) + u(2, 3) * u(3);
    fd.Gfun = dp_zero(3, pol);
    return fd;
}

std::vector<std::string> model_names() {
    return {"3spin", "4spin", "rank1-trivial", "3spin-perturbed"};
}

ModelSpec get_model(const std::string& name, TruncationPolicy pol) {
    if (name == "3spin") return spin_model(3, pol);
    if (name == "4spin") return spin_model(4, pol);
    if (name == "rank1-trivial" || name == "kdv" || name == "trivial")
        return rank1_seed({}, std::min(pol.genus_cap, 3), pol);
    if (name == "3spin-perturbed") {
        ModelSpec m = spin_model(3, pol);
        m.name = "3spin-perturbed";
        // tamper with the eps^4 coefficient: 1/432 -> 1/400
        DiffPoly h = m.seed.density + m.seed.constant;
        DiffPoly bad = h + (q(1, 400) - q(1, 432)) * (dp_eps(2, pol, 4) * jet(2, pol, 2, 2, 2));
        m.seed = integrate(bad);
        return m;
    }
    throw incompatibility_error("unknown model: " + name);
}

}  // namespace drlab
