// Command-line driver: builds hierarchies by recursion from a seed
// Hamiltonian, verifies integrability and tau-symmetry, reduces rank-1
// deformations to standard form and runs the tree combinatorics.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "drlab/standardform.hpp"
#include "drlab/tau.hpp"
#include "drlab/trees.hpp"

using json = nlohmann::json;
using namespace drlab;

namespace {

struct Output {
    bool as_json = false;
    std::string path;

    void emit(const std::string& text, const std::string& json_text) const {
        const std::string& body = as_json ? json_text : text;
        if (path.empty()) {
            std::cout << body << "\n";
        } else {
            std::ofstream of(path, std::ios::binary);
            of << body << "\n";
        }
    }
};

std::vector<Rat> parse_s(const std::string& csv) {
    std::vector<Rat> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            out.push_back(Rat(cur));
            out.back().canonicalize();
            cur.clear();
        } else
            cur += c;
    }
    if (!cur.empty()) {
        out.push_back(Rat(cur));
        out.back().canonicalize();
    }
    return out;
}

ModelSpec load_model(const std::string& name, const std::string& model_file,
                     const std::string& s_csv, TruncationPolicy pol) {
    if (!model_file.empty()) {
        std::ifstream in(model_file);
        if (!in) throw incompatibility_error("cannot open model file " + model_file);
        json j = json::parse(in);
        ModelSpec m;
        m.name = j.value("name", "inline");
        m.rank = j.at("rank").get<int>();
        std::vector<Rat> eta;
        for (auto& e : j.at("eta")) {
            Rat r(e.get<std::string>());
            r.canonicalize();
            eta.push_back(r);
        }
        m.eta = Metric(m.rank, eta);
        m.seed = integrate(parse_diffpoly(j.at("seed").get<std::string>(), m.rank, pol));
        if (j.contains("params"))
            for (auto& [k, v] : j.at("params").items()) {
                Rat r(v.get<std::string>());
                r.canonicalize();
                m.params[k] = r;
            }
        return m;
    }
    if (name == "rank1" && !s_csv.empty())
        return rank1_seed(parse_s(s_csv), std::min(pol.genus_cap, 3), pol);
    return get_model(name, pol);
}

json report_to_json(const std::vector<CheckResult>& checks) {
    json arr = json::array();
    for (auto& c : checks) {
        json e{{"name", c.name}, {"status", c.pass ? "pass" : "fail"}};
        if (!c.witness.empty()) e["witness"] = c.witness;
        arr.push_back(e);
    }
    return arr;
}

std::string report_to_text(const std::vector<CheckResult>& checks) {
    std::ostringstream os;
    for (auto& c : checks) {
        os << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
        if (!c.witness.empty()) os << "  [" << c.witness << "]";
        os << "\n";
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact engine for hierarchies generated by one-seed recursion"};
    app.require_subcommand(1);

    std::string model = "rank1-trivial", model_file, s_csv;
    int genus = 1, pmax = 1, dmaxOpt = -1, nmax = 3;
    bool classical = false, as_json = false, admissible = false;
    std::string out_path;

    auto add_common = [&](CLI::App* sub, bool with_model = true) {
        if (with_model) {
            sub->add_option("--model", model, "model name (" + [] {
                                std::string s;
                                for (auto& n : model_names()) s += n + "|";
                                s += "rank1";
                                return s;
                            }());
            sub->add_option("--model-file", model_file, "inline model as JSON");
            sub->add_option("--s", s_csv, "rank-1 deformation parameters s1,s2,...");
        }
        sub->add_option("--genus", genus, "genus cap");
        sub->add_flag("--json", as_json, "emit JSON");
        sub->add_option("--out", out_path, "write the report to a file");
    };

    auto* recurse = app.add_subcommand("recurse", "build hierarchy densities from the seed");
    add_common(recurse);
    recurse->add_option("--pmax", pmax, "recursion depth");
    recurse->add_flag("--classical", classical, "classical mode");

    auto* verify = app.add_subcommand("verify", "full integrability verification");
    add_common(verify);
    verify->add_option("--pmax", pmax, "recursion depth");
    verify->add_flag("--classical", classical, "classical mode");

    auto* taus = app.add_subcommand("tau-check", "tau-structure and two-point checks");
    add_common(taus);
    taus->add_option("--pmax", pmax, "recursion depth");
    taus->add_flag("--classical", classical, "classical mode");

    auto* corr = app.add_subcommand("correlators", "classical correlator table");
    add_common(corr);
    corr->add_option("--nmax", nmax, "max insertions");
    corr->add_option("--dmax", dmaxOpt, "max descendant index");

    auto* cmp = app.add_subcommand("standard-compare", "rank-1 standard-form comparison");
    cmp->add_option("--s", s_csv, "deformation parameters s1,s2,...")->required();
    cmp->add_option("--gmax", genus, "comparison depth");
    cmp->add_flag("--json", as_json, "emit JSON");
    cmp->add_option("--out", out_path, "write the report to a file");

    auto* trees = app.add_subcommand("trees", "stable tree enumeration and identities");
    int tg = 1, tn = 2, tm = 2;
    trees->add_option("--g", tg, "genus");
    trees->add_option("--n", tn, "positive legs");
    trees->add_option("--m", tm, "vertices");
    trees->add_flag("--admissible", admissible, "admissibility filter");
    trees->add_flag("--json", as_json, "emit JSON");
    trees->add_option("--out", out_path, "write the report to a file");

    auto* g1 = app.add_subcommand("genus1", "first-order quantum correction from genus-0 data");
    add_common(g1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" ? 0 : 2;
    }

    Output out{as_json, out_path};
    TruncationPolicy pol{genus, std::nullopt};
    RecursionMode mode = classical ? RecursionMode::classical : RecursionMode::quantum;

    try {
        if (*recurse) {
            ModelSpec m = load_model(model, model_file, s_csv, pol);
            HierarchyTable t = build_hierarchy(m.seed, m.eta, pmax, pol, mode);
            json j{{"model", m.name}, {"pMax", pmax}, {"genusCap", genus}};
            std::ostringstream text;
            json dens = json::array();
            for (auto& [key, d] : t.densities) {
                text << "G(" << key.first << "," << key.second << ") = " << to_text(d) << "\n";
                dens.push_back(
                    {{"alpha", key.first}, {"p", key.second}, {"density", to_text(d)}});
            }
            j["densities"] = dens;
            out.emit(text.str(), j.dump(2));
            return 0;
        }
        if (*verify) {
            ModelSpec m = load_model(model, model_file, s_csv, pol);
            DrTypeReport rep = verify_dr_type(m.seed, m.eta, pmax, pol, mode);
            out.emit(report_to_text(rep.checks), rep.to_json());
            return rep.all_pass() ? 0 : 1;
        }
        if (*taus) {
            ModelSpec m = load_model(model, model_file, s_csv, pol);
            HierarchyTable t = build_hierarchy(m.seed, m.eta, pmax, pol, mode);
            TauStructure ts = tau_densities(t);
            TauReport rep = tau_symmetry_check(ts, t.p_max - 1);
            // the relation of the two-point functions to the densities
            std::vector<CheckResult> checks = rep.checks;
            for (int a = 1; a <= m.rank; ++a)
                for (int p = 0; p <= ts.q_max; ++p) {
                    TwoPoint tp = two_point(ts, a, p, 1, 0);
                    DiffPoly diff = tp.omega - ts.density(a, p - 1);
                    bool constant = diff == const_part(diff);
                    checks.push_back({"omega(" + std::to_string(a) + "," + std::to_string(p) +
                                          ";1,0)-density relation",
                                      constant,
                                      constant ? "constant " + to_text(diff) : to_text(diff)});
                }
            out.emit(report_to_text(checks), report_to_json(checks).dump(2));
            for (auto& c : checks)
                if (!c.pass) return 1;
            return 0;
        }
        if (*corr) {
            ModelSpec m = load_model(model, model_file, s_csv, pol);
            int dmax = dmaxOpt >= 0 ? dmaxOpt : 2 * genus + nmax;
            HierarchyTable t =
                build_hierarchy(m.seed, m.eta, dmax + 1, pol, RecursionMode::classical);
            CorrelatorTable table = dr_correlators(t, nmax, dmax);
            std::ostringstream text;
            for (auto& [key, val] : table.entries) {
                if (val == 0) continue;
                text << "g=" << key.g << " <";
                for (auto& [d, a] : key.legs) text << " tau_" << d << "(e" << a << ")";
                text << " > = " << rat_str(val) << "\n";
            }
            out.emit(text.str(), table.to_json());
            return 0;
        }
        if (*cmp) {
            StandardCompareReport rep = compare_dz_standard(parse_s(s_csv), genus);
            std::ostringstream text;
            for (auto& d : rep.diffs)
                text << (d.match ? "PASS" : "FAIL") << "  " << d.monomial << "  expected "
                     << d.expected << "  got " << d.got << "  (" << d.source << ")\n";
            out.emit(text.str(), rep.to_json());
            return rep.all_match() ? 0 : 1;
        }
        if (*trees) {
            auto ts = enumerate_trees(tg, tn, tm, admissible);
            std::ostringstream text;
            json arr = json::array();
            bool all_ok = true;
            Rat csum(0);
            for (auto& t : ts) {
                Rat c = coefficient_C(t);
                csum += c;
                bool ok = coefficient_identity_check(t);
                all_ok = all_ok && ok;
                text << t.to_json() << "  C=" << rat_str(c)
                     << (ok ? "  identity ok" : "  IDENTITY FAIL") << "\n";
                arr.push_back({{"tree", json::parse(t.to_json())},
                               {"C", rat_str(c)},
                               {"identity", ok}});
            }
            text << "count=" << ts.size() << "  sum C=" << rat_str(csum) << "\n";
            json j{{"count", ts.size()}, {"sumC", rat_str(csum)}, {"trees", arr}};
            out.emit(text.str(), j.dump(2));
            return all_ok ? 0 : 1;
        }
        if (*g1) {
            ModelSpec m = load_model(model, model_file, s_csv, pol);
            // dispersionless potential from the seed, then the first-order correction
            DiffPoly classical0 = at_hbar_zero(m.seed.density + m.seed.constant);
            TruncationPolicy p0 = pol;
            DiffPoly disp(m.rank, p0, Poly{});
            for (auto& [mono, c] : classical0.p.terms())
                if (mono.eps == 0) disp.p.add_term(mono, c);
            FrobeniusData fd;
            fd.rank = m.rank;
            fd.eta = m.eta;
            fd.F = euler_invert(disp, 2).main;
            fd.Gfun = dp_zero(m.rank, pol);
            WdvvResult w = wdvv_check(fd.F, fd.eta);
            std::vector<CheckResult> checks;
            checks.push_back({"wdvv", w.ok, w.witness});
            LocalFunctional corr1 = genus1_correction(fd, Genus1Target{}, {});
            DiffPoly lifted = euler_apply(corr1.density + corr1.constant, 2);
            DiffPoly target = dp_zero(m.rank, pol);
            for (auto& [mono, c] : m.seed.density.p.terms())
                if (mono.hbar == 1 && mono.eps == 0) target.p.add_term(mono, c);
            bool match = functional_equal(integrate(lifted), integrate(target));
            checks.push_back({"first-order correction matches seed", match,
                              match ? "" : to_text(lifted - target)});
            out.emit(report_to_text(checks), report_to_json(checks).dump(2));
            for (auto& c : checks)
                if (!c.pass) return 1;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
