#include "drlab/trees.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace drlab {

int StableTree::root() const { return leg_vertex(0); }

int StableTree::leg_vertex(int marking) const {
    for (int v = 0; v < num_vertices(); ++v)
        for (int l : vertices[v].legs)
            if (l == marking) return v;
    throw invalid_move_error("leg marking not present: " + std::to_string(marking));
}

bool StableTree::is_stable() const {
    for (int v = 0; v < num_vertices(); ++v)
        if (2 * vertices[v].genus - 2 + valence(v) <= 0) return false;
    return true;
}

bool StableTree::is_tree() const {
    int edges = static_cast<int>(iota.size()) / 2;
    if (edges != num_vertices() - 1) return false;
    // connectivity via BFS over edges
    std::vector<bool> seen(num_vertices(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    int cnt = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int h : vertices[v].half_edges) {
            int w = half_home[iota[h]];
            if (!seen[w]) {
                seen[w] = true;
                ++cnt;
                stack.push_back(w);
            }
        }
    }
    return cnt == num_vertices();
}

std::vector<int> StableTree::parents() const {
    std::vector<int> par(num_vertices(), -2);
    int r0 = root();
    par[r0] = -1;
    std::vector<int> stack{r0};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int h : vertices[v].half_edges) {
            int w = half_home[iota[h]];
            if (par[w] == -2) {
                par[w] = v;
                stack.push_back(w);
            }
        }
    }
    return par;
}

std::vector<int> StableTree::descendants(int v) const {
    std::vector<int> par = parents();
    std::vector<int> out;
    for (int w = 0; w < num_vertices(); ++w) {
        int c = w;
        while (c != -1 && c != v) c = par[c];
        if (c == v) out.push_back(w);
    }
    return out;
}

int StableTree::r_descendant_sum(int v) const {
    int s = 0;
    for (int w : descendants(v)) s += r(w);
    return s;
}

std::string StableTree::canonical_form() const {
    std::vector<int> par = parents();
    std::function<std::string(int)> sig = [&](int v) -> std::string {
        std::vector<int> legs = vertices[v].legs;
        std::sort(legs.begin(), legs.end());
        std::vector<std::string> kids;
        for (int h : vertices[v].half_edges) {
            int w = half_home[iota[h]];
            if (par[w] == v) kids.push_back(sig(w));
        }
        std::sort(kids.begin(), kids.end());
        std::ostringstream os;
        os << "(g" << vertices[v].genus << "|";
        for (size_t i = 0; i < legs.size(); ++i) os << (i ? "," : "") << legs[i];
        os << "|";
        for (auto& k : kids) os << k;
        os << ")";
        return os.str();
    };
    return sig(root());
}

std::string StableTree::to_json() const {
    std::vector<int> par = parents();
    std::function<std::string(int)> emit = [&](int v) -> std::string {
        std::ostringstream os;
        os << "{\"genus\":" << vertices[v].genus << ",\"legs\":[";
        std::vector<int> legs = vertices[v].legs;
        std::sort(legs.begin(), legs.end());
        for (size_t i = 0; i < legs.size(); ++i) os << (i ? "," : "") << legs[i];
        os << "],\"children\":[";
        std::vector<std::string> kids;
        for (int h : vertices[v].half_edges) {
            int w = half_home[iota[h]];
            if (par[w] == v) kids.push_back(emit(w));
        }
        std::sort(kids.begin(), kids.end());
        for (size_t i = 0; i < kids.size(); ++i) os << (i ? "," : "") << kids[i];
        os << "]}";
        return os.str();
    };
    return emit(root());
}

namespace {

// all unlabeled trees on m labeled vertices as edge lists (Prufer sequences)
std::vector<std::vector<std::pair<int, int>>> labeled_trees(int m) {
    std::vector<std::vector<std::pair<int, int>>> out;
    if (m == 1) {
        out.push_back({});
        return out;
    }
    if (m == 2) {
        out.push_back({{0, 1}});
        return out;
    }
    std::vector<int> pruefer(m - 2, 0);
    while (true) {
        // decode
        std::vector<int> deg(m, 1);
        for (int p : pruefer) deg[p]++;
        std::vector<std::pair<int, int>> edges;
        std::set<int> leaves;
        for (int i = 0; i < m; ++i)
            if (deg[i] == 1) leaves.insert(i);
        std::vector<int> seq = pruefer;
        for (int p : seq) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            edges.push_back({leaf, p});
            if (--deg[p] == 1) leaves.insert(p);
        }
        int a = *leaves.begin(), b = *std::next(leaves.begin());
        edges.push_back({a, b});
        out.push_back(edges);
        // next sequence
        int k = m - 3;
        while (k >= 0 && pruefer[k] == m - 1) pruefer[k--] = 0;
        if (k < 0) break;
        pruefer[k]++;
    }
    return out;
}

// compositions of total into m non-negative parts
void compositions(int total, int m, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& sink) {
    if (m == 1) {
        cur.push_back(total);
        sink(cur);
        cur.pop_back();
        return;
    }
    for (int x = 0; x <= total; ++x) {
        cur.push_back(x);
        compositions(total - x, m - 1, cur, sink);
        cur.pop_back();
    }
}

bool admissible(const StableTree& t) {
    // (a) every vertex carries a positive-marking leg
    std::vector<int> mins(t.num_vertices(), -1);
    for (int v = 0; v < t.num_vertices(); ++v) {
        int mn = -1;
        for (int l : t.vertices[v].legs)
            if (l >= 1 && (mn < 0 || l < mn)) mn = l;
        if (mn < 0) return false;
        mins[v] = mn;
    }
    // (b) minimal markings increase away from the root
    std::vector<int> par = t.parents();
    for (int v = 0; v < t.num_vertices(); ++v)
        if (par[v] >= 0 && mins[par[v]] >= mins[v]) return false;
    return true;
}

}  // namespace

std::vector<StableTree> enumerate_trees(int g, int n, int m, bool admissible_only) {
    if (2 * g - 2 + (n + 1) <= 0) throw invalid_move_error("unstable (g, n)");
    std::vector<StableTree> out;
    std::set<std::string> seen;
    for (auto& edges : labeled_trees(m)) {
        // genus assignments
        std::vector<int> cur;
        compositions(g, m, cur, [&](const std::vector<int>& genera) {
            // leg assignments: each of legs 0..n to one of m vertices
            std::vector<int> assign(n + 1, 0);
            while (true) {
                StableTree t;
                t.vertices.resize(m);
                for (int v = 0; v < m; ++v) t.vertices[v].genus = genera[v];
                for (int l = 0; l <= n; ++l) t.vertices[assign[l]].legs.push_back(l);
                t.iota.resize(2 * edges.size());
                t.half_home.resize(2 * edges.size());
                for (size_t e = 0; e < edges.size(); ++e) {
                    int h1 = static_cast<int>(2 * e), h2 = static_cast<int>(2 * e + 1);
                    t.iota[h1] = h2;
                    t.iota[h2] = h1;
                    t.half_home[h1] = edges[e].first;
                    t.half_home[h2] = edges[e].second;
                    t.vertices[edges[e].first].half_edges.push_back(h1);
                    t.vertices[edges[e].second].half_edges.push_back(h2);
                }
                if (t.is_stable() && (!admissible_only || admissible(t))) {
                    std::string key = t.canonical_form();
                    if (seen.insert(key).second) out.push_back(t);
                }
                // next assignment
                int k = n;
                while (k >= 0 && assign[k] == m - 1) assign[k--] = 0;
                if (k < 0) break;
                assign[k]++;
            }
        });
    }
    return out;
}

Rat coefficient_C(const StableTree& t) {
    Rat c(1);
    for (int v = 0; v < t.num_vertices(); ++v)
        c *= Rat(t.r(v)) / Rat(t.r_descendant_sum(v));
    return c;
}

std::vector<Slot> downward_slots(const StableTree& t, int v) {
    std::vector<Slot> slots;
    std::vector<int> par = t.parents();
    for (int l : t.vertices[v].legs)
        if (l != 0) slots.push_back({true, l});
    for (int h : t.vertices[v].half_edges) {
        int w = t.half_home[t.iota[h]];
        if (par[w] == v) slots.push_back({false, h});
    }
    return slots;
}

StableTree split(const StableTree& t, int v, int g1, const std::vector<Slot>& I) {
    std::vector<Slot> all = downward_slots(t, v);
    for (auto& s : I)
        if (std::find(all.begin(), all.end(), s) == all.end())
            throw invalid_move_error("split: slot not at the vertex");
    int g2 = t.vertices[v].genus - g1;
    int ic = static_cast<int>(all.size() - I.size());
    if (g1 < 0 || g2 < 0) throw invalid_move_error("split: genus out of range");
    if (2 * g1 + static_cast<int>(I.size()) <= 0) throw invalid_move_error("split: unstable upper part");
    if (2 * g2 + ic - 1 <= 0) throw invalid_move_error("split: unstable lower part");

    StableTree r = t;
    r.vertices[v].genus = g1;
    StableTree::Vertex fresh;
    fresh.genus = g2;
    int w = r.num_vertices();
    // move the complement slots to the new vertex
    auto in_I = [&](const Slot& s) { return std::find(I.begin(), I.end(), s) != I.end(); };
    for (auto& s : all) {
        if (in_I(s)) continue;
        if (s.is_leg) {
            auto& legs = r.vertices[v].legs;
            legs.erase(std::find(legs.begin(), legs.end(), s.value));
            fresh.legs.push_back(s.value);
        } else {
            auto& hs = r.vertices[v].half_edges;
            hs.erase(std::find(hs.begin(), hs.end(), s.value));
            fresh.half_edges.push_back(s.value);
        }
    }
    r.vertices.push_back(fresh);
    for (auto& s : all)
        if (!s.is_leg && !in_I(s)) r.half_home[s.value] = w;
    // connect v and w by a new edge
    int h1 = static_cast<int>(r.iota.size()), h2 = h1 + 1;
    r.iota.push_back(h2);
    r.iota.push_back(h1);
    r.half_home.push_back(v);
    r.half_home.push_back(w);
    r.vertices[v].half_edges.push_back(h1);
    r.vertices[w].half_edges.push_back(h2);
    return r;
}

StableTree contract(const StableTree& t, int v, int h) {
    if (t.num_vertices() < 2) throw invalid_move_error("contract: single vertex");
    if (t.half_home[h] != v) throw invalid_move_error("contract: half-edge not at vertex");
    int w = t.half_home[t.iota[h]];
    StableTree r;
    // relabel vertices: w merges into v
    std::vector<int> remap(t.num_vertices());
    int idx = 0;
    for (int u = 0; u < t.num_vertices(); ++u) remap[u] = (u == w) ? -1 : idx++;
    remap[w] = remap[v];
    r.vertices.resize(t.num_vertices() - 1);
    // half-edge relabel: drop h and iota[h]
    std::vector<int> hmap(t.iota.size(), -1);
    int hidx = 0;
    for (int k = 0; k < static_cast<int>(t.iota.size()); ++k)
        if (k != h && k != t.iota[h]) hmap[k] = hidx++;
    r.iota.resize(hidx);
    r.half_home.resize(hidx);
    for (int u = 0; u < t.num_vertices(); ++u) {
        int nu = remap[u];
        auto& dst = r.vertices[nu];
        if (u == v || u == w) dst.genus += t.vertices[u].genus;
        else dst.genus = t.vertices[u].genus;
        for (int l : t.vertices[u].legs) dst.legs.push_back(l);
        for (int he : t.vertices[u].half_edges) {
            if (he == h || he == t.iota[h]) continue;
            dst.half_edges.push_back(hmap[he]);
            r.half_home[hmap[he]] = nu;
        }
    }
    for (int k = 0; k < static_cast<int>(t.iota.size()); ++k)
        if (hmap[k] >= 0) r.iota[hmap[k]] = hmap[t.iota[k]];
    return r;
}

bool coefficient_identity_check(const StableTree& t) {
    const int v = t.leg_vertex(1);
    std::vector<int> par = t.parents();
    // child half-edges at v and their subtree weights
    std::vector<int> child_edges;
    for (int h : t.vertices[v].half_edges)
        if (par[t.half_home[t.iota[h]]] == v) child_edges.push_back(h);
    Rat R(t.r_descendant_sum(v));
    Rat product(1);
    Rat hsum(0);
    for (int h : child_edges) {
        int child = t.half_home[t.iota[h]];
        Rat Rh(t.r_descendant_sum(child));
        product *= Rat(t.r(child)) / Rh;
        hsum += Rh / R;
    }
    // B over the remaining vertices
    std::set<int> skip{v};
    for (int h : child_edges) skip.insert(t.half_home[t.iota[h]]);
    Rat lhs;
    if (par[v] >= 0) {
        int up = par[v];
        skip.insert(up);
        Rat B(1);
        for (int u = 0; u < t.num_vertices(); ++u)
            if (!skip.count(u)) B *= Rat(t.r(u)) / Rat(t.r_descendant_sum(u));
        Rat Rtil(t.r_descendant_sum(up));
        lhs = B * (Rat(t.r(up)) / Rtil) * product * (Rat(1) - hsum);
    } else {
        Rat B(1);
        for (int u = 0; u < t.num_vertices(); ++u)
            if (!skip.count(u)) B *= Rat(t.r(u)) / Rat(t.r_descendant_sum(u));
        lhs = B * product * (Rat(1) - hsum);
    }
    return lhs == coefficient_C(t);
}

}  // namespace drlab
