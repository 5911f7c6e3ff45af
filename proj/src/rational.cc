#include "drlab/rational.hpp"

#include <cctype>
#include <mutex>

namespace drlab {

std::string rat_str(const Rat& r) { return r.get_str(); }

std::string GaussianRational::str() const {
    if (is_zero()) return "0";
    std::string s;
    if (re != 0) s = rat_str(re);
    if (im != 0) {
        if (!s.empty()) s += im > 0 ? "+" : "-";
        else if (im < 0) s += "-";
        Rat a = abs(im);
        if (a == 1) s += "I";
        else s += rat_str(a) + "*I";
    }
    return s;
}

namespace {

// splits "a+b*I"-style text at the sign between the two parts
size_t find_split(const std::string& t) {
    for (size_t k = 1; k < t.size(); ++k)
        if ((t[k] == '+' || t[k] == '-') &&
            (std::isdigit(static_cast<unsigned char>(t[k - 1])) || t[k - 1] == 'I'))
            return k;
    return std::string::npos;
}

}  // namespace

GaussianRational parse_gq(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw arithmetic_error("empty coefficient");
    auto parse_part = [](std::string p, GaussianRational& out) {
        // p is like "3/4", "-3", "I", "-I", "5*I", "-2/7*I"
        bool imag = false;
        if (!p.empty() && p.back() == 'I') {
            imag = true;
            p.pop_back();
            if (!p.empty() && p.back() == '*') p.pop_back();
            if (p.empty() || p == "+") p = "1";
            else if (p == "-") p = "-1";
        }
        if (p.empty() || p == "+") p = "1";
        else if (p == "-") p = "-1";
        if (p.size() > 1 && p[0] == '+') p = p.substr(1);  // gmp rejects a leading '+'
        Rat r(p);
        r.canonicalize();
        if (imag) out.im += r;
        else out.re += r;
    };
    GaussianRational out;
    size_t split = find_split(t);
    if (split == std::string::npos) {
        parse_part(t, out);
    } else {
        parse_part(t.substr(0, split), out);
        parse_part(t.substr(split), out);
    }
    return out;
}

Rat bernoulli(unsigned n) {
    static std::vector<Rat> cache{Rat(1)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    // B_m = -1/(m+1) * sum_{k=0}^{m-1} C(m+1,k) B_k
    while (cache.size() <= n) {
        unsigned m = cache.size();
        Rat acc(0);
        Rat binom(1);  // C(m+1, k), starting at k=0
        for (unsigned k = 0; k < m; ++k) {
            if (k > 0) binom = binom * Rat(m + 2 - k) / Rat(k);
            acc += binom * cache[k];
        }
        cache.push_back(-acc / Rat(m + 1));
    }
    return cache[n];
}

}  // namespace drlab
