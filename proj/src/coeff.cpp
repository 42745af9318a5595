#include "slft/coeff.hpp"

#include <algorithm>
#include <sstream>

namespace slft {

std::string to_string(const Rational &r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

std::string to_string(const CRational &c) {
    if (c.im == 0) return to_string(c.re);
    std::ostringstream os;
    if (c.re != 0) os << to_string(c.re) << (c.im > 0 ? "+" : "");
    if (c.im == 1)
        os << "i";
    else if (c.im == -1)
        os << "-i";
    else
        os << to_string(c.im) << "*i";
    return os.str();
}

bool Coeff::operator<(const Coeff &o) const {
    auto key = [](const Coeff &c) {
        std::vector<std::pair<Monomial, std::pair<Rational, Rational>>> v;
        for (auto &[m, q] : c.terms) v.push_back({m, {q.re, q.im}});
        return v;
    };
    return key(*this) < key(o);
}

Coeff Coeff::substitute(const std::string &sym, const Coeff &value) const {
    Coeff out;
    for (const auto &[m, c] : terms) {
        int d = m.degree_in(sym);
        Monomial rest = m;
        rest.exp.erase(sym);
        Coeff base;
        base.terms[rest] = c;
        if (d == 0) {
            out += base;
            continue;
        }
        if (d < 0) {
            if (!value.is_monomial())
                throw std::domain_error("Coeff::substitute: negative power of non-monomial value");
            Coeff inv = Coeff(1).div_monomial(value);
            for (int k = 0; k < -d; ++k) base *= inv;
        } else {
            for (int k = 0; k < d; ++k) base *= value;
        }
        out += base;
    }
    return out;
}

std::pair<int, int> Coeff::degree_range(const std::string &sym) const {
    if (terms.empty()) return {0, 0};
    int lo = terms.begin()->first.degree_in(sym), hi = lo;
    for (const auto &[m, c] : terms) {
        int d = m.degree_in(sym);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

bool Coeff::depends_on(const std::string &sym) const {
    for (const auto &[m, c] : terms)
        if (m.degree_in(sym) != 0) return true;
    return false;
}

void Coeff::collect_linear(const std::vector<std::string> &unknowns, Coeff &a0,
                           std::vector<Coeff> &ak) const {
    a0 = Coeff();
    ak.assign(unknowns.size(), Coeff());
    for (const auto &[m, c] : terms) {
        int found = -1;
        for (size_t k = 0; k < unknowns.size(); ++k) {
            int d = m.degree_in(unknowns[k]);
            if (d == 0) continue;
            if (d != 1 || found >= 0)
                throw std::domain_error("collect_linear: unknown appears nonlinearly");
            found = (int)k;
        }
        Monomial rest = m;
        Coeff piece;
        if (found >= 0) rest.exp.erase(unknowns[found]);
        piece.terms[rest] = c;
        if (found >= 0)
            ak[found] += piece;
        else
            a0 += piece;
    }
}

std::string Coeff::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, c] : terms) {
        std::ostringstream t;
        bool neg = false;
        CRational v = c;
        if (v.im == 0 && v.re < 0) {
            neg = true;
            v = -v;
        }
        std::string cs = to_string(v);
        bool unit = (cs == "1") && !m.is_one();
        if (!unit) {
            if (v.im != 0 && v.re != 0)
                t << "(" << cs << ")";
            else
                t << cs;
        }
        for (const auto &[s, e] : m.exp) {
            if (t.tellp() > 0) t << "*";
            t << s;
            if (e != 1) t << "^" << e;
        }
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        os << t.str();
        first = false;
    }
    return os.str();
}

void RatFunc::reduce_monomial() {
    if (num.is_zero()) {
        den = Coeff(1);
        return;
    }
    // Pull the shared monomial content out of num and den.
    auto content = [](const Coeff &c) {
        Monomial m = c.terms.begin()->first;
        for (const auto &[tm, tc] : c.terms) {
            for (auto it = m.exp.begin(); it != m.exp.end();) {
                int d = tm.degree_in(it->first);
                int keep = std::min(it->second, d);
                if (keep == 0)
                    it = m.exp.erase(it);
                else {
                    it->second = keep;
                    ++it;
                }
            }
        }
        return m;
    };
    Monomial cn = content(num), cd = content(den);
    Monomial shared;
    for (auto &[s, e] : cn.exp) {
        int d = cd.degree_in(s);
        int keep = std::min(e, d);
        if (keep > 0) shared.exp[s] = keep;
    }
    if (!shared.exp.empty()) {
        Coeff div;
        div.terms[shared] = CRational(1);
        num = num.div_monomial(div);
        den = den.div_monomial(div);
    }
    // Normalize the leading denominator coefficient to 1.
    Coeff lead;
    lead.terms[den.terms.begin()->first] = den.terms.begin()->second;
    Coeff scale;
    scale.terms[Monomial{}] = den.terms.begin()->second;
    num = num.div_monomial(Coeff(scale));
    den = den.div_monomial(Coeff(scale));
}

bool RatFunc::to_coeff(Coeff &out) const {
    if (num.is_zero()) {
        out = Coeff();
        return true;
    }
    if (den.is_monomial()) {
        out = num.div_monomial(den);
        return true;
    }
    return false;
}

} // namespace slft
