#include "slft/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slft {

std::string TensorTerm::key() const {
    std::ostringstream os;
    for (const auto &a : cover) os << int(a.kind) << ":" << a.dir << ":" << a.partner << ";";
    os << "|p2=" << p2;
    for (auto &[k, n] : pe) os << "|pe" << k << "^" << n;
    for (auto &[jk, n] : ee) os << "|ee" << jk.first << "," << jk.second << "^" << n;
    for (auto &[ko, n] : epsden) os << "|ed" << ko.first << (ko.second > 0 ? "+" : "-") << "^" << n;
    if (feyn) os << "|fd(" << feyn_mass << ")^" << feyn;
    if (contact) os << "|C";
    return os.str();
}

TensorExpr TensorExpr::scalar(Coeff c) {
    TensorExpr e;
    if (!c.is_zero()) {
        TensorTerm t;
        t.coeff = std::move(c);
        e.terms.push_back(std::move(t));
    }
    return e;
}

TensorExpr TensorExpr::zero(std::vector<std::string> s) { return TensorExpr(std::move(s)); }

TensorExpr TensorExpr::eta(const std::string &a, const std::string &b) {
    TensorExpr e({a, b});
    TensorTerm t;
    t.cover = {SlotAtom{SlotAtom::Eta, -1, 1}, SlotAtom{SlotAtom::Eta, -1, 0}};
    e.terms.push_back(std::move(t));
    return e;
}

TensorExpr TensorExpr::momentum(const std::string &slot) {
    TensorExpr e({slot});
    TensorTerm t;
    t.cover = {SlotAtom{SlotAtom::P, -1, -1}};
    e.terms.push_back(std::move(t));
    return e;
}

TensorExpr TensorExpr::direction(int k, const std::string &slot) {
    TensorExpr e({slot});
    TensorTerm t;
    t.cover = {SlotAtom{SlotAtom::Dir, k, -1}};
    e.terms.push_back(std::move(t));
    return e;
}

TensorExpr TensorExpr::inv_p2() {
    TensorExpr e;
    TensorTerm t;
    t.p2 = 1;
    e.terms.push_back(std::move(t));
    return e;
}

TensorExpr TensorExpr::inv_pe(int k) {
    TensorExpr e;
    TensorTerm t;
    t.pe[k] = 1;
    e.terms.push_back(std::move(t));
    return e;
}

TensorExpr TensorExpr::inv_ee(int j, int k) {
    TensorExpr e;
    TensorTerm t;
    t.ee[{std::min(j, k), std::max(j, k)}] = 1;
    e.terms.push_back(std::move(t));
    return e;
}

TensorExpr TensorExpr::eps_den(int k, int orient) {
    TensorExpr e;
    TensorTerm t;
    t.epsden[{k, orient >= 0 ? 1 : -1}] = 1;
    e.terms.push_back(std::move(t));
    return e;
}

TensorExpr TensorExpr::feyn_den(const std::string &mass) {
    TensorExpr e;
    TensorTerm t;
    t.feyn = 1;
    t.feyn_mass = mass;
    e.terms.push_back(std::move(t));
    return e;
}

// (p.e)*(p.e + o*ieps)^-1 = 1 as distributions; safe while only one
// orientation of a label appears in the term.
static void normalize_term(TensorTerm &t) {
    for (auto it = t.pe.begin(); it != t.pe.end();) {
        int k = it->first;
        auto plus = t.epsden.find({k, 1});
        auto minus = t.epsden.find({k, -1});
        if (plus != t.epsden.end() && minus != t.epsden.end())
            throw StructuralError("mixed eps orientations with numerator on one string label");
        auto den = plus != t.epsden.end() ? plus : minus;
        if (den != t.epsden.end() && it->second > 0) {
            int c = std::min(it->second, den->second);
            it->second -= c;
            den->second -= c;
            if (den->second == 0) t.epsden.erase(den);
        }
        if (it->second == 0)
            it = t.pe.erase(it);
        else
            ++it;
    }
}

void TensorExpr::sort_merge() {
    for (auto &t : terms) normalize_term(t);
    std::vector<std::pair<std::string, size_t>> keys;
    keys.reserve(terms.size());
    for (size_t i = 0; i < terms.size(); ++i) keys.push_back({terms[i].key(), i});
    std::sort(keys.begin(), keys.end());
    std::vector<TensorTerm> out;
    for (size_t i = 0; i < keys.size();) {
        TensorTerm t = terms[keys[i].second];
        size_t j = i + 1;
        while (j < keys.size() && keys[j].first == keys[i].first) {
            t.coeff += terms[keys[j].second].coeff;
            ++j;
        }
        if (!t.coeff.is_zero()) out.push_back(std::move(t));
        i = j;
    }
    terms = std::move(out);
}

void TensorExpr::push_term(TensorTerm t) {
    if (t.coeff.is_zero()) return;
    terms.push_back(std::move(t));
}

TensorExpr TensorExpr::operator-() const {
    TensorExpr r = *this;
    for (auto &t : r.terms) t.coeff = -t.coeff;
    return r;
}

TensorExpr TensorExpr::operator+(const TensorExpr &o) const {
    if (slots != o.slots) {
        if (slots.size() != o.slots.size())
            throw StructuralError("TensorExpr+: slot mismatch");
        // allow addition with identical slot sets in different order
        return *this + o.reorder_slots(slots);
    }
    TensorExpr r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    r.sort_merge();
    return r;
}

TensorExpr TensorExpr::operator-(const TensorExpr &o) const { return *this + (-o); }

TensorExpr TensorExpr::operator*(const Coeff &c) const {
    TensorExpr r = *this;
    if (c.is_zero()) {
        r.terms.clear();
        return r;
    }
    for (auto &t : r.terms) t.coeff *= c;
    return r;
}

static TensorTerm merge_scalars(const TensorTerm &a, const TensorTerm &b) {
    TensorTerm t;
    t.coeff = a.coeff * b.coeff;
    t.p2 = a.p2 + b.p2;
    t.pe = a.pe;
    for (auto &[k, n] : b.pe) t.pe[k] += n;
    t.ee = a.ee;
    for (auto &[k, n] : b.ee) t.ee[k] += n;
    t.epsden = a.epsden;
    for (auto &[k, n] : b.epsden) t.epsden[k] += n;
    t.feyn = a.feyn + b.feyn;
    if (a.feyn && b.feyn && a.feyn_mass != b.feyn_mass)
        throw StructuralError("TensorExpr*: mixed Feynman denominators in one term");
    t.feyn_mass = a.feyn ? a.feyn_mass : b.feyn_mass;
    t.contact = a.contact || b.contact;
    return t;
}

TensorExpr TensorExpr::operator*(const TensorExpr &o) const {
    for (const auto &s : o.slots)
        if (std::find(slots.begin(), slots.end(), s) != slots.end())
            throw StructuralError("TensorExpr*: duplicate slot " + s);
    TensorExpr r;
    r.slots = slots;
    r.slots.insert(r.slots.end(), o.slots.begin(), o.slots.end());
    size_t na = slots.size();
    for (const auto &ta : terms)
        for (const auto &tb : o.terms) {
            TensorTerm t = merge_scalars(ta, tb);
            t.cover = ta.cover;
            for (auto atom : tb.cover) {
                if (atom.kind == SlotAtom::Eta) atom.partner += (int)na;
                t.cover.push_back(atom);
            }
            r.terms.push_back(std::move(t));
        }
    r.sort_merge();
    return r;
}

bool TensorExpr::operator==(const TensorExpr &o) const {
    if (slots == o.slots) return terms == o.terms ? true : (*this - o).is_zero();
    if (slots.size() != o.slots.size()) return false;
    return (*this - o.reorder_slots(slots)).is_zero();
}

void TensorExpr::contract_atoms(TensorTerm &t, size_t ia, size_t ib,
                                const std::vector<std::string> &) {
    SlotAtom A = t.cover[ia], B = t.cover[ib];
    auto add_pe = [&](int k) { t.pe[k] += 1; };
    auto add_ee = [&](int j, int k) { t.ee[{std::min(j, k), std::max(j, k)}] += 1; };

    // Self-contracted metric: trace in d = 4.
    if (A.kind == SlotAtom::Eta && A.partner == (int)ib) {
        t.coeff *= Coeff(4);
    } else if (A.kind == SlotAtom::Eta && B.kind == SlotAtom::Eta) {
        // eta(a,x) eta(b,y) contracted over (a,b) -> eta(x,y)
        t.cover[A.partner].partner = B.partner;
        t.cover[B.partner].partner = A.partner;
    } else if (A.kind == SlotAtom::Eta) {
        t.cover[A.partner] = B;
        if (B.kind == SlotAtom::Eta) t.cover[B.partner].partner = A.partner;
    } else if (B.kind == SlotAtom::Eta) {
        t.cover[B.partner] = A;
        if (A.kind == SlotAtom::Eta) t.cover[A.partner].partner = B.partner;
    } else if (A.kind == SlotAtom::P && B.kind == SlotAtom::P) {
        t.p2 += 1;
    } else if (A.kind == SlotAtom::P && B.kind == SlotAtom::Dir) {
        add_pe(B.dir);
    } else if (A.kind == SlotAtom::Dir && B.kind == SlotAtom::P) {
        add_pe(A.dir);
    } else {
        add_ee(A.dir, B.dir);
    }

    // Remove the two contracted cover entries, fixing eta partner offsets.
    std::vector<size_t> rm = {std::min(ia, ib), std::max(ia, ib)};
    std::vector<SlotAtom> nc;
    nc.reserve(t.cover.size() - 2);
    std::vector<int> newpos(t.cover.size(), -1);
    int pos = 0;
    for (size_t i = 0; i < t.cover.size(); ++i) {
        if (i == rm[0] || i == rm[1]) continue;
        newpos[i] = pos++;
        nc.push_back(t.cover[i]);
    }
    for (auto &a : nc)
        if (a.kind == SlotAtom::Eta) a.partner = newpos[a.partner];
    t.cover = std::move(nc);
}

TensorExpr TensorExpr::contract(const std::string &a, const std::string &b) const {
    auto ita = std::find(slots.begin(), slots.end(), a);
    auto itb = std::find(slots.begin(), slots.end(), b);
    if (ita == slots.end() || itb == slots.end() || a == b)
        throw StructuralError("contract: bad slots " + a + "," + b);
    size_t ia = ita - slots.begin(), ib = itb - slots.begin();
    TensorExpr r;
    for (size_t i = 0; i < slots.size(); ++i)
        if (i != ia && i != ib) r.slots.push_back(slots[i]);
    for (auto t : terms) {
        // Special case: contracting the two legs of one eta with each other
        // is handled inside contract_atoms via the trace rule.
        contract_atoms(t, ia, ib, slots);
        r.terms.push_back(std::move(t));
    }
    r.sort_merge();
    return r;
}

TensorExpr TensorExpr::rename_slot(const std::string &from, const std::string &to) const {
    TensorExpr r = *this;
    for (auto &s : r.slots)
        if (s == from) s = to;
    return r;
}

TensorExpr TensorExpr::reorder_slots(const std::vector<std::string> &order) const {
    if (order.size() != slots.size()) throw StructuralError("reorder_slots: size mismatch");
    std::vector<size_t> perm(order.size()); // perm[new] = old
    for (size_t i = 0; i < order.size(); ++i) {
        auto it = std::find(slots.begin(), slots.end(), order[i]);
        if (it == slots.end()) throw StructuralError("reorder_slots: unknown slot " + order[i]);
        perm[i] = it - slots.begin();
    }
    std::vector<int> inv(order.size());
    for (size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = (int)i;
    TensorExpr r;
    r.slots = order;
    for (const auto &t : terms) {
        TensorTerm nt = t;
        for (size_t i = 0; i < perm.size(); ++i) {
            nt.cover[i] = t.cover[perm[i]];
            if (nt.cover[i].kind == SlotAtom::Eta) nt.cover[i].partner = inv[nt.cover[i].partner];
        }
        r.terms.push_back(std::move(nt));
    }
    r.sort_merge();
    return r;
}

TensorExpr TensorExpr::conj() const {
    TensorExpr r = *this;
    for (auto &t : r.terms) {
        t.coeff = t.coeff.conj();
        std::map<std::pair<int, int>, int> ed;
        for (auto &[ko, n] : t.epsden) ed[{ko.first, -ko.second}] = n;
        t.epsden = std::move(ed);
    }
    r.sort_merge();
    return r;
}

TensorExpr TensorExpr::on_shell(const std::string &mass) const {
    TensorExpr r;
    r.slots = slots;
    for (auto t : terms) {
        if (t.p2 > 0) {
            if (mass.empty()) continue; // p^2 -> 0
            t.coeff *= Coeff::symbol(mass, 2 * t.p2);
            t.p2 = 0;
        }
        r.terms.push_back(std::move(t));
    }
    r.sort_merge();
    return r;
}

TensorExpr TensorExpr::set_e_squared(int k, int value) const {
    TensorExpr r;
    r.slots = slots;
    for (auto t : terms) {
        auto it = t.ee.find({k, k});
        if (it != t.ee.end()) {
            int n = it->second;
            t.ee.erase(it);
            if (value == 0) continue;
            if (value < 0 && (n % 2)) t.coeff = -t.coeff;
        }
        r.terms.push_back(std::move(t));
    }
    r.sort_merge();
    return r;
}

TensorExpr TensorExpr::substitute(const std::string &sym, const Coeff &value) const {
    TensorExpr r;
    r.slots = slots;
    for (auto t : terms) {
        t.coeff = t.coeff.substitute(sym, value);
        if (!t.coeff.is_zero()) r.terms.push_back(std::move(t));
    }
    r.sort_merge();
    return r;
}

std::pair<int, int> TensorExpr::p_degree() const {
    if (terms.empty()) return {0, 0};
    bool first = true;
    int lo = 0, hi = 0;
    for (const auto &t : terms) {
        int d = 2 * t.p2 - 2 * t.feyn;
        for (const auto &a : t.cover)
            if (a.kind == SlotAtom::P) d += 1;
        for (auto &[k, n] : t.pe) d += n;
        for (auto &[ko, n] : t.epsden) d -= n;
        if (first || d < lo) lo = d;
        if (first || d > hi) hi = d;
        first = false;
    }
    return {lo, hi};
}

std::pair<int, int> TensorExpr::e_degree(int k) const {
    if (terms.empty()) return {0, 0};
    bool first = true;
    int lo = 0, hi = 0;
    for (const auto &t : terms) {
        int d = 0;
        for (const auto &a : t.cover)
            if (a.kind == SlotAtom::Dir && a.dir == k) d += 1;
        auto it = t.pe.find(k);
        if (it != t.pe.end()) d += it->second;
        for (auto &[jk, n] : t.ee) {
            if (jk.first == k) d += n;
            if (jk.second == k) d += n;
        }
        for (auto &[ko, n] : t.epsden)
            if (ko.first == k) d -= n;
        if (first || d < lo) lo = d;
        if (first || d > hi) hi = d;
        first = false;
    }
    return {lo, hi};
}

std::pair<int, int> TensorExpr::mass_degree(const std::string &sym) const {
    if (terms.empty()) return {0, 0};
    bool first = true;
    int lo = 0, hi = 0;
    for (const auto &t : terms) {
        auto [clo, chi] = t.coeff.degree_range(sym);
        if (first || clo < lo) lo = clo;
        if (first || chi > hi) hi = chi;
        first = false;
    }
    return {lo, hi};
}

TensorExpr TensorExpr::smooth_part() const {
    TensorExpr r;
    r.slots = slots;
    for (const auto &t : terms)
        if (t.feyn > 0 && !t.contact) r.terms.push_back(t);
    return r;
}

TensorExpr TensorExpr::contact_part() const {
    TensorExpr r;
    r.slots = slots;
    for (const auto &t : terms)
        if (t.feyn == 0 || t.contact) r.terms.push_back(t);
    return r;
}

TensorExpr TensorExpr::mul_p2_minus_m2(const std::string &mass) const {
    TensorExpr r;
    r.slots = slots;
    for (const auto &t : terms) {
        if (t.feyn > 0 && t.feyn_mass == mass) {
            TensorTerm nt = t;
            nt.feyn -= 1;
            if (nt.feyn == 0) nt.feyn_mass.clear();
            r.terms.push_back(std::move(nt));
        } else {
            TensorTerm a = t;
            a.p2 += 1;
            r.terms.push_back(std::move(a));
            if (!mass.empty()) {
                TensorTerm b = t;
                b.coeff *= -Coeff::symbol(mass, 2);
                r.terms.push_back(std::move(b));
            }
        }
    }
    r.sort_merge();
    return r;
}

static std::string slot_name(const TensorExpr &e, size_t i) { return e.slots[i]; }

std::string TensorExpr::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool firstterm = true;
    for (const auto &t : terms) {
        if (!firstterm) os << " + ";
        firstterm = false;
        os << "(" << t.coeff.str() << ")";
        std::vector<bool> done(t.cover.size(), false);
        for (size_t i = 0; i < t.cover.size(); ++i) {
            if (done[i]) continue;
            const auto &a = t.cover[i];
            if (a.kind == SlotAtom::Eta) {
                os << "*eta[" << slot_name(*this, i) << "," << slot_name(*this, a.partner) << "]";
                done[a.partner] = true;
            } else if (a.kind == SlotAtom::P) {
                os << "*p[" << slot_name(*this, i) << "]";
            } else {
                os << "*e" << a.dir << "[" << slot_name(*this, i) << "]";
            }
        }
        if (t.p2) os << "*(p.p)^" << t.p2;
        for (auto &[k, n] : t.pe) os << "*(p.e" << k << ")^" << n;
        for (auto &[jk, n] : t.ee) os << "*(e" << jk.first << ".e" << jk.second << ")^" << n;
        for (auto &[ko, n] : t.epsden)
            os << "*(p.e" << ko.first << (ko.second > 0 ? "+ie" : "-ie") << ")^-" << n;
        if (t.feyn)
            os << "*(p^2-" << (t.feyn_mass.empty() ? "0" : t.feyn_mass + "^2") << "+ie)^-" << t.feyn;
        if (t.contact) os << "*delta";
    }
    return os.str();
}

std::string TensorExpr::latex() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &t : terms) {
        std::string c = t.coeff.str();
        if (!first) os << " + ";
        first = false;
        os << "\\left(" << c << "\\right)";
        std::vector<bool> done(t.cover.size(), false);
        for (size_t i = 0; i < t.cover.size(); ++i) {
            if (done[i]) continue;
            const auto &a = t.cover[i];
            if (a.kind == SlotAtom::Eta) {
                os << "\\eta_{" << slots[i] << " " << slots[a.partner] << "}";
                done[a.partner] = true;
            } else if (a.kind == SlotAtom::P) {
                os << "p_{" << slots[i] << "}";
            } else {
                os << "e" << (a.dir ? "'" : "") << "_{" << slots[i] << "}";
            }
        }
        if (t.p2) os << "(p\\cdot p)^{" << t.p2 << "}";
        for (auto &[k, n] : t.pe) os << "(p\\cdot e" << (k ? "'" : "") << ")^{" << n << "}";
        for (auto &[jk, n] : t.ee)
            os << "(e" << (jk.first ? "'" : "") << "\\cdot e" << (jk.second ? "'" : "") << ")^{" << n
               << "}";
        for (auto &[ko, n] : t.epsden)
            os << "(p\\cdot e" << (ko.first ? "'" : "") << ")_{i\\varepsilon}^{-" << n << "}";
        if (t.feyn) os << "\\Delta_F^{" << t.feyn << "}";
        if (t.contact) os << "\\,\\delta";
    }
    return os.str();
}

double minkowski_dot(const FourVec &a, const FourVec &b) {
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

size_t tensor_size(const TensorExpr &ex) {
    size_t n = 1;
    for (size_t i = 0; i < ex.n_slots(); ++i) n *= 4;
    return n;
}

std::vector<std::complex<double>> eval_numeric(const TensorExpr &ex, const NumericAssignment &as) {
    const size_t N = tensor_size(ex);
    std::vector<std::complex<double>> out(N, 0.0);

    auto sym_val = [&](const std::string &s) {
        auto it = as.symbols.find(s);
        if (it == as.symbols.end())
            throw SingularEvaluation("eval_numeric: missing symbol value " + s);
        return it->second;
    };
    auto evec = [&](int k) -> const FourVec & {
        auto it = as.e.find(k);
        if (it == as.e.end()) throw SingularEvaluation("eval_numeric: missing direction e" + std::to_string(k));
        return it->second;
    };

    for (const auto &t : ex.terms) {
        std::complex<double> base(0.0, 0.0);
        // coefficient
        for (const auto &[m, c] : t.coeff.terms) {
            double mono = 1.0;
            for (const auto &[s, p] : m.exp) mono *= std::pow(sym_val(s), p);
            base += mono * std::complex<double>(c.re.convert_to<double>(), c.im.convert_to<double>());
        }
        double scal = 1.0;
        if (t.p2) scal *= std::pow(minkowski_dot(as.p, as.p), t.p2);
        for (auto &[k, n] : t.pe) scal *= std::pow(minkowski_dot(as.p, evec(k)), n);
        for (auto &[jk, n] : t.ee) scal *= std::pow(minkowski_dot(evec(jk.first), evec(jk.second)), n);
        for (auto &[ko, n] : t.epsden) {
            double d = minkowski_dot(as.p, evec(ko.first));
            if (std::fabs(d) < 1e-12)
                throw SingularEvaluation("eval_numeric: p.e vanishes (string-singular configuration)");
            scal /= std::pow(d, n);
        }
        if (t.feyn) {
            double m2 = t.feyn_mass.empty() ? 0.0 : std::pow(sym_val(t.feyn_mass), 2);
            double d = minkowski_dot(as.p, as.p) - m2;
            if (std::fabs(d) < 1e-12)
                throw SingularEvaluation("eval_numeric: on-shell Feynman denominator");
            scal /= std::pow(d, t.feyn);
        }
        base *= scal;

        // distribute over free-index components
        size_t nslots = ex.n_slots();
        std::vector<int> idx(nslots, 0);
        for (size_t flat = 0; flat < N; ++flat) {
            size_t rest = flat;
            for (size_t i = nslots; i-- > 0;) {
                idx[i] = int(rest % 4);
                rest /= 4;
            }
            double f = 1.0;
            bool zero = false;
            std::vector<bool> done(nslots, false);
            for (size_t i = 0; i < nslots && !zero; ++i) {
                if (done[i]) continue;
                const auto &a = t.cover[i];
                if (a.kind == SlotAtom::Eta) {
                    done[a.partner] = true;
                    if (idx[i] != idx[a.partner])
                        zero = true;
                    else
                        f *= kMetricDiag[idx[i]];
                } else if (a.kind == SlotAtom::P) {
                    f *= kMetricDiag[idx[i]] * as.p[idx[i]]; // lower index
                } else {
                    f *= kMetricDiag[idx[i]] * evec(a.dir)[idx[i]];
                }
            }
            if (!zero) out[flat] += base * f;
        }
    }
    return out;
}

} // namespace slft
