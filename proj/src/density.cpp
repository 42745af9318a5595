#include "slft/density.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace slft {

SpeciesId FieldModel::add(Species s) {
    if (!s.mass.empty() &&
        std::find(mass_symbols.begin(), mass_symbols.end(), s.mass) == mass_symbols.end())
        mass_symbols.push_back(s.mass);
    species.push_back(std::move(s));
    return (SpeciesId)species.size() - 1;
}

SpeciesId FieldModel::find(const std::string &name) const {
    for (size_t i = 0; i < species.size(); ++i)
        if (species[i].name == name) return (SpeciesId)i;
    return -1;
}

std::map<Member, SpeciesId> FieldModel::add_family(int spin, const std::string &mass,
                                                   const std::string &prefix, bool complex_field,
                                                   int color) {
    FieldFamily fam = build_family(spin, mass);
    int famidx = (int)families.size();
    families.push_back(fam);
    std::map<Member, SpeciesId> out;
    std::string suffix = color ? std::to_string(color) : "";
    auto mk = [&](Member m, const std::string &nm, int rank, int deng) {
        Species s;
        s.name = nm + suffix;
        s.base_name = nm;
        s.rank = rank;
        s.mass = mass;
        s.complex_field = complex_field;
        s.stringlocal = true;
        s.d_eng = deng;
        s.family = famidx;
        s.member = m;
        s.color = color;
        s.kg_coeff = mass.empty() ? Coeff(0) : -(Coeff::symbol(mass, 2));
        return s;
    };
    bool massive = !mass.empty();
    if (spin == 0) {
        Species s = mk(Member::Scalar, prefix, 0, 1);
        s.stringlocal = false;
        out[Member::Scalar] = add(s);
        return out;
    }
    if (spin == 1) {
        if (massive) {
            Species ap = mk(Member::ProcaP, prefix + "p", 1, 1);
            ap.stringlocal = false;
            ap.has_div_rule = true;
            ap.div_rule = {Coeff(0), -1}; // d.A^P = 0
            out[Member::ProcaP] = add(ap);

            Species F = mk(Member::FieldStrength, "F" + prefix, 2, 2);
            F.stringlocal = false;
            F.sym = Sym2::Antisymmetric;
            out[Member::FieldStrength] = add(F);

            Species ph = mk(Member::EscortPhi, prefix + "_phi", 0, 0);
            out[Member::EscortPhi] = add(ph);

            Species u = mk(Member::DeSitterU, prefix + "_u", 0, 0);
            out[Member::DeSitterU] = add(u);

            Species A = mk(Member::SLPotential, prefix, 1, 1);
            out[Member::SLPotential] = add(A);

            Species a = mk(Member::EscortA, prefix + "_a", 0, 1);
            out[Member::EscortA] = add(a);

            // rules that need the ids
            species[out[Member::SLPotential]].has_div_rule = true;
            species[out[Member::SLPotential]].div_rule = {
                -(Coeff::symbol(mass, 2)), out[Member::EscortPhi]}; // d.A = -m^2 phi
            species[out[Member::FieldStrength]].has_div_rule = true;
            species[out[Member::FieldStrength]].div_rule = {
                -(Coeff::symbol(mass, 2)), out[Member::ProcaP]}; // d^mu F_{mu nu} = -m^2 A^P_nu
            species[out[Member::EscortA]].subst = {Coeff::symbol(mass, 1),
                                                   out[Member::EscortPhi]}; // a = m phi
            // d_e rules
            species[out[Member::EscortPhi]].de_rule =
                std::vector<DeRuleTerm>{{Coeff(1), out[Member::DeSitterU], {}}};
            species[out[Member::DeSitterU]].de_rule = std::vector<DeRuleTerm>{}; // d_e u = 0
            species[out[Member::SLPotential]].de_rule =
                std::vector<DeRuleTerm>{{Coeff(1), out[Member::DeSitterU], {-1}}}; // d_e A = d u
            species[out[Member::ProcaP]].de_rule = std::vector<DeRuleTerm>{};
            species[out[Member::FieldStrength]].de_rule = std::vector<DeRuleTerm>{};
        } else {
            Species F = mk(Member::FieldStrength, "F" + prefix, 2, 2);
            F.stringlocal = false;
            F.sym = Sym2::Antisymmetric;
            F.has_div_rule = true;
            F.div_rule = {Coeff(0), -1};
            out[Member::FieldStrength] = add(F);
            Species A = mk(Member::SLPotential, prefix, 1, 1);
            A.has_div_rule = true;
            A.div_rule = {Coeff(0), -1}; // Lorentz condition, massless
            out[Member::SLPotential] = add(A);
        }
        return out;
    }
    if (spin == 2) {
        if (massive) {
            Species ap = mk(Member::ProcaP, prefix + "p", 2, 1);
            ap.stringlocal = false;
            ap.sym = Sym2::Symmetric;
            ap.traceless = true;
            ap.has_div_rule = true;
            ap.div_rule = {Coeff(0), -1};
            out[Member::ProcaP] = add(ap);

            Species A = mk(Member::SLPotential, prefix, 2, 1);
            A.sym = Sym2::Symmetric;
            out[Member::SLPotential] = add(A);
            Species a1 = mk(Member::EscortVec, prefix + "_a1", 1, 1);
            out[Member::EscortVec] = add(a1);
            Species a0 = mk(Member::EscortScal, prefix + "_a0", 0, 1);
            out[Member::EscortScal] = add(a0);

            species[out[Member::SLPotential]].has_div_rule = true;
            species[out[Member::SLPotential]].div_rule = {-(Coeff::symbol(mass, 1)),
                                                          out[Member::EscortVec]};
            species[out[Member::EscortVec]].has_div_rule = true;
            species[out[Member::EscortVec]].div_rule = {-(Coeff::symbol(mass, 1)),
                                                        out[Member::EscortScal]};
        } else {
            // massless helicity-2 potential h := A^(2) with its escorts
            Species h = mk(Member::SLPotential, prefix, 2, 1);
            h.sym = Sym2::Symmetric;
            h.traceless = true;
            h.has_div_rule = true;
            h.div_rule = {Coeff(0), -1};
            out[Member::SLPotential] = add(h);
            Species a1 = mk(Member::EscortVec, prefix + "_a", 1, 1);
            a1.has_div_rule = true;
            a1.div_rule = {Coeff(0), -1};
            out[Member::EscortVec] = add(a1);
            // d_e h_{mu nu} = d_mu a_nu + d_nu a_mu
            species[out[Member::SLPotential]].de_rule = std::vector<DeRuleTerm>{
                {Coeff(1), out[Member::EscortVec], {-1, 0}},
                {Coeff(1), out[Member::EscortVec], {0, -1}}};
            species[out[Member::EscortVec]].de_rule = std::nullopt;
        }
        return out;
    }
    throw UnsupportedSpin("add_family: unsupported spin");
}

int FieldModel::mass_degree_lo(const Coeff &c) const {
    int d = 0;
    bool first = true;
    for (const auto &[m, q] : c.terms) {
        int t = 0;
        for (const auto &ms : mass_symbols) t += m.degree_in(ms);
        if (first || t < d) d = t;
        first = false;
    }
    return d;
}

int FieldModel::mass_degree_hi(const Coeff &c) const {
    int d = 0;
    bool first = true;
    for (const auto &[m, q] : c.terms) {
        int t = 0;
        for (const auto &ms : mass_symbols) t += m.degree_in(ms);
        if (first || t > d) d = t;
        first = false;
    }
    return d;
}

bool is_dummy(const std::string &idx) { return !idx.empty() && idx[0] == '#'; }

Density Density::monomial(DensityMonomial m, std::vector<std::string> fs) {
    Density d(std::move(fs));
    d.monos.push_back(std::move(m));
    return d;
}

Density Density::operator-() const {
    Density r = *this;
    for (auto &m : r.monos) m.coeff = -m.coeff;
    return r;
}

Density Density::operator+(const Density &o) const {
    Density r = *this;
    if (free_slots != o.free_slots) {
        if (free_slots.empty() && monos.empty()) {
            r.free_slots = o.free_slots;
        } else if (!(o.free_slots.empty() && o.monos.empty()))
            throw StructuralError("Density+: free slot mismatch");
    }
    r.monos.insert(r.monos.end(), o.monos.begin(), o.monos.end());
    return r;
}

Density Density::operator-(const Density &o) const { return *this + (-o); }

Density Density::operator*(const Coeff &c) const {
    Density r = *this;
    if (c.is_zero()) {
        r.monos.clear();
        return r;
    }
    for (auto &m : r.monos) m.coeff *= c;
    return r;
}

static void shift_dummies(DensityMonomial &m, int offset) {
    auto sh = [&](std::string &s) {
        if (is_dummy(s)) s = "#" + std::to_string(std::stoi(s.substr(1)) + offset);
    };
    for (auto &f : m.factors) {
        for (auto &d : f.derivs) sh(d);
        for (auto &i : f.indices) sh(i);
    }
}

static int max_dummy(const DensityMonomial &m) {
    int mx = 0;
    for (const auto &f : m.factors) {
        for (const auto &d : f.derivs)
            if (is_dummy(d)) mx = std::max(mx, std::stoi(d.substr(1)));
        for (const auto &i : f.indices)
            if (is_dummy(i)) mx = std::max(mx, std::stoi(i.substr(1)));
    }
    return mx;
}

Density Density::operator*(const Density &o) const {
    Density r;
    r.free_slots = free_slots;
    for (const auto &s : o.free_slots) r.free_slots.push_back(s);
    for (const auto &a : monos)
        for (const auto &b : o.monos) {
            DensityMonomial m;
            m.coeff = a.coeff * b.coeff;
            m.factors = a.factors;
            DensityMonomial bb = b;
            shift_dummies(bb, max_dummy(a));
            m.factors.insert(m.factors.end(), bb.factors.begin(), bb.factors.end());
            r.monos.push_back(std::move(m));
        }
    return r;
}

Density Density::derivative(const std::string &slot) const {
    Density r;
    r.free_slots = free_slots;
    if (!is_dummy(slot)) r.free_slots.push_back(slot);
    for (const auto &m : monos)
        for (size_t i = 0; i < m.factors.size(); ++i) {
            DensityMonomial nm = m;
            nm.factors[i].derivs.push_back(slot);
            std::sort(nm.factors[i].derivs.begin(), nm.factors[i].derivs.end());
            r.monos.push_back(std::move(nm));
        }
    return r;
}

Density Density::divergence(const std::string &slot) const {
    // contract a fresh derivative with the free slot `slot`
    auto it = std::find(free_slots.begin(), free_slots.end(), slot);
    if (it == free_slots.end()) throw StructuralError("divergence: no free slot " + slot);
    Density r;
    for (const auto &s : free_slots)
        if (s != slot) r.free_slots.push_back(s);
    for (const auto &m : monos) {
        std::string d = "#" + std::to_string(max_dummy(m) + 1);
        for (size_t i = 0; i < m.factors.size(); ++i) {
            DensityMonomial nm = m;
            nm.factors[i].derivs.push_back(d);
            std::sort(nm.factors[i].derivs.begin(), nm.factors[i].derivs.end());
            for (auto &f : nm.factors) {
                for (auto &dd : f.derivs)
                    if (dd == slot) dd = d;
                for (auto &ii : f.indices)
                    if (ii == slot) ii = d;
            }
            r.monos.push_back(std::move(nm));
        }
    }
    return r;
}

Density Density::rename_free(const std::string &from, const std::string &to) const {
    Density r = *this;
    for (auto &s : r.free_slots)
        if (s == from) s = to;
    for (auto &m : r.monos)
        for (auto &f : m.factors) {
            for (auto &d : f.derivs)
                if (d == from) d = to;
            for (auto &i : f.indices)
                if (i == from) i = to;
        }
    return r;
}

namespace {

std::string coarse_key(const FieldFactor &f) {
    std::ostringstream os;
    os << f.species << "|" << f.conj << "|" << f.derivs.size() << "|" << f.indices.size();
    return os.str();
}

// Apply index symmetry of rank-2 species; returns sign (0 = vanishes).
int apply_sym(FieldFactor &f, const Species &sp) {
    if (sp.rank != 2 || sp.sym == Sym2::None) return 1;
    if (f.indices[0] == f.indices[1]) {
        if (sp.sym == Sym2::Antisymmetric) return 0;
        return 1;
    }
    if (f.indices[0] > f.indices[1]) {
        std::swap(f.indices[0], f.indices[1]);
        return sp.sym == Sym2::Antisymmetric ? -1 : 1;
    }
    return 1;
}

std::string encode(const DensityMonomial &m, const FieldModel &fm, int &sign_out) {
    // assumes dummies already relabeled; normalizes per-factor symmetry and
    // deriv sorting, then factor order
    DensityMonomial mm = m;
    int sign = 1;
    for (auto &f : mm.factors) {
        std::sort(f.derivs.begin(), f.derivs.end());
        int s = apply_sym(f, fm[f.species]);
        if (s == 0) {
            sign_out = 0;
            return "";
        }
        sign *= s;
    }
    std::vector<std::string> enc;
    for (auto &f : mm.factors) {
        std::ostringstream os;
        os << fm[f.species].name << (f.conj ? "~" : "") << "(";
        for (auto &d : f.derivs) os << "d" << d;
        os << ";";
        for (auto &i : f.indices) os << i << ",";
        os << ")";
        enc.push_back(os.str());
    }
    std::sort(enc.begin(), enc.end());
    std::string out;
    for (auto &e : enc) out += e;
    sign_out = sign;
    return out;
}

} // namespace

std::string monomial_key(const DensityMonomial &m, const FieldModel &fm) {
    // Canonical key: try all dummy relabelings (brute force, small counts),
    // pick the lexicographically smallest encoding. Sign folded separately.
    std::set<std::string> dummies;
    for (const auto &f : m.factors) {
        for (const auto &d : f.derivs)
            if (is_dummy(d)) dummies.insert(d);
        for (const auto &i : f.indices)
            if (is_dummy(i)) dummies.insert(i);
    }
    std::vector<std::string> dl(dummies.begin(), dummies.end());
    std::vector<int> perm(dl.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    int best_sign = 1;
    bool first = true;
    std::map<std::string, int> seen_signs;
    do {
        DensityMonomial mm = m;
        std::map<std::string, std::string> rl;
        for (size_t i = 0; i < dl.size(); ++i) rl[dl[i]] = "#" + std::to_string(perm[i] + 1);
        for (auto &f : mm.factors) {
            for (auto &d : f.derivs)
                if (is_dummy(d)) d = rl[d];
            for (auto &i : f.indices)
                if (is_dummy(i)) i = rl[i];
        }
        int sg = 1;
        std::string e = encode(mm, fm, sg);
        if (sg == 0) return ""; // identically zero by antisymmetry
        auto it = seen_signs.find(e);
        if (it != seen_signs.end() && it->second != sg) return ""; // equals its own negative
        seen_signs[e] = sg;
        if (first || e < best) {
            best = e;
            best_sign = sg;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return (best_sign < 0 ? "-" : "+") + best;
}

void Density::canonicalize(const FieldModel &fm) {
    std::map<std::string, std::pair<DensityMonomial, int>> acc; // unsigned key -> (rep, sign of rep)
    std::map<std::string, Coeff> coeffs;
    for (auto &m : monos) {
        std::string signed_key = monomial_key(m, fm);
        if (signed_key.empty() || m.coeff.is_zero()) continue;
        int sgn = signed_key[0] == '-' ? -1 : 1;
        std::string key = signed_key.substr(1);
        Coeff c = sgn < 0 ? -m.coeff : m.coeff;
        auto it = coeffs.find(key);
        if (it == coeffs.end()) {
            coeffs[key] = c;
            acc[key] = {m, sgn};
        } else {
            it->second += c;
        }
    }
    monos.clear();
    for (auto &[key, c] : coeffs) {
        if (c.is_zero()) continue;
        auto [rep, sgn] = acc[key];
        rep.coeff = sgn < 0 ? -c : c;
        monos.push_back(std::move(rep));
    }
}

std::pair<int, int> Density::d_eng_range(const FieldModel &fm) const {
    if (monos.empty()) return {0, 0};
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto &m : monos) {
        int base = 0;
        for (const auto &f : m.factors) base += fm[f.species].d_eng + (int)f.derivs.size();
        int l = base + fm.mass_degree_lo(m.coeff);
        int h = base + fm.mass_degree_hi(m.coeff);
        if (first || l < lo) lo = l;
        if (first || h > hi) hi = h;
        first = false;
    }
    return {lo, hi};
}

int Density::max_quantum_fields(const FieldModel &fm) const {
    int mx = 0;
    for (const auto &m : monos) {
        int n = 0;
        for (const auto &f : m.factors)
            if (!fm[f.species].classical) ++n;
        mx = std::max(mx, n);
    }
    return mx;
}

std::string Density::str(const FieldModel &fm) const {
    if (monos.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &m : monos) {
        if (!first) os << " + ";
        first = false;
        os << "(" << m.coeff.str() << ")";
        for (const auto &f : m.factors) {
            os << "*";
            for (size_t k = 0; k < f.derivs.size(); ++k) os << "d";
            os << fm[f.species].name << (f.conj ? "~" : "") << "[";
            bool fi = true;
            for (const auto &d : f.derivs) {
                if (!fi) os << " ";
                os << d;
                fi = false;
            }
            for (const auto &i : f.indices) {
                if (!fi) os << " ";
                os << i;
                fi = false;
            }
            os << "]";
        }
    }
    return os.str();
}

std::string Density::latex(const FieldModel &fm) const {
    if (monos.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &m : monos) {
        if (!first) os << " + ";
        first = false;
        os << "\\left(" << m.coeff.str() << "\\right)";
        for (const auto &f : m.factors) {
            for (const auto &d : f.derivs) os << "\\partial_{" << d << "}";
            std::string nm = fm[f.species].name;
            os << nm << (f.conj ? "^{*}" : "");
            if (!f.indices.empty()) {
                os << "_{";
                for (const auto &i : f.indices) os << i << " ";
                os << "}";
            }
        }
    }
    return os.str();
}

Density dbar(const Density &X, const Density &Y, const std::string &slot, const FieldModel &fm) {
    (void)fm;
    return X * Y.derivative(slot) - X.derivative(slot) * Y;
}

} // namespace slft
