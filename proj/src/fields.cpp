#include "slft/fields.hpp"

#include <algorithm>

namespace slft {

std::string member_name(Member m) {
    switch (m) {
        case Member::Scalar: return "scalar";
        case Member::ProcaP: return "Ap";
        case Member::FieldStrength: return "F";
        case Member::SLPotential: return "A";
        case Member::EscortPhi: return "phi";
        case Member::EscortA: return "a";
        case Member::EscortVec: return "a1";
        case Member::EscortScal: return "a0";
        case Member::DeSitterU: return "u";
    }
    return "?";
}

int member_rank(Member m, int spin) {
    switch (m) {
        case Member::Scalar: return 0;
        case Member::ProcaP: return spin;
        case Member::FieldStrength: return 2 * spin;
        case Member::SLPotential: return spin;
        case Member::EscortPhi: return 0;
        case Member::EscortA: return 0;
        case Member::EscortVec: return 1;
        case Member::EscortScal: return 0;
        case Member::DeSitterU: return 0;
    }
    return 0;
}

bool FieldSpec::stringlocal() const {
    switch (member) {
        case Member::SLPotential:
        case Member::EscortPhi:
        case Member::EscortA:
        case Member::EscortVec:
        case Member::EscortScal:
        case Member::DeSitterU: return true;
        default: return false;
    }
}

FieldSpec FieldFamily::spec(Member m, std::vector<std::string> indices,
                            std::vector<std::string> derivs) const {
    if (std::find(members.begin(), members.end(), m) == members.end())
        throw StructuralError("family has no member " + member_name(m));
    FieldSpec s;
    s.spin = spin;
    s.mass = mass;
    s.member = m;
    s.indices = std::move(indices);
    s.derivs = std::move(derivs);
    if ((int)s.indices.size() != member_rank(m, spin))
        throw StructuralError("wrong index count for " + member_name(m));
    return s;
}

FieldFamily build_family(int spin, const std::string &mass_symbol) {
    FieldFamily f;
    f.spin = spin;
    f.mass = mass_symbol;
    bool massive = !mass_symbol.empty();
    switch (spin) {
        case 0:
            f.members = {Member::Scalar};
            break;
        case 1:
            if (massive)
                f.members = {Member::ProcaP, Member::FieldStrength, Member::SLPotential,
                             Member::EscortPhi, Member::EscortA, Member::DeSitterU};
            else
                f.members = {Member::FieldStrength, Member::SLPotential};
            break;
        case 2:
            if (massive)
                f.members = {Member::ProcaP, Member::SLPotential, Member::EscortVec,
                             Member::EscortScal};
            else
                f.members = {Member::SLPotential, Member::EscortVec, Member::EscortScal};
            break;
        default:
            throw UnsupportedSpin("unsupported spin " + std::to_string(spin));
    }
    return f;
}

FieldSpec line_integral(const FieldFamily &fam, Member m) {
    if (fam.spin == 1 && m == Member::ProcaP) return fam.spec(Member::EscortPhi);
    if (m == Member::FieldStrength) {
        std::vector<std::string> idx;
        for (int i = 0; i < fam.spin; ++i) idx.push_back("mu" + std::to_string(i));
        return fam.spec(Member::SLPotential, idx);
    }
    throw StructuralError("line_integral: no string slot construction registered for " +
                          member_name(m));
}

std::vector<Member> escort_chain(const FieldFamily &fam) {
    if (fam.mass.empty())
        throw StructuralError("escort_chain: escorts are massive constructs");
    if (fam.spin == 0) return {};
    if (fam.spin == 1) return {Member::EscortA};
    return {Member::EscortVec, Member::EscortScal};
}

TensorExpr J_matrix(const std::string &mu, const std::string &nu, int label) {
    TensorExpr r = TensorExpr::eta(mu, nu);
    TensorExpr t = TensorExpr::momentum(mu) * TensorExpr::direction(label, nu) *
                   TensorExpr::eps_den(label, +1);
    return (r - t).reorder_slots({mu, nu});
}

TensorExpr E_pair(const std::string &mu, const std::string &nu, int label) {
    TensorExpr r = TensorExpr::eta(mu, nu);
    TensorExpr pe2 = TensorExpr::eps_den(label, +1) * TensorExpr::eps_den(label, +1);
    r = r - (TensorExpr::direction(label, mu) * TensorExpr::momentum(nu) *
             TensorExpr::eps_den(label, +1))
                .reorder_slots({mu, nu});
    r = r - (TensorExpr::momentum(mu) * TensorExpr::direction(label, nu) *
             TensorExpr::eps_den(label, +1))
                .reorder_slots({mu, nu});
    r = r + (TensorExpr::inv_ee(label, label) * TensorExpr::momentum(mu) *
             TensorExpr::momentum(nu) * pe2)
                .reorder_slots({mu, nu});
    return r;
}

namespace {

// Side rules: the left slot of a kernel is the conjugate (bra) slot.
struct Side {
    bool left;
    int label() const { return left ? kLeftString : kRightString; }
    Coeff deriv_i() const { return left ? -Coeff::i() : Coeff::i(); }
};

std::string fresh(const std::string &base, int i) { return "_" + base + std::to_string(i); }

// base slot names for the two sides
std::vector<std::string> base_slots(int rank, bool left) {
    std::vector<std::string> v;
    for (int i = 0; i < rank; ++i) v.push_back(fresh(left ? "L" : "R", i));
    return v;
}

TensorExpr pi_tensor(const std::string &a, const std::string &b, const std::string &mass) {
    TensorExpr r = TensorExpr::eta(a, b);
    TensorExpr pp = (TensorExpr::momentum(a) * TensorExpr::momentum(b)).reorder_slots({a, b});
    return r - pp * Coeff::symbol(mass, -2);
}

// Base kernel of the pointlocal potential with open slots ls x rs.
TensorExpr base_kernel(int spin, const std::string &mass, const std::vector<std::string> &ls,
                       const std::vector<std::string> &rs) {
    if (spin == 0) return TensorExpr::scalar(Coeff(1));
    if (spin == 1) {
        if (mass.empty()) return -TensorExpr::eta(ls[0], rs[0]);
        return -pi_tensor(ls[0], rs[0], mass);
    }
    // spin 2 Proca kernel: 1/2 [pi pi + pi pi] - 1/3 pi pi
    auto pi = [&](const std::string &a, const std::string &b) { return pi_tensor(a, b, mass); };
    std::vector<std::string> order = {ls[0], ls[1], rs[0], rs[1]};
    TensorExpr r = (pi(ls[0], rs[0]) * pi(ls[1], rs[1])).reorder_slots(order) * Coeff(Rational(1, 2));
    r = r + (pi(ls[0], rs[1]) * pi(ls[1], rs[0])).reorder_slots(order) * Coeff(Rational(1, 2));
    r = r - (pi(ls[0], ls[1]) * pi(rs[0], rs[1])).reorder_slots(order) * Coeff(Rational(1, 3));
    return r;
}

// Replace free slot `slot` by the J-projected slot with the side's string.
TensorExpr apply_J(const TensorExpr &ex, const std::string &slot, int label) {
    TensorExpr t2 = ex * TensorExpr::direction(label, "_c");
    t2 = t2.contract(slot, "_c");
    std::vector<std::string> order = ex.slots;
    t2 = t2 * TensorExpr::momentum(slot) * TensorExpr::eps_den(label, +1);
    t2 = t2.reorder_slots(order);
    return ex - t2;
}

// Contract `slot` with the side's direction and multiply -/+ i /(p.e): the
// scalar escort line integral.
TensorExpr apply_phi(const TensorExpr &ex, const std::string &slot, Side side) {
    TensorExpr t = ex * TensorExpr::direction(side.label(), "_c");
    t = t.contract(slot, "_c");
    Coeff pref = side.left ? -Coeff::i() : Coeff::i();
    return t * pref * TensorExpr::eps_den(side.label(), +1);
}

// Contract `slot` with the momentum and multiply the divergence prefactor:
// descent escorts a^(r) = -(1/m) d . a^(r+1).
TensorExpr apply_descent(const TensorExpr &ex, const std::string &slot, Side side,
                         const std::string &mass) {
    TensorExpr t = ex * TensorExpr::momentum("_c");
    t = t.contract(slot, "_c");
    Coeff pref = Coeff(-1) * Coeff::symbol(mass, -1) * side.deriv_i();
    return t * pref;
}

// Member intertwiner: maps the base kernel's open slots on one side to the
// member's slots.
TensorExpr apply_member(TensorExpr ex, const FieldFamily &fam, const FieldSpec &f, Side side,
                        const std::vector<std::string> &bslots) {
    const auto &out = f.indices;
    switch (f.member) {
        case Member::Scalar:
        case Member::ProcaP:
            for (size_t i = 0; i < bslots.size(); ++i) ex = ex.rename_slot(bslots[i], out[i]);
            return ex;
        case Member::FieldStrength: {
            if (fam.spin != 1)
                throw StructuralError("field strength kernels implemented for spin 1 only");
            Coeff d = side.deriv_i();
            TensorExpr t1 = (TensorExpr::momentum(out[0]) * ex.rename_slot(bslots[0], out[1])) * d;
            TensorExpr t2 = (TensorExpr::momentum(out[1]) * ex.rename_slot(bslots[0], out[0])) * d;
            return t1 - t2;
        }
        case Member::SLPotential: {
            for (size_t i = 0; i < bslots.size(); ++i) {
                ex = apply_J(ex, bslots[i], side.label());
                ex = ex.rename_slot(bslots[i], out[i]);
            }
            return ex;
        }
        case Member::EscortPhi:
            return apply_phi(ex, bslots[0], side);
        case Member::EscortA:
            return apply_phi(ex, bslots[0], side) * Coeff::symbol(fam.mass, 1);
        case Member::EscortVec: {
            ex = apply_J(ex, bslots[0], side.label());
            ex = apply_J(ex, bslots[1], side.label());
            ex = apply_descent(ex, bslots[0], side, fam.mass);
            return ex.rename_slot(bslots[1], out[0]);
        }
        case Member::EscortScal: {
            ex = apply_J(ex, bslots[0], side.label());
            ex = apply_J(ex, bslots[1], side.label());
            ex = apply_descent(ex, bslots[0], side, fam.mass);
            ex = apply_descent(ex, bslots[1], side, fam.mass);
            return ex;
        }
        case Member::DeSitterU:
            throw StructuralError("u has no registered two-point kernel");
    }
    throw StructuralError("unreachable");
}

TensorExpr apply_derivs(TensorExpr ex, const FieldSpec &f, Side side) {
    for (const auto &d : f.derivs) ex = (ex * TensorExpr::momentum(d)) * side.deriv_i();
    return ex;
}

} // namespace

Kernel two_point_kernel(const FieldFamily &fam, const FieldSpec &X, const FieldSpec &Y) {
    if (X.spin != fam.spin || Y.spin != fam.spin || X.mass != fam.mass || Y.mass != fam.mass)
        throw StructuralError("two_point_kernel: fields not from this family");
    if (fam.mass.empty() && fam.spin == 2)
        throw UnsupportedSpin("massless spin-2 kernels arise only as massive limits here");
    auto ls = base_slots(fam.spin == 0 ? 0 : member_rank(Member::ProcaP, fam.spin), true);
    auto rs = base_slots(ls.size(), false);
    TensorExpr base = base_kernel(fam.spin, fam.mass, ls, rs);
    TensorExpr ex = apply_member(base, fam, X, Side{true}, ls);
    ex = apply_member(ex, fam, Y, Side{false}, rs);
    ex = apply_derivs(ex, X, Side{true});
    ex = apply_derivs(ex, Y, Side{false});
    ex = ex.on_shell(fam.mass);
    std::vector<std::string> order = X.indices;
    for (auto &d : X.derivs) order.push_back(d);
    for (auto &i : Y.indices) order.push_back(i);
    for (auto &d : Y.derivs) order.push_back(d);
    // deriv slots multiply momenta; they are free slots of the result
    ex = ex.reorder_slots(order);
    Kernel k;
    k.left = X;
    k.right = Y;
    k.expr = std::move(ex);
    k.shell = fam.mass;
    return k;
}

TensorExpr member_kernel_identified(const FieldFamily &fam, Member left,
                                    const std::vector<std::string> &lslots, Member right,
                                    const std::vector<std::string> &rslots, int label) {
    FieldSpec X = fam.spec(left, lslots);
    FieldSpec Y = fam.spec(right, rslots);
    Kernel k = two_point_kernel(fam, X, Y);
    // identify both string labels with `label`, PV orientations
    TensorExpr ex = k.expr;
    TensorExpr out;
    out.slots = ex.slots;
    for (auto t : ex.terms) {
        std::map<std::pair<int, int>, int> ed;
        for (auto &[ko, n] : t.epsden) ed[{label, +1}] += n;
        t.epsden = std::move(ed);
        std::map<int, int> pe;
        for (auto &[kk, n] : t.pe) pe[label] += n;
        t.pe = std::move(pe);
        std::map<std::pair<int, int>, int> eem;
        for (auto &[jk, n] : t.ee) eem[{label, label}] += n;
        t.ee = std::move(eem);
        for (auto &a : t.cover)
            if (a.kind == SlotAtom::Dir) a.dir = label;
        out.terms.push_back(std::move(t));
    }
    out.sort_merge();
    return out;
}

TensorExpr pl_sl_identity(const FieldFamily &fam, Member against) {
    if (fam.spin == 0) return TensorExpr::zero();
    if (fam.mass.empty())
        throw StructuralError("pl_sl_identity: needs the massive family");
    std::vector<std::string> idx, ridx;
    for (int i = 0; i < fam.spin; ++i) idx.push_back("mu" + std::to_string(i));
    for (int i = 0; i < member_rank(against, fam.spin); ++i) ridx.push_back("nu" + std::to_string(i));
    auto k = [&](const FieldSpec &X) {
        return two_point_kernel(fam, X, fam.spec(against, ridx)).expr;
    };
    if (fam.spin == 1) {
        // A^P - A + d phi
        TensorExpr r = k(fam.spec(Member::ProcaP, idx));
        r = r - k(fam.spec(Member::SLPotential, idx));
        FieldSpec dphi = fam.spec(Member::EscortPhi);
        dphi.derivs = {idx[0]};
        r = r + k(dphi);
        return r;
    }
    // spin 2: A^P - A + sym(d a1)/m - d d a0 / m^2  (signs verified at kernel level)
    TensorExpr r = k(fam.spec(Member::ProcaP, idx));
    r = r - k(fam.spec(Member::SLPotential, idx));
    Coeff im1 = Coeff::symbol(fam.mass, -1), im2 = Coeff::symbol(fam.mass, -2);
    FieldSpec da1 = fam.spec(Member::EscortVec, {idx[1]});
    da1.derivs = {idx[0]};
    r = r + k(da1) * im1;
    FieldSpec da1b = fam.spec(Member::EscortVec, {idx[0]});
    da1b.derivs = {idx[1]};
    r = r + k(da1b) * im1;
    FieldSpec dda0 = fam.spec(Member::EscortScal);
    dda0.derivs = {idx[0], idx[1]};
    r = r - k(dda0) * im2;
    return r;
}

} // namespace slft
