#include "slft/models.hpp"

namespace slft {

FieldFactor fac(SpeciesId s, std::vector<std::string> indices, std::vector<std::string> derivs,
                bool conj) {
    FieldFactor f;
    f.species = s;
    f.conj = conj;
    f.indices = std::move(indices);
    f.derivs = std::move(derivs);
    std::sort(f.derivs.begin(), f.derivs.end());
    return f;
}

Density mono(Coeff c, std::vector<FieldFactor> fs, std::vector<std::string> free) {
    DensityMonomial m;
    m.coeff = std::move(c);
    m.factors = std::move(fs);
    Density d(std::move(free));
    d.monos.push_back(std::move(m));
    return d;
}

Density bilinear_current(const FieldModel &fm, SpeciesId X, const std::string &slot, int eps,
                         std::vector<std::string> Xidx, std::vector<std::string> Yidx) {
    (void)fm;
    Coeff ie = Coeff::i() * Coeff(eps);
    Density d = mono(ie, {fac(X, Xidx, {}, true), fac(X, Yidx, {slot})},
                     is_dummy(slot) ? std::vector<std::string>{} : std::vector<std::string>{slot});
    d = d - mono(ie, {fac(X, Xidx, {slot}, true), fac(X, Yidx)},
                 is_dummy(slot) ? std::vector<std::string>{} : std::vector<std::string>{slot});
    return d;
}

namespace {

ModelContext qed_common(const std::string &name) {
    ModelContext mc;
    mc.name = name;
    mc.flavor = name;
    auto Af = mc.fm.add_family(1, "m", "A", false);
    auto Pf = mc.fm.add_family(0, "mpsi", "psi", true);
    for (auto &[k, v] : Af) mc.ids[mc.fm[v].name] = v;
    mc.ids["psi"] = Pf[Member::Scalar];

    SpeciesId A = Af[Member::SLPotential], phi = Af[Member::EscortPhi],
              psi = Pf[Member::Scalar];
    Coeff g = Coeff::symbol("g"), mi = -Coeff::i();
    // j_mu = -i psi* dbar_mu psi (charge convention fixed by the dressing
    // relation psi -> e^{ig phi} psi)
    mc.pair.L = mono(g * mi, {fac(A, {"#1"}), fac(psi, {}, {}, true), fac(psi, {}, {"#1"})}) -
                mono(g * mi, {fac(A, {"#1"}), fac(psi, {}, {"#1"}, true), fac(psi)});
    mc.pair.L.canonicalize(mc.fm);
    mc.pair.V = mono(g * mi, {fac(phi), fac(psi, {}, {}, true), fac(psi, {}, {"mu"})}, {"mu"}) -
                mono(g * mi, {fac(phi), fac(psi, {}, {"mu"}, true), fac(psi)}, {"mu"});
    mc.pair.V.canonicalize(mc.fm);
    mc.pair.germ = mc.pair.L;
    mc.ansatz_content = {A, phi, psi};
    return mc;
}

} // namespace

ModelContext make_massive_qed() { return qed_common("massive_qed"); }
ModelContext make_scalar_qed() { return qed_common("scalar_qed"); }

ModelContext make_higgs() {
    ModelContext mc;
    mc.name = "higgs_abelian";
    mc.flavor = "higgs";
    auto Af = mc.fm.add_family(1, "m", "A", false);
    auto Hf = mc.fm.add_family(0, "mH", "H", false);
    for (auto &[k, v] : Af) mc.ids[mc.fm[v].name] = v;
    mc.ids["H"] = Hf[Member::Scalar];
    SpeciesId A = Af[Member::SLPotential], phi = Af[Member::EscortPhi], H = Hf[Member::Scalar];
    Coeff g = Coeff::symbol("g"), m = Coeff::symbol("m"), mH2 = Coeff::symbol("mH", 2);
    Coeff c1 = Coeff::symbol("c1"), c2 = Coeff::symbol("c2");

    // L = g{ m A.(A H + phi dbar H) - (m mH^2/2) phi^2 H + m c1 H^3 + c2 H^4 }
    Density L = mono(g * m, {fac(A, {"#1"}), fac(A, {"#1"}), fac(H)});
    L = L + mono(g * m, {fac(A, {"#1"}), fac(phi), fac(H, {}, {"#1"})});
    L = L - mono(g * m, {fac(A, {"#1"}), fac(phi, {}, {"#1"}), fac(H)});
    L = L - mono(g * m * mH2 * Coeff(Rational(1, 2)), {fac(phi), fac(phi), fac(H)});
    L = L + mono(g * m * c1, {fac(H), fac(H), fac(H)});
    L = L + mono(g * c2, {fac(H), fac(H), fac(H), fac(H)});
    L.canonicalize(mc.fm);

    // V_mu = g m { A_mu phi H + (1/2) phi^2 dbar_mu H }
    Density V = mono(g * m, {fac(A, {"mu"}), fac(phi), fac(H)}, {"mu"});
    V = V + mono(g * m, {fac(phi), fac(phi), fac(H, {}, {"mu"})}, {"mu"}) * Coeff(Rational(1, 2));
    V = V - mono(g * m, {fac(phi), fac(phi, {}, {"mu"}), fac(H)}, {"mu"});
    V.canonicalize(mc.fm);

    mc.pair.L = L;
    mc.pair.V = V;
    mc.pair.germ = mono(g * m, {fac(A, {"#1"}), fac(A, {"#1"}), fac(H)});
    mc.ansatz_content = {A, phi, H};
    return mc;
}

ModelContext make_external_s1() {
    ModelContext mc;
    mc.name = "external_s1";
    mc.flavor = "external_s1";
    auto Af = mc.fm.add_family(1, "m", "A", true); // complex vector family
    for (auto &[k, v] : Af) mc.ids[mc.fm[v].name] = v;
    Species U;
    U.name = "U";
    U.rank = 1;
    U.classical = true;
    U.d_eng = 1;
    U.mass = "";
    mc.ids["U"] = mc.fm.add(U);
    mc.ansatz_content = {Af[Member::SLPotential], Af[Member::EscortPhi]};
    return mc;
}

ModelContext make_external_s0() {
    ModelContext mc;
    mc.name = "external_s0";
    mc.flavor = "external_s0";
    auto Pf = mc.fm.add_family(0, "mpsi", "psi", true);
    mc.ids["psi"] = Pf[Member::Scalar];
    Species Usp;
    Usp.name = "U";
    Usp.rank = 1;
    Usp.classical = true;
    Usp.d_eng = 1;
    mc.ids["U"] = mc.fm.add(Usp);
    SpeciesId psi = Pf[Member::Scalar];
    SpeciesId U = mc.ids["U"];
    Coeff g = Coeff::symbol("g"), i = Coeff::i();
    mc.pair.L = mono(g * i, {fac(U, {"#1"}), fac(psi, {}, {}, true), fac(psi, {}, {"#1"})}) -
                mono(g * i, {fac(U, {"#1"}), fac(psi, {}, {"#1"}, true), fac(psi)});
    mc.pair.L.canonicalize(mc.fm);
    mc.pair.V = Density({"mu"}); // V = 0: the scalar current pair is trivial
    mc.pair.germ = mc.pair.L;
    return mc;
}

ModelContext make_source_s1() {
    ModelContext mc;
    mc.name = "source_s1";
    mc.flavor = "source_s1";
    auto Af = mc.fm.add_family(1, "m", "A", false);
    for (auto &[k, v] : Af) mc.ids[mc.fm[v].name] = v;
    Species j;
    j.name = "j";
    j.rank = 1;
    j.classical = true;
    j.conserved = true;
    j.d_eng = 3;
    mc.ids["j"] = mc.fm.add(j);
    SpeciesId A = Af[Member::SLPotential], phi = Af[Member::EscortPhi];
    Coeff g = Coeff::symbol("g");
    mc.pair.L = mono(g, {fac(A, {"#1"}), fac(mc.ids["j"], {"#1"})});
    mc.pair.V = mono(g, {fac(phi), fac(mc.ids["j"], {"mu"})}, {"mu"});
    mc.pair.germ = mc.pair.L;
    return mc;
}

ModelContext make_gass() {
    ModelContext mc;
    mc.name = "gass_cubic";
    mc.flavor = "gass";
    auto Hf = mc.fm.add_family(2, "", "h", false);
    mc.ids["h"] = Hf[Member::SLPotential];
    mc.ids["h_a"] = Hf[Member::EscortVec];
    SpeciesId h = Hf[Member::SLPotential];
    Coeff k = Coeff::symbol("kappa");
    // L = kappa (2 d_rho h^{ka la} d_si h_{ka la} + 4 d_be h^al_rho d_al h^be_si) h^{rho si}
    Density L = mono(k * Coeff(2),
                     {fac(h, {"#1", "#2"}, {"#3"}), fac(h, {"#1", "#2"}, {"#4"}),
                      fac(h, {"#3", "#4"})});
    L = L + mono(k * Coeff(4),
                 {fac(h, {"#1", "#3"}, {"#2"}), fac(h, {"#2", "#4"}, {"#1"}),
                  fac(h, {"#3", "#4"})});
    L.canonicalize(mc.fm);
    mc.pair.L = L;
    mc.pair.germ = L;
    mc.pair.V = Density({"mu"});
    mc.ansatz_content = {h, Hf[Member::EscortVec]};
    return mc;
}

ModelContext make_su2(bool break_antisymmetry) {
    ModelContext mc;
    mc.name = "su2_yangmills";
    mc.flavor = "su2";
    std::map<int, std::map<Member, SpeciesId>> col;
    for (int a = 1; a <= 3; ++a) {
        col[a] = mc.fm.add_family(1, "m", "A", false, a);
        for (auto &[k, v] : col[a]) mc.ids[mc.fm[v].name] = v;
    }
    Coeff g = Coeff::symbol("g");
    auto eps = [&](int a, int b, int c) -> int {
        return (a - b) * (b - c) * (c - a) / 2; // Levi-Civita on {1,2,3}
    };
    Density germ;
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (int c = 1; c <= 3; ++c) {
                int f = eps(a, b, c);
                if (break_antisymmetry && a == 1 && b == 2 && c == 3) f += 1;
                if (f == 0) continue;
                germ = germ + mono(g * Coeff(f),
                                   {fac(col[c][Member::FieldStrength], {"#1", "#2"}),
                                    fac(col[a][Member::SLPotential], {"#1"}),
                                    fac(col[b][Member::SLPotential], {"#2"})});
            }
    germ.canonicalize(mc.fm);
    mc.pair.germ = germ;
    for (int a = 1; a <= 3; ++a) {
        mc.ansatz_content.push_back(col[a][Member::SLPotential]);
        mc.ansatz_content.push_back(col[a][Member::EscortPhi]);
        mc.ansatz_content.push_back(col[a][Member::FieldStrength]);
    }
    return mc;
}

ModelContext make_current_s2() {
    ModelContext mc;
    mc.name = "current_s2";
    mc.flavor = "current_s2";
    auto Af = mc.fm.add_family(2, "m", "B", true);
    for (auto &[k, v] : Af) mc.ids[mc.fm[v].name] = v;
    return mc;
}

ModelContext builtin_model(const std::string &name) {
    if (name == "massive_qed") return make_massive_qed();
    if (name == "scalar_qed") return make_scalar_qed();
    if (name == "higgs_abelian") return make_higgs();
    if (name == "external_s1") return make_external_s1();
    if (name == "external_s0") return make_external_s0();
    if (name == "source_s1") return make_source_s1();
    if (name == "gass_cubic") return make_gass();
    if (name == "su2_yangmills") return make_su2();
    if (name == "current_s2") return make_current_s2();
    throw StructuralError("unknown builtin model " + name);
}

std::vector<std::string> builtin_model_names() {
    return {"massive_qed", "scalar_qed",  "higgs_abelian", "external_s1", "external_s0",
            "source_s1",  "gass_cubic",  "su2_yangmills", "current_s2"};
}

} // namespace slft
