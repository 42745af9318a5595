#pragma once

#include "slft/pair.hpp"

#include <map>
#include <string>

namespace slft {

// A fully constructed model: field registry plus the densities the engine
// operations consume.
struct ModelContext {
    std::string name;
    FieldModel fm;
    std::map<std::string, SpeciesId> ids;
    PairCandidate pair;
    std::vector<SpeciesId> ansatz_content;
    uint64_t seed = 1;
    int samples = 1000;
    // model-specific knobs
    std::string flavor; // "massive_qed", "scalar_qed", "higgs", ...
};

// Density construction helpers.
FieldFactor fac(SpeciesId s, std::vector<std::string> indices = {},
                std::vector<std::string> derivs = {}, bool conj = false);
Density mono(Coeff c, std::vector<FieldFactor> fs, std::vector<std::string> free = {});
// i X* dbar_mu Y with charge sign epsilon: eps * i (X^* d(Y) - d(X^*) Y)
Density bilinear_current(const FieldModel &fm, SpeciesId X, const std::string &slot, int eps,
                         std::vector<std::string> Xidx = {}, std::vector<std::string> Yidx = {});

ModelContext make_massive_qed();
ModelContext make_scalar_qed();   // same field content; the induction showcase
ModelContext make_higgs();        // abelian Higgs, c1/c2 symbolic in U(H)
ModelContext make_external_s1();  // complex massive vector + classical U_mu
ModelContext make_external_s0();  // complex scalar current + classical U_mu
ModelContext make_source_s1();    // classical conserved source j
ModelContext make_gass();         // massless h = A^(2) cubic selfcoupling
ModelContext make_su2(bool break_antisymmetry = false); // colored vector mesons
ModelContext make_current_s2();   // complex massive spin-2 current decomposition

// Built-in model lookup by name; throws on unknown name.
ModelContext builtin_model(const std::string &name);
std::vector<std::string> builtin_model_names();

} // namespace slft
