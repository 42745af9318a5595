#pragma once

#include "slft/planewave.hpp"
#include "slft/rewrite.hpp"

#include <optional>

namespace slft {

struct PairCandidate {
    Density L;      // interaction density, d_eng = 4 per monomial
    Density V;      // vector partner, free slot "mu"
    Density germ;   // the defining minimal coupling
    int power_bound = 4;
};

struct PairCheckResult {
    Density residual;           // reduce(apply_de(L) - d^mu apply_de(V_mu))
    bool symbolic_zero = false;
    double oracle_residual = 0; // plane-wave check of the residual
    bool oracle_zero = false;
    std::vector<std::string> d_eng_violations;
};

PairCheckResult check_pair_first_order(const PairCandidate &cand, const FieldModel &fm,
                                       uint64_t seed);

struct AnsatzResult {
    bool feasible = false;
    PairCandidate solved;
    int solution_dim = 0;       // residual free directions beyond the gauge
    std::string infeasible_witness;
    std::vector<Density> L_basis, V_basis;
};

// Solve d_e L = d^mu (d_e V_mu) for unknown coefficients over the enumerated
// bases, germ coefficient normalized; representative fixed by preferring
// fewer derivatives, modulo total divergences and exact d_e forms.
AnsatzResult solve_pair_ansatz(const FieldModel &fm, const std::vector<SpeciesId> &content,
                               const Density &germ, int d_eng_bound);

// Equality modulo total divergences and exact d_e differentials (basis
// relative, mod EOM).
bool equal_mod_div_and_de(const Density &a, const Density &b, const FieldModel &fm,
                          const std::vector<SpeciesId> &content, int d_eng_bound);

} // namespace slft
