#pragma once

#include "slft/density.hpp"

#include <functional>
#include <optional>

namespace slft {

// Oriented rewriting modulo free field equations: Klein-Gordon, divergence
// relations, trace conditions, family substitutions.  Innermost-first with
// fixed priority (substitutions, then field equations); terminating because
// every rule strictly reduces (subst count, derivative count).
Density reduce_mod_eom(Density d, const FieldModel &fm);

// de Sitter differential applied by Leibniz using the registered generator
// rules. Throws listing the species if one lacks a rule.
Density apply_de(const Density &d, const FieldModel &fm);

// Exact linear algebra over the rational-function field.
struct LinearSolution {
    bool consistent = true;
    std::vector<RatFunc> particular;             // size n (free vars set to 0)
    std::vector<std::vector<RatFunc>> nullspace; // basis of homogeneous solutions
    std::string witness;                          // inconsistent row key

    // Coefficient-field value; throws if the denominator is not a monomial.
    static Coeff as_coeff(const RatFunc &v);
};

class LinearSystem {
  public:
    explicit LinearSystem(size_t n_unknowns) : n_(n_unknowns) {}
    void add_term(const std::string &row_key, size_t j, const Coeff &c);
    void add_rhs(const std::string &row_key, const Coeff &c);
    size_t n_unknowns() const { return n_; }
    size_t n_rows() const { return rows_.size(); }
    LinearSolution solve() const;

  private:
    size_t n_;
    std::map<std::string, std::pair<std::vector<Coeff>, Coeff>> rows_;
};

// Build the linear system "sum_j x_j D_j + rhs == 0" over canonical monomial
// keys and solve it.
LinearSolution solve_density_combination(const std::vector<Density> &basis, const Density &rhs,
                                         const FieldModel &fm);

// Basis enumeration: all scalar (or one-free-index) monomials formable from
// the species list with n_fields in [min,max], up to three derivatives,
// pre-mass engineering dimension within the bound. Reduced and deduped.
struct AnsatzBasis {
    std::vector<Density> elements;
    std::vector<int> deriv_counts;
};
AnsatzBasis enumerate_monomials(const FieldModel &fm, const std::vector<SpeciesId> &content,
                                int min_fields, int max_fields, int free_rank, int d_eng_bound);

struct DivergenceMatch {
    Density W;                    // with free slot "mu"; D == d^mu W_mu mod EOM
    std::vector<Density> basis;   // candidate basis used
};

// Basis-relative total-divergence matcher; nullopt = no match in the basis
// (not a proof of impossibility).
std::optional<DivergenceMatch> match_divergence(const Density &d, const FieldModel &fm,
                                                int d_eng_bound);

// The candidate vector densities used by match_divergence (exposed for the
// ansatz solver).
std::vector<Density> divergence_candidates(const Density &d, const FieldModel &fm,
                                           int d_eng_bound);

// Inverts apply_de on a density basis: find L with apply_de(L) == d.
std::optional<Density> de_antiderivative(const Density &d, const FieldModel &fm,
                                         const std::vector<Density> &basis);

} // namespace slft
