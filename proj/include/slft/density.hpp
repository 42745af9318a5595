#pragma once

#include "slft/fields.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slft {

// Density-level species registry. A species is one field symbol usable in
// Wick monomials, with its equation-of-motion data and d_e rule attached.
using SpeciesId = int;

enum class Sym2 : uint8_t { None, Symmetric, Antisymmetric };

struct DeRuleTerm {
    Coeff coeff;
    SpeciesId target = -1;
    // For each source tensor index: >=0 target index position, -1 deriv slot.
    std::vector<int> idx_map;
};

struct Species {
    std::string name;
    int rank = 0;
    std::string mass;        // "" = massless
    bool complex_field = false;
    bool stringlocal = false;
    bool classical = false;  // external classical symbol, exempt from EOM
    bool conserved = false;  // classical current with d.j = 0
    int d_eng = 1;
    Sym2 sym = Sym2::None;
    bool traceless = false;

    // box X -> kg_coeff * X; by default -mass^2 (0 if massless)
    std::optional<Coeff> kg_coeff;
    // d^mu X_{mu...} -> div_coeff * div_target(remaining indices); target -1 = zero
    std::optional<std::pair<Coeff, SpeciesId>> div_rule;
    bool has_div_rule = false;
    // substitution X -> coeff * target (family normalization, e.g. a = m phi)
    std::optional<std::pair<Coeff, SpeciesId>> subst;
    // d_e X -> sum of rule terms; empty vector = zero; nullopt = unregistered
    std::optional<std::vector<DeRuleTerm>> de_rule;

    // kernel/oracle linkage
    int family = -1;          // index into FieldModel::families
    Member member = Member::Scalar;
    int color = 0;            // color component (1-based) or 0
    std::string base_name;    // species name without the color suffix
};

struct FieldModel {
    std::vector<Species> species;
    std::vector<FieldFamily> families;
    std::vector<std::string> mass_symbols;

    SpeciesId add(Species s);
    SpeciesId find(const std::string &name) const; // -1 if absent
    const Species &operator[](SpeciesId id) const { return species[id]; }

    // Registers the density-level members of a kernel family under the given
    // name prefix; returns ids keyed by member. Colored copies share family.
    std::map<Member, SpeciesId> add_family(int spin, const std::string &mass,
                                           const std::string &prefix, bool complex_field,
                                           int color = 0);

    int mass_degree_lo(const Coeff &c) const;
    int mass_degree_hi(const Coeff &c) const;
};

// Index label: free indices are named slots; dummies are "#k".
bool is_dummy(const std::string &idx);

struct FieldFactor {
    SpeciesId species = -1;
    bool conj = false;
    std::vector<std::string> derivs;  // symmetric multi-index
    std::vector<std::string> indices; // tensor slots

    bool operator==(const FieldFactor &o) const {
        return species == o.species && conj == o.conj && derivs == o.derivs &&
               indices == o.indices;
    }
};

struct DensityMonomial {
    Coeff coeff = Coeff(1);
    std::vector<FieldFactor> factors;
};

// Wick-ordered polynomial in field symbols; at most one free Lorentz index.
class Density {
  public:
    std::vector<std::string> free_slots; // e.g. {"mu"} for V_mu
    std::vector<DensityMonomial> monos;  // canonical

    Density() = default;
    explicit Density(std::vector<std::string> fs) : free_slots(std::move(fs)) {}

    static Density zero(std::vector<std::string> fs = {}) { return Density(std::move(fs)); }
    static Density monomial(DensityMonomial m, std::vector<std::string> fs = {});

    bool is_zero() const { return monos.empty(); }

    Density operator-() const;
    Density operator+(const Density &o) const;
    Density operator-(const Density &o) const;
    Density operator*(const Coeff &c) const;
    // Wick product (fields commute at this level).
    Density operator*(const Density &o) const;
    bool operator==(const Density &o) const { return ((*this) - o).is_zero(); }

    // d/dx^slot applied by Leibniz; slot must be a fresh free index or a
    // dummy to contract later.
    Density derivative(const std::string &slot) const;
    // d^mu contracted against the free slot `slot` of this density.
    Density divergence(const std::string &slot) const;

    Density rename_free(const std::string &from, const std::string &to) const;

    void canonicalize(const FieldModel &fm);

    std::pair<int, int> d_eng_range(const FieldModel &fm) const;
    int max_quantum_fields(const FieldModel &fm) const;

    std::string str(const FieldModel &fm) const;
    std::string latex(const FieldModel &fm) const;
};

// Canonical text key of a monomial sans coefficient (used by linear solvers).
std::string monomial_key(const DensityMonomial &m, const FieldModel &fm);

// X* dbar_slot Y = X* d(Y) - d(X*) Y as a density.
Density dbar(const Density &X, const Density &Y, const std::string &slot,
             const FieldModel &fm);

} // namespace slft
