#pragma once

#include "slft/coeff.hpp"

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace slft {

// Signature (+,-,-,-) throughout; stated once here.
inline constexpr std::array<double, 4> kMetricDiag{1.0, -1.0, -1.0, -1.0};

struct SingularEvaluation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// What sits on one free index slot of a term.
struct SlotAtom {
    enum Kind : uint8_t { P, Dir, Eta } kind = P;
    int dir = -1;     // direction label for Dir
    int partner = -1; // other slot position for Eta
    bool operator==(const SlotAtom &o) const {
        return kind == o.kind && dir == o.dir && partner == o.partner;
    }
    bool operator<(const SlotAtom &o) const {
        return std::tie(kind, dir, partner) < std::tie(o.kind, o.dir, o.partner);
    }
};

// One canonical term: coefficient, scalar invariants, per-slot index atoms.
// All dummy contractions have been resolved into the invariants, so equality
// of canonical forms is plain structural comparison.
struct TensorTerm {
    Coeff coeff = Coeff(1);
    std::vector<SlotAtom> cover; // one atom per free slot of the expression
    int p2 = 0;                  // (p.p)^p2
    std::map<int, int> pe;       // (p.e_k)^n numerator factors
    std::map<std::pair<int, int>, int> ee;      // (e_j.e_k)^n, j<=k
    std::map<std::pair<int, int>, int> epsden;  // (k, orient) -> n: (p.e_k + orient*ieps)^-n
    int feyn = 0;                // (p^2 - feyn_mass^2 + ieps)^-feyn
    std::string feyn_mass;       // empty = massless denominator
    bool contact = false;        // delta-supported tag; never merges with smooth

    std::string key() const; // canonical identity excluding coeff
    bool operator==(const TensorTerm &o) const {
        return coeff == o.coeff && cover == o.cover && p2 == o.p2 && pe == o.pe && ee == o.ee &&
               epsden == o.epsden && feyn == o.feyn && feyn_mass == o.feyn_mass &&
               contact == o.contact;
    }
};

class TensorExpr {
  public:
    std::vector<std::string> slots; // ordered free-index names
    std::vector<TensorTerm> terms;  // canonical: sorted by key, coeffs merged

    TensorExpr() = default;
    explicit TensorExpr(std::vector<std::string> s) : slots(std::move(s)) {}

    static TensorExpr scalar(Coeff c);
    static TensorExpr zero(std::vector<std::string> s = {});
    static TensorExpr eta(const std::string &a, const std::string &b);
    static TensorExpr momentum(const std::string &slot);
    static TensorExpr direction(int k, const std::string &slot);
    static TensorExpr inv_p2();                    // scalar (p.p)
    static TensorExpr inv_pe(int k);               // scalar (p.e_k)
    static TensorExpr inv_ee(int j, int k);        // scalar (e_j.e_k)
    static TensorExpr eps_den(int k, int orient);  // (p.e_k + orient*ieps)^-1
    static TensorExpr feyn_den(const std::string &mass); // (p^2 - mass^2 + ieps)^-1

    bool is_zero() const { return terms.empty(); }
    size_t n_slots() const { return slots.size(); }

    TensorExpr operator-() const;
    TensorExpr operator+(const TensorExpr &o) const;
    TensorExpr operator-(const TensorExpr &o) const;
    TensorExpr operator*(const TensorExpr &o) const; // slot sets must be disjoint
    TensorExpr operator*(const Coeff &c) const;

    bool operator==(const TensorExpr &o) const;

    // Contract two free slots of this expression (metric contraction).
    TensorExpr contract(const std::string &a, const std::string &b) const;

    TensorExpr rename_slot(const std::string &from, const std::string &to) const;
    TensorExpr reorder_slots(const std::vector<std::string> &order) const;

    // Complex conjugation: conjugates coefficients, flips eps orientations.
    TensorExpr conj() const;

    // p.p -> mass^2 (empty mass = 0). Result canonical.
    TensorExpr on_shell(const std::string &mass) const;

    // e_k.e_k -> value (0 for lightlike, -1 for spacelike unit).
    TensorExpr set_e_squared(int k, int value) const;

    // Substitute a coefficient symbol.
    TensorExpr substitute(const std::string &sym, const Coeff &value) const;

    // Degree ranges. For "p": counts P atoms, p2, pe numerators, eps and
    // Feynman denominators. For directions: pass e-label k. For a mass
    // symbol: coefficient Laurent degrees (expression must be on-shell).
    std::pair<int, int> p_degree() const;
    std::pair<int, int> e_degree(int k) const;
    std::pair<int, int> mass_degree(const std::string &sym) const;

    // Split into (smooth, contact) parts; contact = denominator-free terms
    // tagged or with feyn == 0 given expect_feyn.
    TensorExpr smooth_part() const;
    TensorExpr contact_part() const;

    // Multiply every term by (p^2 - mass^2): cancels Feynman denominators of
    // that mass exactly, turns p2 numerators loose otherwise.
    TensorExpr mul_p2_minus_m2(const std::string &mass) const;

    std::string str() const;
    std::string latex() const;

    void push_term(TensorTerm t); // canonicalizes incrementally
    void sort_merge();

  private:
    static void contract_atoms(TensorTerm &t, size_t ia, size_t ib,
                               const std::vector<std::string> &slots);
};

// Numeric four-vectors, metric (+,-,-,-).
struct FourVec {
    std::array<double, 4> v{0, 0, 0, 0};
    double &operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
};
double minkowski_dot(const FourVec &a, const FourVec &b);

struct NumericAssignment {
    FourVec p;
    std::map<int, FourVec> e;              // direction label -> vector
    std::map<std::string, double> symbols; // mass/coupling values
};

// Componentwise evaluation; eps denominators as principal values. Throws
// SingularEvaluation if |p.e_k| < 1e-12 for a used label.
std::vector<std::complex<double>> eval_numeric(const TensorExpr &ex, const NumericAssignment &as);

// Flat index helper for eval results: slots enumerated big-endian base 4.
size_t tensor_size(const TensorExpr &ex);

} // namespace slft
