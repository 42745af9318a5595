#pragma once

#include "slft/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace slft {

// Direction labels used by kernels: 0 = left string e, 1 = right string e'.
inline constexpr int kLeftString = 0;
inline constexpr int kRightString = 1;

enum class Member {
    Scalar,       // pointlocal scalar (H, matter field)
    ProcaP,       // pointlocal potential A^P (s = 1, 2)
    FieldStrength,// F = curl A^P (s = 1); massless field strength for m = 0
    SLPotential,  // string-local potential A(x,e) (s = 1, 2; massless s = 1)
    EscortPhi,    // s = 1 scalar escort phi = I_e(A^P.e), d_eng = 0
    EscortA,      // s = 1 escort a = m*phi, d_eng = 1
    EscortVec,    // s = 2 vector escort a_nu = -(1/m) d^mu A_{mu nu}
    EscortScal,   // s = 2 scalar escort a = -(1/m) d^nu a_nu
    DeSitterU,    // u = d_e phi (densities only; no two-point kernel)
};

std::string member_name(Member m);
int member_rank(Member m, int spin);

struct FieldSpec {
    int spin = 0;
    std::string mass;  // mass symbol, empty = massless
    Member member = Member::Scalar;
    std::vector<std::string> indices;    // free tensor slots
    std::vector<std::string> derivs;     // derivative slots (applied outermost)
    bool stringlocal() const;
};

// The linked triple {pointlocal potential, field strength, sl potential,
// escorts} for one spin. Massless spin-1 carries no escorts (they are massive
// constructs); spin-0 is just the scalar.
struct FieldFamily {
    int spin = 0;
    std::string mass;
    std::vector<Member> members;

    FieldSpec spec(Member m, std::vector<std::string> indices = {},
                   std::vector<std::string> derivs = {}) const;
};

struct UnsupportedSpin : std::runtime_error {
    using std::runtime_error::runtime_error;
};

FieldFamily build_family(int spin, const std::string &mass_symbol);

// I_e applied to a field: phi = I_e(A^P.e) and the sl potentials arise this
// way. Exposed for the catalog tests; kernels use the composed member ops.
FieldSpec line_integral(const FieldFamily &fam, Member m);

// Escort descent chain a^(s-r), verified against Eq-level kernel identities
// by the caller. Empty for spin 0; error for massless families.
std::vector<Member> escort_chain(const FieldFamily &fam);

struct Kernel {
    FieldSpec left, right;
    TensorExpr expr;       // canonical, on-shell-reduced
    std::string shell;     // mass symbol of the shell ("" = massless)
};

// Momentum-space two-point kernel M^{X,Y}(p, e, e').  Convention: the left
// slot carries the conjugate direction, i.e. this is <X(x,-e) Y(x',e')> with
// the paper's iEps orientations; evaluate with e' = e for the diagonal kernel.
Kernel two_point_kernel(const FieldFamily &fam, const FieldSpec &X, const FieldSpec &Y);

// Same-label variant with both strings set to `label` (used by density-level
// propagators where lightlike strings are identified).
TensorExpr member_kernel_identified(const FieldFamily &fam, Member left,
                                    const std::vector<std::string> &lslots, Member right,
                                    const std::vector<std::string> &rslots, int label);

// Kernel of the combination A^P - A + (escort gradient sum) against Y; must
// canonicalize to zero for every family member Y.
TensorExpr pl_sl_identity(const FieldFamily &fam, Member against);

// J_{mu nu}(p,e) = eta - p_mu e_nu / (p.e)_{+ieps} as an all-lower expression.
TensorExpr J_matrix(const std::string &mu, const std::string &nu, int label);

// E_{mu nu}(e,e) = eta - (e_mu p_nu + p_mu e_nu)/(pe) + e^2 p_mu p_nu/(pe)^2.
TensorExpr E_pair(const std::string &mu, const std::string &nu, int label);

} // namespace slft
