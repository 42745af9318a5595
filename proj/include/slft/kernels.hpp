#pragma once

#include "slft/fields.hpp"

#include <random>

namespace slft {

// d_sd = 1 + (max p-homogeneity)/2, read off the canonical kernel.
Rational scaling_degree(const Kernel &k);

// Minimal mass-homogeneity of the kernel (field-level order is half).
int mass_order(const Kernel &k, const std::string &mass_symbol);

struct JpiJResult {
    bool JpiJ_equals_E = false;   // J pi J^tr == E(e,e) symbolically
    bool kernel_equals_minus_E = false; // <A(-e)A(e)> == -E(e,e) == Eq.(3) at e'=e
    bool Jtr_e_zero = false;      // e^mu J_{mu nu} == 0
    bool E_p_zero_massless = false; // massless: E_{mu nu} p^nu == 0 on shell
};
JpiJResult verify_JpiJ(const std::string &mass_symbol);

struct PositivityReport {
    int rank = -1;
    double min_eigenvalue = 0.0;
    double max_abs_eigenvalue = 0.0;
    int resampled = 0;
    int samples = 0;
    double e_p_residual = 0.0; // max |E p| over samples (massless checks)
};

// Seeded Gram-matrix sampling of the diagonal kernel <X(-e) X(e)> over
// on-shell p and spacelike e with p.e != 0.  Rank threshold: singular values
// above 1e-8 of the largest.
PositivityReport rank_and_positivity(const Kernel &k, int n_samples, uint64_t seed);

struct DvzSplit {
    TensorExpr helicity2;   // kernel of A^(2) = A + (1/2) E(e,e) a^(0), m -> 0
    TensorExpr trace_part;  // remainder; equals (1/6) E(e,e) x E(e',e')
    bool round_trip_zero = false;
    double trace_coeff_times6 = 0.0; // numeric projection; should be 1
    double a0_norm_times_3_over_2 = 0.0; // numeric; (3/2) M^{a0,a0} -> 1
};

// Massless limit decomposition of the spin-2 sl kernel. Throws on a kernel
// whose massless limit does not exist (mass_order < 0).
DvzSplit dvz_split(const FieldFamily &fam, uint64_t seed);

// Massless limit: drops positive mass powers after verifying none negative.
TensorExpr massless_limit(const TensorExpr &ex, const std::string &mass_symbol);

// Random on-shell momentum and admissible spacelike string direction.
struct SampleConfig {
    double mass = 1.0;     // 0 for massless shells
    double pe_min = 0.05;  // |p.e| floor before resampling
};
FourVec sample_onshell_p(std::mt19937_64 &rng, double mass);
FourVec sample_spacelike_e(std::mt19937_64 &rng);

} // namespace slft
