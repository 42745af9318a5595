#pragma once

#include "slft/density.hpp"

#include <complex>
#include <random>

namespace slft {

// Random c-number plane-wave solutions of the free field equations, built
// from the same intertwiner conventions as the kernels.  Family members share
// one set of Wigner amplitudes, so the linear inter-field relations hold
// exactly and a density identity can be tested by plain evaluation.
class PlaneWaveOracle {
  public:
    PlaneWaveOracle(const FieldModel &fm, uint64_t seed, int n_modes = 2);

    // Value at a spacetime point; free slots of the density taken from
    // `free_components` (slot name -> index 0..3).
    std::complex<double> eval(const Density &d, const FourVec &x,
                              const std::map<std::string, int> &free_components = {}) const;

    // Max |d(x)| over sample points and free components, relative to the
    // largest single-monomial magnitude encountered (the cancellation scale).
    double relative_residual(const Density &d, int n_points = 20) const;

    // Convenience: residual < tol at 20 points.
    bool is_zero(const Density &d, double tol = 1e-8) const;

    const std::map<std::string, double> &symbol_values() const { return symvals_; }
    void set_symbol(const std::string &s, double v);

  private:
    struct Mode {
        FourVec p;                      // on-shell, contravariant
        std::vector<std::complex<double>> amp_ann, amp_cre; // per polarization
    };
    struct FamilyModes {
        std::vector<Mode> modes;
        int n_pol = 1;
    };

    const FieldModel &fm_;
    std::map<std::string, double> symvals_;
    FourVec e_;  // shared string direction, spacelike
    FourVec t_;  // de Sitter tangent used for u-type fields
    std::vector<FamilyModes> fam_modes_;   // per family index
    std::map<SpeciesId, FamilyModes> classical_modes_; // external symbols
    mutable std::mt19937_64 rng_;

    // polarization tensor component (lowered indices) for species sp,
    // polarization k, mode m; idx has size rank.
    std::complex<double> pol_component(const Species &sp, const Mode &mode, int pol,
                                       const std::vector<int> &idx, bool creation) const;
    std::complex<double> factor_value(const FieldFactor &f, const FourVec &x,
                                      const std::vector<int> &didx,
                                      const std::vector<int> &tidx) const;
};

} // namespace slft
