#include "slft/planewave.hpp"

#include <cmath>

namespace slft {

namespace {

using cd = std::complex<double>;

FourVec lower(const FourVec &v) {
    FourVec r;
    for (int i = 0; i < 4; ++i) r[i] = kMetricDiag[i] * v[i];
    return r;
}

// massive spin-1 polarization vector (contravariant), spatial axis k = 0,1,2
FourVec massive_pol(const FourVec &p, double m, int k) {
    std::array<double, 3> n{0, 0, 0};
    n[k] = 1.0;
    double pn = p[1] * n[0] + p[2] * n[1] + p[3] * n[2];
    FourVec v;
    v[0] = pn / m;
    for (int i = 0; i < 3; ++i) v[i + 1] = n[i] + p[i + 1] * pn / (m * (p[0] + m));
    return v;
}

// two spatial unit vectors orthogonal to the spatial part of p
std::array<FourVec, 2> transverse_pols(const FourVec &p) {
    std::array<double, 3> q{p[1], p[2], p[3]};
    double qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
    std::array<double, 3> a{1, 0, 0};
    if (std::fabs(q[0]) / (qn > 0 ? qn : 1) > 0.9) a = {0, 1, 0};
    std::array<double, 3> e1{q[1] * a[2] - q[2] * a[1], q[2] * a[0] - q[0] * a[2],
                             q[0] * a[1] - q[1] * a[0]};
    double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (auto &x : e1) x /= n1;
    std::array<double, 3> e2{(q[1] * e1[2] - q[2] * e1[1]) / qn, (q[2] * e1[0] - q[0] * e1[2]) / qn,
                             (q[0] * e1[1] - q[1] * e1[0]) / qn};
    FourVec v1, v2;
    for (int i = 0; i < 3; ++i) {
        v1[i + 1] = e1[i];
        v2[i + 1] = e2[i];
    }
    return {v1, v2};
}

} // namespace

void PlaneWaveOracle::set_symbol(const std::string &s, double v) { symvals_[s] = v; }

PlaneWaveOracle::PlaneWaveOracle(const FieldModel &fm, uint64_t seed, int n_modes)
    : fm_(fm), rng_(seed) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.6, 1.7);

    static const char *common[] = {"g", "c", "c1", "c2", "kappa"};
    for (const char *s : common) symvals_[s] = u(rng_);
    for (const auto &ms : fm.mass_symbols) symvals_[ms] = u(rng_);

    for (;;) {
        for (int i = 0; i < 4; ++i) e_[i] = g(rng_);
        if (minkowski_dot(e_, e_) < -0.1) break;
    }
    double en = std::sqrt(-minkowski_dot(e_, e_));
    for (int i = 0; i < 4; ++i) e_[i] /= en;
    for (int i = 0; i < 4; ++i) t_[i] = g(rng_);

    for (const auto &fam : fm.families) {
        FamilyModes Fm;
        double m = fam.mass.empty() ? 0.0 : symvals_[fam.mass];
        int npol = 1;
        if (fam.spin == 1) npol = fam.mass.empty() ? 2 : 3;
        if (fam.spin == 2) npol = fam.mass.empty() ? 2 : 5;
        Fm.n_pol = npol;
        for (int j = 0; j < n_modes; ++j) {
            Mode md;
            for (;;) {
                for (int i = 1; i < 4; ++i) md.p[i] = g(rng_);
                md.p[0] = std::sqrt(m * m + md.p[1] * md.p[1] + md.p[2] * md.p[2] +
                                    md.p[3] * md.p[3]);
                if (std::fabs(minkowski_dot(md.p, e_)) > 0.2) break;
            }
            for (int k = 0; k < npol; ++k) {
                md.amp_ann.push_back(cd(g(rng_), g(rng_)));
                md.amp_cre.push_back(cd(g(rng_), g(rng_)));
            }
            Fm.modes.push_back(std::move(md));
        }
        fam_modes_.push_back(std::move(Fm));
    }

    for (size_t sid = 0; sid < fm.species.size(); ++sid) {
        const Species &sp = fm.species[sid];
        if (!sp.classical) continue;
        FamilyModes Fm;
        Fm.n_pol = 1;
        for (int j = 0; j < n_modes; ++j) {
            Mode md;
            for (;;) {
                for (int i = 0; i < 4; ++i) md.p[i] = g(rng_);
                if (std::fabs(minkowski_dot(md.p, md.p)) > 0.3) break;
            }
            md.amp_ann.push_back(cd(g(rng_), g(rng_)));
            md.amp_cre.push_back(std::conj(md.amp_ann[0]));
            Fm.modes.push_back(std::move(md));
        }
        classical_modes_[(SpeciesId)sid] = std::move(Fm);
    }
}

// Annihilation-side polarization tensor component (indices lowered).
std::complex<double> PlaneWaveOracle::pol_component(const Species &sp, const Mode &mode, int pol,
                                                    const std::vector<int> &idx,
                                                    bool /*creation: handled by caller*/) const {
    const FourVec &p = mode.p;
    double m = sp.mass.empty() ? 0.0 : symvals_.at(sp.mass);
    double pe = minkowski_dot(p, e_);
    double pt = minkowski_dot(p, t_);
    cd I(0, 1);

    if (sp.classical) {
        if (sp.rank == 0) return 1.0;
        FourVec c;
        for (int i = 0; i < 4; ++i) c[i] = std::sin(1.0 + i + p[i]);
        if (sp.conserved) {
            double cp = minkowski_dot(c, p), pp = minkowski_dot(p, p);
            for (int i = 0; i < 4; ++i) c[i] -= p[i] * cp / pp;
        }
        return lower(c)[idx[0]];
    }

    if (sp.member == Member::Scalar) return 1.0;

    const FieldFamily &fam = fm_.families[sp.family];
    if (fam.spin == 1) {
        FourVec v;
        if (sp.mass.empty())
            v = transverse_pols(p)[pol];
        else
            v = massive_pol(p, m, pol);
        double ve = minkowski_dot(v, e_);
        double vt = minkowski_dot(v, t_);
        switch (sp.member) {
            case Member::ProcaP: return lower(v)[idx[0]];
            case Member::FieldStrength: {
                FourVec pl = lower(p), vl = lower(v);
                return -I * (pl[idx[0]] * vl[idx[1]] - pl[idx[1]] * vl[idx[0]]);
            }
            case Member::SLPotential: {
                FourVec Jv;
                for (int i = 0; i < 4; ++i) Jv[i] = v[i] - p[i] * ve / pe;
                return lower(Jv)[idx[0]];
            }
            case Member::EscortPhi: return -I * ve / pe;
            case Member::EscortA: return -I * m * ve / pe;
            case Member::DeSitterU: return -I * (vt * pe - ve * pt) / (pe * pe);
            default: break;
        }
        throw StructuralError("oracle: no mode for member " + sp.name);
    }

    // spin 2
    if (sp.mass.empty()) {
        auto eps = transverse_pols(p);
        FourVec J1, J2;
        for (int i = 0; i < 4; ++i) {
            J1[i] = eps[0][i] - p[i] * minkowski_dot(eps[0], e_) / pe;
            J2[i] = eps[1][i] - p[i] * minkowski_dot(eps[1], e_) / pe;
        }
        auto s_of = [&](const FourVec &ep) {
            return minkowski_dot(t_, ep) - pt * minkowski_dot(e_, ep) / pe;
        };
        switch (sp.member) {
            case Member::SLPotential: {
                auto st = [&](const FourVec &a, const FourVec &b) {
                    return lower(a)[idx[0]] * lower(b)[idx[1]];
                };
                if (pol == 0) return st(J1, J1) - st(J2, J2);
                return st(J1, J2) + st(J2, J1);
            }
            case Member::EscortVec: {
                double s1 = s_of(eps[0]), s2 = s_of(eps[1]);
                cd w;
                if (pol == 0)
                    w = -(s1 * lower(J1)[idx[0]] - s2 * lower(J2)[idx[0]]) / pe;
                else
                    w = -(s1 * lower(J2)[idx[0]] + s2 * lower(J1)[idx[0]]) / pe;
                return I * w;
            }
            default: break;
        }
        throw StructuralError("oracle: no mode for massless spin-2 member " + sp.name);
    }

    static const int pairs[5][2] = {{0, 0}, {1, 1}, {0, 1}, {0, 2}, {1, 2}};
    int a = pairs[pol][0], b = pairs[pol][1];
    FourVec va = massive_pol(p, m, a), vb = massive_pol(p, m, b);
    auto vcomp = [&](int mu, int nu) -> double {
        double s = lower(va)[mu] * lower(vb)[nu] + lower(vb)[mu] * lower(va)[nu];
        if (a == b) {
            double tracefix = 0;
            for (int k = 0; k < 3; ++k) {
                FourVec vk = massive_pol(p, m, k);
                tracefix += lower(vk)[mu] * lower(vk)[nu];
            }
            s -= (2.0 / 3.0) * tracefix;
        }
        return s;
    };
    auto slcomp = [&](int mu, int nu) -> double {
        // (JJv)_{mu nu}: J_mu^al = delta - p_mu(low) e^al / (pe)
        auto Jrow = [&](int lo, int al) {
            return (lo == al ? 1.0 : 0.0) - lower(p)[lo] * e_[al] / pe;
        };
        double s = 0;
        for (int al = 0; al < 4; ++al)
            for (int be = 0; be < 4; ++be) s += Jrow(mu, al) * Jrow(nu, be) * vcomp(al, be);
        return s;
    };
    switch (sp.member) {
        case Member::ProcaP: return vcomp(idx[0], idx[1]);
        case Member::SLPotential: return slcomp(idx[0], idx[1]);
        case Member::EscortVec: {
            cd acc = 0;
            for (int mu = 0; mu < 4; ++mu) acc += p[mu] * slcomp(mu, idx[0]);
            return I / m * acc;
        }
        case Member::EscortScal: {
            // a0 = -(1/m) d^nu a1_nu
            cd acc = 0;
            for (int nu = 0; nu < 4; ++nu) {
                cd a1 = 0;
                for (int mu = 0; mu < 4; ++mu) a1 += p[mu] * slcomp(mu, nu);
                acc += p[nu] * (I / m) * a1;
            }
            return I / m * acc;
        }
        default: break;
    }
    throw StructuralError("oracle: no mode for massive spin-2 member " + sp.name);
}

std::complex<double> PlaneWaveOracle::factor_value(const FieldFactor &f, const FourVec &x,
                                                   const std::vector<int> &didx,
                                                   const std::vector<int> &tidx) const {
    const Species &sp = fm_[f.species];
    const FamilyModes &Fm = sp.classical ? classical_modes_.at(f.species) : fam_modes_[sp.family];
    cd I(0, 1), total = 0;
    for (const auto &mode : Fm.modes) {
        double px = minkowski_dot(mode.p, x);
        cd ann_phase = std::exp(-I * px), cre_phase = std::exp(I * px);
        cd dfac_ann = 1.0, dfac_cre = 1.0;
        for (int c : didx) {
            dfac_ann *= -I * lower(mode.p)[c];
            dfac_cre *= I * lower(mode.p)[c];
        }
        for (int k = 0; k < Fm.n_pol; ++k) {
            cd v = pol_component(sp, mode, k, tidx, false);
            cd A = mode.amp_ann[k];
            cd B = sp.complex_field ? mode.amp_cre[k] : std::conj(mode.amp_ann[k]);
            if (!f.conj) {
                // X = A v e^{-ipx} + B conj(v) e^{+ipx}
                total += A * v * dfac_ann * ann_phase + B * std::conj(v) * dfac_cre * cre_phase;
            } else {
                // X* = conj(A) conj(v) e^{+ipx} + conj(B) v e^{-ipx}
                total += std::conj(A) * std::conj(v) * dfac_cre * cre_phase +
                         std::conj(B) * v * dfac_ann * ann_phase;
            }
        }
    }
    return total;
}

std::complex<double> PlaneWaveOracle::eval(const Density &d, const FourVec &x,
                                           const std::map<std::string, int> &free_components) const {
    cd total = 0;
    for (const auto &m : d.monos) {
        std::vector<std::string> dummies;
        for (const auto &f : m.factors) {
            for (const auto &i : f.indices)
                if (is_dummy(i) && std::find(dummies.begin(), dummies.end(), i) == dummies.end())
                    dummies.push_back(i);
            for (const auto &dd : f.derivs)
                if (is_dummy(dd) && std::find(dummies.begin(), dummies.end(), dd) == dummies.end())
                    dummies.push_back(dd);
        }
        size_t n = dummies.size();
        size_t lim = 1;
        for (size_t i = 0; i < n; ++i) lim *= 4;
        cd msum = 0;
        for (size_t enc = 0; enc < lim; ++enc) {
            std::map<std::string, int> assign = free_components;
            size_t rest = enc;
            double weight = 1.0;
            for (size_t i = 0; i < n; ++i) {
                int c = int(rest % 4);
                rest /= 4;
                assign[dummies[i]] = c;
                weight *= kMetricDiag[c];
            }
            cd prod = weight;
            for (const auto &f : m.factors) {
                std::vector<int> didx, tidx;
                for (const auto &dd : f.derivs) didx.push_back(assign.at(dd));
                for (const auto &ii : f.indices) tidx.push_back(assign.at(ii));
                prod *= factor_value(f, x, didx, tidx);
            }
            msum += prod;
        }
        cd cval = 0;
        for (const auto &[mono, q] : m.coeff.terms) {
            double mv = 1.0;
            for (const auto &[s, p] : mono.exp) {
                auto it = symvals_.find(s);
                if (it == symvals_.end())
                    throw StructuralError("oracle: no numeric value for symbol " + s);
                mv *= std::pow(it->second, p);
            }
            cval += mv * cd(q.re.convert_to<double>(), q.im.convert_to<double>());
        }
        total += cval * msum;
    }
    return total;
}

double PlaneWaveOracle::relative_residual(const Density &d, int n_points) const {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int pt = 0; pt < n_points; ++pt) {
        FourVec x;
        for (int i = 0; i < 4; ++i) x[i] = u(rng_);
        size_t lim = 1;
        for (size_t i = 0; i < d.free_slots.size(); ++i) lim *= 4;
        for (size_t enc = 0; enc < lim; ++enc) {
            std::map<std::string, int> fc;
            size_t rest = enc;
            for (const auto &s : d.free_slots) {
                fc[s] = int(rest % 4);
                rest /= 4;
            }
            cd val = eval(d, x, fc);
            double scale = 0.0;
            for (const auto &m : d.monos) {
                Density single;
                single.free_slots = d.free_slots;
                single.monos.push_back(m);
                scale = std::max(scale, std::abs(eval(single, x, fc)));
            }
            if (scale < 1e-12) scale = 1.0;
            worst = std::max(worst, std::abs(val) / scale);
        }
    }
    return worst;
}

bool PlaneWaveOracle::is_zero(const Density &d, double tol) const {
    return relative_residual(d, 20) < tol;
}

} // namespace slft
