#include "slft/rewrite.hpp"

#include <algorithm>
#include <set>

namespace slft {

namespace {

// One rewriting pass over a single monomial; returns the replacement density
// if a rule fired.
std::optional<Density> step(const DensityMonomial &m, const std::vector<std::string> &fs,
                            const FieldModel &fm) {
    // count occurrences of each dummy inside one factor and across the term
    for (size_t i = 0; i < m.factors.size(); ++i) {
        const FieldFactor &f = m.factors[i];
        const Species &sp = fm[f.species];

        // family substitution
        if (sp.subst) {
            DensityMonomial nm = m;
            nm.coeff = m.coeff * sp.subst->first;
            nm.factors[i].species = sp.subst->second;
            Density r(fs);
            r.monos.push_back(std::move(nm));
            return r;
        }
        if (sp.classical && !sp.conserved) continue;

        // Klein-Gordon: a dummy repeated inside this factor's derivative list
        for (size_t a = 0; a + 1 < f.derivs.size(); ++a) {
            if (!is_dummy(f.derivs[a])) continue;
            for (size_t b = a + 1; b < f.derivs.size(); ++b) {
                if (f.derivs[a] != f.derivs[b]) continue;
                if (sp.classical) continue; // classical fields keep their box
                Coeff kg = sp.kg_coeff ? *sp.kg_coeff
                                       : (sp.mass.empty() ? Coeff(0) : -Coeff::symbol(sp.mass, 2));
                Density r(fs);
                if (!kg.is_zero()) {
                    DensityMonomial nm = m;
                    nm.coeff = m.coeff * kg;
                    auto &dv = nm.factors[i].derivs;
                    dv.erase(dv.begin() + b);
                    dv.erase(dv.begin() + a);
                    r.monos.push_back(std::move(nm));
                }
                return r;
            }
        }

        // divergence: a dummy shared between this factor's derivs and indices
        if (sp.has_div_rule || (sp.classical && sp.conserved)) {
            for (size_t a = 0; a < f.derivs.size(); ++a) {
                if (!is_dummy(f.derivs[a])) continue;
                for (size_t b = 0; b < f.indices.size(); ++b) {
                    if (f.derivs[a] != f.indices[b]) continue;
                    int sign = 1;
                    if (sp.sym == Sym2::Antisymmetric && b == 1) sign = -1;
                    Coeff c;
                    SpeciesId target = -1;
                    if (sp.classical && sp.conserved) {
                        c = Coeff(0);
                    } else {
                        c = sp.div_rule->first;
                        target = sp.div_rule->second;
                    }
                    Density r(fs);
                    if (!c.is_zero() && target >= 0) {
                        DensityMonomial nm = m;
                        nm.coeff = m.coeff * c * Coeff(sign);
                        auto &ff = nm.factors[i];
                        ff.species = target;
                        ff.derivs.erase(ff.derivs.begin() + a);
                        ff.indices.erase(ff.indices.begin() + b);
                        r.monos.push_back(std::move(nm));
                    }
                    return r;
                }
            }
        }

        // trace condition
        if (sp.traceless && f.indices.size() == 2 && f.indices[0] == f.indices[1])
            return Density(fs);
    }
    return std::nullopt;
}

} // namespace

Density reduce_mod_eom(Density d, const FieldModel &fm) {
    d.canonicalize(fm);
    bool changed = true;
    int guard = 0;
    while (changed) {
        if (++guard > 10000)
            throw StructuralError("reduce_mod_eom: rewrite did not terminate");
        changed = false;
        Density out(d.free_slots);
        for (const auto &m : d.monos) {
            auto r = step(m, d.free_slots, fm);
            if (r) {
                changed = true;
                for (auto &nm : r->monos) out.monos.push_back(nm);
            } else {
                out.monos.push_back(m);
            }
        }
        out.canonicalize(fm);
        d = std::move(out);
    }
    return d;
}

Density apply_de(const Density &d, const FieldModel &fm) {
    Density out(d.free_slots);
    for (const auto &m : d.monos) {
        for (size_t i = 0; i < m.factors.size(); ++i) {
            const FieldFactor &f = m.factors[i];
            const Species &sp = fm[f.species];
            if (sp.classical) continue; // external symbols are e-independent
            if (!sp.de_rule) {
                if (!sp.stringlocal) continue; // pointlocal: d_e = 0
                throw StructuralError("apply_de: no d_e rule registered for species " + sp.name);
            }
            for (const auto &rt : *sp.de_rule) {
                DensityMonomial nm = m;
                nm.coeff = m.coeff * rt.coeff;
                FieldFactor nf;
                nf.species = rt.target;
                nf.conj = f.conj;
                nf.derivs = f.derivs;
                nf.indices.resize(fm[rt.target].rank);
                for (size_t k = 0; k < f.indices.size(); ++k) {
                    int to = rt.idx_map.empty() ? (int)k : rt.idx_map[k];
                    if (to < 0)
                        nf.derivs.push_back(f.indices[k]);
                    else
                        nf.indices[to] = f.indices[k];
                }
                std::sort(nf.derivs.begin(), nf.derivs.end());
                nm.factors[i] = std::move(nf);
                out.monos.push_back(std::move(nm));
            }
        }
    }
    out.canonicalize(fm);
    return out;
}

void LinearSystem::add_term(const std::string &row_key, size_t j, const Coeff &c) {
    auto &row = rows_[row_key];
    if (row.first.empty()) row.first.assign(n_, Coeff());
    row.first[j] += c;
}

void LinearSystem::add_rhs(const std::string &row_key, const Coeff &c) {
    auto &row = rows_[row_key];
    if (row.first.empty()) row.first.assign(n_, Coeff());
    row.second += c;
}

LinearSolution LinearSystem::solve() const {
    size_t n = n_;
    std::vector<std::vector<RatFunc>> M;
    std::vector<RatFunc> rhs;
    std::vector<std::string> keys;
    for (const auto &[k, row] : rows_) {
        std::vector<RatFunc> r;
        r.reserve(n);
        for (const auto &c : row.first) r.push_back(RatFunc(c));
        M.push_back(std::move(r));
        rhs.push_back(RatFunc(row.second));
        keys.push_back(k);
    }
    size_t rows = M.size();
    std::vector<int> pivot_col_of_row(rows, -1);
    size_t r = 0;
    for (size_t c = 0; c < n && r < rows; ++c) {
        size_t sel = rows;
        for (size_t i = r; i < rows; ++i)
            if (!M[i][c].is_zero()) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        std::swap(M[r], M[sel]);
        std::swap(rhs[r], rhs[sel]);
        std::swap(keys[r], keys[sel]);
        RatFunc p = M[r][c];
        for (size_t j = c; j < n; ++j) M[r][j] = M[r][j] / p;
        rhs[r] = rhs[r] / p;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c].is_zero()) continue;
            RatFunc f = M[i][c];
            for (size_t j = c; j < n; ++j) M[i][j] = M[i][j] - f * M[r][j];
            rhs[i] = rhs[i] - f * rhs[r];
        }
        pivot_col_of_row[r] = (int)c;
        ++r;
    }
    LinearSolution sol;
    for (size_t i = r; i < rows; ++i)
        if (!rhs[i].is_zero()) {
            sol.consistent = false;
            sol.witness = keys[i];
            return sol;
        }
    std::vector<int> pivot_row_of_col(n, -1);
    for (size_t i = 0; i < r; ++i) pivot_row_of_col[pivot_col_of_row[i]] = (int)i;
    // RHS convention: rows are sum_j A_ij x_j + b_i == 0, so x = -b on pivots.
    sol.particular.assign(n, RatFunc());
    for (size_t c = 0; c < n; ++c)
        if (pivot_row_of_col[c] >= 0) sol.particular[c] = -rhs[pivot_row_of_col[c]];
    for (size_t c = 0; c < n; ++c) {
        if (pivot_row_of_col[c] >= 0) continue;
        std::vector<RatFunc> vec(n, RatFunc());
        vec[c] = RatFunc(Coeff(1));
        for (size_t cc = 0; cc < n; ++cc)
            if (pivot_row_of_col[cc] >= 0) vec[cc] = -M[pivot_row_of_col[cc]][c];
        sol.nullspace.push_back(std::move(vec));
    }
    return sol;
}

Coeff LinearSolution::as_coeff(const RatFunc &v) {
    Coeff c;
    if (!v.to_coeff(c))
        throw StructuralError("linear solve: non-monomial denominator in solution");
    return c;
}

LinearSolution solve_density_combination(const std::vector<Density> &basis, const Density &rhs,
                                         const FieldModel &fm) {
    LinearSystem sys(basis.size());
    for (size_t j = 0; j < basis.size(); ++j) {
        Density b = reduce_mod_eom(basis[j], fm);
        for (const auto &m : b.monos) {
            std::string k = monomial_key(m, fm);
            if (k.empty()) continue;
            Coeff c = k[0] == '-' ? -m.coeff : m.coeff;
            sys.add_term(k.substr(1), j, c);
        }
    }
    Density rr = reduce_mod_eom(rhs, fm);
    for (const auto &m : rr.monos) {
        std::string k = monomial_key(m, fm);
        if (k.empty()) continue;
        Coeff c = k[0] == '-' ? -m.coeff : m.coeff;
        sys.add_rhs(k.substr(1), c);
    }
    return sys.solve();
}

std::vector<Density> divergence_candidates(const Density &d, const FieldModel &fm,
                                           int d_eng_bound) {
    std::set<std::string> seen;
    std::vector<Density> out;
    for (const auto &m : d.monos) {
        for (size_t i = 0; i < m.factors.size(); ++i) {
            const auto &f = m.factors[i];
            for (size_t a = 0; a < f.derivs.size(); ++a) {
                const std::string &dum = f.derivs[a];
                if (!is_dummy(dum)) continue;
                // locate the partner occurrence
                DensityMonomial w = m;
                w.coeff = Coeff(1);
                auto &wf = w.factors[i];
                wf.derivs.erase(wf.derivs.begin() + a);
                // rename the remaining occurrence of dum to the free slot
                int count = 0;
                for (auto &ff : w.factors) {
                    for (auto &dd : ff.derivs)
                        if (dd == dum) {
                            dd = "mu";
                            ++count;
                        }
                    for (auto &ii : ff.indices)
                        if (ii == dum) {
                            ii = "mu";
                            ++count;
                        }
                }
                if (count != 1) continue; // dummy was repeated inside one factor
                Density cand({"mu"});
                cand.monos.push_back(w);
                cand.canonicalize(fm);
                if (cand.is_zero()) continue;
                auto [lo, hi] = cand.d_eng_range(fm);
                if (hi > d_eng_bound) continue;
                std::string key = monomial_key(cand.monos[0], fm);
                if (seen.insert(key).second) {
                    cand.monos[0].coeff = Coeff(1);
                    out.push_back(std::move(cand));
                }
            }
        }
    }
    return out;
}

std::optional<DivergenceMatch> match_divergence(const Density &d, const FieldModel &fm,
                                                int d_eng_bound) {
    if (!d.free_slots.empty()) throw StructuralError("match_divergence: density has a free index");
    Density dd = reduce_mod_eom(d, fm);
    if (dd.is_zero()) {
        DivergenceMatch out;
        out.W = Density({"mu"});
        return out;
    }
    std::vector<Density> cands = divergence_candidates(dd, fm, d_eng_bound);
    // widen with the enumerated vector monomials over the species present
    {
        std::set<SpeciesId> sps;
        size_t nf_min = 99, nf_max = 0;
        for (const auto &m : dd.monos) {
            for (const auto &f : m.factors) {
                sps.insert(f.species);
                const Species &sp = fm[f.species];
                if (sp.subst) sps.insert(sp.subst->second);
            }
            nf_min = std::min(nf_min, m.factors.size());
            nf_max = std::max(nf_max, m.factors.size());
        }
        std::vector<SpeciesId> content(sps.begin(), sps.end());
        AnsatzBasis extra = enumerate_monomials(fm, content, (int)nf_min, (int)nf_max, 1,
                                                d_eng_bound);
        std::set<std::string> seen;
        for (const auto &c : cands) {
            std::string k;
            for (const auto &m : c.monos) k += monomial_key(m, fm) + "|";
            seen.insert(k);
        }
        for (const auto &c : extra.elements) {
            std::string k;
            for (const auto &m : c.monos) k += monomial_key(m, fm) + "|";
            if (seen.insert(k).second) cands.push_back(c);
        }
    }
    if (cands.empty()) return std::nullopt;
    std::vector<Density> divs;
    divs.reserve(cands.size());
    for (const auto &c : cands) divs.push_back(c.divergence("mu"));
    LinearSolution sol = solve_density_combination(divs, -dd, fm);
    if (!sol.consistent) return std::nullopt;
    DivergenceMatch out;
    out.W = Density({"mu"});
    for (size_t j = 0; j < cands.size(); ++j) {
        if (sol.particular[j].is_zero()) continue;
        out.W = out.W + cands[j] * LinearSolution::as_coeff(sol.particular[j]);
    }
    out.W.canonicalize(fm);
    out.basis = std::move(cands);
    // verify by reverse substitution
    Density resid = reduce_mod_eom(dd - out.W.divergence("mu"), fm);
    if (!resid.is_zero()) return std::nullopt;
    return out;
}

std::optional<Density> de_antiderivative(const Density &d, const FieldModel &fm,
                                         const std::vector<Density> &basis) {
    std::vector<Density> des;
    des.reserve(basis.size());
    for (const auto &b : basis) des.push_back(apply_de(b, fm));
    LinearSolution sol = solve_density_combination(des, -d, fm);
    if (!sol.consistent) return std::nullopt;
    Density out;
    for (size_t j = 0; j < basis.size(); ++j) {
        if (sol.particular[j].is_zero()) continue;
        out = out + basis[j] * LinearSolution::as_coeff(sol.particular[j]);
    }
    out.canonicalize(fm);
    return out;
}

} // namespace slft
