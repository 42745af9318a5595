#include "slft/pair.hpp"

#include <algorithm>
#include <set>

namespace slft {

PairCheckResult check_pair_first_order(const PairCandidate &cand, const FieldModel &fm,
                                       uint64_t seed) {
    PairCheckResult res;
    auto [lo, hi] = cand.L.d_eng_range(fm);
    for (const auto &m : cand.L.monos) {
        Density single;
        single.monos.push_back(m);
        auto [l, h] = single.d_eng_range(fm);
        if (h > 4) res.d_eng_violations.push_back(single.str(fm));
    }
    (void)lo;
    (void)hi;
    Density lhs = apply_de(cand.L, fm);
    Density rhs = apply_de(cand.V, fm).divergence("mu");
    res.residual = reduce_mod_eom(lhs - rhs, fm);
    res.symbolic_zero = res.residual.is_zero();
    PlaneWaveOracle oracle(fm, seed);
    Density full = lhs - rhs; // oracle sees the unreduced combination
    res.oracle_residual = oracle.relative_residual(full, 20);
    res.oracle_zero = res.oracle_residual < 1e-8;
    return res;
}

namespace {

// index slots of a candidate monomial: each field contributes rank tensor
// slots; derivatives add slots; pairings contract them.
struct ProtoFactor {
    SpeciesId sp;
    bool conj;
    int nderiv;
};

void enumerate_multisets(const std::vector<std::pair<SpeciesId, bool>> &opts, int n,
                         std::vector<std::vector<int>> &out) {
    // multisets of size n over opts indices, nondecreasing
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int start, int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < (int)opts.size(); ++i) {
            cur.push_back(i);
            rec(i, left - 1);
            cur.pop_back();
        }
    };
    rec(0, n);
}

void pairings(std::vector<int> slots, std::vector<std::vector<std::pair<int, int>>> &out,
              std::vector<std::pair<int, int>> &cur) {
    if (slots.empty()) {
        out.push_back(cur);
        return;
    }
    int a = slots[0];
    for (size_t i = 1; i < slots.size(); ++i) {
        std::vector<int> rest;
        for (size_t j = 1; j < slots.size(); ++j)
            if (j != i) rest.push_back(slots[j]);
        cur.push_back({a, slots[i]});
        pairings(rest, out, cur);
        cur.pop_back();
    }
}

} // namespace

AnsatzBasis enumerate_monomials(const FieldModel &fm, const std::vector<SpeciesId> &content,
                                int min_fields, int max_fields, int free_rank, int d_eng_bound) {
    AnsatzBasis basis;
    std::set<std::string> seen;

    std::vector<std::pair<SpeciesId, bool>> opts;
    for (SpeciesId s : content) {
        opts.push_back({s, false});
        if (fm[s].complex_field) opts.push_back({s, true});
    }

    for (int nf = min_fields; nf <= max_fields; ++nf) {
        std::vector<std::vector<int>> multis;
        enumerate_multisets(opts, nf, multis);
        for (const auto &ms : multis) {
            int base_deng = 0, base_rank = 0;
            for (int oi : ms) {
                base_deng += fm[opts[oi].first].d_eng;
                base_rank += fm[opts[oi].first].rank;
            }
            int max_total_derivs = d_eng_bound - base_deng;
            if (max_total_derivs < 0) continue;
            for (int nd = 0; nd <= std::min(max_total_derivs, 3); ++nd) {
                int total_slots = base_rank + nd;
                if ((total_slots - free_rank) % 2 != 0 || total_slots < free_rank) continue;
                // distribute nd derivatives over nf fields
                std::vector<std::vector<int>> dists;
                std::vector<int> cur(nf, 0);
                std::function<void(int, int)> rec = [&](int i, int left) {
                    if (i == nf) {
                        if (left == 0) dists.push_back(cur);
                        return;
                    }
                    for (int k = 0; k <= left; ++k) {
                        cur[i] = k;
                        rec(i + 1, left - k);
                    }
                    cur[i] = 0;
                };
                rec(0, nd);
                for (const auto &dist : dists) {
                    // skip a full derivative on a lone factor pattern that is
                    // a pure total derivative of a single field (still a
                    // valid monomial; keep it, the gauge quotient handles it)
                    // build slot list
                    std::vector<std::pair<int, int>> slot_owner; // (factor, kind: 0 idx,1 deriv)
                    for (int i = 0; i < nf; ++i) {
                        for (int r = 0; r < fm[opts[ms[i]].first].rank; ++r)
                            slot_owner.push_back({i, 0});
                        for (int d = 0; d < dist[i]; ++d) slot_owner.push_back({i, 1});
                    }
                    int S = (int)slot_owner.size();
                    std::vector<int> all(S);
                    for (int i = 0; i < S; ++i) all[i] = i;
                    // choose which slot is free (if free_rank == 1)
                    std::vector<int> free_choices;
                    if (free_rank == 0)
                        free_choices.push_back(-1);
                    else
                        for (int i = 0; i < S; ++i) free_choices.push_back(i);
                    for (int fc : free_choices) {
                        std::vector<int> rest;
                        for (int i = 0; i < S; ++i)
                            if (i != fc) rest.push_back(i);
                        std::vector<std::vector<std::pair<int, int>>> prs;
                        std::vector<std::pair<int, int>> curp;
                        pairings(rest, prs, curp);
                        for (const auto &pr : prs) {
                            DensityMonomial mono;
                            std::vector<FieldFactor> fs(nf);
                            for (int i = 0; i < nf; ++i) {
                                fs[i].species = opts[ms[i]].first;
                                fs[i].conj = opts[ms[i]].second;
                            }
                            std::vector<std::string> slotname(S);
                            int dn = 0;
                            for (const auto &[a, b] : pr) {
                                ++dn;
                                slotname[a] = slotname[b] = "#" + std::to_string(dn);
                            }
                            if (fc >= 0) slotname[fc] = "mu";
                            // assign to factors
                            std::vector<int> iidx(nf, 0);
                            for (int sidx = 0; sidx < S; ++sidx) {
                                auto [fi, kind] = slot_owner[sidx];
                                if (kind == 0)
                                    fs[fi].indices.push_back(slotname[sidx]);
                                else
                                    fs[fi].derivs.push_back(slotname[sidx]);
                            }
                            mono.factors = std::move(fs);
                            Density d(free_rank ? std::vector<std::string>{"mu"}
                                                : std::vector<std::string>{});
                            d.monos.push_back(mono);
                            d = reduce_mod_eom(d, fm);
                            if (d.is_zero()) continue;
                            // normalize leading coefficient to 1
                            Coeff lead = d.monos[0].coeff;
                            Coeff inv = Coeff(1).div_monomial(
                                Coeff(lead.is_monomial() ? lead : Coeff(1)));
                            if (lead.is_monomial()) d = d * inv;
                            std::string key;
                            for (const auto &m : d.monos) key += monomial_key(m, fm) + "|";
                            if (!seen.insert(key).second) continue;
                            basis.elements.push_back(d);
                            basis.deriv_counts.push_back(nd);
                        }
                    }
                }
            }
        }
    }
    return basis;
}

namespace {

// Reduce `vec` modulo the span of `null` zeroing preferred coordinates first.
void gauge_fix(std::vector<RatFunc> &vec, std::vector<std::vector<RatFunc>> null,
               const std::vector<size_t> &pref_order) {
    size_t n = vec.size();
    std::vector<size_t> used;
    for (size_t pi = 0; pi < pref_order.size() && !null.empty(); ++pi) {
        size_t c = pref_order[pref_order.size() - 1 - pi]; // eliminate worst first
        size_t sel = null.size();
        for (size_t r = 0; r < null.size(); ++r) {
            if (std::find(used.begin(), used.end(), r) != used.end()) continue;
            if (!null[r][c].is_zero()) {
                sel = r;
                break;
            }
        }
        if (sel == null.size()) continue;
        used.push_back(sel);
        RatFunc pivot = null[sel][c];
        RatFunc f = vec[c] / pivot;
        for (size_t j = 0; j < n; ++j) vec[j] = vec[j] - f * null[sel][j];
        for (size_t r = 0; r < null.size(); ++r) {
            if (r == sel || null[r][c].is_zero()) continue;
            RatFunc fr = null[r][c] / pivot;
            for (size_t j = 0; j < n; ++j) null[r][j] = null[r][j] - fr * null[sel][j];
        }
    }
}

} // namespace

AnsatzResult solve_pair_ansatz(const FieldModel &fm, const std::vector<SpeciesId> &content,
                               const Density &germ, int d_eng_bound) {
    AnsatzResult out;
    AnsatzBasis Lb = enumerate_monomials(fm, content, 3, 4, 0, d_eng_bound);
    AnsatzBasis Vb = enumerate_monomials(fm, content, 3, 4, 1, d_eng_bound - 1);
    {
        // the germ normalization is fixed: remove its monomials from the basis
        Density g0 = reduce_mod_eom(germ, fm);
        std::set<std::string> germ_keys;
        for (const auto &m : g0.monos) germ_keys.insert(monomial_key(m, fm).substr(1));
        AnsatzBasis keep;
        for (size_t j = 0; j < Lb.elements.size(); ++j) {
            bool hit = false;
            for (const auto &m : Lb.elements[j].monos)
                if (germ_keys.count(monomial_key(m, fm).substr(1))) hit = true;
            if (!hit) {
                keep.elements.push_back(Lb.elements[j]);
                keep.deriv_counts.push_back(Lb.deriv_counts[j]);
            }
        }
        Lb = std::move(keep);
    }
    out.L_basis = Lb.elements;
    out.V_basis = Vb.elements;
    size_t nL = Lb.elements.size(), nV = Vb.elements.size();

    // unknowns: x (L coefficients), y (V coefficients)
    LinearSystem sys(nL + nV);
    for (size_t j = 0; j < nL; ++j) {
        Density de = reduce_mod_eom(apply_de(Lb.elements[j], fm), fm);
        for (const auto &m : de.monos) {
            std::string k = monomial_key(m, fm);
            if (k.empty()) continue;
            sys.add_term(k.substr(1), j, k[0] == '-' ? -m.coeff : m.coeff);
        }
    }
    for (size_t j = 0; j < nV; ++j) {
        Density dv = reduce_mod_eom(apply_de(Vb.elements[j], fm).divergence("mu"), fm);
        for (const auto &m : dv.monos) {
            std::string k = monomial_key(m, fm);
            if (k.empty()) continue;
            sys.add_term(k.substr(1), nL + j, k[0] == '-' ? (Coeff)(m.coeff) : -m.coeff);
        }
    }
    // germ contributes a fixed inhomogeneity: d_e(germ)
    Density dg = reduce_mod_eom(apply_de(germ, fm), fm);
    for (const auto &m : dg.monos) {
        std::string k = monomial_key(m, fm);
        if (k.empty()) continue;
        sys.add_rhs(k.substr(1), k[0] == '-' ? -m.coeff : m.coeff);
    }

    LinearSolution sol = sys.solve();
    if (!sol.consistent) {
        out.feasible = false;
        out.infeasible_witness = sol.witness;
        return out;
    }
    out.feasible = true;

    // gauge-fix: prefer fewer derivatives in L, then lexicographic
    std::vector<size_t> pref;
    std::vector<std::pair<std::pair<int, size_t>, size_t>> order;
    for (size_t j = 0; j < nL; ++j) order.push_back({{Lb.deriv_counts[j], j}, j});
    std::sort(order.begin(), order.end());
    for (auto &o : order) pref.push_back(o.second);
    for (size_t j = 0; j < nV; ++j) pref.push_back(nL + j);
    std::vector<RatFunc> vec = sol.particular;
    gauge_fix(vec, sol.nullspace, pref);

    // Quotient the raw solution space by the declared gauge: L-shifts by total
    // divergences (with V-compensation) and by exact d_e forms.
    {
        std::vector<std::vector<RatFunc>> gauge_dirs;
        auto coords_of = [&](const Density &dL, const Density &dV,
                             std::vector<RatFunc> &coords) -> bool {
            LinearSolution s1 = solve_density_combination(Lb.elements, -dL, fm);
            if (!s1.consistent) return false;
            LinearSolution s2 = solve_density_combination(Vb.elements, -dV, fm);
            if (!s2.consistent) return false;
            coords = s1.particular;
            coords.insert(coords.end(), s2.particular.begin(), s2.particular.end());
            return true;
        };
        AnsatzBasis Wb = enumerate_monomials(fm, content, 3, 4, 1, d_eng_bound - 1);
        for (const auto &w : Wb.elements) {
            std::vector<RatFunc> coords;
            if (coords_of(w.divergence("mu"), apply_de(w, fm), coords))
                gauge_dirs.push_back(std::move(coords));
        }
        AnsatzBasis Zb = enumerate_monomials(fm, content, 3, 4, 0, d_eng_bound);
        for (const auto &z : Zb.elements) {
            Density dz = apply_de(z, fm);
            if (dz.is_zero()) continue;
            std::vector<RatFunc> coords;
            if (coords_of(dz, Density({"mu"}), coords)) gauge_dirs.push_back(std::move(coords));
        }
        // rank of gauge_dirs within the nullspace modulo nothing: the declared
        // freedom; residual free directions = nullity - rank(gauge)
        size_t n = nL + nV;
        std::vector<std::vector<RatFunc>> rows = std::move(gauge_dirs);
        size_t rank = 0;
        std::vector<size_t> pivots;
        for (size_t c = 0; c < n && rank < rows.size(); ++c) {
            size_t sel = rows.size();
            for (size_t i = rank; i < rows.size(); ++i)
                if (!rows[i][c].is_zero()) {
                    sel = i;
                    break;
                }
            if (sel == rows.size()) continue;
            std::swap(rows[rank], rows[sel]);
            for (size_t i = 0; i < rows.size(); ++i) {
                if (i == rank || rows[i][c].is_zero()) continue;
                RatFunc f = rows[i][c] / rows[rank][c];
                for (size_t j = c; j < n; ++j) rows[i][j] = rows[i][j] - f * rows[rank][j];
            }
            ++rank;
        }
        int residual = (int)sol.nullspace.size() - (int)rank;
        out.solution_dim = residual < 0 ? 0 : residual;
    }

    PairCandidate cand;
    cand.germ = germ;
    cand.L = germ;
    for (size_t j = 0; j < nL; ++j)
        if (!vec[j].is_zero()) cand.L = cand.L + Lb.elements[j] * LinearSolution::as_coeff(vec[j]);
    cand.L.canonicalize(fm);
    cand.V = Density({"mu"});
    for (size_t j = 0; j < nV; ++j)
        if (!vec[nL + j].is_zero())
            cand.V = cand.V + Vb.elements[j] * LinearSolution::as_coeff(vec[nL + j]);
    cand.V.canonicalize(fm);
    out.solved = std::move(cand);
    return out;
}

bool equal_mod_div_and_de(const Density &a, const Density &b, const FieldModel &fm,
                          const std::vector<SpeciesId> &content, int d_eng_bound) {
    Density diff = reduce_mod_eom(a - b, fm);
    if (diff.is_zero()) return true;
    // candidates: total divergences of vector monomials and d_e of scalars
    AnsatzBasis Wb = enumerate_monomials(fm, content, diff.monos.empty() ? 3 : 2, 4, 1,
                                         d_eng_bound - 1);
    AnsatzBasis Zb = enumerate_monomials(fm, content, 2, 4, 0, d_eng_bound);
    std::vector<Density> basis;
    for (const auto &w : Wb.elements) basis.push_back(w.divergence("mu"));
    for (const auto &z : Zb.elements) basis.push_back(apply_de(z, fm));
    LinearSolution sol = solve_density_combination(basis, -diff, fm);
    return sol.consistent;
}

} // namespace slft
