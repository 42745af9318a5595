#include "slft/kernels.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace slft {

Rational scaling_degree(const Kernel &k) {
    auto [lo, hi] = k.expr.p_degree();
    (void)lo;
    return Rational(1) + Rational(hi, 2);
}

int mass_order(const Kernel &k, const std::string &mass_symbol) {
    return k.expr.mass_degree(mass_symbol).first;
}

JpiJResult verify_JpiJ(const std::string &mass_symbol) {
    JpiJResult r;
    FieldFamily fam = build_family(1, mass_symbol);

    // J pi J^tr with both string labels = left label (the diagonal kernel).
    TensorExpr Ja = J_matrix("mu", "_a", kLeftString);
    TensorExpr Jb = J_matrix("nu", "_b", kLeftString);
    TensorExpr pi = TensorExpr::eta("_a2", "_b2") -
                    (TensorExpr::momentum("_a2") * TensorExpr::momentum("_b2"))
                            .reorder_slots({"_a2", "_b2"}) *
                        Coeff::symbol(mass_symbol, -2);
    TensorExpr JpiJ = ((Ja * pi).contract("_a", "_a2") * Jb).contract("_b2", "_b");
    JpiJ = JpiJ.reorder_slots({"mu", "nu"});
    TensorExpr E = E_pair("mu", "nu", kLeftString);
    r.JpiJ_equals_E = (JpiJ == E);

    // Diagonal kernel <A(-e) A(e)>: identify the right string with the left.
    TensorExpr diag = member_kernel_identified(fam, Member::SLPotential, {"mu"},
                                               Member::SLPotential, {"nu"}, kLeftString);
    TensorExpr Eident = E; // E_pair already uses the left label only
    r.kernel_equals_minus_E = (diag == -Eident);

    // J^tr e = 0: contract J's first slot with e.
    TensorExpr Je = (J_matrix("_m", "nu", kLeftString) * TensorExpr::direction(kLeftString, "_x"))
                        .contract("_m", "_x");
    r.Jtr_e_zero = Je.is_zero();

    // Massless E_{mu nu} p^nu = 0 on the zero-mass shell.
    FieldFamily ml = build_family(1, "");
    Kernel mk = two_point_kernel(ml, ml.spec(Member::SLPotential, {"mu"}),
                                 ml.spec(Member::SLPotential, {"nu"}));
    TensorExpr Ep = (mk.expr * TensorExpr::momentum("_q")).contract("nu", "_q").on_shell("");
    r.E_p_zero_massless = Ep.is_zero();
    return r;
}

FourVec sample_onshell_p(std::mt19937_64 &rng, double mass) {
    std::normal_distribution<double> g(0.0, 1.0);
    FourVec p;
    p[1] = g(rng);
    p[2] = g(rng);
    p[3] = g(rng);
    p[0] = std::sqrt(mass * mass + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
    return p;
}

FourVec sample_spacelike_e(std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (;;) {
        FourVec e;
        for (int i = 0; i < 4; ++i) e[i] = g(rng);
        double n = minkowski_dot(e, e);
        if (n >= -1e-3) continue; // want honestly spacelike
        double s = std::sqrt(-n);
        for (int i = 0; i < 4; ++i) e[i] /= s; // e^2 = -1
        return e;
    }
}

PositivityReport rank_and_positivity(const Kernel &k, int n_samples, uint64_t seed) {
    PositivityReport rep;
    rep.samples = n_samples;
    std::mt19937_64 rng(seed);
    double mass = k.shell.empty() ? 0.0 : 1.0;
    size_t rank_dim = 1;
    for (size_t i = 0; i < k.left.indices.size(); ++i) rank_dim *= 4;

    double min_eig = 1e300, max_abs = 0.0, max_ep = 0.0;
    int rk = -1;

    TensorExpr diag = k.expr; // labels 0 (left) and 1 (right)
    for (int s = 0; s < n_samples; ++s) {
        FourVec p = sample_onshell_p(rng, mass);
        FourVec e;
        for (;;) {
            e = sample_spacelike_e(rng);
            if (std::fabs(minkowski_dot(p, e)) > 0.05) break;
            ++rep.resampled;
        }
        NumericAssignment as;
        as.p = p;
        as.e[kLeftString] = e;
        as.e[kRightString] = e; // diagonal kernel: e' = e
        if (!k.shell.empty()) as.symbols[k.shell] = mass;
        auto vals = eval_numeric(diag, as);

        Eigen::MatrixXcd G(rank_dim, rank_dim);
        for (size_t a = 0; a < rank_dim; ++a)
            for (size_t b = 0; b < rank_dim; ++b) G(a, b) = vals[a * rank_dim + b];
        Eigen::MatrixXcd H = (G + G.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        auto ev = es.eigenvalues();
        double mx = 0.0;
        for (int i = 0; i < ev.size(); ++i) mx = std::max(mx, std::fabs(ev[i]));
        int r = 0;
        for (int i = 0; i < ev.size(); ++i)
            if (std::fabs(ev[i]) > 1e-8 * mx) ++r;
        min_eig = std::min(min_eig, ev.minCoeff() / (mx > 0 ? mx : 1.0));
        max_abs = std::max(max_abs, mx);
        if (rk < 0)
            rk = r;
        else if (r != rk)
            rk = std::max(rk, r); // report the generic (maximal) rank

        if (mass == 0.0 && k.left.indices.size() == 1) {
            // E_{mu nu} p^nu residual
            for (size_t a = 0; a < 4; ++a) {
                std::complex<double> acc = 0;
                for (int b = 0; b < 4; ++b) acc += vals[a * 4 + b] * p[b]; // lower . upper
                max_ep = std::max(max_ep, std::abs(acc) / (max_abs > 0 ? max_abs : 1.0));
            }
        }
    }
    rep.rank = rk;
    rep.min_eigenvalue = min_eig;
    rep.max_abs_eigenvalue = max_abs;
    rep.e_p_residual = max_ep;
    return rep;
}

TensorExpr massless_limit(const TensorExpr &ex, const std::string &mass_symbol) {
    auto [lo, hi] = ex.mass_degree(mass_symbol);
    (void)hi;
    if (lo < 0)
        throw StructuralError("massless_limit: kernel diverges as " + mass_symbol + "^" +
                              std::to_string(lo));
    return ex.substitute(mass_symbol, Coeff(0));
}

DvzSplit dvz_split(const FieldFamily &fam, uint64_t seed) {
    if (fam.spin != 2 || fam.mass.empty())
        throw StructuralError("dvz_split: needs the massive spin-2 family");
    DvzSplit out;
    const std::string m = fam.mass;
    std::vector<std::string> L = {"mu", "nu"}, R = {"ka", "la"};
    auto K = [&](Member a, std::vector<std::string> li, Member b, std::vector<std::string> ri) {
        return two_point_kernel(fam, fam.spec(a, std::move(li)), fam.spec(b, std::move(ri))).expr;
    };

    TensorExpr M_AA = massless_limit(K(Member::SLPotential, L, Member::SLPotential, R), m);

    // Kernel of A^(2) = A + (1/2) E(e,e) a0 against itself, composed linearly.
    TensorExpr M_Aa0 = massless_limit(K(Member::SLPotential, L, Member::EscortScal, {}), m);
    TensorExpr M_a0A = massless_limit(K(Member::EscortScal, {}, Member::SLPotential, R), m);
    TensorExpr M_a0a0 = massless_limit(K(Member::EscortScal, {}, Member::EscortScal, {}), m);

    TensorExpr EL = E_pair("mu", "nu", kLeftString);
    TensorExpr ER = E_pair("ka", "la", kRightString);
    Coeff half(Rational(1, 2));

    std::vector<std::string> order = {"mu", "nu", "ka", "la"};
    TensorExpr h2 = M_AA;
    h2 = h2 + (EL * M_a0A * half).reorder_slots(order);
    h2 = h2 + (M_Aa0 * ER * half).reorder_slots(order);
    h2 = h2 + (EL * ER * (half * half) * M_a0a0).reorder_slots(order);
    out.helicity2 = h2;
    out.trace_part = M_AA - h2;

    // Round trip is the defining decomposition; also check the closed form
    // trace_part == (1/6) E x E'.
    TensorExpr closed = (EL * ER * Coeff(Rational(1, 6))).reorder_slots(order);
    out.round_trip_zero = ((out.helicity2 + out.trace_part) == M_AA) && (out.trace_part == closed);

    // Numeric projection: coefficient of the scalar remnant squared is 1/6.
    std::mt19937_64 rng(seed);
    FourVec p = sample_onshell_p(rng, 0.0);
    FourVec e;
    for (;;) {
        e = sample_spacelike_e(rng);
        if (std::fabs(minkowski_dot(p, e)) > 0.2) break;
    }
    NumericAssignment as;
    as.p = p;
    as.e[kLeftString] = e;
    as.e[kRightString] = e;
    auto tvals = eval_numeric(out.trace_part, as);
    auto el = eval_numeric(EL, as);
    auto er = eval_numeric(ER, as);
    // project trace_part onto E x E' and normalize
    std::complex<double> num = 0, den = 0;
    for (size_t a = 0; a < 16; ++a)
        for (size_t b = 0; b < 16; ++b) {
            std::complex<double> basis = el[a] * er[b];
            num += tvals[a * 16 + b] * std::conj(basis);
            den += basis * std::conj(basis);
        }
    out.trace_coeff_times6 = 6.0 * std::real(num / den);

    auto a0vals = eval_numeric(M_a0a0, as);
    out.a0_norm_times_3_over_2 = 1.5 * std::real(a0vals[0]);
    return out;
}

} // namespace slft
