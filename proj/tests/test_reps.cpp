#include "doctest.h"
#include "qroots/reps.hpp"
#include <set>

using namespace qroots;

TEST_CASE("A1 Verma weight spaces") {
    UAlgebra alg{RootDatum(CartanType::A1)};
    Weight lam = weight_scale(5, alg.datum().fundamental_weight(0));
    FModule m = verma_module(alg, lam, -1, 3);
    REQUIRE(m.weights.size() == 4);
    for (int k = 0; k < 4; ++k) {
        Weight w = weight_sub(lam, weight_scale(k, alg.datum().simple_root(0)));
        REQUIRE(m.weight_index(w) >= 0);
        CHECK(m.dim[m.weight_index(w)] == 1);
    }
}

TEST_CASE("A2 Verma dimension at lambda - (a1 + a2)") {
    UAlgebra alg{RootDatum(CartanType::A2)};
    Weight lam = alg.datum().rho();
    FModule m = verma_module(alg, lam, -1, 2);
    Weight w = weight_sub(lam, weight_add(alg.datum().simple_root(0), alg.datum().simple_root(1)));
    REQUIRE(m.weight_index(w) >= 0);
    CHECK(m.dim[m.weight_index(w)] == 2);
}

TEST_CASE("e f^n v = [n][<lambda,av> - n + 1] f^{n-1} v") {
    UAlgebra alg{RootDatum(CartanType::A1)};
    for (int lc : {1, 2, 4}) {
        Weight lam = weight_scale(lc, alg.datum().fundamental_weight(0));
        FModule m = verma_module(alg, lam, -1, 5);
        for (int n = 1; n <= 4; ++n) {
            Weight src = weight_sub(lam, weight_scale(n, alg.datum().simple_root(0)));
            int wi = m.weight_index(src);
            const Mat<QScalar>* blk = m.block(true, 0, 1, wi);
            REQUIRE(blk != nullptr);
            // oracle from the recursion: [n]_q [ (lam,av) - n + 1 ]_q
            int t = alg.tpow_simple(0);
            QScalar expect = qint(n, t) * qint(lc - n + 1, t);
            CHECK((*blk)[0][0] == expect);
        }
    }
}

TEST_CASE("simple dimensions match the Weyl formula oracle") {
    {
        UAlgebra alg{RootDatum(CartanType::A1)};
        FModule l1 = simple_module(alg, alg.datum().fundamental_weight(0), -1);
        CHECK(l1.total_dim() == 2);
        FModule l0 = simple_module(alg, Weight{0}, -1);
        CHECK(l0.total_dim() == 1);
        CHECK(weyl_dim(alg.datum(), weight_scale(3, alg.datum().fundamental_weight(0))) == 4);
    }
    {
        UAlgebra alg{RootDatum(CartanType::A2)};
        FModule l = simple_module(alg, alg.datum().fundamental_weight(0), -1);
        CHECK(l.total_dim() == 3);
        // lowest-weight companion: L_+(-w1) also 3-dimensional
        FModule lp = simple_module(alg, weight_neg(alg.datum().fundamental_weight(0)), +1);
        CHECK(lp.total_dim() == 3);
        CHECK(weyl_dim(alg.datum(), alg.datum().rho()) == 8);
    }
}

TEST_CASE("star dual: weights negate, double dual returns") {
    UAlgebra alg{RootDatum(CartanType::A2)};
    FModule l = simple_module(alg, alg.datum().fundamental_weight(0), -1);
    FModule d = star_dual_module(alg.datum(), l);
    // weight multiset of the dual = negated weights
    std::multiset<Weight> wl, wd;
    for (size_t i = 0; i < l.weights.size(); ++i)
        for (int c = 0; c < l.dim[i]; ++c) wl.insert(weight_neg(l.weights[i]));
    for (size_t i = 0; i < d.weights.size(); ++i)
        for (int c = 0; c < d.dim[i]; ++c) wd.insert(d.weights[i]);
    CHECK(wl == wd);
    FModule dd = star_dual_module(alg.datum(), d);
    CHECK(dd.character() == l.character());
    // Double dual is the S^2-twist: e^(n) rescales by q_i^{-2n}, f^(n) by
    // q_i^{2n} (conjugation by k_{2 rho} recovers the identity).
    for (const auto& [spec, blk] : l.act) {
        auto [is_e, i, n, wi] = spec;
        int dwi = dd.windex.at(l.weights[wi]);
        auto it = dd.act.find({is_e, i, n, dwi});
        REQUIRE(it != dd.act.end());
        int tp = 2 * n * alg.tpow_simple(i) * (is_e ? -1 : 1);
        CHECK(it->second == mat_scale(blk, QScalar::v_pow(tp)));
    }
    // A1: L(w) is self-dual; characters agree
    UAlgebra a1{RootDatum(CartanType::A1)};
    FModule l1 = simple_module(a1, a1.datum().fundamental_weight(0), -1);
    FModule d1 = star_dual_module(a1.datum(), l1);
    CHECK(l1.character() == d1.character());
    // the dual is again a module: (ef - fe) acts by [(w,av)] at weight w
    {
        int wi = d1.weight_index(a1.datum().fundamental_weight(0));
        REQUIRE(wi >= 0);
        const Mat<QScalar>* fb = d1.block(false, 0, 1, wi);
        REQUIRE(fb != nullptr);
        int ti = d1.weight_index(weight_sub(d1.weights[wi], a1.datum().simple_root(0)));
        const Mat<QScalar>* eb = d1.block(true, 0, 1, ti);
        REQUIRE(eb != nullptr);
        QScalar val = mat_mul(*eb, *fb)[0][0];
        CHECK(val == qint(1, a1.tpow_simple(0)));
    }
}

TEST_CASE("trivial module: star dual and braid are trivial") {
    UAlgebra alg{RootDatum(CartanType::A1)};
    FModule l0 = simple_module(alg, Weight{0}, -1);
    FModule d0 = star_dual_module(alg.datum(), l0);
    CHECK(d0.total_dim() == 1);
    auto op = braid_module_operator(alg.datum(), l0, 0, +1);
    REQUIRE(op.size() == 1);
    CHECK(op.at(0)[0][0].is_one());
}

TEST_CASE("lattice and Weyl module at zeta (A1, lambda = 3w, ell = 3)") {
    UAlgebra alg{RootDatum(CartanType::A1)};
    auto cfg = make_root_config(3, alg.datum().lattice_index());
    Weight lam = weight_scale(3, alg.datum().fundamental_weight(0));
    FModule l = simple_module(alg, lam, -1);
    REQUIRE(l.total_dim() == 4);
    LatticeBasis lat = module_lattice(alg, l, cfg);
    // lattice basis = divided powers f^(n) v: at weight lam - n alpha the
    // single basis vector is f^(n) v = (1/[n]!) f^n v.
    for (size_t wi = 0; wi < l.weights.size(); ++wi) {
        REQUIRE(lat.cols[wi].size() == 1);
        Weight gamma = weight_sub(lam, l.weights[wi]);
        long n = alg.datum().height_in_Q(gamma);
        QScalar expect = QScalar(1) / qfact(n, alg.tpow_simple(0));
        CHECK(lat.cols[wi][0][0] == expect);
    }
    FModule lcoords = change_basis(alg, l, lat);
    // All blocks must be A-integral in lattice coordinates.
    for (const auto& [spec, blk] : lcoords.act)
        for (const auto& row : blk)
            for (const auto& x : row) CHECK(regular_at_root(x, cfg));
    ZModule z = specialize_module(lcoords, cfg);
    CHECK(z.total_dim() == 4);
    CHECK(z.character() == l.character());
    // rank-1 lattice for lambda = 0
    FModule l0 = simple_module(alg, Weight{0}, -1);
    LatticeBasis lat0 = module_lattice(alg, l0, cfg);
    CHECK(lat0.cols.size() == 1);
}

TEST_CASE("character preserved for L(ell lambda) vs classical") {
    UAlgebra alg{RootDatum(CartanType::A1)};
    auto cfg = make_root_config(3, alg.datum().lattice_index());
    Weight lam = alg.datum().fundamental_weight(0);
    Weight el = weight_scale(3, lam);
    FModule l = simple_module(alg, el, -1);
    LatticeBasis lat = module_lattice(alg, l, cfg);
    ZModule z = specialize_module(change_basis(alg, l, lat), cfg);
    // dim of the Weyl module at ell*lambda equals the characteristic-0 dim.
    CHECK(mpz_class(z.total_dim()) == weyl_dim(alg.datum(), el));
}

TEST_CASE("braid operator on L(w): v_w maps to a multiple of v_{-w}") {
    UAlgebra alg{RootDatum(CartanType::A1)};
    FModule l = simple_module(alg, alg.datum().fundamental_weight(0), -1);
    auto op = braid_module_operator(alg.datum(), l, 0, +1);
    int wi = l.weight_index(alg.datum().fundamental_weight(0));
    REQUIRE(op.count(wi));
    const Mat<QScalar>& blk = op.at(wi);
    REQUIRE(blk.size() == 1);
    CHECK(!blk[0][0].is_zero());
    // both expressions agree on L(w) + L(2w)
    for (int c : {1, 2}) {
        FModule m = simple_module(alg, weight_scale(c, alg.datum().fundamental_weight(0)), -1);
        auto a = braid_module_operator(alg.datum(), m, 0, +1, 0);
        auto b = braid_module_operator(alg.datum(), m, 0, +1, 1);
        CHECK(a == b);
        // inverse really inverts
        auto ai = braid_module_operator(alg.datum(), m, 0, -1, 0);
        for (const auto& [src, mat] : a) {
            Weight tw = alg.datum().simple_reflect(0, m.weights[src]);
            int ti = m.weight_index(tw);
            Mat<QScalar> prod = mat_mul(ai.at(ti), mat);
            CHECK(prod == identity_mat<QScalar>(m.dim[src], QScalar(1)));
        }
    }
}

TEST_CASE("braid intertwines: T(u m) = T(u) T(m)") {
    UAlgebra alg{RootDatum(CartanType::A2)};
    FModule l = simple_module(alg, alg.datum().fundamental_weight(0), -1);
    for (int i = 0; i < 2; ++i) {
        auto op = braid_module_operator(alg.datum(), l, i, +1);
        std::vector<UElem> us = {alg.gen_e(0), alg.gen_e(1), alg.gen_f(0),
                                 alg.gen_k(alg.datum().rho())};
        for (const auto& u : us) {
            UElem tu = alg.braid(i, +1, u);
            for (size_t wi = 0; wi < l.weights.size(); ++wi) {
                for (int c = 0; c < l.dim[wi]; ++c) {
                    Vec<QScalar> v(l.dim[wi], QScalar());
                    v[c] = QScalar(1);
                    // lhs: T(u m)
                    auto um = apply_uelem(alg, l, u, static_cast<int>(wi), v);
                    std::map<int, Vec<QScalar>> lhs;
                    for (const auto& [cw, vec] : um) {
                        Vec<QScalar> img = mat_vec(op.at(cw), vec);
                        int ti = l.weight_index(alg.datum().simple_reflect(i, l.weights[cw]));
                        auto it = lhs.find(ti);
                        if (it == lhs.end())
                            lhs.emplace(ti, img);
                        else
                            for (size_t r = 0; r < img.size(); ++r) it->second[r] += img[r];
                    }
                    // rhs: T(u) T(m)
                    Vec<QScalar> tv = mat_vec(op.at(static_cast<int>(wi)), v);
                    int twi = l.weight_index(alg.datum().simple_reflect(i, l.weights[wi]));
                    auto rhs = apply_uelem(alg, l, tu, twi, tv);
                    for (auto& [cw, vec] : rhs) {
                        auto it = lhs.find(cw);
                        if (it == lhs.end()) {
                            CHECK(vec_is_zero(vec));
                        } else {
                            CHECK(vec == it->second);
                        }
                    }
                    for (auto& [cw, vec] : lhs) {
                        if (!rhs.count(cw)) CHECK(vec_is_zero(vec));
                    }
                }
            }
        }
    }
}

TEST_CASE("DeltaT lemma on L(w) (x) L(w) for A1") {
    UAlgebra alg{RootDatum(CartanType::A1)};
    FModule l = simple_module(alg, alg.datum().fundamental_weight(0), -1);
    FModule t = tensor_module(alg, l, l);
    CHECK(t.total_dim() == 4);
    // Delta T_i on the tensor module from the operator formula directly.
    auto dt = braid_module_operator(alg.datum(), t, 0, +1);
    // Compare with exp_{q_i}(q_i^{-2}(q_i - q_i^{-1}) e k^{-1} (x) f k) (T (x) T).
    auto ti = braid_module_operator(alg.datum(), l, 0, +1);
    auto tidx = tensor_index(l, l, t);
    int q = alg.tpow_simple(0);
    // build T (x) T as per-tensor-weight matrices
    std::map<int, Mat<QScalar>> txt;
    for (size_t wi = 0; wi < t.weights.size(); ++wi) {
        const auto& src_slots = tidx.slots[wi];
        Weight tw = alg.datum().simple_reflect(0, t.weights[wi]);
        int twi = t.weight_index(tw);
        const auto& dst_slots = tidx.slots[twi];
        Mat<QScalar> mat(dst_slots.size(), Vec<QScalar>(src_slots.size(), QScalar()));
        for (size_t c = 0; c < src_slots.size(); ++c) {
            auto [w1, a, w2, b] = src_slots[c];
            const Mat<QScalar>& m1 = ti.at(w1);
            const Mat<QScalar>& m2 = ti.at(w2);
            int t1 = l.weight_index(alg.datum().simple_reflect(0, l.weights[w1]));
            int t2 = l.weight_index(alg.datum().simple_reflect(0, l.weights[w2]));
            for (size_t r = 0; r < dst_slots.size(); ++r) {
                auto [v1, ra, v2, rb] = dst_slots[r];
                if (v1 != t1 || v2 != t2) continue;
                mat[r][c] = m1[ra][a] * m2[rb][b];
            }
        }
        txt[static_cast<int>(wi)] = std::move(mat);
    }
    // exp factor: X = q_i^{-2}(q_i - q_i^{-1}) e k^{-1} (x) f k, exp_{q_i}.
    // Build X as a matrix on each tensor weight space.
    auto build_x = [&](int wi) {
        const auto& src_slots = tidx.slots[wi];
        // X preserves total weight.
        Mat<QScalar> x(src_slots.size(), Vec<QScalar>(src_slots.size(), QScalar()));
        for (size_t c = 0; c < src_slots.size(); ++c) {
            auto [w1, a, w2, b] = src_slots[c];
            const Mat<QScalar>* eb = l.block(true, 0, 1, w1);
            const Mat<QScalar>* fb = l.block(false, 0, 1, w2);
            if (!eb || !fb) continue;
            int t1 = l.weight_index(weight_add(l.weights[w1], alg.datum().simple_root(0)));
            int t2 = l.weight_index(weight_sub(l.weights[w2], alg.datum().simple_root(0)));
            if (t1 < 0 || t2 < 0) continue;
            // e k^{-1} on factor 1: k^{-1} first (chi at source), then e.
            QScalar s1 = alg.qpow_form(weight_neg(l.weights[w1]), alg.datum().simple_root(0));
            // f k on factor 2: k first, then f.
            QScalar s2 = alg.qpow_form(l.weights[w2], alg.datum().simple_root(0));
            QScalar pref = QScalar::v_pow(-2 * q) * (QScalar::v_pow(q) - QScalar::v_pow(-q)) * s1 * s2;
            for (size_t r = 0; r < src_slots.size(); ++r) {
                auto [v1, ra, v2, rb] = src_slots[r];
                if (v1 != t1 || v2 != t2) continue;
                x[r][c] = pref * (*eb)[ra][a] * (*fb)[rb][b];
            }
        }
        return x;
    };
    for (size_t wi = 0; wi < t.weights.size(); ++wi) {
        Mat<QScalar> x = build_x(static_cast<int>(wi));
        // exp_{q_i}(x) = sum q^{n(n-1)/2}/[n]! x^n
        Mat<QScalar> expx = identity_mat<QScalar>(x.size(), QScalar(1));
        Mat<QScalar> pow = identity_mat<QScalar>(x.size(), QScalar(1));
        for (int n = 1; n <= 4; ++n) {
            pow = mat_mul(x, pow);
            bool zero = true;
            for (const auto& row : pow)
                for (const auto& e : row)
                    if (!e.is_zero()) zero = false;
            if (zero) break;
            QScalar cn = QScalar::v_pow(q * n * (n - 1) / 2) / qfact(n, q);
            expx = mat_add(expx, mat_scale(pow, cn));
        }
        Mat<QScalar> rhs = mat_mul(expx, txt.at(static_cast<int>(wi)));
        CHECK(dt.at(static_cast<int>(wi)) == rhs);
    }
}

TEST_CASE("braid-Frobenius lemma on the classical pullback") {
    UAlgebra alg{RootDatum(CartanType::A1)};
    auto cfg = make_root_config(3, alg.datum().lattice_index());
    FModule l = simple_module(alg, alg.datum().fundamental_weight(0), -1);
    auto cm = classical_module(l);
    ZModule pb = frobenius_pullback(cm, cfg, alg.datum());
    auto op = braid_module_operator(alg.datum(), pb, 0, +1);
    // classical exp(fbar) exp(-ebar) exp(fbar) on the 2-dim standard module
    // maps (v_+, v_-) with e v_- = v_+, f v_+ = v_-:
    // matrix [[0, -1], [1, 0]] in a suitable basis; verify squared = -id and
    // agreement with the formula computed from classical blocks.
    // Build exp matrices directly over Q embedded in the cyclotomic field.
    auto field = cfg.field;
    auto to_c = [&](const mpq_class& r) { return CycScalar::from_rational(field, r); };
    // global matrices on the 2-dim space ordered by pb weight order
    int n = static_cast<int>(pb.total_dim());
    REQUIRE(n == 2);
    auto embed = [&](bool is_e) {
        Mat<CycScalar> m(n, Vec<CycScalar>(n, CycScalar::zero(field)));
        for (size_t wi = 0; wi < cm.weights.size(); ++wi) {
            const Mat<mpq_class>* blk = cm.block(is_e, 0, 1, wi);
            if (!blk) continue;
            Weight tw = is_e ? weight_add(cm.weights[wi], alg.datum().simple_root(0))
                             : weight_sub(cm.weights[wi], alg.datum().simple_root(0));
            int ti = cm.weight_index(tw);
            if (ti < 0) continue;
            m[ti][wi] = to_c((*blk)[0][0]);
        }
        return m;
    };
    auto expm = [&](Mat<CycScalar> x, bool negate) {
        if (negate)
            for (auto& row : x)
                for (auto& e : row) e = -e;
        Mat<CycScalar> r = identity_mat(n, CycScalar::one(field));
        Mat<CycScalar> pow = r;
        mpz_class fact = 1;
        for (int k = 1; k <= 3; ++k) {
            pow = mat_mul(x, pow);
            fact *= k;
            Mat<CycScalar> term = pow;
            for (auto& row : term)
                for (auto& e : row) e = e * to_c(mpq_class(1, fact));
            r = mat_add(r, term);
        }
        return r;
    };
    Mat<CycScalar> eb = embed(true), fb = embed(false);
    Mat<CycScalar> classical = mat_mul(expm(fb, false), mat_mul(expm(eb, true), expm(fb, false)));
    // flatten op into a global matrix
    Mat<CycScalar> global(n, Vec<CycScalar>(n, CycScalar::zero(field)));
    for (const auto& [wi, mat] : op) {
        Weight tw = alg.datum().simple_reflect(0, pb.weights[wi]);
        int ti = pb.weight_index(tw);
        global[ti][wi] = mat[0][0];
    }
    CHECK(global == classical);
}
