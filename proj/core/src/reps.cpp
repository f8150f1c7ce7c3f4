#include "qroots/reps.hpp"

#include <algorithm>
#include <stdexcept>

namespace qroots {

namespace {

std::vector<int> simple_gen_mono(const UAlgebra& alg, int i, int n) {
    std::vector<int> mono(alg.num_roots(), 0);
    for (int k = 0; k < alg.num_roots(); ++k)
        if (alg.datum().pos_root(k) == alg.datum().simple_root(i)) {
            mono[k] = n;
            return mono;
        }
    throw std::logic_error("simple root missing from the beta list");
}

QScalar chi(const UAlgebra& alg, const Weight& lambda, const Weight& mu) {
    return alg.qpow_form(lambda, mu);
}

}  // namespace

FModule verma_module(const UAlgebra& alg, const Weight& lambda, int sign, int depth,
                     int divided_bound) {
    const RootDatum& d = alg.datum();
    Side own = (sign < 0) ? Side::Minus : Side::Plus;
    FModule m;
    m.vpow = [](long k) { return QScalar::v_pow(static_cast<int>(k)); };
    m.one = QScalar(1);
    m.hw = lambda;
    m.sign = sign;
    m.truncated = true;
    std::vector<std::vector<std::vector<int>>> monos;
    for (const Weight& gamma : d.qplus_below(depth)) {
        const auto& pm = alg.pbw_monomials(own, gamma);
        if (pm.empty()) continue;
        Weight w = (sign < 0) ? weight_sub(lambda, gamma) : weight_add(lambda, gamma);
        m.windex[w] = static_cast<int>(m.weights.size());
        m.weights.push_back(w);
        m.dim.push_back(static_cast<int>(pm.size()));
        monos.push_back(pm);
    }
    int nmax = divided_bound > 0 ? divided_bound : depth;
    Weight zero(d.rank(), 0);
    for (size_t wi = 0; wi < m.weights.size(); ++wi) {
        Weight gamma = (sign < 0) ? weight_sub(lambda, m.weights[wi])
                                  : weight_sub(m.weights[wi], lambda);
        (void)gamma;
        for (int i = 0; i < d.rank(); ++i) {
            for (int n = 1; n <= nmax; ++n) {
                // Own-side divided power: PBW product scaled by 1/[n]!.
                {
                    Weight tw = (sign < 0) ? weight_sub(m.weights[wi], weight_scale(n, d.simple_root(i)))
                                           : weight_add(m.weights[wi], weight_scale(n, d.simple_root(i)));
                    int ti = m.weight_index(tw);
                    if (ti >= 0) {
                        QScalar inv_fact = QScalar(1) / qfact(n, alg.tpow_simple(i));
                        Mat<QScalar> blk(m.dim[ti], Vec<QScalar>(m.dim[wi], QScalar()));
                        bool nonzero = false;
                        for (int c = 0; c < m.dim[wi]; ++c) {
                            const UElem& prod =
                                alg.pbw_product(own, simple_gen_mono(alg, i, n), monos[wi][c]);
                            for (const auto& [key, coeff] : prod) {
                                const std::vector<int>& mono = (sign < 0) ? key.f : key.e;
                                const auto& tlist = monos[ti];
                                auto pos = std::find(tlist.begin(), tlist.end(), mono);
                                if (pos == tlist.end())
                                    throw std::logic_error("verma: missing target monomial");
                                int r = static_cast<int>(pos - tlist.begin());
                                blk[r][c] = coeff * inv_fact;
                                if (!blk[r][c].is_zero()) nonzero = true;
                            }
                        }
                        if (nonzero)
                            m.act[{sign < 0 ? 0 : 1, i, n, static_cast<int>(wi)}] = std::move(blk);
                    }
                }
                // Opposite-side divided power (highest-weight case): commute the
                // raising part through; only terms with trivial E-part survive
                // on the cyclic vector.
                if (sign < 0) {
                    Weight tw = weight_add(m.weights[wi], weight_scale(n, d.simple_root(i)));
                    int ti = m.weight_index(tw);
                    if (ti >= 0) {
                        QScalar inv_fact = QScalar(1) / qfact(n, alg.tpow_simple(i));
                        Mat<QScalar> blk(m.dim[ti], Vec<QScalar>(m.dim[wi], QScalar()));
                        bool nonzero = false;
                        for (int c = 0; c < m.dim[wi]; ++c) {
                            const UElem& x = alg.ef_commute(simple_gen_mono(alg, i, n), monos[wi][c]);
                            for (const auto& [key, coeff] : x) {
                                bool keep = true;
                                for (int t = 0; t < alg.num_roots(); ++t)
                                    if (key.e[t] != 0) keep = false;
                                if (!keep) continue;
                                const auto& tlist = monos[ti];
                                auto pos = std::find(tlist.begin(), tlist.end(), key.f);
                                if (pos == tlist.end())
                                    throw std::logic_error("verma: missing target monomial");
                                int r = static_cast<int>(pos - tlist.begin());
                                blk[r][c] += coeff * inv_fact * chi(alg, lambda, key.k);
                                nonzero = true;
                            }
                        }
                        if (nonzero) m.act[{1, i, n, static_cast<int>(wi)}] = std::move(blk);
                    }
                }
            }
        }
    }
    if (sign > 0) {
        // Lowest-weight case: build the f_i action by recursion over the
        // Chevalley words (f_i e_j = e_j f_i - delta_{ij}(k_i - k_i^{-1})/(q_i - q_i^{-1}),
        // f_i v = 0), then the divided powers by composing and dividing.
        std::map<std::pair<int, HalfWord>, std::map<int, Vec<QScalar>>> memo;
        std::function<std::map<int, Vec<QScalar>>(int, const HalfWord&)> frec =
            [&](int i, const HalfWord& w) -> std::map<int, Vec<QScalar>> {
            auto key = std::make_pair(i, w);
            auto mit = memo.find(key);
            if (mit != memo.end()) return mit->second;
            std::map<int, Vec<QScalar>> out;
            if (!w.empty()) {
                int j = w.front();
                HalfWord rest(w.begin() + 1, w.end());
                Weight wrest = lambda;
                for (int t : rest) wrest = weight_add(wrest, d.simple_root(t));
                // e_j applied to f_i(rest v)
                for (const auto& [cw, vec] : frec(i, rest)) {
                    const Mat<QScalar>* blk = m.block(true, j, 1, cw);
                    if (!blk) continue;
                    int ti = m.weight_index(weight_add(m.weights[cw], d.simple_root(j)));
                    if (ti < 0) continue;
                    Vec<QScalar> img = mat_vec(*blk, vec);
                    auto jt = out.find(ti);
                    if (jt == out.end())
                        out.emplace(ti, std::move(img));
                    else
                        for (size_t r = 0; r < img.size(); ++r) jt->second[r] += img[r];
                }
                if (j == i) {
                    // -(chi_w(k_i) - chi_w(k_i)^{-1})/(q_i - q_i^{-1}) * (rest v)
                    int rwi = m.weight_index(wrest);
                    if (rwi >= 0) {
                        QScalar num = chi(alg, wrest, d.simple_root(i)) -
                                      chi(alg, weight_neg(wrest), d.simple_root(i));
                        QScalar den = QScalar::v_pow(alg.tpow_simple(i)) -
                                      QScalar::v_pow(-alg.tpow_simple(i));
                        QScalar s = QScalar() - num / den;
                        // rest v in module coordinates
                        WordVec wv;
                        wv[rest] = QScalar(1);
                        Weight grest(d.rank(), 0);
                        for (int t : rest) grest = weight_add(grest, d.simple_root(t));
                        auto coords = alg.words_to_pbw(Side::Plus, wv, grest);
                        Vec<QScalar> vec(m.dim[rwi], QScalar());
                        for (const auto& [mono, cc] : coords) {
                            const auto& tlist = monos[rwi];
                            auto pos = std::find(tlist.begin(), tlist.end(), mono);
                            if (pos == tlist.end())
                                throw std::logic_error("verma: missing rest monomial");
                            vec[pos - tlist.begin()] += cc * s;
                        }
                        auto jt = out.find(rwi);
                        if (jt == out.end())
                            out.emplace(rwi, std::move(vec));
                        else
                            for (size_t r = 0; r < vec.size(); ++r) jt->second[r] += vec[r];
                    }
                }
            }
            memo.emplace(key, out);
            return out;
        };
        for (size_t wi = 0; wi < m.weights.size(); ++wi) {
            for (int i = 0; i < d.rank(); ++i) {
                int ti = m.weight_index(weight_sub(m.weights[wi], d.simple_root(i)));
                if (ti < 0) continue;
                Mat<QScalar> blk(m.dim[ti], Vec<QScalar>(m.dim[wi], QScalar()));
                bool nonzero = false;
                for (int c = 0; c < m.dim[wi]; ++c) {
                    for (const auto& [w2, c2] : alg.pbw_expansion(Side::Plus, monos[wi][c])) {
                        for (const auto& [cw, vec] : frec(i, w2)) {
                            if (cw != ti) throw std::logic_error("verma: f image off target");
                            for (size_t r = 0; r < vec.size(); ++r) blk[r][c] += c2 * vec[r];
                        }
                    }
                }
                for (const auto& row : blk)
                    for (const auto& x : row)
                        if (!x.is_zero()) nonzero = true;
                if (nonzero) m.act[{0, i, 1, static_cast<int>(wi)}] = std::move(blk);
            }
        }
        // Divided powers f^(n) by composing the n = 1 blocks.
        for (size_t wi = 0; wi < m.weights.size(); ++wi) {
            for (int i = 0; i < d.rank(); ++i) {
                for (int n = 2; n <= nmax; ++n) {
                    int ti = m.weight_index(
                        weight_sub(m.weights[wi], weight_scale(n, d.simple_root(i))));
                    if (ti < 0) continue;
                    // compose
                    Mat<QScalar> comp;
                    bool ok = true;
                    int cw = static_cast<int>(wi);
                    for (int s = 0; s < n; ++s) {
                        const Mat<QScalar>* blk = m.block(false, i, 1, cw);
                        if (!blk) {
                            ok = false;
                            break;
                        }
                        comp = (s == 0) ? *blk : mat_mul(*blk, comp);
                        cw = m.weight_index(weight_sub(m.weights[cw], d.simple_root(i)));
                    }
                    if (!ok) continue;
                    QScalar inv_fact = QScalar(1) / qfact(n, alg.tpow_simple(i));
                    comp = mat_scale(comp, inv_fact);
                    bool nonzero = false;
                    for (const auto& row : comp)
                        for (const auto& x : row)
                            if (!x.is_zero()) nonzero = true;
                    if (nonzero) m.act[{0, i, n, static_cast<int>(wi)}] = std::move(comp);
                }
            }
        }
    }
    return m;
}

Mat<QScalar> contravariant_gram(const UAlgebra& alg, const FModule& verma, const Weight& wspace) {
    // <X_a v, X_b v> = cyclic component of sigma(X_a) X_b v, computed by the
    // module action (sigma: e_i <-> f_i, k fixed, an anti-automorphism).
    int sign = verma.sign;
    Side own = (sign < 0) ? Side::Minus : Side::Plus;
    const Weight& lambda = verma.hw;
    Weight gamma = (sign < 0) ? weight_sub(lambda, wspace) : weight_sub(wspace, lambda);
    const auto& monos = alg.pbw_monomials(own, gamma);
    size_t n = monos.size();
    Mat<QScalar> g(n, Vec<QScalar>(n, QScalar()));
    int wi = verma.weight_index(wspace);
    int top = verma.weight_index(lambda);
    if (wi < 0 || top < 0) throw std::invalid_argument("contravariant_gram: weight outside window");
    Weight zero(alg.datum().rank(), 0);
    for (size_t a = 0; a < n; ++a) {
        UElem sig;
        for (const auto& [w, c] : alg.pbw_expansion(own, monos[a])) {
            HalfWord rev(w.rbegin(), w.rend());
            Side opp = (own == Side::Minus) ? Side::Plus : Side::Minus;
            WordVec wv;
            wv[rev] = QScalar(1);
            Weight gw(alg.datum().rank(), 0);
            for (int i : rev) gw = weight_add(gw, alg.datum().simple_root(i));
            for (const auto& [mono, cc] : alg.words_to_pbw(opp, wv, gw)) {
                UKey key{std::vector<int>(alg.num_roots(), 0), zero,
                         std::vector<int>(alg.num_roots(), 0)};
                if (opp == Side::Plus)
                    key.e = mono;
                else
                    key.f = mono;
                auto it = sig.find(key);
                if (it == sig.end())
                    sig.emplace(key, c * cc);
                else
                    it->second += c * cc;
            }
        }
        for (size_t b = 0; b < n; ++b) {
            Vec<QScalar> v(n, QScalar());
            v[b] = QScalar(1);
            auto img = apply_uelem(alg, verma, sig, wi, v);
            auto it = img.find(top);
            g[a][b] = (it == img.end()) ? QScalar() : it->second[0];
        }
    }
    return g;
}

mpz_class weyl_dim(const RootDatum& datum, const Weight& lambda) {
    mpq_class num(1), den(1);
    Weight lr = weight_add(lambda, datum.rho());
    for (const auto& beta : datum.pos_roots()) {
        num *= datum.form(lr, beta);
        den *= datum.form(datum.rho(), beta);
    }
    mpq_class r = num / den;
    if (r.get_den() != 1) throw std::logic_error("weyl_dim: non-integral");
    return r.get_num();
}

FModule simple_module(const UAlgebra& alg, const Weight& lambda, int sign) {
    const RootDatum& d = alg.datum();
    Weight span = (sign < 0) ? weight_sub(lambda, d.apply_word(d.w0_word(), lambda))
                             : weight_sub(d.apply_word(d.w0_word(), lambda), lambda);
    long depth = d.height_in_Q(span);
    FModule verma = verma_module(alg, lambda, sign, static_cast<int>(depth),
                                 std::max<long>(1, depth));
    // Radical spans per weight.
    std::vector<RowSpan<QScalar>> rad(verma.weights.size());
    std::vector<std::vector<int>> keep(verma.weights.size());
    for (size_t wi = 0; wi < verma.weights.size(); ++wi) {
        Mat<QScalar> g = contravariant_gram(alg, verma, verma.weights[wi]);
        Mat<QScalar> ker = mat_kernel(g, QScalar(1));
        for (auto& row : ker) rad[wi].insert(std::move(row));
        std::vector<bool> is_lead(verma.dim[wi], false);
        for (int l : rad[wi].leads) is_lead[l] = true;
        for (int c = 0; c < verma.dim[wi]; ++c)
            if (!is_lead[c]) keep[wi].push_back(c);
    }
    FModule m;
    m.vpow = verma.vpow;
    m.one = QScalar(1);
    m.hw = lambda;
    m.sign = sign;
    m.truncated = false;
    std::vector<int> remap(verma.weights.size(), -1);
    for (size_t wi = 0; wi < verma.weights.size(); ++wi) {
        if (keep[wi].empty()) continue;
        remap[wi] = static_cast<int>(m.weights.size());
        m.windex[verma.weights[wi]] = remap[wi];
        m.weights.push_back(verma.weights[wi]);
        m.dim.push_back(static_cast<int>(keep[wi].size()));
    }
    for (const auto& [spec, blk] : verma.act) {
        auto [is_e, i, n, wi] = spec;
        if (remap[wi] < 0) continue;
        Weight tw = is_e ? weight_add(verma.weights[wi], weight_scale(n, d.simple_root(i)))
                         : weight_sub(verma.weights[wi], weight_scale(n, d.simple_root(i)));
        int ti = verma.weight_index(tw);
        if (ti < 0 || remap[ti] < 0) continue;
        Mat<QScalar> out(keep[ti].size(), Vec<QScalar>(keep[wi].size(), QScalar()));
        bool nonzero = false;
        for (size_t c = 0; c < keep[wi].size(); ++c) {
            Vec<QScalar> col(verma.dim[ti], QScalar());
            for (int r = 0; r < verma.dim[ti]; ++r) col[r] = blk[r][keep[wi][c]];
            rad[ti].reduce(col);
            for (size_t r = 0; r < keep[ti].size(); ++r) {
                out[r][c] = col[keep[ti][r]];
                if (!out[r][c].is_zero()) nonzero = true;
            }
        }
        if (nonzero) m.act[{is_e, i, n, remap[wi]}] = std::move(out);
    }
    // Dimension check against the Weyl formula.
    Weight dom = (sign < 0) ? lambda : weight_neg(d.apply_word(d.w0_word(), lambda));
    if (is_dominant(dom)) {
        mpz_class expect = weyl_dim(d, dom);
        if (mpz_class(m.total_dim()) != expect)
            throw std::logic_error("simple_module: dimension mismatch with the Weyl formula");
    }
    return m;
}

LatticeBasis module_lattice(const UAlgebra& alg, const FModule& simple,
                            const RootOfUnityConfig& cfg, std::vector<Mat<QScalar>>* exprs) {
    const RootDatum& d = alg.datum();
    Side own = (simple.sign < 0) ? Side::Minus : Side::Plus;
    LatticeBasis out;
    out.cols.resize(simple.weights.size());
    out.inv.resize(simple.weights.size());
    if (exprs) exprs->resize(simple.weights.size());
    int top = simple.weight_index(simple.hw);
    if (top < 0 || simple.dim[top] != 1)
        throw std::invalid_argument("module_lattice: cyclic weight space must be 1-dimensional");
    for (size_t wi = 0; wi < simple.weights.size(); ++wi) {
        Weight gamma = (simple.sign < 0) ? weight_sub(simple.hw, simple.weights[wi])
                                         : weight_sub(simple.weights[wi], simple.hw);
        const auto& monos = alg.pbw_monomials(own, gamma);
        // Columns: divided monomial images of the cyclic vector.
        std::vector<Vec<QScalar>> gens;
        for (const auto& mono : monos) {
            // Action of the divided monomial: compose divided powers of the
            // root vectors is equivalent to scaling the plain monomial class.
            QScalar unit(1);
            for (int k = 0; k < alg.num_roots(); ++k)
                if (mono[k] > 1) unit *= qfact(mono[k], alg.tpow_root(k));
            // Plain monomial class in the simple: reduce the Verma basis vector.
            // The simple's basis at this weight is a subset of monomial classes;
            // express the mono class there: apply the monomial to the cyclic
            // vector via module action.
            Vec<QScalar> v(simple.dim[top], QScalar());
            v[0] = QScalar(1) / unit;
            // apply the plain PBW monomial via expansion into generator words
            std::map<int, Vec<QScalar>> cur;
            cur[top] = v;
            const WordVec& words = alg.pbw_expansion(own, mono);
            std::map<int, Vec<QScalar>> acc;
            for (const auto& [w, c] : words) {
                std::map<int, Vec<QScalar>> state = cur;
                for (auto it = w.rbegin(); it != w.rend(); ++it) {
                    std::map<int, Vec<QScalar>> next;
                    for (const auto& [cw, vec] : state) {
                        const Mat<QScalar>* blk = simple.block(own == Side::Plus, *it, 1, cw);
                        if (!blk) continue;
                        Weight twt = own == Side::Plus
                                         ? weight_add(simple.weights[cw], d.simple_root(*it))
                                         : weight_sub(simple.weights[cw], d.simple_root(*it));
                        int ti = simple.weight_index(twt);
                        if (ti < 0) continue;
                        Vec<QScalar> img = mat_vec(*blk, vec);
                        auto jt = next.find(ti);
                        if (jt == next.end())
                            next.emplace(ti, std::move(img));
                        else
                            for (size_t r = 0; r < img.size(); ++r) jt->second[r] += img[r];
                    }
                    state = std::move(next);
                }
                for (const auto& [cw, vec] : state) {
                    auto jt = acc.find(cw);
                    if (jt == acc.end()) {
                        Vec<QScalar> scaled = vec;
                        for (auto& x : scaled) x *= c;
                        acc.emplace(cw, std::move(scaled));
                    } else {
                        for (size_t r = 0; r < vec.size(); ++r) jt->second[r] += c * vec[r];
                    }
                }
            }
            Vec<QScalar> col(simple.dim[wi], QScalar());
            auto jt = acc.find(static_cast<int>(wi));
            if (jt != acc.end()) col = jt->second;
            gens.push_back(std::move(col));
        }
        // Local-PID column reduction with minimal-valuation pivots.
        int dim = simple.dim[wi];
        std::vector<Vec<QScalar>> basis;
        std::vector<Vec<QScalar>> basis_expr;
        std::vector<bool> used_row(dim, false);
        std::vector<Vec<QScalar>> work = gens;
        std::vector<Vec<QScalar>> workexpr(work.size());
        for (size_t c = 0; c < work.size(); ++c) {
            workexpr[c] = Vec<QScalar>(work.size(), QScalar());
            workexpr[c][c] = QScalar(1);
        }
        for (int step = 0; step < dim; ++step) {
            int best_col = -1, best_row = -1, best_val = kValuationOfZero;
            for (size_t c = 0; c < work.size(); ++c) {
                for (int r = 0; r < dim; ++r) {
                    if (used_row[r] || work[c][r].is_zero()) continue;
                    int val = valuation_at_root(work[c][r], cfg);
                    if (val < best_val) {
                        best_val = val;
                        best_col = static_cast<int>(c);
                        best_row = r;
                    }
                }
            }
            if (best_col < 0) break;
            Vec<QScalar> pivot = work[best_col];
            Vec<QScalar> pivot_expr = workexpr[best_col];
            for (size_t c = 0; c < work.size(); ++c) {
                if (static_cast<int>(c) == best_col || work[c][best_row].is_zero()) continue;
                QScalar f = work[c][best_row] / pivot[best_row];
                if (!regular_at_root(f, cfg))
                    throw std::logic_error("module_lattice: pivot was not minimal");
                for (int r = 0; r < dim; ++r) work[c][r] -= f * pivot[r];
                for (size_t r = 0; r < workexpr[c].size(); ++r)
                    workexpr[c][r] -= f * pivot_expr[r];
            }
            used_row[best_row] = true;
            basis.push_back(pivot);
            basis_expr.push_back(pivot_expr);
            work[best_col] = Vec<QScalar>(dim, QScalar());
        }
        if (static_cast<int>(basis.size()) != dim)
            throw std::logic_error("module_lattice: lattice rank below the weight dimension");
        Mat<QScalar> cols(dim, Vec<QScalar>(dim, QScalar()));
        for (int c = 0; c < dim; ++c)
            for (int r = 0; r < dim; ++r) cols[r][c] = basis[c][r];
        out.inv[wi] = mat_inverse(cols, QScalar(1));
        out.cols[wi] = std::move(cols);
        if (exprs) {
            Mat<QScalar> em(gens.size(), Vec<QScalar>(dim, QScalar()));
            for (int c = 0; c < dim; ++c)
                for (size_t r = 0; r < gens.size(); ++r) em[r][c] = basis_expr[c][r];
            (*exprs)[wi] = std::move(em);
        }
    }
    return out;
}

FModule change_basis(const UAlgebra& alg, const FModule& m, const LatticeBasis& basis) {
    (void)alg;
    FModule out = m;
    out.act.clear();
    for (const auto& [spec, blk] : m.act) {
        auto [is_e, i, n, wi] = spec;
        Weight tw = is_e ? weight_add(m.weights[wi], weight_scale(n, alg.datum().simple_root(i)))
                         : weight_sub(m.weights[wi], weight_scale(n, alg.datum().simple_root(i)));
        int ti = m.weight_index(tw);
        if (ti < 0) continue;
        out.act[spec] = mat_mul(basis.inv[ti], mat_mul(blk, basis.cols[wi]));
    }
    return out;
}

ZModule specialize_module(const FModule& m, const RootOfUnityConfig& cfg) {
    ZModule z;
    z.weights = m.weights;
    z.windex = m.windex;
    z.dim = m.dim;
    z.hw = m.hw;
    z.sign = m.sign;
    z.truncated = m.truncated;
    auto field = cfg.field;
    z.vpow = [field](long k) { return CycScalar::root_pow(field, k); };
    z.one = CycScalar::one(field);
    for (const auto& [spec, blk] : m.act) {
        Mat<CycScalar> out(blk.size(), Vec<CycScalar>(blk.empty() ? 0 : blk[0].size()));
        bool nonzero = false;
        for (size_t r = 0; r < blk.size(); ++r)
            for (size_t c = 0; c < blk[r].size(); ++c) {
                if (!regular_at_root(blk[r][c], cfg))
                    throw std::domain_error("specialize_module: block entry has a pole");
                out[r][c] = specialize(blk[r][c], cfg);
                if (!out[r][c].is_zero()) nonzero = true;
            }
        if (nonzero) z.act[spec] = std::move(out);
    }
    return z;
}

WModule<mpq_class> classical_module(const FModule& m) {
    WModule<mpq_class> c;
    c.weights = m.weights;
    c.windex = m.windex;
    c.dim = m.dim;
    c.hw = m.hw;
    c.sign = m.sign;
    c.truncated = m.truncated;
    c.vpow = [](long) { return mpq_class(1); };
    c.one = 1;
    for (const auto& [spec, blk] : m.act) {
        Mat<mpq_class> out(blk.size(), Vec<mpq_class>(blk.empty() ? 0 : blk[0].size()));
        bool nonzero = false;
        for (size_t r = 0; r < blk.size(); ++r)
            for (size_t cq = 0; cq < blk[r].size(); ++cq) {
                out[r][cq] = blk[r][cq].eval_at_one();
                if (out[r][cq] != 0) nonzero = true;
            }
        if (nonzero) c.act[spec] = std::move(out);
    }
    return c;
}

ZModule frobenius_pullback(const WModule<mpq_class>& cm, const RootOfUnityConfig& cfg,
                           const RootDatum& datum) {
    (void)datum;
    ZModule z;
    int ell = cfg.ell;
    for (const auto& w : cm.weights) {
        z.windex[weight_scale(ell, w)] = static_cast<int>(z.weights.size());
        z.weights.push_back(weight_scale(ell, w));
    }
    z.dim = cm.dim;
    z.hw = weight_scale(ell, cm.hw);
    z.sign = cm.sign;
    z.truncated = cm.truncated;
    auto field = cfg.field;
    z.vpow = [field](long k) { return CycScalar::root_pow(field, k); };
    z.one = CycScalar::one(field);
    for (const auto& [spec, blk] : cm.act) {
        auto [is_e, i, n, wi] = spec;
        Mat<CycScalar> out(blk.size(), Vec<CycScalar>(blk.empty() ? 0 : blk[0].size()));
        for (size_t r = 0; r < blk.size(); ++r)
            for (size_t c = 0; c < blk[r].size(); ++c)
                out[r][c] = CycScalar::from_rational(field, blk[r][c]);
        z.act[{is_e, i, n * ell, wi}] = std::move(out);
    }
    return z;
}

template <class K>
WModule<K> star_dual_module(const RootDatum& datum, const WModule<K>& m) {
    WModule<K> d;
    d.vpow = m.vpow;
    d.one = m.one;
    d.hw = weight_neg(m.hw);
    d.sign = -m.sign;
    d.truncated = m.truncated;
    for (const auto& w : m.weights) {
        Weight nw = weight_neg(w);
        d.windex[nw] = -1;  // fill after sorting
    }
    for (auto& [w, idx] : d.windex) {
        idx = static_cast<int>(d.weights.size());
        d.weights.push_back(w);
        d.dim.push_back(m.dim[m.windex.at(weight_neg(w))]);
    }
    int dd = datum.lattice_index();
    for (const auto& [spec, blk] : m.act) {
        auto [is_e, i, n, mwi] = spec;
        int di = datum.d_sym(i);
        Weight src = m.weights[mwi];
        Weight tgt = is_e ? weight_add(src, weight_scale(n, datum.simple_root(i)))
                          : weight_sub(src, weight_scale(n, datum.simple_root(i)));
        if (m.weight_index(tgt) < 0) continue;
        // Dual block: source weight nu = -tgt, target nu -+... the transpose of
        // the parent block with the antipode scalar.
        Weight nu = weight_neg(tgt);
        int dwi = d.windex.at(nu);
        long scal_pow;
        if (is_e) {
            // S(e^(n)) = (-1)^n q_i^{n(n-1)} k^{-n} e^(n), so
            // <e^(n) m*, x> = (-1)^n q_i^{n(n-1)} q^{n(nu,alpha_i)} <m*, e^(n) x>.
            scal_pow = static_cast<long>(dd) * di * n * (n - 1) +
                       static_cast<long>(n) * datum.form_times_index(nu, datum.simple_root(i));
        } else {
            // <f^(n) m*, x> = (-1)^n q_i^{-n(n-1)} q^{n(-nu'+n a_i, a_i)} <m*, f^(n) x>
            // with the dual source nu = -tgt and x at weight -nu + n a_i.
            Weight arg = weight_add(weight_neg(nu), weight_scale(n, datum.simple_root(i)));
            scal_pow = -static_cast<long>(dd) * di * n * (n - 1) +
                       static_cast<long>(n) * datum.form_times_index(arg, datum.simple_root(i));
        }
        K scal = d.vpow(scal_pow);
        if (n % 2 == 1) scal = K{} - scal;
        Mat<K> out(blk.empty() ? 0 : blk[0].size(), Vec<K>(blk.size(), K{}));
        for (size_t r = 0; r < blk.size(); ++r)
            for (size_t c = 0; c < blk[r].size(); ++c) out[c][r] = scal * blk[r][c];
        d.act[{is_e, i, n, dwi}] = std::move(out);
    }
    return d;
}

template WModule<QScalar> star_dual_module<QScalar>(const RootDatum&, const WModule<QScalar>&);
template WModule<CycScalar> star_dual_module<CycScalar>(const RootDatum&, const WModule<CycScalar>&);
template WModule<mpq_class> star_dual_module<mpq_class>(const RootDatum&, const WModule<mpq_class>&);

std::map<int, Vec<QScalar>> apply_uelem(const UAlgebra& alg, const FModule& m, const UElem& u,
                                        int wi, const Vec<QScalar>& v) {
    const RootDatum& d = alg.datum();
    std::map<int, Vec<QScalar>> out;
    auto acc = [&](int ti, const Vec<QScalar>& vec, const QScalar& c) {
        if (c.is_zero()) return;
        auto it = out.find(ti);
        if (it == out.end()) {
            Vec<QScalar> scaled = vec;
            for (auto& x : scaled) x *= c;
            out.emplace(ti, std::move(scaled));
        } else {
            for (size_t r = 0; r < vec.size(); ++r) it->second[r] += c * vec[r];
        }
    };
    auto apply_word = [&](Side side, const HalfWord& w,
                          std::map<int, Vec<QScalar>> state) {
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            std::map<int, Vec<QScalar>> next;
            for (const auto& [cw, vec] : state) {
                const Mat<QScalar>* blk = m.block(side == Side::Plus, *it, 1, cw);
                if (!blk) continue;
                Weight twt = side == Side::Plus ? weight_add(m.weights[cw], d.simple_root(*it))
                                                : weight_sub(m.weights[cw], d.simple_root(*it));
                int ti = m.weight_index(twt);
                if (ti < 0) continue;
                Vec<QScalar> img = mat_vec(*blk, vec);
                auto jt = next.find(ti);
                if (jt == next.end())
                    next.emplace(ti, std::move(img));
                else
                    for (size_t r = 0; r < img.size(); ++r) jt->second[r] += img[r];
            }
            state = std::move(next);
        }
        return state;
    };
    for (const auto& [key, c] : u) {
        // E part first, then k, then F part.
        std::map<int, Vec<QScalar>> st;
        st[wi] = v;
        std::map<int, Vec<QScalar>> st2;
        for (const auto& [w2, c2] : alg.pbw_expansion(Side::Plus, key.e)) {
            auto part = apply_word(Side::Plus, w2, st);
            for (const auto& [cw, vec] : part) {
                auto jt = st2.find(cw);
                if (jt == st2.end()) {
                    Vec<QScalar> sc = vec;
                    for (auto& x : sc) x *= c2;
                    st2.emplace(cw, std::move(sc));
                } else {
                    for (size_t r = 0; r < vec.size(); ++r) jt->second[r] += c2 * vec[r];
                }
            }
        }
        // k_lambda acts by chi at the current weight
        for (auto& [cw, vec] : st2) {
            QScalar s = alg.qpow_form(m.weights[cw], key.k);
            for (auto& x : vec) x *= s;
        }
        std::map<int, Vec<QScalar>> st3;
        for (const auto& [w2, c2] : alg.pbw_expansion(Side::Minus, key.f)) {
            for (const auto& [cw, vec] : st2) {
                std::map<int, Vec<QScalar>> start;
                start[cw] = vec;
                auto part = apply_word(Side::Minus, w2, start);
                for (const auto& [tw2, tv] : part) {
                    auto jt = st3.find(tw2);
                    if (jt == st3.end()) {
                        Vec<QScalar> sc = tv;
                        for (auto& x : sc) x *= c2;
                        st3.emplace(tw2, std::move(sc));
                    } else {
                        for (size_t r = 0; r < tv.size(); ++r) jt->second[r] += c2 * tv[r];
                    }
                }
            }
        }
        for (const auto& [cw, vec] : st3) acc(cw, vec, c);
    }
    return out;
}

namespace {

// Apply a one-sided key (pure e or f power of a single simple root, with a
// k-part) to one tensor factor; returns (target weight idx, matrix).
std::map<int, Mat<QScalar>> apply_simple_key(const UAlgebra& alg, const FModule& m,
                                             const UKey& key, int wi) {
    const RootDatum& d = alg.datum();
    std::map<int, Mat<QScalar>> out;
    // Identify the one-sided part.
    int root_idx = -1, power = 0;
    bool is_e = true;
    for (int k = 0; k < alg.num_roots(); ++k) {
        if (key.e[k] > 0) {
            root_idx = k;
            power = key.e[k];
            is_e = true;
        }
        if (key.f[k] > 0) {
            root_idx = k;
            power = key.f[k];
            is_e = false;
        }
    }
    Mat<QScalar> mat;
    int cw = wi;
    if (power == 0) {
        mat = identity_mat(m.dim[wi], QScalar(1));
    } else {
        int i = -1;
        for (int t = 0; t < d.rank(); ++t)
            if (d.pos_root(root_idx) == d.simple_root(t)) i = t;
        if (i < 0) throw std::logic_error("apply_simple_key: non-simple key");
        const Mat<QScalar>* blk = m.block(is_e, i, power, wi);
        if (!blk) return out;  // zero
        Weight tw = is_e ? weight_add(m.weights[wi], weight_scale(power, d.simple_root(i)))
                         : weight_sub(m.weights[wi], weight_scale(power, d.simple_root(i)));
        int ti = m.weight_index(tw);
        if (ti < 0) return out;
        // plain power = [power]! * divided
        QScalar fact = qfact(power, alg.tpow_simple(i));
        mat = mat_scale(*blk, fact);
        cw = ti;
    }
    // UKey encodes F k E with E rightmost: E acts first, then k, then F.
    // For an e-key the k scalar is evaluated after raising (at cw); for an
    // f-key it is evaluated before lowering (at the source weight).
    int chi_at = (power > 0 && is_e) ? cw : wi;
    QScalar s = alg.qpow_form(m.weights[chi_at], key.k);
    mat = mat_scale(mat, s);
    out[cw] = std::move(mat);
    return out;
}

}  // namespace

FModule tensor_module(const UAlgebra& alg, const FModule& m1, const FModule& m2) {
    const RootDatum& d = alg.datum();
    FModule t;
    t.vpow = m1.vpow;
    t.one = QScalar(1);
    t.hw = weight_add(m1.hw, m2.hw);
    t.sign = m1.sign;
    t.truncated = m1.truncated || m2.truncated;
    // Enumerate tensor weights.
    std::map<Weight, std::vector<std::tuple<int, int, int, int>>> slots;
    for (size_t w1 = 0; w1 < m1.weights.size(); ++w1)
        for (size_t w2 = 0; w2 < m2.weights.size(); ++w2) {
            Weight w = weight_add(m1.weights[w1], m2.weights[w2]);
            for (int a = 0; a < m1.dim[w1]; ++a)
                for (int b = 0; b < m2.dim[w2]; ++b)
                    slots[w].emplace_back(static_cast<int>(w1), a, static_cast<int>(w2), b);
        }
    for (const auto& [w, sl] : slots) {
        t.windex[w] = static_cast<int>(t.weights.size());
        t.weights.push_back(w);
        t.dim.push_back(static_cast<int>(sl.size()));
    }
    // nmax: largest stored divided power among the factors, doubled.
    int nmax = 1;
    for (const auto& [spec, blk] : m1.act) nmax = std::max(nmax, std::get<2>(spec));
    for (const auto& [spec, blk] : m2.act) nmax = std::max(nmax, std::get<2>(spec));
    nmax *= 2;
    for (size_t wi = 0; wi < t.weights.size(); ++wi) {
        const auto& sl = slots.at(t.weights[wi]);
        for (int i = 0; i < d.rank(); ++i) {
            for (int is_e = 0; is_e < 2; ++is_e) {
                for (int n = 1; n <= nmax; ++n) {
                    Weight tw = is_e ? weight_add(t.weights[wi], weight_scale(n, d.simple_root(i)))
                                     : weight_sub(t.weights[wi], weight_scale(n, d.simple_root(i)));
                    int ti = t.weight_index(tw);
                    if (ti < 0) continue;
                    const auto& tsl = slots.at(tw);
                    std::map<std::tuple<int, int, int, int>, int> tpos;
                    for (size_t p = 0; p < tsl.size(); ++p) tpos[tsl[p]] = static_cast<int>(p);
                    // Delta of the divided generator power.
                    UElem g = is_e ? alg.power(alg.gen_e(i), n) : alg.power(alg.gen_f(i), n);
                    g = alg.smul(QScalar(1) / qfact(n, alg.tpow_simple(i)), g);
                    TensorUElem dg = alg.coproduct(g);
                    Mat<QScalar> blk(tsl.size(), Vec<QScalar>(sl.size(), QScalar()));
                    bool nonzero = false;
                    for (const auto& [pr, c] : dg) {
                        // Apply per slot.
                        for (size_t col = 0; col < sl.size(); ++col) {
                            auto [w1, a, w2, b] = sl[col];
                            // left key on m1 restricted to the single basis vector a
                            auto left = apply_simple_key(alg, m1, pr.first, w1);
                            if (left.empty()) continue;
                            auto right = apply_simple_key(alg, m2, pr.second, w2);
                            if (right.empty()) continue;
                            for (const auto& [t1, mat1] : left)
                                for (const auto& [t2, mat2] : right) {
                                    for (size_t r1 = 0; r1 < mat1.size(); ++r1) {
                                        if (mat1[r1][a].is_zero()) continue;
                                        for (size_t r2 = 0; r2 < mat2.size(); ++r2) {
                                            if (mat2[r2][b].is_zero()) continue;
                                            auto it = tpos.find({t1, static_cast<int>(r1), t2,
                                                                 static_cast<int>(r2)});
                                            if (it == tpos.end())
                                                throw std::logic_error("tensor_module: slot missing");
                                            blk[it->second][col] +=
                                                c * mat1[r1][a] * mat2[r2][b];
                                            nonzero = true;
                                        }
                                    }
                                }
                        }
                    }
                    if (nonzero) t.act[{is_e, i, n, static_cast<int>(wi)}] = std::move(blk);
                }
            }
        }
    }
    return t;
}

TensorIndex tensor_index(const FModule& m1, const FModule& m2, const FModule& prod) {
    TensorIndex ti;
    ti.slots.resize(prod.weights.size());
    std::map<Weight, std::vector<std::tuple<int, int, int, int>>> slots;
    for (size_t w1 = 0; w1 < m1.weights.size(); ++w1)
        for (size_t w2 = 0; w2 < m2.weights.size(); ++w2) {
            Weight w = weight_add(m1.weights[w1], m2.weights[w2]);
            for (int a = 0; a < m1.dim[w1]; ++a)
                for (int b = 0; b < m2.dim[w2]; ++b)
                    slots[w].emplace_back(static_cast<int>(w1), a, static_cast<int>(w2), b);
        }
    for (const auto& [w, sl] : slots) ti.slots[prod.windex.at(w)] = sl;
    return ti;
}

template <class K>
std::map<int, Mat<K>> braid_module_operator(const RootDatum& datum, const WModule<K>& m, int i,
                                            int sign, int variant) {
    if (m.truncated)
        throw std::invalid_argument("braid_module_operator: module window is truncated");
    int dd = datum.lattice_index();
    int di = datum.d_sym(i);
    K zero{};

    struct Factor {
        bool is_e;
        long lead;  // v-power applied per step
        int ksign;  // k_i^{ksign} applied after the generator, 0 = none
        bool neg;
    };
    // First expression: A(f) B(-e) C(f); second: A'(e) B'(f) C'(e).
    std::vector<Factor> factors;
    if (variant == 0) {
        factors = {Factor{false, static_cast<long>(dd) * di, +1, false},
                   Factor{true, 0, 0, true},
                   Factor{false, -static_cast<long>(dd) * di, -1, false}};
    } else {
        factors = {Factor{true, static_cast<long>(dd) * di, -1, true},
                   Factor{false, 0, 0, false},
                   Factor{true, -static_cast<long>(dd) * di, +1, true}};
    }

    std::map<int, Mat<K>> result;
    for (size_t wi = 0; wi < m.weights.size(); ++wi) {
        // state: components (weight index -> matrix dim(w') x dim(w_src))
        std::map<int, Mat<K>> state;
        // H_i first: scalar q^{(w,a_i)((w,a_i^vee)+1)/2}.
        {
            const Weight& w = m.weights[wi];
            long wi_pair = w[i];
            long e_h = static_cast<long>(dd) * di * wi_pair * (wi_pair + 1) / 2;
            Mat<K> id(m.dim[wi], Vec<K>(m.dim[wi], zero));
            K s = m.vpow(e_h);
            for (int r = 0; r < m.dim[wi]; ++r) id[r][r] = s;
            state[static_cast<int>(wi)] = std::move(id);
        }
        // Apply the three exp factors right to left.
        for (auto fit = factors.rbegin(); fit != factors.rend(); ++fit) {
            const Factor& fac = *fit;
            std::map<int, Mat<K>> next;
            for (const auto& [cw, mat] : state) {
                // n = 0 term
                {
                    auto it = next.find(cw);
                    if (it == next.end())
                        next.emplace(cw, mat);
                    else
                        it->second = mat_add(it->second, mat);
                }
                // n >= 1 terms
                Weight u = m.weights[cw];
                K step_acc = m.one;
                for (int n = 1;; ++n) {
                    // accumulated one-step scalars
                    Weight prev = fac.is_e ? weight_add(u, weight_scale(n - 1, datum.simple_root(i)))
                                           : weight_sub(u, weight_scale(n - 1, datum.simple_root(i)));
                    Weight stepw = fac.is_e ? weight_add(prev, datum.simple_root(i))
                                            : weight_sub(prev, datum.simple_root(i));
                    long spow = fac.lead;
                    if (fac.ksign != 0)
                        spow += fac.ksign * datum.form_times_index(stepw, datum.simple_root(i));
                    K step = m.vpow(spow);
                    if (fac.neg) step = zero - step;
                    step_acc = step_acc * step;
                    const Mat<K>* blk = m.block(fac.is_e, i, n, cw);
                    if (!blk) {
                        // no nonzero divided power at this and all larger n
                        // (strings are contiguous), stop.
                        bool more = false;
                        for (int n2 = n + 1; n2 <= n + 2; ++n2)
                            if (m.block(fac.is_e, i, n2, cw)) more = true;
                        if (!more) break;
                        continue;
                    }
                    Weight tw = fac.is_e ? weight_add(u, weight_scale(n, datum.simple_root(i)))
                                         : weight_sub(u, weight_scale(n, datum.simple_root(i)));
                    int ti = m.weight_index(tw);
                    if (ti < 0) break;
                    long tpow = -static_cast<long>(dd) * di * n * (n - 1) / 2;  // t = q_i^{-1}
                    K coeff = m.vpow(tpow) * step_acc;
                    Mat<K> term = mat_mul(*blk, mat);
                    term = mat_scale(term, coeff);
                    auto it = next.find(ti);
                    if (it == next.end())
                        next.emplace(ti, std::move(term));
                    else
                        it->second = mat_add(it->second, term);
                }
            }
            state = std::move(next);
        }
        // The result must live entirely at s_i(w).
        Weight target = datum.simple_reflect(i, m.weights[wi]);
        int ti = m.weight_index(target);
        Mat<K> total(ti >= 0 ? m.dim[ti] : 0, Vec<K>(m.dim[wi], zero));
        for (const auto& [cw, mat] : state) {
            bool zero_mat = true;
            for (const auto& row : mat)
                for (const auto& x : row)
                    if (!(x == zero)) zero_mat = false;
            if (zero_mat) continue;
            if (cw != ti) throw std::logic_error("braid_module_operator: image off the target weight");
            total = mat_add(total, mat);
        }
        result[static_cast<int>(wi)] = std::move(total);
    }
    if (sign < 0) {
        // T_i^{-1} block at w = inverse of the block at s_i(w).
        std::map<int, Mat<K>> inv;
        for (const auto& [wi, mat] : result) {
            Weight target = datum.simple_reflect(i, m.weights[wi]);
            int ti = m.weight_index(target);
            inv[ti] = mat_inverse(mat, m.one);
        }
        return inv;
    }
    return result;
}

template std::map<int, Mat<QScalar>> braid_module_operator<QScalar>(const RootDatum&,
                                                                    const WModule<QScalar>&, int,
                                                                    int, int);
template std::map<int, Mat<CycScalar>> braid_module_operator<CycScalar>(const RootDatum&,
                                                                        const WModule<CycScalar>&,
                                                                        int, int, int);
template std::map<int, Mat<mpq_class>> braid_module_operator<mpq_class>(const RootDatum&,
                                                                        const WModule<mpq_class>&,
                                                                        int, int, int);

}  // namespace qroots
