#include "qroots/uq.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qroots {

UAlgebra::UAlgebra(RootDatum datum, int height_bound)
    : datum_(std::move(datum)), ht_bound_(height_bound), n_(datum_.num_positive_roots()) {}

QScalar UAlgebra::qpow_form(const Weight& a, const Weight& b) const {
    return QScalar::v_pow(static_cast<int>(datum_.form_times_index(a, b)));
}

UElem UAlgebra::one() const { return gen_k(Weight(datum_.rank(), 0)); }

UElem UAlgebra::gen_k(const Weight& lam) const {
    UElem r;
    UKey key{std::vector<int>(n_, 0), lam, std::vector<int>(n_, 0)};
    r[key] = QScalar(1);
    return r;
}

UElem UAlgebra::scalar(const QScalar& c) const {
    UElem r;
    if (c.is_zero()) return r;
    UKey key{std::vector<int>(n_, 0), Weight(datum_.rank(), 0), std::vector<int>(n_, 0)};
    r[key] = c;
    return r;
}

UElem UAlgebra::root_power(Side side, int root_idx, int m) const {
    UElem r;
    UKey key{std::vector<int>(n_, 0), Weight(datum_.rank(), 0), std::vector<int>(n_, 0)};
    if (side == Side::Plus)
        key.e[root_idx] = m;
    else
        key.f[root_idx] = m;
    r[key] = QScalar(1);
    return r;
}

UElem UAlgebra::root_vector(Side side, int root_idx) const {
    return root_power(side, root_idx, 1);
}

UElem UAlgebra::gen_e(int i) const {
    // Simple roots appear among the betas; alpha_i = beta_k for the k with
    // beta_k equal to alpha_i.
    for (int k = 0; k < n_; ++k)
        if (datum_.pos_root(k) == datum_.simple_root(i)) return root_power(Side::Plus, k, 1);
    throw std::logic_error("gen_e: simple root not among positive roots");
}

UElem UAlgebra::gen_f(int i) const {
    for (int k = 0; k < n_; ++k)
        if (datum_.pos_root(k) == datum_.simple_root(i)) return root_power(Side::Minus, k, 1);
    throw std::logic_error("gen_f: simple root not among positive roots");
}

void UAlgebra::add_term(UElem& dst, const UKey& key, const QScalar& c) const {
    if (c.is_zero()) return;
    auto it = dst.find(key);
    if (it == dst.end()) {
        dst.emplace(key, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) dst.erase(it);
    }
}

UElem UAlgebra::add(const UElem& a, const UElem& b) const {
    UElem r = a;
    for (const auto& [k, c] : b) add_term(r, k, c);
    return r;
}

UElem UAlgebra::sub(const UElem& a, const UElem& b) const {
    UElem r = a;
    for (const auto& [k, c] : b) add_term(r, k, -c);
    return r;
}

UElem UAlgebra::smul(const QScalar& c, const UElem& a) const {
    UElem r;
    if (c.is_zero()) return r;
    for (const auto& [k, x] : a) r[k] = c * x;
    return r;
}

Weight UAlgebra::side_weight(Side side, const std::vector<int>& mono) const {
    Weight w(datum_.rank(), 0);
    for (int k = 0; k < n_; ++k)
        if (mono[k] != 0) w = weight_add(w, weight_scale(mono[k], datum_.pos_root(k)));
    if (side == Side::Minus) w = weight_neg(w);
    return w;
}

long UAlgebra::side_height(const std::vector<int>& mono) const {
    long h = 0;
    for (int k = 0; k < n_; ++k)
        if (mono[k] != 0) h += mono[k] * datum_.height_in_Q(datum_.pos_root(k));
    return h;
}

int UAlgebra::check_ht(const std::vector<int>& mono) const {
    long h = side_height(mono);
    if (h > ht_bound_)
        throw std::domain_error("degree bound exceeded (height " + std::to_string(h) + " > " +
                                std::to_string(ht_bound_) + ")");
    return static_cast<int>(h);
}

Weight UAlgebra::key_weight(const UKey& key) const {
    return weight_add(side_weight(Side::Plus, key.e), side_weight(Side::Minus, key.f));
}

bool UAlgebra::is_homogeneous(const UElem& a, Weight* wt) const {
    bool first = true;
    Weight w;
    for (const auto& [k, c] : a) {
        Weight kw = key_weight(k);
        if (first) {
            w = kw;
            first = false;
        } else if (kw != w) {
            return false;
        }
    }
    if (first) w = Weight(datum_.rank(), 0);
    if (wt) *wt = w;
    return true;
}

std::map<Weight, QScalar> UAlgebra::hc_project(const UElem& a) const {
    std::map<Weight, QScalar> r;
    for (const auto& [k, c] : a) {
        bool pure = true;
        for (int j = 0; j < n_; ++j)
            if (k.f[j] != 0 || k.e[j] != 0) pure = false;
        if (pure) r[k.k] = c;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Word spaces: free words of one weight modulo the graded Serre ideal piece.
// ---------------------------------------------------------------------------

const UAlgebra::WordSpace& UAlgebra::word_space(Side side, const Weight& gamma) const {
    auto memo_key = std::make_pair(side == Side::Plus ? 0 : 1, gamma);
    auto it = word_spaces_.find(memo_key);
    if (it != word_spaces_.end()) return it->second;

    WordSpace ws;
    // Content of gamma in simple roots.
    std::vector<mpq_class> ac = datum_.alpha_coords(gamma);
    std::vector<int> content(datum_.rank());
    for (int i = 0; i < datum_.rank(); ++i) {
        if (ac[i].get_den() != 1 || ac[i] < 0)
            throw std::invalid_argument("word_space: weight not in Q^+");
        content[i] = static_cast<int>(ac[i].get_num().get_si());
    }
    // All words with this content, lexicographic.
    HalfWord cur;
    std::function<void(std::vector<int>&)> gen = [&](std::vector<int>& left) {
        bool done = true;
        for (int i = 0; i < datum_.rank(); ++i)
            if (left[i] > 0) done = false;
        if (done) {
            ws.words.push_back(cur);
            return;
        }
        for (int i = 0; i < datum_.rank(); ++i) {
            if (left[i] == 0) continue;
            left[i]--;
            cur.push_back(i);
            gen(left);
            cur.pop_back();
            left[i]++;
        }
    };
    std::vector<int> left = content;
    gen(left);
    for (size_t w = 0; w < ws.words.size(); ++w) ws.index[ws.words[w]] = static_cast<int>(w);

    // Serre ideal piece: all x * S_ij * y of weight gamma.
    size_t W = ws.words.size();
    auto gen_words = [&](const std::vector<int>& cont) {
        std::vector<HalfWord> out;
        HalfWord w;
        std::vector<int> left = cont;
        std::function<void()> rec = [&]() {
            bool done = true;
            for (int i = 0; i < datum_.rank(); ++i)
                if (left[i] > 0) done = false;
            if (done) {
                out.push_back(w);
                return;
            }
            for (int i = 0; i < datum_.rank(); ++i) {
                if (left[i] == 0) continue;
                left[i]--;
                w.push_back(i);
                rec();
                w.pop_back();
                left[i]++;
            }
        };
        rec();
        return out;
    };
    for (int i = 0; i < datum_.rank(); ++i) {
        for (int j = 0; j < datum_.rank(); ++j) {
            if (i == j) continue;
            int m = 1 - datum_.cartan(i, j);
            // Serre relation words i^(m-n) j i^n with coefficients
            // (-1)^n / ([m-n]! [n]!) at t = q_i (same shape on both halves).
            std::vector<std::pair<HalfWord, QScalar>> serre;
            for (int nn = 0; nn <= m; ++nn) {
                HalfWord w;
                for (int r = 0; r < m - nn; ++r) w.push_back(i);
                w.push_back(j);
                for (int r = 0; r < nn; ++r) w.push_back(i);
                QScalar c = QScalar(1) / (qfact(m - nn, tpow_simple(i)) * qfact(nn, tpow_simple(i)));
                if (nn % 2 == 1) c = -c;
                serre.emplace_back(std::move(w), std::move(c));
            }
            // Content left over for the x / y factors.
            std::vector<int> rem = content;
            rem[i] -= m;
            rem[j] -= 1;
            bool ok = true;
            for (int t = 0; t < datum_.rank(); ++t)
                if (rem[t] < 0) ok = false;
            if (!ok) continue;
            // All splits rem = cx + cy.
            std::vector<int> cx(datum_.rank(), 0);
            std::function<void(int)> split = [&](int pos) {
                if (pos == datum_.rank()) {
                    std::vector<int> cy(datum_.rank());
                    for (int t = 0; t < datum_.rank(); ++t) cy[t] = rem[t] - cx[t];
                    for (const HalfWord& x : gen_words(cx)) {
                        for (const HalfWord& y : gen_words(cy)) {
                            Vec<QScalar> vec(W, QScalar());
                            for (const auto& [sw, sc] : serre) {
                                HalfWord full = x;
                                full.insert(full.end(), sw.begin(), sw.end());
                                full.insert(full.end(), y.begin(), y.end());
                                vec[ws.index.at(full)] += sc;
                            }
                            ws.serre.insert(std::move(vec));
                        }
                    }
                    return;
                }
                for (int v = 0; v <= rem[pos]; ++v) {
                    cx[pos] = v;
                    split(pos + 1);
                }
                cx[pos] = 0;
            };
            split(0);
        }
    }
    auto [pos, inserted] = word_spaces_.emplace(memo_key, std::move(ws));
    (void)inserted;
    return pos->second;
}

// ---------------------------------------------------------------------------
// Triangular bootstrap calculus on raw Chevalley words.
// ---------------------------------------------------------------------------

UAlgebra::TriElem UAlgebra::tri_one() const {
    TriElem r;
    r[TriKey{{}, Weight(datum_.rank(), 0), {}}] = QScalar(1);
    return r;
}

UAlgebra::TriElem UAlgebra::tri_smul(const QScalar& c, const TriElem& a) const {
    TriElem r;
    if (c.is_zero()) return r;
    for (const auto& [k, x] : a) r[k] = c * x;
    return r;
}

UAlgebra::TriElem UAlgebra::tri_add(const TriElem& a, const TriElem& b) const {
    TriElem r = a;
    for (const auto& [k, c] : b) {
        auto it = r.find(k);
        if (it == r.end())
            r.emplace(k, c);
        else {
            it->second += c;
            if (it->second.is_zero()) r.erase(it);
        }
    }
    return r;
}

namespace {
Weight word_weight(const RootDatum& d, const HalfWord& w, int sign) {
    Weight r(d.rank(), 0);
    for (int i : w) r = weight_add(r, d.simple_root(i));
    if (sign < 0) r = weight_neg(r);
    return r;
}
}  // namespace

UAlgebra::TriElem UAlgebra::commute_e_past_fword(int i, const HalfWord& fw) const {
    // e_i * (f-word) rewritten with all e's to the right of all f's.
    if (fw.empty()) {
        TriElem r;
        r[TriKey{{}, Weight(datum_.rank(), 0), {i}}] = QScalar(1);
        return r;
    }
    int j = fw.front();
    HalfWord rest(fw.begin() + 1, fw.end());
    TriElem r;
    // Term f_j * (e_i * rest).
    TriElem inner = commute_e_past_fword(i, rest);
    for (const auto& [k, c] : inner) {
        TriKey nk = k;
        nk.f.insert(nk.f.begin(), j);
        r[nk] = c;  // keys distinct per inner key
    }
    if (i == j) {
        // + (k_i - k_i^{-1})/(q_i - q_i^{-1}) * rest.
        Weight restw = word_weight(datum_, rest, -1);
        QScalar den = QScalar::v_pow(tpow_simple(i)) - QScalar::v_pow(-tpow_simple(i));
        Weight ai = datum_.simple_root(i);
        // k_{+-alpha_i} * rest = q^{(+-alpha_i, wt(rest))} rest * k_{+-alpha_i}
        QScalar cplus = qpow_form(ai, restw) / den;
        QScalar cminus = qpow_form(weight_neg(ai), restw) / den;
        TriKey kp{rest, ai, {}};
        TriKey km{rest, weight_neg(ai), {}};
        auto acc = [&](const TriKey& key, const QScalar& c) {
            auto it = r.find(key);
            if (it == r.end())
                r.emplace(key, c);
            else {
                it->second += c;
                if (it->second.is_zero()) r.erase(it);
            }
        };
        acc(kp, cplus);
        acc(km, -cminus);
    }
    return r;
}

UAlgebra::TriElem UAlgebra::commute_eword_past_fword(const HalfWord& ew, const HalfWord& fw) const {
    if (ew.empty()) {
        TriElem r;
        r[TriKey{fw, Weight(datum_.rank(), 0), {}}] = QScalar(1);
        return r;
    }
    if (fw.empty()) {
        TriElem r;
        r[TriKey{{}, Weight(datum_.rank(), 0), ew}] = QScalar(1);
        return r;
    }
    int h = ew.front();
    HalfWord rest(ew.begin() + 1, ew.end());
    TriElem inner = commute_eword_past_fword(rest, fw);
    TriElem r;
    for (const auto& [k, c] : inner) {
        // h * (F k E) = (h*F) k E with the produced k/e parts shuffled in.
        TriElem moved = commute_e_past_fword(h, k.f);
        for (const auto& [mk, mc] : moved) {
            // (F' k' E') * k.k * E : pass k.k left over E'.
            QScalar sc = c * mc * qpow_form(weight_neg(k.k), word_weight(datum_, mk.e, +1));
            TriKey nk;
            nk.f = mk.f;
            nk.k = weight_add(mk.k, k.k);
            nk.e = mk.e;
            nk.e.insert(nk.e.end(), k.e.begin(), k.e.end());
            auto it = r.find(nk);
            if (it == r.end())
                r.emplace(nk, sc);
            else {
                it->second += sc;
                if (it->second.is_zero()) r.erase(it);
            }
        }
    }
    return r;
}

UAlgebra::TriElem UAlgebra::tri_mul(const TriElem& a, const TriElem& b) const {
    TriElem r;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            TriElem mid = commute_eword_past_fword(ka.e, kb.f);
            for (const auto& [km, cm] : mid) {
                // Assemble F_a (k_a (F_m k_m E_m) k_b) E_b.
                QScalar sc = ca * cb * cm;
                sc *= qpow_form(ka.k, word_weight(datum_, km.f, -1));   // k_a past F_m
                sc *= qpow_form(weight_neg(kb.k), word_weight(datum_, km.e, +1));  // E_m past k_b
                TriKey nk;
                nk.f = ka.f;
                nk.f.insert(nk.f.end(), km.f.begin(), km.f.end());
                nk.k = weight_add(weight_add(ka.k, km.k), kb.k);
                nk.e = km.e;
                nk.e.insert(nk.e.end(), kb.e.begin(), kb.e.end());
                auto it = r.find(nk);
                if (it == r.end())
                    r.emplace(nk, sc);
                else {
                    it->second += sc;
                    if (it->second.is_zero()) r.erase(it);
                }
            }
        }
    }
    return r;
}

UAlgebra::TriElem UAlgebra::braid_gen_image(int i, int sign, int gen_kind, int j) const {
    TriElem r;
    Weight ai = datum_.simple_root(i);
    int ti = tpow_simple(i);
    if (j == i) {
        if (sign > 0 && gen_kind == 0) {
            // T_i(e_i) = -f_i k_i
            r[TriKey{{i}, ai, {}}] = QScalar(-1);
        } else if (sign > 0 && gen_kind == 1) {
            // T_i(f_i) = -k_i^{-1} e_i
            r[TriKey{{}, weight_neg(ai), {i}}] = QScalar(-1);
        } else if (sign < 0 && gen_kind == 0) {
            // T_i^{-1}(e_i) = -k_i^{-1} f_i = -q_i^2 f_i k_i^{-1}
            r[TriKey{{i}, weight_neg(ai), {}}] = -QScalar::v_pow(2 * ti);
        } else {
            // T_i^{-1}(f_i) = -e_i k_i = -q_i^{-2} k_i e_i
            r[TriKey{{}, ai, {i}}] = -QScalar::v_pow(-2 * ti);
        }
        return r;
    }
    int m = -datum_.cartan(i, j);
    Weight zero(datum_.rank(), 0);
    for (int k = 0; k <= m; ++k) {
        QScalar c = QScalar(1) / (qfact(m - k, ti) * qfact(k, ti));
        if (k % 2 == 1) c = -c;
        // Global (-1)^m so that conjugation by the integrable-module braid
        // operator recovers exactly this automorphism.
        if (m % 2 == 1) c = -c;
        HalfWord w;
        if (gen_kind == 0) {
            c = c * QScalar::v_pow(-k * ti);
            if (sign > 0) {
                // e_i^(m-k) e_j e_i^(k)
                for (int r2 = 0; r2 < m - k; ++r2) w.push_back(i);
                w.push_back(j);
                for (int r2 = 0; r2 < k; ++r2) w.push_back(i);
            } else {
                // e_i^(k) e_j e_i^(m-k)
                for (int r2 = 0; r2 < k; ++r2) w.push_back(i);
                w.push_back(j);
                for (int r2 = 0; r2 < m - k; ++r2) w.push_back(i);
            }
            TriKey key{{}, zero, w};
            auto it = r.find(key);
            if (it == r.end())
                r.emplace(key, c);
            else
                it->second += c;
        } else {
            c = c * QScalar::v_pow(k * ti);
            if (sign > 0) {
                // f_i^(k) f_j f_i^(m-k)
                for (int r2 = 0; r2 < k; ++r2) w.push_back(i);
                w.push_back(j);
                for (int r2 = 0; r2 < m - k; ++r2) w.push_back(i);
            } else {
                // f_i^(m-k) f_j f_i^(k)
                for (int r2 = 0; r2 < m - k; ++r2) w.push_back(i);
                w.push_back(j);
                for (int r2 = 0; r2 < k; ++r2) w.push_back(i);
            }
            TriKey key{w, zero, {}};
            auto it = r.find(key);
            if (it == r.end())
                r.emplace(key, c);
            else
                it->second += c;
        }
    }
    return r;
}

UAlgebra::TriElem UAlgebra::braid_tri(int i, int sign, const TriElem& a) const {
    TriElem out;
    for (const auto& [key, c] : a) {
        TriElem prod = tri_one();
        for (int j : key.f) prod = tri_mul(prod, braid_gen_image(i, sign, 1, j));
        // T_i^{+-1}(k_mu) = k_{s_i mu}
        TriElem kimg;
        kimg[TriKey{{}, datum_.simple_reflect(i, key.k), {}}] = QScalar(1);
        prod = tri_mul(prod, kimg);
        for (int j : key.e) prod = tri_mul(prod, braid_gen_image(i, sign, 0, j));
        out = tri_add(out, tri_smul(c, prod));
    }
    return out;
}

void UAlgebra::build_root_reps() const {
    if (!root_reps_plus_.empty()) return;
    const auto& word = datum_.w0_word();
    for (int k = 0; k < n_; ++k) {
        for (int side = 0; side < 2; ++side) {
            TriElem cur;
            if (side == 0)
                cur[TriKey{{}, Weight(datum_.rank(), 0), {word[k]}}] = QScalar(1);
            else
                cur[TriKey{{word[k]}, Weight(datum_.rank(), 0), {}}] = QScalar(1);
            for (int j = k - 1; j >= 0; --j) cur = braid_tri(word[j], +1, cur);
            // Reduce to verify the result is a pure one-sided element and
            // extract Serre-reduced word coordinates.
            WordVec pure;
            Weight beta = datum_.pos_root(k);
            const WordSpace& wsp = word_space(side == 0 ? Side::Plus : Side::Minus, beta);
            Vec<QScalar> acc(wsp.words.size(), QScalar());
            for (const auto& [tk, c] : cur) {
                bool is_pure = weight_is_zero(tk.k) && (side == 0 ? tk.f.empty() : tk.e.empty());
                const HalfWord& w = (side == 0) ? tk.e : tk.f;
                if (!is_pure) {
                    // Mixed term: must cancel after Serre reduction on each half.
                    const Weight gf = word_weight(datum_, tk.f, +1);
                    const Weight ge = word_weight(datum_, tk.e, +1);
                    const WordSpace& wf = word_space(Side::Minus, gf);
                    const WordSpace& we = word_space(Side::Plus, ge);
                    Vec<QScalar> vf(wf.words.size(), QScalar());
                    vf[wf.index.at(tk.f)] = QScalar(1);
                    wf.serre.reduce(vf);
                    Vec<QScalar> ve(we.words.size(), QScalar());
                    ve[we.index.at(tk.e)] = QScalar(1);
                    we.serre.reduce(ve);
                    if (!vec_is_zero(vf) && !vec_is_zero(ve)) {
                        // Accumulate in a side table keyed by (f, k, e)-reduced
                        // coordinates; handled below via mixed_acc.
                        // Store raw for the mixed accumulation pass.
                    }
                    continue;  // handled in the dedicated pass below
                }
                Vec<QScalar> v(wsp.words.size(), QScalar());
                v[wsp.index.at(w)] = c;
                wsp.serre.reduce(v);
                for (size_t t = 0; t < v.size(); ++t) acc[t] += v[t];
            }
            // Verify mixed terms cancel: group them by (k, f-weight, e-weight)
            // and reduce both halves.
            std::map<std::tuple<Weight, Weight, Weight>, std::map<std::pair<HalfWord, HalfWord>, QScalar>>
                mixed;
            for (const auto& [tk, c] : cur) {
                bool is_pure = weight_is_zero(tk.k) && (side == 0 ? tk.f.empty() : tk.e.empty());
                if (is_pure) continue;
                auto key = std::make_tuple(tk.k, word_weight(datum_, tk.f, +1),
                                           word_weight(datum_, tk.e, +1));
                mixed[key][{tk.f, tk.e}] += c;
            }
            for (const auto& [mk, terms] : mixed) {
                const Weight& gf = std::get<1>(mk);
                const Weight& ge = std::get<2>(mk);
                const WordSpace& wf = word_space(Side::Minus, gf);
                const WordSpace& we = word_space(Side::Plus, ge);
                // Matrix over reduced f-words x reduced e-words.
                Mat<QScalar> grid(wf.words.size(), Vec<QScalar>(we.words.size(), QScalar()));
                for (const auto& [pr, c] : terms) {
                    Vec<QScalar> vf(wf.words.size(), QScalar());
                    vf[wf.index.at(pr.first)] = QScalar(1);
                    wf.serre.reduce(vf);
                    Vec<QScalar> ve(we.words.size(), QScalar());
                    ve[we.index.at(pr.second)] = QScalar(1);
                    we.serre.reduce(ve);
                    for (size_t a2 = 0; a2 < vf.size(); ++a2) {
                        if (vf[a2] == QScalar()) continue;
                        for (size_t b2 = 0; b2 < ve.size(); ++b2)
                            grid[a2][b2] += c * vf[a2] * ve[b2];
                    }
                }
                for (const auto& row : grid)
                    for (const auto& x : row)
                        if (!(x == QScalar()))
                            throw std::logic_error(
                                "root vector bootstrap: mixed terms failed to cancel");
            }
            for (size_t t = 0; t < acc.size(); ++t)
                if (!(acc[t] == QScalar())) pure[wsp.words[t]] = acc[t];
            if (side == 0)
                root_reps_plus_.push_back(std::move(pure));
            else
                root_reps_minus_.push_back(std::move(pure));
        }
    }
}

// ---------------------------------------------------------------------------
// PBW spaces: expansions and conversions.
// ---------------------------------------------------------------------------

namespace {
// Word-level product of word combinations (concatenation).
WordVec wordvec_mul(const WordVec& a, const WordVec& b) {
    WordVec r;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
            HalfWord w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            auto it = r.find(w);
            QScalar c = ca * cb;
            if (it == r.end())
                r.emplace(std::move(w), std::move(c));
            else {
                it->second += c;
                if (it->second.is_zero()) r.erase(it);
            }
        }
    return r;
}
}  // namespace

const WordVec& UAlgebra::pbw_expansion(Side side, const std::vector<int>& mono) const {
    auto memo_key = std::make_pair(side == Side::Plus ? 0 : 1, mono);
    auto it = pbw_expansions_.find(memo_key);
    if (it != pbw_expansions_.end()) return it->second;
    build_root_reps();
    const auto& reps = (side == Side::Plus) ? root_reps_plus_ : root_reps_minus_;
    WordVec cur;
    cur[HalfWord{}] = QScalar(1);
    // Monomial order: root index N-1 leftmost down to 0.
    for (int k = n_ - 1; k >= 0; --k)
        for (int c = 0; c < mono[k]; ++c) cur = wordvec_mul(cur, reps[k]);
    auto [pos, inserted] = pbw_expansions_.emplace(memo_key, std::move(cur));
    (void)inserted;
    return pos->second;
}

const std::vector<std::vector<int>>& UAlgebra::pbw_monomials(Side side, const Weight& gamma) const {
    return pbw_space(side, gamma).monos;
}

const UAlgebra::PbwSpace& UAlgebra::pbw_space(Side side, const Weight& gamma) const {
    auto memo_key = std::make_pair(side == Side::Plus ? 0 : 1, gamma);
    auto it = pbw_spaces_.find(memo_key);
    if (it != pbw_spaces_.end()) return it->second;

    PbwSpace ps;
    // Enumerate exponent vectors with sum m_k beta_k = gamma (lex order).
    std::vector<int> cur(n_, 0);
    std::function<void(int, const Weight&)> gen = [&](int k, const Weight& rem) {
        if (k == n_) {
            if (weight_is_zero(rem)) ps.monos.push_back(cur);
            return;
        }
        Weight r = rem;
        int m = 0;
        for (;;) {
            cur[k] = m;
            gen(k + 1, r);
            // subtract beta_k once more if possible
            r = weight_sub(r, datum_.pos_root(k));
            ++m;
            // crude positivity cut: height must stay >= 0
            if (!datum_.in_root_lattice(r)) break;
            long h = datum_.height_in_Q(r);
            if (h < 0) break;
        }
        cur[k] = 0;
    };
    gen(0, gamma);
    std::sort(ps.monos.begin(), ps.monos.end());
    for (size_t i = 0; i < ps.monos.size(); ++i) ps.index[ps.monos[i]] = static_cast<int>(i);

    const WordSpace& ws = word_space(side, gamma);
    size_t W = ws.words.size();
    size_t P = ps.monos.size();
    for (size_t p = 0; p < P; ++p) {
        const WordVec& wv = pbw_expansion(side, ps.monos[p]);
        Vec<QScalar> v(W, QScalar());
        for (const auto& [w, c] : wv) v[ws.index.at(w)] += c;
        ws.serre.reduce(v);
        ps.expansion.push_back(v);
        Vec<QScalar> aug(W + P, QScalar());
        for (size_t t = 0; t < W; ++t) aug[t] = v[t];
        aug[W + p] = QScalar(1);
        if (!ps.solver.insert(std::move(aug)))
            throw std::logic_error("PBW monomials dependent: straightening failure");
    }
    auto [pos, inserted] = pbw_spaces_.emplace(memo_key, std::move(ps));
    (void)inserted;
    return pos->second;
}

std::map<std::vector<int>, QScalar> UAlgebra::words_to_pbw(Side side, const WordVec& wv,
                                                           const Weight& gamma) const {
    std::map<std::vector<int>, QScalar> out;
    if (wv.empty()) return out;
    const WordSpace& ws = word_space(side, gamma);
    const PbwSpace& ps = pbw_space(side, gamma);
    size_t W = ws.words.size(), P = ps.monos.size();
    Vec<QScalar> v(W + P, QScalar());
    for (const auto& [w, c] : wv) v[ws.index.at(w)] += c;
    {
        // reduce only on the first W coordinates via the Serre span
        Vec<QScalar> head(v.begin(), v.begin() + W);
        ws.serre.reduce(head);
        for (size_t t = 0; t < W; ++t) v[t] = head[t];
    }
    ps.solver.reduce(v);
    for (size_t t = 0; t < W; ++t)
        if (!(v[t] == QScalar()))
            throw std::logic_error("words_to_pbw: vector not in the PBW span");
    for (size_t p = 0; p < P; ++p)
        if (!(v[W + p] == QScalar())) out[ps.monos[p]] = -v[W + p];
    return out;
}

const UElem& UAlgebra::pbw_product(Side side, const std::vector<int>& a,
                                   const std::vector<int>& b) const {
    auto memo_key = std::make_tuple(side == Side::Plus ? 0 : 1, a, b);
    auto it = pbw_products_.find(memo_key);
    if (it != pbw_products_.end()) return it->second;
    Weight gamma = weight_add(side_weight(side, a), side_weight(side, b));
    if (side == Side::Minus) gamma = weight_neg(gamma);
    {
        std::vector<int> total(n_);
        for (int k2 = 0; k2 < n_; ++k2) total[k2] = a[k2] + b[k2];
        check_ht(total);
    }
    WordVec prod = wordvec_mul(pbw_expansion(side, a), pbw_expansion(side, b));
    auto coords = words_to_pbw(side, prod, gamma);
    UElem r;
    for (const auto& [mono, c] : coords) {
        UKey key{std::vector<int>(n_, 0), Weight(datum_.rank(), 0), std::vector<int>(n_, 0)};
        if (side == Side::Plus)
            key.e = mono;
        else
            key.f = mono;
        r[key] = c;
    }
    auto [pos, inserted] = pbw_products_.emplace(memo_key, std::move(r));
    (void)inserted;
    return pos->second;
}

const UElem& UAlgebra::ef_commute(const std::vector<int>& emono,
                                  const std::vector<int>& fmono) const {
    auto memo_key = std::make_pair(emono, fmono);
    auto it = ef_commute_.find(memo_key);
    if (it != ef_commute_.end()) return it->second;
    UElem out;
    const WordVec& ev = pbw_expansion(Side::Plus, emono);
    const WordVec& fv = pbw_expansion(Side::Minus, fmono);
    for (const auto& [ew, ec] : ev) {
        for (const auto& [fw, fc] : fv) {
            TriElem t = commute_eword_past_fword(ew, fw);
            UElem nf = tri_to_normal(tri_smul(ec * fc, t));
            out = add(out, nf);
        }
    }
    auto [pos, inserted] = ef_commute_.emplace(memo_key, std::move(out));
    (void)inserted;
    return pos->second;
}

UElem UAlgebra::tri_to_normal(const TriElem& a) const {
    UElem out;
    for (const auto& [tk, c] : a) {
        Weight gf = word_weight(datum_, tk.f, +1);
        Weight ge = word_weight(datum_, tk.e, +1);
        WordVec wf, we;
        wf[tk.f] = QScalar(1);
        we[tk.e] = QScalar(1);
        auto cf = words_to_pbw(Side::Minus, wf, gf);
        auto ce = words_to_pbw(Side::Plus, we, ge);
        for (const auto& [fm, c1] : cf)
            for (const auto& [em, c2] : ce) {
                UKey key{fm, tk.k, em};
                add_term(out, key, c * c1 * c2);
            }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Multiplication and Hopf structure on normal forms.
// ---------------------------------------------------------------------------

UElem UAlgebra::multiply(const UElem& a, const UElem& b) const {
    UElem out;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            const UElem& mid = ef_commute(ka.e, kb.f);
            for (const auto& [km, cm] : mid) {
                QScalar sc = ca * cb * cm;
                sc *= qpow_form(ka.k, side_weight(Side::Minus, km.f));
                sc *= qpow_form(weight_neg(kb.k), side_weight(Side::Plus, km.e));
                const UElem& fprod = pbw_product(Side::Minus, ka.f, km.f);
                const UElem& eprod = pbw_product(Side::Plus, km.e, kb.e);
                Weight ktot = weight_add(weight_add(ka.k, km.k), kb.k);
                for (const auto& [kf, cf] : fprod)
                    for (const auto& [ke, ce] : eprod) {
                        UKey key{kf.f, ktot, ke.e};
                        add_term(out, key, sc * cf * ce);
                    }
            }
        }
    }
    return out;
}

UElem UAlgebra::commutator(const UElem& a, const UElem& b) const {
    return sub(multiply(a, b), multiply(b, a));
}

UElem UAlgebra::power(const UElem& a, int n) const {
    UElem r = one();
    for (int i = 0; i < n; ++i) r = multiply(r, a);
    return r;
}

UElem UAlgebra::normal_form(const std::vector<UElem>& word) const {
    UElem r = one();
    for (const auto& w : word) r = multiply(r, w);
    return r;
}

const TensorUElem& UAlgebra::half_coproduct(Side side, const std::vector<int>& mono) const {
    auto memo_key = std::make_pair(side == Side::Plus ? 0 : 1, mono);
    auto it = half_coproducts_.find(memo_key);
    if (it != half_coproducts_.end()) return it->second;

    // Expand into words; Delta(word) = prod over letters of the generator
    // coproduct; collect components in normal order.
    std::map<std::pair<UKey, UKey>, QScalar> out;
    const WordVec& wv = pbw_expansion(side, mono);
    Weight zero(datum_.rank(), 0);
    for (const auto& [word, c0] : wv) {
        size_t L = word.size();
        // Iterate over all subsets: bit r says letter r takes the "second slot".
        for (size_t mask = 0; mask < (size_t(1) << L); ++mask) {
            QScalar coeff = c0;
            if (side == Side::Plus) {
                // Delta(e_i) = e_i (x) 1 + k_i (x) e_i.
                // left: sequence of e (bit 0) and k_i (bit 1) -> normalize to k E;
                // right: subsequence of e for bits 1.
                HalfWord lw, rw;
                Weight kl = zero;
                for (size_t r = 0; r < L; ++r) {
                    int i = word[r];
                    if (mask & (size_t(1) << r)) {
                        // k_i on the left: passes left over the e's already
                        // placed? We build left-to-right; moving this k to the
                        // front costs q^{-(alpha_i, wt(prefix e's))}.
                        coeff *= qpow_form(weight_neg(datum_.simple_root(i)),
                                           word_weight(datum_, lw, +1));
                        kl = weight_add(kl, datum_.simple_root(i));
                        rw.push_back(i);
                    } else {
                        lw.push_back(i);
                    }
                }
                auto cl = words_to_pbw(Side::Plus, WordVec{{lw, QScalar(1)}},
                                       word_weight(datum_, lw, +1));
                auto cr = words_to_pbw(Side::Plus, WordVec{{rw, QScalar(1)}},
                                       word_weight(datum_, rw, +1));
                for (const auto& [ml, c1] : cl)
                    for (const auto& [mr, c2] : cr) {
                        UKey keyl{std::vector<int>(n_, 0), kl, ml};
                        UKey keyr{std::vector<int>(n_, 0), zero, mr};
                        auto itp = out.find({keyl, keyr});
                        QScalar add = coeff * c1 * c2;
                        if (itp == out.end())
                            out.emplace(std::make_pair(keyl, keyr), add);
                        else {
                            itp->second += add;
                            if (itp->second.is_zero()) out.erase(itp);
                        }
                    }
            } else {
                // Delta(f_i) = f_i (x) k_i^{-1} + 1 (x) f_i.
                // bits 1: f_i joins the right component (passing right over the
                // accumulated k's costs q^{-(kr,alpha_i)});
                // bits 0: f_i stays left, k_i^{-1} joins the right k-part.
                HalfWord lw, rw;
                Weight kr = zero;
                for (size_t r = 0; r < L; ++r) {
                    int i = word[r];
                    if (mask & (size_t(1) << r)) {
                        coeff *= qpow_form(weight_neg(kr), datum_.simple_root(i));
                        rw.push_back(i);
                    } else {
                        lw.push_back(i);
                        kr = weight_sub(kr, datum_.simple_root(i));
                    }
                }
                auto cl = words_to_pbw(Side::Minus, WordVec{{lw, QScalar(1)}},
                                       word_weight(datum_, lw, +1));
                auto cr = words_to_pbw(Side::Minus, WordVec{{rw, QScalar(1)}},
                                       word_weight(datum_, rw, +1));
                for (const auto& [ml, c1] : cl)
                    for (const auto& [mr, c2] : cr) {
                        UKey keyl{ml, zero, std::vector<int>(n_, 0)};
                        UKey keyr{mr, kr, std::vector<int>(n_, 0)};
                        auto itp = out.find({keyl, keyr});
                        QScalar add = coeff * c1 * c2;
                        if (itp == out.end())
                            out.emplace(std::make_pair(keyl, keyr), add);
                        else {
                            itp->second += add;
                            if (itp->second.is_zero()) out.erase(itp);
                        }
                    }
            }
        }
    }
    auto [pos, inserted] = half_coproducts_.emplace(memo_key, std::move(out));
    (void)inserted;
    return pos->second;
}

TensorUElem UAlgebra::coproduct(const UElem& a) const {
    TensorUElem out;
    for (const auto& [key, c] : a) {
        const TensorUElem& df = half_coproduct(Side::Minus, key.f);
        const TensorUElem& de = half_coproduct(Side::Plus, key.e);
        for (const auto& [pf, cf] : df) {
            for (const auto& [pe, ce] : de) {
                // left = F_L k k_L^e E_L ; right = F_R (k_R^f + k) E_R.
                UKey left{pf.first.f, weight_add(key.k, pe.first.k), pe.first.e};
                UKey right{pf.second.f, weight_add(pf.second.k, key.k), pe.second.e};
                QScalar add = c * cf * ce;
                auto itp = out.find({left, right});
                if (itp == out.end())
                    out.emplace(std::make_pair(left, right), add);
                else {
                    itp->second += add;
                    if (itp->second.is_zero()) out.erase(itp);
                }
            }
        }
    }
    return out;
}

QScalar UAlgebra::counit(const UElem& a) const {
    QScalar r;
    for (const auto& [key, c] : a) {
        bool pure = true;
        for (int j = 0; j < n_; ++j)
            if (key.f[j] != 0 || key.e[j] != 0) pure = false;
        if (pure) r += c;
    }
    return r;
}

const UElem& UAlgebra::half_antipode(Side side, const std::vector<int>& mono) const {
    auto memo_key = std::make_pair(side == Side::Plus ? 0 : 1, mono);
    auto it = half_antipodes_.find(memo_key);
    if (it != half_antipodes_.end()) return it->second;
    UElem out;
    const WordVec& wv = pbw_expansion(side, mono);
    Weight zero(datum_.rank(), 0);
    for (const auto& [word, c0] : wv) {
        // S(w_1 ... w_L) = S(w_L) ... S(w_1).
        QScalar coeff = c0;
        if (side == Side::Plus) {
            // factors -k_i^{-1} e_i ; accumulate k_gamma E.
            Weight kacc = zero;
            HalfWord ew;
            for (auto itl = word.rbegin(); itl != word.rend(); ++itl) {
                int i = *itl;
                // current k_kacc E ; multiply by -k_i^{-1}e_i on the right:
                // E k_{-a_i} = q^{(a_i, wt E)} k_{-a_i} E
                coeff *= -qpow_form(datum_.simple_root(i), word_weight(datum_, ew, +1));
                kacc = weight_sub(kacc, datum_.simple_root(i));
                ew.push_back(i);
            }
            auto ce = words_to_pbw(Side::Plus, WordVec{{ew, QScalar(1)}},
                                   word_weight(datum_, ew, +1));
            for (const auto& [me, c1] : ce) {
                UKey key{std::vector<int>(n_, 0), kacc, me};
                add_term(out, key, coeff * c1);
            }
        } else {
            // factors -f_i k_i ; accumulate F k_gamma.
            Weight kacc = zero;
            HalfWord fw;
            for (auto itl = word.rbegin(); itl != word.rend(); ++itl) {
                int i = *itl;
                // current F k_kacc ; multiply by -f_i k_i on the right:
                // k_kacc f_i = q^{-(kacc, a_i)} f_i k_kacc
                coeff *= -qpow_form(weight_neg(kacc), datum_.simple_root(i));
                fw.push_back(i);
                kacc = weight_add(kacc, datum_.simple_root(i));
            }
            auto cf = words_to_pbw(Side::Minus, WordVec{{fw, QScalar(1)}},
                                   word_weight(datum_, fw, +1));
            for (const auto& [mf, c1] : cf) {
                UKey key{mf, kacc, std::vector<int>(n_, 0)};
                add_term(out, key, coeff * c1);
            }
        }
    }
    auto [pos, inserted] = half_antipodes_.emplace(memo_key, std::move(out));
    (void)inserted;
    return pos->second;
}

UElem UAlgebra::antipode(const UElem& a) const {
    UElem out;
    for (const auto& [key, c] : a) {
        const UElem& se = half_antipode(Side::Plus, key.e);
        const UElem& sf = half_antipode(Side::Minus, key.f);
        UElem t = multiply(se, gen_k(weight_neg(key.k)));
        t = multiply(t, sf);
        out = add(out, smul(c, t));
    }
    return out;
}

TensorUElem UAlgebra::tensor_multiply(const TensorUElem& a, const TensorUElem& b) const {
    TensorUElem out;
    for (const auto& [pa, ca] : a)
        for (const auto& [pb, cb] : b) {
            UElem l = multiply(UElem{{pa.first, QScalar(1)}}, UElem{{pb.first, QScalar(1)}});
            UElem r = multiply(UElem{{pa.second, QScalar(1)}}, UElem{{pb.second, QScalar(1)}});
            for (const auto& [kl, cl] : l)
                for (const auto& [kr, cr] : r) {
                    QScalar add = ca * cb * cl * cr;
                    auto itp = out.find({kl, kr});
                    if (itp == out.end())
                        out.emplace(std::make_pair(kl, kr), add);
                    else {
                        itp->second += add;
                        if (itp->second.is_zero()) out.erase(itp);
                    }
                }
        }
    return out;
}

std::map<std::tuple<UKey, UKey, UKey>, QScalar> UAlgebra::coproduct2(const UElem& a) const {
    // (Delta (x) id) Delta.
    std::map<std::tuple<UKey, UKey, UKey>, QScalar> out;
    TensorUElem d = coproduct(a);
    for (const auto& [pr, c] : d) {
        TensorUElem dl = coproduct(UElem{{pr.first, QScalar(1)}});
        for (const auto& [pl, c2] : dl) {
            auto key = std::make_tuple(pl.first, pl.second, pr.second);
            auto itp = out.find(key);
            QScalar add = c * c2;
            if (itp == out.end())
                out.emplace(key, add);
            else {
                itp->second += add;
                if (itp->second.is_zero()) out.erase(itp);
            }
        }
    }
    return out;
}

UElem UAlgebra::braid(int i, int sign, const UElem& a) const {
    UElem out;
    for (const auto& [key, c] : a) {
        // Expand the one-sided parts to words and push the generator images
        // through the bootstrap calculus.
        const WordVec& fv = pbw_expansion(Side::Minus, key.f);
        const WordVec& ev = pbw_expansion(Side::Plus, key.e);
        TriElem facc;
        for (const auto& [fw, fc] : fv) {
            TriElem prod = tri_one();
            for (int j : fw) prod = tri_mul(prod, braid_gen_image(i, sign, 1, j));
            facc = tri_add(facc, tri_smul(fc, prod));
        }
        TriElem kimg;
        kimg[TriKey{{}, datum_.simple_reflect(i, key.k), {}}] = QScalar(1);
        TriElem eacc;
        for (const auto& [ew, ec] : ev) {
            TriElem prod = tri_one();
            for (int j : ew) prod = tri_mul(prod, braid_gen_image(i, sign, 0, j));
            eacc = tri_add(eacc, tri_smul(ec, prod));
        }
        TriElem cur = tri_mul(tri_mul(facc, kimg), eacc);
        out = add(out, smul(c, tri_to_normal(cur)));
    }
    return out;
}

UElem UAlgebra::braid_word(const std::vector<int>& word, int sign, const UElem& a) const {
    UElem r = a;
    if (sign > 0) {
        for (auto it = word.rbegin(); it != word.rend(); ++it) r = braid(*it, +1, r);
    } else {
        // (T_{i_1}...T_{i_r})^{-1} = T_{i_r}^{-1} ... T_{i_1}^{-1}
        for (int i : word) r = braid(i, -1, r);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Integral forms, specialization, Frobenius.
// ---------------------------------------------------------------------------

QScalar UAlgebra::form_unit_factor(const UKey& key, IntegralForm form) const {
    if (form == IntegralForm::DK) return QScalar(1);
    QScalar u(1);
    for (int k = 0; k < n_; ++k) {
        if (key.f[k] > 1) u *= qfact(key.f[k], tpow_root(k));
        if (key.e[k] > 1) u *= qfact(key.e[k], tpow_root(k));
    }
    return u;
}

std::map<UKey, QScalar> UAlgebra::integral_coeffs(const UElem& a, IntegralForm form) const {
    std::map<UKey, QScalar> out;
    for (const auto& [key, c] : a) out[key] = c * form_unit_factor(key, form);
    return out;
}

bool UAlgebra::coeffs_regular(const UElem& a, IntegralForm form,
                              const RootOfUnityConfig& cfg) const {
    for (const auto& [key, c] : integral_coeffs(a, form))
        if (!regular_at_root(c, cfg)) return false;
    return true;
}

ZUElem UAlgebra::specialize_u(const UElem& a, const RootOfUnityConfig& cfg,
                              IntegralForm form) const {
    ZUElem out;
    out.form = form;
    for (const auto& [key, c] : integral_coeffs(a, form)) {
        if (!regular_at_root(c, cfg))
            throw std::domain_error("specialize_u: coefficient not in A for the chosen form");
        CycScalar s = specialize(c, cfg);
        if (!s.is_zero()) out.terms[key] = s;
    }
    return out;
}

UElem UAlgebra::lift(const ZUElem& a) const {
    UElem out;
    for (const auto& [key, c] : a.terms) {
        // Polynomial representative of the cyclotomic coefficient.
        QScalar rep;
        for (size_t j = 0; j < c.coeff().size(); ++j) {
            if (c.coeff()[j] == 0) continue;
            rep += QScalar(c.coeff()[j]) * QScalar::v_pow(static_cast<int>(j));
        }
        QScalar unit = form_unit_factor(key, a.form);
        add_term(out, key, rep / unit);
    }
    return out;
}

ZUElem UAlgebra::zadd(const ZUElem& a, const ZUElem& b) const {
    if (a.form != b.form) throw std::invalid_argument("zadd: mixed integral forms");
    ZUElem r = a;
    for (const auto& [k, c] : b.terms) {
        auto it = r.terms.find(k);
        if (it == r.terms.end())
            r.terms.emplace(k, c);
        else {
            it->second += c;
            if (it->second.is_zero()) r.terms.erase(it);
        }
    }
    return r;
}

ZUElem UAlgebra::zsub(const ZUElem& a, const ZUElem& b) const {
    ZUElem nb = b;
    for (auto& [k, c] : nb.terms) c = -c;
    return zadd(a, nb);
}

ZUElem UAlgebra::zmul(const ZUElem& a, const ZUElem& b, const RootOfUnityConfig& cfg) const {
    UElem prod = multiply(lift(a), lift(b));
    return specialize_u(prod, cfg, a.form);
}

ClassicalBi UAlgebra::frobenius_pi(const ZUElem& a, const RootOfUnityConfig& cfg) const {
    if (a.form != IntegralForm::L)
        throw std::invalid_argument("frobenius_pi: element must be in the Lusztig form");
    ClassicalBi out;
    int ell = cfg.ell;
    for (const auto& [key, c] : a.terms) {
        bool kill = false;
        std::vector<int> fe(n_), ee(n_);
        for (int k = 0; k < n_; ++k) {
            if (key.f[k] % ell != 0 || key.e[k] % ell != 0) {
                kill = true;
                break;
            }
            fe[k] = key.f[k] / ell;
            ee[k] = key.e[k] / ell;
        }
        if (kill) continue;
        auto idx = std::make_pair(fe, ee);
        auto it = out.terms.find(idx);
        if (it == out.terms.end())
            out.terms.emplace(idx, c);
        else {
            it->second += c;
            if (it->second.is_zero()) out.terms.erase(it);
        }
    }
    return out;
}

std::map<std::vector<int>, mpq_class> UAlgebra::classical_pbw_product(
    Side side, const std::vector<int>& a, const std::vector<int>& b) const {
    const UElem& q = pbw_product(side, a, b);
    std::map<std::vector<int>, mpq_class> out;
    for (const auto& [key, c] : q) {
        const std::vector<int>& mono = (side == Side::Plus) ? key.e : key.f;
        mpq_class v = c.eval_at_one();
        if (v != 0) out[mono] = v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Printing.
// ---------------------------------------------------------------------------

namespace {
std::string weight_label(const Weight& w) {
    std::ostringstream os;
    bool any = false;
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0) continue;
        if (w[i] > 0 && any) os << "+";
        if (w[i] == -1)
            os << "-";
        else if (w[i] != 1)
            os << w[i];
        os << "w" << (i + 1);
        any = true;
    }
    if (!any) os << "0";
    return os.str();
}
}  // namespace

std::string UAlgebra::str(const UElem& a) const {
    if (a.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : a) {
        std::vector<std::string> factors;
        for (int k = n_ - 1; k >= 0; --k)
            if (key.f[k] > 0) {
                std::ostringstream f;
                f << "f[b" << (k + 1) << "]";
                if (key.f[k] > 1) f << "^" << key.f[k];
                factors.push_back(f.str());
            }
        if (!weight_is_zero(key.k)) factors.push_back("k[" + weight_label(key.k) + "]");
        for (int k = n_ - 1; k >= 0; --k)
            if (key.e[k] > 0) {
                std::ostringstream f;
                f << "e[b" << (k + 1) << "]";
                if (key.e[k] > 1) f << "^" << key.e[k];
                factors.push_back(f.str());
            }
        std::string mono;
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) mono += "*";
            mono += factors[i];
        }
        if (mono.empty()) mono = "1";
        std::string cs = c.str();
        if (!first) os << " + ";
        first = false;
        if (cs == "1" && mono != "1")
            os << mono;
        else if (mono == "1")
            os << cs;
        else {
            bool needs_parens = cs.find_first_of("+-") != std::string::npos && cs[0] != '-';
            if (cs.find_first_of("+- ") != std::string::npos || needs_parens)
                os << "(" << cs << ")*" << mono;
            else
                os << cs << "*" << mono;
        }
    }
    return os.str();
}

std::string UAlgebra::str_tensor(const TensorUElem& a) const {
    if (a.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [pr, c] : a) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*[" << str(UElem{{pr.first, QScalar(1)}}) << " (x) "
           << str(UElem{{pr.second, QScalar(1)}}) << "]";
    }
    return os.str();
}

long uelem_max_height(const UAlgebra& alg, const UElem& a) {
    long h = 0;
    for (const auto& [key, c] : a) {
        (void)c;
        h = std::max(h, alg.side_height(key.f) + alg.side_height(key.e));
    }
    return h;
}

}  // namespace qroots
