#include "qroots/pairing.hpp"

#include <stdexcept>

namespace qroots {

QScalar DrinfeldPairing::tau_word(const HalfWord& eword, const std::vector<int>& fmono) const {
    auto memo_key = std::make_pair(eword, fmono);
    auto it = tau_words_.find(memo_key);
    if (it != tau_words_.end()) return it->second;

    const RootDatum& d = alg_.datum();
    QScalar result;
    bool fzero = true;
    for (int v : fmono)
        if (v) fzero = false;
    if (eword.empty()) {
        result = fzero ? QScalar(1) : QScalar();
    } else if (fzero) {
        result = QScalar();
    } else {
        int i = eword.front();
        HalfWord rest(eword.begin() + 1, eword.end());
        // tau(e_i * rest, y) = sum tau(rest, y_(0)) tau(e_i, y_(1)).
        const TensorUElem& dy = alg_.half_coproduct(Side::Minus, fmono);
        for (const auto& [pr, c] : dy) {
            const UKey& right = pr.second;
            // tau(e_i, F_R k_R) vanishes unless F_R is a single simple f_i.
            Weight wr = weight_neg(alg_.side_weight(Side::Minus, right.f));
            if (wr != d.simple_root(i)) continue;
            int root_idx = -1, total = 0;
            for (int k = 0; k < alg_.num_roots(); ++k) {
                total += right.f[k];
                if (right.f[k] == 1) root_idx = k;
            }
            if (total != 1 || root_idx < 0) continue;
            if (d.pos_root(root_idx) != d.simple_root(i)) continue;
            QScalar tau_gen =
                QScalar(1) / (QScalar::v_pow(-alg_.tpow_simple(i)) - QScalar::v_pow(alg_.tpow_simple(i)));
            QScalar left = tau_word(rest, pr.first.f);
            if (left.is_zero()) continue;
            result += c * left * tau_gen;
        }
    }
    auto [pos, inserted] = tau_words_.emplace(memo_key, std::move(result));
    (void)inserted;
    return pos->second;
}

QScalar DrinfeldPairing::tau_monos(const std::vector<int>& emono,
                                   const std::vector<int>& fmono) const {
    QScalar r;
    for (const auto& [w, c] : alg_.pbw_expansion(Side::Plus, emono)) {
        QScalar t = tau_word(w, fmono);
        if (!t.is_zero()) r += c * t;
    }
    return r;
}

QScalar DrinfeldPairing::tau(const UElem& x, const UElem& y) const {
    QScalar r;
    for (const auto& [kx, cx] : x) {
        for (int k = 0; k < alg_.num_roots(); ++k)
            if (kx.f[k] != 0) throw std::invalid_argument("tau: first argument not in U^{>=0}");
        Weight wx = alg_.side_weight(Side::Plus, kx.e);
        for (const auto& [ky, cy] : y) {
            for (int k = 0; k < alg_.num_roots(); ++k)
                if (ky.e[k] != 0) throw std::invalid_argument("tau: second argument not in U^{<=0}");
            Weight wy = weight_neg(alg_.side_weight(Side::Minus, ky.f));
            // Orthogonality of distinct weights.
            if (wx != wy) continue;
            // key x = k_{kx} E = q^{(kx, wt E)} E k_{kx}; key y = F k_{ky}.
            // tau(E k_kx, F k_ky) = q^{-(kx,ky)} tau(E, F).
            QScalar c = cx * cy * alg_.qpow_form(kx.k, wx) *
                        alg_.qpow_form(weight_neg(kx.k), ky.k);
            if (c.is_zero()) continue;
            QScalar t = tau_monos(kx.e, ky.f);
            if (!t.is_zero()) r += c * t;
        }
    }
    return r;
}

const Mat<QScalar>& DrinfeldPairing::gram(const Weight& gamma) const {
    auto it = grams_.find(gamma);
    if (it != grams_.end()) return it->second;
    const auto& emonos = alg_.pbw_monomials(Side::Plus, gamma);
    const auto& fmonos = alg_.pbw_monomials(Side::Minus, gamma);
    if (emonos.size() != fmonos.size())
        throw std::logic_error("gram: PBW dimensions differ between sides");
    Mat<QScalar> g(emonos.size(), Vec<QScalar>(fmonos.size(), QScalar()));
    for (size_t a = 0; a < emonos.size(); ++a)
        for (size_t b = 0; b < fmonos.size(); ++b) g[a][b] = tau_monos(emonos[a], fmonos[b]);
    auto [pos, inserted] = grams_.emplace(gamma, std::move(g));
    (void)inserted;
    return pos->second;
}

DrinfeldPairing::DualBases DrinfeldPairing::dual_bases(const Weight& gamma,
                                                       Normalization norm) const {
    const auto& emonos = alg_.pbw_monomials(Side::Plus, gamma);
    const auto& fmonos = alg_.pbw_monomials(Side::Minus, gamma);
    const Mat<QScalar>& g0 = gram(gamma);
    size_t n = emonos.size();
    DualBases out;
    auto e_unit = [&](size_t a) {
        UKey key{std::vector<int>(alg_.num_roots(), 0), Weight(alg_.datum().rank(), 0),
                 emonos[a]};
        return key;
    };
    auto f_unit = [&](size_t b) {
        UKey key{fmonos[b], Weight(alg_.datum().rank(), 0), std::vector<int>(alg_.num_roots(), 0)};
        return key;
    };
    auto divided_unit = [&](Side side, const std::vector<int>& mono) {
        QScalar u(1);
        for (int k = 0; k < alg_.num_roots(); ++k) {
            int m = side == Side::Plus ? mono[k] : mono[k];
            if (m > 1) u *= qfact(m, alg_.tpow_root(k));
        }
        (void)side;
        return u;
    };

    Mat<QScalar> g = g0;
    if (norm == Normalization::VariantA) {
        // x_p = divided e-monomial; tau(x_p, f_b) = G[p][b] / u_p.
        for (size_t p = 0; p < n; ++p) {
            QScalar u = divided_unit(Side::Plus, emonos[p]);
            for (size_t b = 0; b < n; ++b) g[p][b] = g[p][b] / u;
        }
    } else if (norm == Normalization::VariantB) {
        // y_p = divided f-monomial; tau(e_a, y_p) = G[a][p] / u_p.
        for (size_t p = 0; p < n; ++p) {
            QScalar u = divided_unit(Side::Minus, fmonos[p]);
            for (size_t a = 0; a < n; ++a) g[a][p] = g[a][p] / u;
        }
    }
    Mat<QScalar> inv;
    try {
        inv = mat_inverse(g, QScalar(1));
    } catch (const std::domain_error&) {
        throw std::logic_error("dual_bases: singular Gram matrix (implementation bug)");
    }

    for (size_t p = 0; p < n; ++p) {
        UElem xp, yp;
        if (norm == Normalization::FSidePlain) {
            // y_p = f-PBW monomial, x_p = sum_a inv[p][a] e_a
            yp[f_unit(p)] = QScalar(1);
            for (size_t a = 0; a < n; ++a)
                if (!inv[p][a].is_zero()) xp[e_unit(a)] = inv[p][a];
        } else if (norm == Normalization::VariantA) {
            // x_p = divided e-monomial (stored as plain monomial / [m]!).
            QScalar u = divided_unit(Side::Plus, emonos[p]);
            xp[e_unit(p)] = QScalar(1) / u;
            // y_p = sum_b inv[b][p] f_b
            for (size_t b = 0; b < n; ++b)
                if (!inv[b][p].is_zero()) yp[f_unit(b)] = inv[b][p];
        } else {
            // y_p = divided f-monomial; x_p = sum_a inv[p][a] e_a.
            QScalar u = divided_unit(Side::Minus, fmonos[p]);
            yp[f_unit(p)] = QScalar(1) / u;
            for (size_t a = 0; a < n; ++a)
                if (!inv[p][a].is_zero()) xp[e_unit(a)] = inv[p][a];
        }
        out.x.push_back(std::move(xp));
        out.y.push_back(std::move(yp));
        out.beta.push_back(gamma);
    }
    return out;
}

}  // namespace qroots
