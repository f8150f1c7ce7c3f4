#include "doctest.h"
#include "qroots/uq.hpp"

#include <map>
#include <string>

using namespace qroots;

namespace {

// Independent sl2 oracle: free algebra on letters e, f, k, K (= k^{-1})
// rewritten with the defining relations only (q = v^2 for A1).
struct Sl2Free {
    using Elem = std::map<std::string, QScalar>;

    static void acc(Elem& dst, const std::string& w, const QScalar& c) {
        if (c.is_zero()) return;
        auto it = dst.find(w);
        if (it == dst.end())
            dst.emplace(w, c);
        else {
            it->second += c;
            if (it->second.is_zero()) dst.erase(it);
        }
    }

    static bool ordered(const std::string& w) {
        auto rankof = [](char c) { return c == 'f' ? 0 : (c == 'e' ? 2 : 1); };
        for (size_t i = 0; i + 1 < w.size(); ++i) {
            if (rankof(w[i]) > rankof(w[i + 1])) return false;
            if ((w[i] == 'k' && w[i + 1] == 'K') || (w[i] == 'K' && w[i + 1] == 'k')) return false;
        }
        return true;
    }

    static Elem normal(const Elem& x) {
        Elem cur = x;
        for (;;) {
            bool changed = false;
            Elem next;
            for (const auto& [w, c] : cur) {
                size_t i = 0;
                bool done = true;
                for (; i + 1 < w.size(); ++i) {
                    std::string pre = w.substr(0, i), post = w.substr(i + 2);
                    char a = w[i], b = w[i + 1];
                    QScalar q2 = QScalar::v_pow(4), qm2 = QScalar::v_pow(-4);
                    if (a == 'e' && b == 'f') {
                        acc(next, pre + "fe" + post, c);
                        QScalar den = QScalar::v_pow(2) - QScalar::v_pow(-2);
                        acc(next, pre + "k" + post, c / den);
                        acc(next, pre + "K" + post, -(c / den));
                        done = false;
                        break;
                    }
                    if (a == 'e' && b == 'k') {
                        acc(next, pre + "ke" + post, c * qm2);
                        done = false;
                        break;
                    }
                    if (a == 'e' && b == 'K') {
                        acc(next, pre + "Ke" + post, c * q2);
                        done = false;
                        break;
                    }
                    if (a == 'k' && b == 'f') {
                        acc(next, pre + "fk" + post, c * qm2);
                        done = false;
                        break;
                    }
                    if (a == 'K' && b == 'f') {
                        acc(next, pre + "fK" + post, c * q2);
                        done = false;
                        break;
                    }
                    if ((a == 'k' && b == 'K') || (a == 'K' && b == 'k')) {
                        acc(next, pre + post, c);
                        done = false;
                        break;
                    }
                }
                if (done) acc(next, w, c);
                if (!done) {
                    // copy the remaining unprocessed terms verbatim on this pass
                    changed = true;
                }
            }
            cur = std::move(next);
            if (!changed) break;
        }
        return cur;
    }
};

// Convert an A1 engine element to the oracle's word map.
Sl2Free::Elem to_words_a1(const UAlgebra& alg, const UElem& x) {
    Sl2Free::Elem out;
    for (const auto& [key, c] : x) {
        std::string w;
        for (int t = 0; t < key.f[0]; ++t) w += 'f';
        int kp = key.k[0] / 2;  // k_{c*alpha} with alpha = 2w1
        REQUIRE(key.k[0] % 2 == 0);
        for (int t = 0; t < kp; ++t) w += 'k';
        for (int t = 0; t < -kp; ++t) w += 'K';
        for (int t = 0; t < key.e[0]; ++t) w += 'e';
        Sl2Free::acc(out, w, c);
    }
    return out;
}

}  // namespace

TEST_CASE("A1 relation ef = fe + (k - k^-1)/(q - q^-1)") {
    UAlgebra alg(RootDatum(CartanType::A1));
    UElem ef = alg.multiply(alg.gen_e(0), alg.gen_f(0));
    Weight alpha = alg.datum().simple_root(0);
    QScalar den = QScalar::v_pow(2) - QScalar::v_pow(-2);
    UElem expect = alg.multiply(alg.gen_f(0), alg.gen_e(0));
    expect = alg.add(expect, alg.smul(QScalar(1) / den, alg.gen_k(alpha)));
    expect = alg.add(expect, alg.smul(-(QScalar(1) / den), alg.gen_k(weight_neg(alpha))));
    CHECK(ef == expect);
}

TEST_CASE("k e k^{-1} = q^{(lambda,alpha)} e") {
    UAlgebra alg(RootDatum(CartanType::A2));
    for (int i = 0; i < 2; ++i) {
        Weight lam = alg.datum().rho();
        UElem lhs = alg.multiply(alg.gen_k(lam), alg.gen_e(i));
        UElem rhs = alg.smul(alg.qpow_form(lam, alg.datum().simple_root(i)),
                             alg.multiply(alg.gen_e(i), alg.gen_k(lam)));
        CHECK(lhs == rhs);
        UElem lhsf = alg.multiply(alg.gen_k(lam), alg.gen_f(i));
        UElem rhsf = alg.smul(alg.qpow_form(weight_neg(lam), alg.datum().simple_root(i)),
                              alg.multiply(alg.gen_f(i), alg.gen_k(lam)));
        CHECK(lhsf == rhsf);
    }
}

TEST_CASE("A2 quantum Serre relation collapses") {
    UAlgebra alg(RootDatum(CartanType::A2));
    UElem e1 = alg.gen_e(0), e2 = alg.gen_e(1);
    UElem lhs = alg.multiply(alg.multiply(e1, e1), e2);
    lhs = alg.sub(lhs, alg.smul(qint(2, alg.tpow_simple(0)),
                                alg.multiply(alg.multiply(e1, e2), e1)));
    lhs = alg.add(lhs, alg.multiply(e2, alg.multiply(e1, e1)));
    CHECK(lhs.empty());
    // and the f-side
    UElem f1 = alg.gen_f(0), f2 = alg.gen_f(1);
    UElem lhsf = alg.multiply(alg.multiply(f1, f1), f2);
    lhsf = alg.sub(lhsf, alg.smul(qint(2, alg.tpow_simple(0)),
                                  alg.multiply(alg.multiply(f1, f2), f1)));
    lhsf = alg.add(lhsf, alg.multiply(f2, alg.multiply(f1, f1)));
    CHECK(lhsf.empty());
}

TEST_CASE("unit and associativity on samples") {
    UAlgebra alg(RootDatum(CartanType::A2));
    std::vector<UElem> gens = {alg.gen_e(0), alg.gen_e(1), alg.gen_f(0), alg.gen_f(1),
                               alg.gen_k(alg.datum().fundamental_weight(0))};
    for (const auto& a : gens) CHECK(alg.multiply(alg.one(), a) == a);
    for (const auto& a : gens)
        for (const auto& b : gens)
            for (const auto& c : gens) {
                UElem l = alg.multiply(alg.multiply(a, b), c);
                UElem r = alg.multiply(a, alg.multiply(b, c));
                CHECK(l == r);
            }
}

TEST_CASE("A1 products match the free-algebra oracle") {
    UAlgebra alg(RootDatum(CartanType::A1));
    // f^2 e and a couple of longer words.
    std::vector<std::vector<char>> words = {
        {'f', 'f', 'e'}, {'e', 'e', 'f'}, {'e', 'f', 'e', 'f'}, {'f', 'e', 'k'}};
    for (const auto& w : words) {
        UElem prod = alg.one();
        Sl2Free::Elem oracle_word;
        std::string ws(w.begin(), w.end());
        oracle_word[ws] = QScalar(1);
        for (char c : w) {
            if (c == 'e') prod = alg.multiply(prod, alg.gen_e(0));
            if (c == 'f') prod = alg.multiply(prod, alg.gen_f(0));
            if (c == 'k') prod = alg.multiply(prod, alg.gen_k(alg.datum().simple_root(0)));
        }
        CHECK(to_words_a1(alg, prod) == Sl2Free::normal(oracle_word));
    }
}

TEST_CASE("coproduct counit antipode on generators") {
    UAlgebra alg(RootDatum(CartanType::A2));
    Weight zero(2, 0);
    for (int i = 0; i < 2; ++i) {
        // Delta(f_i) = f_i (x) k_i^{-1} + 1 (x) f_i
        TensorUElem d = alg.coproduct(alg.gen_f(i));
        TensorUElem expect;
        UKey fkey = alg.gen_f(i).begin()->first;
        UKey onek = alg.one().begin()->first;
        UKey kinv{std::vector<int>(alg.num_roots(), 0), weight_neg(alg.datum().simple_root(i)),
                  std::vector<int>(alg.num_roots(), 0)};
        expect[{fkey, kinv}] = QScalar(1);
        expect[{onek, fkey}] = QScalar(1);
        CHECK(d == expect);
        // S(e_i) = -k_i^{-1} e_i
        UElem s = alg.antipode(alg.gen_e(i));
        UElem expect_s = alg.smul(QScalar(-1), alg.multiply(alg.gen_k(weight_neg(alg.datum().simple_root(i))),
                                                            alg.gen_e(i)));
        CHECK(s == expect_s);
        CHECK(alg.counit(alg.gen_e(i)).is_zero());
        CHECK(alg.counit(alg.gen_k(alg.datum().fundamental_weight(i))).is_one());
    }
}

TEST_CASE("Delta(e^2) for A1") {
    UAlgebra alg(RootDatum(CartanType::A1));
    UElem e2 = alg.multiply(alg.gen_e(0), alg.gen_e(0));
    TensorUElem d = alg.coproduct(e2);
    // Oracle: square Delta(e) in U (x) U.
    TensorUElem de = alg.coproduct(alg.gen_e(0));
    TensorUElem oracle = alg.tensor_multiply(de, de);
    CHECK(d == oracle);
    // Closed form: e^2 (x) 1 + (q^2+1) ek (x) e + k^2 (x) e^2; in the k.e
    // normal order the middle coefficient reads (1 + q^{-2}) on k e (x) e.
    Weight alpha = alg.datum().simple_root(0);
    TensorUElem closed;
    UKey e2key = e2.begin()->first;
    UKey onek = alg.one().begin()->first;
    UKey ke{std::vector<int>{0}, alpha, std::vector<int>{1}};
    UKey ekey{std::vector<int>{0}, Weight{0}, std::vector<int>{1}};
    UKey k2{std::vector<int>{0}, weight_scale(2, alpha), std::vector<int>{0}};
    closed[{e2key, onek}] = QScalar(1);
    closed[{ke, ekey}] = QScalar(1) + QScalar::v_pow(-4);
    closed[{k2, e2key}] = QScalar(1);
    CHECK(d == closed);
}

TEST_CASE("Hopf axioms on short words") {
    UAlgebra alg(RootDatum(CartanType::A1));
    std::vector<UElem> gens = {alg.gen_e(0), alg.gen_f(0),
                               alg.gen_k(alg.datum().fundamental_weight(0))};
    for (const auto& a : gens)
        for (const auto& b : gens) {
            UElem x = alg.multiply(a, b);
            // coassociativity
            auto lhs = alg.coproduct2(x);
            std::map<std::tuple<UKey, UKey, UKey>, QScalar> rhs;
            for (const auto& [pr, c] : alg.coproduct(x)) {
                for (const auto& [pr2, c2] : alg.coproduct(UElem{{pr.second, QScalar(1)}})) {
                    auto key = std::make_tuple(pr.first, pr2.first, pr2.second);
                    auto it = rhs.find(key);
                    QScalar add = c * c2;
                    if (it == rhs.end())
                        rhs.emplace(key, add);
                    else {
                        it->second += add;
                        if (it->second.is_zero()) rhs.erase(it);
                    }
                }
            }
            CHECK(lhs == rhs);
            // antipode axiom m(S (x) id)Delta = eps * 1
            UElem anti;
            for (const auto& [pr, c] : alg.coproduct(x)) {
                UElem t = alg.multiply(alg.antipode(UElem{{pr.first, QScalar(1)}}),
                                       UElem{{pr.second, QScalar(1)}});
                anti = alg.add(anti, alg.smul(c, t));
            }
            CHECK(anti == alg.smul(alg.counit(x), alg.one()));
        }
}

TEST_CASE("braid images of generators") {
    UAlgebra alg(RootDatum(CartanType::A2, std::vector<int>{0, 1, 0}));
    // T_i(e_i) = -f_i k_i ; T_i(f_i) = -k_i^{-1} e_i
    for (int i = 0; i < 2; ++i) {
        UElem te = alg.braid(i, +1, alg.gen_e(i));
        UElem expect = alg.smul(QScalar(-1),
                                alg.multiply(alg.gen_f(i), alg.gen_k(alg.datum().simple_root(i))));
        CHECK(te == expect);
        UElem tf = alg.braid(i, +1, alg.gen_f(i));
        UElem expect2 = alg.smul(
            QScalar(-1),
            alg.multiply(alg.gen_k(weight_neg(alg.datum().simple_root(i))), alg.gen_e(i)));
        CHECK(tf == expect2);
    }
    // root vectors are unit PBW monomials: e_{beta_2} = T_1(e_2) (0-based beta idx 1)
    UElem t1e2 = alg.braid(0, +1, alg.gen_e(1));
    CHECK(t1e2 == alg.root_vector(Side::Plus, 1));
    // beta_1 simple: e_{beta_1} = e_1 ; A1: e_{beta_1} = e
    CHECK(alg.root_vector(Side::Plus, 0) == alg.gen_e(0));
}

TEST_CASE("braid inverses and automorphism property") {
    UAlgebra alg(RootDatum(CartanType::A2));
    std::vector<UElem> gens = {alg.gen_e(0), alg.gen_e(1), alg.gen_f(0), alg.gen_f(1),
                               alg.gen_k(alg.datum().fundamental_weight(0))};
    for (int i = 0; i < 2; ++i)
        for (const auto& g : gens) {
            CHECK(alg.braid(i, -1, alg.braid(i, +1, g)) == g);
            CHECK(alg.braid(i, +1, alg.braid(i, -1, g)) == g);
        }
    // algebra automorphism on sample products
    for (int i = 0; i < 2; ++i)
        for (const auto& a : gens)
            for (const auto& b : gens) {
                UElem lhs = alg.braid(i, +1, alg.multiply(a, b));
                UElem rhs = alg.multiply(alg.braid(i, +1, a), alg.braid(i, +1, b));
                CHECK(lhs == rhs);
            }
}

TEST_CASE("braid relations on generators (A2)") {
    UAlgebra alg(RootDatum(CartanType::A2));
    std::vector<UElem> gens = {alg.gen_e(0), alg.gen_e(1), alg.gen_f(0), alg.gen_f(1),
                               alg.gen_k(alg.datum().fundamental_weight(0)),
                               alg.gen_k(alg.datum().fundamental_weight(1))};
    for (const auto& g : gens) {
        UElem lhs = alg.braid(0, +1, alg.braid(1, +1, alg.braid(0, +1, g)));
        UElem rhs = alg.braid(1, +1, alg.braid(0, +1, alg.braid(1, +1, g)));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("specialization and divided powers at ell = 3") {
    UAlgebra alg(RootDatum(CartanType::A1));
    auto cfg = make_root_config(3, alg.datum().lattice_index());
    // e^(3) is an L-basis element with coefficient 1.
    UElem e3 = alg.power(alg.gen_e(0), 3);
    UElem e_div3 = alg.smul(QScalar(1) / qfact(3, alg.tpow_simple(0)), e3);
    ZUElem zl = alg.specialize_u(e_div3, cfg, IntegralForm::L);
    REQUIRE(zl.terms.size() == 1);
    CHECK(zl.terms.begin()->second.is_one());
    // e^3 in the DK form is a nonzero monomial.
    ZUElem zdk = alg.specialize_u(e3, cfg, IntegralForm::DK);
    REQUIRE(zdk.terms.size() == 1);
    CHECK(zdk.terms.begin()->second.is_one());
    // e^3 = [3]! e^(3) maps to 0 in the L-form coordinates.
    ZUElem zl2 = alg.specialize_u(e3, cfg, IntegralForm::L);
    CHECK(zl2.terms.empty());
}

TEST_CASE("Frobenius on divided powers") {
    UAlgebra alg(RootDatum(CartanType::A1));
    auto cfg = make_root_config(3, alg.datum().lattice_index());
    auto div_power = [&](int kind, int m) {
        UElem x = kind == 0 ? alg.power(alg.gen_e(0), m) : alg.power(alg.gen_f(0), m);
        return alg.smul(QScalar(1) / qfact(m, alg.tpow_simple(0)), x);
    };
    // pi(e^(3)) = ebar, pi(e) = 0, pi(f^(6)) = fbar^(2) = fbar^2/2.
    ClassicalBi img = alg.frobenius_pi(alg.specialize_u(div_power(0, 3), cfg, IntegralForm::L), cfg);
    REQUIRE(img.terms.size() == 1);
    CHECK(img.terms.begin()->first.second == std::vector<int>{1});
    CHECK(img.terms.begin()->second.is_one());
    ClassicalBi img0 = alg.frobenius_pi(alg.specialize_u(div_power(0, 1), cfg, IntegralForm::L), cfg);
    CHECK(img0.terms.empty());
    ClassicalBi img6 = alg.frobenius_pi(alg.specialize_u(div_power(1, 6), cfg, IntegralForm::L), cfg);
    REQUIRE(img6.terms.size() == 1);
    CHECK(img6.terms.begin()->first.first == std::vector<int>{2});
    CHECK(img6.terms.begin()->second.is_one());
    // pi(k_lambda) = 1
    ClassicalBi imgk = alg.frobenius_pi(
        alg.specialize_u(alg.gen_k(alg.datum().fundamental_weight(0)), cfg, IntegralForm::L), cfg);
    REQUIRE(img.terms.size() == 1);
    CHECK(imgk.terms.begin()->first == std::make_pair(std::vector<int>{0}, std::vector<int>{0}));
    CHECK(imgk.terms.begin()->second.is_one());
}

TEST_CASE("centrality of e^ell at zeta (A1, ell = 3)") {
    UAlgebra alg(RootDatum(CartanType::A1));
    auto cfg = make_root_config(3, alg.datum().lattice_index());
    UElem e3 = alg.power(alg.gen_e(0), 3);
    UElem f3 = alg.power(alg.gen_f(0), 3);
    std::vector<UElem> gens = {alg.gen_e(0), alg.gen_f(0),
                               alg.gen_k(alg.datum().fundamental_weight(0))};
    for (const auto& z : {e3, f3}) {
        for (const auto& g : gens) {
            UElem c = alg.commutator(z, g);
            // all DK coefficients vanish at zeta'
            for (const auto& [key, coeff] : alg.integral_coeffs(c, IntegralForm::DK)) {
                CHECK(regular_at_root(coeff, cfg));
                CHECK(specialize(coeff, cfg).is_zero());
            }
        }
    }
}
