#include "doctest.h"
#include "qroots/rootdata.hpp"

#include <set>

using namespace qroots;

namespace {

// Brute-force oracle: beta_k from the definition, applying reflections
// directly to alpha-coordinates via an independent matrix action.
Weight oracle_beta(const RootDatum& d, const std::vector<int>& word, int k) {
    Weight b = d.simple_root(word[k]);
    for (int j = k - 1; j >= 0; --j) b = d.simple_reflect(word[j], b);
    return b;
}

}  // namespace

TEST_CASE("A1 basics") {
    RootDatum d(CartanType::A1);
    CHECK(d.num_positive_roots() == 1);
    CHECK(d.lattice_index() == 2);
    CHECK(d.pos_root(0) == d.simple_root(0));
    CHECK(d.rho() == d.fundamental_weight(0));
    // (w,w) = 1/2 since alpha = 2w and (alpha,alpha) = 2.
    CHECK(d.form(d.fundamental_weight(0), d.fundamental_weight(0)) == mpq_class(1, 2));
}

TEST_CASE("A2 betas enumerate positive roots") {
    RootDatum d(CartanType::A2, std::vector<int>{0, 1, 0});
    // beta_1 = a1, beta_2 = a1+a2, beta_3 = a2 (1-based in the statement).
    Weight a1 = d.simple_root(0), a2 = d.simple_root(1);
    CHECK(d.pos_root(0) == a1);
    CHECK(d.pos_root(1) == weight_add(a1, a2));
    CHECK(d.pos_root(2) == a2);
    for (int k = 0; k < 3; ++k) CHECK(d.pos_root(k) == oracle_beta(d, d.w0_word(), k));
    // every reduced word gives Delta+ without repetition
    for (const auto& w : d.all_reduced_words_of_w0()) {
        RootDatum dw(CartanType::A2, w);
        std::set<Weight> betas(dw.pos_roots().begin(), dw.pos_roots().end());
        CHECK(betas.size() == 3);
        CHECK(betas.count(a1) == 1);
        CHECK(betas.count(a2) == 1);
        CHECK(betas.count(weight_add(a1, a2)) == 1);
    }
}

TEST_CASE("A2 form values from the inverse Cartan matrix") {
    RootDatum d(CartanType::A2);
    Weight w1 = d.fundamental_weight(0);
    Weight a1 = d.simple_root(0), a2 = d.simple_root(1);
    CHECK(d.form(w1, w1) == mpq_class(2, 3));
    CHECK(d.form(w1, a1) == mpq_class(1));
    CHECK(d.form(a1, a2) == mpq_class(-1));
    CHECK(d.form(a1, a1) == mpq_class(2));
    // (rho, alpha_i^vee) = 1
    CHECK(d.rho()[0] == 1);
    CHECK(d.rho()[1] == 1);
}

TEST_CASE("form symmetry and W-invariance") {
    for (auto type : {CartanType::A1, CartanType::A2, CartanType::B2}) {
        RootDatum d(type);
        std::vector<Weight> sample;
        sample.push_back(d.rho());
        for (int i = 0; i < d.rank(); ++i) {
            sample.push_back(d.fundamental_weight(i));
            sample.push_back(d.simple_root(i));
        }
        for (const auto& a : sample)
            for (const auto& b : sample) {
                CHECK(d.form(a, b) == d.form(b, a));
                for (int i = 0; i < d.rank(); ++i)
                    CHECK(d.form(d.simple_reflect(i, a), d.simple_reflect(i, b)) == d.form(a, b));
                // integrality: (Lambda,Lambda) in (1/d)Z
                mpq_class v = d.form(a, b) * d.lattice_index();
                CHECK(v.get_den() == 1);
            }
    }
}

TEST_CASE("B2 short roots have length^2 = 2") {
    RootDatum d(CartanType::B2);
    CHECK(d.num_positive_roots() == 4);
    CHECK(d.lattice_index() == 2);
    bool has_short = false, has_long = false;
    for (const auto& b : d.pos_roots()) {
        mpq_class l2 = d.form(b, b);
        if (l2 == 2) has_short = true;
        if (l2 == 4) has_long = true;
    }
    CHECK(has_short);
    CHECK(has_long);
}

TEST_CASE("dot twist") {
    RootDatum a1(CartanType::A1);
    Weight l = weight_scale(2, a1.fundamental_weight(0));
    auto [e, img] = a1.dot_twist({0}, l);
    CHECK(e == -2);
    CHECK(img == weight_neg(l));
    auto [e0, img0] = a1.dot_twist({}, l);
    CHECK(e0 == 0);
    CHECK(img0 == l);

    RootDatum a2(CartanType::A2);
    Weight l2 = weight_scale(2, a2.fundamental_weight(0));
    auto [e2, img2] = a2.dot_twist({0}, l2);
    CHECK(e2 == -2);
    CHECK(img2 == weight_sub(l2, weight_scale(2, a2.simple_root(0))));
}

TEST_CASE("dot twist is a twisted action") {
    RootDatum d(CartanType::A2);
    std::vector<std::vector<int>> words = {{0}, {1}, {0, 1}, {1, 0}, {0, 1, 0}};
    std::vector<Weight> ls = {d.fundamental_weight(0), d.rho(),
                              weight_add(d.rho(), d.fundamental_weight(1))};
    for (const auto& w1 : words)
        for (const auto& w2 : words)
            for (const auto& l : ls) {
                std::vector<int> w12 = w1;
                w12.insert(w12.end(), w2.begin(), w2.end());
                auto [e12, img12] = d.dot_twist(w12, l);
                auto [e2, img2] = d.dot_twist(w2, l);
                auto [e1, img1] = d.dot_twist(w1, img2);
                CHECK(e12 == e1 + e2);
                CHECK(img12 == img1);
            }
}

TEST_CASE("non-reduced words are rejected") {
    CHECK_THROWS(RootDatum(CartanType::A2, std::vector<int>{0, 0, 1}));
    CHECK_THROWS(RootDatum(CartanType::A2, std::vector<int>{0, 1}));  // not w0
    CHECK_NOTHROW(RootDatum(CartanType::A2, std::vector<int>{1, 0, 1}));
}
