#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramlock/ramification.hpp"
#include "ramlock/towers.hpp"

using namespace ramlock;

namespace {

FieldPtr qp(long p, long prec = 24) { return make_field(p, 1, {-p, 1}, prec); }

FieldPtr qp_e(long p, long e, long prec = 24) {
    std::vector<Int> eis(static_cast<std::size_t>(e + 1), 0);
    eis[0] = -p;
    eis[static_cast<std::size_t>(e)] = 1;
    return make_field(p, 1, eis, prec);
}

std::vector<LFElement> kummer_poly(const FieldPtr& K, long n) {
    long deg = 1;
    for (long i = 0; i < n; ++i) deg *= K->p();
    std::vector<LFElement> f(static_cast<std::size_t>(deg + 1), K->zero());
    f[0] = -K->uniformizer();
    f[static_cast<std::size_t>(deg)] = K->one();
    return f;
}

}  // namespace

TEST_CASE("bound formula") {
    CHECK(ramification_bound(3, 1, 1, 1).value == make_rat(5, 2));
    CHECK(ramification_bound(3, 1, 0, 7).value == 0);
    CHECK(ramification_bound(5, 2, 2, 1).value == make_rat(19, 5));
    CHECK_THROWS_AS(ramification_bound(3, 1, 2, 1), RangeError);
    CHECK_THROWS_AS(ramification_bound(3, 1, -1, 1), RangeError);

    // monotone in n, nondecreasing in r (r >= 1), over a grid
    for (long p : {3L, 5L, 7L})
        for (long e : {1L, 2L, 3L})
            for (long r = 1; r < p - 1; ++r)
                for (long n = 1; n <= 3; ++n) {
                    auto u = ramification_bound(p, e, r, n).value;
                    CHECK(ramification_bound(p, e, r, n + 1).value > u);
                    if (r + 1 < p - 1)
                        CHECK(ramification_bound(p, e, r + 1, n).value >= u);
                }
}

TEST_CASE("Kummer profile closed forms") {
    for (long p : {3L, 5L}) {
        for (long e : {1L, 2L}) {
            auto K = e == 1 ? qp(p) : qp_e(p, e);
            for (long n = 1; n <= (p == 3 ? 2 : 1); ++n) {
                auto rp = root_difference_profile(kummer_poly(K, n), K);
                Int pn;
                mpz_ui_pow_ui(pn.get_mpz_t(),
                              static_cast<unsigned long>(p),
                              static_cast<unsigned long>(n));
                Rat sf = 1 - Rat(1) / Rat(pn) + Rat(n * e);
                Rat af = Rat(1) / Rat(pn) + make_rat(e, p - 1);
                CHECK(rp.s_f == sf);
                CHECK(rp.alpha_f == af);
                CHECK(rp.independent_of_i);
                CHECK(rp.count() == rp.degree - 1);
            }
        }
    }
}

TEST_CASE("Kummer profile over the cyclotomic base") {
    // f = T^(p^n) - zeta_p over N = K(zeta_p):
    // s_f = n e(N), alpha_f = e(N)/(p-1)
    for (long p : {3L, 5L}) {
        auto K = qp(p);
        auto t = cyclotomic_tower(K, 1);
        auto N = t.top;
        long n = 1;
        long deg = p;
        std::vector<LFElement> f(static_cast<std::size_t>(deg + 1),
                                 N->zero());
        f[0] = -t.elem("zeta1");
        f[static_cast<std::size_t>(deg)] = N->one();
        auto rp = root_difference_profile(f, N);
        long eN = N->e_abs();
        CHECK(rp.s_f == Rat(n * eN));
        CHECK(rp.alpha_f == make_rat(eN, p - 1));
    }
}

TEST_CASE("break_from_polynomial") {
    auto K = qp(3);
    // T^p - pi: u = 1 + e(1 + 1/(p-1)) = 5/2
    auto bd = break_from_polynomial(kummer_poly(K, 1), K);
    CHECK(bd.upper_break == make_rat(5, 2));
    CHECK(bd.exact);
    CHECK(*bd.different == make_rat(5, 3));

    // trivial extension
    auto bt = break_from_polynomial({-K->uniformizer(), K->one()}, K);
    CHECK(bt.upper_break == 0);

    // tame quadratic T^2 - pi: diffs {1/2}, u = 1
    auto b2 = break_from_polynomial(
        {-K->uniformizer(), K->zero(), K->one()}, K);
    CHECK(b2.upper_break == 1);
    CHECK(*b2.different == make_rat(1, 2));
}

TEST_CASE("cyclotomic break bound") {
    // K = Q_3, n = 1: e' = 2, bound = 1 - 1/2 + (1 + 1/2) = 2
    CHECK(cyclotomic_break_bound(qp(3), 1) == 2);
    // K = Q_5, n = 1: 1 - 1/4 + (1 + 1/4) = 2
    CHECK(cyclotomic_break_bound(qp(5), 1) == 2);
    // K containing zeta_p: index 1, bound e(n + 1/(p-1))
    auto t = cyclotomic_tower(qp(3), 1);
    auto N = t.top;
    Rat expect = Rat(N->e_abs()) * (1 + make_rat(1, 2));
    CHECK(cyclotomic_break_bound(N, 1) == expect);
}

TEST_CASE("composite and Tate breaks") {
    for (long e : {1L, 2L}) {
        auto K = e == 1 ? qp(3) : qp_e(3, 2);
        for (long n = 1; n <= 2; ++n) {
            Rat closed = 1 + Rat(e) * (Rat(n) + make_rat(1, 2));
            auto bd = break_kummer_cyclotomic(K, n);
            CHECK(bd.upper_break == closed);
            CHECK(bd.exact);
            auto td = break_tate_tower(K, n);
            CHECK(td.upper_break == ramification_bound(K, 1, n).value);
        }
    }
    // e=2, p=5, n=2 formula value: 1 + 2(2 + 1/4) = 11/2
    auto b52 = break_kummer_cyclotomic(qp_e(5, 2), 2);
    CHECK(b52.upper_break == make_rat(11, 2));
}

TEST_CASE("different valuations") {
    auto K = qp(3);
    // K_1/K with T^3 - pi: different = 1 + 2/3 = 5/3 = s_f
    auto [K1, pi1] = adjoin_root(K, kummer_poly(K, 1));
    CHECK(different_valuation(K1, K) == make_rat(5, 3));
    // unramified step: 0
    auto fu = std::vector<LFElement>{K->from_int(-2), K->zero(), K->one()};
    auto [U, ru] = adjoin_root(K, fu);
    CHECK(different_valuation(U, K) == 0);
    // N(zeta_p)/N: 1 - 1/e'
    auto t = cyclotomic_tower(K, 1);
    CHECK(different_valuation(t.top, K) == make_rat(1, 2));
}

TEST_CASE("discriminant bound for the composite towers") {
    auto K = qp(3);
    for (long n = 1; n <= 2; ++n) {
        auto t = kummer_cyclotomic_tower(K, n);
        CHECK(check_discriminant_bound(t.top, K, 1, n));
    }
    // trivial and unramified cases at r = 0
    CHECK(check_discriminant_bound(K, K, 0, 1));
    auto fu = std::vector<LFElement>{K->from_int(-2), K->zero(), K->one()};
    auto [U, ru] = adjoin_root(K, fu);
    CHECK(check_discriminant_bound(U, K, 0, 1));
    // and a failing case: K_1 itself at r=0 is ramified
    auto [K1, pi1] = adjoin_root(K, kummer_poly(K, 1));
    CHECK(!check_discriminant_bound(K1, K, 0, 1));
}

TEST_CASE("lifting property on the cubic Kummer extension") {
    auto K = qp(3, 20);
    MonogenicExt Q{K, kummer_poly(K, 1)};
    // F = K_1 itself: embedding always exists, property holds at any j
    auto [K1, pi1] = adjoin_root(K, kummer_poly(K, 1));
    CHECK(lifting_property_holds(Q, K1, make_rat(2, 1)));
    CHECK(lifting_property_holds(Q, K1, make_rat(7, 2)));
    // Q = N: trivial extension, holds for all j
    MonogenicExt T{K, {-K->uniformizer(), K->one()}};
    CHECK(lifting_property_holds(T, K, make_rat(3, 1)));
    // j safely above u = 5/2: holds for every witness
    for (const auto& w : pj_witness_fields_q3(K)) {
        CHECK(lifting_property_holds(Q, w.top, make_rat(8, 3)));
    }
    // a cubic twist witnesses failure at j = 2
    auto wit = pj_witness_fields_q3(K);
    bool witnessed = false;
    for (const auto& w : wit)
        if (!lifting_property_holds(Q, w.top, make_rat(2, 1)))
            witnessed = true;
    CHECK(witnessed);
}
