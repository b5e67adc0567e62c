#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramlock/phimodule.hpp"

using namespace ramlock;

namespace {

struct Setup {
    FieldPtr K;
    Tower F1;
    Tower F1q;  // unramified quadratic extension of the splitting tower

    Setup() {
        K = make_field(3, 1, {-3, 1}, 24);
        F1 = kummer_cyclotomic_tower(K, 1);
        F1.label = "F1";
        F1q = unramified_extension(F1, 2);
        F1q.label = "F1_unram2";
    }
};

Setup& setup() {
    static Setup s;
    return s;
}

}  // namespace

TEST_CASE("module validation") {
    CHECK_THROWS_AS(make_module(1, 1, 1, std::vector<long>{2}, 1),
                    BadExponent);
    // rank-2 with collapsing columns: generation fails
    std::vector<std::vector<PhiCoeff>> C(2,
                                         std::vector<PhiCoeff>(2));
    C[0][0] = PhiCoeff::u_pow(2);
    C[0][1] = PhiCoeff::u_pow(2);
    C[1][0] = PhiCoeff::u_pow(2);
    C[1][1] = PhiCoeff::u_pow(2);
    CHECK_THROWS_AS(make_module(2, 1, 1, C, 1, 3), BadShape);
    // adapted diagonal is fine
    auto M = make_module(2, 1, 1, std::vector<long>{0, 1}, 1);
    CHECK(M.d == 2);
}

TEST_CASE("etale rank-1 module has the p Teichmuller points") {
    auto& s = setup();
    auto M = make_module(1, 1, 0, std::vector<long>{0}, 1);
    auto sol = solve_points(M, s.F1);
    CHECK(sol.tuples.size() == 3);
    // all solutions already live over the splitting tower: the count does
    // not grow in the unramified extension... it stays p for this module
    auto sol2 = solve_points(M, s.F1q);
    CHECK(sol2.tuples.size() == 3);
}

TEST_CASE("weight-one rank-1 module: p points over the splitting tower") {
    auto& s = setup();
    auto M = make_module(1, 1, 1, std::vector<long>{1}, 1);
    long c1 = count_points(M, s.F1);
    long c2 = count_points(M, s.F1q);
    CHECK(c2 >= c1);
    CHECK(std::max(c1, c2) == 3);
    CHECK(c1 >= 1);  // zero is always a point
}

TEST_CASE("count is monotone under extension and capped by p^d") {
    auto& s = setup();
    for (long r1 : {0L, 1L}) {
        auto M = make_module(1, 1, r1, std::vector<long>{r1}, 1);
        long c1 = count_points(M, s.F1);
        long c2 = count_points(M, s.F1q);
        CHECK(c1 <= c2);
        CHECK(c2 <= 3);
    }
}

TEST_CASE("unique lifting from independent initial lifts") {
    auto& s = setup();
    auto M = make_module(1, 1, 1, std::vector<long>{1}, 1);
    WittQuotient Q(s.F1q, 1, 1);
    auto sol = solve_points(M, s.F1q);
    REQUIRE(sol.tuples.size() == 3);
    for (const auto& t : sol.tuples) {
        auto lift1 = unique_lift(M, Q, t);
        // perturb the starting lift by an ideal element
        std::vector<WittVec> pert{
            teichmuller(Q.F()->uniformizer() * Q.F()->from_int(2), 1,
                        Q.depth_src())};
        auto lift2 = unique_lift(M, Q, t, &pert);
        for (std::size_t i = 0; i < lift1.size(); ++i)
            CHECK(Q.eq(lift1[i], lift2[i]));
    }
}

TEST_CASE("cut out extension for the bundled modules") {
    auto& s = setup();
    std::vector<Tower> cands{s.F1, s.F1q};
    {
        auto M = make_module(1, 1, 0, std::vector<long>{0}, 1);
        auto res = cut_out_extension(M, cands);
        CHECK(res.count == 3);
        CHECK(res.tower_index == 0);  // the splitting tower itself
        CHECK(res.bound_respected);
    }
    {
        auto M = make_module(1, 1, 1, std::vector<long>{1}, 1);
        auto res = cut_out_extension(M, cands);
        CHECK(res.count == 3);
        CHECK(res.bound_respected);
        CHECK(res.break_datum.upper_break ==
              ramification_bound(s.K, 1, 1).value);
        CHECK(res.sharp);
    }
    {
        // empty candidate list
        auto M = make_module(1, 1, 0, std::vector<long>{0}, 1);
        CHECK_THROWS_AS(cut_out_extension(M, {}), NotFound);
    }
}

TEST_CASE("galois action on the point set") {
    auto& s = setup();
    auto M = make_module(1, 1, 1, std::vector<long>{1}, 1);
    auto sol = solve_points(M, s.F1q);
    REQUIRE(sol.tuples.size() == 3);
    // identity acts trivially
    auto id = identity_automorphism(s.F1q.top);
    auto perm0 = galois_action(sol, id);
    for (std::size_t i = 0; i < perm0.size(); ++i) CHECK(perm0[i] == i);
    // Frobenius of the unramified step
    auto frob = unramified_step_frobenius(s.F1q.top);
    auto perm = galois_action(sol, frob);
    // it is a permutation; orbit sizes divide the group order (2)
    for (const auto& orb : sol.orbits)
        CHECK((orb.size() == 1 || orb.size() == 2));
    // fixed points = points over the subfield
    long fixed = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (perm[i] == i) ++fixed;
    CHECK(fixed == count_points(M, s.F1));
}

TEST_CASE("level-2 etale module over the deeper tower") {
    auto K = make_field(3, 1, {-3, 1}, 24);
    auto F2 = kummer_cyclotomic_tower(K, 2);
    auto M = make_module(1, 2, 0, std::vector<long>{0}, 1);
    auto sol = solve_points(M, F2);
    CHECK(sol.tuples.size() == 9);  // p^(n d)
}
