#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ramlock/localfield.hpp"

using namespace ramlock;

namespace {

FieldPtr q3(long prec = 20) { return make_field(3, 1, {-3, 1}, prec); }
FieldPtr q3_ram2(long prec = 20) { return make_field(3, 1, {-3, 0, 1}, prec); }

LFElement random_element(const FieldPtr& F, std::mt19937_64& rng, long depth) {
    LFElement x = F->zero();
    const auto& reps = F->residue_reps();
    std::uniform_int_distribution<long> digit(
        0, static_cast<long>(reps.size()) - 1);
    for (long k = 0; k < depth; ++k)
        x = x + reps[static_cast<std::size_t>(digit(rng))] * F->unif_pow(k);
    return x;
}

// Independent lower-hull oracle (gift wrapping), for polygon tests.
std::vector<std::pair<Rat, long>> brute_hull_rootvals(
    std::vector<std::pair<long, Rat>> pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<Rat, long>> out;
    std::size_t cur = 0;
    while (pts[cur].first != pts.back().first) {
        std::size_t best = cur;
        Rat best_slope = 0;
        bool have = false;
        for (std::size_t j = cur + 1; j < pts.size(); ++j) {
            Rat slope = (pts[j].second - pts[cur].second) /
                        (pts[j].first - pts[cur].first);
            if (!have || slope < best_slope ||
                (slope == best_slope && pts[j].first > pts[best].first)) {
                best = j;
                best_slope = slope;
                have = true;
            }
        }
        long run = pts[best].first - pts[cur].first;
        Rat rv = (pts[cur].second - pts[best].second) / run;
        if (!out.empty() && out.back().first == rv)
            out.back().second += run;
        else
            out.emplace_back(rv, run);
        cur = best;
    }
    return out;
}

}  // namespace

TEST_CASE("make_field basics") {
    auto K = q3();
    CHECK(K->e_abs() == 1);
    CHECK(K->from_int(3).valuation() == Valuation::of(1));

    auto K2 = q3_ram2();
    CHECK(K2->e_abs() == 2);
    CHECK(K2->from_int(3).valuation() == Valuation::of(2));
    CHECK(K2->uniformizer().valuation() == Valuation::of(1));

    CHECK_THROWS_AS(make_field(3, 1, {-1, 0, 1}, 20), NotEisenstein);
    CHECK_THROWS_AS(make_field(4, 1, {-2, 1}, 20), InputError);
}

TEST_CASE("valuation contract") {
    auto K = q3_ram2();
    CHECK(K->from_int(3).valuation() == Valuation::of(2));
    auto x = K->uniformizer() + K->from_int(3);
    CHECK(x.valuation() == Valuation::of(1));
    CHECK(K->zero().valuation().infinite);

    // zero to working precision but not provably zero
    Int big;
    mpz_ui_pow_ui(big.get_mpz_t(), 3, 20);
    auto z = K->from_int(big);
    CHECK_THROWS_AS(z.valuation(), PrecisionLoss);
}

TEST_CASE("ultrametric and multiplicativity on sampled pairs") {
    auto K = q3_ram2(16);
    std::mt19937_64 rng(12345);
    for (int t = 0; t < 40; ++t) {
        auto x = random_element(K, rng, 8);
        auto y = random_element(K, rng, 8);
        auto vx = x.val_exact(), vy = y.val_exact();
        if (!vx || !vy) continue;
        auto p = (x * y).val_exact();
        REQUIRE(p.has_value());
        CHECK(*p == *vx + *vy);
        auto s = (x + y).val_lb();
        CHECK(s >= std::min(*vx, *vy));
        if (*vx != *vy) {
            auto se = (x + y).val_exact();
            REQUIRE(se.has_value());
            CHECK(*se == std::min(*vx, *vy));
        }
    }
}

TEST_CASE("unit inverse and exact division") {
    auto K = q3_ram2(16);
    std::mt19937_64 rng(999);
    for (int t = 0; t < 20; ++t) {
        auto x = random_element(K, rng, 10);
        auto v = x.val_exact();
        if (!v) continue;
        auto u = x.div_unif_exact(*v);
        auto inv = u.invert_unit();
        CHECK((u * inv - K->one()).is_zero_at_prec());
        auto y = x * K->unif_pow(2);
        CHECK((y.div_exact(x) - K->unif_pow(2)).is_zero_at_prec());
    }
}

TEST_CASE("digit expansion roundtrip") {
    auto K = q3_ram2(16);
    std::mt19937_64 rng(77);
    auto x = random_element(K, rng, 12);
    auto ds = x.digits(12);
    LFElement y = K->zero();
    for (long k = 0; k < 12; ++k)
        y = y + K->residue_reps()[static_cast<std::size_t>(
                ds[static_cast<std::size_t>(k)])] *
                    K->unif_pow(k);
    CHECK((x - y).val_lb() >= 12);
}

TEST_CASE("norm to base") {
    auto K = q3();
    auto K2 = q3_ram2();
    // norm of pi for u^2 - 3 is -3
    auto n = norm_to_base(K2->uniformizer(), K2->parent());
    CHECK((n - K2->parent()->from_int(-3)).is_zero_at_prec());
    CHECK(n.valuation() == Valuation::of(1));

    // unit with residue 2 under an unramified quadratic step: norm has
    // residue 4 = 1, a unit
    auto f2 = std::vector<LFElement>{K->from_int(-2), K->zero(), K->one()};
    auto [U, root] = adjoin_root(K, f2);
    CHECK(U->kind() == StepKind::Unramified);
    auto u = U->from_int(2);
    auto nu = norm_to_base(u, K);
    CHECK(nu.valuation() == Valuation::of(0));
    CHECK(nu.residue_index() == 1);

    // Kummer step: norm of the root of T^3 - pi is pi
    auto f3 = std::vector<LFElement>{-K->uniformizer(), K->zero(), K->zero(),
                                     K->one()};
    auto [K1, pi1] = adjoin_root(K, f3);
    CHECK(K1->e_abs() == 3);
    auto npi = norm_to_base(pi1, K);
    CHECK((npi - K->from_int(3)).is_zero_at_prec());

    CHECK_THROWS_AS(norm_to_base(K->one(), K2), NotInTower);
}

TEST_CASE("norm is multiplicative with scaled valuation") {
    auto K2 = q3_ram2(16);
    std::mt19937_64 rng(4242);
    auto base = K2->parent();
    for (int t = 0; t < 10; ++t) {
        auto x = random_element(K2, rng, 8);
        auto y = random_element(K2, rng, 8);
        auto nx = norm_to_base(x, base), ny = norm_to_base(y, base),
             nxy = norm_to_base(x * y, base);
        CHECK((nxy - nx * ny).is_zero_at_prec());
        auto vx = x.val_exact();
        auto vnx = nx.val_exact();
        if (vx && vnx) {
            // v_p(N(x)) = [F:base] v_p(x)
            CHECK(*vnx * K2->e_abs() == 2 * *vx * base->e_abs());
        }
    }
}

TEST_CASE("newton polygon examples") {
    auto K = q3();
    // T^3 - pi: single slope, root valuation 1/3 x3
    auto np = newton_polygon({-K->uniformizer(), K->zero(), K->zero(),
                              K->one()});
    REQUIRE(np.root_valuations.size() == 1);
    CHECK(np.root_valuations[0].first == make_rat(1, 3));
    CHECK(np.root_valuations[0].second == 3);

    // T^2 - pT + p, expected from the brute hull over the three points
    auto oracle = brute_hull_rootvals({{0, 1}, {1, 1}, {2, 0}});
    auto np2 = newton_polygon({K->from_int(3), K->from_int(-3), K->one()});
    REQUIRE(np2.root_valuations.size() == oracle.size());
    CHECK(np2.root_valuations[0] == oracle[0]);
    CHECK(oracle[0].first == make_rat(1, 2));
    CHECK(oracle[0].second == 2);

    // (T-1)(T-p): valuations {0, 1}
    auto np3 = newton_polygon({K->from_int(3), K->from_int(-4), K->one()});
    REQUIRE(np3.root_valuations.size() == 2);
    CHECK(np3.root_valuations[0].first == 0);
    CHECK(np3.root_valuations[1].first == 1);
}

TEST_CASE("polygon of a product is the multiset union") {
    auto K = q3_ram2(16);
    std::mt19937_64 rng(31337);
    for (int t = 0; t < 15; ++t) {
        std::vector<LFElement> f, g;
        long df = 1 + static_cast<long>(rng() % 3);
        long dg = 1 + static_cast<long>(rng() % 3);
        for (long i = 0; i < df; ++i) f.push_back(random_element(K, rng, 6));
        f.push_back(K->one());
        for (long i = 0; i < dg; ++i) g.push_back(random_element(K, rng, 6));
        g.push_back(K->one());
        NewtonPolygon npf, npg, npfg;
        try {
            npf = newton_polygon(f);
            npg = newton_polygon(g);
            npfg = newton_polygon(poly_mul(f, g));
        } catch (const PrecisionLoss&) {
            continue;
        } catch (const InputError&) {
            continue;
        }
        std::vector<std::pair<Rat, long>> uni = npf.root_valuations;
        for (const auto& rv : npg.root_valuations) {
            bool merged = false;
            for (auto& u : uni)
                if (u.first == rv.first) {
                    u.second += rv.second;
                    merged = true;
                }
            if (!merged) uni.push_back(rv);
        }
        std::sort(uni.begin(), uni.end());
        CHECK(npfg.inf_multiplicity == npf.inf_multiplicity +
                                           npg.inf_multiplicity);
        CHECK(npfg.root_valuations == uni);
    }
}

TEST_CASE("adjoin_root: Kummer, cyclotomic, unramified, reducible") {
    auto K = q3();
    // T^3 - pi -> e = 3
    auto f3 = std::vector<LFElement>{-K->uniformizer(), K->zero(), K->zero(),
                                     K->one()};
    auto r1 = adjoin_root(K, f3);
    CHECK(r1.field->e_abs() == 3);
    CHECK(poly_eval(poly_coerce(f3, r1.field), r1.root).is_zero_at_prec());
    // new uniformizer has valuation 1 = (1/e_step) of the old in relative units
    CHECK(r1.field->uniformizer().valuation() == Valuation::of(1));
    CHECK(LFElement::coerce(r1.field, K->uniformizer()).valuation() ==
          Valuation::of(3));

    // cyclotomic quadratic: T^2 + T + 1 over Q_3 -> e = 2
    auto fz = std::vector<LFElement>{K->one(), K->one(), K->one()};
    auto r2 = adjoin_root(K, fz);
    CHECK(r2.field->e_abs() == 2);
    CHECK(poly_eval(poly_coerce(fz, r2.field), r2.root).is_zero_at_prec());

    // unramified: T^2 - 2
    auto fu = std::vector<LFElement>{K->from_int(-2), K->zero(), K->one()};
    auto r3 = adjoin_root(K, fu);
    CHECK(r3.field->kind() == StepKind::Unramified);
    CHECK(r3.field->e_abs() == 1);
    CHECK(r3.field->f_abs() == 2);
    CHECK(poly_eval(poly_coerce(fu, r3.field), r3.root).is_zero_at_prec());

    // reducible: T^2 - 1
    auto fr = std::vector<LFElement>{K->from_int(-1), K->zero(), K->one()};
    CHECK_THROWS_AS(adjoin_root(K, fr), Reducible);
}

TEST_CASE("adjoin_root re-presents non-uniformizer generators") {
    // T^2 - 27: root 3*sqrt(3); step re-presented by T^2 - 3
    auto K = q3();
    auto f = std::vector<LFElement>{K->from_int(-27), K->zero(), K->one()};
    auto r = adjoin_root(K, f);
    CHECK(r.field->e_abs() == 2);
    CHECK(r.field->kind() == StepKind::Eisenstein);
    auto img = poly_eval(poly_coerce(f, r.field), r.root);
    CHECK(img.val_lb() >= 20);
    CHECK(r.root.valuation() == Valuation::of(3));
}

TEST_CASE("coerce rejects cross-tower elements") {
    auto K = q3();
    auto K2 = q3_ram2();
    CHECK_THROWS_AS(LFElement::coerce(K2, K->one()), NotInTower);
}
