#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramlock/scan.hpp"
#include "ramlock/towers.hpp"

using namespace ramlock;

// The OpenMP kernel must agree with the serial reference on every
// instance: found flag, and the witness (when found) must actually
// witness the target.

TEST_CASE("parallel scan agrees with the serial reference") {
    auto K = make_field(3, 1, {-3, 1}, 20);
    auto wits = pj_witness_fields_q3(K);
    std::vector<LFElement> f{-K->uniformizer(), K->zero(), K->zero(),
                             K->one()};
    for (const auto& w : wits) {
        auto fF = poly_coerce(f, w.top);
        for (long t : {3L, 7L, 9L, 12L}) {
            if (t + 2 > w.top->prec_cap()) continue;
            auto s = scan_poly_value_serial(fF, t);
            auto p = scan_poly_value(fF, t);
            CHECK(s.found == p.found);
            if (s.found) {
                CHECK(poly_eval(fF, s.witness).val_lb() >= t);
                CHECK(poly_eval(fF, p.witness).val_lb() >= t);
            } else {
                CHECK(s.best_val == p.best_val);
            }
        }
    }
}

TEST_CASE("scan budget is enforced") {
    auto K = make_field(3, 1, {-3, 1}, 30);
    // 3^10 (T^2 - 2): constant valuation 10 everywhere, so the tree is a
    // full ternary tree of depth 10 before every branch dies
    Int c;
    mpz_ui_pow_ui(c.get_mpz_t(), 3, 10);
    std::vector<LFElement> f{K->from_int(-2 * c), K->zero(),
                             K->from_int(c)};
    ScanOptions opts;
    opts.budget = 500;
    CHECK_THROWS_AS(scan_poly_value(f, 12, opts), TooLarge);
}

TEST_CASE("scan completeness on a known root") {
    auto K = make_field(3, 1, {-3, 1}, 24);
    // f = (T - 7)(T - 1) has roots in Z_3; a deep scan must find one
    std::vector<LFElement> f{K->from_int(7), K->from_int(-8), K->one()};
    auto r = scan_poly_value(f, 15);
    CHECK(r.found);
    CHECK(poly_eval(f, r.witness).val_lb() >= 15);
}
