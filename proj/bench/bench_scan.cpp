// Compares the serial reference enumeration kernel with the OpenMP one on
// the lifting-property workload (root search in sextic twist fields).
#include <chrono>
#include <cstdio>

#include "ramlock/scan.hpp"
#include "ramlock/towers.hpp"

using namespace ramlock;
using clk = std::chrono::steady_clock;

static double run(const std::vector<LFElement>& f, long target, bool par) {
    auto t0 = clk::now();
    ScanOptions opts;
    opts.budget = 50'000'000;
    opts.parallel = par;
    auto r = par ? scan_poly_value(f, target, opts)
                 : scan_poly_value_serial(f, target, opts);
    auto t1 = clk::now();
    std::printf("  %-8s target=%2ld found=%d nodes=%-9ld best=%ld  %8.1f ms\n",
                par ? "omp" : "serial", target, r.found ? 1 : 0, r.nodes,
                r.best_val,
                std::chrono::duration<double, std::milli>(t1 - t0).count());
    return std::chrono::duration<double>(t1 - t0).count();
}

int main() {
    auto K = make_field(3, 1, {-3, 1}, 20);
    std::vector<LFElement> f{-K->uniformizer(), K->zero(), K->zero(),
                             K->one()};
    auto wits = pj_witness_fields_q3(K);
    for (const auto& w : wits) {
        std::printf("%s field, e = %ld\n", w.label.c_str(), w.top->e_abs());
        auto fF = poly_coerce(f, w.top);
        for (long t : {10L, 14L, 15L}) {
            if (t + 2 > w.top->prec_cap()) continue;
            double ts = run(fF, t, false);
            double tp = run(fF, t, true);
            std::printf("  speedup %.2fx\n", ts / tp);
        }
    }
    return 0;
}
