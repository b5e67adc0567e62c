#include "ramlock/scan.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ramlock {

long default_scan_budget() {
    if (const char* env = std::getenv("RAMLOCK_BUDGET")) {
        long v = std::atol(env);
        if (v > 0) return v;
    }
    return 2'000'000;
}

namespace {

struct SearchCtx {
    const std::vector<LFElement>* f;
    FieldPtr F;
    long target;
    long budget;
    std::atomic<long> nodes{0};
    std::atomic<bool> found{false};
    std::atomic<bool> blown{false};
};

long eval_val(const SearchCtx& ctx, const LFElement& x) {
    return poly_eval(*ctx.f, x).val_lb();
}

void dfs(SearchCtx& ctx, const LFElement& x, long level, long& local_best,
         LFElement& local_witness) {
    if (ctx.found.load(std::memory_order_relaxed) ||
        ctx.blown.load(std::memory_order_relaxed))
        return;
    if (ctx.nodes.fetch_add(1, std::memory_order_relaxed) >= ctx.budget) {
        ctx.blown.store(true, std::memory_order_relaxed);
        return;
    }
    long v = eval_val(ctx, x);
    if (level >= ctx.target) local_best = std::max(local_best, v);
    if (v >= ctx.target) {
        local_best = std::max(local_best, v);
        local_witness = x;
        ctx.found.store(true, std::memory_order_relaxed);
        return;
    }
    // f(x + pi^level d) = f(x) mod pi^level: a low value cannot recover
    if (v < std::min(ctx.target, level)) return;
    if (level >= ctx.target) return;
    const auto& reps = ctx.F->residue_reps();
    LFElement shift = ctx.F->unif_pow(level);
    for (std::size_t d = 0; d < reps.size(); ++d) {
        LFElement nx = d == 0 ? x : x + reps[d] * shift;
        dfs(ctx, nx, level + 1, local_best, local_witness);
        if (ctx.found.load(std::memory_order_relaxed) ||
            ctx.blown.load(std::memory_order_relaxed))
            return;
    }
}

ScanResult scan_impl(const std::vector<LFElement>& f, long target_vF,
                     const ScanOptions& opts, bool parallel) {
    if (f.empty()) throw InputError("empty polynomial");
    SearchCtx ctx;
    ctx.f = &f;
    ctx.F = f[0].field();
    ctx.target = target_vF;
    ctx.budget = opts.budget;
    if (target_vF + 2 > ctx.F->prec_cap())
        throw PrecisionTooLow("scan target beyond field working precision");

    ScanResult out;
    if (target_vF <= 0) {
        out.found = true;
        out.witness = ctx.F->zero();
        out.best_val = eval_val(ctx, out.witness);
        out.nodes = 1;
        return out;
    }

    const auto& reps = ctx.F->residue_reps();
    long q = static_cast<long>(reps.size());
    long width = ctx.target >= 2 ? q * q : q;
    std::vector<long> bests(static_cast<std::size_t>(width), -1);
    std::vector<LFElement> wits(static_cast<std::size_t>(width));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (long idx = 0; idx < width; ++idx) {
        if (ctx.found.load() || ctx.blown.load()) continue;
        LFElement x;
        long level;
        if (ctx.target >= 2) {
            x = reps[static_cast<std::size_t>(idx % q)] +
                reps[static_cast<std::size_t>(idx / q)] * ctx.F->unif_pow(1);
            level = 2;
        } else {
            x = reps[static_cast<std::size_t>(idx)];
            level = 1;
        }
        if (ctx.nodes.fetch_add(1, std::memory_order_relaxed) >= ctx.budget) {
            ctx.blown.store(true, std::memory_order_relaxed);
            continue;
        }
        long v0 = eval_val(ctx, x);
        std::size_t ui = static_cast<std::size_t>(idx);
        if (level >= ctx.target || v0 >= ctx.target)
            bests[ui] = std::max(bests[ui], v0);
        if (v0 >= ctx.target) {
            wits[ui] = x;
            ctx.found.store(true);
            continue;
        }
        if (v0 < std::min(ctx.target, level) || level >= ctx.target) continue;
        dfs(ctx, x, level, bests[ui], wits[ui]);
    }
    (void)parallel;

    if (ctx.blown.load()) throw TooLarge("enumeration budget exceeded");
    out.nodes = ctx.nodes.load();
    for (long idx = 0; idx < width; ++idx) {
        std::size_t ui = static_cast<std::size_t>(idx);
        if (bests[ui] > out.best_val) out.best_val = bests[ui];
        if (wits[ui].valid() && !out.witness.valid()) {
            out.witness = wits[ui];
            out.found = true;
        }
    }
    return out;
}

}  // namespace

ScanResult scan_poly_value(const std::vector<LFElement>& f, long target_vF,
                           const ScanOptions& opts) {
    return scan_impl(f, target_vF, opts, opts.parallel);
}

ScanResult scan_poly_value_serial(const std::vector<LFElement>& f,
                                  long target_vF, const ScanOptions& opts) {
    return scan_impl(f, target_vF, opts, false);
}

}  // namespace ramlock
