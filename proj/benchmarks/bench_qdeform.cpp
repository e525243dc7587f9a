#include <benchmark/benchmark.h>

#include <qdeform/deform.hpp>
#include <qdeform/expr.hpp>

using namespace qdeform;

namespace {

std::shared_ptr<QGroup> engine32() {
    static auto ctx = QGroup::make(QGroupParams{3, 2, 0, 1, false, 0});
    return ctx;
}

void bench_normal_form(benchmark::State& state) {
    auto ctx = engine32();
    NCPoly word = eval_expr(parse_expr("e2*e1*f1*e2*f2*w1*e1", 3, 2), *ctx);
    for (auto _ : state) {
        // a fresh engine each round keeps the per-degree caches cold
        auto fresh = QGroup::make(QGroupParams{3, 2, 0, 1, false, 0});
        benchmark::DoNotOptimize(fresh->normal_form(word));
    }
}
BENCHMARK(bench_normal_form);

void bench_normal_form_cached(benchmark::State& state) {
    auto ctx = engine32();
    NCPoly word = eval_expr(parse_expr("e2*e1*f1*e2*f2*w1*e1", 3, 2), *ctx);
    benchmark::DoNotOptimize(ctx->normal_form(word));
    for (auto _ : state) benchmark::DoNotOptimize(ctx->normal_form(word));
}
BENCHMARK(bench_normal_form_cached);

void bench_pairing(benchmark::State& state) {
    auto ctx = engine32();
    for (auto _ : state) {
        Pairing pairing(ctx);  // fresh memo table per round
        CycScalar acc = CycScalar::zero(ctx->ell());
        for (const auto& zeta : ctx->truncated_degrees()) {
            GramMatrix g = pairing.gram_plus(zeta);
            for (int r = 0; r < g.entries.rows(); ++r) acc += g.entries.at(r, r);
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(bench_pairing);

void bench_twisting_element(benchmark::State& state) {
    auto ctx = engine32();
    for (auto _ : state) {
        Pairing pairing(ctx);
        benchmark::DoNotOptimize(twisting_element(pairing));
    }
}
BENCHMARK(bench_twisting_element);

void bench_twisted_product(benchmark::State& state) {
    auto ctx = QGroup::make(QGroupParams{2, 2, 0, 1, false, 0});
    Pairing pairing(ctx);
    TwistElement f = twisting_element(pairing);
    auto algebra = std::make_shared<ModuleAlgebra>(
        smash_product(ctx, {CycScalar::theta_power(2, 1)}, 6));
    for (auto _ : state) {
        DeformedProduct d = twisted_product(algebra, f, 4);
        ModuleElement acc;
        for (int a = 0; a < algebra->size(); ++a) {
            if (algebra->grade(a) > 2) continue;
            for (int b = 0; b < algebra->size(); ++b) {
                if (algebra->grade(b) > 2) continue;
                acc += d.product(a, b);
            }
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(bench_twisted_product);

void bench_qybe(benchmark::State& state) {
    auto ctx = engine32();
    Pairing pairing(ctx);
    TwistElement f = twisting_element(pairing);
    auto v = std::make_shared<ModuleAlgebra>(natural_module(ctx));
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_qybe(v, v, v, f, pairing).all_pass());
    }
}
BENCHMARK(bench_qybe);

}  // namespace

BENCHMARK_MAIN();
