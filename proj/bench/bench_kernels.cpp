// Serial reference kernels vs the OpenMP/summed-area versions.
//
//   bench_kernels [repetitions] [threads]

#include "structforge/corpus.hpp"
#include "structforge/decoder.hpp"
#include "structforge/kernels.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

using namespace structforge;

namespace {

double time_ms(int reps, const std::function<void()>& fn) {
    fn();  // warm-up
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count() / reps;
}

void report(const char* name, double ref_ms, double fast_ms) {
    std::printf("%-28s reference %9.3f ms   fast %9.3f ms   speedup %6.1fx\n", name, ref_ms, fast_ms,
                fast_ms > 0 ? ref_ms / fast_ms : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
    if (argc > 2) kernels::set_threads(std::atoi(argv[2]));
    std::printf("threads: %d, repetitions: %d\n", kernels::max_threads(), reps);

    std::mt19937_64 rng(1);
    BinaryMask mask(128, 128);
    std::bernoulli_distribution on(0.45);
    for (auto& c : mask.cells) c = on(rng) ? 1 : 0;

    std::vector<int> sink;
    report("window sums 29x3", time_ms(reps, [&] { sink = kernels::window_sums_reference(mask, 29, 3); }),
           time_ms(reps, [&] { sink = kernels::window_sums(mask, 29, 3); }));

    const auto disc = disc_mask(7);
    report("disc window sums 7", time_ms(reps, [&] { sink = kernels::masked_window_sums_reference(mask, disc, 7); }),
           time_ms(reps, [&] { sink = kernels::masked_window_sums(mask, disc, 7); }));

    SelectionRanking ranking;
    report("selection ranking (13 layers)", time_ms(reps, [&] { ranking = build_selection_ranking_reference(mask); }),
           time_ms(reps, [&] { ranking = build_selection_ranking(mask); }));

    // Selection on a realistic mask: a generated structure's wood layer.
    GeneratorParams params;
    params.material_weights = {1, 0, 0};
    params.max_rows = 6;
    const auto wood = material_masks(to_multilayer(rasterize(generate_structure(params, 3)))).wood;
    const auto wood_ranking = build_selection_ranking(wood);
    Selection sel;
    report("select_blocks", time_ms(reps, [&] { sel = select_blocks_reference(wood_ranking, Material::Wood); }),
           time_ms(reps, [&] { sel = select_blocks(wood_ranking, Material::Wood); }));
    std::printf("(%zu placements)\n", sel.placements.size());
    return 0;
}
