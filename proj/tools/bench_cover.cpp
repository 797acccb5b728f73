// Compares the parallel cover scorer against the serial reference on
// identical inputs: same argmax, elementwise-equal tables, wall time and
// speedup per cover size. Usage: bench_cover [d] [samples] [repeats].

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <omp.h>

#include "cosrec/exhaustive.hpp"
#include "cosrec/rng.hpp"
#include "cosrec/sampling.hpp"

using namespace cosrec;

int main(int argc, char** argv) {
    const int d = argc > 1 ? std::atoi(argv[1]) : 3;
    const int m = argc > 2 ? std::atoi(argv[2]) : 2000;
    const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;
    const double gamma = 2.0;
    const double threshold = 0.01;

    Rng rng(99);
    Instance inst;
    inst.d = d;
    inst.gamma = gamma;
    inst.beta = 1e-3;
    inst.w = sample_hidden_direction(rng, d);
    std::vector<LabeledSample> samples;
    samples.reserve(m);
    NoiseModel noise = NoiseModel::uniform_bounded(inst.beta);
    for (int i = 0; i < m; ++i) samples.push_back(sample_cosine(inst, rng, noise));

    std::printf("threads=%d d=%d samples=%d repeats=%d\n", omp_get_max_threads(), d, m, repeats);
    std::printf("%10s %12s %12s %8s %s\n", "points", "serial_ms", "parallel_ms", "speedup",
                "agree");
    for (std::uint64_t cap : {2000u, 20000u, 200000u}) {
        SphereCover cover = random_sphere_cover(d, 0.05, rng, cap);
        double best_serial = 1e300, best_parallel = 1e300;
        bool agree = true;
        ScoreTable serial, parallel;
        for (int r = 0; r < repeats; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            serial = score_cover_serial(cover, samples, gamma, threshold);
            auto t1 = std::chrono::steady_clock::now();
            parallel = score_cover(cover, samples, gamma, threshold);
            auto t2 = std::chrono::steady_clock::now();
            best_serial = std::min(
                best_serial, std::chrono::duration<double, std::milli>(t1 - t0).count());
            best_parallel = std::min(
                best_parallel, std::chrono::duration<double, std::milli>(t2 - t1).count());
            agree = agree && serial == parallel &&
                    argmax_score(serial) == argmax_score(parallel);
        }
        std::printf("%10zu %12.2f %12.2f %8.2f %s\n", cover.points.size(), best_serial,
                    best_parallel, best_serial / best_parallel, agree ? "yes" : "NO");
        if (!agree) return 1;
    }
    return 0;
}
