// Serial reference path vs OpenMP per-point kernels on the full identity suite.
// usage: nk6_bench [points] [repeats]

#include "nk6/report.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef NK6_USE_OPENMP
#include <omp.h>
#endif

namespace {

double time_run(const nk6::RunConfig& cfg, nk6::RunReport& out, int repeats) {
    double best = 1e300;
    for (int k = 0; k < repeats; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        out = nk6::run(cfg);
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int points = argc > 1 ? std::atoi(argv[1]) : 40;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

    nk6::RunConfig cfg;
    cfg.backend = "s6";
    cfg.points = points;
    cfg.seed = 7;
    cfg.identities = nk6::parse_identity_filter("all,pde,einstein,classify");

    nk6::RunReport serial, parallel;
    cfg.serial = true;
    const double ts = time_run(cfg, serial, repeats);
    cfg.serial = false;
    const double tp = time_run(cfg, parallel, repeats);

    int threads = 1;
#ifdef NK6_USE_OPENMP
    threads = omp_get_max_threads();
#endif
    const bool same = serial.identities == parallel.identities && serial.mu == parallel.mu;
    std::printf("points %d, identities %zu, best of %d\n", points, serial.identities.size(), repeats);
    std::printf("serial    %8.3f s\n", ts);
    std::printf("parallel  %8.3f s  (%d threads, speedup %.2fx)\n", tp, threads, ts / tp);
    std::printf("results identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
