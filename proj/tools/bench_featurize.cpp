// Featurization throughput: serial reference vs OpenMP fan-out over graphs.
// Correctness of the parallel path (bit-identical output) is asserted here as
// well as in the test suite.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nctefa/encode.hpp"
#include "nctefa/featurize.hpp"
#include "nctefa/synth.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double time_of(const std::function<void()>& fn) {
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int count = 200;
    std::uint64_t seed = 7;
    if (argc > 1) count = std::atoi(argv[1]);
    if (argc > 2) seed = std::strtoull(argv[2], nullptr, 10);

    const nctefa::GraphDataset ds = nctefa::synth_regular_pair(count, seed);
    nctefa::EncodingSpec spec; // nct-efa-raw, standardized

    nctefa::FeatureSet serial;
    const double t_serial =
        time_of([&] { serial = nctefa::featurize_dataset_serial(ds, spec); });
    std::printf("%-22s %8.3fs\n", "serial reference", t_serial);

    int max_threads = 1;
#ifdef _OPENMP
    max_threads = omp_get_max_threads();
#endif
    for (int t = 1; t <= max_threads; t *= 2) {
        nctefa::FeatureSet parallel;
        const double t_par =
            time_of([&] { parallel = nctefa::featurize_dataset(ds, spec, t); });
        bool identical = parallel.records.size() == serial.records.size();
        for (std::size_t i = 0; identical && i < parallel.records.size(); ++i)
            identical = parallel.records[i].features.values == serial.records[i].features.values;
        std::printf("omp threads=%-10d %8.3fs  speedup %.2fx  output %s\n", t, t_par,
                    t_serial / t_par, identical ? "identical" : "MISMATCH");
        if (!identical) return 1;
    }
    return 0;
}
