#include <chrono>
#include <iostream>
#include <random>

#include "finsheaf/corpus.hpp"

using namespace finsheaf;

namespace {

double run_batch(const std::vector<DoubleComplex>& batch, bool parallel) {
    set_parallel(parallel);
    auto t0 = std::chrono::steady_clock::now();
    std::size_t checksum = 0;
    for (const DoubleComplex& dc : batch) {
        std::size_t rmax = std::max(dc.pmax(), dc.qmax()) + 2;
        SpectralPages sp = spectral_sequence(dc, Axis::by_p, rmax);
        for (const FpGroup& g : sp.total_cohomology) checksum += g.rank() + g.torsion().size();
        if (!sp.converged) {
            std::cerr << "convergence failure in benchmark input\n";
            std::exit(1);
        }
    }
    auto t1 = std::chrono::steady_clock::now();
    std::cout << "  checksum " << checksum << "\n";
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    std::size_t count = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20;
    std::size_t bound = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 4;
    std::mt19937_64 rng(2024);

    std::vector<DoubleComplex> batch;
    for (std::size_t i = 0; i < count; ++i)
        batch.push_back(corpus::random_double_complex(rng, bound, bound, 3));

    std::cout << count << " random double complexes, bounds " << bound << "x" << bound << "\n";
    std::cout << "serial:\n";
    double serial = run_batch(batch, false);
    std::cout << "  " << serial << " ms\n";
    std::cout << "parallel:\n";
    double parallel = run_batch(batch, true);
    std::cout << "  " << parallel << " ms\n";
    std::cout << "speedup: " << (parallel > 0 ? serial / parallel : 0.0) << "x\n";
    return 0;
}
