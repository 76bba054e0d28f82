// Times the OpenMP kernels against their serial reference implementations
// and checks the results agree bit-for-bit.

#include "hamlab/polterovich.hpp"
#include "hamlab/presets.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace hamlab;
using clock_type = std::chrono::steady_clock;

namespace {

template <typename F> double timed(F&& f) {
    auto t0 = clock_type::now();
    f();
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void row(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-24s %10.3fs %10.3fs %8.2fx   %s\n", name, serial, parallel,
                serial / parallel, identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run serially\n");
#endif
    std::printf("%-24s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    FundamentalDomain dom(2);

    double area_s = 0.0, area_p = 0.0;
    const int area_n = 4000000;
    double ts = timed([&] { area_s = mc_domain_area(dom, area_n, 7, false); });
    double tp = timed([&] { area_p = mc_domain_area(dom, area_n, 7, true); });
    row("mc_domain_area", ts, tp, area_s == area_p);

    ScalarField Ha(dom, collar_terms("a1"));
    ScalarField Hb(dom, collar_terms("b1"));
    CompositeFlow flow{{&Ha, 1.0}, {&Hb, 1.0}};
    CountingQM qm(parse_word("a1 b1"), 2);

    PsiEstimate es, ep;
    const int psi_n = 400;
    ts = timed([&] { es = estimate_psi_serial(qm, flow, 4, psi_n, 42); });
    tp = timed([&] { ep = estimate_psi(qm, flow, 4, psi_n, 42); });
    row("estimate_psi", ts, tp, es.mean == ep.mean && es.std_error == ep.std_error);

    return 0;
}
