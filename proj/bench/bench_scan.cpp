// Compares the serial and OpenMP paths of the enumeration kernels on the
// workloads that dominate an analysis run: the exhaustive independence
// certification of a presentation and the class-search behind reduce.

#include <chrono>
#include <cstdio>

#include "pclass/local.hpp"
#include "pclass/par.hpp"
#include "pclass/tower.hpp"

using namespace pclass;

namespace {

double time_once(bool serial, unsigned ell, unsigned p, const char* a) {
    par::force_serial(serial);
    auto t0 = std::chrono::steady_clock::now();
    auto ctx = local::make_K(local::make_base(ell, p), a);
    tower::JPresentation pres = tower::build_J(*ctx);
    tower::CertifiedProfile cp = tower::certify_and_profile(*ctx, pres);
    (void)cp;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    std::printf("%-28s %12s %12s %8s\n", "case", "serial [s]", "openmp [s]", "speedup");
    struct Row {
        unsigned ell, p;
        const char* a;
        const char* name;
    };
    for (const Row& r : {Row{2, 2, "2", "Q_2(sqrt 2), dim 4"},
                         Row{2, 2, "5", "Q_2(sqrt 5), dim 4"},
                         Row{3, 3, "3", "Q_3(z_3, 3^{1/3}), dim 8"},
                         Row{3, 3, "zeta", "Q_3(z_9), dim 8"}}) {
        double ts = time_once(true, r.ell, r.p, r.a);
        double tp = time_once(false, r.ell, r.p, r.a);
        std::printf("%-28s %12.3f %12.3f %7.2fx\n", r.name, ts, tp, ts / tp);
    }
    par::force_serial(false);
    return 0;
}
