// Compares the OpenMP quadrature kernels against the serial reference
// implementations: wall time, speedup and the worst value mismatch.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mixedvol/brascamp_lieb.hpp"
#include "mixedvol/convex.hpp"
#include "mixedvol/metric.hpp"
#include "mixedvol/monge_ampere.hpp"
#include "mixedvol/parallel.hpp"
#include "mixedvol/potential.hpp"

using namespace mixedvol;

namespace {

double time_ms(const std::function<double()>& f, double* value) {
    const auto t0 = std::chrono::steady_clock::now();
    *value = f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

struct Case {
    std::string name;
    std::function<double()> parallel;
    std::function<double()> serial;
};

}  // namespace

int main() {
    const Potential sq2 = lse_potential(cube(2).vertices());
    const Potential tri2 = lse_potential(simplex(2).vertices());
    const Potential cube3p = lse_potential(cube(3).vertices());
    const QuadratureGrid g2 = QuadratureGrid::tensor(2, 40.0, 401);
    const QuadratureGrid g3 = QuadratureGrid::tensor(3, 40.0, 101);

    DeformationFamily fam;
    fam.phi1 = sq2;
    fam.phi2 = tri2;
    fam.m = 2;
    fam.epsilon = 0.0;

    std::vector<Case> cases;
    cases.push_back({"ma_volume 2d (401^2 nodes)",
                     [&] { return ma_volume(sq2, g2); },
                     [&] { return ma_volume_serial(sq2, g2); }});
    cases.push_back({"ma_volume 3d (101^3 nodes)",
                     [&] { return ma_volume(cube3p, g3); },
                     [&] { return ma_volume_serial(cube3p, g3); }});
    cases.push_back({"f_tt quadrature 2d",
                     [&] { return f_tt_quadrature(fam, 0.5, g2).f_tt; },
                     [&] {
                         // Serial reference: direct per-node integration of the
                         // closed-form G and G_t.
                         const double z = g2.integrate_serial(
                             [&](const Vec& x) { return density(fam, 0.5, x); });
                         const double eg = g2.integrate_serial([&](const Vec& x) {
                             return g_value(fam, 0.5, x) * density(fam, 0.5, x);
                         }) / z;
                         const double gt = g2.integrate_serial([&](const Vec& x) {
                             return g_t_value(fam, 0.5, x) * density(fam, 0.5, x);
                         }) / z;
                         const double g2m = g2.integrate_serial([&](const Vec& x) {
                             const double g = g_value(fam, 0.5, x);
                             return g * g * density(fam, 0.5, x);
                         }) / z;
                         return gt - (g2m - eg * eg);
                     }});

    std::printf("%-28s %12s %12s %9s %12s\n", "kernel", "parallel_ms", "serial_ms", "speedup",
                "max_rel_diff");
    for (const auto& c : cases) {
        double vp = 0.0, vs = 0.0;
        const double tp = time_ms(c.parallel, &vp);
        const double ts = time_ms(c.serial, &vs);
        const double rel = std::abs(vp - vs) / std::max(1e-300, std::abs(vs));
        std::printf("%-28s %12.2f %12.2f %9.2fx %12.3e\n", c.name.c_str(), tp, ts, ts / tp, rel);
    }
    std::printf("threads: %d\n", max_threads());
    return 0;
}
