// Benchmark: serial reference quadrature vs the OpenMP row-parallel kernel
// (and the FFT multiplier fast path where the operator separates).  The
// parallel path must reproduce the serial result bit for bit.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oscillab/oio.hpp"
#include "oscillab/spectral.hpp"

using namespace oscillab;
using clk = std::chrono::steady_clock;

namespace {

GridFunction random_band(const Grid& g, double hi, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    GridFunction F(g, Domain::Spectral);
    for (std::size_t i = 0; i < F.size(); ++i) {
        auto xi = g.xi_node(i);
        double r = (g.n == 1) ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
        if (r <= hi) F.v[i] = cplx(u(eng), u(eng));
    }
    return inverse_transform(F);
}

double max_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

template <class F>
double time_ms(F&& fn) {
    auto t0 = clk::now();
    fn();
    auto t1 = clk::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled\n");
#endif
    std::printf("%-26s %8s %12s %12s %9s %10s\n", "case", "N", "serial[ms]", "parallel[ms]",
                "speedup", "max|diff|");

    for (int N : {1024, 2048, 4096}) {
        Grid g(1, 32.0, N);
        OioSpec spec{parse_phase("fujiwara1d:1.5", 1), parse_amplitude("sxsxi:0.1", 1), g};
        auto f = random_band(g, g.xi_max_axis() / 2, 42);
        GridFunction us, up;
        double ts = time_ms([&] { us = apply_oio_reference(spec, f); });
        double tp = time_ms([&] { up = apply_oio(spec, f, Exec::Parallel); });
        std::printf("%-26s %8d %12.1f %12.1f %8.2fx %10.2e\n", "oio 1d x-dependent", N, ts,
                    tp, ts / tp, max_diff(us, up));
    }
    {
        Grid g(2, 8.0, 48);
        OioSpec spec{parse_phase("kg:0.1", 2), parse_amplitude("gauss_x", 2), g};
        auto f = random_band(g, g.xi_max_axis() / 2, 7);
        GridFunction us, up;
        double ts = time_ms([&] { us = apply_oio_reference(spec, f); });
        double tp = time_ms([&] { up = apply_oio(spec, f, Exec::Parallel); });
        std::printf("%-26s %8d %12.1f %12.1f %8.2fx %10.2e\n", "oio 2d x-dependent", 48, ts,
                    tp, ts / tp, max_diff(us, up));
    }
    {
        Grid g(1, 64.0, 16384);
        OioSpec spec{parse_phase("power:2", 1), parse_amplitude("bessel:-1", 1), g};
        auto f = random_band(g, g.xi_max_axis() / 2, 3);
        GridFunction uq, um;
        double tq = time_ms([&] { uq = apply_oio(spec, f, Exec::Parallel); });
        double tm = time_ms([&] { um = apply_oio(spec, f, Exec::Auto); });
        std::printf("%-26s %8d %12.1f %12.1f %8.2fx %10.2e\n", "multiplier fast path", 16384,
                    tq, tm, tq / tm, max_diff(uq, um));
    }
    {
        Grid g(1, 32.0, 2048);
        OioSpec spec{parse_phase("ho:0.3", 1), parse_amplitude("one", 1), g};
        auto f = random_band(g, 10.0, 9);
        GridFunction us, up;
        double ts = time_ms([&] { us = apply_adjoint(spec, f, Exec::Serial); });
        double tp = time_ms([&] { up = apply_adjoint(spec, f, Exec::Parallel); });
        std::printf("%-26s %8d %12.1f %12.1f %8.2fx %10.2e\n", "adjoint 1d", 2048, ts, tp,
                    ts / tp, max_diff(us, up));
    }
    return 0;
}
