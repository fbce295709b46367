#include "oscillab/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace oscillab {

static bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

Grid::Grid(int n_, double L_, int N_) : n(n_), L(L_), N(N_) {
    if (n != 1 && n != 2) throw std::invalid_argument("Grid: dimension must be 1 or 2");
    if (!(L > 0) || !std::isfinite(L)) throw std::invalid_argument("Grid: period L must be positive");
    if (!is_pow2(N) || N < 8) throw std::invalid_argument("Grid: N must be a power of two, N >= 8");
}

std::size_t Grid::total() const {
    std::size_t t = 1;
    for (int a = 0; a < n; ++a) t *= static_cast<std::size_t>(N);
    return t;
}

std::size_t Grid::flat(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int a = 0; a < n; ++a) f = f * N + static_cast<std::size_t>(idx[a]);
    return f;
}

std::array<int, 2> Grid::unflat(std::size_t f) const {
    std::array<int, 2> idx{0, 0};
    if (n == 1) {
        idx[0] = static_cast<int>(f);
    } else {
        idx[0] = static_cast<int>(f / N);
        idx[1] = static_cast<int>(f % N);
    }
    return idx;
}

std::array<double, 2> Grid::x_node(std::size_t f) const {
    auto idx = unflat(f);
    std::array<double, 2> x{0.0, 0.0};
    for (int a = 0; a < n; ++a) x[a] = x_axis(idx[a]);
    return x;
}

std::array<double, 2> Grid::xi_node(std::size_t f) const {
    auto idx = unflat(f);
    std::array<double, 2> xi{0.0, 0.0};
    for (int a = 0; a < n; ++a) xi[a] = xi_axis(idx[a]);
    return xi;
}

bool GridFunction::all_finite() const {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

void GridFunction::require_finite(const std::string& what) const {
    if (!all_finite())
        throw std::domain_error("non-finite values in " + what);
}

void save_gridfunction(const GridFunction& f, const std::string& base) {
    std::ofstream bin(base + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open " + base + ".bin for writing");
    static_assert(sizeof(cplx) == 16, "complex<double> layout");
    bin.write(reinterpret_cast<const char*>(f.v.data()),
              static_cast<std::streamsize>(f.v.size() * sizeof(cplx)));

    nlohmann::json side;
    side["n"] = f.grid.n;
    side["L"] = f.grid.L;
    side["N"] = f.grid.N;
    side["flag"] = (f.domain == Domain::Spatial) ? "spatial" : "spectral";
    std::ofstream js(base + ".json");
    js << side.dump(2) << "\n";
}

GridFunction load_gridfunction(const std::string& base) {
    std::ifstream js(base + ".json");
    if (!js) throw std::runtime_error("cannot open " + base + ".json");
    nlohmann::json side = nlohmann::json::parse(js);
    Grid g(side.at("n").get<int>(), side.at("L").get<double>(), side.at("N").get<int>());
    std::string flag = side.at("flag").get<std::string>();
    GridFunction f(g, flag == "spectral" ? Domain::Spectral : Domain::Spatial);

    std::ifstream bin(base + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open " + base + ".bin");
    bin.read(reinterpret_cast<char*>(f.v.data()),
             static_cast<std::streamsize>(f.v.size() * sizeof(cplx)));
    if (static_cast<std::size_t>(bin.gcount()) != f.v.size() * sizeof(cplx))
        throw std::runtime_error("short read from " + base + ".bin");
    return f;
}

void export_abs_csv(const GridFunction& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path);
    const bool spatial = (f.domain == Domain::Spatial);
    if (f.grid.n == 1)
        std::fprintf(fp, spatial ? "x,abs\n" : "xi,abs\n");
    else
        std::fprintf(fp, spatial ? "x1,x2,abs\n" : "xi1,xi2,abs\n");
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto c = spatial ? f.grid.x_node(i) : f.grid.xi_node(i);
        if (f.grid.n == 1)
            std::fprintf(fp, "%.17g,%.17g\n", c[0], std::abs(f.v[i]));
        else
            std::fprintf(fp, "%.17g,%.17g,%.17g\n", c[0], c[1], std::abs(f.v[i]));
    }
    std::fclose(fp);
}

}  // namespace oscillab
