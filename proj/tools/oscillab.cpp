// oscillab: command-line front end for the oscillatory integral laboratory.
//
// Subcommands: verify-phase, verify-amplitude, bands, sharpness, propagate,
// dispersive, compose, kernel, norm.  A JSON config can seed any flag
// (--config); explicit flags win.  Outputs carry the config hash and the
// artifact version.  Exit codes: 0 ok, 2 config error, 3 numerical guard,
// 4 verdict failure under --assert*.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "oscillab/checks.hpp"
#include "oscillab/experiments.hpp"
#include "oscillab/report.hpp"
#include "oscillab/spaces.hpp"
#include "oscillab/spectral.hpp"

using namespace oscillab;
using nlohmann::json;

namespace {

struct Common {
    std::string config_path;
    std::string outdir = ".";
    int n = 1;
    double L = 64.0;
    int N = 4096;
    int threads = 0;
    json cfg;  // loaded config file (may be empty)
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "JSON config file seeding these flags");
    cmd->add_option("--outdir", c.outdir, "output directory");
    cmd->add_option("--n", c.n, "dimension (1 or 2)");
    cmd->add_option("--L", c.L, "period per axis");
    cmd->add_option("--N", c.N, "samples per axis (power of two)");
    cmd->add_option("--threads", c.threads, "worker threads (0 = library default)");
}

// config file value wins over the default, the explicit flag wins over both
template <class T>
void merge(const CLI::App* cmd, const json& cfg, const char* flag, const char* key, T& var) {
    if (cfg.contains(key) && cmd->get_option(flag)->count() == 0) var = cfg.at(key).get<T>();
}

void finish_common(const CLI::App* cmd, Common& c) {
    if (!c.config_path.empty()) {
        std::ifstream f(c.config_path);
        if (!f) throw CLI::ValidationError("--config", "cannot open " + c.config_path);
        c.cfg = json::parse(f);
    }
    merge(cmd, c.cfg, "--outdir", "outdir", c.outdir);
    merge(cmd, c.cfg, "--n", "n", c.n);
    merge(cmd, c.cfg, "--L", "L", c.L);
    merge(cmd, c.cfg, "--N", "N", c.N);
    merge(cmd, c.cfg, "--threads", "threads", c.threads);

    if (const char* env = std::getenv("OSCILLAB_THREADS"); env && c.threads == 0)
        c.threads = std::atoi(env);
#ifdef _OPENMP
    if (c.threads > 0) omp_set_num_threads(c.threads);
#endif
    std::filesystem::create_directories(c.outdir);
}

json base_report(const Common& c, const std::string& command, const json& params) {
    json cfg = params;
    cfg["command"] = command;
    cfg["n"] = c.n;
    cfg["L"] = c.L;
    cfg["N"] = c.N;
    json rep;
    rep["version"] = kVersion;
    rep["command"] = command;
    rep["config"] = cfg;
    rep["config_hash"] = hash_hex(fnv1a64(cfg.dump()));
    return rep;
}

void write_report(const Common& c, const json& rep) {
    write_text(c.outdir + "/report.json", rep.dump(2) + "\n");
    std::cout << rep.dump(2) << "\n";
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_list(csv)) out.push_back(static_cast<int>(v));
    return out;
}

GridFunction load_or_make_input(const Common& c, const Grid& g, const std::string& input) {
    if (input == "gauss")
        return sample_spatial(g, [](std::array<double, 2> x) {
            double r2 = x[0] * x[0] + x[1] * x[1];
            return std::exp(-r2 / 2);
        });
    if (input.rfind("file:", 0) == 0) {
        GridFunction f = load_gridfunction(input.substr(5));
        if (!(f.grid == g))
            throw std::invalid_argument("input grid does not match --n/--L/--N");
        return f;
    }
    throw CLI::ValidationError("--input", "expected 'gauss' or 'file:<base>'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oscillab: oscillatory integral operators on spectral grids"};
    app.require_subcommand(1);

    // ---- verify-phase ----
    Common vp_c;
    std::string vp_preset = "linear";
    bool vp_snd = false, vp_l2 = false, vp_schro = false, vp_assert = false;
    double vp_fk = 0.0, vp_lf = 0.0, vp_thresh = -1.0;
    int vp_jmax = 6;
    std::uint64_t vp_seed = 1;
    auto* vp = app.add_subcommand("verify-phase", "check phase class membership");
    add_common(vp, vp_c);
    vp->add_option("--preset", vp_preset, "phase preset or expr:<formula>");
    vp->add_flag("--snd", vp_snd, "check strong non-degeneracy");
    vp->add_option("--fk", vp_fk, "check F^k membership for this k");
    vp->add_flag("--l2", vp_l2, "check the L2-condition");
    vp->add_option("--lf", vp_lf, "check LF(mu) for this mu");
    vp->add_flag("--schrodinger", vp_schro, "check the Schrodinger phase bound");
    vp->add_option("--threshold", vp_thresh, "verdict threshold (default: 10x model preset)");
    vp->add_option("--jmax", vp_jmax, "highest dyadic shell in the sample set");
    vp->add_option("--seed", vp_seed, "sample seed");
    vp->add_flag("--assert", vp_assert, "exit 4 when any verdict is false");

    // ---- verify-amplitude ----
    Common va_c;
    std::string va_amp = "one";
    double va_m = 0.0, va_rho = 0.0, va_delta = 0.0, va_thresh = -1.0;
    int va_jmax = 6;
    bool va_assert = false;
    auto* va = app.add_subcommand("verify-amplitude", "check amplitude class membership");
    add_common(va, va_c);
    va->add_option("--amp", va_amp, "amplitude preset or expr:<formula>");
    va->add_option("--m", va_m, "claimed order m");
    va->add_option("--rho", va_rho, "claimed type rho");
    va->add_option("--delta", va_delta, "claimed type delta");
    va->add_option("--threshold", va_thresh, "verdict threshold");
    va->add_option("--jmax", va_jmax, "highest dyadic shell in the sample set");
    va->add_flag("--assert", va_assert, "exit 4 when the verdict is false");

    // ---- bands ----
    Common bd_c;
    std::string bd_phase = "power:2", bd_amp = "one", bd_family = "chirp";
    double bd_p = 2.0, bd_assert_le = INFINITY;
    int bd_jlo = 2, bd_jmax = 7, bd_samples = 8;
    std::uint64_t bd_seed = 1;
    auto* bd = app.add_subcommand("bands", "per-band operator norm ratios and slope");
    add_common(bd, bd_c);
    bd->add_option("--phase", bd_phase, "phase preset");
    bd->add_option("--amp", bd_amp, "amplitude preset");
    bd->add_option("--p", bd_p, "Lebesgue exponent");
    bd->add_option("--jlo", bd_jlo, "lowest band");
    bd->add_option("--jmax", bd_jmax, "highest band");
    bd->add_option("--samples", bd_samples, "samples per band");
    bd->add_option("--seed", bd_seed, "sample seed");
    bd->add_option("--family", bd_family, "random_band | chirp | atom_band");
    bd->add_option("--assert-slope-le", bd_assert_le, "exit 4 when the slope exceeds this");

    // ---- sharpness ----
    Common sh_c;
    double sh_k = 2.0, sh_p = 1.0, sh_m = -1.0, sh_lambda = 0.1, sh_bound = 3.0;
    std::string sh_cutoffs = "4,5,6,7,8";
    bool sh_assert = false;
    auto* sh = app.add_subcommand("sharpness", "Miyachi-type truncation probe");
    add_common(sh, sh_c);
    sh->add_option("--k", sh_k, "phase power k");
    sh->add_option("--p", sh_p, "Lebesgue exponent");
    sh->add_option("--m", sh_m, "amplitude order");
    sh->add_option("--lambda", sh_lambda, "f_lambda decay");
    sh->add_option("--cutoffs", sh_cutoffs, "comma list of dyadic cutoffs J");
    sh->add_option("--bounded-factor", sh_bound, "allowed ratio variation for --assert-bounded");
    sh->add_flag("--assert-bounded", sh_assert, "exit 4 when ratios grow beyond the factor");

    // ---- propagate ----
    Common pr_c;
    std::string pr_preset = "schrodinger", pr_times = "0.25,0.5,1.0", pr_input = "gauss";
    bool pr_dump = false;
    auto* pr = app.add_subcommand("propagate", "evolve initial data under a dispersion preset");
    add_common(pr, pr_c);
    pr->add_option("--preset", pr_preset, "schrodinger|wave|water|capillary|kleingordon|ho");
    pr->add_option("--times", pr_times, "comma list of times");
    pr->add_option("--input", pr_input, "gauss or file:<base>");
    pr->add_flag("--dump", pr_dump, "write u_<idx>.bin/.json snapshots");

    // ---- dispersive ----
    Common dv_c;
    std::string dv_preset = "schrodinger", dv_times = "0.25,0.5,1.0";
    double dv_s = 0.0, dv_p = 2.0, dv_q = 2.0, dv_assert_le = INFINITY;
    int dv_samples = 6, dv_jlo = 3, dv_jhi = 7;
    std::uint64_t dv_seed = 1;
    auto* dv = app.add_subcommand("dispersive", "Besov estimates for the Cauchy problem");
    add_common(dv, dv_c);
    dv->add_option("--preset", dv_preset, "dispersion preset");
    dv->add_option("--s", dv_s, "smoothness s");
    dv->add_option("--p", dv_p, "Lebesgue exponent");
    dv->add_option("--q", dv_q, "summation exponent");
    dv->add_option("--times", dv_times, "comma list of times (|t| <= 1)");
    dv->add_option("--samples", dv_samples, "samples per band");
    dv->add_option("--seed", dv_seed, "sample seed");
    dv->add_option("--jlo", dv_jlo, "lowest band");
    dv->add_option("--jhi", dv_jhi, "highest band");
    dv->add_option("--assert-slope-le", dv_assert_le, "exit 4 when the band slope exceeds this");

    // ---- compose ----
    Common cp_c;
    std::string cp_phase = "power:2", cp_amp = "gauss_x";
    int cp_jlo = 3, cp_jhi = 7;
    auto* cp = app.add_subcommand("compose", "psi(2^-j D) T_a^phi composition remainder rates");
    add_common(cp, cp_c);
    cp->add_option("--phase", cp_phase, "phase preset");
    cp->add_option("--amp", cp_amp, "amplitude preset");
    cp->add_option("--jlo", cp_jlo, "lowest band");
    cp->add_option("--jhi", cp_jhi, "highest band");

    // ---- kernel ----
    Common kn_c;
    std::string kn_phase = "power:2", kn_amp = "cutoff_x:2";
    int kn_j = 3, kn_beta = 0;
    bool kn_lowfreq = false;
    double kn_mu = 1.0, kn_eps = 0.8;
    auto* kn = app.add_subcommand("kernel", "band kernel slices or low-frequency decay");
    add_common(kn, kn_c);
    kn->add_option("--phase", kn_phase, "phase preset");
    kn->add_option("--amp", kn_amp, "amplitude preset");
    kn->add_option("--j", kn_j, "band index");
    kn->add_option("--beta", kn_beta, "y-derivative order (0 or 1)");
    kn->add_flag("--lowfreq", kn_lowfreq, "fit the low-frequency kernel decay instead");
    kn->add_option("--mu", kn_mu, "LF order for the decay fit");
    kn->add_option("--eps", kn_eps, "epsilon in the target n + eps*mu");

    // ---- norm ----
    Common nm_c;
    std::string nm_space = "B:s=0,p=2,q=2", nm_input = "gauss";
    int nm_jmax = -1;
    auto* nm = app.add_subcommand("norm", "compute a function space quasi-norm");
    add_common(nm, nm_c);
    nm->add_option("--space", nm_space, "space spec, e.g. B:s=0.5,p=1,q=2");
    nm->add_option("--input", nm_input, "gauss or file:<base>");
    nm->add_option("--jmax", nm_jmax, "basis bands (-1 = from grid)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (vp->parsed()) {
            finish_common(vp, vp_c);
            merge(vp, vp_c.cfg, "--preset", "preset", vp_preset);
            merge(vp, vp_c.cfg, "--jmax", "jmax", vp_jmax);
            PhaseFunction phi = parse_phase(vp_preset, vp_c.n);
            PhaseReport rep;
            rep.name = phi.name;
            SampleSet hi = sample_highfreq(vp_c.n, vp_jmax, vp_seed);
            SampleSet lo = sample_lowfreq(vp_c.n, vp_seed + 1);
            SampleSet all = sample_full(vp_c.n, vp_jmax, phi.meta.smooth_at_origin, vp_seed + 2);
            rep.sample_description = all.description;
            bool any = vp_snd || vp_fk > 0 || vp_l2 || vp_lf > 0 || vp_schro;
            if (!any) {
                rep = verify_phase(phi, vp_jmax, vp_seed);
            } else {
                if (vp_snd)
                    rep.checks.push_back(check_snd(
                        phi, phi.meta.smooth_at_origin ? all : hi,
                        phi.meta.snd_delta > 0 ? phi.meta.snd_delta : 0.5));
                if (vp_fk > 0) rep.checks.push_back(check_fk(phi, vp_fk, hi, vp_thresh));
                if (vp_l2) rep.checks.push_back(check_l2_condition(phi, hi, vp_thresh));
                if (vp_lf > 0) rep.checks.push_back(check_lf(phi, vp_lf, lo, vp_thresh));
                if (vp_schro)
                    rep.checks.push_back(check_schrodinger_phase(phi, all, vp_thresh));
            }
            json out = base_report(vp_c, "verify-phase", {{"preset", vp_preset},
                                                          {"jmax", vp_jmax},
                                                          {"seed", vp_seed}});
            out["phase_report"] = to_json(rep);
            write_report(vp_c, out);
            if (vp_assert && !rep.all_verdicts()) return 4;
            return 0;
        }
        if (va->parsed()) {
            finish_common(va, va_c);
            Amplitude a = parse_amplitude(va_amp, va_c.n);
            SampleSet hi = sample_highfreq(va_c.n, va_jmax);
            auto chk = check_amplitude_class(a, va_m, va_rho, va_delta, hi, va_thresh);
            json out = base_report(va_c, "verify-amplitude",
                                   {{"amp", va_amp}, {"m", va_m}, {"rho", va_rho},
                                    {"delta", va_delta}, {"jmax", va_jmax}});
            out["check"] = to_json(chk);
            write_report(va_c, out);
            if (va_assert && !chk.verdict) return 4;
            return 0;
        }
        if (bd->parsed()) {
            finish_common(bd, bd_c);
            merge(bd, bd_c.cfg, "--phase", "phase", bd_phase);
            merge(bd, bd_c.cfg, "--amp", "amp", bd_amp);
            merge(bd, bd_c.cfg, "--p", "p", bd_p);
            merge(bd, bd_c.cfg, "--jlo", "jlo", bd_jlo);
            merge(bd, bd_c.cfg, "--jmax", "jmax", bd_jmax);
            merge(bd, bd_c.cfg, "--samples", "samples", bd_samples);
            merge(bd, bd_c.cfg, "--seed", "seed", bd_seed);
            merge(bd, bd_c.cfg, "--family", "family", bd_family);
            Grid g(bd_c.n, bd_c.L, bd_c.N);
            OioSpec spec{parse_phase(bd_phase, bd_c.n), parse_amplitude(bd_amp, bd_c.n), g};
            auto rep = estimate_band_norms(spec, bd_p, bd_jlo, bd_jmax, bd_samples, bd_seed,
                                           parse_band_family(bd_family));
            json out = base_report(bd_c, "bands",
                                   {{"phase", bd_phase}, {"amp", bd_amp}, {"p", bd_p},
                                    {"jlo", bd_jlo}, {"jmax", bd_jmax},
                                    {"samples", bd_samples}, {"seed", bd_seed},
                                    {"family", bd_family}});
            out["band_report"] = to_json(rep);
            write_text(bd_c.outdir + "/bands.csv", band_report_csv(rep));
            write_report(bd_c, out);
            if (rep.slope > bd_assert_le) return 4;
            return 0;
        }
        if (sh->parsed()) {
            finish_common(sh, sh_c);
            Grid g(sh_c.n, sh_c.L, sh_c.N);
            auto pro = sharpness_probe(sh_k, sh_m, sh_p, sh_lambda,
                                       parse_int_list(sh_cutoffs), g);
            json out = base_report(sh_c, "sharpness",
                                   {{"k", sh_k}, {"p", sh_p}, {"m", sh_m},
                                    {"lambda", sh_lambda}, {"cutoffs", sh_cutoffs}});
            out["sharpness"] = to_json(pro);
            double vmax = *std::max_element(pro.ratio.begin(), pro.ratio.end());
            double vmin = *std::min_element(pro.ratio.begin(), pro.ratio.end());
            bool bounded = (vmax <= sh_bound * vmin);
            out["bounded_within_factor"] = sh_bound;
            out["bounded"] = bounded;
            write_text(sh_c.outdir + "/sharpness.csv", sharpness_csv(pro));
            write_report(sh_c, out);
            if (sh_assert && !bounded) return 4;
            return 0;
        }
        if (pr->parsed()) {
            finish_common(pr, pr_c);
            Grid g(pr_c.n, pr_c.L, pr_c.N);
            auto preset = parse_propagator(pr_preset, pr_c.n);
            GridFunction f0 = load_or_make_input(pr_c, g, pr_input);
            auto times = parse_list(pr_times);
            auto us = propagate(preset, f0, times);
            json out = base_report(pr_c, "propagate",
                                   {{"preset", pr_preset}, {"times", pr_times},
                                    {"input", pr_input}});
            json norms = json::array();
            for (std::size_t i = 0; i < us.size(); ++i) {
                norms.push_back({{"t", times[i]},
                                 {"l2", lp_norm(us[i], 2.0)},
                                 {"linf", lp_norm(us[i], INFINITY)}});
                if (pr_dump)
                    save_gridfunction(us[i], pr_c.outdir + "/u_" + std::to_string(i));
            }
            out["norms"] = norms;
            write_report(pr_c, out);
            return 0;
        }
        if (dv->parsed()) {
            finish_common(dv, dv_c);
            Grid g(dv_c.n, dv_c.L, dv_c.N);
            auto preset = parse_propagator(dv_preset, dv_c.n);
            auto rep = dispersive_estimate_report(preset, dv_s, dv_p, dv_q,
                                                  parse_list(dv_times), dv_samples, dv_seed,
                                                  g, dv_jlo, dv_jhi);
            json out = base_report(dv_c, "dispersive",
                                   {{"preset", dv_preset}, {"s", dv_s}, {"p", dv_p},
                                    {"q", dv_q}, {"times", dv_times},
                                    {"samples", dv_samples}, {"seed", dv_seed},
                                    {"jlo", dv_jlo}, {"jhi", dv_jhi}});
            out["dispersive"] = to_json(rep);
            write_text(dv_c.outdir + "/bands.csv", dispersive_csv(rep));
            write_report(dv_c, out);
            if (rep.band_slope > dv_assert_le) return 4;
            return 0;
        }
        if (cp->parsed()) {
            finish_common(cp, cp_c);
            Grid g(cp_c.n, cp_c.L, cp_c.N);
            OioSpec spec{parse_phase(cp_phase, cp_c.n), parse_amplitude(cp_amp, cp_c.n), g};
            LPBasis basis(cp_jhi, g);
            auto bump = [](std::array<double, 2> xi) {
                return LPBasis::psi_j_at(1, xi, 1);
            };
            json rows = json::array();
            std::vector<double> js, lr;
            for (int j = cp_jlo; j <= cp_jhi; ++j) {
                auto r = compose_pseudo(bump, std::ldexp(1.0, -j), spec, j, basis);
                rows.push_back({{"j", j},
                                {"sup_sigma", r.sup_sigma},
                                {"sup_leading", r.sup_leading},
                                {"sup_remainder", r.sup_remainder}});
                if (r.sup_leading > 0 && r.sup_remainder > 0) {
                    js.push_back(j);
                    lr.push_back(std::log2(r.sup_remainder / r.sup_leading));
                }
            }
            json out = base_report(cp_c, "compose",
                                   {{"phase", cp_phase}, {"amp", cp_amp},
                                    {"jlo", cp_jlo}, {"jhi", cp_jhi}});
            out["bands"] = rows;
            out["remainder_rate"] = (js.size() >= 2) ? fit_slope(js, lr) : 0.0;
            write_report(cp_c, out);
            return 0;
        }
        if (kn->parsed()) {
            finish_common(kn, kn_c);
            Grid g(kn_c.n, kn_c.L, kn_c.N);
            if (kn_lowfreq) {
                auto parts = frequency_split(parse_amplitude(kn_amp, kn_c.n), 2.0);
                OioSpec spec{parse_phase(kn_phase, kn_c.n), parts[0], g};
                auto fit = lowfreq_kernel_decay(spec, kn_mu, kn_eps);
                json out = base_report(kn_c, "kernel-lowfreq",
                                       {{"phase", kn_phase}, {"amp", kn_amp},
                                        {"mu", kn_mu}, {"eps", kn_eps}});
                out["exponent"] = fit.exponent;
                out["target"] = kn_c.n + kn_eps * kn_mu - 0.2;
                out["fit_window"] = {fit.fit_lo, fit.fit_hi};
                out["noise_clipped"] = fit.noise_clipped;
                write_report(kn_c, out);
                return 0;
            }
            LPBasis basis(std::max(kn_j, 1), g);
            OioSpec spec{parse_phase(kn_phase, kn_c.n), parse_amplitude(kn_amp, kn_c.n), g};
            auto ks = kernel_slice(spec, kn_j, {kn_beta, 0}, basis);
            export_kernel_csv(ks, g, kn_c.outdir + "/kernel.csv");
            json out = base_report(kn_c, "kernel",
                                   {{"phase", kn_phase}, {"amp", kn_amp},
                                    {"j", kn_j}, {"beta", kn_beta}});
            out["sup_abs"] = ks.sup_abs;
            out["normalized_const"] = ks.normalized_const;
            write_report(kn_c, out);
            return 0;
        }
        if (nm->parsed()) {
            finish_common(nm, nm_c);
            Grid g(nm_c.n, nm_c.L, nm_c.N);
            GridFunction f = load_or_make_input(nm_c, g, nm_input);
            int jmax = nm_jmax;
            if (jmax < 0)
                jmax = static_cast<int>(std::floor(std::log2(g.xi_max_axis()))) - 1;
            LPBasis basis(jmax, g);
            SpaceSpec sp = parse_space_spec(nm_space);
            double val = space_norm(f, sp, basis);
            json out = base_report(nm_c, "norm",
                                   {{"space", nm_space}, {"input", nm_input}, {"jmax", jmax}});
            out["norm"] = val;
            write_report(nm_c, out);
            export_abs_csv(f, nm_c.outdir + "/profile.csv");
            return 0;
        }
    } catch (const std::domain_error& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
