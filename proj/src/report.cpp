#include "oscillab/report.hpp"

#include <cstdio>
#include <fstream>

namespace oscillab {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

nlohmann::json to_json(const ConditionCheck& c) {
    return {{"condition", c.condition},
            {"measured", c.measured},
            {"threshold", c.threshold},
            {"verdict", c.verdict},
            {"samples_used", c.samples_used},
            {"samples_skipped", c.samples_skipped},
            {"order_truncation", c.order_truncation},
            {"note", c.note}};
}

nlohmann::json to_json(const PhaseReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"name", r.name},
            {"sample_description", r.sample_description},
            {"checks", checks},
            {"all_verdicts", r.all_verdicts()}};
}

nlohmann::json to_json(const BandReport& r) {
    return {{"p", r.p},
            {"family", r.family},
            {"seed", r.seed},
            {"n_samples", r.n_samples},
            {"js", r.js},
            {"max_ratio", r.max_ratio},
            {"fit_js", r.fit_js},
            {"slope", r.slope},
            {"discarded", r.discarded}};
}

nlohmann::json to_json(const SharpnessProbe& r) {
    return {{"k", r.k},         {"m", r.m},
            {"p", r.p},         {"lambda", r.lambda},
            {"cutoffs", r.cutoffs}, {"ratio", r.ratio},
            {"growth_per_doubling", r.growth_per_doubling}};
}

nlohmann::json to_json(const DispersiveReport& r) {
    return {{"s", r.s},
            {"p", r.p},
            {"q", r.q},
            {"times", r.times},
            {"R_max", r.R_max},
            {"js", r.js},
            {"band_ratio", r.band_ratio},
            {"fit_js", r.fit_js},
            {"band_slope", r.band_slope}};
}

std::string band_report_csv(const BandReport& r) {
    std::string out = "j,ratio,slope\n";
    for (std::size_t i = 0; i < r.js.size(); ++i)
        out += std::to_string(r.js[i]) + "," + num(r.max_ratio[i]) + "," + num(r.slope) + "\n";
    return out;
}

std::string sharpness_csv(const SharpnessProbe& r) {
    std::string out = "J,ratio,growth_from_prev\n";
    for (std::size_t i = 0; i < r.cutoffs.size(); ++i) {
        out += std::to_string(r.cutoffs[i]) + "," + num(r.ratio[i]) + ",";
        out += (i == 0 ? std::string("") : num(r.growth_per_doubling[i - 1]));
        out += "\n";
    }
    return out;
}

std::string dispersive_csv(const DispersiveReport& r) {
    std::string out = "j,ratio,slope\n";
    for (std::size_t i = 0; i < r.js.size(); ++i)
        out += std::to_string(r.js[i]) + "," + num(r.band_ratio[i]) + "," +
               num(r.band_slope) + "\n";
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << content;
}

}  // namespace oscillab
