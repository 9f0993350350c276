// toepspec: banded Toeplitz spectra under random perturbation.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "toepspec/expansion.hpp"
#include "toepspec/harness.hpp"
#include "toepspec/io.hpp"
#include "toepspec/noise.hpp"
#include "toepspec/parallel.hpp"
#include "toepspec/rng.hpp"
#include "toepspec/stats.hpp"
#include "toepspec/validate.hpp"

namespace fs = std::filesystem;
using namespace toepspec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssert = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config_path;
    std::string symbol;
    std::string rect;
    std::size_t res = 0;
    std::optional<std::uint64_t> seed;
    std::string format;
    bool svg = false;
    std::string out;
    bool dry_run = false;
    std::vector<std::string> sets;
    // logpot / replace / expand
    std::vector<std::string> z;
    std::string against = "rademacher";
};

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": cannot parse '" + item + "'");
        }
    }
    if (out.size() != expected) {
        throw ConfigError(std::string(what) + ": expected " + std::to_string(expected) +
                          " comma-separated numbers");
    }
    return out;
}

/// "re" or "re,im".
Complex parse_point(const std::string& text) {
    const bool has_imag = text.find(',') != std::string::npos;
    const auto v = parse_numbers(text, has_imag ? 2 : 1, "--z");
    return {v[0], has_imag ? v[1] : 0.0};
}

// value is JSON when it parses as JSON, otherwise a plain string.
void apply_set(nlohmann::json& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set expects dotted.path=value, got '" + assignment + "'");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
    if (value.is_discarded()) {
        value = raw;
    }
    nlohmann::json* node = &root;
    std::stringstream ss(path);
    std::string key;
    std::vector<std::string> keys;
    while (std::getline(ss, key, '.')) {
        keys.push_back(key);
    }
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        if (!node->is_object() && !node->is_null()) {
            throw ConfigError("--set: '" + keys[i] + "' is not an object");
        }
        node = &(*node)[keys[i]];
    }
    if (!node->is_object() && !node->is_null()) {
        throw ConfigError("--set: cannot assign into a non-object");
    }
    (*node)[keys.back()] = value;
}

nlohmann::json load_config_json(const Options& o) {
    nlohmann::json j = nlohmann::json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) {
            throw ConfigError("cannot open config '" + o.config_path + "'");
        }
        j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded()) {
            throw ConfigError("config '" + o.config_path + "' is not valid JSON");
        }
    }
    if (!o.symbol.empty()) {
        const auto s = nlohmann::json::parse(o.symbol, nullptr, false);
        if (s.is_discarded()) {
            throw ConfigError("--symbol is not valid JSON");
        }
        j["symbol"] = s;
    }
    if (o.seed) {
        j["seed"] = *o.seed;
    }
    if (!o.rect.empty()) {
        j["z_grid"] = {{"rect", parse_numbers(o.rect, 4, "--rect")}};
    }
    if (o.res != 0) {
        if (!j.contains("z_grid") || !j["z_grid"].contains("rect")) {
            throw ConfigError("--res needs a rectangular z_grid");
        }
        j["z_grid"]["resolution"] = o.res;
    }
    if (!o.format.empty()) {
        j["outputs"]["format"] = o.format;
    }
    if (o.svg) {
        j["outputs"]["svg"] = true;
    }
    if (!o.out.empty()) {
        j["outputs"]["dir"] = o.out;
    }
    for (const auto& s : o.sets) {
        apply_set(j, s);
    }
    return j;
}

ExperimentConfig load_config(const Options& o) {
    const nlohmann::json j = load_config_json(o);
    try {
        return ExperimentConfig::from_json(j);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::ofstream open_output(const ExperimentConfig& c, const std::string& name) {
    fs::create_directories(c.outputs.dir);
    const fs::path path = fs::path(c.outputs.dir) / name;
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    std::cout << "wrote " << path.string() << '\n';
    return out;
}

void print_plan(const std::string& command, const ExperimentConfig& c, std::size_t cells) {
    std::cout << "command: " << command << '\n'
              << "config_hash: " << config_hash(c) << '\n'
              << "cells: " << cells << '\n'
              << "threads: " << thread_count() << '\n'
              << "config: " << c.to_json().dump() << '\n';
}

std::vector<Complex> z_points(const ExperimentConfig& c, const Options& o) {
    if (!o.z.empty()) {
        std::vector<Complex> pts;
        for (const auto& text : o.z) {
            pts.push_back(parse_point(text));
        }
        return pts;
    }
    auto pts = c.z_grid.nodes();
    if (pts.empty()) {
        throw ConfigError("no z points: give --z or z_grid.points");
    }
    return pts;
}

int cmd_spectrum(const Options& o) {
    const ExperimentConfig c = load_config(o);
    if (o.dry_run) {
        print_plan("spectrum", c, c.sizes.size() * c.trials);
        return kExitOk;
    }
    const EsdArtifact art = run_esd(c);
    for (const auto& s : art.sizes) {
        std::cout << "N=" << s.n << " median_energy=" << s.median_energy
                  << " failures=" << s.failures << '\n';
    }
    if (c.outputs.format == "jsonl") {
        auto out = open_output(c, "spectrum.jsonl");
        write_esd_jsonl(out, art);
    } else {
        auto out = open_output(c, "spectrum.csv");
        write_esd_csv(out, art);
    }
    if (c.outputs.svg) {
        auto out = open_output(c, "spectrum.svg");
        write_esd_svg(out, art);
    }
    return kExitOk;
}

int cmd_regions(const Options& o) {
    ExperimentConfig c = load_config(o);
    if (!c.z_grid.rect) {
        throw ConfigError("regions needs a rectangle (--rect or z_grid.rect)");
    }
    if (o.dry_run) {
        print_plan("regions", c, c.z_grid.resolution * c.z_grid.resolution);
        return kExitOk;
    }
    const RegionMap map = run_region_map(c.symbol, *c.z_grid.rect, c.z_grid.resolution);
    std::size_t boundary = 0;
    for (const auto& l : map.labels) {
        boundary += l.is_boundary() ? 1 : 0;
    }
    std::cout << "nodes=" << map.labels.size() << " boundary=" << boundary << '\n';
    {
        auto out = open_output(c, "regions.csv");
        write_region_csv(out, map);
    }
    {
        auto out = open_output(c, "regions.svg");
        write_region_svg(out, map, c.symbol.degree());
    }
    return kExitOk;
}

int cmd_logpot(const Options& o) {
    const ExperimentConfig c = load_config(o);
    const auto zs = z_points(c, o);
    for (const auto& z : zs) {
        if (classify_region(c.symbol, z).is_boundary()) {
            std::ostringstream msg;
            msg << "--z " << z.real() << ',' << z.imag() << " lies on the symbol curve (BOUNDARY)";
            throw ConfigError(msg.str());
        }
    }
    if (o.dry_run) {
        print_plan("logpot", c, zs.size() * c.sizes.size() * c.trials);
        return kExitOk;
    }
    const LogpotTable table = run_logpot(c, zs);
    for (const auto& s : table.summaries) {
        std::cout << "z=" << s.z.real() << (s.z.imag() < 0 ? "" : "+") << s.z.imag() << "i N=" << s.n
                  << " median=" << s.median << " limit=" << s.limit
                  << " gap=" << std::abs(s.median - s.limit) << '\n';
    }
    if (c.outputs.format == "jsonl") {
        auto out = open_output(c, "logpot.jsonl");
        write_logpot_jsonl(out, table);
    } else {
        auto out = open_output(c, "logpot.csv");
        write_logpot_csv(out, table);
    }
    return kExitOk;
}

Complex single_point(const ExperimentConfig& c, const Options& o, const char* command) {
    const auto pts = z_points(c, o);
    if (pts.size() != 1) {
        throw ConfigError(std::string(command) + ": expects exactly one z point");
    }
    return pts.front();
}

int cmd_replace(const Options& o) {
    const ExperimentConfig c = load_config(o);
    const Complex z = single_point(c, o, "replace");
    NoiseModel other;
    try {
        const auto j = nlohmann::json::parse(o.against, nullptr, false);
        other = j.is_object() ? NoiseModel::from_json(j) : NoiseModel{noise_kind_from_string(o.against)};
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--against: ") + e.what());
    }
    other.gamma = c.gamma;
    NoiseModel base = c.noise;
    base.gamma = c.gamma;
    const std::size_t n = c.sizes.back();
    if (o.dry_run) {
        print_plan("replace", c, 2 * c.trials);
        return kExitOk;
    }
    const ReplacementRecord rec = run_replacement(c.symbol, z, n, base, other, c.trials, c.seed);
    std::cout << "z=" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i N=" << n
              << " ks=" << rec.ks << " stieltjes_bound=" << (rec.bound_holds ? "holds" : "VIOLATED")
              << '\n';
    if (c.outputs.format == "jsonl") {
        auto out = open_output(c, "replace.jsonl");
        write_replacement_jsonl(out, rec);
    } else {
        auto out = open_output(c, "replace.csv");
        write_replacement_csv(out, rec);
    }
    return rec.bound_holds ? kExitOk : kExitAssert;
}

int cmd_expand(const Options& o) {
    const ExperimentConfig c = load_config(o);
    const Complex z = single_point(c, o, "expand");
    const double gamma_star = c.noise.kind == NoiseKind::CornerDelta
                                  ? c.noise.gamma_star
                                  : static_cast<double>(c.symbol.degree() + 1);
    for (const auto n : c.sizes) {
        if (n > kCornerPkMaxN) {
            throw ConfigError("expand: sizes must not exceed 60");
        }
    }
    if (o.dry_run) {
        print_plan("expand", c, c.sizes.size() * c.trials);
        return kExitOk;
    }
    std::vector<DominanceReport> reports;
    std::vector<std::size_t> sizes;
    for (const auto n : c.sizes) {
        for (std::size_t t = 0; t < c.trials; ++t) {
            const ComplexMatrix delta = corner_delta(c.symbol, n, gamma_star,
                                                     derive_seed(c.seed, n, t),
                                                     c.noise.transpose_support);
            reports.push_back(dominance_report(c.symbol, z, delta));
            sizes.push_back(n);
        }
        const auto first = reports.end() - static_cast<std::ptrdiff_t>(c.trials);
        std::vector<double> above;
        std::vector<double> pd;
        for (auto it = first; it != reports.end(); ++it) {
            above.push_back(it->ratio_above);
            pd.push_back(it->normalized_pd);
        }
        std::cout << "z=" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i N=" << n
                  << " defect=" << first->defect << " median_ratio_above=" << median(above)
                  << " median_normalized_Pd=" << median(pd) << '\n';
    }
    auto out = open_output(c, "expand.csv");
    write_dominance_csv(out, reports, sizes);
    return kExitOk;
}

int cmd_validate(const Options& o) {
    const auto results = run_validation(o.seed.value_or(1));
    bool ok = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        ok = ok && r.passed;
    }
    return ok ? kExitOk : kExitAssert;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config_path, "Experiment config (JSON)");
    sub->add_option("--symbol", o.symbol, "Symbol as JSON {\"d1\",\"d2\",\"coeffs\"}");
    sub->add_option("--rect", o.rect, "re_min,re_max,im_min,im_max");
    sub->add_option("--res", o.res, "Grid resolution per axis");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_flag("--svg", o.svg, "Also write SVG plots");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_flag("--dry-run", o.dry_run, "Validate the config and print the plan");
    sub->add_option("--set", o.sets, "Override a config field: dotted.path=value");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Banded Toeplitz spectra under small random perturbations"};
    app.require_subcommand(1);
    Options o;

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalue clouds and energy distance to mu_a");
    auto* regions = app.add_subcommand("regions", "Region map of root counts");
    auto* logpot = app.add_subcommand("logpot", "Log-potential at fixed z");
    auto* replace = app.add_subcommand("replace", "Singular-value comparison of two noise models");
    auto* expand = app.add_subcommand("expand", "Corner-perturbation determinant expansion");
    auto* validate = app.add_subcommand("validate", "Run the oracle suite");
    for (auto* sub : {spectrum, regions, logpot, replace, expand}) {
        add_common(sub, o);
    }
    logpot->add_option("--z", o.z, "Point re or re,im; repeatable");
    for (auto* sub : {replace, expand}) {
        sub->add_option("--z", o.z, "Point re or re,im; give one");
    }
    replace->add_option("--against", o.against, "Second noise model: kind name or JSON");
    validate->add_option("--seed", o.seed, "Seed for randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*spectrum) return cmd_spectrum(o);
        if (*regions) return cmd_regions(o);
        if (*logpot) return cmd_logpot(o);
        if (*replace) return cmd_replace(o);
        if (*expand) return cmd_expand(o);
        if (*validate) return cmd_validate(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAssert;
    }
    return kExitConfig;
}
