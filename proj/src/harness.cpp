#include "toepspec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "toepspec/linalg.hpp"
#include "toepspec/parallel.hpp"
#include "toepspec/rng.hpp"
#include "toepspec/stats.hpp"
#include "toepspec/toeplitz.hpp"

namespace toepspec {

namespace {

constexpr std::uint64_t kMuStream = 0x6d75;
constexpr std::array<double, 3> kXiImag{0.5, 1.0, 2.0};
constexpr std::size_t kXiReal = 21;

Complex point_from_json(const nlohmann::json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument("config: a point must be [re, im] or a number");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                    const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw std::invalid_argument(where + ": unknown field '" + key + "'");
        }
    }
}

template <typename T>
T get_field(const nlohmann::json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(where + "." + key + ": " + e.what());
    }
}

NoiseModel with_gamma(NoiseModel model, double gamma) {
    model.gamma = gamma;
    return model;
}

}  // namespace

std::vector<Complex> ZGrid::nodes() const {
    if (!rect) {
        return points;
    }
    const auto& r = *rect;
    std::vector<Complex> out;
    out.reserve(resolution * resolution);
    const double step_re = (r[1] - r[0]) / static_cast<double>(resolution - 1);
    const double step_im = (r[3] - r[2]) / static_cast<double>(resolution - 1);
    for (std::size_t row = 0; row < resolution; ++row) {
        const double im = r[3] - step_im * static_cast<double>(row);
        for (std::size_t col = 0; col < resolution; ++col) {
            out.emplace_back(r[0] + step_re * static_cast<double>(col), im);
        }
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (!(gamma > 0.5) || !std::isfinite(gamma)) {
        throw std::invalid_argument("config: gamma must exceed 1/2");
    }
    if (sizes.empty()) {
        throw std::invalid_argument("config: sizes must be nonempty");
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0 || (i > 0 && sizes[i] <= sizes[i - 1])) {
            throw std::invalid_argument("config: sizes must be positive and strictly ascending");
        }
    }
    if (trials == 0) {
        throw std::invalid_argument("config: trials must be >= 1");
    }
    if (mu_samples == 0) {
        throw std::invalid_argument("config: mu_samples must be >= 1");
    }
    noise.validate();
    if (noise.kind == NoiseKind::CornerDelta && noise.gamma_star <= symbol.degree()) {
        throw std::invalid_argument("config: noise.gamma_star must exceed d");
    }
    if (z_grid.rect) {
        const auto& r = *z_grid.rect;
        if (!(r[0] < r[1]) || !(r[2] < r[3])) {
            throw std::invalid_argument("config: z_grid.rect needs re_min < re_max, im_min < im_max");
        }
        if (z_grid.resolution < 2) {
            throw std::invalid_argument("config: z_grid.resolution must be >= 2");
        }
    }
    if (outputs.format != "csv" && outputs.format != "jsonl") {
        throw std::invalid_argument("config: outputs.format must be csv or jsonl");
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json grid = nlohmann::json::object();
    if (z_grid.rect) {
        grid["rect"] = *z_grid.rect;
        grid["resolution"] = z_grid.resolution;
    } else {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : z_grid.points) {
            pts.push_back({p.real(), p.imag()});
        }
        grid["points"] = pts;
    }
    return {
        {"symbol", symbol.to_json()},
        {"sizes", sizes},
        {"gamma", gamma},
        {"noise", with_gamma(noise, gamma).to_json()},
        {"trials", trials},
        {"z_grid", grid},
        {"mu_samples", mu_samples},
        {"seed", seed},
        {"outputs", {{"dir", outputs.dir}, {"format", outputs.format}, {"svg", outputs.svg}}},
    };
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("config: expected a JSON object");
    }
    reject_unknown(j,
                   {"symbol", "sizes", "gamma", "noise", "trials", "z_grid", "mu_samples", "seed",
                    "outputs"},
                   "config");
    if (!j.contains("symbol")) {
        throw std::invalid_argument("config: missing field 'symbol'");
    }
    ExperimentConfig c;
    c.symbol = Symbol::from_json(j.at("symbol"));
    if (j.contains("noise")) {
        c.noise = NoiseModel::from_json(j.at("noise"));
        c.gamma = c.noise.gamma;
    }
    if (j.contains("gamma")) {
        c.gamma = get_field<double>(j, "gamma", "config");
    }
    c.noise.gamma = c.gamma;
    if (j.contains("sizes")) {
        c.sizes = get_field<std::vector<std::size_t>>(j, "sizes", "config");
    }
    if (j.contains("trials")) {
        c.trials = get_field<std::size_t>(j, "trials", "config");
    }
    if (j.contains("mu_samples")) {
        c.mu_samples = get_field<std::size_t>(j, "mu_samples", "config");
    }
    if (j.contains("seed")) {
        c.seed = get_field<std::uint64_t>(j, "seed", "config");
    }
    if (j.contains("z_grid")) {
        const auto& g = j.at("z_grid");
        if (!g.is_object()) {
            throw std::invalid_argument("config.z_grid: expected an object");
        }
        reject_unknown(g, {"rect", "resolution", "points"}, "config.z_grid");
        if (g.contains("rect") == g.contains("points")) {
            throw std::invalid_argument("config.z_grid: give exactly one of rect or points");
        }
        if (g.contains("rect")) {
            c.z_grid.rect = get_field<Rect>(g, "rect", "config.z_grid");
            c.z_grid.resolution = g.contains("resolution")
                                      ? get_field<std::size_t>(g, "resolution", "config.z_grid")
                                      : 100;
        } else {
            const auto& pts = g.at("points");
            if (!pts.is_array()) {
                throw std::invalid_argument("config.z_grid.points: expected an array");
            }
            for (const auto& p : pts) {
                c.z_grid.points.push_back(point_from_json(p));
            }
        }
    }
    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        if (!o.is_object()) {
            throw std::invalid_argument("config.outputs: expected an object");
        }
        reject_unknown(o, {"dir", "format", "svg"}, "config.outputs");
        if (o.contains("dir")) {
            c.outputs.dir = get_field<std::string>(o, "dir", "config.outputs");
        }
        if (o.contains("format")) {
            c.outputs.format = get_field<std::string>(o, "format", "config.outputs");
        }
        if (o.contains("svg")) {
            c.outputs.svg = get_field<bool>(o, "svg", "config.outputs");
        }
    }
    c.validate();
    return c;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    nlohmann::json j = config.to_json();
    j.erase("outputs");
    for (const unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

EsdArtifact run_esd(const ExperimentConfig& config) {
    config.validate();
    EsdArtifact art;
    art.config_hash = config_hash(config);
    art.mu = sample_mu_a(config.symbol, config.mu_samples, derive_seed(config.seed, kMuStream));
    const double mu_self = mean_abs_diff(art.mu.points, art.mu.points);
    const NoiseModel model = with_gamma(config.noise, config.gamma);

    const std::size_t cells = config.sizes.size() * config.trials;
    art.trials.resize(cells);
    parallel_for(cells, [&](std::size_t cell) {
        const std::size_t n = config.sizes[cell / config.trials];
        const std::size_t t = cell % config.trials;
        EsdTrial& rec = art.trials[cell];
        rec.n = n;
        rec.trial = t;
        rec.seed = derive_seed(config.seed, n, t);
        ComplexMatrix m = build(config.symbol, n);
        m += perturbation(model, config.symbol, n, rec.seed);
        SpectrumResult spectrum = eigenvalues(m);
        rec.converged = spectrum.converged;
        rec.eigenvalues = std::move(spectrum.eigenvalues);
        rec.energy = energy_distance(rec.eigenvalues, art.mu.points, mu_self);
    });

    for (std::size_t si = 0; si < config.sizes.size(); ++si) {
        EsdSizeSummary summary;
        summary.n = config.sizes[si];
        std::vector<double> energies;
        for (std::size_t t = 0; t < config.trials; ++t) {
            const EsdTrial& rec = art.trials[si * config.trials + t];
            energies.push_back(rec.energy);
            if (!rec.converged) {
                ++summary.failures;
            }
        }
        summary.median_energy = median(std::move(energies));
        art.sizes.push_back(summary);
    }
    return art;
}

RegionMap run_region_map(const Symbol& s, const Rect& rect, std::size_t resolution) {
    ZGrid grid;
    grid.rect = rect;
    grid.resolution = resolution;
    if (resolution < 2) {
        throw std::invalid_argument("run_region_map: resolution must be >= 2");
    }
    if (!(rect[0] < rect[1]) || !(rect[2] < rect[3])) {
        throw std::invalid_argument("run_region_map: empty rectangle");
    }
    RegionMap map;
    map.rect = rect;
    map.resolution = resolution;
    map.nodes = grid.nodes();
    map.labels.assign(map.nodes.size(), RegionLabel::boundary());
    parallel_for(resolution, [&](std::size_t row) {
        for (std::size_t col = 0; col < resolution; ++col) {
            const std::size_t idx = row * resolution + col;
            try {
                map.labels[idx] = classify_region(s, map.nodes[idx]);
            } catch (const ConvergenceError&) {
                map.labels[idx] = RegionLabel::boundary();
            }
        }
    });
    return map;
}

LogpotTable run_logpot(const ExperimentConfig& config, std::span<const Complex> z_list) {
    config.validate();
    std::vector<double> limits;
    for (const auto& z : z_list) {
        if (classify_region(config.symbol, z).is_boundary()) {
            throw std::domain_error("run_logpot: z is on the BOUNDARY");
        }
        limits.push_back(limit_logpot(config.symbol, z));
    }
    const NoiseModel model = with_gamma(config.noise, config.gamma);
    LogpotTable table;
    table.config_hash = config_hash(config);
    const std::size_t nz = z_list.size();
    const std::size_t ns = config.sizes.size();
    const std::size_t cells = nz * ns * config.trials;
    table.rows.resize(cells);
    parallel_for(cells, [&](std::size_t cell) {
        const std::size_t zi = cell / (ns * config.trials);
        const std::size_t n = config.sizes[(cell / config.trials) % ns];
        const std::size_t t = cell % config.trials;
        LogpotRow& row = table.rows[cell];
        row.z = z_list[zi];
        row.n = n;
        row.trial = t;
        row.seed = derive_seed(config.seed, n, t);
        row.limit = limits[zi];
        ComplexMatrix m = build_z(config.symbol, row.z, n);
        m += perturbation(model, config.symbol, n, row.seed);
        const LogDet ld = lu_logdet(m);
        row.singular = ld.singular;
        row.value = ld.singular ? kLogZero : ld.log_abs / static_cast<double>(n);
    });
    for (std::size_t zi = 0; zi < nz; ++zi) {
        for (std::size_t si = 0; si < ns; ++si) {
            std::vector<double> values;
            for (std::size_t t = 0; t < config.trials; ++t) {
                values.push_back(table.rows[(zi * ns + si) * config.trials + t].value);
            }
            table.summaries.push_back(
                {z_list[zi], config.sizes[si], median(std::move(values)), limits[zi]});
        }
    }
    return table;
}

ReplacementRecord run_replacement(const Symbol& s, Complex z, std::size_t n,
                                  const NoiseModel& model_a, const NoiseModel& model_b,
                                  std::size_t trials, std::uint64_t seed) {
    model_a.validate();
    model_b.validate();
    if (n == 0 || trials == 0) {
        throw std::invalid_argument("run_replacement: N and trials must be >= 1");
    }
    struct TrialData {
        std::vector<double> sv_a;
        std::vector<double> sv_b;
        double hs = 0.0;
    };
    std::vector<TrialData> data(trials);
    const ComplexMatrix base = build_z(s, z, n);
    parallel_for(trials, [&](std::size_t t) {
        const std::uint64_t ts = derive_seed(seed, n, t);
        const ComplexMatrix pa = perturbation(model_a, s, n, ts);
        const ComplexMatrix pb = perturbation(model_b, s, n, ts);
        data[t].hs = hs_norm(pa - pb);
        data[t].sv_a = singular_values(base + pa);
        data[t].sv_b = singular_values(base + pb);
    });

    ReplacementRecord rec;
    rec.z = z;
    rec.n = n;
    rec.trials = trials;
    double s_max = 0.0;
    for (const auto& d : data) {
        rec.singular_a.insert(rec.singular_a.end(), d.sv_a.begin(), d.sv_a.end());
        rec.singular_b.insert(rec.singular_b.end(), d.sv_b.begin(), d.sv_b.end());
        s_max = std::max({s_max, d.sv_a.front(), d.sv_b.front()});
    }
    rec.ks = ks_distance(rec.singular_a, rec.singular_b);
    const double root_n = std::sqrt(static_cast<double>(n));
    for (std::size_t t = 0; t < trials; ++t) {
        for (const double im : kXiImag) {
            for (std::size_t r = 0; r < kXiReal; ++r) {
                const double re =
                    -s_max + 2.0 * s_max * static_cast<double>(r) / static_cast<double>(kXiReal - 1);
                const Complex xi{re, im};
                StieltjesRow row;
                row.trial = t;
                row.xi = xi;
                row.diff = std::abs(stieltjes(data[t].sv_a, xi) - stieltjes(data[t].sv_b, xi));
                row.bound = data[t].hs / (root_n * im * im);
                if (!(row.diff <= row.bound)) {
                    rec.bound_holds = false;
                }
                rec.grid.push_back(row);
            }
        }
    }
    return rec;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int panels) {
    if (!(b > a)) {
        return 0.0;
    }
    constexpr int kMaxDepth = 40;
    struct Recurse {
        const std::function<double(double)>& f;
        double operator()(double lo, double hi, double flo, double fmid, double fhi, double whole,
                          double eps, int depth) const {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid);
            const double rm = 0.5 * (mid + hi);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            const double delta = left + right - whole;
            if (depth >= kMaxDepth || std::abs(delta) <= 15.0 * eps) {
                return left + right + delta / 15.0;
            }
            return (*this)(lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1) +
                   (*this)(mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1);
        }
    };
    const Recurse recurse{f};
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + width * p;
        const double hi = p + 1 == panels ? b : lo + width;
        const double flo = f(lo);
        const double fhi = f(hi);
        const double fmid = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += recurse(lo, hi, flo, fmid, fhi, whole, tol / panels, 0);
    }
    return total;
}

IntervalMass interval_mass_check(std::span<const double> singular_values, double a, double b,
                                 double tau, double rho) {
    if (singular_values.empty()) {
        throw std::invalid_argument("interval_mass_check: empty sample");
    }
    if (!(rho > 0.0) || !(b - a > rho) || !(tau > 0.0)) {
        throw std::invalid_argument("interval_mass_check: need b - a > rho > 0 and tau > 0");
    }
    std::size_t inside = 0;
    for (const double s : singular_values) {
        inside += (s >= a && s <= b) ? 1 : 0;
        inside += (-s >= a && -s <= b) ? 1 : 0;
    }
    IntervalMass out;
    out.mass = static_cast<double>(inside) / (2.0 * static_cast<double>(singular_values.size()));
    const auto density = [&](double x) {
        return std::abs(stieltjes(singular_values, Complex{x, tau}).imag()) / std::numbers::pi;
    };
    constexpr double kTol = 1e-10;
    out.upper = adaptive_simpson(density, a - rho, b + rho, kTol) + tau / rho;
    out.lower = adaptive_simpson(density, a + rho, b - rho, kTol) - tau / rho;
    return out;
}

}  // namespace toepspec
