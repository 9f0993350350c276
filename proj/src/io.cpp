#include "toepspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

namespace toepspec {

namespace {

constexpr int kSvgSize = 600;

nlohmann::json pair_json(Complex z) { return {z.real(), z.imag()}; }

// Restores stream precision on scope exit.
class PrecisionGuard {
public:
    explicit PrecisionGuard(std::ostream& os) : os_(os), saved_(os.precision(17)) {}
    ~PrecisionGuard() { os_.precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    std::ostream& os_;
    std::streamsize saved_;
};

struct Viewport {
    double re_min, re_max, im_min, im_max;

    [[nodiscard]] double x(double re) const {
        return (re - re_min) / (re_max - re_min) * kSvgSize;
    }
    [[nodiscard]] double y(double im) const {
        return (im_max - im) / (im_max - im_min) * kSvgSize;
    }
};

}  // namespace

void write_esd_csv(std::ostream& os, const EsdArtifact& art) {
    const PrecisionGuard guard(os);
    os << "config_hash,n,trial,seed,converged,energy_distance\n";
    for (const auto& t : art.trials) {
        os << art.config_hash << ',' << t.n << ',' << t.trial << ',' << t.seed << ','
           << (t.converged ? 1 : 0) << ',' << t.energy << '\n';
    }
}

void write_esd_jsonl(std::ostream& os, const EsdArtifact& art) {
    for (const auto& t : art.trials) {
        nlohmann::json eig = nlohmann::json::array();
        for (const auto& e : t.eigenvalues) {
            eig.push_back(pair_json(e));
        }
        const nlohmann::json rec{{"config_hash", art.config_hash},
                                 {"n", t.n},
                                 {"trial", t.trial},
                                 {"seed", t.seed},
                                 {"converged", t.converged},
                                 {"energy_distance", t.energy},
                                 {"eigenvalues", eig}};
        os << rec.dump() << '\n';
    }
}

void write_esd_svg(std::ostream& os, const EsdArtifact& art) {
    if (art.trials.empty()) {
        return;
    }
    const std::size_t n_max = art.sizes.back().n;
    const auto it = std::find_if(art.trials.begin(), art.trials.end(),
                                 [&](const EsdTrial& t) { return t.n == n_max; });
    double extent = 1e-9;
    for (const auto& p : art.mu.points) {
        extent = std::max({extent, std::abs(p.real()), std::abs(p.imag())});
    }
    for (const auto& e : it->eigenvalues) {
        extent = std::max({extent, std::abs(e.real()), std::abs(e.imag())});
    }
    extent *= 1.1;
    const Viewport v{-extent, extent, -extent, extent};
    const PrecisionGuard guard(os);
    os << std::setprecision(5);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgSize << "\" height=\""
       << kSvgSize << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<g fill=\"#9ab\">\n";
    for (const auto& p : art.mu.points) {
        os << "<circle cx=\"" << v.x(p.real()) << "\" cy=\"" << v.y(p.imag()) << "\" r=\"0.8\"/>\n";
    }
    os << "</g>\n<g fill=\"#c22\">\n";
    for (const auto& e : it->eigenvalues) {
        os << "<circle cx=\"" << v.x(e.real()) << "\" cy=\"" << v.y(e.imag()) << "\" r=\"1.5\"/>\n";
    }
    os << "</g>\n<text x=\"8\" y=\"18\" font-size=\"14\">N = " << n_max << "</text>\n</svg>\n";
}

void write_region_csv(std::ostream& os, const RegionMap& map) {
    const PrecisionGuard guard(os);
    os << "re,im,label,defect\n";
    for (std::size_t i = 0; i < map.nodes.size(); ++i) {
        const auto& l = map.labels[i];
        os << map.nodes[i].real() << ',' << map.nodes[i].imag() << ',' << l.to_string() << ',';
        if (!l.is_boundary()) {
            os << l.defect();
        }
        os << '\n';
    }
}

void write_region_svg(std::ostream& os, const RegionMap& map, int d) {
    const std::size_t res = map.resolution;
    const double cell = static_cast<double>(kSvgSize) / static_cast<double>(res);
    const auto colour = [d](const RegionLabel& l) -> std::string {
        if (l.is_boundary()) {
            return "#d00000";
        }
        const int level = d > 0 ? 255 * std::clamp(l.outside(), 0, d) / d : 0;
        const int grey = std::clamp(level, 0, 255);
        std::ostringstream hex;
        hex << '#' << std::hex << std::setfill('0') << std::setw(2) << grey << std::setw(2) << grey
            << std::setw(2) << grey;
        return hex.str();
    };
    const PrecisionGuard guard(os);
    os << std::setprecision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgSize << "\" height=\""
       << kSvgSize << "\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t row = 0; row < res; ++row) {
        std::size_t col = 0;
        while (col < res) {
            const RegionLabel& l = map.labels[row * res + col];
            std::size_t end = col + 1;
            while (end < res && map.labels[row * res + end] == l) {
                ++end;
            }
            os << "<rect x=\"" << cell * static_cast<double>(col) << "\" y=\""
               << cell * static_cast<double>(row) << "\" width=\""
               << cell * static_cast<double>(end - col) << "\" height=\"" << cell
               << "\" fill=\"" << colour(l) << "\"/>\n";
            col = end;
        }
    }
    os << "</svg>\n";
}

void write_logpot_csv(std::ostream& os, const LogpotTable& table) {
    const PrecisionGuard guard(os);
    os << "config_hash,z_re,z_im,n,trial,seed,log_potential,limit,singular\n";
    for (const auto& r : table.rows) {
        os << table.config_hash << ',' << r.z.real() << ',' << r.z.imag() << ',' << r.n << ','
           << r.trial << ',' << r.seed << ',' << r.value << ',' << r.limit << ','
           << (r.singular ? 1 : 0) << '\n';
    }
}

void write_logpot_jsonl(std::ostream& os, const LogpotTable& table) {
    for (const auto& r : table.rows) {
        const nlohmann::json rec{{"config_hash", table.config_hash},
                                 {"z", pair_json(r.z)},
                                 {"n", r.n},
                                 {"trial", r.trial},
                                 {"seed", r.seed},
                                 {"log_potential", r.value},
                                 {"limit", r.limit},
                                 {"singular", r.singular}};
        os << rec.dump() << '\n';
    }
}

void write_replacement_csv(std::ostream& os, const ReplacementRecord& rec) {
    const PrecisionGuard guard(os);
    os << "z_re,z_im,n,trial,xi_re,xi_im,stieltjes_diff,bound,ks\n";
    for (const auto& r : rec.grid) {
        os << rec.z.real() << ',' << rec.z.imag() << ',' << rec.n << ',' << r.trial << ','
           << r.xi.real() << ',' << r.xi.imag() << ',' << r.diff << ',' << r.bound << ','
           << rec.ks << '\n';
    }
}

void write_replacement_jsonl(std::ostream& os, const ReplacementRecord& rec) {
    for (const auto& r : rec.grid) {
        const nlohmann::json j{{"z", pair_json(rec.z)},       {"n", rec.n},
                               {"trial", r.trial},            {"xi", pair_json(r.xi)},
                               {"stieltjes_diff", r.diff},    {"bound", r.bound},
                               {"ks", rec.ks}};
        os << j.dump() << '\n';
    }
}

void write_dominance_csv(std::ostream& os, std::span<const DominanceReport> reports,
                         std::span<const std::size_t> sizes) {
    const PrecisionGuard guard(os);
    std::size_t kmax = 0;
    for (const auto& r : reports) {
        kmax = std::max(kmax, r.pk.size());
    }
    os << "n,defect,log_normalizer";
    for (std::size_t k = 0; k < kmax; ++k) {
        os << ",abs_P" << k;
    }
    os << ",ratio_above,ratio_below,normalized_P_dominant,tail_above\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        os << (i < sizes.size() ? sizes[i] : 0) << ',' << r.defect << ',' << r.log_normalizer;
        for (std::size_t k = 0; k < kmax; ++k) {
            os << ',' << (k < r.pk.size() ? std::abs(r.pk[k]) : 0.0);
        }
        os << ',' << r.ratio_above << ',' << r.ratio_below << ',' << r.normalized_pd << ','
           << r.tail_above << '\n';
    }
}

void write_anti_conc_csv(std::ostream& os, std::span<const AntiConcRow> rows) {
    const PrecisionGuard guard(os);
    os << "eps,hits,frequency,wilson_lo,wilson_hi,bound\n";
    for (const auto& r : rows) {
        os << r.eps << ',' << r.hits << ',' << r.frequency << ',' << r.wilson_lo << ','
           << r.wilson_hi << ',' << r.bound << '\n';
    }
}

}  // namespace toepspec
