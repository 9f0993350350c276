#pragma once

#include <iosfwd>
#include <span>

#include "toepspec/expansion.hpp"
#include "toepspec/harness.hpp"

namespace toepspec {

void write_esd_csv(std::ostream& os, const EsdArtifact& art);
void write_esd_jsonl(std::ostream& os, const EsdArtifact& art);
/// Eigenvalue cloud of the largest-N trial 0 over the mu_a sample.
void write_esd_svg(std::ostream& os, const EsdArtifact& art);

void write_region_csv(std::ostream& os, const RegionMap& map);
/// Raster shaded by the number l of roots outside the unit disk: R_0 black,
/// R_d white, grey levels between; BOUNDARY red. `d` is the symbol degree.
void write_region_svg(std::ostream& os, const RegionMap& map, int d);

void write_logpot_csv(std::ostream& os, const LogpotTable& table);
void write_logpot_jsonl(std::ostream& os, const LogpotTable& table);

void write_replacement_csv(std::ostream& os, const ReplacementRecord& rec);
void write_replacement_jsonl(std::ostream& os, const ReplacementRecord& rec);

void write_dominance_csv(std::ostream& os, std::span<const DominanceReport> reports,
                         std::span<const std::size_t> sizes);
void write_anti_conc_csv(std::ostream& os, std::span<const AntiConcRow> rows);

}  // namespace toepspec
