#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sparsedom/sparsifier.hpp"
#include "sparsedom/verify.hpp"

namespace sparsedom {

/// Plain CSV: first line "dim,extent", then one value per line (row-major).
void write_grid_csv(const GridFunction& f, const std::string& path);
GridFunction read_grid_csv(const std::string& path);

nlohmann::json cube_json(const Cube& q);
nlohmann::json collection_json(const SparseCollection& s);
nlohmann::json certificate_json(const IterationCertificate& c);
nlohmann::json domination_json(const DominationReport& r);

void write_json(const nlohmann::json& j, const std::string& path);

/// Header row plus numeric rows.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Portable bitmap (P1), one bit per cell; 1d masks come out one pixel tall.
void write_mask_pbm(const Mask& m, const std::string& path);

}  // namespace sparsedom
