#include "sparsedom/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace sparsedom {

void write_grid_csv(const GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_grid_csv: cannot open " + path);
    out << f.dim << "," << f.extent << "\n";
    out << std::setprecision(17);
    for (double v : f.values) out << v << "\n";
}

GridFunction read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_grid_csv: cannot open " + path);
    std::string header;
    std::getline(in, header);
    const auto comma = header.find(',');
    if (comma == std::string::npos) throw std::runtime_error("read_grid_csv: bad header");
    const int dim = std::stoi(header.substr(0, comma));
    const int extent = std::stoi(header.substr(comma + 1));
    GridFunction f(dim, extent, 0.0);
    for (double& v : f.values)
        if (!(in >> v)) throw std::runtime_error("read_grid_csv: truncated data");
    return f;
}

nlohmann::json cube_json(const Cube& q) {
    nlohmann::json j;
    j["s"] = q.s;
    j["corner"] = q.dim == 2 ? std::vector<Index>{q.corner[0], q.corner[1]}
                             : std::vector<Index>{q.corner[0]};
    return j;
}

nlohmann::json collection_json(const SparseCollection& s) {
    nlohmann::json j;
    j["dim"] = s.dim;
    j["extent"] = s.extent;
    j["eta"] = s.eta;
    j["cubes"] = nlohmann::json::array();
    for (std::size_t i = 0; i < s.tree.size(); ++i) {
        nlohmann::json e = cube_json(s.tree[i]);
        e["f_cells"] = s.f_sets[i].count();
        j["cubes"].push_back(std::move(e));
    }
    j["generations"] = nlohmann::json::array();
    for (const auto& gen : s.generations) {
        nlohmann::json g = nlohmann::json::array();
        for (const Cube& q : gen) g.push_back(cube_json(q));
        j["generations"].push_back(std::move(g));
    }
    return j;
}

nlohmann::json certificate_json(const IterationCertificate& c) {
    nlohmann::json j;
    j["lambda"] = c.lambda;
    j["doublings"] = c.doublings;
    j["ok"] = c.ok;
    if (!c.failure.empty()) j["failure"] = c.failure;
    j["levels"] = nlohmann::json::array();
    for (const LevelRecord& lev : c.levels) {
        nlohmann::json e;
        e["level"] = lev.level;
        e["cube_count"] = lev.cubes.size();
        e["exceptional_cells"] = lev.exceptional.count();
        e["max_ratio"] = lev.max_ratio;
        e["validated"] = lev.validated;
        e["neighbor_ok"] = lev.neighbor_ok;
        j["levels"].push_back(std::move(e));
    }
    return j;
}

nlohmann::json domination_json(const DominationReport& r) {
    nlohmann::json j;
    j["kernel"] = r.kernel;
    j["p1"] = r.p1;
    j["p2"] = r.p2;
    j["n"] = r.n;
    j["psf"] = r.psf_value;
    j["lambda"] = r.lambda;
    j["eta"] = r.eta;
    j["max_ratio"] = r.max_ratio;
    j["ok"] = r.ok;
    if (!r.error.empty()) j["error"] = r.error;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : r.entries)
        j["entries"].push_back({{"mu", e.mu}, {"nu", e.nu}, {"form", e.form_abs},
                                {"ratio", e.ratio}});
    return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << std::setprecision(17);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw std::runtime_error("write_csv: ragged row");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
}

void write_mask_pbm(const Mask& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_mask_pbm: cannot open " + path);
    const Index rows = m.dim == 2 ? m.n : 1;
    out << "P1\n" << m.n << " " << rows << "\n";
    for (Index y = 0; y < rows; ++y) {
        for (Index x = 0; x < m.n; ++x) out << (m.get(x, y) ? 1 : 0) << (x + 1 < m.n ? " " : "\n");
    }
}

}  // namespace sparsedom
