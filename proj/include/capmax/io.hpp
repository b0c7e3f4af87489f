#ifndef CAPMAX_IO_HPP
#define CAPMAX_IO_HPP

// Serialization of grid functions, cell sets, cube lists and check reports.
// On-disk cell order is row-major (axis 0 slowest); the Morton order used
// internally never leaves the process.

#include "capmax/decomp.hpp"
#include "capmax/dyadic.hpp"
#include "capmax/verify.hpp"
#include "capmax/version.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace capmax {

using json = nlohmann::json;

inline json to_json(const GridSpec& spec) {
    json j;
    j["n"] = spec.n;
    j["depth"] = spec.depth;
    j["root_origin"] = std::vector<double>(spec.root_origin.begin(),
                                           spec.root_origin.begin() + spec.n);
    j["root_side"] = spec.root_side;
    return j;
}

inline GridSpec grid_spec_from_json(const json& j) {
    GridSpec spec;
    spec.n = j.at("n").get<int>();
    spec.depth = j.at("depth").get<int>();
    if (j.contains("root_origin")) {
        const auto o = j.at("root_origin").get<std::vector<double>>();
        if (int(o.size()) != spec.n)
            throw std::invalid_argument("grid json: root_origin size mismatch");
        for (int a = 0; a < spec.n; ++a) spec.root_origin[std::size_t(a)] = o[std::size_t(a)];
    }
    if (j.contains("root_side")) spec.root_side = j.at("root_side").get<double>();
    spec.validate();
    return spec;
}

inline json to_json(const GridFunction& f) {
    json j = to_json(f.spec());
    std::vector<double> row(f.size());
    for (std::uint64_t i = 0; i < f.size(); ++i)
        row[row_major_index(f.spec(), cell_coords(f.spec(), i))] = f[i];
    j["values"] = row;
    return j;
}

inline GridFunction grid_function_from_json(const json& j) {
    const GridSpec spec = grid_spec_from_json(j);
    const auto row = j.at("values").get<std::vector<double>>();
    if (row.size() != spec.cell_count())
        throw std::invalid_argument("grid json: value count mismatch");
    std::vector<double> v(row.size());
    for (std::uint64_t i = 0; i < row.size(); ++i)
        v[cell_index(spec, row_major_coords(spec, i))] = row[i];
    return GridFunction(spec, std::move(v));
}

inline json to_json(const CellSet& s) {
    json j = to_json(s.spec());
    std::vector<std::uint64_t> cells;
    for (std::uint64_t i : s.indices())
        cells.push_back(row_major_index(s.spec(), cell_coords(s.spec(), i)));
    std::sort(cells.begin(), cells.end());
    j["cells"] = cells;
    return j;
}

inline CellSet cell_set_from_json(const json& j) {
    const GridSpec spec = grid_spec_from_json(j);
    std::vector<std::uint64_t> idx;
    for (std::uint64_t rm : j.at("cells").get<std::vector<std::uint64_t>>()) {
        if (rm >= spec.cell_count()) throw std::invalid_argument("cell set json: index out of range");
        idx.push_back(cell_index(spec, row_major_coords(spec, rm)));
    }
    return CellSet::from_indices(spec, idx);
}

inline json to_json(const GridSpec& spec, const DyadicCube& q) {
    json j;
    j["level"] = q.level;
    j["coords"] = std::vector<std::uint32_t>(q.coords.begin(), q.coords.begin() + spec.n);
    j["side"] = side(spec, q);
    return j;
}

inline json to_json(const GridSpec& spec, const Decomposition& d) {
    json j;
    j["cubes"] = json::array();
    for (std::size_t i = 0; i < d.selected.size(); ++i) {
        json c = to_json(spec, d.selected[i]);
        if (i < d.diagnostics.size()) {
            c["content"] = d.diagnostics[i].content;
            c["measure"] = d.diagnostics[i].measure;
            c["average"] = d.diagnostics[i].average;
        }
        j["cubes"].push_back(c);
    }
    j["residual_cells"] = d.residual.count();
    return j;
}

inline json to_json(const CheckReport& rep) {
    json j;
    j["id"] = rep.id;
    j["version"] = version();
    for (const auto& [k, v] : rep.params) j["params"][k] = v;
    for (const auto& [k, v] : rep.measured) j["measured"][k] = v;
    if (rep.bound) j["bound"] = *rep.bound;
    if (rep.pass) j["pass"] = *rep.pass;
    j["verdict"] = rep.verdict;
    j["seed"] = rep.seed;
    j["runtime_ms"] = rep.runtime_ms;
    return j;
}

inline std::string report_csv(const CheckReport& rep) {
    std::ostringstream os;
    os << "key,value\n";
    os << "id," << rep.id << "\n";
    for (const auto& [k, v] : rep.params) os << k << "," << json(v).dump() << "\n";
    for (const auto& [k, v] : rep.measured) os << k << "," << json(v).dump() << "\n";
    if (rep.bound) os << "bound," << json(*rep.bound).dump() << "\n";
    if (rep.pass) os << "pass," << (*rep.pass ? 1 : 0) << "\n";
    os << "verdict," << rep.verdict << "\n";
    return os.str();
}

// --- files ---------------------------------------------------------------

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_grid_function(const std::string& path, const GridFunction& f) {
    write_text(path, to_json(f).dump(2) + "\n");
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// CSV alternative: header "index,value", one row-major cell per line. The
// grid geometry must be supplied by the caller.
inline GridFunction grid_function_from_csv(const std::string& text, const GridSpec& spec) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,value", 0) != 0)
        throw std::invalid_argument("csv: expected header 'index,value'");
    std::vector<double> row(spec.cell_count(), 0.0);
    std::vector<bool> seen(spec.cell_count(), false);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("csv: malformed line");
        const std::uint64_t idx = std::stoull(line.substr(0, comma));
        if (idx >= spec.cell_count()) throw std::invalid_argument("csv: index out of range");
        row[idx] = std::stod(line.substr(comma + 1));
        seen[idx] = true;
    }
    for (bool s : seen)
        if (!s) throw std::invalid_argument("csv: missing cell values");
    std::vector<double> v(row.size());
    for (std::uint64_t i = 0; i < row.size(); ++i)
        v[cell_index(spec, row_major_coords(spec, i))] = row[i];
    return GridFunction(spec, std::move(v));
}

inline std::string grid_function_to_csv(const GridFunction& f) {
    std::ostringstream os;
    os << "index,value\n";
    std::vector<double> row(f.size());
    for (std::uint64_t i = 0; i < f.size(); ++i)
        row[row_major_index(f.spec(), cell_coords(f.spec(), i))] = f[i];
    for (std::uint64_t i = 0; i < row.size(); ++i) os << i << "," << json(row[i]).dump() << "\n";
    return os.str();
}

inline GridFunction read_grid_function(const std::string& path,
                                       const std::optional<GridSpec>& csv_spec = std::nullopt) {
    const std::string text = read_text(path);
    if (ends_with(path, ".csv")) {
        if (!csv_spec) throw std::invalid_argument("csv input needs an explicit grid spec");
        return grid_function_from_csv(text, *csv_spec);
    }
    return grid_function_from_json(json::parse(text));
}

inline CellSet read_cell_set(const std::string& path) {
    return cell_set_from_json(json::parse(read_text(path)));
}

inline void write_cell_set(const std::string& path, const CellSet& s) {
    write_text(path, to_json(s).dump(2) + "\n");
}

} // namespace capmax

#endif
