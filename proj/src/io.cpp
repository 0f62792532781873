#include "tubemeasure/io.hpp"

#include "tubemeasure/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace tubemeasure {

namespace {

// Shortest representation that round-trips exactly.
std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

PointCloud read_point_cloud(std::istream& in) {
    std::vector<double> flat;
    int dim = 0;
    std::size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char& c : line) {
            if (c == ',') c = ' ';
        }
        std::istringstream row(line);
        std::vector<double> coords;
        std::string token;
        while (row >> token) {
            try {
                std::size_t used = 0;
                const double v = std::stod(token, &used);
                if (used != token.size()) throw std::invalid_argument(token);
                coords.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("cannot parse coordinate '" + token + "'", line_no);
            }
        }
        if (coords.empty()) continue;
        for (double v : coords) {
            if (!std::isfinite(v)) {
                throw ParseError("non-finite coordinate", line_no);
            }
        }
        if (dim == 0) {
            dim = static_cast<int>(coords.size());
        } else if (static_cast<int>(coords.size()) != dim) {
            throw ParseError("expected " + std::to_string(dim) + " coordinates, got " +
                                 std::to_string(coords.size()),
                             line_no);
        }
        flat.insert(flat.end(), coords.begin(), coords.end());
    }
    if (flat.empty()) throw ParseError("no points in input");
    return PointCloud(dim, std::move(flat));
}

PointCloud read_point_cloud_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_point_cloud(in);
}

void write_point_cloud_file(const std::string& path, const PointCloud& cloud) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud[i];
        for (int d = 0; d < cloud.dim(); ++d) {
            if (d) out << ' ';
            out << format_double(p[d]);
        }
        out << '\n';
    }
}

nlohmann::json measure_to_json(const DiscreteMeasure& measure) {
    nlohmann::json atoms = nlohmann::json::array();
    for (std::size_t i = 0; i < measure.size(); ++i) {
        auto loc = measure.location(i);
        atoms.push_back({{"x", std::vector<double>(loc.begin(), loc.end())},
                         {"w", measure.weight(i)}});
    }
    return {{"dim", measure.dim()}, {"atoms", std::move(atoms)}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
    try {
        const int dim = j.at("dim").get<int>();
        std::vector<std::pair<Point, double>> atoms;
        bool negative = false;
        for (const auto& a : j.at("atoms")) {
            Point x = a.at("x").get<Point>();
            const double w = a.at("w").get<double>();
            negative = negative || w < 0.0;
            atoms.emplace_back(std::move(x), w);
        }
        return DiscreteMeasure::from_atoms(dim, std::move(atoms), negative);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad measure JSON: ") + e.what());
    }
}

nlohmann::json estimate_to_json(const BoundaryMeasureEstimate& estimate, std::uint64_t seed,
                                int threads, bool with_meta) {
    nlohmann::json j = measure_to_json(estimate.mu());
    j["beta"] = measure_to_json(estimate.beta());
    if (with_meta) {
        j["meta"] = {{"r", estimate.radius},
                     {"N", estimate.total},
                     {"seed", seed},
                     {"threads", threads},
                     {"offset_volume", estimate.offset_volume.value},
                     {"offset_volume_stderr", estimate.offset_volume.std_error}};
    }
    return j;
}

nlohmann::json curvature_to_json(const CurvatureProfile& profile, std::uint64_t seed, int threads,
                                 bool with_meta) {
    nlohmann::json profiles = nlohmann::json::array();
    for (const auto& p : profile.profiles) profiles.push_back(measure_to_json(p));
    nlohmann::json j = {{"radii", profile.radii},
                        {"condition_number", profile.condition_number},
                        {"profiles", std::move(profiles)}};
    if (with_meta) {
        j["meta"] = {{"seed", seed}, {"threads", threads}};
    }
    return j;
}

std::string stability_to_csv(const StabilityReport& report) {
    std::ostringstream out;
    out << "eps,dist,ratio,stderr,bound\n";
    for (const auto& row : report.rows) {
        out << format_double(row.eps) << ',' << format_double(row.dist) << ','
            << format_double(row.ratio) << ',' << format_double(row.std_error) << ','
            << format_double(row.bound) << '\n';
    }
    return out.str();
}

nlohmann::json stability_to_json(const StabilityReport& report, bool with_meta) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"eps", row.eps},
                        {"dist", row.dist},
                        {"ratio", row.ratio},
                        {"stderr", row.std_error},
                        {"bound", row.bound}});
    }
    nlohmann::json j = {{"rows", std::move(rows)}, {"fitted_slope", report.fitted_slope}};
    if (with_meta) {
        j["meta"] = {{"r", report.radius},
                     {"N", report.n_samples},
                     {"seed", report.seed},
                     {"threads", report.threads}};
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << content;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

} // namespace tubemeasure
