#include "rlab/io.hpp"

#include <fstream>
#include <sstream>

#include <unistd.h>

#include "rlab/errors.hpp"

namespace rlab {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

void write_with_sidecar(const fs::path& path, const std::string& content, const nlohmann::json& sidecar) {
    write_atomic(path, content);
    fs::path side = path;
    side += ".json";
    write_atomic(side, dump(sidecar));
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string resonance_csv(const ResonanceSet& rs) {
    std::ostringstream os;
    os << "re,im,multiplicity\n";
    char buf[96];
    for (const auto& z : rs.resonances) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", z.s.real(), z.s.imag(), z.multiplicity);
        os << buf;
    }
    return os.str();
}

nlohmann::json resonance_sidecar(const ResonanceSet& rs) {
    nlohmann::json j;
    j["box"] = rs.box.str();
    j["search_box"] = rs.search_box.str();
    j["tolerance"] = rs.tolerance;
    j["euler_characteristic"] = rs.euler_characteristic;
    j["degree"] = rs.degree;
    j["search_count"] = rs.search_count;
    j["evaluations"] = rs.evaluations;
    j["zeta"] = {{"mode", rs.zeta_mode}, {"depth", rs.zeta_depth}};
    j["count"] = rs.count();
    std::vector<double> errors;
    for (const auto& z : rs.resonances) errors.push_back(z.error);
    j["location_errors"] = errors;
    for (const auto& t : rs.topological)
        j["topological"].push_back({{"k", t.k}, {"expected", t.expected}, {"found", t.found}, {"note", t.note}});
    j["columns"] = {"re", "im", "multiplicity"};
    return j;
}

ResonanceSet read_resonances(const std::string& csv, const nlohmann::json& side) {
    ResonanceSet rs;
    try {
        rs.box = Box::parse(side.at("box").get<std::string>());
        rs.search_box = Box::parse(side.at("search_box").get<std::string>());
        rs.tolerance = side.at("tolerance").get<double>();
        rs.euler_characteristic = side.at("euler_characteristic").get<int>();
        rs.degree = side.at("degree").get<int>();
        rs.search_count = side.value("search_count", 0);
        rs.zeta_mode = side.at("zeta").at("mode").get<std::string>();
        rs.zeta_depth = side.at("zeta").at("depth").get<int>();
        for (const auto& t : side.value("topological", nlohmann::json::array()))
            rs.topological.push_back({t.at("k").get<int>(), t.at("expected").get<int>(), t.at("found").get<int>(),
                                      t.at("note").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("resonance sidecar: ") + e.what());
    }
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    if (line != "re,im,multiplicity") throw ConfigError("unexpected resonance CSV header '" + line + "'");
    auto errs = side.value("location_errors", std::vector<double>{});
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double re, im;
        int m;
        if (std::sscanf(line.c_str(), "%lf,%lf,%d", &re, &im, &m) != 3) throw ConfigError("bad CSV row '" + line + "'");
        Zero z{{re, im}, m, 0};
        if (rs.resonances.size() < errs.size()) z.error = errs[rs.resonances.size()];
        rs.resonances.push_back(z);
    }
    return rs;
}

}  // namespace rlab
