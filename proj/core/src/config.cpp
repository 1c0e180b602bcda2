#include "rlab/config.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rlab/errors.hpp"

namespace rlab {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

Real parse_real(const std::string& s) {
    try {
        std::size_t used = 0;
        Real v = std::stold(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("not a decimal number: '" + s + "'");
    }
}

BigInt parse_int(const std::string& s) {
    try {
        return BigInt(s);
    } catch (const std::exception&) {
        throw ConfigError("not an integer: '" + s + "'");
    }
}

std::string letter_key(std::size_t x) {
    return "g" + std::to_string(x / 2 + 1) + (x % 2 == 0 ? "_target" : "_source");
}

}  // namespace

std::string to_string(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::three_funnel: return "three_funnel";
        case SurfaceKind::explicit_schottky: return "explicit_schottky";
        case SurfaceKind::integer_schottky: return "integer_schottky";
    }
    return "?";
}

SurfaceKind surface_kind_from_string(const std::string& s) {
    if (s == "three_funnel") return SurfaceKind::three_funnel;
    if (s == "explicit_schottky") return SurfaceKind::explicit_schottky;
    if (s == "integer_schottky") return SurfaceKind::integer_schottky;
    throw ConfigError("unknown surface kind '" + s + "'");
}

SurfaceConfig parse_surface_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }
    SurfaceConfig c;
    try {
        c.name = tree.get<std::string>("surface.name");
        c.kind = surface_kind_from_string(tree.get<std::string>("surface.kind"));
        c.precision_bits = tree.get<int>("surface.precision_bits", 64);
    } catch (const pt::ptree_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (c.kind == SurfaceKind::three_funnel) {
        for (int i = 1; i <= 3; ++i) {
            auto v = tree.get_optional<std::string>("funnel.l" + std::to_string(i));
            if (!v) throw ConfigError("three_funnel needs funnel.l1, l2 and l3");
            c.lengths.push_back(*v);
        }
        return c;
    }
    for (int i = 1;; ++i) {
        auto v = tree.get_optional<std::string>("generators.g" + std::to_string(i));
        if (!v) break;
        auto p = split_ws(*v);
        if (p.size() != 4) throw ConfigError("generator g" + std::to_string(i) + " needs four entries");
        c.generators.push_back({p[0], p[1], p[2], p[3]});
    }
    if (c.generators.empty()) throw ConfigError("no generators");
    if (c.kind == SurfaceKind::explicit_schottky) {
        for (std::size_t x = 0; x < 2 * c.generators.size(); ++x) {
            auto v = tree.get_optional<std::string>("disks." + letter_key(x));
            if (!v) throw ConfigError("missing disk " + letter_key(x));
            auto p = split_ws(*v);
            if (p.size() != 2) throw ConfigError("disk " + letter_key(x) + " needs center and radius");
            c.disks.push_back({p[0], p[1]});
        }
    }
    return c;
}

SurfaceConfig load_surface_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_surface_config(ss.str());
}

std::string emit_surface_config(const SurfaceConfig& c) {
    pt::ptree tree;
    tree.put("surface.name", c.name);
    tree.put("surface.kind", to_string(c.kind));
    tree.put("surface.precision_bits", c.precision_bits);
    for (std::size_t i = 0; i < c.lengths.size(); ++i) tree.put("funnel.l" + std::to_string(i + 1), c.lengths[i]);
    for (std::size_t i = 0; i < c.generators.size(); ++i) {
        const auto& g = c.generators[i];
        tree.put("generators.g" + std::to_string(i + 1), g[0] + " " + g[1] + " " + g[2] + " " + g[3]);
    }
    for (std::size_t x = 0; x < c.disks.size(); ++x)
        tree.put("disks." + letter_key(x), c.disks[x][0] + " " + c.disks[x][1]);
    std::ostringstream os;
    pt::write_ini(os, tree);
    return os.str();
}

SchottkySurface build_surface(const SurfaceConfig& c) {
    SchottkySurface s;
    switch (c.kind) {
        case SurfaceKind::three_funnel:
            if (c.lengths.size() != 3) throw ConfigError("three_funnel needs three lengths");
            s = three_funnel(parse_real(c.lengths[0]), parse_real(c.lengths[1]), parse_real(c.lengths[2]));
            break;
        case SurfaceKind::integer_schottky: {
            std::vector<IntMatrix> gens;
            for (const auto& g : c.generators)
                gens.push_back(make_int_matrix(parse_int(g[0]), parse_int(g[1]), parse_int(g[2]), parse_int(g[3])));
            s = integer_schottky(c.name, gens);
            break;
        }
        case SurfaceKind::explicit_schottky: {
            if (c.disks.size() != 2 * c.generators.size()) throw ConfigError("need one disk per letter");
            for (const auto& g : c.generators)
                s.generators.push_back(
                    make_real_matrix(parse_real(g[0]), parse_real(g[1]), parse_real(g[2]), parse_real(g[3])));
            for (const auto& d : c.disks) s.disks.push_back(Disk{parse_real(d[0]), parse_real(d[1])});
            require_valid(s);
            break;
        }
    }
    s.name = c.name;
    s.precision_bits = c.precision_bits;
    return s;
}

SurfaceConfig bundled_config(const std::string& name) {
    SurfaceConfig c;
    c.name = name;
    if (name == "3f222") {
        c.kind = SurfaceKind::three_funnel;
        c.lengths = {"2", "2", "2"};
    } else if (name == "integer") {
        c.kind = SurfaceKind::integer_schottky;
        c.generators = {{"6", "-1", "1", "0"}, {"11", "-34", "1", "-3"}};
    } else {
        throw ConfigError("no bundled surface named '" + name + "'");
    }
    return c;
}

}  // namespace rlab
