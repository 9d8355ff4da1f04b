#include "segproc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace segproc {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void write_configuration_csv(const std::string& path, const Configuration& x) {
    auto out = open_out(path);
    out << "cx,cy,r,phi\n";
    for (const Segment& s : x.segments)
        out << format_double(s.center.x) << ',' << format_double(s.center.y) << ','
            << format_double(s.length) << ',' << format_double(s.direction) << '\n';
}

Configuration read_configuration_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty configuration file: " + path);
    if (trim(line) != "cx,cy,r,phi")
        throw std::runtime_error("bad configuration header in " + path);
    Configuration x;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::istringstream row(line);
        double cx, cy, r, phi;
        char c1, c2, c3;
        if (!(row >> cx >> c1 >> cy >> c2 >> r >> c3 >> phi) || c1 != ',' || c2 != ',' ||
            c3 != ',')
            throw std::runtime_error("bad row " + std::to_string(lineno) + " in " + path);
        x.segments.emplace_back(Point2{cx, cy}, r, phi);
    }
    return x;
}

void write_density_csv(const std::string& path, const DensityGrid& d) {
    auto out = open_out(path);
    out << "x,value\n";
    for (std::size_t i = 0; i < d.grid().count; ++i)
        out << format_double(d.grid().point(i)) << ',' << format_double(d.values()[i]) << '\n';
}

void write_bivariate_csv(const std::string& path, const BivariateDensityGrid& d) {
    auto out = open_out(path);
    out << "r,phi,value\n";
    for (std::size_t ir = 0; ir < d.grid_r().count; ++ir)
        for (std::size_t ip = 0; ip < d.grid_phi().count; ++ip)
            out << format_double(d.grid_r().point(ir)) << ','
                << format_double(d.grid_phi().point(ip)) << ',' << format_double(d.at(ir, ip))
                << '\n';
}

void write_kv_csv(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& rows) {
    auto out = open_out(path);
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) +
                                                  ": empty key");
        kv[key] = value;
    }
    return kv;
}

std::vector<std::string> ConfigView::keys() const {
    std::vector<std::string> out;
    out.reserve(kv_.size());
    for (const auto& [k, v] : kv_) out.push_back(k);
    return out;
}

std::string ConfigView::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double ConfigView::get(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::runtime_error("config key '" + key + "': bad number '" + it->second + "'");
    }
}

std::size_t ConfigView::get(const std::string& key, std::size_t fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        return std::stoull(it->second);
    } catch (...) {
        throw std::runtime_error("config key '" + key + "': bad integer '" + it->second + "'");
    }
}

}  // namespace segproc
