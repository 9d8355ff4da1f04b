#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "segproc/geometry.hpp"
#include "segproc/grid.hpp"

namespace segproc {

// Stable numeric formatting for all CSV output (round-trip safe, byte
// reproducible across runs).
std::string format_double(double v);

// Configuration CSV: header `cx,cy,r,phi`, one row per segment, direction in
// radians in [0, pi).
void write_configuration_csv(const std::string& path, const Configuration& x);
Configuration read_configuration_csv(const std::string& path);

// DensityGrid CSV: header `x,value`.
void write_density_csv(const std::string& path, const DensityGrid& d);

// Bivariate table CSV: header `r,phi,value`.
void write_bivariate_csv(const std::string& path, const BivariateDensityGrid& d);

// Generic two-column key,value CSV.
void write_kv_csv(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& rows);

// Flat `key = value` config file with `#` comments.
std::map<std::string, std::string> read_config_file(const std::string& path);

class ConfigView {
public:
    explicit ConfigView(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::vector<std::string> keys() const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get(const std::string& key, double fallback) const;
    std::size_t get(const std::string& key, std::size_t fallback) const;

private:
    std::map<std::string, std::string> kv_;
};

}  // namespace segproc
