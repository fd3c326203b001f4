#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "asbarron/measure.hpp"
#include "asbarron/planewave.hpp"

namespace asb {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Measure files: { "n": int, "d": int, "atoms": [ { "a", "b", "w": [...] } ] }.
BarronMeasure load_measure(const std::string& path);
void save_measure(const std::string& path, const BarronMeasure& rho);
BarronMeasure parse_measure(const std::string& text);
std::string measure_to_json(const BarronMeasure& rho);

/// Slater sums: { "n", "d", "terms": [ { "re", "im", "w": [...] } ] },
/// wavevectors flattened particle-major.
void save_slater_sum(const std::string& path, const SlaterSum& s);
SlaterSum load_slater_sum(const std::string& path);

/// CSV with a mandatory header, `\n` line endings, shortest round-trip floats.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);

    /// Convenience: formats every double with format_double.
    void row(const std::vector<double>& cells);

private:
    std::ofstream out_;
    std::size_t width_;
};

} // namespace asb
