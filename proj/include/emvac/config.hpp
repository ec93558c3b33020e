#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emvac/types.hpp"

namespace emvac {

// INI-style run configuration: [section] headers, key = value lines, and
// '#' comments. Values are kept verbatim, so parse(serialize(c)) == c.
// The canonical form (sections and keys sorted, whitespace normalised,
// the [run] execution section excluded) feeds a FNV-1a hash recorded in
// every output file; execution details like worker counts never change
// the hash.
class RunConfig {
  public:
    RunConfig() = default;

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_string(const std::string& text);

    // dotted = "section.key"; used by CLI --set overrides
    void set(const std::string& dotted, const std::string& value);
    void set(const std::string& section, const std::string& key,
             const std::string& value);

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           std::optional<std::string> fallback = {}) const;
    double get_double(const std::string& section, const std::string& key,
                      std::optional<double> fallback = {}) const;
    long get_int(const std::string& section, const std::string& key,
                 std::optional<long> fallback = {}) const;
    bool get_bool(const std::string& section, const std::string& key,
                  std::optional<bool> fallback = {}) const;
    // "re" or "re,im"
    cdouble get_complex(const std::string& section, const std::string& key,
                        std::optional<cdouble> fallback = {}) const;
    // comma-separated, validated strictly increasing
    std::vector<double> get_grid(const std::string& section,
                                 const std::string& key) const;

    std::string serialize() const;   // verbatim values, sorted
    std::string canonical() const;   // hash input: serialize() minus [run]
    std::uint64_t hash() const;      // FNV-1a 64 over canonical()

    const std::map<std::string, std::map<std::string, std::string>>& sections()
        const {
        return sections_;
    }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

// %.17g rendering used for every numeric field written to output files;
// guarantees doubles survive a text round trip.
std::string format_double(double v);

}  // namespace emvac
