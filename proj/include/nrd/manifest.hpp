#ifndef NRD_MANIFEST_HPP
#define NRD_MANIFEST_HPP

#include "nrd/model.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nrd {

constexpr const char* kToolVersion = "nrd 0.1.0";

std::uint64_t fnv1a(const std::string& s);
/// %.17g — lossless round trip of doubles.
std::string format17(double v);

/// Key = value text, '#' comments; unknown keys are errors.
ModelSpec parse_config_text(const std::string& text);
ModelSpec load_config(const std::string& filename);
std::string serialize_config(const ModelSpec& spec);

/** Reproducibility record emitted alongside every output: hash of the
 * canonical parameter list, seeds, subcommand, outputs, tool version. */
struct RunManifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> params; // insertion order kept
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> outputs;

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, std::uint64_t value);
    std::string canonical() const; // sorted key=value lines
    std::uint64_t hash() const;
    std::string hash_hex() const;
    std::string to_json() const;
    /// First line of every output CSV.
    std::string manifest_line() const;
    void write(const std::string& filename) const;
};

} // namespace nrd

#endif
