#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "domatic/errors.hpp"

namespace domatic {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit, hex. Cheap content fingerprinting for replay checks, not a
/// cryptographic commitment.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex << h;
  return s.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Embedded in every artifact. Wall time is deliberately *not* part of the
/// embedded copy (replays must be byte-identical); it is reported on stderr
/// by the CLI instead.
class ManifestBuilder {
 public:
  explicit ManifestBuilder(std::vector<std::string> argv) : argv_(std::move(argv)) {}

  void add_input(const std::string& name, const std::string& path) {
    inputs_.push_back({name, fnv1a_hex(read_file(path))});
  }
  void set_seed(std::uint64_t seed) {
    seed_ = seed;
    has_seed_ = true;
  }

  /// Attaches the manifest (with the payload's own hash) to the artifact.
  nlohmann::ordered_json seal(nlohmann::ordered_json payload) const {
    nlohmann::ordered_json m;
    m["command"] = argv_;
    nlohmann::ordered_json in = nlohmann::ordered_json::object();
    for (const auto& [name, hash] : inputs_) in[name] = hash;
    m["inputs"] = in;
    if (has_seed_)
      m["seed"] = seed_;
    else
      m["seed"] = nullptr;
    m["version"] = kToolVersion;
    m["output"] = fnv1a_hex(payload.dump());
    payload["manifest"] = m;
    return payload;
  }

 private:
  std::vector<std::string> argv_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::uint64_t seed_ = 0;
  bool has_seed_ = false;
};

}  // namespace domatic
