#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "jointlife/serialization.hpp"

namespace jointlife::cli {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes);
// Throws InputError when the file cannot be read.
std::string read_file(const fs::path& path);

/// Records what a command read and wrote. Input hashes are taken when the
/// input is registered, before any processing. Outputs are written through
/// the manifest so each one is hashed exactly as stored. The manifest itself
/// is manifest_<stem>.json, where the stem names the run's main output.
class RunManifest {
 public:
  RunManifest(std::string command, std::string stem, fs::path out_dir, bool force, std::uint64_t seed);

  Json& config() { return config_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  // Returns the file contents.
  std::string add_input(const fs::path& path);
  // Fails before anything is written when an output exists and --force is off.
  void claim(const std::vector<std::string>& names) const;
  void write(const std::string& name, const std::string& contents);
  void write(const std::string& name, const Json& j);
  // Writes manifest_<command>.json.
  void finish();

  const fs::path& out_dir() const { return out_dir_; }

 private:
  void check_absent(const fs::path& p) const;

  std::string command_;
  std::string stem_;
  fs::path out_dir_;
  bool force_;
  std::uint64_t seed_;
  Json config_ = Json::object();
  Json inputs_ = Json::array();
  Json outputs_ = Json::array();
};

std::string manifest_name(const std::string& stem);

}  // namespace jointlife::cli
