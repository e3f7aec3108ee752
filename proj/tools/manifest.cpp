#include "manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>

#include "jointlife/common.hpp"

namespace jointlife::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string manifest_name(const std::string& stem) { return "manifest_" + stem + ".json"; }

RunManifest::RunManifest(std::string command, std::string stem, fs::path out_dir, bool force, std::uint64_t seed)
    : command_(std::move(command)), stem_(std::move(stem)), out_dir_(std::move(out_dir)), force_(force), seed_(seed) {}

void RunManifest::check_absent(const fs::path& p) const {
  if (!force_ && fs::exists(p)) throw InputError(p.generic_string() + " exists; pass --force to overwrite");
}

std::string RunManifest::add_input(const fs::path& path) {
  std::string bytes = read_file(path);
  inputs_.push_back(Json{{"path", path.generic_string()}, {"sha256", sha256_hex(bytes)}});
  return bytes;
}

void RunManifest::claim(const std::vector<std::string>& names) const {
  check_absent(out_dir_ / manifest_name(stem_));
  for (const auto& name : names) check_absent(out_dir_ / name);
}

void RunManifest::write(const std::string& name, const std::string& contents) {
  const fs::path p = out_dir_ / name;
  check_absent(p);
  fs::create_directories(out_dir_);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) throw InputError("cannot write " + p.generic_string());
  outputs_.push_back(Json{{"path", p.generic_string()}, {"sha256", sha256_hex(contents)}});
}

void RunManifest::write(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

void RunManifest::finish() {
  Json m;
  m["command"] = command_;
  m["tool_version"] = JOINTLIFE_VERSION;
  m["seed"] = seed_;
  m["config"] = config_;
  m["inputs"] = inputs_;
  m["outputs"] = outputs_;
  const fs::path p = out_dir_ / manifest_name(stem_);
  check_absent(p);
  fs::create_directories(out_dir_);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << m.dump(2) << "\n";
  if (!out) throw InputError("cannot write " + p.generic_string());
}

}  // namespace jointlife::cli
