#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>

namespace fparadox_cli {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest " + path);
  out << "command=" << m.command << '\n' << "tool_version=" << m.tool_version << '\n';
  out << "master_seed=" << (m.master_seed ? std::to_string(*m.master_seed) : "none") << '\n';
  for (const auto& [k, v] : m.parameters) out << "param." << k << '=' << v << '\n';
  for (const auto& [k, v] : m.input_digests) out << "input." << k << '=' << v << '\n';
  for (std::size_t i = 0; i < m.argv.size(); ++i) out << "argv." << i << '=' << m.argv[i] << '\n';
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read manifest " + path);
  RunManifest m;
  std::map<std::size_t, std::string> argv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("malformed manifest line: " + line);
    const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key == "command") {
      m.command = value;
    } else if (key == "tool_version") {
      m.tool_version = value;
    } else if (key == "master_seed") {
      if (value != "none") m.master_seed = std::stoull(value);
    } else if (key.starts_with("param.")) {
      m.parameters.emplace_back(key.substr(6), value);
    } else if (key.starts_with("input.")) {
      m.input_digests.emplace_back(key.substr(6), value);
    } else if (key.starts_with("argv.")) {
      argv[std::stoul(key.substr(5))] = value;
    }
  }
  for (auto& [i, arg] : argv) m.argv.push_back(std::move(arg));
  return m;
}

}  // namespace fparadox_cli
