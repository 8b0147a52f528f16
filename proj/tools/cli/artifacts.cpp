#include "artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace kppfront::cli {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

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

Csv::Csv(std::initializer_list<std::string> header) : Csv(std::vector<std::string>(header)) {}

Csv::Csv(const std::vector<std::string>& header) : columns_(header.size()) { row(header); }

Csv& Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("csv row width does not match the header");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) body_ += ',';
    body_ += cells[k];
  }
  body_ += '\n';
  return *this;
}

Csv& Csv::row(const std::vector<double>& cells) {
  std::vector<std::string> text;
  text.reserve(cells.size());
  for (double v : cells) text.push_back(format_double(v));
  return row(text);
}

ArtifactWriter::ArtifactWriter(fs::path dir, std::string command) : dir_(std::move(dir)), command_(std::move(command)) {
  fs::create_directories(dir_);
}

ArtifactWriter::~ArtifactWriter() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& p : written_) fs::remove(p, ec);
}

void ArtifactWriter::write(const std::string& name, const std::string& bytes) {
  if (committed_) throw std::logic_error("artifact set already committed");
  const fs::path target = dir_ / name;
  const fs::path tmp = dir_ / ("." + name + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  fs::rename(tmp, target);
  written_.push_back(target);
  entries_.push_back({{"name", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
}

void ArtifactWriter::write(const std::string& name, const nlohmann::json& doc) { write(name, doc.dump(2) + "\n"); }

void ArtifactWriter::commit(const nlohmann::json& extra) {
  nlohmann::json manifest = extra;
  manifest["command"] = command_;
  manifest["artifacts"] = entries_;
  const std::string bytes = manifest.dump(2) + "\n";
  const fs::path tmp = dir_ / ".manifest.json.tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) throw std::runtime_error("cannot write manifest");
  }
  fs::rename(tmp, dir_ / "manifest.json");
  committed_ = true;
}

}  // namespace kppfront::cli
