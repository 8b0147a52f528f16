#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

namespace kppfront::cli {

/// Shortest text that round-trips a double (17 significant digits).
std::string format_double(double v);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Row-by-row CSV builder. Header first, then rows of numbers or text cells.
class Csv {
public:
  explicit Csv(std::initializer_list<std::string> header);
  explicit Csv(const std::vector<std::string>& header);
  Csv& row(const std::vector<double>& cells);
  Csv& row(const std::vector<std::string>& cells);
  std::size_t columns() const { return columns_; }
  const std::string& str() const { return body_; }

private:
  std::size_t columns_;
  std::string body_;
};

/// Writes artifacts into one directory with temp-file-and-rename, then a
/// manifest.json listing each file with its checksum. Unless `commit()` ran,
/// the destructor removes everything this writer produced.
class ArtifactWriter {
public:
  ArtifactWriter(std::filesystem::path dir, std::string command);
  ~ArtifactWriter();
  ArtifactWriter(const ArtifactWriter&) = delete;
  ArtifactWriter& operator=(const ArtifactWriter&) = delete;

  void write(const std::string& name, const std::string& bytes);
  void write(const std::string& name, const Csv& csv) { write(name, csv.str()); }
  void write(const std::string& name, const nlohmann::json& doc);

  /// Writes manifest.json. Any extra fields go into its top level.
  void commit(const nlohmann::json& extra = nlohmann::json::object());

  const std::filesystem::path& dir() const { return dir_; }

private:
  std::filesystem::path dir_;
  std::string command_;
  nlohmann::json entries_ = nlohmann::json::array();
  std::vector<std::filesystem::path> written_;
  bool committed_ = false;
};

}  // namespace kppfront::cli
