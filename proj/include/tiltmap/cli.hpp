#pragma once

// Batch commands behind the `tiltmap` executable and the local data server
// used by the viewer.

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "tiltmap/error.hpp"

namespace tiltmap {

/// 2 for bad input, 3 for generation or search failures, 4 for I/O.
int exit_code_for(Errc code) noexcept;

/// Runs one command line (args excludes the program name). Errors are
/// reported as a single "Name: detail" line on `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

struct ServeConfig {
  std::filesystem::path data_dir;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> map;
  std::optional<std::filesystem::path> layer;

  /// {dataDir, outDir, map?, layer?}; relative paths resolve against the
  /// config file's directory. Throws IoError, MalformedDocument.
  static ServeConfig load(const std::filesystem::path& path);
};

/// GET <path>      file under dataDir, byte for byte
/// GET /api/scene  ?tilt=&azimuth=&style= for the configured map and layer
/// PUT /traces/<name>  stores the body under outDir, 201
class DataServer {
 public:
  explicit DataServer(ServeConfig config);
  ~DataServer();
  DataServer(const DataServer&) = delete;
  DataServer& operator=(const DataServer&) = delete;

  /// port 0 picks a free port. Throws PortInUse. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tiltmap
