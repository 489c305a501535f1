#pragma once

// Command layer behind the gosc executable: requests, records, the ordered
// worker pool and the CSV / JSON-lines writers. The executable only parses
// arguments and forwards here, so every command is callable from tests.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gosc/rayleigh_ritz.hpp"

namespace gosc::cli {

inline constexpr const char* kVersion = "0.1.0";
/// Environment variable overriding the default working precision.
inline constexpr const char* kDigitsEnv = "GOSC_DIGITS";

inline constexpr int kDefaultSweepDigits = 30;
inline constexpr int kDefaultSolverDigits = 50;  // critical, eps
inline constexpr int kDefaultHftDigits = 30;

/// Precision resolution: flag, then environment, then the command default.
/// Throws InvalidInput on a malformed or non-positive environment value.
int resolve_digits(std::optional<int> flag, int command_default);

/// One output row. `data` maps column names to values; numbers that carry
/// working precision are decimal strings.
struct Record {
  nlohmann::ordered_json data;
  bool ok = true;
};

using Sink = std::function<void(const Record&)>;

/// Runs task(0..count-1) on `jobs` threads (0 = hardware concurrency) and
/// hands each task's records to `sink` in task order, as soon as every
/// earlier task has finished. An exception escaping a task becomes a failed
/// record of kind "error".
void run_ordered(std::size_t count, int jobs, const std::function<std::vector<Record>(std::size_t)>& task,
                 const Sink& sink);

struct SweepRequest {
  std::string lambda_min = "-10";
  std::string lambda_max = "10";
  int steps = 81;
  std::vector<int> states{0, 1};
  std::vector<Method> methods{Method::RR, Method::PT};
  int digits = kDefaultSweepDigits;
  int target_digits = 0;  // RR convergence target; 0 = digits / 2
  bool guides = true;     // append the +-|lambda_EP| guide positions
  int jobs = 0;

  /// Throws InvalidInput. steps = 1 is allowed only with lambda_min == lambda_max.
  void validate() const;
};

enum class CriticalMethod { RR, RPM, both, PT };
CriticalMethod parse_critical_method(const std::string& text);

struct CriticalRequest {
  int n = 0;
  CriticalMethod method = CriticalMethod::both;
  int digits = kDefaultSolverDigits;
  bool heroic = false;  // ladder up to D = 380; hours of runtime
  int jobs = 0;

  void validate() const;
};

struct EpsRequest {
  Parity sector = Parity::even;
  SearchBox box{-4, 0, 0, 4};
  int digits = kDefaultSolverDigits;
  int seed_D = 10;
  std::vector<int> ladder{10, 15, 20, 30, 40};
  int jobs = 0;

  void validate() const;
};

struct HftRequest {
  int n = 0;
  std::string lambda = "0";
  std::string h = "1e-6";
  int D = 80;
  int digits = kDefaultHftDigits;

  void validate() const;
};

/// Parses "re0,re1,im0,im1".
SearchBox parse_box(const std::string& text, const PrecisionCtx& ctx);

/// Column schemas, also printed by --help.
const std::vector<std::string>& sweep_columns();
const std::vector<std::string>& critical_columns();
const std::vector<std::string>& eps_columns();
const std::vector<std::string>& hft_columns();

/// Each command streams its records into `sink` in a fixed order and
/// returns true when every record was produced.
bool cmd_sweep(const SweepRequest& req, const Sink& sink);
bool cmd_critical(const CriticalRequest& req, const Sink& sink);
bool cmd_eps(const EpsRequest& req, const Sink& sink);
bool cmd_hft(const HftRequest& req, const Sink& sink);

/// Collects records in memory.
struct Dataset {
  std::vector<Record> records;
  bool ok = true;
  Sink sink() {
    return [this](const Record& r) { records.push_back(r); };
  }
};

struct Metadata {
  std::string command;  // echo of the command line
  int digits = 0;
  std::string timestamp;  // ISO 8601, UTC
};
std::string utc_timestamp();

enum class Format { csv, jsonl };
/// csv unless the path ends in .jsonl or .json.
Format format_for_path(const std::string& path);

/// Streaming writers. The metadata goes first: "# key: value" comment lines
/// before the CSV header, or a single {"kind":"metadata",...} object in
/// JSON-lines. Everything after it depends only on the command line.
class Writer {
 public:
  Writer(std::ostream& out, Format format, std::vector<std::string> columns, const Metadata& meta);
  void write(const Record& r);

 private:
  std::ostream& out_;
  Format format_;
  std::vector<std::string> columns_;
};

std::string csv_escape(const std::string& field);

}  // namespace gosc::cli
