#pragma once

// Local master/worker driver over a grid catalogue file: batches handed out
// first come first served, results recorded by the master alone, and a
// checkpoint that lets an interrupted run resume where it stopped.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "critset/checker.hpp"

namespace critset {

struct WorkBatch {
  enum class Status { kPending, kInFlight, kDone };
  std::size_t batch_id = 0;
  std::size_t start = 0;  // grid line range [start, end)
  std::size_t end = 0;
  Status status = Status::kPending;
};

std::vector<WorkBatch> make_batches(std::size_t grid_count, std::size_t batch_size);

struct Checkpoint {
  std::string digest;
  int k = 0;
  std::size_t batch_count = 0;
  std::set<std::size_t> done;
};

/// `<byte size>-<FNV-1a 64 hex>` of the file contents.
std::string catalogue_digest(const std::string& path);
std::string format_checkpoint(const Checkpoint& cp);
/// Throws FarmError on a malformed file.
Checkpoint parse_checkpoint(const std::string& text);
/// Writes to a temporary file, then renames over `path`.
void write_checkpoint_atomic(const std::string& path, const Checkpoint& cp);

class FarmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by run_farm when a fault injection stops the master.
class FarmKilled : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FaultInjection {
  enum class Point {
    kBeforeCheckpoint,  // record written, checkpoint not yet updated
    kTornRecord,        // record cut off halfway
    kAfterCheckpoint,   // record and checkpoint both written
  };
  /// Stop the master while recording this (1-based) batch of the run.
  std::optional<std::size_t> kill_at_record;
  Point point = Point::kAfterCheckpoint;
  /// A worker throws once while processing this batch.
  std::optional<std::size_t> fail_batch_once;
};

struct FarmOptions {
  std::string catalogue_path;
  int k = 16;
  std::size_t workers = 1;
  std::size_t batch_size = 16;
  std::string checkpoint_path;
  std::string output_path;
  /// Wall-clock seconds; in-flight batches are abandoned past it.
  std::optional<double> time_budget_s;
  std::function<SearchConfig(const GridShape&)> config_for;
  FaultInjection fault;
  /// Cap `workers` by the CHECKER_THREADS environment variable.
  bool respect_env = true;
};

struct FarmSummary {
  std::size_t batches_total = 0;
  std::size_t batches_already_done = 0;
  std::size_t batches_recorded = 0;
  std::size_t batches_abandoned = 0;
  std::size_t worker_failures = 0;
  std::size_t grids_searched = 0;
  std::size_t workers_used = 0;
  bool finished = false;
};

FarmSummary run_farm(const FarmOptions& options);

struct MergedRecord {
  std::size_t batch_id = 0;
  /// One entry per grid: the report line plus its indented puzzle lines.
  std::vector<std::string> grid_records;
};

/// Complete batch records in batch order, duplicates collapsed (the last
/// complete copy wins). Torn records are ignored. Throws FarmError when two
/// copies of a batch disagree on anything but elapsed time.
std::vector<MergedRecord> merge_outputs(const std::string& output_path);

/// A grid record with the elapsed-time column blanked.
std::string stable_record(const std::string& grid_record);

}  // namespace critset
