#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "stresskit/types.hpp"

namespace stresskit {

struct RejectedRow {
  std::size_t line_no = 0;  // 1-based, header is line 1
  std::string content;
  std::string reason;
};

// Per-stream parse outcome. accepted + rejects.size() equals the number
// of data rows seen; the parser never reorders or synthesizes rows.
struct ParseReport {
  std::size_t accepted = 0;
  std::vector<RejectedRow> rejects;
};

// Sensor CSV: header `t,hr,ax,ay,az`. t is integral seconds (the device
// samples at 1 Hz; sub-second timestamps are rejected per row), hr must
// be finite and non-negative, accelerations finite. A malformed header
// throws format_error; bad rows are collected and parsing continues.
std::vector<SensorSample> parse_sensor_stream(std::istream& in,
                                              ParseReport& report);

// Event CSV: header `t`, one integral timestamp per row. Duplicates are
// retained; windowing policy decides what to do with them.
std::vector<StressEvent> parse_event_log(std::istream& in,
                                         ParseReport& report);

struct AssemblyReport {
  std::size_t duplicate_samples_dropped = 0;
};

// Sorts samples by t keeping the first of any exact-duplicate timestamp,
// sorts events, and stamps the id. Always succeeds.
ParticipantRecord assemble_participant(std::string id,
                                       std::vector<SensorSample> samples,
                                       std::vector<StressEvent> events,
                                       AssemblyReport& report);

void write_sensor_csv(const ParticipantRecord& rec, std::ostream& out);
void write_event_csv(const ParticipantRecord& rec, std::ostream& out);

// Canonical on-disk layout: `<id>.sensor.csv` + `<id>.events.csv` in one
// directory per cohort.
void write_participant(const ParticipantRecord& rec,
                       const std::filesystem::path& dir);

struct CohortLoadReport {
  std::size_t total_sample_rows = 0;
  std::size_t total_event_rows = 0;
  std::vector<RejectedRow> rejects;
  std::size_t duplicate_samples_dropped = 0;
};

// Loads every `<id>.sensor.csv` in the directory (events file optional,
// treated as empty when absent). Records are returned sorted by id.
std::vector<ParticipantRecord> load_cohort(const std::filesystem::path& dir,
                                           CohortLoadReport& report);

// Shortest-round-trip double formatting (std::to_chars). All CSV output
// goes through this so serialize/parse is lossless and byte-stable.
std::string format_double(double value);

}  // namespace stresskit
