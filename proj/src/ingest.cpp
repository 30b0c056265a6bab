#include "stresskit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "stresskit/error.hpp"

namespace stresskit {

namespace {

// Strict field parsers. std::from_chars is locale-free and requires the
// whole field to be consumed, so "1000.5" fails as an integer and "1e3x"
// fails as a real.
bool parse_i64(const std::string& field, std::int64_t& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !field.empty();
}

bool parse_f64(const std::string& field, double& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !field.empty() &&
         std::isfinite(out);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Reads one line, tolerating a trailing \r from CRLF input.
bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

std::vector<SensorSample> parse_sensor_stream(std::istream& in,
                                              ParseReport& report) {
  std::string line;
  if (!read_line(in, line)) throw format_error("sensor CSV: missing header");
  if (line != "t,hr,ax,ay,az") {
    throw format_error("sensor CSV: bad header '" + line +
                       "' (expected 't,hr,ax,ay,az')");
  }

  std::vector<SensorSample> samples;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      report.rejects.push_back({line_no, line, "expected 5 fields"});
      continue;
    }
    SensorSample s;
    if (!parse_i64(fields[0], s.t)) {
      report.rejects.push_back({line_no, line, "t must be integral seconds"});
      continue;
    }
    if (!parse_f64(fields[1], s.hr) || s.hr < 0.0) {
      report.rejects.push_back({line_no, line, "hr must be a finite non-negative real"});
      continue;
    }
    if (!parse_f64(fields[2], s.ax) || !parse_f64(fields[3], s.ay) ||
        !parse_f64(fields[4], s.az)) {
      report.rejects.push_back({line_no, line, "acceleration must be finite reals"});
      continue;
    }
    samples.push_back(s);
    ++report.accepted;
  }
  return samples;
}

std::vector<StressEvent> parse_event_log(std::istream& in,
                                         ParseReport& report) {
  std::string line;
  if (!read_line(in, line)) throw format_error("event CSV: missing header");
  if (line != "t") {
    throw format_error("event CSV: bad header '" + line + "' (expected 't')");
  }

  std::vector<StressEvent> events;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    StressEvent e;
    if (!parse_i64(line, e.t)) {
      report.rejects.push_back({line_no, line, "t must be integral seconds"});
      continue;
    }
    events.push_back(e);
    ++report.accepted;
  }
  return events;
}

ParticipantRecord assemble_participant(std::string id,
                                       std::vector<SensorSample> samples,
                                       std::vector<StressEvent> events,
                                       AssemblyReport& report) {
  ParticipantRecord rec;
  rec.id = std::move(id);

  // Stable sort + keep-first dedup so equal-timestamp collisions resolve
  // to the earliest row in file order.
  std::stable_sort(samples.begin(), samples.end(),
                   [](const SensorSample& a, const SensorSample& b) {
                     return a.t < b.t;
                   });
  rec.samples.reserve(samples.size());
  for (const auto& s : samples) {
    if (!rec.samples.empty() && rec.samples.back().t == s.t) {
      ++report.duplicate_samples_dropped;
      continue;
    }
    rec.samples.push_back(s);
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const StressEvent& a, const StressEvent& b) {
                     return a.t < b.t;
                   });
  rec.events = std::move(events);
  return rec;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "0";
  return std::string(buf, ptr);
}

void write_sensor_csv(const ParticipantRecord& rec, std::ostream& out) {
  out << "t,hr,ax,ay,az\n";
  for (const auto& s : rec.samples) {
    out << s.t << ',' << format_double(s.hr) << ',' << format_double(s.ax)
        << ',' << format_double(s.ay) << ',' << format_double(s.az) << '\n';
  }
}

void write_event_csv(const ParticipantRecord& rec, std::ostream& out) {
  out << "t\n";
  for (const auto& e : rec.events) out << e.t << '\n';
}

void write_participant(const ParticipantRecord& rec,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / (rec.id + ".sensor.csv"), std::ios::binary);
    if (!f) throw error("cannot write sensor CSV for " + rec.id);
    write_sensor_csv(rec, f);
  }
  {
    std::ofstream f(dir / (rec.id + ".events.csv"), std::ios::binary);
    if (!f) throw error("cannot write event CSV for " + rec.id);
    write_event_csv(rec, f);
  }
}

std::vector<ParticipantRecord> load_cohort(const std::filesystem::path& dir,
                                           CohortLoadReport& report) {
  if (!std::filesystem::is_directory(dir)) {
    throw format_error("cohort directory not found: " + dir.string());
  }

  std::vector<std::string> ids;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    const std::string suffix = ".sensor.csv";
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      ids.push_back(name.substr(0, name.size() - suffix.size()));
    }
  }
  std::sort(ids.begin(), ids.end());

  std::vector<ParticipantRecord> cohort;
  cohort.reserve(ids.size());
  for (const auto& id : ids) {
    std::ifstream sensor(dir / (id + ".sensor.csv"), std::ios::binary);
    if (!sensor) throw format_error("cannot open sensor CSV for " + id);
    ParseReport sensor_report;
    auto samples = parse_sensor_stream(sensor, sensor_report);
    report.total_sample_rows += sensor_report.accepted + sensor_report.rejects.size();

    std::vector<StressEvent> events;
    const auto events_path = dir / (id + ".events.csv");
    if (std::filesystem::exists(events_path)) {
      std::ifstream ev(events_path, std::ios::binary);
      if (!ev) throw format_error("cannot open event CSV for " + id);
      ParseReport event_report;
      events = parse_event_log(ev, event_report);
      report.total_event_rows += event_report.accepted + event_report.rejects.size();
      for (auto& r : event_report.rejects) report.rejects.push_back(std::move(r));
    }
    for (auto& r : sensor_report.rejects) report.rejects.push_back(std::move(r));

    AssemblyReport assembly;
    cohort.push_back(assemble_participant(id, std::move(samples),
                                          std::move(events), assembly));
    report.duplicate_samples_dropped += assembly.duplicate_samples_dropped;
  }
  return cohort;
}

const std::array<std::string, kNumFeatures>& feature_names() {
  static const std::array<std::string, kNumFeatures> names = {
      "mean_hr", "max_hr",  "min_hr",  "std_hr",  "range_hr",
      "mean_acc", "max_acc", "min_acc", "std_acc", "range_acc"};
  return names;
}

}  // namespace stresskit
