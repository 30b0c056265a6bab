#include "stresskit/features.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "stresskit/error.hpp"
#include "stresskit/ingest.hpp"
#include "stresskit/kernels.hpp"

namespace stresskit {

double acc_magnitude(double ax, double ay, double az) {
  double out = 0.0;
  kernels::magnitude3(&ax, &ay, &az, &out, 1);
  return out;
}

namespace {

struct Stats {
  double mean, mx, mn, sd, range;
};

Stats signal_stats(const std::vector<double>& x) {
  const std::size_t n = x.size();
  Stats s{};
  s.mean = kernels::sum(x.data(), n) / static_cast<double>(n);
  kernels::minmax(x.data(), n, s.mn, s.mx);
  s.range = s.mx - s.mn;
  s.sd = n > 1 ? std::sqrt(kernels::sum_sq_dev(x.data(), n, s.mean) /
                           static_cast<double>(n - 1))
               : 0.0;
  return s;
}

}  // namespace

FeatureVector featurize(const Window& window) {
  const std::size_t n = window.samples.size();
  if (n == 0) {
    throw error("featurize: empty window (windows must pass coverage_filter)");
  }

  std::vector<double> hr(n), ax(n), ay(n), az(n), acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = window.samples[i];
    hr[i] = s.hr;
    ax[i] = s.ax;
    ay[i] = s.ay;
    az[i] = s.az;
  }
  kernels::magnitude3(ax.data(), ay.data(), az.data(), acc.data(), n);

  const Stats h = signal_stats(hr);
  const Stats a = signal_stats(acc);

  FeatureVector row;
  row.participant_id = window.participant_id;
  row.label = window.label;
  row.v[feat::mean_hr] = h.mean;
  row.v[feat::max_hr] = h.mx;
  row.v[feat::min_hr] = h.mn;
  row.v[feat::std_hr] = h.sd;
  row.v[feat::range_hr] = h.range;
  row.v[feat::mean_acc] = a.mean;
  row.v[feat::max_acc] = a.mx;
  row.v[feat::min_acc] = a.mn;
  row.v[feat::std_acc] = a.sd;
  row.v[feat::range_acc] = a.range;
  return row;
}

std::vector<FeatureVector> featurize_all(const std::vector<Window>& windows) {
  std::vector<FeatureVector> rows;
  rows.reserve(windows.size());
  for (const auto& w : windows) rows.push_back(featurize(w));
  return rows;
}

void write_feature_csv(const std::vector<FeatureVector>& rows,
                       std::ostream& out) {
  out << "participant_id,label";
  for (const auto& name : feature_names()) out << ',' << name;
  out << '\n';
  for (const auto& row : rows) {
    out << row.participant_id << ',' << label_value(row.label);
    for (const double value : row.v) out << ',' << format_double(value);
    out << '\n';
  }
}

std::vector<FeatureVector> read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw format_error("feature CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::string expected = "participant_id,label";
  for (const auto& name : feature_names()) expected += "," + name;
  if (line != expected) {
    throw format_error("feature CSV: bad header '" + line + "'");
  }

  std::vector<FeatureVector> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    FeatureVector row;
    std::size_t start = 0;
    std::size_t field_idx = 0;
    bool ok = true;
    while (start <= line.size() && field_idx < 2 + kNumFeatures) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      const std::string field = line.substr(start, comma - start);
      if (field_idx == 0) {
        row.participant_id = field;
      } else if (field_idx == 1) {
        if (field == "1") {
          row.label = Label::stress;
        } else if (field == "0") {
          row.label = Label::nonstress;
        } else {
          ok = false;
        }
      } else {
        double value = 0.0;
        auto [ptr, ec] =
            std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc() || ptr != field.data() + field.size()) {
          ok = false;
        }
        row.v[field_idx - 2] = value;
      }
      if (!ok) break;
      ++field_idx;
      start = comma + 1;
    }
    if (!ok || field_idx != 2 + kNumFeatures) {
      throw format_error("feature CSV: bad row at line " +
                         std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace stresskit
