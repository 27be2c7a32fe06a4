#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace obslab::lab {

// Comma separated series with a fixed header row.
struct CsvSeries {
  std::string name;  // file name, e.g. "trace.csv"
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string render() const;
};

// Records grouped into sections; rendered as `key: value` lines with blank
// lines between sections. Timing entries are kept apart so that reports can
// be compared byte for byte without them.
class RunReport {
 public:
  RunReport() = default;
  RunReport(std::string id, std::string subcommand, std::uint64_t seed);

  void section(const std::string& name);
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, std::int64_t value);
  void add(const std::string& key, int value) { add(key, static_cast<std::int64_t>(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void timing(const std::string& key, double seconds);
  void attach(CsvSeries series);

  void set_config_echo(std::string canonical) { config_echo_ = std::move(canonical); }
  void set_status(std::string status) { status_ = std::move(status); }
  const std::string& status() const { return status_; }
  const std::string& id() const { return id_; }

  // No records and no series.
  bool empty() const;
  const std::vector<CsvSeries>& series() const { return series_; }

  std::string render(bool with_timings = true) const;
  // Lookup of a record value by "section.key"; empty when absent.
  std::string value(const std::string& section, const std::string& key) const;

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> records;
  };

  std::string id_;
  std::string subcommand_;
  std::uint64_t seed_ = 0;
  std::string config_echo_;
  std::string status_ = "ok";
  std::vector<Section> sections_;
  std::vector<std::pair<std::string, double>> timings_;
  std::vector<CsvSeries> series_;
};

std::string format_double(double v);

// Writes every attached series into dir; returns the number of files written
// (zero for an empty report). Throws std::runtime_error when dir is unwritable.
int emit_plot_data(const RunReport& report, const std::string& dir);

// Writes dir/report.txt and the series. Nothing is written for an empty report.
int write_report(const RunReport& report, const std::string& dir);

}  // namespace obslab::lab
