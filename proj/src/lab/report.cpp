#include "obslab/lab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace obslab::lab {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvSeries::render() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

RunReport::RunReport(std::string id, std::string subcommand, std::uint64_t seed)
    : id_(std::move(id)), subcommand_(std::move(subcommand)), seed_(seed) {}

void RunReport::section(const std::string& name) { sections_.push_back({name, {}}); }

void RunReport::add(const std::string& key, const std::string& value) {
  if (sections_.empty()) section("result");
  sections_.back().records.emplace_back(key, value);
}

void RunReport::add(const std::string& key, double value) { add(key, format_double(value)); }

void RunReport::add(const std::string& key, std::int64_t value) {
  add(key, std::to_string(value));
}

void RunReport::timing(const std::string& key, double seconds) {
  timings_.emplace_back(key, seconds);
}

void RunReport::attach(CsvSeries series) { series_.push_back(std::move(series)); }

bool RunReport::empty() const {
  for (const auto& s : sections_) {
    if (!s.records.empty()) return false;
  }
  return series_.empty();
}

std::string RunReport::render(bool with_timings) const {
  std::ostringstream out;
  out << "experiment: " << id_ << '\n';
  out << "subcommand: " << subcommand_ << '\n';
  out << "seed: " << seed_ << '\n';
  out << "status: " << status_ << '\n';
  if (!config_echo_.empty()) {
    out << "\n[config]\n";
    std::istringstream lines(config_echo_);
    std::string line;
    while (std::getline(lines, line)) {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      out << line.substr(0, eq) << ": " << line.substr(eq + 3) << '\n';
    }
  }
  for (const auto& s : sections_) {
    out << "\n[" << s.name << "]\n";
    for (const auto& [k, v] : s.records) out << k << ": " << v << '\n';
  }
  if (!series_.empty()) {
    out << "\n[files]\n";
    for (const auto& c : series_) out << "csv: " << c.name << '\n';
  }
  if (with_timings && !timings_.empty()) {
    out << "\n[timing]\n";
    for (const auto& [k, v] : timings_) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f", v);
      out << "timing." << k << ": " << buf << '\n';
    }
  }
  return out.str();
}

std::string RunReport::value(const std::string& section, const std::string& key) const {
  for (const auto& s : sections_) {
    if (s.name != section) continue;
    for (const auto& [k, v] : s.records) {
      if (k == key) return v;
    }
  }
  return "";
}

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory '" + dir + "'");
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

int emit_plot_data(const RunReport& report, const std::string& dir) {
  if (report.series().empty()) return 0;
  ensure_dir(dir);
  int written = 0;
  for (const auto& c : report.series()) {
    write_file(fs::path(dir) / c.name, c.render());
    ++written;
  }
  return written;
}

int write_report(const RunReport& report, const std::string& dir) {
  if (report.empty()) return 0;
  ensure_dir(dir);
  write_file(fs::path(dir) / "report.txt", report.render());
  return 1 + emit_plot_data(report, dir);
}

}  // namespace obslab::lab
