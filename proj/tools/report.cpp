#include "report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace landau::cli {

std::string inputs_digest(const RunConfig& c, const std::string& subcommand) {
  const std::string text = dump_config(c) + "seed=" + std::to_string(c.seed) + "\nsubcommand=" + subcommand + "\n";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// the canonical dump as {section: {key: value}}
Json config_json(const RunConfig& c) {
  Json out = Json::object();
  std::istringstream is(dump_config(c));
  std::string line, sec;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      sec = line.substr(1, line.size() - 2);
      out[sec] = Json::object();
      continue;
    }
    const auto eq = line.find(" = ");
    out[sec][line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

}  // namespace

void write_report(const std::filesystem::path& dir, const std::string& subcommand, const RunConfig& c,
                  const Report& r) {
  std::filesystem::create_directories(dir);
  Json j;
  j["report_type"] = r.type;
  j["inputs"] = {{"digest", inputs_digest(c, subcommand)},
                 {"subcommand", subcommand},
                 {"seed", c.seed},
                 {"config", config_json(c)}};
  j["metrics"] = r.metrics;
  j["files"] = r.files;
  j["verdict"] = r.pass ? "pass" : "fail";
  std::ofstream os(dir / "report.json");
  if (!os) throw std::runtime_error("cannot write " + (dir / "report.json").string());
  os << j.dump(2) << '\n';
}

Csv::Csv(const std::filesystem::path& path, const std::vector<std::string>& header) : os_(path) {
  if (!os_) throw std::runtime_error("cannot write " + path.string());
  for (const auto& h : header) *this << h;
  end_row();
}

Csv& Csv::operator<<(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return *this << std::string(buf);
}

Csv& Csv::operator<<(const std::string& s) {
  if (!first_) os_ << ',';
  os_ << s;
  first_ = false;
  return *this;
}

void Csv::end_row() {
  os_ << '\n';
  first_ = true;
}

Json num(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace landau::cli
