#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "landau/config.hpp"

namespace landau::cli {

using Json = nlohmann::ordered_json;

// FNV-1a over the canonical config dump, the seed and the subcommand
std::string inputs_digest(const RunConfig& c, const std::string& subcommand);

struct Report {
  std::string type;
  Json metrics = Json::object();
  bool pass = false;
  std::vector<std::string> files;  // written next to report.json
};

// writes dir/report.json; no timestamps, so reruns give identical bytes
void write_report(const std::filesystem::path& dir, const std::string& subcommand, const RunConfig& c,
                  const Report& r);

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::vector<std::string>& header);
  Csv& operator<<(double x);
  Csv& operator<<(const std::string& s);
  void end_row();

 private:
  std::ofstream os_;
  bool first_ = true;
};

// JSON has no inf/nan; they are written as strings
Json num(double x);

}  // namespace landau::cli
