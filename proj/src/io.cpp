#include "lfgw/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lfgw {

using nlohmann::json;

std::string path_to_jsonl(const std::vector<EnvPair>& pairs) {
  std::string out;
  for (const EnvPair& p : pairs) {
    json j;
    j["A"] = p.A;
    j["B"] = p.B;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<EnvPair> path_from_jsonl(const std::string& text) {
  std::vector<EnvPair> pairs;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("path_from_jsonl: line " +
                               std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("A") || !j.contains("B")) {
      throw std::runtime_error("path_from_jsonl: line " +
                               std::to_string(lineno) +
                               ": expected {\"A\": ..., \"B\": ...}");
    }
    pairs.emplace_back(j["A"].get<double>(), j["B"].get<double>());
  }
  return pairs;
}

std::string records_to_jsonl(const std::vector<ReplicateRecord>& batch) {
  std::string out;
  for (const ReplicateRecord& r : batch) {
    json j;
    j["replicate"] = r.replicate;
    j["z_final"] = r.z_final;
    j["saturated"] = r.saturated;
    j["survived"] = r.survived;
    j["weight"] = r.weight;
    j["log_pi"] = r.log_pi;
    j["r_dual"] = r.r_dual;
    if (!r.z_trace.empty()) j["z_trace"] = r.z_trace;
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string summary_csv(
    const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string out = "key,value\n";
  out += "schema_version,";
  out += kSchemaVersion;
  out += '\n';
  for (const auto& [k, v] : rows) {
    out += csv_escape(k);
    out += ',';
    out += csv_escape(v);
    out += '\n';
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("atomic_write: cannot open " + tmp);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("atomic_write: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("atomic_write: rename failed for " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_file: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace lfgw
