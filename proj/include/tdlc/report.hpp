#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/parse_util.hpp"

namespace tdlc {

using json = nlohmann::ordered_json;

// One verified statement. Records carry no timings and no environment data,
// so a fixed config and seed reproduce the record stream byte for byte.
struct Record {
  std::string family;
  std::string check;
  json inputs = json::object();
  json outputs = json::object();
  bool verdict = false;
  json certificate = json::object();

  json to_json() const {
    json j;
    j["family"] = family;
    j["check"] = check;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["verdict"] = verdict;
    j["certificate"] = certificate;
    return j;
  }

  static Record from_json(const json& j) {
    Record r;
    r.family = j.at("family").get<std::string>();
    r.check = j.at("check").get<std::string>();
    r.inputs = j.at("inputs");
    r.outputs = j.at("outputs");
    r.verdict = j.at("verdict").get<bool>();
    r.certificate = j.at("certificate");
    return r;
  }
};

struct RunReport {
  std::vector<Record> records;
  double wall_ms = 0;  // console display only; never serialized

  int passes() const {
    int n = 0;
    for (const Record& r : records) n += r.verdict ? 1 : 0;
    return n;
  }
  int failures() const { return static_cast<int>(records.size()) - passes(); }
  bool all_passed() const { return failures() == 0; }

  void add(Record r) { records.push_back(std::move(r)); }

  void write_jsonl(std::ostream& out) const {
    for (const Record& r : records) out << r.to_json().dump() << "\n";
  }

  std::string jsonl() const {
    std::ostringstream ss;
    write_jsonl(ss);
    return ss.str();
  }

  // Aggregate counts per (family, check), in first-appearance order.
  void write_csv(std::ostream& out) const {
    out << "family,check,cases,passes,failures\n";
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::pair<int, int>> agg;
    for (const Record& r : records) {
      auto key = std::make_pair(r.family, r.check);
      auto it = agg.find(key);
      if (it == agg.end()) {
        order.push_back(key);
        it = agg.emplace(key, std::make_pair(0, 0)).first;
      }
      if (r.verdict) ++it->second.first;
      else ++it->second.second;
    }
    for (const auto& key : order) {
      const auto& [pass, fail] = agg.at(key);
      out << key.first << "," << key.second << "," << (pass + fail) << ","
          << pass << "," << fail << "\n";
    }
  }

  std::string summary_text() const {
    std::ostringstream ss;
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::pair<int, int>> agg;
    for (const Record& r : records) {
      auto key = std::make_pair(r.family, r.check);
      auto it = agg.find(key);
      if (it == agg.end()) {
        order.push_back(key);
        it = agg.emplace(key, std::make_pair(0, 0)).first;
      }
      if (r.verdict) ++it->second.first;
      else ++it->second.second;
    }
    for (const auto& key : order) {
      const auto& [pass, fail] = agg.at(key);
      ss << (fail == 0 ? "pass " : "FAIL ") << key.first << "/" << key.second
         << ": " << pass << "/" << (pass + fail) << "\n";
    }
    ss << (all_passed() ? "all checks passed" : "CHECK FAILURES PRESENT")
       << " (" << records.size() << " records)\n";
    return ss.str();
  }
};

inline std::vector<Record> read_jsonl(std::istream& in) {
  std::vector<Record> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw parse_error("record line is not valid JSON", line_no);
    try {
      out.push_back(Record::from_json(j));
    } catch (const json::exception& e) {
      throw parse_error(std::string("record line is malformed: ") + e.what(),
                        line_no);
    }
  }
  return out;
}

inline std::vector<Record> read_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw structural_error("cannot open records file " + path);
  return read_jsonl(in);
}

}  // namespace tdlc
