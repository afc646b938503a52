#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tdlc/parse_util.hpp"
#include "tdlc/rational.hpp"
#include "tdlc/scale.hpp"

namespace tdlc {

// Everything a battery run depends on. A config plus its seed determines
// every output byte of the run records. Unknown sections or keys are
// rejected before any computation starts.
struct ExperimentConfig {
  // [run]
  std::uint64_t seed = 20260814;
  std::vector<std::string> families = {"affine", "sym3", "lamplighter"};
  std::string records_path = "records.jsonl";
  std::string summary_path = "summary.csv";

  // [affine]
  long long prime = 2;                            // instance for sampled checks
  std::vector<long long> value_set_primes = {2, 3, 5};
  std::vector<long long> moduli = {2, 3, 4};      // H = Q_p x| mZ value sets
  long long modulus = 3;                          // H for the witness search

  // [checks]
  int value_set_k_max = 6;
  int value_set_h_k_max = 4;
  int witness_samples = 200;
  int witness_membership_samples = 20;
  int double_coset_samples = 500;
  int double_coset_n_max = 4;
  int tidy_pairs = 200;
  int conjugator_samples = 100;
  int conjugator_k = 16;
  int power_samples = 500;
  int periodic_samples = 1000;
  int divisible_samples = 25;
  int divisible_k_max = 8;
  long long n_max = 36;
  int max_steps = 64;
  int spot_samples = 100;
  int candidate_bound = 2;
  int sample_bound = 3;

  EngineOptions engine() const {
    return EngineOptions{max_steps, spot_samples, candidate_bound,
                         sample_bound};
  }

  bool has_family(std::string_view name) const {
    return std::find(families.begin(), families.end(), name) !=
           families.end();
  }

  void validate() const {
    if (!is_prime(Int(prime)))
      throw structural_error("affine prime " + std::to_string(prime) +
                             " is not prime");
    if (value_set_primes.empty())
      throw structural_error("value_set_primes must not be empty");
    for (long long p : value_set_primes)
      if (!is_prime(Int(p)))
        throw structural_error("value_set_primes entry " +
                               std::to_string(p) + " is not prime");
    if (modulus < 1) throw structural_error("modulus must be >= 1");
    for (long long m : moduli)
      if (m < 1) throw structural_error("moduli entries must be >= 1");
    for (const std::string& fam : families)
      if (fam != "affine" && fam != "sym3" && fam != "lamplighter")
        throw structural_error("unknown family \"" + fam + "\"");
    auto nonneg = [](long long v, const char* name) {
      if (v < 0)
        throw structural_error(std::string(name) + " must be >= 0");
    };
    nonneg(value_set_k_max, "value_set_k_max");
    nonneg(value_set_h_k_max, "value_set_h_k_max");
    nonneg(witness_samples, "witness_samples");
    nonneg(witness_membership_samples, "witness_membership_samples");
    nonneg(double_coset_samples, "double_coset_samples");
    nonneg(tidy_pairs, "tidy_pairs");
    nonneg(conjugator_samples, "conjugator_samples");
    nonneg(conjugator_k, "conjugator_k");
    nonneg(power_samples, "power_samples");
    nonneg(periodic_samples, "periodic_samples");
    nonneg(divisible_samples, "divisible_samples");
    nonneg(spot_samples, "spot_samples");
    nonneg(candidate_bound, "candidate_bound");
    nonneg(max_steps, "max_steps");
    if (double_coset_n_max < 1)
      throw structural_error("double_coset_n_max must be >= 1");
    if (n_max < 1) throw structural_error("n_max must be >= 1");
    if (sample_bound < 1) throw structural_error("sample_bound must be >= 1");
    if (divisible_k_max < 0 || divisible_k_max > 20)
      throw structural_error("divisible_k_max must be in [0, 20]");
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

inline long long to_int(const std::string& v, const std::string& key,
                        std::size_t line) {
  try {
    std::size_t used = 0;
    long long r = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw parse_error("value of " + key + " is not an integer: \"" + v + "\"",
                      line);
  }
}

inline std::uint64_t to_uint(const std::string& v, const std::string& key,
                             std::size_t line) {
  try {
    // stoull would wrap a leading minus around instead of failing
    if (v.empty() || v.front() == '-') throw std::invalid_argument(v);
    std::size_t used = 0;
    std::uint64_t r = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw parse_error("value of " + key + " is not a 64-bit seed: \"" + v +
                          "\"",
                      line);
  }
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

inline std::vector<long long> split_ints(const std::string& v,
                                         const std::string& key,
                                         std::size_t line) {
  std::vector<long long> out;
  for (const std::string& item : split_list(v))
    out.push_back(to_int(item, key, line));
  return out;
}

}  // namespace detail

// Structured text config: "[section]" headers, "key = value" entries,
// comments starting with '#' or ';'. The position reported on errors is the
// 1-based line number.
inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  std::stringstream ss{std::string(text)};
  std::string raw;
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string line = raw;
    std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw parse_error("unterminated section header", line_no);
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "affine" && section != "checks")
        throw parse_error("unknown section [" + section + "]", line_no);
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw parse_error("expected key = value", line_no);
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw parse_error("empty key", line_no);
    if (section.empty())
      throw parse_error("key \"" + key + "\" outside any section", line_no);
    auto ival = [&] { return detail::to_int(value, key, line_no); };
    if (section == "run") {
      if (key == "seed") cfg.seed = detail::to_uint(value, key, line_no);
      else if (key == "families") cfg.families = detail::split_list(value);
      else if (key == "records") cfg.records_path = value;
      else if (key == "summary") cfg.summary_path = value;
      else throw parse_error("unknown key \"" + key + "\" in [run]", line_no);
    } else if (section == "affine") {
      if (key == "prime") cfg.prime = ival();
      else if (key == "value_set_primes")
        cfg.value_set_primes = detail::split_ints(value, key, line_no);
      else if (key == "moduli")
        cfg.moduli = detail::split_ints(value, key, line_no);
      else if (key == "modulus") cfg.modulus = ival();
      else
        throw parse_error("unknown key \"" + key + "\" in [affine]", line_no);
    } else {  // [checks]
      if (key == "value_set_k_max") cfg.value_set_k_max = static_cast<int>(ival());
      else if (key == "value_set_h_k_max") cfg.value_set_h_k_max = static_cast<int>(ival());
      else if (key == "witness_samples") cfg.witness_samples = static_cast<int>(ival());
      else if (key == "witness_membership_samples") cfg.witness_membership_samples = static_cast<int>(ival());
      else if (key == "double_coset_samples") cfg.double_coset_samples = static_cast<int>(ival());
      else if (key == "double_coset_n_max") cfg.double_coset_n_max = static_cast<int>(ival());
      else if (key == "tidy_pairs") cfg.tidy_pairs = static_cast<int>(ival());
      else if (key == "conjugator_samples") cfg.conjugator_samples = static_cast<int>(ival());
      else if (key == "conjugator_k") cfg.conjugator_k = static_cast<int>(ival());
      else if (key == "power_samples") cfg.power_samples = static_cast<int>(ival());
      else if (key == "periodic_samples") cfg.periodic_samples = static_cast<int>(ival());
      else if (key == "divisible_samples") cfg.divisible_samples = static_cast<int>(ival());
      else if (key == "divisible_k_max") cfg.divisible_k_max = static_cast<int>(ival());
      else if (key == "n_max") cfg.n_max = ival();
      else if (key == "max_steps") cfg.max_steps = static_cast<int>(ival());
      else if (key == "spot_samples") cfg.spot_samples = static_cast<int>(ival());
      else if (key == "candidate_bound") cfg.candidate_bound = static_cast<int>(ival());
      else if (key == "sample_bound") cfg.sample_bound = static_cast<int>(ival());
      else
        throw parse_error("unknown key \"" + key + "\" in [checks]", line_no);
    }
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw structural_error("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace tdlc
