#pragma once

#include <fstream>
#include <iostream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tardy/core.hpp"
#include "tardy/errors.hpp"

namespace tardy {

/// Result of loading an instance file. Zero-length jobs are accepted,
/// removed, and their weight (when they can meet their due date at release)
/// folded into weight_offset; solvers then see p >= 1 throughout.
struct LoadedInstance {
  Instance instance;
  Int weight_offset = 0;
  std::size_t zero_length_removed = 0;
};

namespace detail {

inline nlohmann::json parse_json(std::istream& in, const std::string& what) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw input_error(what + ": " + ex.what());
  }
  return doc;
}

inline Int require_int(const nlohmann::json& obj, const std::string& key,
                       const std::string& where) {
  if (!obj.contains(key)) throw input_error(where + ": missing field \"" + key + "\"");
  const nlohmann::json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw input_error(where + ": field \"" + key + "\" must be an integer");
  }
  return v.get<Int>();
}

inline void reject_unknown(const nlohmann::json& obj,
                           const std::vector<std::string>& allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw input_error(where + ": expected a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const std::string& key : allowed) known = known || key == it.key();
    if (!known) throw input_error(where + ": unknown field \"" + it.key() + "\"");
  }
}

}  // namespace detail

/// Reads {"jobs":[{"p":..,"r":..,"d":..,"w":..},...]}. Unknown fields and
/// non-integer numbers are rejected.
inline LoadedInstance load_instance(std::istream& in) {
  nlohmann::json doc = detail::parse_json(in, "instance");
  detail::reject_unknown(doc, {"jobs"}, "instance");
  if (!doc.contains("jobs") || !doc.at("jobs").is_array()) {
    throw input_error("instance: expected a \"jobs\" array");
  }
  LoadedInstance out;
  std::vector<Job> jobs;
  std::size_t idx = 0;
  for (const nlohmann::json& item : doc.at("jobs")) {
    std::string where = "instance: job " + std::to_string(idx);
    detail::reject_unknown(item, {"p", "r", "d", "w"}, where);
    Job job;
    job.p = detail::require_int(item, "p", where);
    job.r = detail::require_int(item, "r", where);
    job.d = detail::require_int(item, "d", where);
    job.w = detail::require_int(item, "w", where);
    if (job.p < 0) throw input_error(where + ": processing time must be >= 0");
    if (job.r < 0 || job.d < 0 || job.w < 0) {
      throw input_error(where + ": release, due date and weight must be >= 0");
    }
    if (job.p == 0) {
      // Trivially early at its release date when that still meets the due
      // date; either way it never occupies the machine.
      if (job.r <= job.d) out.weight_offset += job.w;
      ++out.zero_length_removed;
    } else {
      jobs.push_back(job);
    }
    ++idx;
  }
  out.instance = Instance(std::move(jobs));
  return out;
}

inline LoadedInstance load_instance_file(const std::string& path) {
  if (path == "-") return load_instance(std::cin);
  std::ifstream in(path);
  if (!in) throw input_error("cannot open instance file: " + path);
  return load_instance(in);
}

inline void save_instance(std::ostream& out, const Instance& inst) {
  nlohmann::ordered_json doc;
  doc["jobs"] = nlohmann::ordered_json::array();
  for (const Job& job : inst.jobs()) {
    doc["jobs"].push_back({{"p", job.p}, {"r", job.r}, {"d", job.d}, {"w", job.w}});
  }
  out << doc.dump(2) << "\n";
}

/// Reads {"starts":[{"job":..,"start":..},...]} against a known job count.
inline Schedule load_schedule(std::istream& in, std::size_t n) {
  nlohmann::json doc = detail::parse_json(in, "schedule");
  detail::reject_unknown(doc, {"starts"}, "schedule");
  if (!doc.contains("starts") || !doc.at("starts").is_array()) {
    throw input_error("schedule: expected a \"starts\" array");
  }
  std::vector<std::pair<std::size_t, Int>> entries;
  std::size_t idx = 0;
  for (const nlohmann::json& item : doc.at("starts")) {
    std::string where = "schedule: entry " + std::to_string(idx);
    detail::reject_unknown(item, {"job", "start"}, where);
    Int job = detail::require_int(item, "job", where);
    Int start = detail::require_int(item, "start", where);
    if (job < 0) throw input_error(where + ": job index must be >= 0");
    entries.emplace_back(static_cast<std::size_t>(job), start);
    ++idx;
  }
  return Schedule::from_entries(n, entries);
}

inline Schedule load_schedule_file(const std::string& path, std::size_t n) {
  if (path == "-") return load_schedule(std::cin, n);
  std::ifstream in(path);
  if (!in) throw input_error("cannot open schedule file: " + path);
  return load_schedule(in, n);
}

inline void save_schedule(std::ostream& out, const Schedule& sched) {
  nlohmann::ordered_json doc;
  doc["starts"] = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < sched.size(); ++j) {
    if (sched.has(j)) doc["starts"].push_back({{"job", j}, {"start", sched.start(j)}});
  }
  out << doc.dump(2) << "\n";
}

/// FNV-1a over the canonical field serialization; stable across platforms.
inline std::string instance_digest(const Instance& inst) {
  std::ostringstream canon;
  for (const Job& job : inst.jobs()) {
    canon << job.p << ',' << job.r << ',' << job.d << ',' << job.w << ';';
  }
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : canon.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::ostringstream hex;
  hex << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4) hex << ((h >> shift) & 0xF);
  return hex.str();
}

}  // namespace tardy
