#include "affect/self_report.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "affect/error.hpp"

namespace affect {

using nlohmann::json;

void SelfReport::validate() const {
  if (timestamp_ms < 0) {
    throw Error(ErrorCode::validation, "negative report timestamp " + std::to_string(timestamp_ms));
  }
  for (const auto& [emotion, level] : levels) {
    if (!is_reportable(emotion)) {
      throw Error(ErrorCode::validation, "'" + std::string(to_string(emotion)) + "' cannot be self-reported");
    }
  }
  std::string missing;
  for (Emotion e : reportable_emotions()) {
    if (!levels.contains(e)) {
      if (!missing.empty()) missing += ", ";
      missing += to_string(e);
    }
  }
  if (!missing.empty()) throw Error(ErrorCode::validation, "report is missing emotions: " + missing);
}

SelfReport SelfReport::all_zero(std::int64_t timestamp_ms, std::string participant_id,
                                std::optional<Region> region) {
  SelfReport r{timestamp_ms, std::move(participant_id), region, {}};
  for (Emotion e : reportable_emotions()) r.levels.emplace(e, LevelClass(0));
  return r;
}

json to_json(const SelfReport& report) {
  json levels = json::object();
  for (Emotion e : reportable_emotions()) {
    auto it = report.levels.find(e);
    if (it != report.levels.end()) levels[std::string(to_string(e))] = it->second.value();
  }
  json j;
  j["ts"] = report.timestamp_ms;
  j["pid"] = report.participant_id;
  j["region"] = report.region ? json(std::string(to_string(*report.region))) : json(nullptr);
  j["levels"] = std::move(levels);
  return j;
}

SelfReport report_from_json(const json& j, ParseMode mode, std::vector<std::string>* warnings) {
  if (!j.is_object()) throw Error(ErrorCode::parse, "self-report line is not a JSON object");
  SelfReport r;
  bool seen_ts = false, seen_pid = false, seen_levels = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "ts") {
      if (!value.is_number_integer()) throw Error(ErrorCode::parse, "'ts' must be an integer");
      r.timestamp_ms = value.get<std::int64_t>();
      seen_ts = true;
    } else if (key == "pid") {
      if (!value.is_string()) throw Error(ErrorCode::parse, "'pid' must be a string");
      r.participant_id = value.get<std::string>();
      seen_pid = true;
    } else if (key == "region") {
      if (value.is_null()) {
        r.region.reset();
      } else if (value.is_string()) {
        r.region = parse_region(value.get<std::string>());
      } else {
        throw Error(ErrorCode::parse, "'region' must be a string or null");
      }
    } else if (key == "levels") {
      if (!value.is_object()) throw Error(ErrorCode::parse, "'levels' must be an object");
      for (const auto& [name, level] : value.items()) {
        if (!level.is_number_integer()) {
          throw Error(ErrorCode::parse, "level of '" + name + "' must be an integer");
        }
        const Emotion e = parse_emotion(name);
        if (!r.levels.emplace(e, LevelClass(level.get<int>())).second) {
          throw Error(ErrorCode::parse, "duplicate emotion '" + name + "'");
        }
      }
      seen_levels = true;
    } else if (mode == ParseMode::strict) {
      throw Error(ErrorCode::parse, "unknown field '" + key + "' in self-report");
    } else if (warnings) {
      warnings->push_back("ignored unknown field '" + key + "'");
    }
  }
  if (!seen_ts || !seen_pid || !seen_levels) {
    throw Error(ErrorCode::parse, "self-report requires 'ts', 'pid' and 'levels'");
  }
  r.validate();
  return r;
}

void write_reports(std::ostream& out, const std::vector<SelfReport>& reports) {
  for (const auto& r : reports) out << to_json(r).dump() << '\n';
}

std::vector<SelfReport> read_reports(std::istream& in, ParseMode mode, std::vector<std::string>* warnings) {
  std::vector<SelfReport> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      out.push_back(report_from_json(j, mode, warnings));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<SelfReport> load_reports(const std::string& path, ParseMode mode, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  return read_reports(in, mode, warnings);
}

}  // namespace affect
