#include "cli_config.hpp"

#include <charconv>
#include <fstream>

#include "affect/error.hpp"

namespace affect::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::config, "invalid value '" + value + "' for config key '" + key + "'");
  }
  return out;
}

}  // namespace

OutputFormat parse_format(std::string_view token) {
  if (token == "json") return OutputFormat::json;
  if (token == "csv") return OutputFormat::csv;
  if (token == "table") return OutputFormat::table;
  throw Error(ErrorCode::config, "unknown output format '" + std::string(token) + "' (json|csv|table)");
}

void CliConfig::set(const std::string& key, const std::string& value) {
  if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "tolerance") {
    tolerance = parse_number<double>(key, value);
  } else if (key == "threshold") {
    threshold = parse_number<double>(key, value);
  } else if (key == "c") {
    c = parse_number<double>(key, value);
  } else if (key == "epochs") {
    epochs = parse_number<int>(key, value);
  } else if (key == "kernel") {
    kernel = parse_kernel(value);
  } else if (key == "temperature") {
    temperature = parse_number<double>(key, value);
  } else if (key == "train_fraction") {
    train_fraction = parse_number<double>(key, value);
  } else if (key == "region") {
    region = parse_region(value);
  } else if (key == "format") {
    format = parse_format(value);
  } else if (key == "participants") {
    participants = parse_number<int>(key, value);
  } else if (key == "sessions") {
    sessions = parse_number<int>(key, value);
  } else if (key == "noise") {
    noise = parse_number<double>(key, value);
  } else if (key == "behavior_noise") {
    behavior_noise = parse_number<double>(key, value);
  } else if (key == "reports") {
    reports = value;
  } else if (key == "features") {
    features = value;
  } else if (key == "model") {
    model = value;
  } else if (key == "out") {
    out = value;
  } else {
    throw Error(ErrorCode::config, "unknown config key '" + key + "'");
  }
}

TrainConfig CliConfig::train_config() const {
  TrainConfig t;
  t.c = c;
  t.epochs = epochs;
  t.seed = seed;
  t.kernel = kernel;
  t.temperature = temperature;
  t.validate();
  return t;
}

void load_config(std::istream& in, CliConfig& config) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::config, "config line " + std::to_string(number) + ": expected key = value");
    }
    config.set(trim(std::string_view(content).substr(0, eq)), trim(std::string_view(content).substr(eq + 1)));
  }
}

void load_config_file(const std::string& path, CliConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config file '" + path + "'");
  load_config(in, config);
}

}  // namespace affect::cli
