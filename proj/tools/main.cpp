// affect-fuzzy: table queries, self-report collection, synthetic data, and the
// extract -> train -> predict -> eval pipeline.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "affect/classifier.hpp"
#include "affect/cooccurrence.hpp"
#include "affect/emotion.hpp"
#include "affect/error.hpp"
#include "affect/evaluation.hpp"
#include "affect/features.hpp"
#include "affect/fuzzifier.hpp"
#include "affect/self_report.hpp"
#include "affect/synthetic.hpp"
#include "cli_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace affect::cli {
namespace {

// Flags that shadow config keys. Applied after the config file so they win.
class Overrides {
 public:
  CLI::Option* add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = *values_.emplace_back(std::make_unique<std::string>());
    CLI::Option* opt = app.add_option(flag, slot, help);
    bound_.push_back({opt, key, &slot});
    return opt;
  }

  void apply(CliConfig& config) const {
    for (const auto& b : bound_) {
      if (b.option->count() > 0) config.set(b.key, *b.value);
    }
  }

 private:
  struct Binding {
    CLI::Option* option;
    std::string key;
    std::string* value;
  };
  std::vector<std::unique_ptr<std::string>> values_;
  std::vector<Binding> bound_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::io, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string fixed(double v, int digits = 2) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

// ---- tables -------------------------------------------------------------

struct TablesArgs {
  std::string anchor;
  std::optional<double> level;
  bool csv = false;
  bool plot_data = false;
};

void print_profile(std::ostream& out, const EmotionProfile& profile, OutputFormat format, const json& meta) {
  if (format == OutputFormat::json) {
    json j = meta;
    for (const auto& [e, l] : profile) j["profile"][std::string(to_string(e))] = l.value();
    out << j.dump() << '\n';
    return;
  }
  if (format == OutputFormat::csv) {
    out << "emotion,level,percent\n";
    for (const auto& [e, l] : profile) out << to_string(e) << ',' << l.value() << ',' << percent(l.value()) << '\n';
    return;
  }
  for (const auto& [e, l] : profile) {
    out << std::left << std::setw(14) << to_string(e) << std::right << std::setw(6) << fixed(l.value()) << std::setw(8)
        << fixed(percent(l.value()), 1) << "%\n";
  }
}

void print_table(std::ostream& out, const CooccurrenceTable& table, OutputFormat format) {
  const auto columns = table.columns();
  if (format == OutputFormat::csv) {
    write_table_csv(out, table);
    return;
  }
  if (format == OutputFormat::json) {
    json j = {{"anchor", std::string(to_string(table.anchor))}};
    for (Emotion e : columns) j["columns"].push_back(std::string(to_string(e)));
    for (const auto& row : table.rows) j["rows"].push_back(row);
    out << j.dump() << '\n';
    return;
  }
  out << std::left << std::setw(8) << to_string(table.anchor);
  for (Emotion e : columns) out << std::right << std::setw(14) << to_string(e);
  out << '\n';
  for (std::size_t l = 0; l < table.rows.size(); ++l) {
    out << std::left << std::setw(8) << l;
    for (double v : table.rows[l]) out << std::right << std::setw(14) << fixed(v);
    out << '\n';
  }
}

void print_regional(std::ostream& out, const RegionalTable& table, OutputFormat format) {
  if (format == OutputFormat::csv) {
    write_regional_csv(out, table);
    return;
  }
  const auto columns = table_for(table.anchor).columns();
  if (format == OutputFormat::json) {
    json j = {{"anchor", std::string(to_string(table.anchor))}, {"anchor_level", table.anchor_level}};
    for (std::size_t i = 0; i < columns.size(); ++i) {
      for (std::size_t r = 0; r < kRegionalColumns.size(); ++r) {
        j["profiles"][std::string(to_string(kRegionalColumns[r]))][std::string(to_string(columns[i]))] =
            table.values[i][r];
      }
    }
    out << j.dump() << '\n';
    return;
  }
  out << std::left << std::setw(14) << "emotion";
  for (Region r : kRegionalColumns) out << std::right << std::setw(18) << to_string(r);
  out << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << std::left << std::setw(14) << to_string(columns[i]);
    for (double v : table.values[i]) out << std::right << std::setw(18) << fixed(v);
    out << '\n';
  }
}

// Level sweep of the anchor in quarter steps, every value as a percent.
void print_plot_series(std::ostream& out, Emotion anchor) {
  const auto columns = table_for(anchor).columns();
  out << "anchor_level,anchor_percent";
  for (Emotion e : columns) out << ',' << to_string(e);
  out << '\n';
  for (int step = 0; step <= 16; ++step) {
    const double level = step / 4.0;
    const auto profile = expected_profile(anchor, level);
    out << level << ',' << percent(level);
    for (Emotion e : columns) out << ',' << percent(profile.at(e).value());
    out << '\n';
  }
}

int cmd_tables(const CliConfig& config, const TablesArgs& args) {
  const Emotion anchor = parse_emotion(args.anchor);
  const auto& table = table_for(anchor);
  const OutputFormat format = args.csv || args.plot_data ? OutputFormat::csv : config.format;
  Output out(config.out);

  if (config.region) {
    if (!args.level) {
      if (anchor != regional_table().anchor) {
        throw Error(ErrorCode::no_regional_data, "no regional data for anchor '" + args.anchor + "'");
      }
      print_regional(out.stream(), regional_table(), format);
      return 0;
    }
    const auto profile = regional_profile(*config.region, anchor, *args.level);
    print_profile(out.stream(), profile, format,
                  {{"anchor", args.anchor}, {"level", *args.level}, {"region", std::string(to_string(*config.region))}});
    return 0;
  }
  if (args.level) {
    const auto profile = expected_profile(anchor, *args.level);
    print_profile(out.stream(), profile, format, {{"anchor", args.anchor}, {"level", *args.level}});
    return 0;
  }
  if (args.plot_data) {
    print_plot_series(out.stream(), anchor);
    return 0;
  }
  print_table(out.stream(), table, format);
  return 0;
}

// ---- fuzzify ------------------------------------------------------------

int cmd_fuzzify(const CliConfig& config, const std::optional<double>& level, const std::vector<double>& weights) {
  Output out(config.out);
  if (level.has_value() == !weights.empty()) {
    throw Error(ErrorCode::validation, "give either a level or --defuzzify with five weights");
  }
  Membership m;
  double value = 0.0;
  if (level) {
    m = fuzzify(*level);
    value = *level;
  } else {
    if (weights.size() != kLevelClassCount) throw Error(ErrorCode::validation, "--defuzzify takes exactly five weights");
    std::copy(weights.begin(), weights.end(), m.weights.begin());
    value = defuzzify(m);
  }
  auto& os = out.stream();
  switch (config.format) {
    case OutputFormat::json:
      os << json{{"level", value}, {"membership", m.weights}}.dump() << '\n';
      break;
    case OutputFormat::csv:
      os << "class,weight\n";
      for (std::size_t c = 0; c < m.weights.size(); ++c) os << c << ',' << m.weights[c] << '\n';
      break;
    case OutputFormat::table:
      os << "level " << value << '\n';
      for (std::size_t c = 0; c < m.weights.size(); ++c) os << "  class " << c << "  " << m.weights[c] << '\n';
      break;
  }
  return 0;
}

// ---- collect ------------------------------------------------------------

struct CollectArgs {
  std::string participant;
  double interval_hours = 4.0;
  std::string answers;
  std::string replay;
  std::string session_out;
  std::optional<std::int64_t> now;
};

std::optional<int> parse_level_answer(std::string_view text) {
  const std::string t(text);
  if (t.size() != 1 || t[0] < '0' || t[0] > '4') return std::nullopt;
  return t[0] - '0';
}

std::map<Emotion, LevelClass> read_scripted_answers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open answers file '" + path + "'");
  std::map<Emotion, LevelClass> levels;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), '=', ' ');
    std::istringstream fields(line);
    std::string name, value, extra;
    if (!(fields >> name)) continue;
    const std::string where = "answers line " + std::to_string(number) + ": ";
    if (!(fields >> value) || (fields >> extra)) throw Error(ErrorCode::validation, where + "expected '<emotion> = <level>'");
    Emotion e;
    try {
      e = parse_emotion(name);
    } catch (const Error& err) {
      throw Error(ErrorCode::validation, where + err.what());
    }
    if (!is_reportable(e)) throw Error(ErrorCode::validation, where + "'" + name + "' is not a reportable emotion");
    const auto level = parse_level_answer(value);
    if (!level) {
      throw Error(ErrorCode::validation, where + "level for " + name + " must be an integer 0-4, got '" + value + "'");
    }
    if (!levels.emplace(e, LevelClass(*level)).second) {
      throw Error(ErrorCode::validation, where + "duplicate answer for " + name);
    }
  }
  std::string missing;
  for (Emotion e : reportable_emotions()) {
    if (!levels.contains(e)) missing += (missing.empty() ? "" : ", ") + std::string(to_string(e));
  }
  if (!missing.empty()) throw Error(ErrorCode::validation, "answers file is missing: " + missing);
  return levels;
}

std::map<Emotion, LevelClass> prompt_answers(std::istream& in, std::ostream& prompt) {
  std::map<Emotion, LevelClass> levels;
  for (Emotion e : reportable_emotions()) {
    while (true) {
      prompt << to_string(e) << " [0-4]: " << std::flush;
      std::string line;
      if (!std::getline(in, line)) throw Error(ErrorCode::validation, "input ended before all emotions were answered");
      std::istringstream fields(line);
      std::string token;
      fields >> token;
      if (const auto level = parse_level_answer(token)) {
        levels.emplace(e, LevelClass(*level));
        break;
      }
      prompt << "  enter a whole number from 0 to 4\n";
    }
  }
  return levels;
}

int cmd_collect(const CliConfig& config, const CollectArgs& args) {
  if (args.participant.empty()) throw Error(ErrorCode::validation, "--participant is required");
  if (config.out.empty()) throw Error(ErrorCode::validation, "--out is required");
  if (!(args.interval_hours > 0.0)) throw Error(ErrorCode::validation, "--interval must be positive");
  if (!args.replay.empty() && args.session_out.empty()) {
    throw Error(ErrorCode::validation, "--replay needs --session-out");
  }

  const std::int64_t now = args.now.value_or(std::chrono::duration_cast<std::chrono::milliseconds>(
                                                 std::chrono::system_clock::now().time_since_epoch())
                                                 .count());
  SelfReport report;
  report.timestamp_ms = now;
  report.participant_id = args.participant;
  report.region = config.region;
  report.levels = args.answers.empty() ? prompt_answers(std::cin, std::cerr) : read_scripted_answers(args.answers);
  report.validate();

  if (!args.replay.empty()) {
    std::ifstream events_in(args.replay);
    if (!events_in) throw Error(ErrorCode::io, "cannot open replay file '" + args.replay + "'");
    Session session;
    session.participant_id = report.participant_id;
    session.region = report.region;
    session.start_ms = now;
    session.events = read_events(events_in);
    std::ofstream session_out(args.session_out);
    if (!session_out) throw Error(ErrorCode::io, "cannot write '" + args.session_out + "'");
    write_session(session_out, session);
  }

  std::ofstream out(config.out, std::ios::app);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + config.out + "'");
  out << to_json(report).dump() << '\n';

  const auto interval_ms = static_cast<std::int64_t>(args.interval_hours * 3'600'000.0);
  std::cout << json{{"written", config.out}, {"ts", now}, {"next_prompt_ts", now + interval_ms}}.dump() << '\n';
  return 0;
}

// ---- synth --------------------------------------------------------------

int cmd_synth(const CliConfig& config) {
  if (config.out.empty()) throw Error(ErrorCode::validation, "--out <directory> is required");
  GeneratorConfig g;
  g.seed = config.seed;
  g.participants = config.participants;
  g.sessions_per_participant = config.sessions;
  g.noise_std = config.noise;
  g.kernel.behavior_noise = config.behavior_noise;
  g.validate();
  const Dataset dataset = generate(g);
  write_dataset(config.out, g, dataset);
  std::cout << json{{"out", config.out},
                    {"reports", dataset.reports.size()},
                    {"sessions", dataset.sessions.size()},
                    {"config_hash", sha256_hex(to_json(g).dump())},
                    {"dataset_hash", dataset_hash(dataset)}}
                   .dump()
            << '\n';
  return 0;
}

// ---- extract ------------------------------------------------------------

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& input : inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(input, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") found.push_back(entry.path().string());
      }
      if (ec) throw Error(ErrorCode::io, "cannot list '" + input + "': " + ec.message());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(input);
    }
  }
  if (files.empty()) throw Error(ErrorCode::validation, "no session files given");
  return files;
}

int cmd_extract(const CliConfig& config, const std::vector<std::string>& inputs, bool lenient) {
  const ParseMode mode = lenient ? ParseMode::lenient : ParseMode::strict;
  std::vector<FeatureRecord> records;
  std::size_t failed = 0;
  for (const auto& path : expand_inputs(inputs)) {
    try {
      const Session session = load_session(path, mode);
      const Extraction x = extract_detailed(session, mode);
      if (x.skipped_events > 0) std::cerr << path << ": skipped " << x.skipped_events << " events\n";
      records.push_back({session.participant_id, session.region, session.timestamp(), x.features});
    } catch (const Error& e) {
      if (!lenient || e.code() == ErrorCode::io) throw Error(e.code(), path + ": " + e.what());
      std::cerr << path << ": " << e.what() << " (skipped)\n";
      ++failed;
    }
  }
  Output out(config.out);
  write_feature_records(out.stream(), records);
  if (failed > 0) std::cerr << failed << " session(s) skipped\n";
  return 0;
}

// ---- train --------------------------------------------------------------

int cmd_train(const CliConfig& config, const std::string& holdout) {
  if (config.features.empty() || config.reports.empty() || config.model.empty()) {
    throw Error(ErrorCode::validation, "train needs --features, --reports and --model");
  }
  const TrainConfig tc = config.train_config();
  const auto records = load_feature_records(config.features);
  const auto reports = load_reports(config.reports);
  const JoinedSamples joined = join_labels(records, reports, tc.emotions);
  if (joined.samples.empty()) throw Error(ErrorCode::incomplete_data, "no feature record has a matching self-report");

  const TrainTestSplit split = split_indices(joined.samples.size(), config.train_fraction, config.seed);
  std::vector<LabeledSample> train_set;
  train_set.reserve(split.train.size());
  for (std::size_t i : split.train) train_set.push_back(joined.samples[i]);
  const Model model = train(train_set, tc);
  save_model(model, config.model);

  if (!holdout.empty()) {
    std::vector<FeatureRecord> held;
    for (std::size_t i : split.test) held.push_back(records[joined.record_index[i]]);
    std::ofstream out(holdout);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + holdout + "'");
    write_feature_records(out, held);
  }
  std::cout << json{{"model", config.model},
                    {"train", split.train.size()},
                    {"holdout", split.test.size()},
                    {"dropped", joined.dropped},
                    {"kernel", std::string(to_string(tc.kernel))}}
                   .dump()
            << '\n';
  return 0;
}

// ---- predict ------------------------------------------------------------

void print_state_table(std::ostream& out, const EmotionState& state) {
  out << std::left << std::setw(14) << "emotion" << std::right << std::setw(8) << "level" << std::setw(7) << "class"
      << "  membership\n";
  for (const auto& [e, est] : state.estimates) {
    out << std::left << std::setw(14) << to_string(e) << std::right << std::setw(8) << fixed(est.level, 3)
        << std::setw(7) << est.level_class << " ";
    for (double w : est.membership.weights) out << ' ' << fixed(w, 3);
    out << '\n';
  }
}

int cmd_predict(const CliConfig& config, const std::string& session_path) {
  if (config.model.empty()) throw Error(ErrorCode::validation, "--model is required");
  if (session_path.empty() == config.features.empty()) {
    throw Error(ErrorCode::validation, "give either --session or --features");
  }
  const Model model = load_model(config.model);
  Output out(config.out);
  if (!session_path.empty()) {
    const EmotionState state = predict(model, extract(load_session(session_path)));
    if (config.format == OutputFormat::table) {
      print_state_table(out.stream(), state);
    } else {
      out.stream() << to_json(state).dump() << '\n';
    }
    return 0;
  }
  for (const auto& record : load_feature_records(config.features)) {
    const PredictionRecord p{record.participant_id, record.timestamp_ms, predict(model, record.features)};
    out.stream() << to_json(p).dump() << '\n';
  }
  return 0;
}

// ---- eval ---------------------------------------------------------------

std::vector<Emotion> parse_emotion_list(const std::string& list) {
  std::vector<Emotion> out;
  std::istringstream in(list);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    const Emotion e = parse_emotion(token);
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  if (out.empty()) throw Error(ErrorCode::validation, "--emotions is empty");
  return out;
}

int cmd_eval(const CliConfig& config, const std::string& predictions_path, const std::string& emotions_arg, bool csv) {
  if (predictions_path.empty() || config.reports.empty()) {
    throw Error(ErrorCode::validation, "eval needs --predictions and --truth");
  }
  const auto predictions = load_predictions(predictions_path);
  const auto reports = load_reports(config.reports);
  // Empty means every predicted emotion.
  const std::vector<Emotion> selected = emotions_arg.empty() ? std::vector<Emotion>{} : parse_emotion_list(emotions_arg);

  std::map<std::string, std::vector<const SelfReport*>> by_pid;
  for (const auto& r : reports) by_pid[r.participant_id].push_back(&r);
  for (auto& [pid, list] : by_pid) {
    std::stable_sort(list.begin(), list.end(),
                     [](const SelfReport* a, const SelfReport* b) { return a->timestamp_ms < b->timestamp_ms; });
  }

  std::vector<EmotionState> states;
  std::vector<TruthLabels> truth;
  std::size_t unmatched = 0;
  for (const auto& p : predictions) {
    const SelfReport* match = nullptr;
    if (auto it = by_pid.find(p.participant_id); it != by_pid.end()) {
      for (const SelfReport* r : it->second) {
        if (r->timestamp_ms > p.timestamp_ms) break;
        if (p.timestamp_ms - r->timestamp_ms <= kLabelWindowMs) match = r;
      }
    }
    if (!match) {
      ++unmatched;
      continue;
    }
    EmotionState state;
    TruthLabels labels;
    for (const auto& [e, est] : p.state.estimates) {
      if (!selected.empty() && std::find(selected.begin(), selected.end(), e) == selected.end()) continue;
      const auto level = match->levels.find(e);
      if (level == match->levels.end()) continue;
      state.estimates.emplace(e, est);
      labels.emplace(e, level->second);
    }
    states.push_back(std::move(state));
    truth.push_back(std::move(labels));
  }
  if (states.empty()) throw Error(ErrorCode::incomplete_data, "no prediction has a matching self-report");
  if (unmatched > 0) std::cerr << unmatched << " prediction(s) without a matching self-report were ignored\n";

  const EvalReport report = evaluate(states, truth, config.threshold, selected);
  Output out(config.out);
  if (csv || config.format == OutputFormat::csv) {
    write_confusion_csv(out.stream(), report.confusion);
  } else if (config.format == OutputFormat::json) {
    out.stream() << to_json(report).dump() << '\n';
  } else {
    write_report_table(out.stream(), report);
  }
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Fuzzy multi-level emotion detection from interaction behavior"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Overrides overrides;
  app.add_option("--config", config_path, "key=value config file (default: $AFFECT_FUZZY_CONFIG)");
  overrides.add(app, "--seed", "seed", "random seed");
  overrides.add(app, "--format", "format", "output format: json, csv or table");

  auto* tables = app.add_subcommand("tables", "co-occurrence tables, interpolated and regional profiles");
  TablesArgs tables_args;
  tables->add_option("anchor", tables_args.anchor, "anchor emotion")->required();
  tables->add_option("--level", tables_args.level, "anchor level in [0,4]");
  overrides.add(*tables, "--region", "region", "region of origin");
  tables->add_flag("--csv", tables_args.csv, "CSV output");
  tables->add_flag("--plot-data", tables_args.plot_data, "per-level series as CSV percentages");
  overrides.add(*tables, "--out", "out", "output file (default stdout)");

  auto* fuzz = app.add_subcommand("fuzzify", "level to membership, or membership back to level");
  std::optional<double> fuzz_level;
  std::vector<double> fuzz_weights;
  fuzz->add_option("level", fuzz_level, "level in [0,4]");
  fuzz->add_option("--defuzzify", fuzz_weights, "five membership weights")->delimiter(',');
  overrides.add(*fuzz, "--out", "out", "output file (default stdout)");

  auto* collect = app.add_subcommand("collect", "record one self-report");
  CollectArgs collect_args;
  overrides.add(*collect, "--out", "out", "reports file to append to");
  collect->add_option("--participant", collect_args.participant, "participant id");
  overrides.add(*collect, "--region", "region", "region of origin");
  collect->add_option("--interval", collect_args.interval_hours, "prompt interval in hours");
  collect->add_option("--answers", collect_args.answers, "scripted answers file (emotion = level per line)");
  collect->add_option("--replay", collect_args.replay, "interaction events to attach as a session");
  collect->add_option("--session-out", collect_args.session_out, "session file for --replay");
  collect->add_option("--now", collect_args.now, "timestamp override in ms");

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  overrides.add(*synth, "--out", "out", "output directory")->required();
  overrides.add(*synth, "--participants", "participants", "number of participants");
  overrides.add(*synth, "--sessions", "sessions", "sessions per participant");
  overrides.add(*synth, "--noise", "noise", "co-occurrence noise (levels)");
  overrides.add(*synth, "--behavior-noise", "behavior_noise", "behavior noise multiplier");

  auto* extract_cmd = app.add_subcommand("extract", "session files to feature records");
  std::vector<std::string> extract_inputs;
  bool lenient = false;
  extract_cmd->add_option("sessions", extract_inputs, "session files or directories")->required();
  extract_cmd->add_flag("--lenient", lenient, "skip malformed events and sessions");
  overrides.add(*extract_cmd, "--out", "out", "features file (default stdout)");

  auto* train_cmd = app.add_subcommand("train", "train a model on features joined with self-reports");
  std::string holdout;
  overrides.add(*train_cmd, "--features", "features", "features file");
  overrides.add(*train_cmd, "--reports", "reports", "self-reports file");
  overrides.add(*train_cmd, "--model", "model", "model file to write");
  overrides.add(*train_cmd, "--train-fraction", "train_fraction", "share of samples used for training");
  overrides.add(*train_cmd, "--c", "c", "SVM regularization constant");
  overrides.add(*train_cmd, "--epochs", "epochs", "training epochs");
  overrides.add(*train_cmd, "--kernel", "kernel", "linear or quadratic");
  overrides.add(*train_cmd, "--temperature", "temperature", "softmax temperature");
  train_cmd->add_option("--holdout", holdout, "write held-out feature records here");

  auto* predict_cmd = app.add_subcommand("predict", "estimate emotion levels");
  std::string session_path;
  overrides.add(*predict_cmd, "--model", "model", "model file");
  predict_cmd->add_option("--session", session_path, "single session file");
  overrides.add(*predict_cmd, "--features", "features", "features file for batch prediction");
  overrides.add(*predict_cmd, "--out", "out", "output file (default stdout)");

  auto* eval_cmd = app.add_subcommand("eval", "score predictions against self-reports");
  std::string predictions_path, emotions_arg;
  bool eval_csv = false;
  eval_cmd->add_option("--predictions", predictions_path, "predictions file");
  overrides.add(*eval_cmd, "--truth", "reports", "self-reports file");
  eval_cmd->add_option("--emotions", emotions_arg, "comma-separated emotions for the confusion matrix");
  overrides.add(*eval_cmd, "--threshold", "threshold", "detection threshold on predicted level");
  eval_cmd->add_flag("--csv", eval_csv, "confusion matrix as CSV");
  overrides.add(*eval_cmd, "--out", "out", "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    CliConfig config;
    if (config_path.empty()) {
      if (const char* env = std::getenv("AFFECT_FUZZY_CONFIG"); env && *env) config_path = env;
    }
    if (!config_path.empty()) load_config_file(config_path, config);
    overrides.apply(config);

    if (tables->parsed()) return cmd_tables(config, tables_args);
    if (fuzz->parsed()) return cmd_fuzzify(config, fuzz_level, fuzz_weights);
    if (collect->parsed()) return cmd_collect(config, collect_args);
    if (synth->parsed()) return cmd_synth(config);
    if (extract_cmd->parsed()) return cmd_extract(config, extract_inputs, lenient);
    if (train_cmd->parsed()) return cmd_train(config, holdout);
    if (predict_cmd->parsed()) return cmd_predict(config, session_path);
    if (eval_cmd->parsed()) return cmd_eval(config, predictions_path, emotions_arg, eval_csv);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace affect::cli

int main(int argc, char** argv) { return affect::cli::run(argc, argv); }
