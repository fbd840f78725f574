// genre: command-line front end for the triple extraction/inference
// pipeline. One subcommand per stage; a JSON config file supplies
// per-stage defaults and command-line flags win over it. Every
// artifact-producing stage appends a run manifest so outputs stay
// traceable to their inputs.
//
// Exit codes: 0 success, 1 stage error, 2 config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "genre/analyzer.hpp"
#include "genre/dataset.hpp"
#include "genre/decoder.hpp"
#include "genre/evaluator.hpp"
#include "genre/manifest.hpp"
#include "genre/pipeline.hpp"
#include "genre/relation.hpp"
#include "genre/reranker.hpp"
#include "genre/scorer.hpp"
#include "genre/tokenize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace genre;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStageError = 1;
constexpr int kExitConfigError = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared command context: config file, work dir, seeds, manifest sink.
struct Context {
  std::string config_path;
  json config = json::object();
  std::string work_dir = "work";
  std::string manifest_path;  // defaults to <work_dir>/manifests.jsonl
  unsigned seed = 40;
  std::string seeds_spec;  // e.g. "40-44" or "40,41,42"

  void finalize() {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file: " + config_path);
      try {
        in >> config;
      } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
      }
      if (!config.is_object()) throw ConfigError("config root must be a JSON object");
    }
    if (manifest_path.empty()) manifest_path = work_dir + "/manifests.jsonl";
  }

  // Per-stage config lookup; flag values passed through `flag_set` win.
  template <typename T>
  T get(const std::string& section, const std::string& key, T fallback) const {
    if (!config.contains(section)) return fallback;
    const json& s = config.at(section);
    if (!s.is_object() || !s.contains(key)) return fallback;
    try {
      return s.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("config " + section + "." + key + ": " + e.what());
    }
  }

  std::vector<unsigned> seed_list() const {
    if (seeds_spec.empty()) return {seed};
    std::vector<unsigned> out;
    auto dash = seeds_spec.find('-');
    if (dash != std::string::npos && dash > 0) {
      unsigned lo = std::stoul(seeds_spec.substr(0, dash));
      unsigned hi = std::stoul(seeds_spec.substr(dash + 1));
      if (hi < lo) throw ConfigError("--seeds range is reversed: " + seeds_spec);
      for (unsigned s = lo; s <= hi; ++s) out.push_back(s);
      return out;
    }
    std::stringstream ss(seeds_spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(std::stoul(part));
    }
    if (out.empty()) throw ConfigError("--seeds has no seeds: " + seeds_spec);
    return out;
  }

  std::string config_hash() const { return hash_string(config.dump()); }
};

const RelationRegistry& registry_for(const Context& ctx) {
  static std::optional<RelationRegistry> custom;
  std::string reg = ctx.get<std::string>("paths", "registry", "");
  std::string alias = ctx.get<std::string>("paths", "aliases", "");
  if (!reg.empty() && !alias.empty()) {
    if (!custom) custom = RelationRegistry::from_files(reg, alias);
    return *custom;
  }
  return RelationRegistry::builtin();
}

void write_manifest(const Context& ctx, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& inputs,
                    const std::vector<std::string>& outputs,
                    const std::vector<unsigned>& seeds, const std::string& started) {
  RunManifest m;
  m.command = command;
  m.config_hash = ctx.config_hash();
  m.input_hashes = inputs;
  for (const auto& path : outputs) {
    if (fs::is_directory(path)) {
      for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file()) {
          m.output_hashes.emplace_back(entry.path().string(), hash_file(entry.path().string()));
        }
      }
    } else {
      m.output_hashes.emplace_back(path, hash_file(path));
    }
  }
  m.seeds = seeds;
  m.started_at = started;
  m.finished_at = now_utc_iso8601();
  fs::create_directories(fs::path(ctx.manifest_path).parent_path().empty()
                             ? fs::path(".")
                             : fs::path(ctx.manifest_path).parent_path());
  append_manifest(ctx.manifest_path, m);
}

std::pair<std::string, std::string> input_hash(const std::string& path) {
  return {path, hash_file(path)};
}

void ensure_parent_dir(const std::string& path) {
  auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

// ---------------------------------------------------------------------------
// build-dataset

struct BuildDatasetArgs {
  std::string raw_train, raw_dev, raw_test;
  std::string out_dir;
};

int run_build_dataset(const Context& ctx, const BuildDatasetArgs& args) {
  const std::string started = now_utc_iso8601();
  const auto& reg = registry_for(ctx);

  struct SplitInput {
    Split split;
    std::string path;
  };
  std::vector<SplitInput> splits;
  if (!args.raw_train.empty()) splits.push_back({Split::Train, args.raw_train});
  if (!args.raw_dev.empty()) splits.push_back({Split::Dev, args.raw_dev});
  if (!args.raw_test.empty()) splits.push_back({Split::Test, args.raw_test});
  if (splits.empty()) throw ConfigError("build-dataset needs at least one raw input file");

  std::vector<RawRecord> records;
  std::vector<std::pair<std::string, std::string>> inputs;
  for (const auto& s : splits) {
    inputs.push_back(input_hash(s.path));
    auto part = read_raw_corpus(s.path, s.split);
    records.insert(records.end(), part.begin(), part.end());
  }

  BuildReport report = build_dataset(records, reg);
  fs::create_directories(args.out_dir);
  const std::string ext_path = args.out_dir + "/extraction.jsonl";
  const std::string inf_path = args.out_dir + "/inference.jsonl";
  write_samples(ext_path, report.partition.extraction);
  write_samples(inf_path, report.partition.inference);

  DatasetStats ext_stats = compute_stats(report.partition.extraction);
  DatasetStats inf_stats = compute_stats(report.partition.inference);
  const std::string stats_path = args.out_dir + "/stats.json";
  {
    json stats;
    stats["raw_records"] = report.raw_records;
    stats["dropped_by_reason"] = report.dropped_by_reason;
    stats["extraction"] = json::parse(stats_to_json(ext_stats));
    stats["inference"] = json::parse(stats_to_json(inf_stats));
    std::ofstream(stats_path) << stats.dump(2) << "\n";
  }
  std::cout << stats_to_table(ext_stats, "extraction") << "\n"
            << stats_to_table(inf_stats, "inference") << "\n";
  std::cout << "raw records: " << report.raw_records << "\n";
  for (const auto& [reason, n] : report.dropped_by_reason) {
    std::cout << "dropped (" << reason << "): " << n << "\n";
  }

  write_manifest(ctx, "build-dataset", inputs, {ext_path, inf_path, stats_path}, {}, started);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train-generator

struct TrainGeneratorArgs {
  std::string data, dev, out_dir;
  std::string task = "extraction";
  double learning_rate = -1.0;  // <0 = task default / config
  int max_epochs = -1;
};

int run_train_generator(const Context& ctx, const TrainGeneratorArgs& args) {
  const std::string started = now_utc_iso8601();
  const auto& reg = registry_for(ctx);
  Task task = task_from_string(args.task);

  TrainConfig cfg = TrainConfig::defaults_for(task);
  cfg.learning_rate = ctx.get<double>("train_generator", "learning_rate", cfg.learning_rate);
  cfg.max_epochs = ctx.get<int>("train_generator", "max_epochs", cfg.max_epochs);
  if (args.learning_rate > 0.0) cfg.learning_rate = args.learning_rate;
  if (args.max_epochs > 0) cfg.max_epochs = args.max_epochs;
  cfg.seed = ctx.seed_list().front();

  auto train = read_samples(args.data);
  std::vector<Sample> dev;
  std::vector<std::pair<std::string, std::string>> inputs = {input_hash(args.data)};
  if (!args.dev.empty()) {
    dev = read_samples(args.dev);
    inputs.push_back(input_hash(args.dev));
  }

  CountScorer scorer = train_generator(cfg, train, dev, reg);
  scorer.save(args.out_dir);
  std::cout << "trained generator on " << train.size() << " samples; vocab "
            << scorer.vocab().size() << "; saved to " << args.out_dir << "\n";

  write_manifest(ctx, "train-generator", inputs, {args.out_dir}, {cfg.seed}, started);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// decode

struct DecodeArgs {
  std::string model_dir, data, out;
  std::string index_path;       // load a saved relation->tail index
  std::string index_from;      // or build one from a training sample file
  std::string mode = "extraction";
  int beam = -1, top_l = -1, max_length = -1;
  bool strict_span_tails = false;
  bool free_decode = false;
  bool length_normalize = false;
};

int run_decode(const Context& ctx, const DecodeArgs& args) {
  const std::string started = now_utc_iso8601();
  const auto& reg = registry_for(ctx);

  DecodeConfig cfg;
  cfg.mode = task_from_string(args.mode);
  cfg.beam_width = ctx.get<int>("decode", "beam", cfg.beam_width);
  cfg.top_l = ctx.get<int>("decode", "L", cfg.top_l);
  cfg.max_length = ctx.get<int>("decode", "max_length", cfg.max_length);
  cfg.strict_span_tails = ctx.get<bool>("decode", "strict_span_tails", cfg.strict_span_tails);
  if (args.beam > 0) cfg.beam_width = args.beam;
  if (args.top_l > 0) cfg.top_l = args.top_l;
  if (args.max_length > 0) cfg.max_length = args.max_length;
  if (args.strict_span_tails) cfg.strict_span_tails = true;
  if (args.length_normalize) cfg.length_normalize = true;
  cfg.constrained = !args.free_decode;

  CountScorer scorer = CountScorer::load(args.model_dir);
  auto samples = read_samples(args.data);
  std::vector<std::pair<std::string, std::string>> inputs = {input_hash(args.data)};

  RelationTailIndex index;
  if (!args.index_path.empty()) {
    index = RelationTailIndex::load(args.index_path);
    inputs.push_back(input_hash(args.index_path));
  } else if (!args.index_from.empty()) {
    index = build_relation_tail_index(read_samples(args.index_from));
    inputs.push_back(input_hash(args.index_from));
  } else if (cfg.mode == Task::Inference && cfg.constrained) {
    throw ConfigError("inference decoding needs --index or --index-from");
  }

  auto sets = decode_all(scorer, samples, cfg, index, reg);
  ensure_parent_dir(args.out);
  write_candidates(args.out, sets);
  std::cout << "decoded " << sets.size() << " sentences -> " << args.out << "\n";
  if (cfg.mode == Task::Inference && !index.empty()) {
    std::cout << "index recall ceiling on this set: " << index.max_recall_on(samples) << "\n";
  }

  write_manifest(ctx, "decode", inputs, {args.out}, {}, started);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train-reranker

struct TrainRerankerArgs {
  std::string candidates, data, dev_candidates, dev_data, out;
  double learning_rate = -1.0;
  int max_epochs = -1;
  double positive_weight = -1.0;
};

int run_train_reranker(const Context& ctx, const TrainRerankerArgs& args) {
  const std::string started = now_utc_iso8601();
  const auto& reg = registry_for(ctx);

  RerankTrainConfig cfg;
  cfg.learning_rate = ctx.get<double>("train_reranker", "learning_rate", cfg.learning_rate);
  cfg.max_epochs = ctx.get<int>("train_reranker", "max_epochs", cfg.max_epochs);
  cfg.positive_weight = ctx.get<double>("train_reranker", "positive_weight", cfg.positive_weight);
  if (args.learning_rate > 0.0) cfg.learning_rate = args.learning_rate;
  if (args.max_epochs > 0) cfg.max_epochs = args.max_epochs;
  if (args.positive_weight > 0.0) cfg.positive_weight = args.positive_weight;

  auto sets = read_candidates(args.candidates, reg);
  auto samples = sample_map(read_samples(args.data));
  auto examples = build_rerank_dataset(sets, samples);

  std::vector<RerankExample> dev = examples;
  std::vector<std::pair<std::string, std::string>> inputs = {input_hash(args.candidates),
                                                             input_hash(args.data)};
  if (!args.dev_candidates.empty() && !args.dev_data.empty()) {
    auto dev_sets = read_candidates(args.dev_candidates, reg);
    auto dev_samples = sample_map(read_samples(args.dev_data));
    dev = build_rerank_dataset(dev_sets, dev_samples);
    inputs.push_back(input_hash(args.dev_candidates));
    inputs.push_back(input_hash(args.dev_data));
  }

  auto seeds = ctx.seed_list();
  std::vector<std::string> outputs;
  for (unsigned seed : seeds) {
    cfg.seed = seed;
    Reranker reranker;
    reranker.train(cfg, examples, dev);
    std::string out = args.out;
    if (seeds.size() > 1) out += ".seed" + std::to_string(seed);
    ensure_parent_dir(out);
    reranker.save(out);
    outputs.push_back(out);
    std::cout << "seed " << seed << ": dev accuracy " << reranker.accuracy(dev) << " -> " << out
              << "\n";
  }

  write_manifest(ctx, "train-reranker", inputs, outputs, seeds, started);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// predict

struct PredictArgs {
  std::string candidates, data, reranker_path, out;
  std::string policy = "reranked";  // reranked | top-one | oracle
};

SelectionPolicy policy_from_string(const std::string& s) {
  if (s == "reranked") return SelectionPolicy::Reranked;
  if (s == "top-one") return SelectionPolicy::TopOne;
  if (s == "oracle") return SelectionPolicy::Oracle;
  throw ConfigError("unknown selection policy: " + s);
}

int run_predict(const Context& ctx, const PredictArgs& args) {
  const std::string started = now_utc_iso8601();
  const auto& reg = registry_for(ctx);

  SelectionPolicy policy = policy_from_string(args.policy);
  auto sets = read_candidates(args.candidates, reg);
  auto samples = read_samples(args.data);
  std::vector<std::pair<std::string, std::string>> inputs = {input_hash(args.candidates),
                                                             input_hash(args.data)};

  std::optional<Reranker> reranker;
  if (policy == SelectionPolicy::Reranked) {
    if (args.reranker_path.empty()) throw ConfigError("--policy reranked needs --reranker");
    reranker = Reranker::load(args.reranker_path);
    inputs.push_back(input_hash(args.reranker_path));
  }

  auto predictions =
      select_predictions(sets, samples, policy, reranker ? &*reranker : nullptr);
  ensure_parent_dir(args.out);
  write_predictions(args.out, predictions);
  size_t abstained = 0;
  for (const auto& p : predictions) {
    if (!p.triple) ++abstained;
  }
  std::cout << predictions.size() << " predictions (" << abstained << " abstentions) -> "
            << args.out << "\n";

  write_manifest(ctx, "predict", inputs, {args.out}, {}, started);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string pred, gold, out;
  std::string candidates;  // for --recall-at
  bool per_relation = false;
  int recall_at = 0;
  std::string runs_a, runs_b;  // per-seed metric files for significance
};

std::vector<double> read_metric_runs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metric file: " + path);
  std::vector<double> runs;
  double v;
  while (in >> v) runs.push_back(v);
  return runs;
}

int run_evaluate(const Context& ctx, const EvaluateArgs& args) {
  const std::string started = now_utc_iso8601();
  const auto& reg = registry_for(ctx);

  if (!args.runs_a.empty() || !args.runs_b.empty()) {
    if (args.runs_a.empty() || args.runs_b.empty()) {
      throw ConfigError("significance needs both --runs-a and --runs-b");
    }
    double p = significance(read_metric_runs(args.runs_a), read_metric_runs(args.runs_b));
    std::cout << "two-tailed welch t-test p-value: " << p << "\n";
    return kExitOk;
  }

  auto predictions = read_predictions(args.pred);
  auto golds = gold_map(read_samples(args.gold));
  std::vector<std::pair<std::string, std::string>> inputs = {input_hash(args.pred),
                                                             input_hash(args.gold)};

  Prf prf = micro_prf(predictions, golds);
  std::cout << prf_to_string(prf) << "\n";
  json report;
  report["precision"] = prf.precision;
  report["recall"] = prf.recall;
  report["f1"] = prf.f1;
  report["correct"] = prf.correct;
  report["predicted"] = prf.predicted;
  report["gold"] = prf.gold;
  report["abstained"] = prf.abstained;

  if (args.per_relation) {
    auto rows = per_relation_report(predictions, golds);
    std::cout << relation_report_to_table(rows);
    json jr = json::array();
    for (const auto& row : rows) {
      jr.push_back({{"relation", row.relation},
                    {"n", row.n},
                    {"precision", row.prf.precision},
                    {"recall", row.prf.recall},
                    {"f1", row.prf.f1}});
    }
    report["per_relation"] = jr;
  }

  if (args.recall_at > 0) {
    if (args.candidates.empty()) throw ConfigError("--recall-at needs --candidates");
    auto sets = read_candidates(args.candidates, reg);
    inputs.push_back(input_hash(args.candidates));
    auto curve = recall_at_k_curve(sets, golds, args.recall_at);
    json jc = json::array();
    for (size_t k = 0; k < curve.size(); ++k) {
      std::cout << "recall@" << (k + 1) << ": " << curve[k] << "\n";
      jc.push_back(curve[k]);
    }
    report["recall_at_k"] = jc;
  }

  if (!args.out.empty()) {
    ensure_parent_dir(args.out);
    std::ofstream(args.out) << report.dump(2) << "\n";
    write_manifest(ctx, "evaluate", inputs, {args.out}, {}, started);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ablate

struct AblateArgs {
  std::string model_dir, data, reranker_path, out;
  std::string index_path, index_from;
  std::string task = "extraction";
  int beam = -1, top_l = -1;
  bool strict_span_tails = false;
};

int run_ablate(const Context& ctx, const AblateArgs& args) {
  const std::string started = now_utc_iso8601();
  const auto& reg = registry_for(ctx);

  DecodeConfig cfg;
  cfg.mode = task_from_string(args.task);
  cfg.beam_width = ctx.get<int>("decode", "beam", cfg.beam_width);
  cfg.top_l = ctx.get<int>("decode", "L", cfg.top_l);
  if (args.beam > 0) cfg.beam_width = args.beam;
  if (args.top_l > 0) cfg.top_l = args.top_l;
  if (args.strict_span_tails) cfg.strict_span_tails = true;

  CountScorer scorer = CountScorer::load(args.model_dir);
  auto samples = read_samples(args.data);
  Reranker reranker = Reranker::load(args.reranker_path);
  std::vector<std::pair<std::string, std::string>> inputs = {input_hash(args.data),
                                                             input_hash(args.reranker_path)};

  RelationTailIndex index;
  if (!args.index_path.empty()) {
    index = RelationTailIndex::load(args.index_path);
    inputs.push_back(input_hash(args.index_path));
  } else if (!args.index_from.empty()) {
    index = build_relation_tail_index(read_samples(args.index_from));
    inputs.push_back(input_hash(args.index_from));
  } else if (cfg.mode == Task::Inference) {
    throw ConfigError("inference ablation needs --index or --index-from");
  }

  AblationInputs ab{scorer, samples, index, reg, cfg, &reranker};
  auto rows = ablation_run(ab);
  std::cout << ablation_to_table(rows);

  if (!args.out.empty()) {
    ensure_parent_dir(args.out);
    std::ofstream out(args.out);
    for (const auto& row : rows) {
      json j;
      j["variant"] = row.variant;
      j["precision"] = row.prf.precision;
      j["recall"] = row.prf.recall;
      j["f1"] = row.prf.f1;
      out << j.dump() << "\n";
    }
    out.close();
    write_manifest(ctx, "ablate", inputs, {args.out}, {}, started);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string data, out;
  std::vector<std::string> resources;  // kind=path
  std::string stopwords_path;
  std::string parses_path;
};

int run_analyze(const Context& ctx, const AnalyzeArgs& args) {
  const std::string started = now_utc_iso8601();
  auto samples = read_samples(args.data);
  std::vector<std::pair<std::string, std::string>> inputs = {input_hash(args.data)};

  std::unordered_set<std::string> stopwords = default_stopwords();
  if (!args.stopwords_path.empty()) {
    stopwords = load_stopwords(args.stopwords_path);
    inputs.push_back(input_hash(args.stopwords_path));
  }

  json report;
  double direct = directly_identifiable_share(samples);
  double stem = same_stem_coverage(samples);
  std::cout << "directly identifiable tails: " << direct << "%\n";
  std::cout << "not directly identifiable:   " << 100.0 - direct << "%\n";
  std::cout << "same-stem coverage:          " << stem << "%\n";
  report["directly_identifiable_pct"] = direct;
  report["same_stem_coverage_pct"] = stem;

  json cov = json::object();
  for (const auto& spec : args.resources) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) throw ConfigError("--resource expects kind=path: " + spec);
    ResourceKind kind = resource_kind_from_string(spec.substr(0, eq));
    std::string path = spec.substr(eq + 1);
    LexicalResource resource = LexicalResource::load(kind, path);
    inputs.push_back(input_hash(path));
    double c = transformation_coverage(samples, resource, stopwords);
    std::cout << to_string(kind) << " coverage:  " << c << "%\n";
    cov[to_string(kind)] = c;
  }
  if (!cov.empty()) report["transformation_coverage_pct"] = cov;

  if (!args.parses_path.empty()) {
    auto parses = read_parse_file(args.parses_path);
    inputs.push_back(input_hash(args.parses_path));
    auto deps = tail_dependency_distribution(parses, samples);
    auto pos = tail_pos_distribution(parses, samples);
    std::cout << "tail dependency labels:\n" << histogram_to_table(deps);
    std::cout << "tail pos tags:\n" << histogram_to_table(pos);
    report["tail_dependency_counts"] = deps.counts;
    report["tail_pos_counts"] = pos.counts;
    report["alignment_failures"] = deps.alignment_failures;
  }

  if (!args.out.empty()) {
    ensure_parent_dir(args.out);
    std::ofstream(args.out) << report.dump(2) << "\n";
    write_manifest(ctx, "analyze", inputs, {args.out}, {}, started);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personal-attribute triple extraction and inference pipeline"};
  app.require_subcommand(1);

  Context ctx;
  app.add_option("--config", ctx.config_path, "JSON config file with per-stage sections");
  app.add_option("--work-dir", ctx.work_dir, "Directory for run manifests and artifacts");
  app.add_option("--manifest", ctx.manifest_path, "Manifest file (default <work-dir>/manifests.jsonl)");
  app.add_option("--seed", ctx.seed, "Seed for stochastic stages");
  app.add_option("--seeds", ctx.seeds_spec, "Multi-seed spec, e.g. 40-44 or 40,41,42");

  BuildDatasetArgs bd;
  auto* c_bd = app.add_subcommand("build-dataset", "Normalize a raw corpus into task datasets");
  c_bd->add_option("--raw-train", bd.raw_train, "Raw train corpus (jsonl or json array)");
  c_bd->add_option("--raw-dev", bd.raw_dev, "Raw dev corpus");
  c_bd->add_option("--raw-test", bd.raw_test, "Raw test corpus");
  c_bd->add_option("--out-dir", bd.out_dir, "Output directory")->required();

  TrainGeneratorArgs tg;
  auto* c_tg = app.add_subcommand("train-generator", "Fit the count-based generator");
  c_tg->add_option("--data", tg.data, "Training sample file")->required();
  c_tg->add_option("--dev", tg.dev, "Dev sample file");
  c_tg->add_option("--out-dir", tg.out_dir, "Model output directory")->required();
  c_tg->add_option("--task", tg.task, "extraction | inference");
  c_tg->add_option("--lr", tg.learning_rate, "Learning rate override");
  c_tg->add_option("--epochs", tg.max_epochs, "Epoch override");

  DecodeArgs dc;
  auto* c_dc = app.add_subcommand("decode", "Grammar-constrained beam decoding");
  c_dc->add_option("--model", dc.model_dir, "Generator model directory")->required();
  c_dc->add_option("--data", dc.data, "Sample file to decode")->required();
  c_dc->add_option("--out", dc.out, "Candidate output file")->required();
  c_dc->add_option("--mode", dc.mode, "extraction | inference");
  c_dc->add_option("--index", dc.index_path, "Saved relation->tail index file");
  c_dc->add_option("--index-from", dc.index_from, "Build the index from this sample file");
  c_dc->add_option("--beam", dc.beam, "Beam width");
  c_dc->add_option("--L", dc.top_l, "Candidates kept per sentence");
  c_dc->add_option("--max-length", dc.max_length, "Maximum generated tokens");
  c_dc->add_flag("--strict-span-tails", dc.strict_span_tails, "Contiguous-span tail mask");
  c_dc->add_flag("--free", dc.free_decode, "Disable the grammar mask (ablation)");
  c_dc->add_flag("--length-normalize", dc.length_normalize, "Rank by score / length");

  TrainRerankerArgs tr;
  auto* c_tr = app.add_subcommand("train-reranker", "Train the discriminative reranker");
  c_tr->add_option("--candidates", tr.candidates, "Training candidate file")->required();
  c_tr->add_option("--data", tr.data, "Training sample file (gold pairing)")->required();
  c_tr->add_option("--dev-candidates", tr.dev_candidates, "Dev candidate file");
  c_tr->add_option("--dev-data", tr.dev_data, "Dev sample file");
  c_tr->add_option("--out", tr.out, "Reranker checkpoint path")->required();
  c_tr->add_option("--lr", tr.learning_rate, "Learning rate override");
  c_tr->add_option("--epochs", tr.max_epochs, "Epoch override");
  c_tr->add_option("--positive-weight", tr.positive_weight, "Correct-class weight");

  PredictArgs pr;
  auto* c_pr = app.add_subcommand("predict", "Select one prediction per sentence");
  c_pr->add_option("--candidates", pr.candidates, "Candidate file")->required();
  c_pr->add_option("--data", pr.data, "Sample file (sentences)")->required();
  c_pr->add_option("--reranker", pr.reranker_path, "Reranker checkpoint");
  c_pr->add_option("--out", pr.out, "Prediction output file")->required();
  c_pr->add_option("--policy", pr.policy, "reranked | top-one | oracle");

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "Exact-match micro P/R/F1");
  c_ev->add_option("--pred", ev.pred, "Prediction file");
  c_ev->add_option("--gold", ev.gold, "Gold sample file");
  c_ev->add_option("--out", ev.out, "Machine-readable report file");
  c_ev->add_flag("--per-relation", ev.per_relation, "Per-relation breakdown");
  c_ev->add_option("--recall-at", ev.recall_at, "Report recall@1..K (needs --candidates)");
  c_ev->add_option("--candidates", ev.candidates, "Candidate file for recall@k");
  c_ev->add_option("--runs-a", ev.runs_a, "Per-seed metric file (significance)");
  c_ev->add_option("--runs-b", ev.runs_b, "Per-seed metric file (significance)");

  AblateArgs ab;
  auto* c_ab = app.add_subcommand("ablate", "full / no-constraints / no-reranker grid");
  c_ab->add_option("--model", ab.model_dir, "Generator model directory")->required();
  c_ab->add_option("--data", ab.data, "Evaluation sample file")->required();
  c_ab->add_option("--reranker", ab.reranker_path, "Reranker checkpoint")->required();
  c_ab->add_option("--task", ab.task, "extraction | inference");
  c_ab->add_option("--index", ab.index_path, "Saved relation->tail index file");
  c_ab->add_option("--index-from", ab.index_from, "Build the index from this sample file");
  c_ab->add_option("--beam", ab.beam, "Beam width");
  c_ab->add_option("--L", ab.top_l, "Candidates kept per sentence");
  c_ab->add_flag("--strict-span-tails", ab.strict_span_tails, "Contiguous-span tail mask");
  c_ab->add_option("--out", ab.out, "Row output file (jsonl)");

  AnalyzeArgs an;
  auto* c_an = app.add_subcommand("analyze", "Linguistic analysis reports");
  c_an->add_option("--data", an.data, "Sample file (inference task for coverage)")->required();
  c_an->add_option("--resource", an.resources, "Lexical resource as kind=path (repeatable)");
  c_an->add_option("--stopwords", an.stopwords_path, "Stopword file override");
  c_an->add_option("--parses", an.parses_path, "Dependency parse file aligned with --data");
  c_an->add_option("--out", an.out, "Machine-readable report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    ctx.finalize();
    if (c_bd->parsed()) return run_build_dataset(ctx, bd);
    if (c_tg->parsed()) return run_train_generator(ctx, tg);
    if (c_dc->parsed()) return run_decode(ctx, dc);
    if (c_tr->parsed()) return run_train_reranker(ctx, tr);
    if (c_pr->parsed()) return run_predict(ctx, pr);
    if (c_ev->parsed()) return run_evaluate(ctx, ev);
    if (c_ab->parsed()) return run_ablate(ctx, ab);
    if (c_an->parsed()) return run_analyze(ctx, an);
    std::cerr << "no subcommand\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStageError;
  }
}
