#include "vampcf/cli/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "vampcf/cli/gradcheck_grid.hpp"
#include "vampcf/cli/run_config.hpp"
#include "vampcf/dataset/split.hpp"
#include "vampcf/error.hpp"
#include "vampcf/eval/evaluate.hpp"
#include "vampcf/eval/metrics.hpp"
#include "vampcf/eval/report.hpp"
#include "vampcf/model/checkpoint.hpp"
#include "vampcf/model/model.hpp"
#include "vampcf/trainer/trainer.hpp"

namespace fs = std::filesystem;

namespace vampcf::cli {

namespace {

struct PrepareArgs {
  std::string ratings;
  double min_rating = 4.0;
  std::size_t min_items = 5;
  std::size_t heldout_users = 0;
  double fold_in_fraction = 0.8;
  std::uint64_t seed = 0;
  std::string out;
};

struct TrainArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string split_dir;
  std::string checkpoint;
  std::string log;
  std::optional<std::uint64_t> seed;
};

struct EvalArgs {
  std::string checkpoint;
  std::string data;
  std::string which = "test";
  std::vector<std::size_t> ks = {20, 50, 100};
  std::string out;
  std::string per_user_csv;
};

struct RecommendArgs {
  std::string checkpoint;
  std::vector<std::string> items;
  std::string history;
  std::size_t top_n = 20;
};

struct GradcheckArgs {
  std::uint64_t seed = 0;
  double eps = 1e-5;
  double tolerance = 1e-4;
  std::string corrupt_cell;
};

int cmd_prepare(const PrepareArgs& a, std::ostream& out) {
  const dataset::IngestOptions ingest{a.min_rating, a.min_items};
  const auto users = dataset::ingest(a.ratings, ingest);
  dataset::DatasetSplit split =
      dataset::split(users, {a.heldout_users, a.fold_in_fraction, a.seed});
  split.ingest = ingest;
  dataset::write_split(split, a.out);

  std::size_t train_interactions = 0;
  for (const auto& v : split.train) train_interactions += v.count();
  auto heldout_interactions = [](const std::vector<dataset::HeldoutUser>& group) {
    std::pair<std::size_t, std::size_t> n{0, 0};
    for (const auto& h : group) {
      n.first += h.fold_in.count();
      n.second += h.heldout.count();
    }
    return n;
  };
  const auto val = heldout_interactions(split.validation);
  const auto test = heldout_interactions(split.test);
  out << "users after filtering: " << users.size() << "\n"
      << "N (users in split): " << split.n_users() << "\n"
      << "M (items): " << split.n_items() << "\n"
      << "train: " << split.train.size() << " users, " << train_interactions << " interactions\n"
      << "validation: " << split.validation.size() << " users, " << val.first << " fold-in / "
      << val.second << " heldout interactions\n"
      << "test: " << split.test.size() << " users, " << test.first << " fold-in / " << test.second
      << " heldout interactions\n"
      << "discarded heldout users: " << split.diagnostics.discarded_empty_fold_in
      << " with empty fold-in, " << split.diagnostics.discarded_empty_heldout
      << " with empty heldout; dropped " << split.diagnostics.dropped_out_of_vocab_items
      << " out-of-vocabulary items\n"
      << "wrote " << a.out << "\n";
  return kOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  RunConfigBuilder builder;
  if (!a.config.empty()) builder.parse_file(a.config);
  for (const std::string& s : a.overrides) builder.set(std::string_view(s));
  if (!a.split_dir.empty()) builder.set("data.split_dir", a.split_dir);
  if (a.seed) builder.set("train.seed", std::to_string(*a.seed));
  RunConfig cfg = builder.build();
  if (cfg.data.split_dir.empty()) throw ConfigError("no split directory (data.split_dir or --split)");

  const dataset::DatasetSplit split = dataset::read_split(cfg.data.split_dir);
  cfg.model.n_items = split.n_items();
  cfg.model.validate();

  const fs::path checkpoint = a.checkpoint.empty() ? fs::path(cfg.data.split_dir) / "model.ckpt"
                                                   : fs::path(a.checkpoint);
  fs::path log_path = a.log;
  if (log_path.empty()) {
    log_path = checkpoint;
    log_path += ".log.jsonl";
  }
  std::ofstream log(log_path, std::ios::trunc);
  if (!log) throw DataError("cannot write training log " + log_path.string());

  out << "training " << cfg.model.grid_name() << " (" << to_string(cfg.model.likelihood)
      << " likelihood) on " << split.train.size() << " users, M=" << split.n_items() << "\n";

  trainer::TrainCallbacks callbacks;
  callbacks.on_epoch = [&](const trainer::EpochRecord& r) {
    log << trainer::to_json_line(r) << '\n';
    log.flush();
    out << "epoch " << r.epoch << "  elbo " << r.mean_elbo << "  beta " << r.beta
        << "  val NDCG@" << cfg.train.eval_k << " " << r.val_metric << "\n";
  };
  callbacks.on_improvement = [&](const model::ModelParams& params, const trainer::EpochRecord&) {
    model::save_checkpoint(checkpoint, {params, split.vocabulary, split.fingerprint()});
  };
  try {
    const auto result = trainer::train(split, cfg.model, cfg.train, callbacks);
    out << "best validation NDCG@" << cfg.train.eval_k << ": " << result.best_metric
        << " (epoch " << result.best_epoch << ")\n"
        << "checkpoint: " << checkpoint.string() << "\n";
  } catch (const NumericalError&) {
    err << "training aborted; last best checkpoint retained at " << checkpoint.string() << "\n";
    throw;
  }
  return kOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (a.which != "test" && a.which != "validation") {
    throw ConfigError("--split must be test or validation");
  }
  const model::Checkpoint ck = model::load_checkpoint(a.checkpoint);
  const dataset::DatasetSplit split = dataset::read_split(a.data);
  if (ck.vocab_fingerprint != split.fingerprint()) {
    throw ConfigError("vocabulary mismatch: checkpoint fingerprint " + ck.vocab_fingerprint +
                      " vs split fingerprint " + split.fingerprint());
  }
  eval::EvalOptions options;
  options.keep_per_user = !a.per_user_csv.empty();
  options.fingerprint = ck.params.config.grid_name() + " vocab:" + ck.vocab_fingerprint;
  const auto& users = a.which == "test" ? split.test : split.validation;
  const eval::MetricReport report =
      eval::evaluate(users, split.n_items(), ck.params, a.ks, options);

  out << report_table(report);
  if (!a.out.empty()) {
    std::ofstream json(a.out + ".json", std::ios::binary);
    json << eval::report_json(report);
    std::ofstream text(a.out + ".txt", std::ios::binary);
    text << eval::report_table(report);
    if (!json || !text) throw DataError("failed writing report " + a.out);
  }
  if (!a.per_user_csv.empty()) {
    std::ofstream csv(a.per_user_csv, std::ios::binary);
    eval::write_per_user_csv(report, csv);
    if (!csv) throw DataError("failed writing " + a.per_user_csv);
  }
  return kOk;
}

int cmd_recommend(const RecommendArgs& a, std::ostream& out, std::ostream& err) {
  const model::Checkpoint ck = model::load_checkpoint(a.checkpoint);
  std::vector<std::string> ids = a.items;
  if (!a.history.empty()) {
    std::ifstream in(a.history);
    if (!in) throw DataError("cannot open history file " + a.history);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) ids.push_back(line);
    }
  }
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < ck.vocabulary.size(); ++i) {
    index.emplace(ck.vocabulary[i], static_cast<std::uint32_t>(i));
  }
  std::set<std::uint32_t> known;
  for (const std::string& id : ids) {
    auto it = index.find(id);
    if (it == index.end()) {
      err << "warning: unknown item id '" << id << "' dropped\n";
      continue;
    }
    known.insert(it->second);
  }
  if (known.empty()) throw DataError("recommend: no usable item ids in the interaction list");

  const dataset::InteractionVector history{0, {known.begin(), known.end()}};
  const numcore::Matrix scores =
      model::score(dataset::to_dense(history, ck.params.config.n_items), ck.params);
  const auto ranking = eval::top_k(scores.row(0), history.items, a.top_n);
  char value[32];
  for (std::size_t r = 0; r < ranking.size(); ++r) {
    std::snprintf(value, sizeof value, "%.6f", scores(0, ranking[r]));
    out << r + 1 << '\t' << ck.vocabulary[ranking[r]] << '\t' << value << '\n';
  }
  return kOk;
}

int cmd_gradcheck(const GradcheckArgs& a, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  std::vector<std::string> failed;
  char line[160];
  std::snprintf(line, sizeof line, "%-40s %14s  %-8s %s\n", "cell", "max_rel_error", "status",
                "worst_tensor");
  out << line;
  for (const auto& config : gradcheck_grid()) {
    const std::string name = cell_name(config);
    const auto r = check_model_gradients(config, a.seed, a.eps, a.tolerance, name == a.corrupt_cell);
    std::snprintf(line, sizeof line, "%-40s %14.3e  %-8s %s\n", name.c_str(), r.max_rel_error,
                  r.passed ? "pass" : "FAIL", r.worst_tensor.c_str());
    out << line;
    if (!r.passed) failed.push_back(name);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out << "elapsed: " << secs << " s\n";
  if (!failed.empty()) {
    for (const auto& f : failed) err << "gradient check failed: " << f << "\n";
    return kNumericalFailure;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical VampPrior VAEs with gated layers for implicit-feedback recommendation",
               "vampcf"};
  app.require_subcommand(1);

  PrepareArgs prep;
  auto* prepare = app.add_subcommand("prepare", "Binarize ratings and write a strong-generalization split");
  prepare->add_option("--ratings", prep.ratings, "user,item,rating[,timestamp] file")->required();
  prepare->add_option("--min-rating", prep.min_rating, "keep ratings >= this value");
  prepare->add_option("--min-items", prep.min_items, "drop users with fewer items");
  prepare->add_option("--heldout-users", prep.heldout_users, "users in each of validation and test")
      ->required();
  prepare->add_option("--fold-in-fraction", prep.fold_in_fraction, "share of history used for fold-in");
  prepare->add_option("--seed", prep.seed, "random seed");
  prepare->add_option("--out", prep.out, "output split directory")->required();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train one model configuration");
  train->add_option("--config", tr.config, "sectioned key=value config file");
  train->add_option("--set", tr.overrides, "override, e.g. model.K=1000")->take_all();
  train->add_option("--split", tr.split_dir, "split directory (overrides data.split_dir)");
  train->add_option("--out", tr.checkpoint, "checkpoint path (default <split>/model.ckpt)");
  train->add_option("--log", tr.log, "JSON-lines training log (default <checkpoint>.log.jsonl)");
  train->add_option("--seed", tr.seed, "overrides train.seed");

  EvalArgs ev;
  auto* evaluate = app.add_subcommand("eval", "Fold-in evaluation of a checkpoint");
  evaluate->add_option("--checkpoint", ev.checkpoint)->required();
  evaluate->add_option("--data", ev.data, "split directory")->required();
  evaluate->add_option("--split", ev.which, "test or validation");
  evaluate->add_option("--ks", ev.ks, "cutoffs")->delimiter(',');
  evaluate->add_option("--out", ev.out, "write <out>.json and <out>.txt");
  evaluate->add_option("--per-user-csv", ev.per_user_csv, "per-user metric rows");

  RecommendArgs rec;
  auto* recommend = app.add_subcommand("recommend", "Top-N items for an interaction history");
  recommend->add_option("--checkpoint", rec.checkpoint)->required();
  recommend->add_option("--items", rec.items, "comma-separated item ids")->delimiter(',');
  recommend->add_option("--history", rec.history, "file with one item id per line");
  recommend->add_option("--top-n", rec.top_n, "number of recommendations");

  GradcheckArgs gc;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of every model variant");
  gradcheck->add_option("--seed", gc.seed);
  gradcheck->add_option("--eps", gc.eps, "central difference step");
  gradcheck->add_option("--tolerance", gc.tolerance, "max relative error");
  gradcheck->add_option("--corrupt-cell", gc.corrupt_cell, "test hook: corrupt one cell's gradient");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsageError;
  }

  try {
    if (prepare->parsed()) return cmd_prepare(prep, out);
    if (train->parsed()) return cmd_train(tr, out, err);
    if (evaluate->parsed()) return cmd_eval(ev, out);
    if (recommend->parsed()) return cmd_recommend(rec, out, err);
    if (gradcheck->parsed()) return cmd_gradcheck(gc, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace vampcf::cli
