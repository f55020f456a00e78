#include "vampcf/cli/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vampcf/error.hpp"

namespace vampcf::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t to_count(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

}  // namespace

const std::set<std::string>& RunConfigBuilder::known_keys() {
  static const std::set<std::string> keys = {
      "model.preset",       "model.prior",       "model.hierarchy",
      "model.likelihood",   "model.gated",       "model.depth",
      "model.hidden",       "model.dz1",         "model.dz2",
      "model.K",            "train.batch_size",  "train.max_epochs",
      "train.learning_rate", "train.beta_cap",   "train.anneal_steps",
      "train.dropout",      "train.patience",    "train.seed",
      "train.eval_k",       "data.split_dir",    "data.ratings",
      "data.min_rating",    "data.min_items",    "data.fold_in_fraction",
      "data.heldout_users",
  };
  return keys;
}

RunConfigBuilder::RunConfigBuilder() {
  const RunConfig d;
  values_["model.preset"] = "multi_vae";
  values_["model.prior"] = std::string(model::to_string(d.model.prior));
  values_["model.hierarchy"] = std::string(model::to_string(d.model.hierarchy));
  values_["model.likelihood"] = std::string(model::to_string(d.model.likelihood));
  values_["model.gated"] = d.model.gated ? "true" : "false";
  values_["model.depth"] = std::to_string(d.model.depth);
  values_["model.hidden"] = std::to_string(d.model.hidden);
  values_["model.dz1"] = std::to_string(d.model.latent_z1);
  values_["model.dz2"] = std::to_string(d.model.latent_z2);
  values_["model.K"] = std::to_string(d.model.n_pseudo);
  values_["train.batch_size"] = std::to_string(d.train.batch_size);
  values_["train.max_epochs"] = std::to_string(d.train.max_epochs);
  values_["train.learning_rate"] = "0.001";
  values_["train.beta_cap"] = "0.2";
  values_["train.anneal_steps"] = std::to_string(d.train.anneal_steps);
  values_["train.dropout"] = "0.5";
  values_["train.patience"] = std::to_string(d.train.patience);
  values_["train.seed"] = std::to_string(d.train.seed);
  values_["train.eval_k"] = std::to_string(d.train.eval_k);
  values_["data.split_dir"] = "";
  values_["data.ratings"] = "";
  values_["data.min_rating"] = "4";
  values_["data.min_items"] = "5";
  values_["data.fold_in_fraction"] = "0.8";
  values_["data.heldout_users"] = "0";
}

void RunConfigBuilder::set(const std::string& key, const std::string& value) {
  if (!known_keys().contains(key)) throw ConfigError("unknown config key '" + key + "'");
  values_[key] = value;
  explicit_.insert(key);
}

void RunConfigBuilder::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not section.key=value");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfigBuilder::parse_text(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(source + ":" + std::to_string(line_no) + ": bad section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (section != "model" && section != "train" && section != "data") {
        throw ConfigError(source + ":" + std::to_string(line_no) + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos || section.empty()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key = value inside a section");
    }
    try {
      set(section + "." + trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfigBuilder::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  parse_text(text.str(), path.string());
}

RunConfig RunConfigBuilder::build() const {
  const auto& v = values_;
  RunConfig c;
  c.preset = v.at("model.preset");
  auto base = model::preset(c.preset);
  if (!base) throw ConfigError("model.preset: unknown preset '" + c.preset + "'");
  c.model = *base;

  if (explicit_.contains("model.prior")) {
    auto p = model::parse_prior(v.at("model.prior"));
    if (!p) throw ConfigError("model.prior: expected standard or vamp");
    c.model.prior = *p;
  }
  if (explicit_.contains("model.hierarchy")) {
    auto h = model::parse_hierarchy(v.at("model.hierarchy"));
    if (!h) throw ConfigError("model.hierarchy: expected flat or two_level");
    c.model.hierarchy = *h;
  }
  if (explicit_.contains("model.gated")) c.model.gated = to_bool("model.gated", v.at("model.gated"));
  auto lik = model::parse_likelihood(v.at("model.likelihood"));
  if (!lik) throw ConfigError("model.likelihood: expected multinomial or bernoulli");
  c.model.likelihood = *lik;
  c.model.depth = to_count("model.depth", v.at("model.depth"));
  c.model.hidden = to_count("model.hidden", v.at("model.hidden"));
  c.model.latent_z1 = to_count("model.dz1", v.at("model.dz1"));
  c.model.latent_z2 = to_count("model.dz2", v.at("model.dz2"));
  c.model.n_pseudo = to_count("model.K", v.at("model.K"));

  c.train.batch_size = to_count("train.batch_size", v.at("train.batch_size"));
  c.train.max_epochs = to_count("train.max_epochs", v.at("train.max_epochs"));
  c.train.learning_rate = to_real("train.learning_rate", v.at("train.learning_rate"));
  c.train.beta_cap = to_real("train.beta_cap", v.at("train.beta_cap"));
  c.train.anneal_steps = to_count("train.anneal_steps", v.at("train.anneal_steps"));
  c.train.dropout_rate = to_real("train.dropout", v.at("train.dropout"));
  c.train.patience = to_count("train.patience", v.at("train.patience"));
  c.train.seed = to_count("train.seed", v.at("train.seed"));
  c.train.eval_k = to_count("train.eval_k", v.at("train.eval_k"));

  c.data.split_dir = v.at("data.split_dir");
  c.data.ratings = v.at("data.ratings");
  c.data.min_rating = to_real("data.min_rating", v.at("data.min_rating"));
  c.data.min_items = to_count("data.min_items", v.at("data.min_items"));
  c.data.fold_in_fraction = to_real("data.fold_in_fraction", v.at("data.fold_in_fraction"));
  c.data.heldout_users = to_count("data.heldout_users", v.at("data.heldout_users"));

  if (!(c.train.beta_cap >= 0.0 && c.train.beta_cap <= 1.0)) {
    throw ConfigError("train.beta_cap = " + v.at("train.beta_cap") +
                      " is invalid: beta must lie in [0, 1]");
  }
  c.train.validate();
  // n_items is unknown until the split is read; validate the rest now.
  model::ModelConfig probe = c.model;
  probe.n_items = 1;
  probe.validate();
  if (!(c.data.fold_in_fraction > 0.0 && c.data.fold_in_fraction < 1.0)) {
    throw ConfigError("data.fold_in_fraction must lie strictly between 0 and 1");
  }
  return c;
}

}  // namespace vampcf::cli
