#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "vampcf/model/config.hpp"
#include "vampcf/trainer/trainer.hpp"

namespace vampcf::cli {

struct DataSection {
  std::string split_dir;
  std::string ratings;
  double min_rating = 4.0;
  std::size_t min_items = 5;
  double fold_in_fraction = 0.8;
  std::size_t heldout_users = 0;
};

/// Typed view of a run configuration. model.n_items is filled in from the
/// split when training starts.
struct RunConfig {
  std::string preset;
  model::ModelConfig model;
  trainer::TrainConfig train;
  DataSection data;
};

/// Sectioned key=value text:
///
///   [model]
///   preset = h_vamp_gated
///   K = 1000
///
/// Every key also accepts a `--set section.key=value` override. Unknown
/// sections or keys are rejected; values are validated when build() runs.
class RunConfigBuilder {
 public:
  RunConfigBuilder();

  void parse_text(std::string_view text, const std::string& source = "<config>");
  void parse_file(const std::filesystem::path& path);
  /// "section.key=value"
  void set(std::string_view assignment);
  void set(const std::string& key, const std::string& value);

  /// Converts and validates every value. Explicit model.prior / hierarchy /
  /// gated keys take precedence over model.preset.
  RunConfig build() const;

  static const std::set<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> explicit_;
};

}  // namespace vampcf::cli
