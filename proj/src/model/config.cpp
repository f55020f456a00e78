#include "vampcf/model/config.hpp"

#include "vampcf/error.hpp"

namespace vampcf::model {

std::string_view to_string(PriorKind p) { return p == PriorKind::standard ? "standard" : "vamp"; }
std::string_view to_string(Hierarchy h) { return h == Hierarchy::flat ? "flat" : "two_level"; }
std::string_view to_string(Likelihood l) {
  return l == Likelihood::multinomial ? "multinomial" : "bernoulli";
}

std::optional<PriorKind> parse_prior(std::string_view s) {
  if (s == "standard") return PriorKind::standard;
  if (s == "vamp") return PriorKind::vamp;
  return std::nullopt;
}

std::optional<Hierarchy> parse_hierarchy(std::string_view s) {
  if (s == "flat") return Hierarchy::flat;
  if (s == "two_level") return Hierarchy::two_level;
  return std::nullopt;
}

std::optional<Likelihood> parse_likelihood(std::string_view s) {
  if (s == "multinomial") return Likelihood::multinomial;
  if (s == "bernoulli") return Likelihood::bernoulli;
  return std::nullopt;
}

void ModelConfig::validate() const {
  if (n_items == 0) throw ConfigError("model: n_items (M) must be positive");
  if (depth == 0) throw ConfigError("model: depth must be at least 1");
  if (hidden == 0) throw ConfigError("model: hidden width must be positive");
  if (latent_z2 == 0 || (two_level() && latent_z1 == 0)) {
    throw ConfigError("model: latent dimensions must be positive");
  }
  if (two_level() && !vamp()) {
    throw ConfigError("model: the two-level hierarchy requires the vamp prior on z2");
  }
  if (vamp() && n_pseudo == 0) throw ConfigError("model: vamp prior needs K >= 1 pseudo-inputs");
}

std::string ModelConfig::grid_name() const {
  std::string name;
  if (two_level()) {
    name = "H+Vamp";
  } else {
    name = vamp() ? "Vamp" : "Multi-VAE";
  }
  if (gated) name += " (Gated)";
  if (likelihood == Likelihood::bernoulli) name += " [Bernoulli]";
  return name;
}

std::optional<ModelConfig> preset(std::string_view name, ModelConfig base) {
  struct Row {
    std::string_view name;
    PriorKind prior;
    Hierarchy hierarchy;
    bool gated;
  };
  static constexpr Row kRows[] = {
      {"multi_vae", PriorKind::standard, Hierarchy::flat, false},
      {"multi_vae_gated", PriorKind::standard, Hierarchy::flat, true},
      {"vamp", PriorKind::vamp, Hierarchy::flat, false},
      {"vamp_gated", PriorKind::vamp, Hierarchy::flat, true},
      {"h_vamp", PriorKind::vamp, Hierarchy::two_level, false},
      {"h_vamp_gated", PriorKind::vamp, Hierarchy::two_level, true},
  };
  for (const Row& r : kRows) {
    if (r.name == name) {
      base.prior = r.prior;
      base.hierarchy = r.hierarchy;
      base.gated = r.gated;
      return base;
    }
  }
  return std::nullopt;
}

}  // namespace vampcf::model
