#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace vampcf::model {

enum class PriorKind { standard, vamp };
enum class Hierarchy { flat, two_level };
enum class Likelihood { multinomial, bernoulli };
enum class Mode { train, eval };

std::string_view to_string(PriorKind p);
std::string_view to_string(Hierarchy h);
std::string_view to_string(Likelihood l);
std::optional<PriorKind> parse_prior(std::string_view s);
std::optional<Hierarchy> parse_hierarchy(std::string_view s);
std::optional<Likelihood> parse_likelihood(std::string_view s);

/// Architecture of one model in the grid. A flat model has a single latent
/// produced by the z2 encoder (dimension latent_z2); the two-level model
/// adds z1 (dimension latent_z1) with its own encoder and conditional prior.
struct ModelConfig {
  PriorKind prior = PriorKind::standard;
  Hierarchy hierarchy = Hierarchy::flat;
  Likelihood likelihood = Likelihood::multinomial;
  bool gated = false;
  std::size_t depth = 1;      // hidden layers per trunk
  std::size_t hidden = 600;   // width of every hidden layer
  std::size_t latent_z1 = 200;
  std::size_t latent_z2 = 200;
  std::size_t n_pseudo = 1000;  // K, VampPrior components
  std::size_t n_items = 0;      // M

  bool two_level() const { return hierarchy == Hierarchy::two_level; }
  bool vamp() const { return prior == PriorKind::vamp; }

  /// Throws ConfigError on an invalid combination or zero dimension.
  void validate() const;

  /// Short grid row name: "Multi-VAE", "Vamp", "H+Vamp", plus " (Gated)",
  /// plus " [Bernoulli]" for the binary likelihood.
  std::string grid_name() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Named configurations: multi_vae, multi_vae_gated, vamp, vamp_gated,
/// h_vamp, h_vamp_gated. Sets prior / hierarchy / gated only.
std::optional<ModelConfig> preset(std::string_view name, ModelConfig base = {});

}  // namespace vampcf::model
