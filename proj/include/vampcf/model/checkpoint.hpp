#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vampcf/model/params.hpp"

namespace vampcf::model {

/// A trained model plus the item vocabulary its M outputs refer to.
struct Checkpoint {
  ModelParams params;
  std::vector<std::string> vocabulary;
  std::string vocab_fingerprint;
};

// File layout: one line of compact JSON (config, tensor names and shapes,
// vocabulary, fingerprint) terminated by '\n', followed by every tensor's
// entries as little-endian IEEE-754 doubles in header order.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace vampcf::model
