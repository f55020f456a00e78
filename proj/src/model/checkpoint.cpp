#include "vampcf/model/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "vampcf/dataset/split.hpp"
#include "vampcf/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace vampcf::model {

namespace {

constexpr const char* kFormat = "vampcf-checkpoint";
constexpr int kVersion = 1;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return out;
  }
}

json config_to_json(const ModelConfig& c) {
  return {{"prior", to_string(c.prior)},       {"hierarchy", to_string(c.hierarchy)},
          {"likelihood", to_string(c.likelihood)}, {"gated", c.gated},
          {"depth", c.depth},                  {"hidden", c.hidden},
          {"latent_z1", c.latent_z1},          {"latent_z2", c.latent_z2},
          {"K", c.n_pseudo},                   {"M", c.n_items}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  auto prior = parse_prior(j.at("prior").get<std::string>());
  auto hierarchy = parse_hierarchy(j.at("hierarchy").get<std::string>());
  auto likelihood = parse_likelihood(j.at("likelihood").get<std::string>());
  if (!prior || !hierarchy || !likelihood) throw DataError("checkpoint: unknown model kind");
  c.prior = *prior;
  c.hierarchy = *hierarchy;
  c.likelihood = *likelihood;
  c.gated = j.at("gated").get<bool>();
  c.depth = j.at("depth").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::size_t>();
  c.latent_z1 = j.at("latent_z1").get<std::size_t>();
  c.latent_z2 = j.at("latent_z2").get<std::size_t>();
  c.n_pseudo = j.at("K").get<std::size_t>();
  c.n_items = j.at("M").get<std::size_t>();
  return c;
}

}  // namespace

void save_checkpoint(const fs::path& path, const Checkpoint& checkpoint) {
  const ModelParams& p = checkpoint.params;
  if (checkpoint.vocabulary.size() != p.config.n_items) {
    throw ConfigError("checkpoint: vocabulary size differs from model M");
  }
  json header;
  header["format"] = kFormat;
  header["version"] = kVersion;
  header["config"] = config_to_json(p.config);
  header["grid_name"] = p.config.grid_name();
  json tensors = json::array();
  for (const auto& t : p.tensors()) {
    tensors.push_back({{"name", t.name}, {"rows", t.value->rows()}, {"cols", t.value->cols()}});
  }
  header["tensors"] = tensors;
  header["vocab_fingerprint"] = checkpoint.vocab_fingerprint;
  header["vocabulary"] = checkpoint.vocabulary;

  fs::path staging = path;
  staging += ".partial";
  {
    std::ofstream out(staging, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + staging.string());
    out << header.dump() << '\n';
    std::vector<std::uint64_t> buffer;
    for (const auto& t : p.tensors()) {
      buffer.resize(t.value->size());
      for (std::size_t i = 0; i < buffer.size(); ++i) {
        buffer[i] = to_little(std::bit_cast<std::uint64_t>((*t.value)[i]));
      }
      out.write(reinterpret_cast<const char*>(buffer.data()),
                static_cast<std::streamsize>(buffer.size() * sizeof(std::uint64_t)));
    }
    if (!out) throw DataError("failed writing " + staging.string());
  }
  fs::rename(staging, path);
}

Checkpoint load_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("checkpoint " + path.string() + " is empty");

  Checkpoint ck;
  try {
    const json header = json::parse(line);
    if (header.at("format") != kFormat || header.at("version") != kVersion) {
      throw DataError("checkpoint " + path.string() + ": unsupported format");
    }
    ck.params = ModelParams::zeros(config_from_json(header.at("config")));
    ck.vocabulary = header.at("vocabulary").get<std::vector<std::string>>();
    ck.vocab_fingerprint = header.at("vocab_fingerprint").get<std::string>();

    auto tensors = ck.params.tensors();
    const json& declared = header.at("tensors");
    if (declared.size() != tensors.size()) {
      throw DataError("checkpoint: tensor count does not match the configuration");
    }
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      const json& d = declared[i];
      if (d.at("name") != tensors[i].name || d.at("rows") != tensors[i].value->rows() ||
          d.at("cols") != tensors[i].value->cols()) {
        throw DataError("checkpoint: tensor " + d.at("name").get<std::string>() +
                        " does not match the configuration");
      }
    }
    std::vector<std::uint64_t> buffer;
    for (auto& t : tensors) {
      buffer.resize(t.value->size());
      in.read(reinterpret_cast<char*>(buffer.data()),
              static_cast<std::streamsize>(buffer.size() * sizeof(std::uint64_t)));
      if (!in) throw DataError("checkpoint: truncated data for " + t.name);
      for (std::size_t i = 0; i < buffer.size(); ++i) {
        (*t.value)[i] = std::bit_cast<double>(to_little(buffer[i]));
      }
    }
  } catch (const json::exception& e) {
    throw DataError("checkpoint " + path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw DataError("checkpoint " + path.string() + ": " + e.what());
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("checkpoint " + path.string() + ": trailing bytes");
  }
  if (ck.vocabulary.size() != ck.params.config.n_items ||
      dataset::vocabulary_fingerprint(ck.vocabulary) != ck.vocab_fingerprint) {
    throw DataError("checkpoint " + path.string() + ": vocabulary is inconsistent");
  }
  return ck;
}

}  // namespace vampcf::model
