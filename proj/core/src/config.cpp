#include "subspace/config.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "subspace/error.hpp"
#include "subspace/rng.hpp"
#include "toml.hpp"

namespace subspace {

const TrainConfig& SweepConfig::train_for(ProjectionMethod method) const {
  const auto it = method_train.find(method);
  return it == method_train.end() ? baseline_train : it->second;
}

void SweepConfig::validate(std::size_t ambient_dim) const {
  for (std::size_t k : target_dims) {
    if (k == 0 || k > ambient_dim) {
      throw InvalidDimensionError("target dim " + std::to_string(k) + " is outside [1, " +
                                  std::to_string(ambient_dim) + "]");
    }
  }
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
  baseline_train.validate();
  for (const auto& [method, cfg] : method_train) cfg.validate();
}

std::uint64_t jl_seed_for(std::uint64_t master_seed, std::size_t k) {
  return master_seed ^ mix64(static_cast<std::uint64_t>(k));
}

namespace {

std::uint64_t as_u64(const toml::node& node, std::string_view key) {
  const auto v = node.value<std::int64_t>();
  if (!v || *v < 0) throw ConfigError("'" + std::string(key) + "' must be a non-negative integer");
  return static_cast<std::uint64_t>(*v);
}

double as_double(const toml::node& node, std::string_view key) {
  if (const auto v = node.value<double>()) return *v;
  throw ConfigError("'" + std::string(key) + "' must be a number");
}

std::string as_string(const toml::node& node, std::string_view key) {
  if (const auto v = node.value<std::string>()) return *v;
  throw ConfigError("'" + std::string(key) + "' must be a string");
}

TrainConfig preset(std::string_view name) {
  if (name == "resnet") return TrainConfig::resnet_sgd();
  if (name == "bert") return TrainConfig::bert_adamw();
  if (name == "vit") return TrainConfig::vit_adamw();
  throw ConfigError("unknown train preset '" + std::string(name) + "' (resnet, bert, vit)");
}

// Applies the scalar keys of `table` on top of `base`. Sub-tables are skipped
// so [train] can carry per-method overrides.
TrainConfig apply_train_table(const toml::table& table, TrainConfig base) {
  if (const auto* p = table.get("preset")) {
    const auto keep_seed = base.shuffle_seed;
    base = preset(as_string(*p, "preset"));
    base.shuffle_seed = keep_seed;
  }
  for (const auto& [key, node] : table) {
    const std::string_view k = key.str();
    if (node.is_table() || k == "preset" || k == "max_map_steps") continue;
    if (k == "optimizer") {
      try {
        base.optimizer = parse_optimizer_kind(as_string(node, k));
      } catch (const InputError& e) {
        throw ConfigError(e.what());
      }
    } else if (k == "learning_rate") {
      base.learning_rate = as_double(node, k);
    } else if (k == "weight_decay") {
      base.weight_decay = as_double(node, k);
    } else if (k == "momentum") {
      base.momentum = as_double(node, k);
    } else if (k == "epochs") {
      base.epochs = as_u64(node, k);
    } else if (k == "batch_size") {
      base.batch_size = as_u64(node, k);
    } else if (k == "shuffle_seed") {
      base.shuffle_seed = as_u64(node, k);
    } else {
      throw ConfigError("unknown key '" + std::string(k) + "' in train table");
    }
  }
  return base;
}

CollapseSpec parse_synthetic(const toml::table& data, std::uint64_t master_seed) {
  CollapseSpec spec;
  spec.seed = master_seed;
  for (const auto& [key, node] : data) {
    const std::string_view k = key.str();
    if (k == "source") continue;
    if (k == "num_classes") spec.num_classes = as_u64(node, k);
    else if (k == "ambient_dim") spec.ambient_dim = as_u64(node, k);
    else if (k == "samples_per_class") spec.samples_per_class = as_u64(node, k);
    else if (k == "within_class_sigma") spec.within_class_sigma = as_double(node, k);
    else if (k == "mean_radius") spec.mean_radius = as_double(node, k);
    else if (k == "seed") spec.seed = as_u64(node, k);
    else throw ConfigError("unknown key '" + std::string(k) + "' in [data]");
  }
  return spec;
}

}  // namespace

SweepConfig parse_sweep_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }

  SweepConfig config;
  for (const auto& [key, node] : root) {
    const std::string_view k = key.str();
    if (k == "master_seed") {
      config.master_seed = as_u64(node, k);
    } else if (k == "epsilon") {
      config.epsilon = as_double(node, k);
    } else if (k == "target_dims") {
      const auto* arr = node.as_array();
      if (arr == nullptr) throw ConfigError("'target_dims' must be an array of integers");
      for (const auto& v : *arr) config.target_dims.push_back(as_u64(v, "target_dims"));
    } else if (k == "methods") {
      const auto* arr = node.as_array();
      if (arr == nullptr) throw ConfigError("'methods' must be an array of strings");
      config.methods.clear();
      for (const auto& v : *arr) {
        try {
          config.methods.push_back(parse_projection_method(as_string(v, "methods")));
        } catch (const InputError& e) {
          throw ConfigError(e.what());
        }
      }
    } else if (k != "data" && k != "train") {
      throw ConfigError("unknown top-level key '" + std::string(k) + "'");
    }
  }

  const toml::table empty;
  const toml::table* data = root["data"].as_table();
  if (data == nullptr) data = &empty;
  const std::string source =
      data->contains("source") ? as_string(*data->get("source"), "source") : "synthetic";
  if (source == "synthetic") {
    config.data.kind = DataSource::Kind::kSynthetic;
    config.data.synthetic = parse_synthetic(*data, config.master_seed);
  } else if (source == "files") {
    config.data.kind = DataSource::Kind::kFiles;
    for (const auto& [key, node] : *data) {
      const std::string_view k = key.str();
      if (k == "source") continue;
      if (k == "train") config.data.train_path = base_dir / as_string(node, k);
      else if (k == "test") config.data.test_path = base_dir / as_string(node, k);
      else throw ConfigError("unknown key '" + std::string(k) + "' in [data] for files source");
    }
    if (config.data.train_path.empty() || config.data.test_path.empty()) {
      throw ConfigError("files source needs both 'train' and 'test' paths");
    }
  } else {
    throw ConfigError("unknown data source '" + source + "' (synthetic, files)");
  }

  TrainConfig defaults = TrainConfig::bert_adamw();
  defaults.shuffle_seed = config.master_seed;
  const toml::table* train = root["train"].as_table();
  if (train == nullptr) train = &empty;
  // Method and baseline sections each override the shared [train] values.
  const TrainConfig shared = apply_train_table(*train, defaults);
  config.baseline_train = shared;
  for (const auto& [key, node] : *train) {
    if (!node.is_table()) continue;
    const std::string name(key.str());
    const toml::table& sub = *node.as_table();
    if (name == "baseline") {
      config.baseline_train = apply_train_table(sub, shared);
      continue;
    }
    ProjectionMethod method;
    try {
      method = parse_projection_method(name);
    } catch (const InputError&) {
      throw ConfigError("unknown train section [train." + name + "]");
    }
    config.method_train[method] = apply_train_table(sub, shared);
    if (const auto* steps = sub.get("max_map_steps")) {
      if (method != ProjectionMethod::kLearned) {
        throw ConfigError("max_map_steps only applies to [train.Learned]");
      }
      config.learned_map_steps = as_u64(*steps, "max_map_steps");
    }
  }
  try {
    config.baseline_train.validate();
    for (const auto& [method, cfg] : config.method_train) cfg.validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string("[train] ") + e.what());
  }
  return config;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sweep_config(ss.str(), path.parent_path());
}

void override_master_seed(SweepConfig& config, std::uint64_t seed) {
  const std::uint64_t old = config.master_seed;
  config.master_seed = seed;
  if (config.data.synthetic.seed == old) config.data.synthetic.seed = seed;
  if (config.baseline_train.shuffle_seed == old) config.baseline_train.shuffle_seed = seed;
  for (auto& [method, cfg] : config.method_train) {
    if (cfg.shuffle_seed == old) cfg.shuffle_seed = seed;
  }
}

}  // namespace subspace
