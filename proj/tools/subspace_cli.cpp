// subspace: build, compare and export low-dimensional projections of frozen
// embeddings.
//
// Every subcommand exits 0 on success. On failure it prints exactly one line
// to stderr:
//   error kind=<kind> message="<text>"
// and exits 1 (2 for command-line usage errors).

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "subspace/config.hpp"
#include "subspace/emb_io.hpp"
#include "subspace/error.hpp"
#include "subspace/experiment.hpp"
#include "subspace/projection.hpp"
#include "subspace/report.hpp"
#include "subspace/synth.hpp"

namespace fs = std::filesystem;
using namespace subspace;

namespace {

std::string quoted(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + '"';
}

void write_output(const std::optional<fs::path>& out, const std::string& text) {
  if (out) {
    write_text_file(*out, text);
  } else {
    std::cout << text;
  }
}

SweepConfig load_config(const std::optional<fs::path>& path, std::optional<std::uint64_t> seed) {
  SweepConfig config = path ? load_sweep_config(*path) : parse_sweep_config("");
  if (seed) override_master_seed(config, *seed);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-projection solution subspaces for frozen embeddings"};
  app.require_subcommand(1);

  std::optional<fs::path> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out_path;
  std::string format = "markdown";

  auto add_common = [&](CLI::App* cmd, bool with_format) {
    cmd->add_option("--config", config_path, "TOML experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Master seed (default 42)");
    cmd->add_option("--out", out_path, "Output path (stdout if omitted)");
    if (with_format) {
      cmd->add_option("--format", format, "Report format")
          ->check(CLI::IsMember({"csv", "markdown", "jsonl"}));
    }
  };

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a collapse dataset and save it as EMB1");
  add_common(synth, false);
  CollapseSpec synth_spec;
  bool synth_spec_from_flags = false;
  synth->add_option("--classes", synth_spec.num_classes, "Number of classes")
      ->each([&](const std::string&) { synth_spec_from_flags = true; });
  synth->add_option("--dim", synth_spec.ambient_dim, "Ambient dimension")
      ->each([&](const std::string&) { synth_spec_from_flags = true; });
  synth->add_option("--per-class", synth_spec.samples_per_class, "Samples per class")
      ->each([&](const std::string&) { synth_spec_from_flags = true; });
  synth->add_option("--sigma", synth_spec.within_class_sigma, "Within-class noise scale")
      ->each([&](const std::string&) { synth_spec_from_flags = true; });
  synth->add_option("--radius", synth_spec.mean_radius, "Norm of every class mean")
      ->each([&](const std::string&) { synth_spec_from_flags = true; });

  // sweep / ablate
  auto* sweep = app.add_subcommand("sweep", "Baseline probe plus one probe per (method, k)");
  add_common(sweep, true);
  auto* ablate = app.add_subcommand("ablate", "JL vs PCA vs Learned at every k");
  add_common(ablate, true);

  // distill-demo
  auto* distill = app.add_subcommand("distill-demo", "Train a student on projected teacher targets");
  add_common(distill, false);
  std::string distill_format = "markdown";
  distill->add_option("--format", distill_format, "Output format")
      ->check(CLI::IsMember({"markdown", "jsonl"}));
  std::size_t distill_k = 32;
  distill->add_option("--k", distill_k, "Target dimension");

  // check-jl
  auto* check = app.add_subcommand("check-jl", "Pairwise distortion of a JL map");
  add_common(check, false);
  std::optional<fs::path> check_input;
  std::size_t check_dim = 768;
  std::size_t check_points = 100;
  std::optional<std::size_t> check_k;
  double check_eps = 0.5;
  check->add_option("--input", check_input, "EMB1/CSV file whose rows are the points")
      ->check(CLI::ExistingFile);
  check->add_option("--dim", check_dim, "Dimension of generated Gaussian points");
  check->add_option("--points", check_points, "Number of generated points");
  check->add_option("--k", check_k, "Target dimension (default: ceil(8 ln N / eps^2))");
  check->add_option("--epsilon", check_eps, "Distortion tolerance");

  // export-coords
  auto* coords = app.add_subcommand("export-coords", "Write projected coordinates as CSV");
  add_common(coords, false);
  fs::path coords_input;
  std::optional<fs::path> coords_fit;
  std::string coords_method = "JL";
  std::size_t coords_k = 2;
  coords->add_option("--input", coords_input, "EMB1/CSV file to project")
      ->required()
      ->check(CLI::ExistingFile);
  coords->add_option("--fit", coords_fit, "Fit PCA on this file instead of --input")
      ->check(CLI::ExistingFile);
  coords->add_option("--method", coords_method, "JL or PCA")
      ->check(CLI::IsMember({"JL", "PCA", "jl", "pca"}));
  coords->add_option("--k", coords_k, "Target dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error kind=usage message=" << quoted(e.what()) << '\n';
    return 2;
  }

  try {
    if (synth->parsed()) {
      if (!out_path) throw InputError("synth needs --out <prefix>");
      CollapseSpec spec = synth_spec;
      if (config_path && !synth_spec_from_flags) spec = load_config(config_path, seed).data.synthetic;
      if (seed) spec.seed = *seed;
      const CollapseData data = generate_collapse_dataset(spec);
      const fs::path train_path = out_path->string() + ".train.emb1";
      const fs::path test_path = out_path->string() + ".test.emb1";
      save_embeddings(data.train, train_path);
      save_embeddings(data.test, test_path);
      std::cout << train_path.string() << '\n' << test_path.string() << '\n';
    } else if (sweep->parsed() || ablate->parsed()) {
      const SweepConfig config = load_config(config_path, seed);
      const ExperimentReport report = sweep->parsed() ? run_sweep(config) : run_ablation(config);
      write_output(out_path, render_report(report, parse_report_format(format)));
    } else if (distill->parsed()) {
      DistillDemoConfig config;
      if (seed) {
        config.seed = *seed;
        config.inputs.seed = *seed;
        config.student_train.shuffle_seed = *seed;
        config.probe_train.shuffle_seed = *seed;
      }
      config.target_dim = distill_k;
      const DistillDemoResult result = run_distill_demo(config);
      write_output(out_path, distill_format == "jsonl" ? render_distill_json(result)
                                                       : render_distill_markdown(result));
    } else if (check->parsed()) {
      const std::uint64_t s = seed.value_or(42);
      Matrix points = [&] {
        if (check_input) return load_dataset(*check_input).features();
        SeededRng rng(mix64(s));
        return gaussian_matrix(rng, check_points, check_dim);
      }();
      const std::size_t k = check_k.value_or(
          std::min(points.cols(), jl_target_dimension(points.rows(), check_eps)));
      const ProjectionMatrix p = sample_jl(s, points.cols(), k);
      const DistortionReport r = check_distortion(p, points, check_eps);
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "{\"n\":%zu,\"d\":%zu,\"k\":%zu,\"epsilon\":%g,\"num_pairs\":%zu,"
                    "\"max_expansion\":%.6f,\"max_contraction\":%.6f,"
                    "\"fraction_within_eps\":%.6f}\n",
                    points.rows(), points.cols(), k, r.epsilon, r.num_pairs, r.max_expansion,
                    r.max_contraction, r.fraction_within_eps);
      write_output(out_path, buf);
    } else if (coords->parsed()) {
      const LabeledDataset data = load_dataset(coords_input);
      const ProjectionMethod method = parse_projection_method(coords_method);
      FittedProjection fitted = [&]() -> FittedProjection {
        if (method == ProjectionMethod::kJL) {
          return {sample_jl(seed.value_or(42), data.dim(), coords_k), std::nullopt};
        }
        const Matrix fit_rows = coords_fit ? load_dataset(*coords_fit).features() : data.features();
        PcaFit fit = fit_pca(fit_rows, coords_k);
        return {std::move(fit.projection), std::move(fit.mean)};
      }();
      write_output(out_path, render_coords(data, fitted));
    }
  } catch (const Error& e) {
    std::cerr << "error kind=" << to_string(e.kind()) << " message=" << quoted(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error kind=internal message=" << quoted(e.what()) << '\n';
    return 1;
  }
  return 0;
}
