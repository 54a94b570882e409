#include "subspace/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "subspace/distill.hpp"
#include "subspace/emb_io.hpp"
#include "subspace/error.hpp"
#include "subspace/probe.hpp"
#include "subspace/rng.hpp"
#include "subspace/synth.hpp"

namespace subspace {

SplitData load_sweep_data(const SweepConfig& config) {
  if (config.data.kind == DataSource::Kind::kSynthetic) {
    CollapseData data = generate_collapse_dataset(config.data.synthetic);
    return {std::move(data.train), std::move(data.test)};
  }
  LabeledDataset train = load_dataset(config.data.train_path, Split::kTrain);
  LabeledDataset test = load_dataset(config.data.test_path, Split::kTest);
  if (train.dim() != test.dim() || train.num_classes() != test.num_classes()) {
    throw InputError("train and test files disagree on dimension or class count");
  }
  return {std::move(train), std::move(test)};
}

Matrix FittedProjection::apply(const Matrix& x) const {
  return project(projection, center ? subtract_row(x, *center) : x);
}

namespace {

struct RowResult {
  FittedProjection fitted;
  EvalResult eval;
};

RowResult run_row(const SweepConfig& config, const SplitData& data, ProjectionMethod method,
                  std::size_t k) {
  const std::uint64_t seed = jl_seed_for(config.master_seed, k);
  const TrainConfig& train_config = config.train_for(method);
  switch (method) {
    case ProjectionMethod::kJL: {
      FittedProjection fitted{sample_jl(seed, data.train.dim(), k), std::nullopt};
      const LinearClassifier clf =
          train_probe(data.train.with_features(fitted.apply(data.train.features())), train_config);
      EvalResult eval = evaluate(clf, data.test.with_features(fitted.apply(data.test.features())));
      return {std::move(fitted), std::move(eval)};
    }
    case ProjectionMethod::kPCA: {
      PcaFit fit = fit_pca(data.train.features(), k);
      FittedProjection fitted{std::move(fit.projection), std::move(fit.mean)};
      const LinearClassifier clf =
          train_probe(data.train.with_features(fitted.apply(data.train.features())), train_config);
      EvalResult eval = evaluate(clf, data.test.with_features(fitted.apply(data.test.features())));
      return {std::move(fitted), std::move(eval)};
    }
    case ProjectionMethod::kLearned: {
      const ProjectionMatrix init = sample_jl(seed, data.train.dim(), k);
      LearnedProjectionOptions options;
      options.max_map_steps = config.learned_map_steps;
      LearnedProjection learned =
          train_learned_projection(data.train, init, train_config, options);
      FittedProjection fitted{std::move(learned.projection), std::nullopt};
      EvalResult eval = evaluate(learned.classifier,
                                 data.test.with_features(fitted.apply(data.test.features())));
      return {std::move(fitted), std::move(eval)};
    }
  }
  throw InputError("unknown projection method");
}

ExperimentReport run_rows(const SweepConfig& config, const SplitData& data, ReportKind kind,
                          SweepArtifacts* artifacts) {
  config.validate(data.train.dim());
  if (data.test.dim() != data.train.dim()) {
    throw ShapeError("train and test splits have different dimensions");
  }

  ExperimentReport report;
  report.kind = kind;
  report.ambient_dim = data.train.dim();
  report.epsilon = config.epsilon;
  const LinearClassifier baseline = train_probe(data.train, config.baseline_train);
  const EvalResult base_eval = evaluate(baseline, data.test);
  report.baseline_accuracy = base_eval.accuracy;
  report.baseline_loss = base_eval.mean_loss;

  std::vector<std::size_t> dims = config.target_dims;
  std::sort(dims.begin(), dims.end(), std::greater<>());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  std::vector<ProjectionMethod> methods = config.methods;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  for (std::size_t k : dims) {
    for (ProjectionMethod method : methods) {
      RowResult row = [&] {
        try {
          return run_row(config, data, method, k);
        } catch (const Error& e) {
          throw Error(e.kind(), std::string(to_string(method)) + " k=" + std::to_string(k) +
                                    ": " + e.what());
        }
      }();
      add_row(report, std::string(to_string(method)), k, row.eval.accuracy, row.eval.mean_loss);
      if (artifacts != nullptr) artifacts->projections.push_back(std::move(row.fitted));
    }
  }
  return report;
}

}  // namespace

ExperimentReport run_sweep(const SweepConfig& config, const SplitData& data,
                           SweepArtifacts* artifacts) {
  return run_rows(config, data, ReportKind::kSweep, artifacts);
}

ExperimentReport run_sweep(const SweepConfig& config) {
  return run_sweep(config, load_sweep_data(config));
}

ExperimentReport run_ablation(const SweepConfig& config, const SplitData& data,
                              SweepArtifacts* artifacts) {
  for (ProjectionMethod m :
       {ProjectionMethod::kJL, ProjectionMethod::kPCA, ProjectionMethod::kLearned}) {
    if (std::find(config.methods.begin(), config.methods.end(), m) == config.methods.end()) {
      throw ConfigError("ablation needs methods JL, PCA and Learned; missing " +
                        std::string(to_string(m)));
    }
  }
  return run_rows(config, data, ReportKind::kAblation, artifacts);
}

ExperimentReport run_ablation(const SweepConfig& config) {
  return run_ablation(config, load_sweep_data(config));
}

std::string render_coords(const LabeledDataset& data, const FittedProjection& projection) {
  const Matrix coords = projection.apply(data.features());
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < coords.rows(); ++i) {
    for (double v : coords.row(i)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out.append(buf, res.ptr);
      out += ',';
    }
    out += std::to_string(data.labels()[i]);
    out += '\n';
  }
  return out;
}

void export_coords(const LabeledDataset& data, const FittedProjection& projection,
                   const std::filesystem::path& path) {
  write_text_file(path, render_coords(data, projection));
}

Matrix random_teacher_features(const Matrix& inputs, std::size_t teacher_dim, std::uint64_t seed) {
  SeededRng rng(seed);
  Matrix weights = gaussian_matrix(rng, teacher_dim, inputs.cols());
  const double scale = 1.0 / std::sqrt(static_cast<double>(inputs.cols()));
  Matrix out = matmul_transposed(inputs, weights);
  for (double& v : out.mutable_data()) v = std::tanh(scale * v);
  return out;
}

DistillDemoResult run_distill_demo(const DistillDemoConfig& config) {
  const CollapseData raw = generate_collapse_dataset(config.inputs);
  const std::uint64_t teacher_seed = mix64(config.seed ^ 0x7eac4e5ULL);
  const Matrix teacher_train =
      random_teacher_features(raw.train.features(), config.teacher_dim, teacher_seed);
  const Matrix teacher_test =
      random_teacher_features(raw.test.features(), config.teacher_dim, teacher_seed);
  const ProjectionMatrix p =
      sample_jl(jl_seed_for(config.seed, config.target_dim), config.teacher_dim, config.target_dim);

  DistillDemoResult result;
  result.teacher_dim = config.teacher_dim;
  result.target_dim = config.target_dim;

  const LabeledDataset proj_train = raw.train.with_features(project(p, teacher_train));
  const LabeledDataset proj_test = raw.test.with_features(project(p, teacher_test));
  result.projected_teacher_accuracy =
      evaluate(train_probe(proj_train, config.probe_train), proj_test).accuracy;

  const StudentNet student = train_student(raw.train.features(), teacher_train, p,
                                           config.student_train, config.hidden,
                                           mix64(config.seed ^ 0x5eedULL));
  result.student_train_loss = mean_subspace_loss(student, raw.train.features(), teacher_train, p);
  result.student_test_loss = mean_subspace_loss(student, raw.test.features(), teacher_test, p);

  const LabeledDataset student_train = raw.train.with_features(student.forward(raw.train.features()));
  const LabeledDataset student_test = raw.test.with_features(student.forward(raw.test.features()));
  result.student_accuracy =
      evaluate(train_probe(student_train, config.probe_train), student_test).accuracy;
  return result;
}

std::string render_distill_json(const DistillDemoResult& r) {
  nlohmann::ordered_json j = {{"teacher_dim", r.teacher_dim},
                              {"target_dim", r.target_dim},
                              {"projected_teacher_accuracy", r.projected_teacher_accuracy},
                              {"student_accuracy", r.student_accuracy},
                              {"student_train_loss", r.student_train_loss},
                              {"student_test_loss", r.student_test_loss}};
  return j.dump() + '\n';
}

std::string render_distill_markdown(const DistillDemoResult& r) {
  std::ostringstream out;
  out << "| Features | Dim ($k$) | Acc. | $\\Delta$ |\n|---|---:|---:|---:|\n";
  out << "| Projected teacher | " << r.target_dim << " | "
      << format_percent(r.projected_teacher_accuracy) << " | -- |\n";
  out << "| Student | " << r.target_dim << " | " << format_percent(r.student_accuracy) << " | "
      << format_delta(r.student_accuracy - r.projected_teacher_accuracy) << " |\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "\nStudent subspace loss: train %.6f, test %.6f\n",
                r.student_train_loss, r.student_test_loss);
  out << buf;
  return out.str();
}

}  // namespace subspace
