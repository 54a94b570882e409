// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "subspace/config.hpp"
#include "subspace/distill.hpp"
#include "subspace/experiment.hpp"
#include "subspace/probe.hpp"
#include "subspace/projection.hpp"
#include "subspace/report.hpp"
#include "subspace/rng.hpp"
#include "subspace/synth.hpp"

using namespace subspace;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out{false, ""};
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("threw: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = time_limit_s <= 0.0 || secs < time_limit_s;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %s: %s; %.2fs", pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), secs);
  if (time_limit_s > 0.0) std::printf(" (limit %.0fs)", time_limit_s);
  std::printf("\n");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SweepConfig headline_config() {
  return load_sweep_config(std::filesystem::path(SUBSPACE_CONFIG_DIR) / "synthetic_headline.toml");
}

// ||a - n|| / ||n|| over one parameter block.
double block_relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric) {
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
    ref += numeric[i] * numeric[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(ref), 1e-12);
}

// Central differences of f over every entry of `params` (restored afterwards).
std::vector<double> numeric_gradient(std::span<double> params, const std::function<double()>& f,
                                     double step = 1e-6) {
  std::vector<double> g(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double orig = params[i];
    params[i] = orig + step;
    const double up = f();
    params[i] = orig - step;
    const double down = f();
    params[i] = orig;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

double reconstruction_error(const Matrix& centered, const Matrix& basis) {
  const Matrix back = matmul(matmul_transposed(centered, basis), basis);
  double err = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) {
    const double d = back.data()[i] - centered.data()[i];
    err += d * d;
  }
  return err;
}

const ReportRow& find_row(const ExperimentReport& r, const std::string& method, std::size_t k) {
  for (const auto& row : r.rows)
    if (row.method == method && row.k == k) return row;
  throw std::runtime_error("missing row " + method + " k=" + std::to_string(k));
}

}  // namespace

int main() {
  criterion("JL norm preservation (1000 maps, d=768, k=64, mean ||Ph||^2 in [0.98, 1.02])", 5.0,
            [] {
              SeededRng rng(2024);
              Matrix h = gaussian_matrix(rng, 1, 768);
              const double n = std::sqrt(squared_norm(h.row(0)));
              for (double& v : h.mutable_data()) v /= n;
              double sum = 0.0;
              for (std::uint64_t s = 0; s < 1000; ++s) {
                sum += squared_norm(project(sample_jl(1000 + s, 768, 64), h).row(0));
              }
              const double mean = sum / 1000.0;
              return Outcome{mean >= 0.98 && mean <= 1.02, fmt("mean %.4f", mean)};
            });

  criterion("JLL distortion (N=100, d=768, k=147, eps=0.5, >= 95% of pairs)", 5.0, [] {
    SeededRng rng(77);
    const Matrix x = gaussian_matrix(rng, 100, 768);
    const DistortionReport r = check_distortion(sample_jl(78, 768, 147), x, 0.5);
    return Outcome{r.fraction_within_eps >= 0.95 && r.num_pairs == 4950,
                   fmt("%.4f of 4950 pairs within", r.fraction_within_eps)};
  });

  criterion("Gradient oracles (softmax-CE, learned map, distillation; rel. err <= 1e-4)", 10.0, [] {
    double worst = 0.0;
    // Softmax cross-entropy w.r.t. logits.
    {
      std::vector<double> logits = {0.3, -1.2, 2.0, 0.7, -0.4};
      const SoftmaxCe ce = softmax_ce(logits, 3);
      const auto num = numeric_gradient(logits, [&] { return softmax_ce(logits, 3).loss; });
      worst = std::max(worst, block_relative_error(to_vec(ce.grad), num));
    }
    // Learned projection: map, W and b.
    {
      SeededRng rng(5);
      const Matrix inputs = gaussian_matrix(rng, 7, 5);
      const std::vector<std::uint32_t> labels = {0, 1, 2, 3, 1, 0, 2};
      Matrix map = gaussian_matrix(rng, 3, 5);
      LinearClassifier clf{gaussian_matrix(rng, 4, 3), Vector(4)};
      for (double& b : clf.bias) b = rng.normal();
      const LearnedGradients g = learned_loss_and_gradients(map, clf, inputs, labels);
      auto loss = [&] { return learned_loss_and_gradients(map, clf, inputs, labels).head.loss; };
      const auto gm = numeric_gradient(map.mutable_data(), loss);
      const auto gw = numeric_gradient(clf.weights.mutable_data(), loss);
      const auto gb = numeric_gradient(clf.bias, loss);
      worst = std::max({worst, block_relative_error(to_vec(g.map.data()), gm),
                        block_relative_error(to_vec(g.head.weights.data()), gw),
                        block_relative_error(g.head.bias, gb)});
    }
    // Distillation: student regressing projected teacher features.
    {
      SeededRng rng(6);
      const Matrix inputs = gaussian_matrix(rng, 6, 4);
      const Matrix teacher = gaussian_matrix(rng, 6, 10);
      const ProjectionMatrix p = sample_jl(7, 10, 3);
      const Matrix targets = project(p, teacher);
      StudentNet net = StudentNet::init(4, 5, 3, 8);
      const StudentGradients g = student_loss_and_gradients(net, inputs, targets);
      auto loss = [&] { return student_loss_and_gradients(net, inputs, targets).loss; };
      worst = std::max({worst,
                        block_relative_error(to_vec(g.layer1_weights.data()),
                                             numeric_gradient(net.layer1_weights.mutable_data(), loss)),
                        block_relative_error(g.layer1_bias, numeric_gradient(net.layer1_bias, loss)),
                        block_relative_error(to_vec(g.layer2_weights.data()),
                                             numeric_gradient(net.layer2_weights.mutable_data(), loss)),
                        block_relative_error(g.layer2_bias, numeric_gradient(net.layer2_bias, loss))});
      // Per-sample loss against the unprojected teacher goes through P.
      std::vector<double> hs = {0.1, -0.5, 0.9};
      const SubspaceLoss sl = subspace_loss(hs, teacher.row(0), p);
      const auto num = numeric_gradient(hs, [&] { return subspace_loss(hs, teacher.row(0), p).loss; });
      worst = std::max(worst, block_relative_error(to_vec(sl.grad_student), num));
    }
    return Outcome{worst <= 1e-4, fmt("worst block rel. err %.2e", worst)};
  });

  criterion("Headline (C=10, d=256: full >= 99%, JL k=32 within 2.0 pts, valid at eps=0.05)", 60.0,
            [] {
              SweepConfig c = headline_config();
              c.target_dims = {32};
              c.methods = {ProjectionMethod::kJL};
              c.epsilon = 0.05;
              const ExperimentReport r = run_sweep(c);
              const ReportRow& jl = find_row(r, "JL", 32);
              const bool ok = r.baseline_accuracy >= 0.99 && std::abs(jl.delta) <= 0.02 && jl.valid;
              std::ostringstream d;
              d << "full " << format_percent(r.baseline_accuracy) << ", JL " << format_percent(jl.accuracy)
                << " (" << format_delta(jl.delta) << "), loss " << fmt("%.4f", jl.mean_loss) << " vs "
                << fmt("%.4f", r.baseline_loss) << ", valid=" << (jl.valid ? "true" : "false");
              return Outcome{ok, d.str()};
            });

  criterion("Ablation parity (k=32: JL/PCA/Learned within 2.0 pts; Learned@0 steps == JL)", 180.0,
            [] {
              SweepConfig c = headline_config();
              c.target_dims = {32};
              const SplitData data = load_sweep_data(c);
              const ExperimentReport r = run_ablation(c, data);
              const double a[3] = {find_row(r, "JL", 32).accuracy, find_row(r, "PCA", 32).accuracy,
                                   find_row(r, "Learned", 32).accuracy};
              const double spread = *std::max_element(a, a + 3) - *std::min_element(a, a + 3);

              c.learned_map_steps = 0;
              SweepArtifacts art;
              const ExperimentReport frozen = run_ablation(c, data, &art);
              const ReportRow& jl = find_row(frozen, "JL", 32);
              const ReportRow& learned = find_row(frozen, "Learned", 32);
              // Artifacts follow row order: JL, PCA, Learned.
              const bool maps_equal = art.projections.size() == 3 &&
                           art.projections[0].projection.map() == art.projections[2].projection.map();
              const bool bitwise = maps_equal && jl.accuracy == learned.accuracy &&
                                   jl.mean_loss == learned.mean_loss;
              std::ostringstream d;
              d << "JL " << format_percent(a[0]) << ", PCA " << format_percent(a[1]) << ", Learned "
                << format_percent(a[2]) << ", spread " << fmt("%.2f", spread * 100) << " pts; 0-step "
                << (bitwise ? "identical" : "DIFFERENT");
              return Outcome{spread <= 0.02 && bitwise, d.str()};
            });

  criterion("PCA optimality (k=32 on collapse data and k=4 on anisotropic data, 20 bases each)", 0.0,
            [] {
              int wins = 0;
              SweepConfig c = headline_config();
              const Matrix collapse = load_sweep_data(c).train.features();
              SeededRng aniso_rng(91);
              Matrix aniso = gaussian_matrix(aniso_rng, 500, 24);
              for (std::size_t i = 0; i < aniso.rows(); ++i)
                for (std::size_t j = 0; j < aniso.cols(); ++j) aniso(i, j) *= 1.0 + 0.3 * j;
              SeededRng rng(92);
              for (auto [x, k] : {std::pair<const Matrix*, std::size_t>{&collapse, 32}, {&aniso, 4}}) {
                const PcaFit fit = fit_pca(*x, k);
                const Matrix centered = subtract_row(*x, fit.mean);
                const double pca_err = reconstruction_error(centered, fit.projection.map());
                for (int t = 0; t < 20; ++t) {
                  const Matrix basis = random_orthonormal_rows(rng, k, x->cols());
                  if (pca_err <= reconstruction_error(centered, basis)) ++wins;
                }
              }
              return Outcome{wins == 40, fmt("PCA no worse in %.0f/40 trials", wins)};
            });

  criterion("Distillation demo (student probe within 2.0 pts of projected-teacher probe)", 180.0, [] {
    const DistillDemoResult r = run_distill_demo(DistillDemoConfig{});
    const double gap = std::abs(r.student_accuracy - r.projected_teacher_accuracy);
    std::ostringstream d;
    d << "P(teacher) " << format_percent(r.projected_teacher_accuracy) << ", student "
      << format_percent(r.student_accuracy) << ", gap " << fmt("%.2f", gap * 100) << " pts";
    return Outcome{gap <= 0.02, d.str()};
  });

  criterion("Determinism (two sweeps with seed 42 give byte-identical reports)", 0.0, [] {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "subspace_acceptance";
    fs::create_directories(dir);
    std::vector<std::string> bytes;
    for (int run = 0; run < 2; ++run) {
      SweepConfig c = headline_config();
      override_master_seed(c, 42);
      const fs::path out = dir / ("sweep_" + std::to_string(run) + ".jsonl");
      emit_report(run_sweep(c), ReportFormat::kJsonLines, out);
      std::ifstream in(out, std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      bytes.push_back(s.str());
    }
    const bool same = !bytes[0].empty() && bytes[0] == bytes[1];
    return Outcome{same, same ? fmt("%.0f bytes identical", bytes[0].size()) : "reports differ"};
  });

  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
