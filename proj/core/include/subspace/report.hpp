#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace subspace {

enum class ReportKind { kSweep, kAblation };
enum class ReportFormat { kCsv, kMarkdown, kJsonLines };

ReportFormat parse_report_format(std::string_view name);

struct ReportRow {
  std::string method;  // "JL", "PCA" or "Learned"
  std::size_t k = 0;
  double accuracy = 0.0;   // fraction
  double mean_loss = 0.0;  // test cross-entropy
  double delta = 0.0;      // accuracy - baseline accuracy, as a fraction
  bool valid = false;      // loss within epsilon of the baseline loss

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// Baseline probe on the full dimension plus one row per (method, k), rows
/// ordered by k descending, then JL / PCA / Learned.
struct ExperimentReport {
  ReportKind kind = ReportKind::kSweep;
  std::size_t ambient_dim = 0;
  double baseline_accuracy = 0.0;
  double baseline_loss = 0.0;
  double epsilon = 0.0;
  std::vector<ReportRow> rows;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Appends a row with delta and validity derived from the baseline.
void add_row(ExperimentReport& report, std::string method, std::size_t k, double accuracy,
             double mean_loss);

/// Sorts rows by k descending, then by method order JL, PCA, Learned.
void sort_rows(ExperimentReport& report);

/// d/k as the tables print it: "12", "1.5", "2.67".
std::string format_ratio(std::size_t d, std::size_t k);
/// "83.74%"
std::string format_percent(double fraction);
/// "+0.19%" / "-1.20%"; values that round to zero print as "+0.00%".
std::string format_delta(double fraction);

std::string render_csv(const ExperimentReport& report);
std::string render_markdown(const ExperimentReport& report);
std::string render_jsonl(const ExperimentReport& report);
std::string render_report(const ExperimentReport& report, ReportFormat format);

/// Writes the rendered report. Throws IoError if the path is not writable.
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path);

/// Inverse of render_jsonl. Throws FormatError (offset = line number).
ExperimentReport parse_report_jsonl(std::string_view text);
ExperimentReport load_report_jsonl(const std::filesystem::path& path);

/// Writes text to a file or throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace subspace
