#include "subspace/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "subspace/error.hpp"

namespace subspace {

namespace {

int method_rank(std::string_view method) {
  if (method == "JL") return 0;
  if (method == "PCA") return 1;
  if (method == "Learned") return 2;
  return 3;
}

std::string printf_string(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string_view kind_name(ReportKind kind) {
  return kind == ReportKind::kSweep ? "sweep" : "ablation";
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  if (name == "jsonl" || name == "json-lines") return ReportFormat::kJsonLines;
  throw InputError("unknown report format '" + std::string(name) + "'");
}

void add_row(ExperimentReport& report, std::string method, std::size_t k, double accuracy,
             double mean_loss) {
  ReportRow row;
  row.method = std::move(method);
  row.k = k;
  row.accuracy = accuracy;
  row.mean_loss = mean_loss;
  row.delta = accuracy - report.baseline_accuracy;
  row.valid = mean_loss <= report.baseline_loss + report.epsilon;
  report.rows.push_back(std::move(row));
}

void sort_rows(ExperimentReport& report) {
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ReportRow& a, const ReportRow& b) {
                     if (a.k != b.k) return a.k > b.k;
                     return method_rank(a.method) < method_rank(b.method);
                   });
}

std::string format_ratio(std::size_t d, std::size_t k) {
  if (k == 0) throw InputError("ratio needs k > 0");
  if (d % k == 0) return std::to_string(d / k);
  std::string s = printf_string("%.2f", static_cast<double>(d) / static_cast<double>(k));
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

std::string format_percent(double fraction) { return printf_string("%.2f%%", fraction * 100.0); }

std::string format_delta(double fraction) {
  double pct = std::round(fraction * 10000.0) / 100.0;
  if (pct == 0.0) pct = 0.0;  // folds -0.0
  return printf_string(pct >= 0.0 ? "+%.2f%%" : "%.2f%%", pct);
}

std::string render_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "method,k,ratio,accuracy_pct,delta_pct,mean_loss,valid\n";
  out << "Baseline," << report.ambient_dim << ",1x,"
      << printf_string("%.2f", report.baseline_accuracy * 100.0) << ",,"
      << printf_string("%.6f", report.baseline_loss) << ",\n";
  for (const auto& row : report.rows) {
    std::string delta = format_delta(row.delta);
    delta.pop_back();  // drop '%'
    out << row.method << ',' << row.k << ',' << format_ratio(report.ambient_dim, row.k) << "x,"
        << printf_string("%.2f", row.accuracy * 100.0) << ',' << delta << ','
        << printf_string("%.6f", row.mean_loss) << ',' << (row.valid ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string render_markdown(const ExperimentReport& report) {
  std::ostringstream out;
  auto ratio = [&](std::size_t k) {
    return "$" + format_ratio(report.ambient_dim, k) + "\\times$";
  };
  if (report.kind == ReportKind::kSweep) {
    out << "| Method | Dim ($k$) | Ratio | Acc. | $\\Delta$ Base |\n";
    out << "|---|---:|---:|---:|---:|\n";
    out << "| **Baseline** | **" << report.ambient_dim << "** | **" << ratio(report.ambient_dim)
        << "** | **" << format_percent(report.baseline_accuracy) << "** | **--** |\n";
    for (const auto& row : report.rows) {
      out << "| " << row.method << " Projection | " << row.k << " | " << ratio(row.k) << " | "
          << format_percent(row.accuracy) << " | " << format_delta(row.delta) << " |\n";
    }
    return out.str();
  }

  // Ablation: one line per k, one column per method.
  std::vector<std::string> methods;
  for (const auto& row : report.rows) {
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end()) {
      methods.push_back(row.method);
    }
  }
  std::sort(methods.begin(), methods.end(), [](const std::string& a, const std::string& b) {
    return method_rank(a) < method_rank(b);
  });
  out << "Baseline (" << report.ambient_dim << "): " << format_percent(report.baseline_accuracy)
      << "\n\n";
  out << "| Dim ($k$) |";
  for (const auto& m : methods) out << ' ' << m << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < methods.size(); ++i) out << "---:|";
  out << '\n';
  std::vector<std::size_t> ks;
  for (const auto& row : report.rows) {
    if (ks.empty() || ks.back() != row.k) ks.push_back(row.k);
  }
  for (std::size_t k : ks) {
    out << "| " << k << " (" << ratio(k) << ") |";
    for (const auto& m : methods) {
      const auto it = std::find_if(report.rows.begin(), report.rows.end(),
                                   [&](const ReportRow& r) { return r.k == k && r.method == m; });
      out << ' ' << (it == report.rows.end() ? std::string("--") : format_percent(it->accuracy))
          << " |";
    }
    out << '\n';
  }
  return out.str();
}

std::string render_jsonl(const ExperimentReport& report) {
  std::string out;
  nlohmann::ordered_json header = {{"type", "report"},
                                   {"kind", kind_name(report.kind)},
                                   {"ambient_dim", report.ambient_dim},
                                   {"baseline_accuracy", report.baseline_accuracy},
                                   {"baseline_loss", report.baseline_loss},
                                   {"epsilon", report.epsilon}};
  out += header.dump() + '\n';
  for (const auto& row : report.rows) {
    nlohmann::ordered_json line = {{"type", "row"},
                                   {"method", row.method},
                                   {"k", row.k},
                                   {"ratio", format_ratio(report.ambient_dim, row.k)},
                                   {"accuracy", row.accuracy},
                                   {"mean_loss", row.mean_loss},
                                   {"delta", row.delta},
                                   {"valid", row.valid}};
    out += line.dump() + '\n';
  }
  return out;
}

std::string render_report(const ExperimentReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv: return render_csv(report);
    case ReportFormat::kMarkdown: return render_markdown(report);
    case ReportFormat::kJsonLines: return render_jsonl(report);
  }
  throw InputError("unknown report format");
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  write_text_file(path, render_report(report, format));
}

ExperimentReport parse_report_jsonl(std::string_view text) {
  ExperimentReport report;
  bool have_header = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "report") {
        const auto kind = j.at("kind").get<std::string>();
        if (kind != "sweep" && kind != "ablation") {
          throw FormatError("unknown report kind '" + kind + "'", line_no);
        }
        report.kind = kind == "sweep" ? ReportKind::kSweep : ReportKind::kAblation;
        report.ambient_dim = j.at("ambient_dim").get<std::size_t>();
        report.baseline_accuracy = j.at("baseline_accuracy").get<double>();
        report.baseline_loss = j.at("baseline_loss").get<double>();
        report.epsilon = j.at("epsilon").get<double>();
        have_header = true;
      } else if (type == "row") {
        if (!have_header) throw FormatError("row before report header", line_no);
        ReportRow row;
        row.method = j.at("method").get<std::string>();
        row.k = j.at("k").get<std::size_t>();
        row.accuracy = j.at("accuracy").get<double>();
        row.mean_loss = j.at("mean_loss").get<double>();
        row.delta = j.at("delta").get<double>();
        row.valid = j.at("valid").get<bool>();
        report.rows.push_back(std::move(row));
      } else {
        throw FormatError("unknown line type '" + type + "'", line_no);
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("invalid report line: ") + e.what(), line_no);
    }
  }
  if (!have_header) throw FormatError("report has no header line", line_no);
  return report;
}

ExperimentReport load_report_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_report_jsonl(ss.str());
}

}  // namespace subspace
