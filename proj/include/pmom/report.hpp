#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pmom/predictions.hpp"
#include "pmom/rational.hpp"
#include "pmom/sweep.hpp"

namespace pmom {

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(std::string_view text);

struct RunConfig {
  Rational X{2};
  bool scaled = true;
  Rational width{1, 10000};  // h or delta
  std::vector<double> orders{1.0};
  std::vector<MomentKind> kinds{MomentKind::Absolute};
  std::vector<Formula> formulas;
  std::optional<std::filesystem::path> output;
  OutputFormat format = OutputFormat::Csv;
  int threads = 0;
  std::optional<std::filesystem::path> cache_path;

  WindowSpec window() const {
    return scaled ? WindowSpec::scaled(X, width) : WindowSpec::fixed(X, width);
  }
};

// Keys: X, h | delta (strings "p/q" or decimal literals, or numbers), orders,
// kinds, formulas, output, format, threads, cache_path.
RunConfig parse_run_config(const std::string& json_text);
void validate(const RunConfig& config);

struct ReportRow {
  double lambda = 0.0;
  MomentKind kind = MomentKind::Absolute;
  double actual = 0.0;
  std::string formula;  // empty when no prediction was requested
  std::optional<double> predicted;
  std::optional<double> ratio;
  std::optional<double> rel_err;
  std::uint64_t piece_count = 0;
  double wall_seconds = 0.0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

inline constexpr const char* kCsvHeader =
    "lambda,kind,actual,formula,predicted,ratio,rel_err,piece_count,wall_seconds";

// One row per (order, kind, formula); one row per (order, kind) when no
// formulas are requested. Honors PRIME_MOMENT_CACHE over config.cache_path.
std::vector<ReportRow> run(const RunConfig& config);

void emit(const std::vector<ReportRow>& rows, OutputFormat format, std::ostream& out);
void emit(const std::vector<ReportRow>& rows, OutputFormat format, const std::filesystem::path& path);
std::vector<ReportRow> parse_rows(const std::string& text, OutputFormat format);

// Numbers are written with 17 significant digits so they read back bit-exact.
std::string format_number(double v);

enum class TableScale { Desk, Full };
TableScale parse_scale(std::string_view text);

struct TableRow {
  double order = 0.0;
  std::optional<double> computed_actual;
  double published_actual = 0.0;
  double predicted = 0.0;
  double published_predicted = 0.0;
  std::optional<double> actual_rel_dev;  // computed vs published actual
  double predicted_rel_dev = 0.0;        // predicted vs published predicted
};

struct Table {
  int id = 1;  // 1, 2: absolute moments vs conj2; 3, 4: signed odd moments vs odd normalizer
  std::string title;
  double X = 0.0;
  Rational delta;
  MomentKind kind = MomentKind::Absolute;
  std::vector<TableRow> rows;
  double wall_seconds = 0.0;
};

struct TableOptions {
  bool formulas_only = false;
  int threads = 0;
};

// Desk: the X = 1e8, delta = 1e-4 pair (tables 1 and 3). Full adds
// X = 1e10, delta = 1e-5 (tables 2 and 4).
std::vector<Table> reproduce_tables(TableScale scale, const TableOptions& options = {});

void emit_tables(const std::vector<Table>& tables, OutputFormat format, std::ostream& out);
void print_tables(const std::vector<Table>& tables, std::ostream& out);

}  // namespace pmom
