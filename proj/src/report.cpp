#include "pmom/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pmom/error.hpp"

namespace pmom {

using nlohmann::json;

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  fail(ErrorKind::InvalidArgument, "unknown output format '" + std::string(text) + "' (csv|json)");
}

TableScale parse_scale(std::string_view text) {
  if (text == "desk") return TableScale::Desk;
  if (text == "full") return TableScale::Full;
  fail(ErrorKind::InvalidArgument, "unknown scale '" + std::string(text) + "' (desk|full)");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Config

namespace {

Rational rational_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_number()) return Rational::parse(v.dump());
  fail(ErrorKind::InvalidArgument, std::string("field '") + key + "' must be a number or rational string");
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  RunConfig c;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    c.X = rational_field(j, "X");
    const bool has_h = j.contains("h");
    const bool has_delta = j.contains("delta");
    if (has_h == has_delta) fail(ErrorKind::InvalidArgument, "config needs exactly one of 'h' or 'delta'");
    c.scaled = has_delta;
    c.width = rational_field(j, has_delta ? "delta" : "h");
    if (j.contains("orders")) c.orders = j.at("orders").get<std::vector<double>>();
    if (j.contains("kinds")) {
      c.kinds.clear();
      for (const auto& k : j.at("kinds")) c.kinds.push_back(parse_kind(k.get<std::string>()));
    }
    if (j.contains("formulas")) {
      for (const auto& f : j.at("formulas")) c.formulas.push_back(parse_formula(f.get<std::string>()));
    }
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("format")) c.format = parse_format(j.at("format").get<std::string>());
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("cache_path")) c.cache_path = j.at("cache_path").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("bad config field: ") + e.what());
  }
  return c;
}

void validate(const RunConfig& c) {
  if (c.X < Rational(1)) fail(ErrorKind::InvalidWindow, "X must be at least 1");
  validate(c.window());
  if (c.orders.empty()) fail(ErrorKind::InvalidOrder, "no orders requested");
  if (c.kinds.empty()) fail(ErrorKind::InvalidArgument, "no kinds requested");
  for (const auto k : c.kinds)
    for (const double o : c.orders) validate_order(o, k);
  for (const auto f : c.formulas)
    if (is_scaled_family(f) != c.scaled)
      fail(ErrorKind::InvalidArgument, "formula " + to_string(f) + " does not match the window geometry");
  if (c.threads < 0) fail(ErrorKind::InvalidArgument, "threads must be non-negative");
}

// ---------------------------------------------------------------------------
// run

std::vector<ReportRow> run(const RunConfig& config) {
  validate(config);
  const WindowSpec window = config.window();

  std::optional<std::filesystem::path> cache = config.cache_path;
  if (const char* env = std::getenv("PRIME_MOMENT_CACHE"); env != nullptr && *env != '\0') cache = env;

  SweepOptions opts;
  opts.threads = config.threads;
  EventList events;
  const auto t0 = std::chrono::steady_clock::now();
  if (cache && !window.empty_range()) {
    events = enumerate_prime_powers(
        SieveConfig{.limit = required_sieve_limit(window), .cache_path = cache, .threads = config.threads});
    opts.events = &events;
  }
  const SweepTotals totals = sweep_moments(window, config.orders, opts);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const double X = config.X.to_double();
  const double w = config.width.to_double();
  std::vector<ReportRow> rows;
  for (const auto& o : totals.orders) {
    for (const auto kind : config.kinds) {
      ReportRow base;
      base.lambda = o.order;
      base.kind = kind;
      base.actual = o.get(kind);
      base.piece_count = totals.piece_count;
      base.wall_seconds = wall;
      if (config.formulas.empty()) {
        rows.push_back(base);
        continue;
      }
      for (const auto f : config.formulas) {
        ReportRow row = base;
        row.formula = to_string(f);
        if (!window.empty_range()) {
          row.predicted = evaluate(PredictionInput{X, w, o.order, f}).value;
          if (*row.predicted != 0.0) {
            row.ratio = row.actual / *row.predicted;
            row.rel_err = std::fabs(row.actual - *row.predicted) / std::fabs(*row.predicted);
          }
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// emit / parse

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::strtod(s.c_str(), nullptr);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void emit(const std::vector<ReportRow>& rows, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
      out << format_number(r.lambda) << ',' << to_string(r.kind) << ',' << format_number(r.actual) << ','
          << r.formula << ',' << opt_number(r.predicted) << ',' << opt_number(r.ratio) << ','
          << opt_number(r.rel_err) << ',' << r.piece_count << ',' << format_number(r.wall_seconds) << '\n';
    }
    return;
  }
  // Hand-written so every double carries exactly 17 significant digits.
  out << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    auto num = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("null"); };
    out << (i ? ",\n " : "\n ") << "{\"lambda\": " << format_number(r.lambda) << ", \"kind\": "
        << json(to_string(r.kind)).dump() << ", \"actual\": " << format_number(r.actual)
        << ", \"formula\": " << json(r.formula).dump() << ", \"predicted\": " << num(r.predicted)
        << ", \"ratio\": " << num(r.ratio) << ", \"rel_err\": " << num(r.rel_err)
        << ", \"piece_count\": " << r.piece_count << ", \"wall_seconds\": " << format_number(r.wall_seconds)
        << "}";
  }
  out << (rows.empty() ? "]\n" : "\n]\n");
}

void emit(const std::vector<ReportRow>& rows, OutputFormat format, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, path.string() + ": cannot open for writing");
  emit(rows, format, out);
  out.flush();
  if (!out) fail(ErrorKind::Io, path.string() + ": write failed");
}

std::vector<ReportRow> parse_rows(const std::string& text, OutputFormat format) {
  std::vector<ReportRow> rows;
  if (format == OutputFormat::Csv) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || split_csv(line) != split_csv(kCsvHeader))
      fail(ErrorKind::InvalidArgument, "CSV header mismatch");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      if (f.size() != 9) fail(ErrorKind::InvalidArgument, "CSV row needs 9 fields: " + line);
      ReportRow r;
      r.lambda = std::strtod(f[0].c_str(), nullptr);
      r.kind = parse_kind(f[1]);
      r.actual = std::strtod(f[2].c_str(), nullptr);
      r.formula = f[3];
      r.predicted = parse_opt(f[4]);
      r.ratio = parse_opt(f[5]);
      r.rel_err = parse_opt(f[6]);
      r.piece_count = std::strtoull(f[7].c_str(), nullptr, 10);
      r.wall_seconds = std::strtod(f[8].c_str(), nullptr);
      rows.push_back(r);
    }
    return rows;
  }
  try {
    const json j = json::parse(text);
    auto opt = [](const json& v) -> std::optional<double> {
      if (v.is_null()) return std::nullopt;
      return v.get<double>();
    };
    for (const auto& o : j) {
      ReportRow r;
      r.lambda = o.at("lambda").get<double>();
      r.kind = parse_kind(o.at("kind").get<std::string>());
      r.actual = o.at("actual").get<double>();
      r.formula = o.at("formula").get<std::string>();
      r.predicted = opt(o.at("predicted"));
      r.ratio = opt(o.at("ratio"));
      r.rel_err = opt(o.at("rel_err"));
      r.piece_count = o.at("piece_count").get<std::uint64_t>();
      r.wall_seconds = o.at("wall_seconds").get<double>();
      rows.push_back(r);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("bad report JSON: ") + e.what());
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Published tables

namespace {

struct PublishedTable {
  int id;
  double X;
  Rational delta;
  MomentKind kind;
  std::vector<double> orders;
  std::vector<double> actual;
  std::vector<double> predicted;
};

const std::vector<PublishedTable>& published() {
  static const std::vector<PublishedTable> tables = {
      {1, 1e8, Rational(1, 10000), MomentKind::Absolute,
       {1.0, 2.1, 3.2, 4.3, 5.4, 6.5},
       {1.5009e10, 7.1441e12, 4.8737e15, 4.1913e18, 4.2519e21, 4.8884e24},
       {1.4851e10, 6.9344e12, 4.6213e15, 3.8864e18, 3.8768e21, 4.4213e24}},
      {2, 1e10, Rational(1, 100000), MomentKind::Absolute,
       {1.0, 2.1, 3.2, 4.3, 5.4, 6.5},
       {5.3464e12, 1.0218e16, 2.7871e19, 9.5892e22, 3.9120e26, 1.8248e30},
       {5.3452e12, 1.0210e16, 2.7835e19, 9.5764e22, 3.9079e26, 1.8232e30}},
      {3, 1e8, Rational(1, 10000), MomentKind::Signed,
       {1, 3, 5},
       {-4.9574e7, -2.0632e13, -3.3174e18},
       {1.6143e10, 1.7842e15, 4.6952e20}},
      {4, 1e10, Rational(1, 100000), MomentKind::Signed,
       {1, 3, 5},
       {7.2371e8, -1.3468e16, -2.5587e23},
       {5.7074e12, 7.8851e18, 2.5937e25}},
  };
  return tables;
}

double rel_dev(double a, double b) { return (a - b) / std::fabs(b); }

}  // namespace

std::vector<Table> reproduce_tables(TableScale scale, const TableOptions& options) {
  std::vector<Table> out;
  // Both tables for one (X, delta) share a single sweep.
  for (const double X : {1e8, 1e10}) {
    if (X > 1e8 && scale == TableScale::Desk) continue;
    std::vector<const PublishedTable*> group;
    for (const auto& p : published())
      if (p.X == X) group.push_back(&p);

    std::optional<SweepTotals> totals;
    double wall = 0.0;
    if (!options.formulas_only) {
      std::vector<double> orders;
      for (const auto* p : group) orders.insert(orders.end(), p->orders.begin(), p->orders.end());
      const auto t0 = std::chrono::steady_clock::now();
      totals = sweep_moments(WindowSpec::scaled(Rational(static_cast<std::int64_t>(X)), group.front()->delta),
                             orders, SweepOptions{.threads = options.threads});
      wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    std::size_t offset = 0;
    for (const auto* p : group) {
      Table t;
      t.id = p->id;
      t.X = p->X;
      t.delta = p->delta;
      t.kind = p->kind;
      t.wall_seconds = wall;
      const double d = p->delta.to_double();
      t.title = p->kind == MomentKind::Absolute
                    ? "absolute moments vs conj2, X=" + format_number(X) + ", delta=" + p->delta.str()
                    : "signed odd moments vs odd normalizer, X=" + format_number(X) + ", delta=" + p->delta.str();
      for (std::size_t i = 0; i < p->orders.size(); ++i) {
        TableRow r;
        r.order = p->orders[i];
        r.published_actual = p->actual[i];
        r.published_predicted = p->predicted[i];
        r.predicted = p->kind == MomentKind::Absolute ? conjecture2(X, d, r.order)
                                                      : odd_normalizer(X, d, static_cast<int>(r.order));
        r.predicted_rel_dev = rel_dev(r.predicted, r.published_predicted);
        if (totals) {
          r.computed_actual = totals->orders[offset + i].get(p->kind);
          r.actual_rel_dev = rel_dev(*r.computed_actual, r.published_actual);
        }
        t.rows.push_back(r);
      }
      offset += p->orders.size();
      out.push_back(std::move(t));
    }
  }
  std::sort(out.begin(), out.end(), [](const Table& a, const Table& b) { return a.id < b.id; });
  return out;
}

void emit_tables(const std::vector<Table>& tables, OutputFormat format, std::ostream& out) {
  auto opt = [](const std::optional<double>& v, const char* none) {
    return v ? format_number(*v) : std::string(none);
  };
  if (format == OutputFormat::Csv) {
    out << "table,X,delta,kind,order,computed_actual,published_actual,predicted,published_predicted,"
           "actual_rel_dev,predicted_rel_dev\n";
    for (const auto& t : tables)
      for (const auto& r : t.rows)
        out << t.id << ',' << format_number(t.X) << ',' << t.delta.str() << ',' << to_string(t.kind) << ','
            << format_number(r.order) << ',' << opt(r.computed_actual, "") << ','
            << format_number(r.published_actual) << ',' << format_number(r.predicted) << ','
            << format_number(r.published_predicted) << ',' << opt(r.actual_rel_dev, "") << ','
            << format_number(r.predicted_rel_dev) << '\n';
    return;
  }
  out << "[";
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& t = tables[i];
    out << (i ? ",\n " : "\n ") << "{\"table\": " << t.id << ", \"title\": " << json(t.title).dump()
        << ", \"X\": " << format_number(t.X) << ", \"delta\": " << json(t.delta.str()).dump()
        << ", \"kind\": " << json(to_string(t.kind)).dump() << ", \"wall_seconds\": "
        << format_number(t.wall_seconds) << ", \"rows\": [";
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      const auto& r = t.rows[k];
      out << (k ? ", " : "") << "{\"order\": " << format_number(r.order)
          << ", \"computed_actual\": " << opt(r.computed_actual, "null")
          << ", \"published_actual\": " << format_number(r.published_actual)
          << ", \"predicted\": " << format_number(r.predicted)
          << ", \"published_predicted\": " << format_number(r.published_predicted)
          << ", \"actual_rel_dev\": " << opt(r.actual_rel_dev, "null")
          << ", \"predicted_rel_dev\": " << format_number(r.predicted_rel_dev) << "}";
    }
    out << "]}";
  }
  out << (tables.empty() ? "]\n" : "\n]\n");
}

void print_tables(const std::vector<Table>& tables, std::ostream& out) {
  for (const auto& t : tables) {
    out << "Table " << t.id << ": " << t.title << '\n';
    out << std::setw(7) << "order" << std::setw(14) << "computed" << std::setw(14) << "published"
        << std::setw(10) << "dev%" << std::setw(14) << "predicted" << std::setw(14) << "published"
        << std::setw(10) << "dev%" << '\n';
    for (const auto& r : t.rows) {
      out << std::setw(7) << std::fixed << std::setprecision(1) << r.order << std::scientific
          << std::setprecision(4);
      if (r.computed_actual)
        out << std::setw(14) << *r.computed_actual;
      else
        out << std::setw(14) << "-";
      out << std::setw(14) << r.published_actual;
      out << std::fixed << std::setprecision(3);
      if (r.actual_rel_dev)
        out << std::setw(10) << 100.0 * *r.actual_rel_dev;
      else
        out << std::setw(10) << "-";
      out << std::scientific << std::setprecision(4) << std::setw(14) << r.predicted << std::setw(14)
          << r.published_predicted << std::fixed << std::setprecision(3) << std::setw(10)
          << 100.0 * r.predicted_rel_dev << '\n';
    }
    out.unsetf(std::ios::floatfield);
    out << '\n';
  }
}

}  // namespace pmom
