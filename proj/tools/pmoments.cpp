// pmoments: command-line front end for the prime moment library.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>

#include <CLI11.hpp>

#include "pmom/equivalence.hpp"
#include "pmom/error.hpp"
#include "pmom/identities.hpp"
#include "pmom/lambda_sieve.hpp"
#include "pmom/predictions.hpp"
#include "pmom/report.hpp"

namespace {

using namespace pmom;

constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitInternal = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidWindow:
    case ErrorKind::InvalidOrder:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Domain:
      return kExitConfig;
    case ErrorKind::Range:
    case ErrorKind::Precondition:
    case ErrorKind::CorruptCache:
    case ErrorKind::Io:
      return kExitResource;
    case ErrorKind::Invariant:
      return kExitInternal;
  }
  return kExitInternal;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, path + ": cannot open for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct MomentsArgs {
  std::string config_file, X, h, delta, orders, kinds, formulas, output, format, cache;
  int threads = -1;
};

int cmd_moments(const MomentsArgs& a) {
  RunConfig c;
  if (!a.config_file.empty()) c = parse_run_config(read_file(a.config_file));
  if (!a.X.empty()) c.X = Rational::parse(a.X);
  if (!a.h.empty()) {
    c.scaled = false;
    c.width = Rational::parse(a.h);
  }
  if (!a.delta.empty()) {
    c.scaled = true;
    c.width = Rational::parse(a.delta);
  }
  if (!a.orders.empty()) {
    c.orders.clear();
    for (const auto& s : split_list(a.orders)) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') fail(ErrorKind::InvalidOrder, "bad order '" + s + "'");
      c.orders.push_back(v);
    }
  }
  if (!a.kinds.empty()) {
    c.kinds.clear();
    for (const auto& s : split_list(a.kinds)) c.kinds.push_back(parse_kind(s));
  }
  if (!a.formulas.empty()) {
    c.formulas.clear();
    for (const auto& s : split_list(a.formulas)) c.formulas.push_back(parse_formula(s));
  }
  if (!a.output.empty()) c.output = a.output;
  if (!a.format.empty()) c.format = parse_format(a.format);
  if (a.threads >= 0) c.threads = a.threads;
  if (!a.cache.empty()) c.cache_path = a.cache;

  const auto rows = run(c);
  if (c.output)
    emit(rows, c.format, *c.output);
  else
    emit(rows, c.format, std::cout);
  return 0;
}

struct PredictArgs {
  std::string formula;
  double X = 0.0, width = 0.0;
  std::vector<double> orders;
};

int cmd_predict(const PredictArgs& a) {
  const Formula f = parse_formula(a.formula);
  std::printf("formula,X,width,order,value\n");
  for (const double o : a.orders) {
    const auto p = evaluate(PredictionInput{a.X, a.width, o, f});
    for (const auto& w : p.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("%s,%s,%s,%s,%s\n", to_string(f).c_str(), format_number(a.X).c_str(),
                format_number(a.width).c_str(), format_number(o).c_str(), format_number(p.value).c_str());
  }
  return 0;
}

int cmd_verify(const VerifierConfig& vc) {
  bool ok = true;
  for (const auto& c : identity_suite(vc)) {
    std::printf("%-4s %-48s %.3e (tol %.0e)\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.value, c.tolerance);
    ok = ok && c.passed;
  }
  return ok ? 0 : kExitInternal;
}

struct EquivalenceArgs {
  std::string X, h, delta;
  int n = 1;
  double average = 0.0;
  int grid = 16;
  int threads = 0;
};

int cmd_equivalence(const EquivalenceArgs& a) {
  const Rational X = Rational::parse(a.X);
  const SweepOptions opts{.threads = a.threads};
  if (a.average > 0.0) {
    const auto r = saffari_vaughan_average(X, a.average, a.n, a.grid, opts);
    std::printf("lhs %s\nrhs %s\nratio %s\nhead_bound %s\n", format_number(r.lhs).c_str(),
                format_number(r.rhs).c_str(), format_number(r.ratio).c_str(), format_number(r.head_bound).c_str());
    return 0;
  }
  if (a.h.empty() == a.delta.empty()) fail(ErrorKind::InvalidArgument, "give exactly one of --h or --delta");
  const WindowSpec w = a.h.empty() ? WindowSpec::scaled(X, Rational::parse(a.delta))
                                   : WindowSpec::fixed(X, Rational::parse(a.h));
  const auto r = decomposition_check(w, a.n, opts);
  std::printf("window %s\nn %d\nsigned %s\nabsolute %s\npositive_part %s\nnegative_part %s\n", w.describe().c_str(),
              r.n, format_number(r.signed_value).c_str(), format_number(r.absolute).c_str(),
              format_number(r.positive_part).c_str(), format_number(r.negative_part).c_str());
  std::printf("normalizer %s\nratio %s\nidentity_residual %.3e\nnegative_identity_residual %.3e\n"
              "lipschitz %s (%zu samples)\n",
              format_number(r.normalizer).c_str(), format_number(r.ratio).c_str(), r.identity_residual,
              r.negative_identity_residual, r.lipschitz_ok ? "ok" : "violated", r.lipschitz_samples);
  return r.lipschitz_ok ? 0 : kExitInternal;
}

struct TablesArgs {
  std::string scale = "desk", format = "text", output;
  bool formulas_only = false;
  int threads = 0;
};

int cmd_tables(const TablesArgs& a) {
  const auto tables = reproduce_tables(parse_scale(a.scale), {.formulas_only = a.formulas_only, .threads = a.threads});
  std::ofstream file;
  if (!a.output.empty()) {
    file.open(a.output);
    if (!file) fail(ErrorKind::Io, a.output + ": cannot open for writing");
  }
  std::ostream& out = a.output.empty() ? std::cout : file;
  if (a.format == "text")
    print_tables(tables, out);
  else
    emit_tables(tables, parse_format(a.format), out);
  out.flush();
  if (!out) fail(ErrorKind::Io, (a.output.empty() ? std::string("stdout") : a.output) + ": write failed");
  return 0;
}

std::string cache_path_or_env(const std::string& given) {
  if (const char* env = std::getenv("PRIME_MOMENT_CACHE"); env != nullptr && *env != '\0') return env;
  if (given.empty()) fail(ErrorKind::InvalidArgument, "no cache path: pass --path or set PRIME_MOMENT_CACHE");
  return given;
}

int cmd_cache_build(const std::string& path, std::uint64_t limit, int threads) {
  const std::string p = cache_path_or_env(path);
  const auto events = enumerate_prime_powers(SieveConfig{.limit = limit, .cache_path = p, .threads = threads});
  std::printf("%s: %zu prime powers up to %llu\n", p.c_str(), events.events.size(),
              static_cast<unsigned long long>(events.limit));
  return 0;
}

int cmd_cache_info(const std::string& path) {
  const std::string p = cache_path_or_env(path);
  const auto events = load_events(p);
  std::printf("path %s\nevents %zu\nlimit %llu\n", p.c_str(), events.events.size(),
              static_cast<unsigned long long>(events.limit));
  if (!events.events.empty())
    std::printf("psi(limit) %s\n", format_number(psi(static_cast<double>(events.limit), events)).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moments of primes in short intervals: exact sweeps, predictions and checks"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  MomentsArgs ma;
  auto* moments = app.add_subcommand("moments", "Compute window moments and compare with predictions");
  moments->add_option("--config", ma.config_file, "JSON run configuration; flags override it");
  moments->add_option("--X", ma.X, "Upper limit X (integer, p/q or decimal)");
  auto* hopt = moments->add_option("--h", ma.h, "Fixed window width");
  auto* dopt = moments->add_option("--delta", ma.delta, "Proportional window width");
  hopt->excludes(dopt);
  moments->add_option("--orders", ma.orders, "Comma-separated orders, e.g. 1,2.1,3");
  moments->add_option("--kinds", ma.kinds, "Comma-separated kinds: absolute,signed,positive,negative");
  moments->add_option("--formulas", ma.formulas, "Comma-separated: thm1,thm2,conj1,conj2,ms11,ms13,odd");
  moments->add_option("--output", ma.output, "Output file (default stdout)");
  moments->add_option("--format", ma.format, "csv or json");
  moments->add_option("--threads", ma.threads, "Worker threads (0: all cores)");
  moments->add_option("--cache", ma.cache, "Prime-power cache file");

  PredictArgs pa;
  auto* predict = app.add_subcommand("predict", "Evaluate a prediction formula");
  predict->add_option("--formula", pa.formula, "thm1,thm2,conj1,conj2,ms11,ms13,odd")->required();
  predict->add_option("--X", pa.X)->required();
  predict->add_option("--width", pa.width, "h or delta, according to the formula")->required();
  predict->add_option("--order", pa.orders, "Order(s) lambda, k or n")->required()->delimiter(',');

  VerifierConfig vc;
  auto* verify = app.add_subcommand("verify-identities", "Check the gamma and Gaussian moment identities");
  verify->add_option("--quad-rel-tol", vc.quad_rel_tol);
  verify->add_option("--cutoff-periods", vc.osc_cutoff_periods);
  verify->add_option("--taylor-n", vc.taylor_N);

  EquivalenceArgs ea;
  auto* equiv = app.add_subcommand("equivalence", "Odd moment decomposition and averaging checks");
  equiv->add_option("--X", ea.X)->required();
  auto* eh = equiv->add_option("--h", ea.h);
  auto* ed = equiv->add_option("--delta", ea.delta);
  eh->excludes(ed);
  equiv->add_option("--n", ea.n, "Odd order");
  equiv->add_option("--average", ea.average, "Run the width average up to this Delta instead");
  equiv->add_option("--grid", ea.grid, "Width nodes for --average");
  equiv->add_option("--threads", ea.threads);

  TablesArgs ta;
  auto* tables = app.add_subcommand("reproduce-tables", "Recompute the published moment tables");
  tables->add_option("--scale", ta.scale, "desk (X=1e8) or full (adds X=1e10)");
  tables->add_flag("--formulas-only", ta.formulas_only, "Skip the sweeps");
  tables->add_option("--format", ta.format, "text, csv or json");
  tables->add_option("--output", ta.output);
  tables->add_option("--threads", ta.threads);

  std::string cache_path;
  std::uint64_t cache_limit = 0;
  int cache_threads = 0;
  auto* cache = app.add_subcommand("cache", "Prime-power cache maintenance");
  cache->require_subcommand(1);
  auto* build = cache->add_subcommand("build", "Sieve up to --limit and persist");
  build->add_option("--path", cache_path);
  build->add_option("--limit", cache_limit)->required();
  build->add_option("--threads", cache_threads);
  auto* info = cache->add_subcommand("info", "Describe a cache file");
  info->add_option("--path", cache_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*moments) return cmd_moments(ma);
    if (*predict) return cmd_predict(pa);
    if (*verify) return cmd_verify(vc);
    if (*equiv) return cmd_equivalence(ea);
    if (*tables) return cmd_tables(ta);
    if (*build) return cmd_cache_build(cache_path, cache_limit, cache_threads);
    if (*info) return cmd_cache_info(cache_path);
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    std::fprintf(stderr, "error: out of memory\n");
    return kExitResource;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
