// Copyright 2026 The CDP Accountant Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cdp/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cdp/bounds.hpp"
#include "cdp/oracle.hpp"
#include "cdp/verify.hpp"

namespace cdp::cli {
namespace {

using nlohmann::json;

constexpr double kReportDeltas[] = {1e-5, 1e-6, 1e-8};
constexpr double kExactEpsTolerance = 1e-12;

struct KindSchema {
  const char* name;
  std::vector<std::string> fields;
};

const std::vector<KindSchema>& ledger_schema() {
  static const std::vector<KindSchema> schema = {
      {"gaussian", {"sensitivity", "sigma"}},
      {"pure_dp", {"eps"}},
      {"approx_dp", {"eps", "delta"}},
      {"zcdp", {"xi", "rho", "delta"}},
      {"mcdp", {"mu", "tau"}},
  };
  return schema;
}

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line on which each ledger entry's opening brace appears, from the raw text.
std::vector<int> entry_lines(std::string_view text) {
  std::vector<int> lines;
  std::vector<char> stack;
  std::size_t entries_depth = 0;
  std::string last_key;
  std::string current;
  bool in_string = false;
  bool escape = false;
  int line = 1;
  for (const char c : text) {
    if (c == '\n') ++line;
    if (in_string) {
      if (escape) {
        escape = false;
      } else if (c == '\\') {
        escape = true;
      } else if (c == '"') {
        in_string = false;
        if (stack.size() == 1) last_key = current;
      } else {
        current.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_string = true;
        current.clear();
        break;
      case '[':
        if (stack.empty() || (stack.size() == 1 && stack[0] == '{' && last_key == "entries")) {
          if (entries_depth == 0) entries_depth = stack.size() + 1;
        }
        stack.push_back('[');
        break;
      case '{':
        if (entries_depth != 0 && stack.size() == entries_depth) lines.push_back(line);
        stack.push_back('{');
        break;
      case ']':
      case '}':
        if (!stack.empty()) stack.pop_back();
        break;
      default:
        break;
    }
  }
  return lines;
}

LedgerEntry build_entry(const json& item) {
  if (!item.is_object()) throw UsageError("entry must be an object");
  for (const auto& [key, value] : item.items()) {
    if (key != "kind" && key != "params" && key != "label") {
      throw UsageError("unexpected key '" + key + "'");
    }
  }
  if (!item.contains("kind") || !item["kind"].is_string()) {
    throw UsageError("missing string field 'kind'");
  }
  if (!item.contains("params") || !item["params"].is_object()) {
    throw UsageError("missing object field 'params'");
  }
  std::string label;
  if (item.contains("label")) {
    if (!item["label"].is_string()) throw UsageError("'label' must be a string");
    label = item["label"].get<std::string>();
  }
  const std::string kind = item["kind"].get<std::string>();
  const auto& schema = ledger_schema();
  const auto it = std::find_if(schema.begin(), schema.end(),
                               [&](const KindSchema& s) { return kind == s.name; });
  if (it == schema.end()) throw UsageError("unknown kind '" + kind + "'");

  const json& params = item["params"];
  for (const auto& [key, value] : params.items()) {
    if (std::find(it->fields.begin(), it->fields.end(), key) == it->fields.end()) {
      throw UsageError("unexpected field '" + key + "' for kind '" + kind + "'");
    }
  }
  std::vector<double> v;
  for (const std::string& field : it->fields) {
    if (!params.contains(field) || !params[field].is_number()) {
      throw UsageError("missing numeric field '" + field + "' for kind '" + kind + "'");
    }
    v.push_back(params[field].get<double>());
  }

  LedgerEntry entry{GaussianEntry{0.0, 1.0}, label};
  switch (it - schema.begin()) {
    case 0: entry.params = GaussianEntry{v[0], v[1]}; break;
    case 1: entry.params = PureDpEntry{v[0]}; break;
    case 2: entry.params = ApproxDpEntry{v[0], v[1]}; break;
    case 3: entry.params = ZcdpEntry{v[0], v[1], v[2]}; break;
    default: entry.params = McdpEntry{v[0], v[1]}; break;
  }
  try {
    to_zcdp(entry);
  } catch (const Error& e) {
    throw UsageError(std::string("invalid parameters: ") + e.what());
  }
  return entry;
}

json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(format_number(x).c_str(), nullptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

ZcdpParams resolve_params(const Options& opts) {
  if (opts.ledger && opts.rho) {
    throw UsageError("give either --ledger or --rho, not both");
  }
  if (opts.ledger) return compose_ledger(load_ledger(*opts.ledger));
  if (opts.rho) return ZcdpParams(opts.xi.value_or(0.0), *opts.rho);
  throw UsageError("a budget is required: pass --ledger PATH or --rho F [--xi F]");
}

template <typename T>
const T& require(const std::optional<T>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required flag ") + flag);
  return *v;
}

double delta_of_eps(const ZcdpParams& params, double eps, CurveMethod method) {
  const double da = params.delta_approx();
  const ZcdpParams plain(params.xi(), params.rho());
  double inner = 1.0;
  switch (method) {
    case CurveMethod::kSimple:
      inner = zcdp_to_dp_simple_delta(plain, eps);
      break;
    case CurveMethod::kRefined:
      if (plain.rho() == 0.0) {
        inner = eps >= plain.xi() ? 0.0 : 1.0;
      } else if (eps >= plain.xi() + plain.rho()) {
        inner = zcdp_to_dp_refined(plain, eps);
      }
      break;
    case CurveMethod::kExactGaussian:
      inner = delta_exact_gaussian(plain.rho(), eps);
      break;
  }
  return da == 0.0 ? inner : 1.0 - (1.0 - da) * (1.0 - inner);
}

double exact_eps_of_delta(double rho, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("eps_of_delta: delta must lie in (0, 1)");
  }
  if (delta_exact_gaussian(rho, 0.0) <= delta) return 0.0;
  // The simple bound dominates the exact curve, so its eps brackets.
  double lo = 0.0;
  double hi = zcdp_to_dp_simple(ZcdpParams(0.0, rho), delta).eps();
  while (hi - lo > kExactEpsTolerance * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (delta_exact_gaussian(rho, mid) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double curve_point(const ZcdpParams& params, CurveTarget target,
                   CurveMethod method, double x) {
  if (target == CurveTarget::kDeltaOfEps) return delta_of_eps(params, x, method);
  if (method == CurveMethod::kExactGaussian) return exact_eps_of_delta(params.rho(), x);
  try {
    return eps_for_delta(params, x, method == CurveMethod::kSimple
                                        ? ConversionMethod::kSimple
                                        : ConversionMethod::kRefined);
  } catch (const OutOfRange&) {
    return kInfinity;
  }
}

void print_kv(std::ostream& out, const char* key, double value) {
  out << key << ' ' << format_number(value) << '\n';
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::vector<LedgerEntry> parse_ledger(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte == 0 ? 0 : e.byte - 1;
    throw UsageError(source + ":" + std::to_string(line_of_offset(text, at)) +
                     ": malformed JSON: " + e.what());
  }
  const json* entries = nullptr;
  if (doc.is_array()) {
    entries = &doc;
  } else if (doc.is_object() && doc.contains("entries") && doc["entries"].is_array()) {
    for (const auto& [key, value] : doc.items()) {
      if (key != "entries") throw UsageError(source + ":1: unexpected top-level key '" + key + "'");
    }
    entries = &doc["entries"];
  } else {
    throw UsageError(source + ":1: expected an object with an 'entries' array");
  }
  if (entries->empty()) throw UsageError(source + ":1: ledger has no entries");

  const std::vector<int> lines = entry_lines(text);
  std::vector<LedgerEntry> out;
  for (std::size_t i = 0; i < entries->size(); ++i) {
    try {
      out.push_back(build_entry((*entries)[i]));
    } catch (const UsageError& e) {
      const int line = i < lines.size() ? lines[i] : 1;
      throw UsageError(source + ":" + std::to_string(line) + ": entry " +
                       std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LedgerEntry> load_ledger(const std::string& path) {
  return parse_ledger(read_file(path), path);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

Grid Grid::parse(std::string_view text) {
  const auto bad = [&] {
    return UsageError("--grid expects LO:HI:N with LO < HI and N >= 2, got '" +
                      std::string(text) + "'");
  };
  const std::size_t a = text.find(':');
  const std::size_t b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos) throw bad();
  const std::string lo(text.substr(0, a));
  const std::string hi(text.substr(a + 1, b - a - 1));
  const std::string_view pts = text.substr(b + 1);
  Grid g;
  char* end = nullptr;
  g.lo = std::strtod(lo.c_str(), &end);
  if (lo.empty() || *end != '\0') throw bad();
  g.hi = std::strtod(hi.c_str(), &end);
  if (hi.empty() || *end != '\0') throw bad();
  const auto [ptr, ec] = std::from_chars(pts.data(), pts.data() + pts.size(), g.points);
  if (ec != std::errc() || ptr != pts.data() + pts.size()) throw bad();
  if (!(std::isfinite(g.lo) && std::isfinite(g.hi) && g.lo < g.hi) || g.points < 2) throw bad();
  return g;
}

std::vector<double> Grid::values() const {
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    xs[static_cast<std::size_t>(i)] =
        i == points - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  }
  return xs;
}

CurveTarget parse_target(std::string_view text) {
  if (text == "delta_of_eps") return CurveTarget::kDeltaOfEps;
  if (text == "eps_of_delta") return CurveTarget::kEpsOfDelta;
  throw UsageError("--target must be delta_of_eps or eps_of_delta");
}

CurveMethod parse_method(std::string_view text) {
  if (text == "simple") return CurveMethod::kSimple;
  if (text == "refined") return CurveMethod::kRefined;
  if (text == "exact_gaussian") return CurveMethod::kExactGaussian;
  throw UsageError("--method must be simple, refined or exact_gaussian");
}

const char* to_string(CurveMethod method) {
  switch (method) {
    case CurveMethod::kSimple: return "simple";
    case CurveMethod::kRefined: return "refined";
    case CurveMethod::kExactGaussian: return "exact_gaussian";
  }
  return "?";
}

int thread_budget() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("CDP_ACCT_THREADS"); env != nullptr && *env != '\0') {
    int cap = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec != std::errc() || ptr != s.data() + s.size() || cap < 1) {
      throw UsageError("CDP_ACCT_THREADS must be a positive integer");
    }
    n = std::min(n, cap);
  }
  return n;
}

std::vector<double> curve_values(const ZcdpParams& params, CurveTarget target,
                                 CurveMethod method,
                                 const std::vector<double>& xs, int threads) {
  if (method == CurveMethod::kExactGaussian &&
      (params.xi() != 0.0 || params.delta_approx() != 0.0 || !(params.rho() > 0.0))) {
    throw UsageError("exact_gaussian needs a Gaussian budget: xi = 0, rho > 0, no delta");
  }
  std::vector<double> values(xs.size());
  std::vector<std::exception_ptr> errors(xs.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < xs.size(); i = next++) {
      try {
        values[i] = curve_point(params, target, method, xs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(xs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  // A bound valid at a smaller x stays valid at a larger one.
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (xs[i] >= xs[i - 1]) values[i] = std::min(values[i], values[i - 1]);
  }
  return values;
}

int cmd_compose(const Options& opts, std::ostream& out) {
  const std::string& path = require(opts.ledger, "--ledger");
  const std::vector<LedgerEntry> entries = load_ledger(path);
  const ZcdpParams total = compose_ledger(entries);

  out << "entries " << entries.size() << '\n';
  print_kv(out, "xi", total.xi());
  print_kv(out, "rho", total.rho());
  print_kv(out, "delta", total.delta_approx());
  out << "delta,eps_simple,eps_refined\n";
  json points = json::array();
  for (const double d : kReportDeltas) {
    double simple = kInfinity;
    double refined = kInfinity;
    if (d > total.delta_approx()) {
      simple = eps_for_delta(total, d, ConversionMethod::kSimple);
      refined = eps_for_delta(total, d, ConversionMethod::kRefined);
    }
    out << format_number(d) << ',' << format_number(simple) << ',' << format_number(refined) << '\n';
    points.push_back({{"delta", json_number(d)},
                      {"eps_simple", json_number(simple)},
                      {"eps_refined", json_number(refined)}});
  }
  if (opts.out) {
    const json report = {{"entries", entries.size()},
                         {"xi", json_number(total.xi())},
                         {"rho", json_number(total.rho())},
                         {"delta", json_number(total.delta_approx())},
                         {"dp_points", points}};
    write_file(*opts.out, dump(report));
  }
  return kExitOk;
}

int cmd_curve(const Options& opts, std::ostream& out) {
  const ZcdpParams params = resolve_params(opts);
  const CurveTarget target = parse_target(opts.target.value_or("delta_of_eps"));
  const CurveMethod method = parse_method(opts.method.value_or("refined"));
  std::vector<double> xs;
  if (opts.grid) {
    xs = Grid::parse(*opts.grid).values();
  } else if (target == CurveTarget::kEpsOfDelta && opts.delta) {
    xs = {*opts.delta};
  } else if (target == CurveTarget::kDeltaOfEps && opts.eps) {
    xs = {*opts.eps};
  } else {
    throw UsageError("curve needs --grid LO:HI:N (or a single --eps / --delta)");
  }
  const std::vector<double> values = curve_values(params, target, method, xs, thread_budget());

  std::string csv = "x,value,method\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    csv += format_number(xs[i]) + "," + format_number(values[i]) + "," + to_string(method) + "\n";
  }
  if (opts.out) {
    write_file(*opts.out, csv);
  } else {
    out << csv;
  }
  return kExitOk;
}

int cmd_calibrate(const Options& opts, std::ostream& out) {
  const double sensitivity = require(opts.sensitivity, "--sensitivity");
  const bool by_rho = opts.rho.has_value();
  const bool by_dp = opts.eps.has_value() || opts.delta.has_value();
  if (by_rho == by_dp) {
    throw UsageError("calibrate needs exactly one target: --rho F, or --eps F --delta F");
  }
  if (by_rho) {
    if (opts.method) throw UsageError("--method applies only to an (eps, delta) target");
    const double sigma = calibrate_sigma_for_rho(sensitivity, *opts.rho);
    print_kv(out, "sigma", sigma);
    print_kv(out, "rho", gaussian_rho(GaussianMech(sensitivity, sigma)));
    return kExitOk;
  }
  const double eps = require(opts.eps, "--eps");
  const double delta = require(opts.delta, "--delta");
  const CurveMethod method = parse_method(opts.method.value_or("refined"));
  if (method == CurveMethod::kExactGaussian) {
    throw UsageError("calibrate supports --method simple or refined");
  }
  const double sigma = method == CurveMethod::kSimple
                           ? calibrate_sigma_for_dp_simple(sensitivity, eps, delta)
                           : calibrate_sigma_for_dp(sensitivity, eps, delta);
  const ZcdpParams achieved(0.0, gaussian_rho(GaussianMech(sensitivity, sigma)));
  out << "method " << to_string(method) << '\n';
  print_kv(out, "sigma", sigma);
  print_kv(out, "rho", achieved.rho());
  print_kv(out, "delta_simple", delta_of_eps(achieved, eps, CurveMethod::kSimple));
  print_kv(out, "delta_refined", delta_of_eps(achieved, eps, CurveMethod::kRefined));
  print_kv(out, "delta_exact", delta_exact_gaussian(achieved.rho(), eps));
  return kExitOk;
}

int cmd_group(const Options& opts, std::ostream& out) {
  const int k = require(opts.k, "--k");
  const ZcdpParams grouped = group_privacy(resolve_params(opts), k);
  out << "k " << k << '\n';
  print_kv(out, "xi", grouped.xi());
  print_kv(out, "rho", grouped.rho());
  if (opts.delta) {
    print_kv(out, "eps_refined", eps_for_delta(grouped, *opts.delta, ConversionMethod::kRefined));
  }
  return kExitOk;
}

int cmd_convert(const Options& opts, std::ostream& out) {
  std::string from;
  if (opts.from) {
    from = *opts.from;
  } else if (opts.mu || opts.tau) {
    from = "mcdp";
  } else if (opts.rho) {
    from = "zcdp";
  } else if (opts.eps && opts.delta) {
    from = "approx_dp";
  } else if (opts.eps) {
    from = "pure_dp";
  } else {
    throw UsageError("convert needs --from or enough flags to infer it");
  }

  if (from == "pure_dp") {
    const auto [linear, quadratic] = pure_dp_to_zcdp(require(opts.eps, "--eps"));
    out << "zcdp_linear " << format_number(linear.xi()) << ' ' << format_number(linear.rho()) << '\n';
    out << "zcdp_quadratic " << format_number(quadratic.xi()) << ' '
        << format_number(quadratic.rho()) << '\n';
  } else if (from == "approx_dp") {
    const DpPoint pt(require(opts.eps, "--eps"), require(opts.delta, "--delta"));
    const ApproxZcdpForms forms = dp_to_approx_zcdp_forms(pt);
    for (const auto& [name, z] : {std::pair{"approx_zcdp_linear", forms.pure_form},
                                  std::pair{"approx_zcdp_quadratic", forms.quadratic_form}}) {
      out << name << ' ' << format_number(z.xi()) << ' ' << format_number(z.rho()) << ' '
          << format_number(z.delta_approx()) << '\n';
    }
  } else if (from == "zcdp") {
    const ZcdpParams z(opts.xi.value_or(0.0), require(opts.rho, "--rho"));
    const McdpParams m = zcdp_to_mcdp(z);
    out << "mcdp " << format_number(m.mu()) << ' ' << format_number(m.tau()) << '\n';
    if (opts.delta) {
      print_kv(out, "eps_simple", eps_for_delta(z, *opts.delta, ConversionMethod::kSimple));
      print_kv(out, "eps_refined", eps_for_delta(z, *opts.delta, ConversionMethod::kRefined));
    }
    if (opts.eps) {
      print_kv(out, "delta_simple", delta_of_eps(z, *opts.eps, CurveMethod::kSimple));
      print_kv(out, "delta_refined", delta_of_eps(z, *opts.eps, CurveMethod::kRefined));
    }
  } else if (from == "mcdp") {
    const ZcdpParams z = mcdp_to_zcdp(McdpParams(require(opts.mu, "--mu"), require(opts.tau, "--tau")));
    out << "zcdp " << format_number(z.xi()) << ' ' << format_number(z.rho()) << '\n';
  } else {
    throw UsageError("--from must be pure_dp, approx_dp, zcdp or mcdp");
  }
  return kExitOk;
}

int cmd_mi_demo(const Options& opts, std::ostream& out) {
  const double eps = opts.eps.value_or(1.0);
  const int n = opts.n.value_or(4);
  if (n < 1 || n > 10) throw UsageError("--n must lie in [1, 10]");
  const FiniteChannel channel = randomized_response_channel(eps, n);
  const ZcdpParams params(0.0, 0.5 * eps * eps);
  const Certification cert = certify_zcdp(channel, params);
  out << "channel randomized_response eps=" << format_number(eps) << " n=" << n << '\n';
  out << "certified_zcdp " << (cert.certified ? "yes" : "no") << ' '
      << format_number(params.rho()) << '\n';
  out << "prior,mutual_information,bound\n";
  out << "independent," << format_number(mutual_information(independent_uniform_prior(n), channel))
      << ',' << format_number(mi_bound(params, n, MiStructure::independent())) << '\n';
  out << "correlated," << format_number(mutual_information(correlated_prior(n), channel)) << ','
      << format_number(mi_bound(params, n, MiStructure::general())) << '\n';
  for (int l = 2; l < n; ++l) {
    if (n % l != 0) continue;
    const int m = n / l;
    out << "blocks_" << m << "x" << l << ','
        << format_number(mutual_information(block_prior(m, l), channel)) << ','
        << format_number(mi_bound(params, n, MiStructure::blocks_of(m, l))) << '\n';
  }
  return cert.certified ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const Options& opts, std::ostream& out) {
  const std::string& suite = require(opts.suite, "--suite");
  std::vector<std::string> names;
  if (suite == "all") {
    for (const auto s : suite_names()) names.emplace_back(s);
  } else {
    const auto known = suite_names();
    if (std::find(known.begin(), known.end(), suite) == known.end()) {
      throw UsageError("unknown suite '" + suite + "'");
    }
    names.push_back(suite);
  }

  bool all_passed = true;
  json reports = json::array();
  for (const std::string& name : names) {
    const SuiteReport report = run_suite(name, opts.seed);
    json cases = json::array();
    for (const VerifyCase& c : report.cases) {
      out << (c.pass ? "PASS " : "FAIL ") << report.suite << '/' << c.name << "  lhs="
          << format_number(c.lhs) << " rhs=" << format_number(c.rhs) << '\n';
      cases.push_back({{"name", c.name},
                       {"pass", c.pass},
                       {"lhs", json_number(c.lhs)},
                       {"rhs", json_number(c.rhs)}});
    }
    all_passed = all_passed && report.passed();
    reports.push_back({{"suite", report.suite}, {"cases", cases}});
  }
  out << (all_passed ? "all cases passed\n" : "some cases FAILED\n");
  const json doc = names.size() == 1 ? reports[0] : reports;
  if (opts.out) {
    write_file(*opts.out, dump(doc));
  } else {
    out << dump(doc);
  }
  return all_passed ? kExitOk : kExitVerifyFailed;
}

int run(std::string_view command, const Options& opts, std::ostream& out,
        std::ostream& err) {
  static const std::map<std::string_view, int (*)(const Options&, std::ostream&)> commands = {
      {"compose", cmd_compose}, {"curve", cmd_curve},     {"calibrate", cmd_calibrate},
      {"group", cmd_group},     {"convert", cmd_convert}, {"mi-demo", cmd_mi_demo},
      {"verify", cmd_verify},
  };
  const auto it = commands.find(command);
  if (it == commands.end()) {
    err << "error: unknown command '" << command << "'\n";
    return kExitUsage;
  }
  try {
    return it->second(opts, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace cdp::cli
