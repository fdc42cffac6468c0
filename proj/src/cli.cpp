#include "ced/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "ced/catalan.hpp"
#include "ced/decision.hpp"
#include "ced/errors.hpp"
#include "ced/params.hpp"
#include "ced/simulate.hpp"

#ifndef CED_VERSION
#define CED_VERSION "0.0.0"
#endif

namespace ced::cli {

using nlohmann::json;

namespace {

enum class Format { Text, Csv, Json };

// Rejected command line (bad flag value, missing flag, ...).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Manifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> params;
  std::optional<std::uint64_t> seed;

  void add(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }

  json to_json() const {
    json p = json::object();
    for (const auto& [k, v] : params) p[k] = v;
    json j = {{"tool", "ced"}, {"version", CED_VERSION}, {"subcommand", subcommand}, {"params", p}};
    j["seed"] = seed ? json(*seed) : json(nullptr);
    return j;
  }

  // Single comment line, used as the header of text and CSV output.
  std::string comment() const {
    std::string s = "# ced " CED_VERSION " " + subcommand;
    for (const auto& [k, v] : params) s += " " + k + "=" + v;
    if (seed) s += " seed=" + std::to_string(*seed);
    return s;
  }
};

Rational parse_flag(const std::string& flag, const std::string& text, bool allow_decimal = false) {
  try {
    return allow_decimal ? Rational::parse_decimal(text) : Rational::parse(text);
  } catch (const InvalidParameter& e) {
    std::string msg = flag + ": " + e.what();
    if (!allow_decimal && text.find('.') != std::string::npos) msg += " (decimals are not accepted here; use p/q)";
    throw UsageError(msg);
  }
}

Format parse_format(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw UsageError("--format: expected text, csv or json (got '" + s + "')");
}

unsigned resolve_threads(int flag_value) {
  if (flag_value > 0) return static_cast<unsigned>(flag_value);
  if (const char* env = std::getenv("CEL_THREADS")) {
    unsigned n = 0;
    const std::string_view sv(env);
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), n);
    if (ec == std::errc() && ptr == sv.data() + sv.size() && n > 0) return n;
  }
  return 1;
}

json certificate_json(const DecisionOutcome& o) {
  if (o.short_circuit != ShortCircuit::None) return {{"kind", "short-circuit"}, {"reason", to_string(o.short_circuit)}};
  if (const auto* b = o.below()) return {{"kind", "below"}, {"m", b->m}, {"level", b->level}, {"pole", b->pole}};
  if (const auto* a = o.above()) return {{"kind", "above"}, {"m", a->m}, {"psi_upper", a->psi_upper.to_string()}};
  return {{"kind", "undecided"}, {"m_max", o.m_reached}};
}

std::string certificate_text(const DecisionOutcome& o) {
  if (o.short_circuit != ShortCircuit::None) return "short-circuit " + to_string(o.short_circuit);
  if (const auto* b = o.below()) {
    return "below m=" + std::to_string(b->m) + " level=" + std::to_string(b->level) + (b->pole ? " pole" : "");
  }
  if (const auto* a = o.above()) return "above m=" + std::to_string(a->m);
  return "undecided m_max=" + std::to_string(o.m_reached);
}

std::vector<Rational> parse_grid(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("--lambda-grid: expected lo:hi:n (got '" + text + "')");
  const Rational lo = parse_flag("--lambda-grid", text.substr(0, c1));
  const Rational hi = parse_flag("--lambda-grid", text.substr(c1 + 1, c2 - c1 - 1));
  int n = 0;
  const std::string count = text.substr(c2 + 1);
  const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
  if (ec != std::errc() || ptr != count.data() + count.size() || n < 1) {
    throw UsageError("--lambda-grid: point count must be a positive integer (got '" + count + "')");
  }
  if (n > 1 && !(lo < hi)) throw UsageError("--lambda-grid: need lo < hi");
  std::vector<Rational> grid;
  for (int i = 0; i < n; ++i) {
    grid.push_back(n == 1 ? lo : lo + (hi - lo) * Rational(i) / Rational(n - 1));
  }
  return grid;
}

struct Common {
  std::string format = "text";
  int threads = 0;
};

// ---------------------------------------------------------------------------

int cmd_decide(int d, const std::string& lambda_s, const std::string& rho_s, int max_m, bool as_json,
               std::ostream& out) {
  const ModelParams p(d, parse_flag("--lambda", lambda_s), parse_flag("--rho", rho_s));
  Manifest man{"decide", {}, std::nullopt};
  man.add("d", std::to_string(d));
  man.add("lambda", p.lambda().to_string());
  man.add("rho", p.rho().to_string());
  man.add("max_m", std::to_string(max_m));

  const DecisionOutcome o = decide(p, max_m);
  if (as_json) {
    json j = {{"manifest", man.to_json()},
              {"verdict", to_string(o.verdict)},
              {"certificate", certificate_json(o)},
              {"m_reached", o.m_reached}};
    out << j.dump() << "\n";
  } else {
    out << man.comment() << "\n"
        << "verdict: " << to_string(o.verdict) << "\n"
        << "certificate: " << certificate_text(o) << "\n"
        << "m_reached: " << o.m_reached << "\n";
  }
  switch (o.verdict) {
    case Verdict::Below:
      return kBelow;
    case Verdict::Above:
      return kAbove;
    case Verdict::Undecided:
      break;
  }
  return kUndecided;
}

int cmd_rho_c(int d, const std::string& lambda_s, const std::string& grid_s, const std::string& tol_s, int max_m,
              bool certs, Format fmt, unsigned threads, std::ostream& out) {
  if (lambda_s.empty() == grid_s.empty()) throw UsageError("rho-c: give exactly one of --lambda or --lambda-grid");
  const Rational tol = parse_flag("--tol", tol_s);
  if (tol.sign() <= 0) throw UsageError("--tol: must be > 0");

  Manifest man{"rho-c", {}, std::nullopt};
  man.add("d", std::to_string(d));
  std::vector<Rational> grid;
  if (!lambda_s.empty()) {
    const Rational lambda = parse_flag("--lambda", lambda_s);
    if (lambda.sign() <= 0) throw UsageError("--lambda: must be > 0");
    man.add("lambda", lambda.to_string());
    if (!in_lambda_interval(d, lambda)) {
      throw OutsideLambdaInterval("lambda = " + lambda.to_string() + " lies outside (lambda_c^-, lambda_c^+) for d = " +
                                  std::to_string(d) + ", where rho_c = 0; nothing to bracket");
    }
    grid.push_back(lambda);
  } else {
    grid = parse_grid(grid_s);
    if (grid.front().sign() <= 0) throw UsageError("--lambda-grid: lambda values must be > 0");
    man.add("lambda_grid", grid_s);
  }
  man.add("tol", tol.to_string());
  man.add("max_m", std::to_string(max_m));

  const auto rows = rho_c_curve(d, grid, tol, max_m, threads);

  if (fmt == Format::Json) {
    json jrows = json::array();
    for (const auto& r : rows) {
      json jr = {{"lambda", r.lambda.to_string()},
                 {"inside", r.inside},
                 {"lo", r.lo.to_string()},
                 {"hi", r.hi.to_string()},
                 {"lo_approx", r.lo.to_double()},
                 {"hi_approx", r.hi.to_double()},
                 {"complete", !r.bracket || r.bracket->complete()}};
      if (r.bracket && r.bracket->unresolved) jr["unresolved"] = r.bracket->unresolved->to_string();
      if (certs && r.bracket) {
        jr["lo_certificate"] = certificate_json(r.bracket->lo_outcome);
        jr["hi_certificate"] = certificate_json(r.bracket->hi_outcome);
      }
      jrows.push_back(std::move(jr));
    }
    out << json{{"manifest", man.to_json()}, {"rows", jrows}}.dump() << "\n";
    return kOk;
  }

  out << man.comment() << "\n";
  out << "lambda,inside,lo,hi,lo_approx,hi_approx,complete,unresolved";
  if (certs) out << ",lo_certificate,hi_certificate";
  out << "\n";
  for (const auto& r : rows) {
    const bool complete = !r.bracket || r.bracket->complete();
    out << r.lambda.to_string() << "," << (r.inside ? 1 : 0) << "," << r.lo.to_string() << "," << r.hi.to_string()
        << "," << format_double(r.lo.to_double()) << "," << format_double(r.hi.to_double()) << ","
        << (complete ? 1 : 0) << ","
        << (r.bracket && r.bracket->unresolved ? r.bracket->unresolved->to_string() : std::string());
    if (certs) {
      out << "," << csv_field(r.bracket ? certificate_text(r.bracket->lo_outcome) : "") << ","
          << csv_field(r.bracket ? certificate_text(r.bracket->hi_outcome) : "");
    }
    out << "\n";
  }
  return kOk;
}

int cmd_catalan(int d, const std::string& lambda_s, const std::string& rho_s, int k, bool upto,
                const std::string& mode_s, const std::string& z_s, int enclose_bits, Format fmt, std::ostream& out) {
  const ModelParams p(d, parse_flag("--lambda", lambda_s), parse_flag("--rho", rho_s));
  WeightMode mode;
  try {
    mode = WeightMode::parse(mode_s);
  } catch (const InvalidParameter& e) {
    throw UsageError(std::string("--mode: ") + e.what());
  }
  if (k < 0) throw UsageError("--k: must be >= 0");

  Manifest man{"catalan", {}, std::nullopt};
  man.add("d", std::to_string(d));
  man.add("lambda", p.lambda().to_string());
  man.add("rho", p.rho().to_string());
  man.add("k", std::to_string(k));
  man.add("mode", mode.to_string());

  if (!z_s.empty()) {
    const Rational z = parse_flag("--z", z_s);
    if (z.sign() < 0) throw UsageError("--z: must be >= 0");
    man.add("z", z.to_string());
    if (enclose_bits > 0) {
      man.add("enclose_bits", std::to_string(enclose_bits));
      const SeriesEnclosure e = partial_series_enclosure(p, z, k, mode, enclose_bits);
      const double ratio = k >= 1 ? e.terms[static_cast<std::size_t>(k)].mid().to_double() /
                                        e.terms[static_cast<std::size_t>(k) - 1].mid().to_double()
                                  : 0.0;
      if (fmt == Format::Json) {
        out << json{{"manifest", man.to_json()},
                    {"lo", e.sum.lo.to_double()},
                    {"hi", e.sum.hi.to_double()},
                    {"last_term_ratio", ratio}}
                   .dump()
            << "\n";
      } else {
        out << man.comment() << "\nterms,z,lo,hi,last_term_ratio\n"
            << k << "," << z.to_string() << "," << format_double(e.sum.lo.to_double()) << ","
            << format_double(e.sum.hi.to_double()) << "," << format_double(ratio) << "\n";
      }
      return kOk;
    }
    const Rational s = partial_series(p, z, k, mode);
    if (fmt == Format::Json) {
      out << json{{"manifest", man.to_json()}, {"partial_series", s.to_string()}, {"approx", s.to_double()}}.dump()
          << "\n";
    } else if (fmt == Format::Csv) {
      out << man.comment() << "\nterms,z,partial_series,approx\n"
          << k << "," << z.to_string() << "," << s.to_string() << "," << format_double(s.to_double()) << "\n";
    } else {
      out << man.comment() << "\n" << s.to_string() << "\n";
    }
    return kOk;
  }

  const auto seq = weighted_catalan_sequence(p, k, mode);
  const int first = upto ? 0 : k;
  if (fmt == Format::Json) {
    json rows = json::array();
    for (int i = first; i <= k; ++i) {
      const auto& v = seq[static_cast<std::size_t>(i)];
      rows.push_back({{"k", i}, {"value", v.to_string()}, {"approx", v.to_double()}});
    }
    out << json{{"manifest", man.to_json()}, {"rows", rows}}.dump() << "\n";
  } else if (fmt == Format::Csv) {
    out << man.comment() << "\nk,value,approx\n";
    for (int i = first; i <= k; ++i) {
      const auto& v = seq[static_cast<std::size_t>(i)];
      out << i << "," << v.to_string() << "," << format_double(v.to_double()) << "\n";
    }
  } else {
    out << man.comment() << "\n";
    for (int i = first; i <= k; ++i) {
      if (upto) out << i << " ";
      out << seq[static_cast<std::size_t>(i)].to_string() << "\n";
    }
  }
  return kOk;
}

int cmd_phase(int d, const std::string& lambda_s, const std::string& rho_s, int max_m, Format fmt,
              std::ostream& out) {
  const ModelParams p(d, parse_flag("--lambda", lambda_s), parse_flag("--rho", rho_s));
  Manifest man{"phase", {}, std::nullopt};
  man.add("d", std::to_string(d));
  man.add("lambda", p.lambda().to_string());
  man.add("rho", p.rho().to_string());
  man.add("max_m", std::to_string(max_m));
  const PhaseLabel label = classify_phase(p, max_m);
  if (fmt == Format::Json) {
    out << json{{"manifest", man.to_json()}, {"phase", to_string(label)}}.dump() << "\n";
  } else if (fmt == Format::Csv) {
    out << man.comment() << "\nphase\n" << to_string(label) << "\n";
  } else {
    out << man.comment() << "\n" << to_string(label) << "\n";
  }
  return kOk;
}

int cmd_sim_line(const std::string& lambda_s, const std::string& rho_s, bool allow_decimal, int k_max,
                 std::uint64_t trials, std::uint64_t seed, Format fmt, unsigned threads, std::ostream& out) {
  const ModelParams p(2, parse_flag("--lambda", lambda_s, allow_decimal), parse_flag("--rho", rho_s, allow_decimal));
  if (k_max < 1) throw UsageError("--k-max: must be >= 1");
  if (trials < 1) throw UsageError("--trials: must be >= 1");
  Manifest man{"simulate line", {}, seed};
  man.add("lambda", p.lambda().to_string());
  man.add("rho", p.rho().to_string());
  man.add("k_max", std::to_string(k_max));
  man.add("trials", std::to_string(trials));

  const LineSummary s = simulate_line(p, trials, k_max, seed, threads);
  const RenewalComparison cmp = compare_renewals(p, s, k_max);

  if (fmt == Format::Json) {
    json rows = json::array();
    for (const auto& r : cmp.rows) {
      json jr = {{"k", r.k},
                 {"count", s.renewal_counts[static_cast<std::size_t>(r.k)]},
                 {"frequency", r.frequency},
                 {"exact", r.exact},
                 {"y_tail", s.y_tail_frequency(r.k)}};
      if (r.k == 0) {
        jr["exact_match"] = r.exact_match;
      } else {
        jr["se"] = r.se;
        jr["z"] = r.z;
      }
      rows.push_back(std::move(jr));
    }
    out << json{{"manifest", man.to_json()},
                {"renewals", rows},
                {"max_abs_z", cmp.max_abs_z},
                {"y_histogram", s.y_histogram},
                {"absorption", {{"death", s.absorbed_death}, {"caught", s.absorbed_caught}, {"truncated", s.truncated}}},
                {"first_jump", {{"advance", s.first_advance}, {"fall", s.first_fall}, {"death", s.first_death}}}}
               .dump()
        << "\n";
    return kOk;
  }

  out << man.comment() << "\n";
  out << "k,count,frequency,se,exact,z,y_tail\n";
  for (const auto& r : cmp.rows) {
    out << r.k << "," << s.renewal_counts[static_cast<std::size_t>(r.k)] << "," << format_double(r.frequency) << ",";
    if (r.k == 0) {
      out << ",1," << (r.exact_match ? "exact" : "mismatch");
    } else {
      out << format_double(r.se) << "," << format_double(r.exact) << "," << format_double(r.z);
    }
    out << "," << format_double(s.y_tail_frequency(r.k)) << "\n";
  }
  out << "# max_abs_z=" << format_double(cmp.max_abs_z) << " absorbed_death=" << s.absorbed_death
      << " absorbed_caught=" << s.absorbed_caught << " truncated=" << s.truncated << "\n";
  return kOk;
}

int cmd_sim_tree(int d, const std::string& lambda_s, const std::string& rho_s, bool allow_decimal, int depth,
                 std::uint64_t trials, std::uint64_t seed, std::size_t max_vertices, Format fmt, unsigned threads,
                 std::ostream& out) {
  const ModelParams p(d, parse_flag("--lambda", lambda_s, allow_decimal), parse_flag("--rho", rho_s, allow_decimal));
  if (depth < 1) throw UsageError("--depth: must be >= 1");
  if (trials < 1) throw UsageError("--trials: must be >= 1");
  Manifest man{"simulate tree", {}, seed};
  man.add("d", std::to_string(d));
  man.add("lambda", p.lambda().to_string());
  man.add("rho", p.rho().to_string());
  man.add("depth", std::to_string(depth));
  man.add("trials", std::to_string(trials));
  man.add("max_vertices", std::to_string(max_vertices));

  TreeSimOptions options;
  options.max_vertices = max_vertices;
  const TreeSummary s = simulate_tree(p, depth, trials, seed, threads, options);
  const auto catalan = weighted_catalan_sequence(p, depth - 1);

  auto expected = [&](int k) { return (pow(Rational(d), static_cast<unsigned>(k)) * catalan[static_cast<std::size_t>(k)]).to_double(); };

  if (fmt == Format::Json) {
    json rows = json::array();
    for (int k = 0; k < depth; ++k) {
      rows.push_back({{"level", k},
                      {"renewal_mean", s.renewal_mean(k)},
                      {"renewal_se", s.renewal_se(k)},
                      {"expected", expected(k)},
                      {"strict_renewal_mean", s.strict_renewal_mean(k)},
                      {"strict_renewal_se", s.strict_renewal_se(k)}});
    }
    out << json{{"manifest", man.to_json()},
                {"levels", rows},
                {"blue_reach_cap_frequency", s.blue_reach_frequency()},
                {"red_reach_cap_frequency", s.red_reach_frequency()},
                {"mean_blue_count", s.mean_blue_count()}}
               .dump()
        << "\n";
    return kOk;
  }
  out << man.comment() << "\n";
  out << "level,renewal_mean,renewal_se,expected,strict_renewal_mean,strict_renewal_se\n";
  for (int k = 0; k < depth; ++k) {
    out << k << "," << format_double(s.renewal_mean(k)) << "," << format_double(s.renewal_se(k)) << ","
        << format_double(expected(k)) << "," << format_double(s.strict_renewal_mean(k)) << ","
        << format_double(s.strict_renewal_se(k)) << "\n";
  }
  out << "# blue_reach_cap_frequency=" << format_double(s.blue_reach_frequency())
      << " red_reach_cap_frequency=" << format_double(s.red_reach_frequency())
      << " mean_blue_count=" << format_double(s.mean_blue_count()) << "\n";
  return kOk;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified computations and simulations for chase-escape with death on d-ary trees", "ced"};
  app.set_version_flag("--version", CED_VERSION);
  app.require_subcommand(1);

  int d = 2;
  std::string lambda_s;
  std::string rho_s;
  int max_m = kDefaultMaxM;
  Common common;

  auto* decide_cmd = app.add_subcommand("decide", "Certify whether rho is below or above rho_c");
  bool decide_json = false;
  decide_cmd->add_option("--d", d, "Branching factor")->required();
  decide_cmd->add_option("--lambda", lambda_s, "Spread rate p/q")->required();
  decide_cmd->add_option("--rho", rho_s, "Death rate p/q")->required();
  decide_cmd->add_option("--max-m", max_m, "Largest truncation level");
  decide_cmd->add_flag("--json", decide_json, "JSON output");

  auto* rho_c_cmd = app.add_subcommand("rho-c", "Bracket rho_c by certified bisection");
  std::string grid_s;
  std::string tol_s = "1/1024";
  bool certs = false;
  rho_c_cmd->add_option("--d", d, "Branching factor")->required();
  rho_c_cmd->add_option("--lambda", lambda_s, "Single spread rate p/q");
  rho_c_cmd->add_option("--lambda-grid", grid_s, "Grid lo:hi:n of spread rates");
  rho_c_cmd->add_option("--tol", tol_s, "Bracket width p/q");
  rho_c_cmd->add_option("--max-m", max_m, "Largest truncation level");
  rho_c_cmd->add_flag("--certs", certs, "Embed endpoint certificates");
  rho_c_cmd->add_option("--format", common.format, "csv or json")->default_str("csv");
  rho_c_cmd->add_option("--threads", common.threads, "Worker threads (fallback: CEL_THREADS)");

  auto* catalan_cmd = app.add_subcommand("catalan", "Weighted Catalan numbers and partial series");
  int k = 0;
  bool upto = false;
  std::string mode_s = "exact";
  std::string z_s;
  catalan_cmd->add_option("--d", d, "Branching factor (only validated)");
  catalan_cmd->add_option("--lambda", lambda_s, "Spread rate p/q")->required();
  catalan_cmd->add_option("--rho", rho_s, "Death rate p/q")->required();
  catalan_cmd->add_option("--k", k, "Half-length (or number of series terms with --z)")->required();
  catalan_cmd->add_flag("--upto", upto, "Print C_0..C_k");
  catalan_cmd->add_option("--mode", mode_s, "exact, capped:<m> or flat:<m>");
  catalan_cmd->add_option("--z", z_s, "Evaluate sum_{j<=k} C_j z^j instead");
  int enclose_bits = 0;
  catalan_cmd->add_option("--enclose", enclose_bits, "With --z: fixed-point enclosure with this many fraction bits");
  catalan_cmd->add_option("--format", common.format, "text, csv or json");

  auto* phase_cmd = app.add_subcommand("phase", "Classify coexistence / escape / extinction");
  phase_cmd->add_option("--d", d, "Branching factor")->required();
  phase_cmd->add_option("--lambda", lambda_s, "Spread rate p/q")->required();
  phase_cmd->add_option("--rho", rho_s, "Death rate p/q")->required();
  phase_cmd->add_option("--max-m", max_m, "Largest truncation level");
  phase_cmd->add_option("--format", common.format, "text, csv or json");

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo runs");
  sim_cmd->require_subcommand(1);
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  bool allow_decimal = false;
  int k_max = 6;
  int depth = 8;
  std::size_t max_vertices = TreeSimOptions{}.max_vertices;

  auto* line_cmd = sim_cmd->add_subcommand("line", "Jump chain on the half-line");
  line_cmd->add_option("--lambda", lambda_s, "Spread rate")->required();
  line_cmd->add_option("--rho", rho_s, "Death rate")->required();
  line_cmd->add_option("--k-max", k_max, "Largest blue position tracked");
  line_cmd->add_option("--trials", trials, "Number of trials");
  line_cmd->add_option("--seed", seed, "Seed")->required();
  line_cmd->add_flag("--allow-decimal", allow_decimal, "Accept decimal rates");
  line_cmd->add_option("--format", common.format, "csv or json")->default_str("csv");
  line_cmd->add_option("--threads", common.threads, "Worker threads (fallback: CEL_THREADS)");

  auto* tree_cmd = sim_cmd->add_subcommand("tree", "Continuous-time process on the depth-capped tree");
  tree_cmd->add_option("--d", d, "Branching factor")->required();
  tree_cmd->add_option("--lambda", lambda_s, "Spread rate")->required();
  tree_cmd->add_option("--rho", rho_s, "Death rate")->required();
  tree_cmd->add_option("--depth", depth, "Depth cap");
  tree_cmd->add_option("--trials", trials, "Number of trials");
  tree_cmd->add_option("--seed", seed, "Seed")->required();
  tree_cmd->add_option("--max-vertices", max_vertices, "Per-trial vertex budget");
  tree_cmd->add_flag("--allow-decimal", allow_decimal, "Accept decimal rates");
  tree_cmd->add_option("--format", common.format, "csv or json")->default_str("csv");
  tree_cmd->add_option("--threads", common.threads, "Worker threads (fallback: CEL_THREADS)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << CED_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "ced: " << e.what() << "\n";
    return kUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  std::string which;
  int code = kOk;
  try {
    const bool csv_default = rho_c_cmd->parsed() || sim_cmd->parsed();
    const Format fmt = common.format == "text" && csv_default ? Format::Csv : parse_format(common.format);
    const unsigned threads = resolve_threads(common.threads);
    if (decide_cmd->parsed()) {
      which = "decide";
      code = cmd_decide(d, lambda_s, rho_s, max_m, decide_json, out);
    } else if (rho_c_cmd->parsed()) {
      which = "rho-c";
      code = cmd_rho_c(d, lambda_s, grid_s, tol_s, max_m, certs, fmt, threads, out);
    } else if (catalan_cmd->parsed()) {
      which = "catalan";
      code = cmd_catalan(d, lambda_s, rho_s, k, upto, mode_s, z_s, enclose_bits, fmt, out);
    } else if (phase_cmd->parsed()) {
      which = "phase";
      code = cmd_phase(d, lambda_s, rho_s, max_m, fmt, out);
    } else if (line_cmd->parsed()) {
      which = "simulate line";
      code = cmd_sim_line(lambda_s, rho_s, allow_decimal, k_max, trials, seed, fmt, threads, out);
    } else if (tree_cmd->parsed()) {
      which = "simulate tree";
      code = cmd_sim_tree(d, lambda_s, rho_s, allow_decimal, depth, trials, seed, max_vertices, fmt, threads, out);
    }
  } catch (const UsageError& e) {
    err << "ced: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidParameter& e) {
    err << "ced: " << e.what() << "\n";
    return kUsage;
  } catch (const OutsideLambdaInterval& e) {
    err << "ced: " << e.what() << "\n";
    return kDomain;
  } catch (const ResourceError& e) {
    err << "ced: " << e.what() << "\n";
    return kResource;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  err << "ced: " << which << " finished in " << format_double(elapsed.count()) << " s\n";
  return code;
}

}  // namespace ced::cli
