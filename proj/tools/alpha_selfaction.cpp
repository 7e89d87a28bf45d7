#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "selfaction/acceptance.hpp"
#include "selfaction/damped_integrals.hpp"
#include "selfaction/densities.hpp"
#include "selfaction/eigen_solver.hpp"
#include "selfaction/errors.hpp"
#include "selfaction/oracle.hpp"
#include "selfaction/parallel.hpp"
#include "selfaction/reference_iterates.hpp"
#include "selfaction/series_solver.hpp"

namespace {

using namespace selfaction;
using json = nlohmann::json;

constexpr int kTextDigits = 12;

struct Options {
  int order = 2;
  double alpha = 0.0073;
  double beta = std::numeric_limits<double>::quiet_NaN();
  double tol = 1e-12;
  std::vector<double> bracket;
  std::string mode;
  int samples = 512;
  std::string format = "csv";
  std::string out;
  int threads = 0;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::monostate, long long, double, std::string, bool>;

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isnan(v)) return "";
          std::ostringstream os;
          os << std::setprecision(kTextDigits) << (v == 0 ? 0.0 : v);
          return os.str();
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? json(v) : json(nullptr);
        } else {
          return v;
        }
      },
      c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
      os << '\n';
    }
    return os.str();
  }

  json records() const {
    json arr = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[columns[i]] = cell_json(row[i]);
      arr.push_back(obj);
    }
    return arr;
  }

  std::string text() const {
    std::vector<std::size_t> width(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) width[i] = columns[i].size();
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], cell_text(row[i]).size());
    }
    std::ostringstream os;
    auto line = [&](auto get) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        const std::string s = get(i);
        os << (i ? "  " : "") << s << (i + 1 < columns.size() ? std::string(width[i] - s.size(), ' ') : "");
      }
      os << '\n';
    };
    line([&](std::size_t i) { return columns[i]; });
    for (const auto& row : rows) line([&](std::size_t i) { return cell_text(row[i]); });
    return os.str();
  }
};

/// Single record: "key = value" lines in text, one-row CSV, object in JSON.
struct Record {
  std::vector<std::pair<std::string, Cell>> fields;

  void add(std::string key, Cell value) { fields.emplace_back(std::move(key), std::move(value)); }

  Table table() const {
    Table t;
    t.rows.emplace_back();
    for (const auto& [k, v] : fields) {
      t.columns.push_back(k);
      t.rows[0].push_back(v);
    }
    return t;
  }

  json object() const {
    json obj = json::object();
    for (const auto& [k, v] : fields) obj[k] = cell_json(v);
    return obj;
  }

  std::string text() const {
    std::ostringstream os;
    for (const auto& [k, v] : fields) os << k << " = " << cell_text(v) << '\n';
    return os.str();
  }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string render(const Table& t, const std::string& format) {
  if (format == "json") return dump(t.records());
  if (format == "text") return t.text();
  return t.csv();
}

std::string render(const Record& r, const std::string& format) {
  if (format == "json") return dump(r.object());
  if (format == "text") return r.text();
  return r.table().csv();
}

struct Output {
  std::string body;
  int exit_code = 0;
};

void require_order(const Options& o, int lowest) {
  if (o.order < lowest) throw UsageError("--order must be at least " + std::to_string(lowest));
}

double beta_or_default(const Options& o) { return std::isnan(o.beta) ? o.alpha * o.alpha / 8 : o.beta; }

// subcommands

Output cmd_series(const Options& o) {
  require_order(o, 0);
  const SolutionFamily first = generate_family(FamilyKind::first, o.order);
  const SolutionFamily second = generate_family(FamilyKind::second, o.order);
  std::vector<std::pair<std::string, const LogPolySeries*>> items;
  for (int k = 0; k <= o.order; ++k) {
    items.emplace_back("F" + std::to_string(k), &first.upper[static_cast<std::size_t>(k)]);
    items.emplace_back("G" + std::to_string(k), &first.lower[static_cast<std::size_t>(k)]);
  }
  for (int k = 0; k <= o.order; ++k) {
    items.emplace_back("f" + std::to_string(k), &second.upper[static_cast<std::size_t>(k)]);
    items.emplace_back("g" + std::to_string(k), &second.lower[static_cast<std::size_t>(k)]);
  }
  if (o.format == "json") {
    json j = json::object();
    for (const auto& [label, s] : items) j[label] = to_json(*s);
    return {dump(j)};
  }
  if (o.format == "text") {
    std::string out;
    for (const auto& [label, s] : items) out += label + " = " + to_text(*s) + "\n";
    return {out};
  }
  Table t{{"label", "num", "den", "alpha_pow", "s_pow", "log_pow"}, {}};
  for (const auto& [label, s] : items) {
    for (const Term& term : s->terms()) {
      t.rows.push_back({label, term.coeff.get_num().get_str(), term.coeff.get_den().get_str(),
                        static_cast<long long>(term.alpha_pow), static_cast<long long>(term.s_pow),
                        static_cast<long long>(term.log_pow)});
    }
  }
  return {t.csv()};
}

Output cmd_check_coefficients(const Options& o) {
  require_order(o, 0);
  const std::vector<CoefficientCheck> checks = check_coefficients(o.order);
  int failures = 0;
  for (const auto& c : checks) failures += c.matched ? 0 : 1;
  Output out;
  out.exit_code = failures == 0 && !checks.empty() ? 0 : 1;
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& c : checks) arr.push_back(to_json(c));
    out.body = dump({{"order", o.order}, {"all_matched", out.exit_code == 0}, {"checks", arr}});
  } else if (o.format == "text") {
    for (const auto& c : checks) out.body += to_text(c) + "\n";
    out.body += std::to_string(checks.size() - static_cast<std::size_t>(failures)) + "/" +
                std::to_string(checks.size()) + " matched\n";
  } else {
    Table t{{"label", "partial", "matched", "mismatches", "reference"}, {}};
    for (const auto& c : checks) {
      t.rows.push_back({c.label, c.partial, c.matched, static_cast<long long>(c.mismatches.size()), c.description});
    }
    out.body = t.csv();
  }
  return out;
}

Output cmd_products(const Options& o) {
  require_order(o, 0);
  const SolutionFamily first = generate_family(FamilyKind::first, o.order);
  const SolutionFamily second = generate_family(FamilyKind::second, o.order);
  const std::vector<std::pair<std::string, LogPolySeries>> items{
      {"GG", product_density(first, second, ProductKind::GG).normalized()},
      {"FF", product_density(first, second, ProductKind::FF).normalized()},
  };
  if (o.format == "json") {
    json j = json::object();
    for (const auto& [label, s] : items) j[label] = to_json(s);
    return {dump(j)};
  }
  if (o.format == "text") {
    return {"(2/α)s²G̃g̃ = " + to_text(items[0].second) + "\n(6/α)s²F̃f̃ = " + to_text(items[1].second) + "\n"};
  }
  Table t{{"product", "num", "den", "alpha_pow", "s_pow", "log_pow"}, {}};
  for (const auto& [label, s] : items) {
    for (const Term& term : s.terms()) {
      t.rows.push_back({label, term.coeff.get_num().get_str(), term.coeff.get_den().get_str(),
                        static_cast<long long>(term.alpha_pow), static_cast<long long>(term.s_pow),
                        static_cast<long long>(term.log_pow)});
    }
  }
  return {t.csv()};
}

Output cmd_densities(const Options& o) {
  const std::vector<OperatorCheck> ops = check_density_operators();
  const std::vector<TableCheck> tables = check_density_tables();
  Table op_table{{"operator", "label", "computed", "printed", "matches_printed", "survives"}, {}};
  for (const auto& c : ops) {
    op_table.rows.push_back({c.op->id, c.op->label, density_text(c.computed), c.op->printed_text, c.matches_printed,
                             c.survives});
  }
  Table entry_table{{"particle", "row", "twice_m", "computed", "matched"}, {}};
  for (const auto& c : tables) {
    entry_table.rows.push_back({std::string(to_string(c.printed.particle)), c.printed.row,
                                static_cast<long long>(c.printed.twice_m), table_entry_text(c.computed.table_terms()),
                                c.matched});
  }
  if (o.format == "json") return {dump({{"operators", op_table.records()}, {"tables", entry_table.records()}})};
  if (o.format == "text") return {op_table.text() + "\n" + entry_table.text()};
  return {entry_table.csv()};
}

Output cmd_moments(const Options& o) {
  std::vector<double> etas{1e-2, 1e-4, 1e-6};
  if (!std::isnan(o.beta)) etas = {2 * o.beta};
  Table t{{"p", "q", "eta", "exact", "quadrature", "paper_approximation", "abs_diff"}, {}};
  for (double eta : etas) {
    for (int p = -3; p <= 2; ++p) {
      for (int q = 0; q <= 2; ++q) {
        const double exact = damped_moment({p, q, eta}, MomentMode::exact, o.tol);
        const double quad = damped_moment({p, q, eta}, MomentMode::quadrature, o.tol);
        const double approx = moment_small_eta_form(p, q, eta);
        t.rows.push_back({static_cast<long long>(p), static_cast<long long>(q), eta, exact, quad,
                          std::isnan(approx) ? Cell{} : Cell{approx}, std::abs(exact - quad)});
      }
    }
  }
  return {render(t, o.format)};
}

Output cmd_beta(const Options& o) {
  BetaOptions opts;
  opts.tol = o.tol;
  opts.order = o.order;
  if (!o.mode.empty()) opts.moment_mode = moment_mode_from_string(o.mode);
  if (o.bracket.size() == 2) {
    opts.bracket_lo = o.bracket[0];
    opts.bracket_hi = o.bracket[1];
  }
  const BetaResult r = solve_beta(o.alpha, opts);
  Record rec;
  rec.add("alpha", r.alpha);
  rec.add("beta_asymptotic", r.beta_asymptotic);
  rec.add("beta_numeric", r.beta_numeric);
  rec.add("beta_full_series", r.beta_full_series);
  rec.add("ratio_numeric", r.beta_numeric / r.beta_asymptotic);
  rec.add("ratio_full_series", r.beta_full_series / r.beta_asymptotic);
  rec.add("residual_numeric", r.residual_numeric);
  rec.add("residual_full_series", r.residual_full_series);
  return {render(rec, o.format)};
}

EigenConfig eigen_config(const Options& o) {
  EigenConfig cfg;
  cfg.mode = o.mode.empty() ? EigenMode::eq64_closed : eigen_mode_from_string(o.mode);
  cfg.series_order = o.order;
  cfg.tol = o.tol;
  if (o.bracket.size() == 2) {
    cfg.alpha_lo = o.bracket[0];
    cfg.alpha_hi = o.bracket[1];
  }
  return cfg;
}

Output cmd_alpha(const Options& o) {
  const EigenConfig cfg = eigen_config(o);
  if (cfg.mode == EigenMode::full_series) require_order(o, 1);
  const AlphaResult r = solve_alpha(cfg);
  const EigenTerms& t = r.terms;
  Record rec;
  rec.add("mode", std::string(to_string(r.mode)));
  rec.add("series_order", static_cast<long long>(r.series_order));
  rec.add("alpha", r.alpha_root);
  rec.add("beta", r.beta_implied);
  rec.add("iterations", static_cast<long long>(r.iterations));
  rec.add("omega1", t.omega1);
  rec.add("omega2", t.omega2);
  rec.add("lambda", t.lambda);
  rec.add("integral_A", t.integral_A);
  rec.add("integral_B", t.integral_B);
  rec.add("integral_lambda", t.integral_lambda);
  rec.add("omega1_term", t.omega1_term());
  rec.add("omega2_term", t.omega2_term());
  rec.add("lambda_term", t.rhs());
  rec.add("residual", t.residual());
  rec.add("measured_alpha", 0.0072973525693);
  return {render(rec, o.format)};
}

Output cmd_refine(const Options& o) {
  require_order(o, 1);
  const RefinementTable table = refine_alpha(o.order, eigen_config(o));
  if (o.format == "json") return {dump(to_json(table))};
  Table t{{"order", "mode", "alpha", "beta", "difference", "ratio", "iterations"}, {}};
  for (const RefinementRow& r : table.rows) {
    t.rows.push_back({static_cast<long long>(r.order), std::string(to_string(r.mode)), r.alpha, r.beta, r.difference,
                      r.ratio, static_cast<long long>(r.iterations)});
  }
  std::string body = render(t, o.format);
  if (o.format == "text") {
    std::ostringstream os;
    os << std::setprecision(kTextDigits) << "final alpha = " << table.final_alpha
       << "\nuncertainty = " << table.uncertainty << '\n';
    body += os.str();
  }
  return {body};
}

Output cmd_fig1(const Options& o) {
  if (o.samples < 2) throw UsageError("--samples must be at least 2");
  const Fig1Data d = fig1_data(o.alpha, beta_or_default(o), o.samples, o.order);
  if (o.format == "json") {
    Table t{{"s", "F", "G", "f", "g", "Gg", "Ff"}, {}};
    for (const Fig1Row& r : d.rows) t.rows.push_back({r.s, r.F, r.G, r.f, r.g, r.Gg, r.Ff});
    return {dump({{"alpha", d.alpha}, {"beta", d.beta}, {"g_zeros", d.g_zeros}, {"rows", t.records()}})};
  }
  if (o.format == "text") {
    std::ostringstream os;
    os << std::setprecision(kTextDigits) << "alpha = " << d.alpha << "\nbeta = " << d.beta << "\nrows = "
       << d.rows.size() << '\n';
    for (double z : d.g_zeros) os << "G zero at s = " << z << ", s^2/(alpha^2/12) = " << z * z / (d.alpha * d.alpha / 12) << '\n';
    return {os.str()};
  }
  return {fig1_csv(d, kTextDigits)};
}

Output cmd_verify(const Options& o) {
  const std::vector<CriterionResult> results = run_acceptance();
  Output out;
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  out.exit_code = all ? 0 : 1;
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& r : results) arr.push_back(to_json(r));
    out.body = dump({{"all_passed", all}, {"criteria", arr}});
  } else if (o.format == "text") {
    for (const auto& r : results) out.body += format_result(r) + "\n";
  } else {
    Table t{{"id", "name", "passed", "detail"}, {}};
    for (const auto& r : results) t.rows.push_back({static_cast<long long>(r.id), r.name, r.passed, r.detail});
    out.body = t.csv();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-consistent series solutions and the coupling-constant eigenvalue condition"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "text"}))
      ->capture_default_str();
  app.add_option("--out", o.out, "Write output to this file instead of stdout");
  app.add_option("--threads", o.threads, "Worker threads (fallback: ALPHA_SELFACTION_THREADS)")
      ->check(CLI::PositiveNumber);

  struct Sub {
    const char* name;
    const char* help;
    Output (*run)(const Options&);
  };
  const std::vector<Sub> subs{
      {"series", "Iterates of both solution families", cmd_series},
      {"check-coefficients", "Compare iterates with the reference closed forms", cmd_check_coefficients},
      {"products", "Normalized product densities", cmd_products},
      {"densities", "Bilinear density operators and angular tables", cmd_densities},
      {"moments", "Damped moments, exact against quadrature", cmd_moments},
      {"beta", "Solve the beta condition in all modes", cmd_beta},
      {"alpha", "Root of the eigenvalue condition", cmd_alpha},
      {"refine", "Closed-form root followed by full-series refinement", cmd_refine},
      {"fig1", "Sampled radial functions", cmd_fig1},
      {"verify", "Run every acceptance criterion", cmd_verify},
  };
  std::vector<CLI::App*> handles;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--order", o.order, "Series order")->check(CLI::NonNegativeNumber);
    sub->add_option("--alpha", o.alpha, "Coupling alpha")->check(CLI::PositiveNumber);
    sub->add_option("--beta", o.beta, "Coupling beta (default alpha^2/8)")->check(CLI::PositiveNumber);
    sub->add_option("--tol", o.tol, "Tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--bracket", o.bracket, "Root bracket LO HI")->expected(2);
    sub->add_option("--mode", o.mode, "Mode");
    sub->add_option("--samples", o.samples, "Number of samples");
    handles.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (o.threads > 0) set_thread_count(o.threads);
    if (o.bracket.size() == 2 && !(o.bracket[0] < o.bracket[1])) throw UsageError("--bracket needs LO < HI");
    Output out;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (handles[i]->parsed()) out = subs[i].run(o);
    }
    if (o.out.empty()) {
      std::cout << out.body;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw UsageError("cannot open --out " + o.out);
      file << out.body;
    }
    return out.exit_code;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
