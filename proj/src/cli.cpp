#include "eslab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>

#include "eslab/circle_method.hpp"
#include "eslab/diophantine.hpp"
#include "eslab/expsums.hpp"
#include "eslab/parallel.hpp"
#include "eslab/phase.hpp"
#include "eslab/vinogradov.hpp"

namespace eslab {

namespace {

constexpr const char* kFooter = R"(Reports:
  csv   header line, then one line per row; RFC 4180 quoting; reals printed
        with 17 significant digits, '.' as decimal point.
  json  array of objects with keys in column order (waring: one object).
Windows are (N, N+H] with N <= 2^62 and N + H <= 2^63; H is given directly
or as floor(N^theta). Angles accept decimals, "a/q" and 0x-prefixed hex.
Environment: ESLAB_CACHE overrides --cache for sieve tables.
Exit codes: 0 success, 1 internal error, 2 usage error, 3 budget exceeded, 4 I/O error.)";

void add_window_options(CLI::App* sub, std::uint64_t& N, std::uint64_t& H, double& theta, bool need_N) {
  auto* n = sub->add_option("--N", N, "window start N");
  if (need_N) n->required();
  auto* h = sub->add_option("--H", H, "window length H");
  auto* t = sub->add_option("--theta", theta, "H = floor(N^theta), theta in (0, 1]");
  h->excludes(t);
}

void add_common_options(CLI::App* sub, RunConfig& c, std::string& format) {
  sub->add_option("--output,-o", c.output, "report path, '-' for stdout");
  sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", c.threads, "worker threads, 0 = all cores");
  sub->add_option("--cache", c.cache_dir, "directory for cached sieve tables");
  sub->add_option("--seed", c.seed, "seed for randomized choices");
  sub->add_flag("--quiet", c.quiet, "no progress output");
}

std::string cache_directory(const RunConfig& c) {
  if (const char* env = std::getenv("ESLAB_CACHE"); env != nullptr && *env != '\0') return env;
  return c.cache_dir;
}

PolynomialPhase configured_phase(const RunConfig& c, std::int64_t base) {
  if (!c.coeffs.empty()) {
    std::vector<Angle> coeffs;
    for (const auto& text : c.coeffs) coeffs.push_back(Angle::parse(text));
    return PolynomialPhase(base, std::move(coeffs));
  }
  return monomial_to_shifted(Angle::parse(c.alpha), c.k, base);
}

Angle leading_coefficient(const RunConfig& c, const PolynomialPhase& phase) {
  if (!c.coeffs.empty()) return phase.coeff(phase.degree());
  return Angle::parse(c.alpha);
}

double log_n(const Window& w) { return std::log(static_cast<double>(std::max<std::uint64_t>(w.start(), 3))); }

void add_sum(ReportRow& row, const std::string& prefix, const ExpSumResult& r) {
  row.add(prefix + "_re", r.value.real());
  row.add(prefix + "_im", r.value.imag());
  row.add(prefix + "_normalized", r.normalized);
}

std::string component_label(const HbComponent& c) {
  std::string out;
  for (std::size_t i = 0; i < c.dyadic.size(); ++i) out += (i ? "." : "") + std::to_string(c.dyadic[i]);
  return out;
}

std::string kind_label(HbCase kind) {
  switch (kind) {
    case HbCase::kTypeI:
      return "type_I";
    case HbCase::kTypeILog:
      return "type_I_log";
    case HbCase::kTypeII:
      return "type_II";
  }
  return "?";
}

struct ScanPoint {
  std::vector<Angle> coeffs;
  std::vector<std::string> labels;
};

std::string perturb_label(std::uint64_t a, std::uint64_t q, double c, const std::string& scale) {
  std::string out = std::to_string(a) + "/" + std::to_string(q);
  if (c != 0.0) out += (c > 0 ? "+" : "") + format_number(c) + scale;
  return out;
}

}  // namespace

Window RunConfig::window() const {
  if (!N) throw UsageError("--N is required");
  if (H) return Window(*N, *H);
  if (theta) return Window::from_theta(*N, *theta);
  throw UsageError("one of --H or --theta is required");
}

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app{"Exponential sums over short intervals and the short-interval Waring-Goldbach circle method",
               "eslab"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  std::uint64_t N = 0;
  std::uint64_t H = 0;
  double theta = 0.0;
  std::string format;
  std::string alpha;
  std::string coeffs;
  std::string perturb;
  std::string B_text;
  std::int64_t n0 = 0;
  bool no_perturb = false;

  auto* sieve = app.add_subcommand("sieve", "per-n Lambda, mu and factor data over a window");
  add_window_options(sieve, N, H, theta, true);

  auto* expsum = app.add_subcommand("expsum", "Lambda, mu and unit sums with a polynomial phase");
  add_window_options(expsum, N, H, theta, true);
  expsum->add_option("--k", c.k, "degree of the monomial phase alpha n^k");
  expsum->add_option("--alpha", alpha, "monomial coefficient");
  expsum->add_option("--coeffs", coeffs, "comma-separated a_1..a_k of sum a_j (n - N)^j");
  expsum->add_option("--qmax", c.q_max, "denominator bound for rational approximation");
  expsum->add_option("--A", c.A, "major arcs use Q = (log N)^A");

  auto* scan = app.add_subcommand("scan", "Farey-plus-perturbation grid of phases");
  add_window_options(scan, N, H, theta, true);
  scan->add_option("--k", c.k, "degree");
  scan->add_option("--farey", c.farey, "Farey order F");
  scan->add_option("--perturb", perturb, "comma-separated multipliers c of c/H^j");
  scan->add_flag("--no-perturb", no_perturb, "exact Farey points only");
  scan->add_flag("--monomial", c.monomial, "grid over alpha in alpha n^k instead of per-coefficient");
  scan->add_option("--qmax", c.q_max, "q bound for the simultaneous search");
  scan->add_option("--A", c.A, "major arcs use Q = (log N)^A");

  auto* hb = app.add_subcommand("hb-verify", "Heath-Brown decomposition with per-component sums");
  add_window_options(hb, N, H, theta, true);
  hb->add_option("--target", c.target, "lambda or mu")->check(CLI::IsMember({"lambda", "mu"}));
  hb->add_option("--k", c.k, "degree of the monomial phase");
  hb->add_option("--alpha", alpha, "monomial coefficient");
  hb->add_option("--coeffs", coeffs, "comma-separated shifted coefficients");

  auto* waring = app.add_subcommand("waring", "circle-method data for N = p_1^k + ... + p_s^k");
  waring->add_option("--N", N, "target N")->required();
  waring->add_option("--k", c.k, "power k");
  waring->add_option("--s", c.s, "number of primes s");
  waring->add_option("--theta", theta, "H = round(X^theta), X = round((N/s)^(1/k))")->required();
  waring->add_option("--qmax", c.q_max, "singular series truncation");
  waring->add_option("--limit", c.limit, "maximum representations listed");
  waring->add_option("--batch", c.batch, "draw this many admissible N near --N instead");

  auto* vmvt = app.add_subcommand("vmvt", "exact Vinogradov system counts J_{t,k}(H)");
  vmvt->add_option("--t", c.t, "number of variables per side");
  vmvt->add_option("--k", c.k, "number of equations");
  vmvt->add_option("--H", c.H_list, "range bounds, repeatable or comma separated")->required()->delimiter(',');

  auto* nit = app.add_subcommand("nit", "n^(it) model of the Taylor phase of t0 log n / 2 pi");
  add_window_options(nit, N, H, theta, true);
  nit->add_option("--k", c.k, "Taylor degree");
  nit->add_option("--t0", c.t0, "frequency to recover")->required();
  nit->add_option("--q", c.q, "rational-part modulus q");
  nit->add_option("--A", c.A, "deviation target (log N)^(-A-15)");
  nit->add_option("--B", B_text, "progression length H (log N)^(-B)");
  nit->add_option("--n0", n0, "progression start");

  for (auto* sub : {sieve, expsum, scan, hb, waring, vmvt, nit}) add_common_options(sub, c, format);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    c.help = app.help();
    return c;
  } catch (const CLI::CallForAllHelp&) {
    c.help = app.help("", CLI::AppFormatMode::All);
    return c;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  c.subcommand = chosen->get_name();
  auto given = [&](const char* flag) {
    try {
      return chosen->count(flag) > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (given("--N")) c.N = N;
  if (given("--H") && c.subcommand != "vmvt") c.H = H;
  if (given("--theta")) {
    if (!(theta > 0.0 && theta <= 1.0)) throw UsageError("--theta must lie in (0, 1]");
    c.theta = theta;
    if (theta <= 2.0 / 3.0) c.notes.push_back("theta <= 2/3 is below the threshold of the log-power saving; exploratory only");
  }
  if (given("--alpha")) c.alpha = alpha;
  if (given("--coeffs")) {
    if (given("--alpha")) throw UsageError("--alpha and --coeffs are mutually exclusive");
    std::stringstream ss(coeffs);
    for (std::string part; std::getline(ss, part, ',');)
      if (!part.empty()) c.coeffs.push_back(part);
    if (c.coeffs.empty()) throw UsageError("--coeffs needs at least one coefficient");
  }
  if (no_perturb) c.perturb.clear();
  if (given("--perturb")) {
    if (no_perturb) throw UsageError("--perturb and --no-perturb are mutually exclusive");
    c.perturb.clear();
    std::stringstream ss(perturb);
    for (std::string part; std::getline(ss, part, ',');) {
      if (part.empty()) continue;
      try {
        c.perturb.push_back(std::stod(part));
      } catch (const std::exception&) {
        throw UsageError("--perturb: cannot parse '" + part + "'");
      }
    }
  }
  if (!B_text.empty()) {
    try {
      c.B = std::stod(B_text);
    } catch (const std::exception&) {
      throw UsageError("--B: cannot parse '" + B_text + "'");
    }
  }
  if (given("--n0")) c.n0 = n0;
  if (!format.empty()) {
    c.format = parse_format(format);
  } else if (c.subcommand == "waring") {
    c.format = ReportFormat::kJson;
  }
  if (c.subcommand == "waring" && c.format != ReportFormat::kJson) throw UsageError("waring writes json only");
  if (c.k < 1 || c.k > PolynomialPhase::kMaxDegree) throw UsageError("--k must lie in [1, 8]");

  const bool windowed = c.subcommand != "waring" && c.subcommand != "vmvt";
  if (windowed && !c.H && !c.theta) throw UsageError(c.subcommand + ": one of --H or --theta is required");
  try {
    if (windowed) (void)c.window();
    for (const auto& text : c.coeffs) (void)Angle::parse(text);
    (void)Angle::parse(c.alpha);
    if (c.subcommand == "waring" && c.batch == 0) (void)WaringInstance::from_theta(c.k, c.s, *c.N, *c.theta);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  return c;
}

ArithmeticTable load_or_sieve(const Window& window, const RunConfig& config) {
  const std::string dir = cache_directory(config);
  if (dir.empty()) return sieve_window(window, config.threads);
  const std::filesystem::path path =
      std::filesystem::path(dir) / ("window_" + std::to_string(window.start()) + "_" + std::to_string(window.length()) + ".eslab");
  if (std::filesystem::exists(path)) {
    ArithmeticTable table = ArithmeticTable::load(path);
    if (table.window() == window) return table;
  }
  ArithmeticTable table = sieve_window(window, config.threads);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create cache directory " + dir + ": " + ec.message());
  table.save(path);
  return table;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> farey_sequence(std::uint64_t order) {
  if (order < 1) throw ConfigError("farey order must be >= 1");
  // Standard next-term recurrence, 0/1 to 1/1.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  std::uint64_t a = 0, b = 1, c = 1, d = order;
  out.emplace_back(a, b);
  while (c <= order) {
    const std::uint64_t k = (order + b) / d;
    const std::uint64_t e = k * c - a;
    const std::uint64_t f = k * d - b;
    a = c;
    b = d;
    c = e;
    d = f;
    out.emplace_back(a, b);
  }
  return out;
}

ScanReport run_scan(const RunConfig& config) {
  const Window window = config.window();
  const int k = config.k;
  const double H = static_cast<double>(window.length());
  const double L = log_n(window);
  const double threshold = std::pow(L, -2.0);
  const double bound = std::pow(L, 10.0);
  const double Q = std::max(1.0, std::pow(L, config.A));
  const auto N = static_cast<std::int64_t>(window.start());
  const ArithmeticTable table = load_or_sieve(window, config);

  std::vector<double> multipliers = config.perturb;
  if (multipliers.empty()) multipliers.push_back(0.0);
  const auto farey = farey_sequence(config.farey);

  // Axis values for one coefficient: Farey points times perturbations.
  auto axis = [&](double scale, const std::string& scale_label) {
    std::vector<std::pair<Angle, std::string>> values;
    for (const auto& [a, q] : farey)
      for (double m : multipliers)
        values.emplace_back(Angle::from_fraction(static_cast<std::int64_t>(a), q) + Angle::from_double(m / scale),
                            perturb_label(a, q, m, scale_label));
    return values;
  };

  std::vector<std::vector<std::pair<Angle, std::string>>> axes;
  if (config.monomial) {
    axes.push_back(axis(std::pow(static_cast<double>(N), k - 1) * H, k == 1 ? "/H" : "/(N^" + std::to_string(k - 1) + "H)"));
  } else {
    for (int j = 1; j <= k; ++j) axes.push_back(axis(std::pow(H, j), j == 1 ? "/H" : "/H^" + std::to_string(j)));
  }
  std::size_t count = 1;
  for (const auto& ax : axes) {
    if (count > 50'000'000 / ax.size()) throw BudgetError("scan grid above 5e7 points");
    count *= ax.size();
  }

  std::vector<std::optional<ReportRow>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::vector<char> flagged(count, 0);
  std::vector<char> violation(count, 0);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;

  auto task = [&](std::size_t index) {
    try {
      std::vector<Angle> values;
      std::vector<std::string> labels;
      std::size_t rest = index;
      std::vector<std::size_t> digits(axes.size());
      for (std::size_t d = axes.size(); d-- > 0;) {
        digits[d] = rest % axes[d].size();
        rest /= axes[d].size();
      }
      for (std::size_t d = 0; d < axes.size(); ++d) {
        values.push_back(axes[d][digits[d]].first);
        labels.push_back(axes[d][digits[d]].second);
      }
      const PolynomialPhase phase =
          config.monomial ? monomial_to_shifted(values[0], k, N) : PolynomialPhase(N, values);
      const Angle lead = config.monomial ? values[0] : values.back();
      const auto sums = lambda_mobius_sums(table, phase, Summation::kCompensated);
      const auto search = simultaneous_q_search(phase, H, config.q_max);
      const auto best = best_rational(lead, config.q_max);
      const Arc arc = classify_arc(lead, k, window.start(), window.length(), Q);

      ReportRow row;
      row.add("index", static_cast<std::uint64_t>(index));
      for (std::size_t d = 0; d < values.size(); ++d) {
        const std::string name = config.monomial ? "alpha" : "alpha" + std::to_string(d + 1);
        row.add(name + "_hex", values[d].to_hex());
        row.add(name + "_label", labels[d]);
      }
      row.add("lambda_normalized", sums.lambda.normalized);
      row.add("mu_normalized", sums.mobius.normalized);
      row.add("best_q", search->q);
      row.add("quality", search->quality);
      row.add("lead_a", best.a);
      row.add("lead_q", best.q);
      row.add("lead_err", best.err);
      row.add("arc_kind", to_string(arc.kind));
      row.add("arc_a", arc.a);
      row.add("arc_q", arc.q);
      const bool big = sums.lambda.normalized >= threshold || sums.mobius.normalized >= threshold;
      const bool bad = big && search->quality > bound;
      row.add("flagged", big);
      row.add("violation", bad);
      row.add("error", "");
      flagged[index] = big;
      violation[index] = bad;
      slots[index] = std::move(row);
    } catch (...) {
      errors[index] = std::current_exception();
    }
    const std::size_t finished = ++done;
    if (!config.quiet && count >= 20 && finished % (count / 20) == 0) {
      std::lock_guard<std::mutex> lock(progress_mu);
      std::cerr << "scan: " << finished << "/" << count << " grid points\n";
    }
  };
  parallel_for(count, config.threads, task);

  ScanReport report;
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) {
      report.failure = errors[i];
      std::string message = "unknown error";
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        message = e.what();
      } catch (...) {
      }
      ReportRow err;
      if (!report.rows.empty()) {
        for (const auto& [key, value] : report.rows.front().fields) err.add(key, std::string());
        err.fields.front().second = static_cast<std::uint64_t>(i);
        err.fields.back().second = message;
      } else {
        err.add("index", static_cast<std::uint64_t>(i)).add("error", message);
      }
      report.rows.push_back(std::move(err));
      break;
    }
    report.rows.push_back(std::move(*slots[i]));
    report.flagged += flagged[i];
    report.violations += violation[i];
  }
  return report;
}

std::vector<ReportRow> run_sieve(const RunConfig& config) {
  const ArithmeticTable table = load_or_sieve(config.window(), config);
  std::vector<ReportRow> rows;
  rows.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto f = table.factors(i);
    ReportRow row;
    row.add("n", table.n_at(i))
        .add("lambda", table.lambda(i))
        .add("mu", table.mu(i))
        .add("omega", f.omega())
        .add("residual", f.residual);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> run_expsum(const RunConfig& config) {
  const Window window = config.window();
  const ArithmeticTable table = load_or_sieve(window, config);
  const PolynomialPhase phase = configured_phase(config, static_cast<std::int64_t>(window.start()));
  const auto sums = lambda_mobius_sums(table, phase, Summation::kCompensated);
  const auto unit = unit_exp_sum(window, phase, Summation::kCompensated);
  const Angle lead = leading_coefficient(config, phase);
  const auto best = best_rational(lead, config.q_max);
  const Arc arc = classify_arc(lead, phase.degree(), window.start(), window.length(),
                               std::max(1.0, std::pow(log_n(window), config.A)));
  ReportRow row;
  row.add("N", window.start()).add("H", window.length()).add("k", phase.degree());
  row.add("lead_hex", lead.to_hex());
  add_sum(row, "lambda", sums.lambda);
  add_sum(row, "mu", sums.mobius);
  add_sum(row, "unit", unit);
  row.add("best_a", best.a).add("best_q", best.q).add("best_err", best.err);
  row.add("arc_kind", to_string(arc.kind)).add("arc_a", arc.a).add("arc_q", arc.q);
  return {row};
}

std::vector<ReportRow> run_hb_verify(const RunConfig& config) {
  const Window window = config.window();
  const ArithmeticTable table = load_or_sieve(window, config);
  const PolynomialPhase phase = configured_phase(config, static_cast<std::int64_t>(window.start()));
  HbOptions options;
  options.threads = config.threads;
  const HbTarget target = config.target == "mu" ? HbTarget::kMobius : HbTarget::kLambda;
  const HeathBrownResult result = heath_brown_decompose(table, phase, target, options);
  const auto direct = lambda_mobius_sums(table, phase, Summation::kCompensated);
  const ExpSumResult& reference = target == HbTarget::kMobius ? direct.mobius : direct.lambda;

  std::vector<ReportRow> rows;
  auto make = [](const std::string& kind, int j, const std::string& dyadic, std::complex<double> v, std::uint64_t terms) {
    ReportRow row;
    row.add("kind", kind).add("j", j).add("dyadic", dyadic);
    row.add("re", v.real()).add("im", v.imag()).add("terms", terms);
    return row;
  };
  for (const auto& c : result.components) rows.push_back(make(kind_label(c.kind), c.j, component_label(c), c.sum.value, c.sum.terms));
  rows.push_back(make("total", 0, "", result.total, result.tuples));
  rows.push_back(make("direct", 0, "", reference.value, reference.terms));
  rows.push_back(make("max_pointwise_error", 0, "", {result.max_pointwise_error, 0.0}, 0));
  return rows;
}

std::vector<ReportRow> run_vmvt(const RunConfig& config) {
  std::vector<ReportRow> rows;
  std::optional<ScalingFit> fit;
  if (config.H_list.size() >= 2) fit = scaling_exponent(config.t, config.k, config.H_list);
  for (std::size_t i = 0; i < config.H_list.size(); ++i) {
    const VinogradovCount c = fit ? fit->counts[i] : count_J(config.t, config.k, config.H_list[i]);
    ReportRow row;
    row.add("t", c.t).add("k", c.k).add("H", c.H).add("J", c.count.str()).add("normalized", c.normalized);
    if (fit) row.add("fitted_slope", fit->slope).add("residual", fit->residuals[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> run_nit(const RunConfig& config) {
  const Window window = config.window();
  const PolynomialPhase phase = nit_taylor_phase(config.t0, static_cast<std::int64_t>(window.start()), config.k);
  NitOptions options;
  options.A = config.A;
  options.B = config.B;
  options.n0 = config.n0;
  const NitModel m = nit_approximation(phase, window, config.q, options);
  ReportRow row;
  row.add("t0", config.t0).add("t", m.t);
  row.add("relative_error", config.t0 != 0.0 ? std::abs(m.t - config.t0) / std::abs(config.t0) : std::abs(m.t));
  row.add("max_dev", m.max_dev).add("target_deviation", m.target_deviation);
  row.add("n0", m.n0).add("H0", m.H0).add("modulus", m.modulus);
  row.add("structure_quality", m.structure_quality).add("t_scale_ratio", m.t_scale_ratio);
  row.add("eta_hex", m.eta_phase.to_hex());
  return {row};
}

std::string run_waring(const RunConfig& config) {
  auto one = [&](std::uint64_t N) {
    const WaringInstance inst = WaringInstance::from_theta(config.k, config.s, N, *config.theta);
    nlohmann::ordered_json out;
    out["N"] = N;
    out["k"] = inst.k;
    out["s"] = inst.s;
    out["X"] = inst.X;
    out["H"] = inst.H;
    out["feasible"] = inst.feasible;
    const RhoResult rho = rho_exact(inst);
    const MainTerm main = major_arc_main_term(inst, config.q_max);
    out["rho"] = rho.rho;
    out["prime_count"] = rho.prime_count;
    out["main_term"] = main.value;
    out["series"] = main.series.value;
    out["series_imag"] = main.series.imag;
    out["series_tail"] = main.series.tail;
    out["integral"] = main.integral.value;
    out["integral_scale"] = main.integral.scale;
    const RepresentationSearch search = find_representations(inst, config.limit);
    out["reps"] = search.reps;
    out["R"] = search.R;
    out["N_mod_R"] = search.N_mod_R;
    out["diagnosis"] = search.diagnosis;
    std::vector<std::string> warnings = main.series.warnings;
    out["warnings"] = warnings;
    return out;
  };
  if (config.batch == 0) return one(*config.N).dump(1) + "\n";

  // Admissible N: the class s mod R(k), drawn within 0.1% of --N.
  const std::uint64_t R = R_of_k(config.k);
  std::mt19937_64 rng(config.seed);
  const std::uint64_t spread = std::max<std::uint64_t>(*config.N / 1000, R);
  std::uniform_int_distribution<std::uint64_t> dist(*config.N - std::min(*config.N - 1, spread), *config.N + spread);
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < config.batch; ++i) {
    std::uint64_t N = dist(rng);
    N += (static_cast<std::uint64_t>(config.s) % R + R - N % R) % R;
    all.push_back(one(N));
  }
  return all.dump(1) + "\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& diag) {
  try {
    const RunConfig config = parse_config(args);
    if (!config.help.empty()) {
      std::cout << config.help;
      return 0;
    }
    for (const auto& note : config.notes) diag << "note: " << note << "\n";
    const std::string& sub = config.subcommand;
    if (sub == "waring") {
      write_text(run_waring(config), config.output);
      return 0;
    }
    if (sub == "scan") {
      ScanReport report = run_scan(config);
      emit_report(report.rows, config.format, config.output);
      if (!config.quiet)
        diag << "scan: " << report.rows.size() << " rows, " << report.flagged << " flagged, " << report.violations
             << " violations\n";
      if (report.failure) std::rethrow_exception(report.failure);
      return 0;
    }
    std::vector<ReportRow> rows;
    if (sub == "sieve") rows = run_sieve(config);
    if (sub == "expsum") rows = run_expsum(config);
    if (sub == "hb-verify") rows = run_hb_verify(config);
    if (sub == "vmvt") rows = run_vmvt(config);
    if (sub == "nit") rows = run_nit(config);
    emit_report(rows, config.format, config.output);
    return 0;
  } catch (const UsageError& e) {
    diag << "usage error: " << e.what() << "\nrun 'eslab --help' for usage\n";
    return 2;
  } catch (const BudgetError& e) {
    diag << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    diag << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    diag << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    diag << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace eslab
