#include "levydev/cli.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "levydev/bands.hpp"
#include "levydev/error.hpp"
#include "levydev/gausssup.hpp"
#include "levydev/io.hpp"
#include "levydev/levy.hpp"
#include "levydev/limits.hpp"
#include "levydev/normal.hpp"

namespace levydev::cli {

using nlohmann::json;

namespace {

void check_keys(const json& cfg, std::initializer_list<const char*> allowed) {
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : cfg.items()) {
    if (key != "seed" && !ok.count(key)) throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
}

template <class T>
T get(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("config key '{}' has the wrong type", key));
  }
}

double get_positive(const json& cfg, const char* key, double fallback) {
  const double v = get<double>(cfg, key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(fmt::format("'{}' must be positive", key));
  return v;
}

std::size_t get_count(const json& cfg, const char* key, std::size_t fallback) {
  if (!cfg.contains(key)) return fallback;
  const json& v = cfg.at(key);
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > 0) return v.get<std::size_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 1.0 && d == std::floor(d) && d < 1e15) return static_cast<std::size_t>(d);
  }
  throw ConfigError(fmt::format("'{}' must be a positive integer", key));
}

BasisFamily parse_family(const json& cfg) {
  const std::string name = get<std::string>(cfg, "family", "trig");
  const int J = get<int>(cfg, "J", name == "haar" ? 1 : 2);
  try {
    return BasisFamily::parse(name, J);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Window parse_window(const json& cfg, Window fallback) {
  if (!cfg.contains("window")) return fallback;
  const auto w = get<std::vector<double>>(cfg, "window", {});
  if (w.size() != 2) throw ConfigError("'window' must be [a, b]");
  try {
    return Window(w[0], w[1]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

LevyModel parse_model(const json& cfg) {
  if (!cfg.contains("model")) return LevyModel::gamma(1.0, 1.0);
  const json& m = cfg.at("model");
  const std::string type = get<std::string>(m, "type", "");
  try {
    if (type == "gamma") {
      check_keys(m, {"type", "c", "rho"});
      return LevyModel::gamma(get<double>(m, "c", 1.0), get<double>(m, "rho", 1.0));
    }
    if (type == "compound_poisson_exp") {
      check_keys(m, {"type", "lambda", "eta"});
      return LevyModel::compound_poisson_exp(get<double>(m, "lambda", 1.0), get<double>(m, "eta", 1.0));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError(fmt::format("unknown model type '{}' (gamma | compound_poisson_exp)", type));
}

json model_json(const LevyModel& model) {
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&model.params())) {
    return {{"type", "compound_poisson_exp"}, {"lambda", cp->lambda}, {"eta", cp->eta}};
  }
  const auto& g = std::get<GammaProcess>(model.params());
  return {{"type", "gamma"}, {"c", g.c}, {"rho", g.rho}};
}

TrigConvention parse_convention(const json& cfg) {
  const std::string s = get<std::string>(cfg, "convention", "basis_count");
  if (s == "basis_count") return TrigConvention::BasisCount;
  if (s == "published") return TrigConvention::Published;
  throw ConfigError(fmt::format("unknown convention '{}' (basis_count | published)", s));
}

SupMode parse_mode(const json& cfg, const char* fallback) {
  const std::string s = get<std::string>(cfg, "mode", fallback);
  if (s == "signed") return SupMode::Signed;
  if (s == "absolute") return SupMode::Absolute;
  throw ConfigError(fmt::format("unknown mode '{}' (signed | absolute)", s));
}

SupMethod parse_method(const json& cfg) {
  const std::string s = get<std::string>(cfg, "method", "auto");
  if (s == "auto") return SupMethod::Auto;
  if (s == "grid") return SupMethod::Grid;
  if (s == "exact") return SupMethod::Exact;
  throw ConfigError(fmt::format("unknown method '{}' (auto | grid | exact)", s));
}

std::uint64_t seed_of(const json& cfg) { return get<std::uint64_t>(cfg, "seed", 1); }

void warn(const RunContext& ctx, json& summary, const std::string& message) {
  summary["warnings"].push_back(message);
  if (ctx.warn) *ctx.warn << json{{"warning", message}}.dump() << '\n';
}

void write_json(const RunContext& ctx, const std::string& name, const json& j) {
  write_text(ctx.out_dir / name, j.dump(2) + "\n");
}

json summary_base(const std::string& command, const json& cfg) {
  return {{"command", command}, {"config_hash", config_hash(command, cfg)}, {"config", cfg},
          {"warnings", json::array()}};
}

// Tail formulas at u in the units of the draws.
json tail_row(const BasisFamily& fam, double delta, double u, SupMode mode, bool normalized, TrigConvention conv) {
  const double sigma = normalized ? peak_std(fam, delta) : 1.0;
  const double raw = u * sigma;
  const TailValue asym = asymptotic_tail(tail_constants(fam, conv), delta, raw, mode);
  json row{{"u", u}, {"asymptotic", asym.value}, {"asymptotic_low_confidence", asym.low_confidence}};
  if (fam.tag() == Family::Trigonometric && mode == SupMode::Signed) {
    row["refined"] = trig_refined_tail(fam, delta, raw, conv);
  }
  if (fam.tag() == Family::Haar) {
    row["exact"] = mode == SupMode::Signed ? haar_exact_signed_tail(delta, raw) : haar_exact_absolute_tail(delta, raw);
  } else if (fam.tag() == Family::Trigonometric && fam.order() == 2) {
    row["exact"] = mode == SupMode::Signed ? trig_single_harmonic_exact_tail(delta, raw)
                                           : trig_single_harmonic_exact_absolute_tail(delta, raw);
  }
  if (fam.tag() == Family::Legendre && normalized) {
    row["normal_reference"] = (mode == SupMode::Signed ? 2.0 : 4.0) * normal_sf(u);
  }
  return row;
}

std::vector<double> get_u_list(const json& cfg) {
  const auto us = get<std::vector<double>>(cfg, "u", {1.0, 2.0, 3.0});
  if (us.empty()) throw ConfigError("'u' must be a nonempty list");
  return us;
}

}  // namespace

std::string config_hash(const std::string& command, const json& config) {
  json c = config;
  c.erase("workers");
  return hex64(fnv1a64(json{{"command", command}, {"config", c}}.dump()));
}

json run_mc_sup(const json& cfg, const RunContext& ctx) {
  check_keys(cfg, {"family", "J", "delta", "reps", "grid", "method", "mode", "normalized", "u", "convention"});
  SupSampleConfig sup;
  sup.family = parse_family(cfg);
  sup.delta = get_positive(cfg, "delta", 1.0);
  sup.reps = get_count(cfg, "reps", 100'000);
  sup.grid = get_count(cfg, "grid", 1024);
  sup.method = parse_method(cfg);
  sup.mode = parse_mode(cfg, "signed");
  sup.normalized = get<bool>(cfg, "normalized", false);
  sup.seed = seed_of(cfg);
  sup.workers = ctx.workers;
  const TrigConvention conv = parse_convention(cfg);
  if (sup.method == SupMethod::Exact && !has_exact_sup(sup.family)) {
    throw ConfigError(fmt::format("no exact supremum for family {} J={}", sup.family.name(), sup.family.order()));
  }
  const auto us = get_u_list(cfg);

  json summary = summary_base("mc-sup", cfg);
  const std::string hash = summary["config_hash"];
  const auto draws = sample_sup(sup);
  CsvWriter csv(ctx.out_dir / "mc_sup_draws.csv", hash, {"rep", "sup"});
  for (std::size_t r = 0; r < draws.size(); ++r) csv.row({static_cast<double>(r), draws[r]});
  csv.close();

  json rows = json::array();
  for (double u : us) {
    json row = tail_row(sup.family, sup.delta, u, sup.mode, sup.normalized, conv);
    const TailEstimate mc = tail_fraction(draws, u);
    row["mc"] = mc.p;
    row["stderr"] = mc.stderr_;
    rows.push_back(row);
  }
  summary["reps"] = sup.reps;
  summary["exact_sup_path"] = has_exact_sup(sup.family) && sup.method != SupMethod::Grid;
  summary["rows"] = rows;
  write_json(ctx, "mc_sup_tails.json", summary);
  return summary;
}

json run_tails(const json& cfg, const RunContext& ctx) {
  check_keys(cfg, {"family", "J", "delta", "mode", "normalized", "u", "convention"});
  const BasisFamily fam = parse_family(cfg);
  const double delta = get_positive(cfg, "delta", 1.0);
  const SupMode mode = parse_mode(cfg, "signed");
  const bool normalized = get<bool>(cfg, "normalized", false);
  const TrigConvention conv = parse_convention(cfg);
  const auto us = get_u_list(cfg);

  json summary = summary_base("tails", cfg);
  json rows = json::array();
  for (double u : us) rows.push_back(tail_row(fam, delta, u, mode, normalized, conv));
  std::vector<std::string> header{"u", "asymptotic", "asymptotic_low_confidence"};
  for (const char* k : {"refined", "exact", "normal_reference"}) {
    if (rows[0].contains(k)) header.push_back(k);
  }
  CsvWriter csv(ctx.out_dir / "tails.csv", summary["config_hash"], header);
  for (const auto& row : rows) {
    std::vector<double> v;
    for (const auto& h : header) {
      const json& cell = row.at(h);
      if (cell.is_boolean()) v.push_back(cell.get<bool>() ? 1.0 : 0.0);
      else if (cell.is_null()) v.push_back(std::nan(""));
      else v.push_back(cell.get<double>());
    }
    csv.row(v);
  }
  csv.close();
  summary["rows"] = rows;
  write_json(ctx, "tails.json", summary);
  return summary;
}

json run_gumbel(const json& cfg, const RunContext& ctx) {
  check_keys(cfg, {"family", "J", "window", "ms", "reps", "convention", "method", "grid", "y_lo", "y_hi",
                   "y_points", "table_points", "accompanying", "shift"});
  GumbelExperimentConfig g;
  g.family = parse_family(cfg);
  g.window = parse_window(cfg, g.window);
  g.ms = get<std::vector<int>>(cfg, "ms", g.ms);
  if (g.ms.empty()) throw ConfigError("'ms' must be a nonempty list");
  for (int m : g.ms) {
    if (m < 1) throw ConfigError("entries of 'ms' must be positive");
  }
  g.reps = get_count(cfg, "reps", g.reps);
  g.convention = parse_convention(cfg);
  g.method = parse_method(cfg);
  g.grid = get_count(cfg, "grid", g.grid);
  g.y_lo = get<double>(cfg, "y_lo", g.y_lo);
  g.y_hi = get<double>(cfg, "y_hi", g.y_hi);
  g.y_points = get_count(cfg, "y_points", g.y_points);
  g.seed = seed_of(cfg);
  g.workers = ctx.workers;
  if (!(g.y_hi > g.y_lo) || g.y_points < 2) throw ConfigError("need y_lo < y_hi and y_points >= 2");
  const std::size_t table_points = get_count(cfg, "table_points", 1101);
  if (table_points < 2) throw ConfigError("'table_points' must be >= 2");

  const bool is_trig = g.family.tag() == Family::Trigonometric;
  const bool accompanying = get<bool>(cfg, "accompanying", is_trig);
  const double formula_j = tail_constants(g.family, g.convention).formula_j;
  if (accompanying) {
    if (!is_trig) throw ConfigError("accompanying laws are defined for the trigonometric family only");
    if (formula_j < g.window.width()) {
      throw ConfigError(fmt::format("accompanying laws need J >= b - a (J = {}, b - a = {})", formula_j,
                                    g.window.width()));
    }
  }
  double shift_n = 1.0, shift_kappa = 0.5, brevec = 0.0;
  if (cfg.contains("shift")) {
    const json& s = cfg.at("shift");
    check_keys(s, {"n", "kappa", "brevec"});
    shift_n = get_positive(s, "n", 1e6);
    shift_kappa = get<double>(s, "kappa", 0.6);
    brevec = get<double>(s, "brevec", 0.0);
    if (!(shift_kappa > 0.0 && shift_kappa < 1.0) || brevec < 0.0) throw ConfigError("bad 'shift' parameters");
  }

  json summary = summary_base("gumbel", cfg);
  const std::string hash = summary["config_hash"];
  const auto rows = gumbel_experiment(g);

  std::vector<double> ty(table_points);
  for (std::size_t i = 0; i < table_points; ++i) {
    ty[i] = g.y_lo + (g.y_hi - g.y_lo) * static_cast<double>(i) / (table_points - 1);
  }
  json out_rows = json::array();
  for (const auto& row : rows) {
    std::vector<std::string> header{"y", "empirical", "gumbel"};
    if (accompanying) header.insert(header.end(), {"A_m", "A_m_minus", "A_m_plus", "A_m_periodic"});
    CsvWriter csv(ctx.out_dir / fmt::format("gumbel_table_m{}.csv", row.m), hash, header);
    const GridCdf emp = empirical_cdf(row.y, ty);
    for (std::size_t i = 0; i < ty.size(); ++i) {
      std::vector<double> v{ty[i], emp.F[i], gumbel_cdf(ty[i])};
      if (accompanying) {
        v.push_back(accompanying_cdf(row.params, ty[i]));
        v.push_back(accompanying_shifted(row.params, ty[i], shift_n, shift_kappa, brevec, -1));
        v.push_back(accompanying_shifted(row.params, ty[i], shift_n, shift_kappa, brevec, +1));
        v.push_back(accompanying_cdf(row.params, ty[i], AccompanyingForm::Periodic));
      }
      csv.row(v);
    }
    csv.close();
    json r{{"m", row.m},         {"a_m", row.params.a_m},       {"b_m", row.params.b_m},
           {"c_m", row.params.c_m}, {"ks_gumbel", row.ks_gumbel}, {"levy_gumbel", row.levy_gumbel}};
    if (accompanying) {
      r["ks_accompanying"] = *row.ks_accompanying;
      r["levy_accompanying"] = *row.levy_accompanying;
      r["ks_periodic"] = *row.ks_periodic;
      r["levy_periodic"] = *row.levy_periodic;
    }
    out_rows.push_back(r);
  }
  bool nonincreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) nonincreasing &= rows[i].ks_gumbel <= rows[i - 1].ks_gumbel;
  summary["reps"] = g.reps;
  summary["rows"] = out_rows;
  summary["ks_gumbel_nonincreasing"] = nonincreasing;
  write_json(ctx, "gumbel_distances.json", summary);
  return summary;
}

json run_simulate(const json& cfg, const RunContext& ctx) {
  check_keys(cfg, {"model", "n", "delta", "kappa"});
  const LevyModel model = parse_model(cfg);
  const std::size_t n = get_count(cfg, "n", 10'000);
  double delta;
  if (cfg.contains("delta") && cfg.contains("kappa")) throw ConfigError("give either 'delta' or 'kappa', not both");
  if (cfg.contains("kappa")) {
    const double kappa = get<double>(cfg, "kappa", 0.6);
    if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("'kappa' must lie in (0,1)");
    delta = std::pow(static_cast<double>(n), kappa) / static_cast<double>(n);
  } else {
    delta = get_positive(cfg, "delta", 0.01);
  }
  json summary = summary_base("simulate", cfg);
  const std::uint64_t seed = seed_of(cfg);
  const IncrementSample sample = sample_increments(model, n, delta, seed, ctx.workers);
  CsvWriter csv(ctx.out_dir / "increments.csv", summary["config_hash"], {"increment"});
  for (double v : sample.values) csv.row({v});
  csv.close();
  summary["delta"] = delta;
  summary["n"] = n;
  summary["model"] = model_json(model);
  summary["seed"] = seed;
  write_json(ctx, "increments.json", summary);
  return summary;
}

json run_smalltime(const json& cfg, const RunContext& ctx) {
  check_keys(cfg, {"model", "window", "deltas", "grid"});
  const LevyModel model = parse_model(cfg);
  const Window window = parse_window(cfg, Window(0.5, 1.5));
  if (window.a <= 0.0) throw ConfigError("small-time check needs a window in (0, inf)");
  const auto deltas = get<std::vector<double>>(cfg, "deltas", {1e-2, 1e-3, 1e-4});
  if (deltas.empty()) throw ConfigError("'deltas' must be nonempty");
  const int grid = static_cast<int>(get_count(cfg, "grid", 201));
  json summary = summary_base("smalltime", cfg);
  json rows = json::array();
  double q = 0.0;
  for (double d : deltas) {
    if (!(d > 0.0)) throw ConfigError("'deltas' must be positive");
    const double check = small_time_check(model, window, d, grid);
    q = std::max(q, check / d);
    rows.push_back({{"delta", d}, {"check", check}, {"check_over_delta", check / d}});
  }
  summary["rows"] = rows;
  summary["fitted_q"] = q;
  write_json(ctx, "smalltime.json", summary);
  return summary;
}

json run_band(const json& cfg, const RunContext& ctx) {
  check_keys(cfg, {"model", "family", "J", "window", "kappa", "n", "m", "level", "levels", "reps", "q",
                   "include_shift", "quantile", "s_floor", "points", "convention", "input"});
  const LevyModel model = parse_model(cfg);
  const BasisFamily fam = parse_family(cfg);
  const Window window = parse_window(cfg, Window(0.5, 1.5));
  if (window.a <= 0.0 && window.b >= 0.0) throw ConfigError("band window must exclude 0");
  const std::size_t reps = get_count(cfg, "reps", 1);
  BandOptions opt;
  opt.level = get<double>(cfg, "level", 0.9);
  if (!(opt.level > 0.0 && opt.level < 1.0)) throw ConfigError("'level' must lie in (0,1)");
  opt.s_floor = get_positive(cfg, "s_floor", 1e-6);
  opt.points = get_count(cfg, "points", 1001);
  opt.convention = parse_convention(cfg);
  const std::string quantile = get<std::string>(cfg, "quantile", "gumbel");
  if (quantile == "accompanying") {
    opt.quantile = BandQuantile::Accompanying;
  } else if (quantile != "gumbel") {
    throw ConfigError(fmt::format("unknown quantile '{}' (gumbel | accompanying)", quantile));
  }
  const bool include_shift = get<bool>(cfg, "include_shift", true);
  const std::uint64_t seed = seed_of(cfg);
  json summary = summary_base("band", cfg);

  std::optional<IncrementSample> sample;
  double kappa;
  std::size_t n;
  if (cfg.contains("input")) {
    if (reps > 1) throw ConfigError("coverage runs (reps > 1) simulate their own data; drop 'input'");
    const json& in = cfg.at("input");
    check_keys(in, {"increments", "sidecar"});
    const auto values = read_increment_csv(get<std::string>(in, "increments", ""));
    const json side = [&] {
      try {
        return json::parse(read_text(get<std::string>(in, "sidecar", "")));
      } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("sidecar is not valid JSON: {}", e.what()));
      }
    }();
    const double delta = get_positive(side, "delta", -1.0);
    n = values.size();
    if (n < 2) throw ConfigError("need at least 2 increments");
    kappa = std::log(delta * static_cast<double>(n)) / std::log(static_cast<double>(n));
    if (cfg.contains("kappa") && std::abs(get<double>(cfg, "kappa", 0.0) - kappa) > 1e-9) {
      throw ConfigError(fmt::format("config kappa disagrees with the data (T = n^kappa gives kappa = {})", kappa));
    }
    sample = IncrementSample{model, delta, 0, values};
  } else {
    n = get_count(cfg, "n", 100'000);
    kappa = get<double>(cfg, "kappa", 0.6);
  }
  if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError(fmt::format("kappa = {} must lie in (0,1)", kappa));
  const double nd = static_cast<double>(n);
  const OptimalM opt_m = optimal_m(nd, kappa);
  const int m = cfg.contains("m") ? get<int>(cfg, "m", 0) : opt_m.m;
  if (m < 1) throw ConfigError("'m' must be positive");
  if (!opt_m.in_regime) warn(ctx, summary, fmt::format("kappa = {} outside the optimal-m regime (4/7, 2/3)", kappa));
  const double lam = lambda_n(nd, m, kappa);
  if (lam > 0.5) warn(ctx, summary, fmt::format("Lambda_n = {:.4g} exceeds 0.5", lam));

  const double T = std::pow(nd, kappa);
  if (!sample) sample = sample_increments(model, n, T / nd, seed, ctx.workers);
  const double q = cfg.contains("q") ? get_positive(cfg, "q", 1.0) : 2.0 * fitted_small_time_q(model, window);
  BiasConstants bias = BiasConstants::for_family(q, fam, window, kappa);
  if (!include_shift) bias.q = 1e-300;

  const BasisSystem system(fam, window, m);
  const ProjectionEstimate est = make_estimate(*sample, system);
  const ConfidenceBand band = confidence_band(est, bias, opt);
  CsvWriter csv(ctx.out_dir / "band.csv", summary["config_hash"], {"x", "lower", "estimate", "upper"});
  for (std::size_t i = 0; i < band.x.size(); ++i) csv.row({band.x[i], band.lower[i], band.estimate[i], band.upper[i]});
  csv.close();

  summary["n"] = n;
  summary["kappa"] = kappa;
  summary["T"] = est.horizon();
  summary["delta"] = est.delta;
  summary["m"] = m;
  summary["lambda_n"] = lam;
  summary["q"] = q;
  summary["brevec"] = bias.brevec();
  summary["shift"] = bias_shift(nd, m, kappa, bias.brevec());
  summary["level"] = opt.level;
  summary["threshold"] = band.threshold;
  summary["half_width_scale"] = band.half_width_scale;

  if (reps > 1) {
    CoverageConfig c;
    c.model = model;
    c.family = fam;
    c.window = window;
    c.kappa = kappa;
    c.n = n;
    c.levels = get<std::vector<double>>(cfg, "levels", {opt.level});
    c.reps = reps;
    c.seed = seed;
    c.m = m;
    c.q = q;
    c.include_shift = include_shift;
    c.convention = opt.convention;
    c.workers = ctx.workers;
    const CoverageReport rep = coverage_experiment(c);
    json cov = summary_base("band", cfg);
    cov["reps"] = reps;
    cov["m"] = rep.m;
    cov["T"] = rep.T;
    cov["lambda_n"] = rep.lambda_n;
    cov["shift"] = rep.shift;
    cov["levels"] = rep.levels;
    cov["thresholds"] = rep.thresholds;
    cov["coverage"] = rep.coverage;
    cov["statistics"] = rep.statistics;
    cov["warnings"] = rep.warnings;
    write_json(ctx, "coverage.json", cov);
    summary["coverage"] = rep.coverage;
  }
  write_json(ctx, "band.json", summary);
  return summary;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projection estimation of Levy densities and maximal-deviation experiments"};
  app.require_subcommand(1);
  struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    unsigned workers = 1;
  } flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"mc-sup", "Monte Carlo cell suprema and tail comparison"},
      {"gumbel", "Gumbel and accompanying-law convergence of m-cell maxima"},
      {"band", "Confidence band, optionally with a coverage experiment"},
      {"simulate", "Simulate increments (CSV + JSON sidecar)"},
      {"tails", "Tabulate asymptotic and exact tail formulas"},
      {"smalltime", "Small-time check and fitted q"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "JSON config file");
    sub->add_option("--seed", flags.seed, "Seed (overrides the config)");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--workers", flags.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  }

  auto fail = [&err](int code, const char* kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
    return code;
  };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
      app.parse(rev);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::ParseError& e) {
      return fail(kConfig, "usage", e.what());
    }
    const std::string command = app.get_subcommands().front()->get_name();
    json cfg = json::object();
    if (!flags.config.empty()) {
      try {
        cfg = json::parse(read_text(flags.config));
      } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
      }
      if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    }
    if (flags.seed) cfg["seed"] = *flags.seed;
    if (cfg.contains("workers")) {
      flags.workers = get<unsigned>(cfg, "workers", flags.workers);
      cfg.erase("workers");
    }
    if (flags.workers < 1) throw ConfigError("workers must be >= 1");
    RunContext ctx{flags.out, flags.workers, &err};
    std::filesystem::create_directories(ctx.out_dir);
    json summary;
    if (command == "mc-sup") summary = run_mc_sup(cfg, ctx);
    else if (command == "gumbel") summary = run_gumbel(cfg, ctx);
    else if (command == "band") summary = run_band(cfg, ctx);
    else if (command == "simulate") summary = run_simulate(cfg, ctx);
    else if (command == "tails") summary = run_tails(cfg, ctx);
    else summary = run_smalltime(cfg, ctx);
    out << json{{"command", command}, {"config_hash", summary["config_hash"]}, {"out", ctx.out_dir.string()}}.dump()
        << '\n';
    return kOk;
  } catch (const NumericGuardError& e) {
    return fail(kNumericGuard, "numeric_guard", e.what());
  } catch (const ConfigError& e) {
    return fail(kConfig, "config", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kConfig, "config", e.what());
  } catch (const std::domain_error& e) {
    return fail(kConfig, "config", e.what());
  } catch (const json::exception& e) {
    return fail(kConfig, "config", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kConfig, "config", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
}

}  // namespace levydev::cli
