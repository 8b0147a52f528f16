#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>

#include "artifacts.hpp"
#include "kppfront/analysis.hpp"
#include "kppfront/eigen.hpp"
#include "kppfront/error.hpp"
#include "kppfront/evolve.hpp"
#include "kppfront/front.hpp"
#include "kppfront/parallel.hpp"
#include "kppfront/periodic_eigen.hpp"
#include "kppfront/reaction.hpp"

namespace kppfront::cli {

namespace {

using nlohmann::json;

constexpr const char* kConvention = "lambda is the principal eigenvalue of -(Delta + c d1 + r); lambda < 0 means persistence";

void say(const Options& o, const std::string& msg) {
  if (o.verbose) std::fprintf(stderr, "[kppfront] %s\n", msg.c_str());
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---- shared config blocks ----

struct GridSpec {
  double X = 30.0;
  double H = 1.0;
  int nx = 299;
  int ny = 3;
  std::string lateral = "neumann";

  Grid build() const { return Grid::build(X, H, nx, ny, parse_boundary_kind(lateral)); }
};

GridSpec read_grid(Config& cfg, GridSpec d = {}) {
  d.X = cfg.number("grid.X", d.X);
  d.H = cfg.number("grid.H", d.H);
  d.nx = cfg.integer("grid.nx", d.nx);
  d.ny = cfg.integer("grid.ny", d.ny);
  d.lateral = cfg.text("grid.lateral", d.lateral);
  if (d.lateral != "neumann" && d.lateral != "dirichlet" && d.lateral != "periodic")
    throw ConfigError("grid.lateral", "expected neumann, dirichlet or periodic");
  return d;
}

struct ReactionSpec {
  std::string kind;
  std::map<std::string, double> p;
  std::optional<double> amplitude;
  double period = 1.0;

  Reaction base() const {
    if (kind == "illustration") return make_illustration(p.at("alpha"), p.at("L"), p.at("theta"));
    if (kind == "compact_favorable") return make_compact_favorable(p.at("m"), p.at("m_prime"), p.at("L"), p.at("K"));
    if (kind == "well") return make_well(p.at("left"), p.at("right"), p.at("depth"), p.at("width"));
    const double r0 = p.at("r0");
    GrowthProfile g = GrowthProfile::autonomous([r0](double, double) { return r0; }, std::abs(r0));
    g.with_limits([r0](double) { return r0; }, [r0](double) { return r0; });
    return make_logistic("constant", std::move(g));
  }

  Reaction build() const {
    if (!amplitude) return base();
    return make_time_periodic(base().linearization(), *amplitude, period);
  }
};

const std::map<std::string, std::vector<std::pair<std::string, double>>>& reaction_params() {
  static const std::map<std::string, std::vector<std::pair<std::string, double>>> table = {
      {"illustration", {{"alpha", 0.3}, {"L", 5.0}, {"theta", -2.0}}},
      {"compact_favorable", {{"m", 1.0}, {"m_prime", 2.0}, {"L", 4.0}, {"K", 1.0}}},
      {"well", {{"left", -1.0}, {"right", -1.0}, {"depth", 4.0}, {"width", 2.0}}},
      {"constant", {{"r0", 1.0}}},
  };
  return table;
}

ReactionSpec read_reaction(Config& cfg, const std::string& default_kind, std::map<std::string, double> overrides = {},
                           bool force_periodic = false) {
  ReactionSpec r;
  r.kind = cfg.text("reaction.kind", default_kind);
  const auto& table = reaction_params();
  auto it = table.find(r.kind);
  if (it == table.end())
    throw ConfigError("reaction.kind", "unknown reaction '" + r.kind +
                                           "' (expected illustration, compact_favorable, well or constant)");
  for (const auto& [name, fallback] : it->second) {
    const double d = overrides.count(name) ? overrides.at(name) : fallback;
    r.p[name] = cfg.number("reaction." + name, d);
  }
  if (force_periodic || cfg.has("periodic.amplitude")) {
    r.amplitude = cfg.number("periodic.amplitude", force_periodic ? 0.5 : 0.0);
    r.period = cfg.number("periodic.period", 1.0);
    if (!(r.period > 0.0)) throw ConfigError("periodic.period", "must be positive");
  }
  return r;
}

struct SpeedSpec {
  std::optional<double> c;
  std::optional<double> fraction;

  /// `cstar` is consulted only for relative speeds.
  double resolve(const std::function<std::optional<double>()>& cstar) const {
    if (c) return *c;
    const auto cs = cstar();
    if (!cs) throw RegimeError("speed.c_fraction needs a finite critical speed, but lambda0 >= 0");
    return *fraction * *cs;
  }
};

SpeedSpec read_speed(Config& cfg, double default_c) {
  SpeedSpec s;
  s.c = cfg.number("speed.c");
  s.fraction = cfg.number("speed.c_fraction");
  if (s.c && s.fraction) throw ConfigError("speed.c_fraction", "give either speed.c or speed.c_fraction, not both");
  if (!s.c && !s.fraction) s.c = default_c;
  if (s.c && *s.c < 0.0) throw ConfigError("speed.c", "speed must be nonnegative");
  if (s.fraction && *s.fraction < 0.0) throw ConfigError("speed.c_fraction", "must be nonnegative");
  return s;
}

double positive(Config& cfg, const std::string& key, double fallback) {
  const double v = cfg.number(key, fallback);
  if (!(v > 0.0)) throw ConfigError(key, "must be positive");
  return v;
}

// ---- serializers ----

Csv field_csv(const Field& U, const std::string& column = "U") {
  Csv csv{"x1", "y", column};
  const Grid& g = U.grid();
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) csv.row(std::vector<double>{g.x(i), g.y(j), U.at(i, j)});
  return csv;
}

json fit_json(const DecayFit& f) {
  return {{"side", f.side == Side::Left ? "left" : "right"},
          {"exponent", f.exponent},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"window", {f.a, f.b}},
          {"clean", f.clean},
          {"y_spread", f.y_spread}};
}

json front_json(const FrontSolution& s) {
  return {{"c", s.c},
          {"bc", std::string(to_string(s.bc))},
          {"residual", s.residual},
          {"mass", s.mass},
          {"positive", s.positive},
          {"tail_ok", s.tail_ok},
          {"trivial", s.trivial},
          {"iterations", s.iterations},
          {"sup", s.U.max()}};
}

json truncation_json(const std::vector<TruncationEntry>& entries, double gap, const std::vector<std::string>& warnings) {
  json rows = json::array();
  for (const auto& e : entries) rows.push_back({{"R", e.R}, {"lambda", e.lambda}});
  return {{"entries", rows}, {"gap", gap}, {"warnings", warnings}};
}

// ---- commands ----

int cmd_eigen(Config& cfg, const Options& opt) {
  const GridSpec gs = read_grid(cfg);
  const ReactionSpec rs = read_reaction(cfg, "compact_favorable");
  const SpeedSpec speed = read_speed(cfg, 0.0);
  const double tol = positive(cfg, "solver.eigen_tol", kDefaultEigenTol);
  const auto R = cfg.list("eigen.R");
  const auto hx = cfg.number("eigen.hx");
  cfg.finish();

  const Grid grid = gs.build();
  const Reaction reaction = rs.build();
  const GrowthProfile& lin = reaction.linearization();
  say(opt, "principal eigenvalue at c = 0");
  const EigenResult e0 = drift_eigen(grid, lin, 0.0, tol);
  const auto cstar = critical_speed(e0.lambda);
  const double c = speed.resolve([&] { return cstar; });
  const EigenResult ec = c == 0.0 ? e0 : drift_eigen(grid, lin, c, tol);

  json doc = {{"convention", kConvention},
              {"reaction", rs.kind},
              {"c", c},
              {"lambda0", e0.lambda},
              {"c_star", nullable(cstar)},
              {"lambda", ec.lambda},
              {"lambda_direct", nullable(ec.lambda_direct)},
              {"residual", ec.residual},
              {"iterations", ec.iterations},
              {"persistence", ec.lambda < 0.0},
              {"truncation", nullptr}};
  if (R) {
    GridDensity d{hx.value_or(grid.hx()), grid.H(), grid.ny(), grid.lateral()};
    say(opt, "truncation sweep");
    const TruncationResult t = truncation_limit(lin, c, *R, d, tol);
    doc["truncation"] = truncation_json(t.entries, t.gap, t.warnings);
    doc["truncation"]["extrapolated"] = t.extrapolated;
  }
  ArtifactWriter out(opt.out, "eigen");
  out.write("eigen.json", doc);
  out.commit();
  return 0;
}

int cmd_front(Config& cfg, const Options& opt) {
  const GridSpec gs = read_grid(cfg);
  const ReactionSpec rs = read_reaction(cfg, "compact_favorable");
  const SpeedSpec speed = read_speed(cfg, 0.0);
  const double eig_tol = positive(cfg, "solver.eigen_tol", kDefaultEigenTol);
  const double tol = positive(cfg, "solver.newton_tol", kDefaultNewtonTol);
  const std::string seed = cfg.text("front.seed", "saturation");
  if (seed != "saturation" && seed != "subsolution")
    throw ConfigError("front.seed", "expected saturation or subsolution");
  const bool uniqueness = cfg.flag("front.uniqueness", false);
  const double from = cfg.number("front.fit_from", 0.5);
  const double to = cfg.number("front.fit_to", 0.9);
  if (!(0.0 <= from && from < to && to <= 1.0)) throw ConfigError("front.fit_to", "need 0 <= fit_from < fit_to <= 1");
  cfg.finish();

  const Grid grid = gs.build();
  const Reaction reaction = rs.build();
  const GrowthProfile& lin = reaction.linearization();
  std::optional<double> cstar;
  bool have_cstar = false;
  auto cs = [&] {
    if (!have_cstar) cstar = critical_speed(drift_eigen(grid, lin, 0.0, eig_tol).lambda);
    have_cstar = true;
    return cstar;
  };
  const double c = speed.resolve(cs);
  say(opt, "solving the front at c = " + format_double(c));
  FrontSolution sol = seed == "saturation"
                          ? solve_front(reaction, c, grid, tol)
                          : newton_front(reaction, c, grid,
                                         subsolution_seed(drift_eigen(grid, lin, c, eig_tol), reaction, c), tol);
  json doc = front_json(sol);
  doc["seed"] = seed;
  doc["c_star"] = nullable(cs());
  doc["fits"] = nullptr;
  if (sol.positive) {
    try {
      doc["fits"] = {{"left", fit_json(fit_decay(sol.U, Side::Left, from, to))},
                     {"right", fit_json(fit_decay(sol.U, Side::Right, from, to))}};
    } catch (const InvalidArgument& e) {
      doc["fit_error"] = e.what();
    }
  }
  if (uniqueness) {
    say(opt, "uniqueness probe");
    const UniquenessReport u = uniqueness_probe(reaction, c, grid, 3, tol, opt.workers);
    doc["uniqueness"] = {{"skipped", u.skipped},
                         {"note", u.note},
                         {"seeds", u.seeds},
                         {"max_distance", u.max_distance},
                         {"violation", u.violation}};
  }
  ArtifactWriter out(opt.out, "front");
  out.write("front.csv", field_csv(sol.U));
  out.write("front.json", doc);
  out.commit();
  return 0;
}

Csv trajectory_csv(const Trajectory& tr) {
  Csv csv{"t", "sup_norm", "l1_norm", "dist_sup", "dist_l1", "tail_sup"};
  for (const auto& s : tr.samples) csv.row(std::vector<double>{s.t, s.sup_norm, s.l1_norm, s.dist_sup, s.dist_l1, s.tail_sup});
  return csv;
}

int cmd_evolve(Config& cfg, const Options& opt) {
  const GridSpec gs = read_grid(cfg);
  const ReactionSpec rs = read_reaction(cfg, "compact_favorable");
  const SpeedSpec speed = read_speed(cfg, 0.0);
  const double eig_tol = positive(cfg, "solver.eigen_tol", kDefaultEigenTol);
  const double tol = positive(cfg, "solver.newton_tol", kDefaultNewtonTol);
  RunOptions run_opts;
  run_opts.horizon = positive(cfg, "evolve.horizon", 100.0);
  run_opts.sample_every = positive(cfg, "evolve.sample_every", 1.0);
  run_opts.dt = cfg.number("evolve.dt", 0.0);
  if (run_opts.dt < 0.0) throw ConfigError("evolve.dt", "must be nonnegative (0 picks the default)");
  const std::string initial = cfg.text("evolve.initial", "saturation");
  if (initial != "saturation" && initial != "bump" && initial != "front")
    throw ConfigError("evolve.initial", "expected saturation, bump or front");
  const double height = cfg.number("evolve.bump_height", 0.5);
  const double center = cfg.number("evolve.bump_center", 0.0);
  const double width = positive(cfg, "evolve.bump_width", 1.0);
  const double scale = cfg.number("evolve.front_scale", 0.5);
  if (height < 0.0 || scale < 0.0) throw ConfigError("evolve.bump_height", "initial data must be nonnegative");
  const std::string reference = cfg.text("evolve.reference", "none");
  if (reference != "none" && reference != "front") throw ConfigError("evolve.reference", "expected none or front");
  cfg.finish();

  const Grid grid = gs.build();
  const Reaction reaction = rs.build();
  const double c = speed.resolve([&] { return critical_speed(drift_eigen(grid, reaction.linearization(), 0.0, eig_tol).lambda); });
  std::optional<FrontSolution> front;
  if (initial == "front" || reference == "front") {
    say(opt, "solving the reference front");
    front = solve_front(reaction, c, grid, tol);
  }
  Field u0(grid, reaction.saturation());
  if (initial == "bump")
    u0 = Field::sample(grid, [&](double x, double) {
      const double z = (x - center) / width;
      return height * std::exp(-z * z);
    });
  else if (initial == "front")
    u0 = scale * front->U;
  if (reference == "front") run_opts.reference = front->U;
  say(opt, "time marching to t = " + format_double(run_opts.horizon));
  const Trajectory tr = run(reaction, c, u0, run_opts);
  const Outcome outcome = classify(tr);
  const MassSummary m = mass_series(tr);
  json doc = {{"c", c},
              {"outcome", std::string(to_string(outcome))},
              {"initial", initial},
              {"reference", reference},
              {"dt", tr.dt},
              {"final_sup", tr.samples.back().sup_norm},
              {"final_l1", tr.samples.back().l1_norm},
              {"sup_eventually_monotone", tr.sup_eventually_monotone},
              {"max_undershoot", tr.max_undershoot},
              {"undershoot_flag", tr.undershoot_flag},
              {"mass",
               {{"initial_l1", m.initial_l1},
                {"final_l1", m.final_l1},
                {"final_dist_l1", m.final_dist_l1},
                {"log_slope", m.log_slope},
                {"gap_monotone", m.gap_monotone}}}};
  ArtifactWriter out(opt.out, "evolve");
  out.write("trajectory.csv", trajectory_csv(tr));
  out.write("final.csv", field_csv(*tr.final_state, "u"));
  out.write("evolve.json", doc);
  out.commit();
  return outcome == Outcome::Undecided ? 3 : 0;
}

json threshold_json(const ThresholdResult& r) {
  return {{"value", r.value}, {"bracket", {r.lo, r.hi}}, {"evaluations", r.evaluations}};
}

int cmd_illustrate(Config& cfg, const Options& opt) {
  IllustrationSetup s;
  s.alpha = cfg.number("illustrate.alpha", s.alpha);
  s.theta = cfg.number("illustrate.theta", s.theta);
  s.c = cfg.number("illustrate.c", s.c);
  s.X = positive(cfg, "illustrate.X", s.X);
  s.nx = cfg.integer("illustrate.nx", s.nx);
  s.ny = cfg.integer("illustrate.ny", s.ny);
  const std::string lateral = cfg.text("illustrate.lateral", "neumann");
  s.horizon = positive(cfg, "illustrate.horizon", s.horizon);
  s.max_horizon = positive(cfg, "illustrate.max_horizon", s.max_horizon);
  s.eigen_tol = positive(cfg, "solver.eigen_tol", s.eigen_tol);
  const std::vector<double> Ls =
      cfg.list("illustrate.L_values")
          .value_or(std::vector<double>{0, 0.25, 0.5, 0.75, 1, 1.5, 2, 3, 4, 5, 7.5, 10, 15, 20, 30});
  const double lo = cfg.number("illustrate.L_lo", 0.0);
  const double hi = cfg.number("illustrate.L_hi", 5.0);
  const double tol = positive(cfg, "illustrate.tol", 0.05);
  const bool dynamic = cfg.flag("illustrate.dynamic", true);
  cfg.finish();
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw ConfigError("illustrate.alpha", "must lie in (0, 1)");
  if (s.c < 0.0) throw ConfigError("illustrate.c", "speed must be nonnegative");
  for (double L : Ls)
    if (L < 0.0) throw ConfigError("illustrate.L_values", "lengths must be nonnegative");
  s.lateral = parse_boundary_kind(lateral);
  s.grid();

  say(opt, "lambda_L ladder over " + std::to_string(Ls.size()) + " values");
  const std::vector<double> lambdas = parallel_map(
      Ls, [&](double L) { return illustration_eigenvalue(s.with(ThresholdParameter::L, L), ThresholdParameter::L); },
      opt.workers);
  Csv table{"L", "lambda"};
  json rows = json::array();
  bool nonincreasing = true;
  for (std::size_t k = 0; k < Ls.size(); ++k) {
    table.row(std::vector<double>{Ls[k], lambdas[k]});
    rows.push_back({{"L", Ls[k]}, {"lambda", lambdas[k]}});
    if (k && Ls[k] > Ls[k - 1] && lambdas[k] > lambdas[k - 1] + s.eigen_tol) nonincreasing = false;
  }
  say(opt, "eigen-sign bisection");
  const ThresholdResult eig = threshold_search(s, ThresholdParameter::L, lo, hi, ThresholdObjective::EigenSign, tol);
  json doc = {{"convention", kConvention},
              {"setup",
               {{"alpha", s.alpha}, {"theta", s.theta}, {"c", s.c}, {"X", s.X}, {"nx", s.nx}, {"ny", s.ny},
                {"lateral", lateral}}},
              {"lambda_L", rows},
              {"nonincreasing", nonincreasing},
              {"tol", tol},
              {"L_star", eig.value},
              {"eigen_sign", threshold_json(eig)},
              {"dynamic_outcome", nullptr},
              {"modes_agree", nullptr}};
  if (dynamic) {
    say(opt, "dynamic-outcome bisection");
    const ThresholdResult dyn =
        threshold_search(s, ThresholdParameter::L, lo, hi, ThresholdObjective::DynamicOutcome, tol);
    doc["dynamic_outcome"] = threshold_json(dyn);
    doc["modes_agree"] = std::abs(dyn.value - eig.value) <= 2.0 * tol;
  }
  ArtifactWriter out(opt.out, "illustrate");
  out.write("lambda_L.csv", table);
  out.write("lstar.json", doc);
  out.commit();
  return 0;
}

int cmd_symmetry(Config& cfg, const Options& opt) {
  const GridSpec gs = read_grid(cfg, {40.0, 1.0, 799, 5, "neumann"});
  const ReactionSpec rs = read_reaction(cfg, "well");
  const SpeedSpec speed = read_speed(cfg, 1.0);
  const double eig_tol = positive(cfg, "solver.eigen_tol", kDefaultEigenTol);
  const double tol = positive(cfg, "solver.newton_tol", kDefaultNewtonTol);
  auto la = cfg.number("symmetry.lambda_alpha");
  auto lb = cfg.number("symmetry.lambda_beta");
  const double crit_tol = positive(cfg, "symmetry.criterion_tol", kCriterionTol);
  const double exp_tol = positive(cfg, "symmetry.exponent_tol", kExponentTol);
  const double from = cfg.number("symmetry.fit_from", 0.5);
  const double to = cfg.number("symmetry.fit_to", 0.9);
  if (!(0.0 <= from && from < to && to <= 1.0))
    throw ConfigError("symmetry.fit_to", "need 0 <= fit_from < fit_to <= 1");
  cfg.finish();

  const Grid grid = gs.build();
  const Reaction reaction = rs.build();
  const GrowthProfile& lin = reaction.linearization();
  auto limit_eigen = [&](const GrowthProfile::Limit& mu, const char* which) {
    if (!mu) throw InvalidArgument(std::string("reaction declares no ") + which + " limit; set symmetry.lambda_" + which);
    return cross_section_eigen(mu, grid.H(), grid.ny(), grid.lateral(), eig_tol).lambda;
  };
  if (!la) la = limit_eigen(lin.left_limit(), "alpha");
  if (!lb) lb = limit_eigen(lin.right_limit(), "beta");
  if (!(*la > 0.0 && *lb > 0.0)) throw RegimeError("limit eigenvalues must be positive for exponential tails");
  const double c = speed.resolve([&] { return critical_speed(drift_eigen(grid, lin, 0.0, eig_tol).lambda); });
  say(opt, "solving the front at c = " + format_double(c));
  const FrontSolution sol = solve_front(reaction, c, grid, tol);
  if (!sol.positive) throw RegimeError("no positive front at this speed (the solver reached the trivial root)");
  const SymmetryReport rep = symmetry_report(sol.U, *la, *lb, c, crit_tol, exp_tol);
  const TailBoundCheck bl = tail_bounds(sol.U, Side::Left, rep.left_predicted, rep.left_predicted, 0.1, from, to);
  const TailBoundCheck br = tail_bounds(sol.U, Side::Right, rep.right_predicted, rep.right_predicted, 0.1, from, to);
  auto bound_json = [](const TailBoundCheck& b) {
    return json{{"passed", b.passed}, {"upper_ratio", b.upper_ratio}, {"lower_ratio", b.lower_ratio}};
  };
  json doc = {{"c", c},
              {"lambda_alpha", *la},
              {"lambda_beta", *lb},
              {"left_exponent", rep.left_exponent},
              {"right_exponent", rep.right_exponent},
              {"left_predicted", rep.left_predicted},
              {"right_predicted", rep.right_predicted},
              {"left_matches", rep.left_matches},
              {"right_matches", rep.right_matches},
              {"criterion_lhs", rep.criterion_lhs},
              {"criterion_rhs", rep.criterion_rhs},
              {"criterion_tol", crit_tol},
              {"exponent_tol", exp_tol},
              {"verdict", std::string(to_string(rep.verdict))},
              {"asymmetry", rep.asymmetry},
              {"fits", {{"left", fit_json(rep.left_fit)}, {"right", fit_json(rep.right_fit)}}},
              {"tail_bounds", {{"slack", 0.1}, {"left", bound_json(bl)}, {"right", bound_json(br)}}},
              {"front", front_json(sol)}};
  Csv tail{"x1", "U"};
  const int mid = grid.mid_row();
  for (int i = 0; i < grid.nx(); ++i) tail.row(std::vector<double>{grid.x(i), sol.U.at(i, mid)});
  ArtifactWriter out(opt.out, "symmetry");
  out.write("front.csv", field_csv(sol.U));
  out.write("tail.csv", tail);
  out.write("symmetry.json", doc);
  out.commit();
  return 0;
}

int cmd_concentrate(Config& cfg, const Options& opt) {
  const ReactionSpec rs = read_reaction(cfg, "well", {{"depth", 14.0}});
  const SpeedSpec speed = read_speed(cfg, 0.0);
  const double eig_tol = positive(cfg, "solver.eigen_tol", kDefaultEigenTol);
  const double tol = positive(cfg, "solver.newton_tol", kDefaultNewtonTol);
  StripSpec spec;
  spec.X = positive(cfg, "strip.X", spec.X);
  spec.nx = cfg.integer("strip.nx", spec.nx);
  spec.ny_strip = cfg.integer("strip.ny", spec.ny_strip);
  spec.margin = cfg.number("strip.margin", spec.margin);
  const int n_max = cfg.integer("concentrate.n_max", 10);
  if (n_max < 0) throw ConfigError("concentrate.n_max", "must be nonnegative");
  cfg.finish();

  const Reaction base = rs.build();
  spec.extended_grid();
  const double c = speed.resolve(
      [&] { return critical_speed(drift_eigen(spec.strip_grid(), base.linearization(), 0.0, eig_tol).lambda); });
  say(opt, "penalized sweep n = 0.." + std::to_string(n_max));
  const ConcentrationSweep sw = concentration_sweep(base, c, n_max, spec, tol, opt.workers);
  Csv csv{"n", "rho_n", "lambda_n", "sup_exterior", "dist_to_dirichlet_front"};
  json rows = json::array();
  for (const auto& r : sw.records) {
    csv.row(std::vector<double>{double(r.n), penalization_rate(r.n), r.lambda_n, r.sup_exterior,
                                r.dist_to_dirichlet_front});
    rows.push_back({{"n", r.n},
                    {"lambda_n", r.lambda_n},
                    {"sup_exterior", r.sup_exterior},
                    {"dist_to_dirichlet_front", r.dist_to_dirichlet_front}});
  }
  json doc = {{"convention", kConvention},
              {"c", c},
              {"lambda_D", sw.lambda_D},
              {"c_star_D", nullable(sw.c_star_D)},
              {"strip", {{"X", spec.X}, {"nx", spec.nx}, {"ny", spec.ny_strip}, {"margin", spec.margin}}},
              {"lambda_nondecreasing", sw.lambda_nondecreasing},
              {"lambda_below_D", sw.lambda_below_D},
              {"fronts_nonincreasing", sw.fronts_nonincreasing},
              {"final_distance", sw.final_distance},
              {"records", rows},
              {"dirichlet_front", front_json(*sw.dirichlet)}};
  ArtifactWriter out(opt.out, "concentrate");
  out.write("concentration.csv", csv);
  out.write("dirichlet_front.csv", field_csv(sw.dirichlet->U));
  out.write("concentration.json", doc);
  out.commit();
  return 0;
}

int cmd_pulsate(Config& cfg, const Options& opt) {
  const GridSpec gs = read_grid(cfg);
  const ReactionSpec rs = read_reaction(cfg, "compact_favorable", {}, true);
  const SpeedSpec speed = read_speed(cfg, 0.5);
  const double eig_tol = positive(cfg, "solver.eigen_tol", kDefaultEigenTol);
  PeriodicSpec spec;
  spec.T = rs.period;
  spec.time_steps_per_period = cfg.integer("periodic.steps", spec.time_steps_per_period);
  spec.y_period = positive(cfg, "periodic.y_period", gs.H);
  const double tol = positive(cfg, "pulsate.tol", 1e-8);
  const int max_periods = cfg.integer("pulsate.max_periods", 2000);
  const auto R = cfg.list("pulsate.R");
  cfg.finish();
  spec.validate();
  if (max_periods < 1) throw InvalidArgument("pulsate.max_periods must be positive");

  const Grid grid = gs.build();
  const Reaction reaction = rs.build();
  const GrowthProfile& lin = reaction.linearization();
  const double c = speed.resolve([&] { return critical_speed(floquet_eigen(lin, grid, 0.0, spec, eig_tol).lambda_p); });
  say(opt, "Floquet eigenvalue");
  const FloquetResult fl = floquet_eigen(lin, grid, c, spec, eig_tol);
  json floquet = {{"convention", "lambda_p = -ln(multiplier) / T; lambda_p < 0 means a pulsating front exists"},
                  {"c", c},
                  {"T", spec.T},
                  {"time_steps_per_period", spec.time_steps_per_period},
                  {"lambda_p", fl.lambda_p},
                  {"multiplier", fl.multiplier},
                  {"iterations", fl.iterations},
                  {"residual", fl.residual},
                  {"truncation", nullptr}};
  if (R) {
    say(opt, "truncated Floquet sweep");
    GridDensity d{gs.X * 2.0 / (gs.nx + 1), gs.H, gs.ny, grid.lateral()};
    const FloquetSweep sw = truncated_floquet_sweep(lin, c, *R, spec, d, eig_tol);
    floquet["truncation"] = truncation_json(sw.entries, sw.gap, sw.warnings);
  }
  say(opt, "iterating the period map");
  const PulsatingFront pf = pulsating_front(reaction, c, grid, spec, tol, max_periods);
  Csv orbit{"k", "t", "x1", "y", "U"};
  for (std::size_t k = 0; k < pf.orbit.size(); ++k)
    for (int i = 0; i < grid.nx(); ++i)
      for (int j = 0; j < grid.ny(); ++j)
        orbit.row(std::vector<double>{double(k), spec.T * k / 4.0, grid.x(i), grid.y(j), pf.orbit[k].at(i, j)});
  json doc = {{"c", c},
              {"T", spec.T},
              {"defect", pf.defect},
              {"periods", pf.periods},
              {"floquet_lambda", pf.floquet_lambda},
              {"positive", pf.positive},
              {"tail_ok", pf.tail_ok},
              {"tol", tol}};
  ArtifactWriter out(opt.out, "pulsate");
  out.write("floquet.json", floquet);
  out.write("orbit.csv", orbit);
  out.write("pulsating.json", doc);
  out.commit();
  return 0;
}

int cmd_sweep(Config& cfg, const Options& opt) {
  const GridSpec gs = read_grid(cfg);
  const ReactionSpec rs = read_reaction(cfg, "compact_favorable");
  const double eig_tol = positive(cfg, "solver.eigen_tol", kDefaultEigenTol);
  const double c_min = cfg.number("sweep.c_min", 0.0);
  const auto c_max = cfg.number("sweep.c_max");
  const auto c_max_fraction = cfg.number("sweep.c_max_fraction");
  if (c_max && c_max_fraction) throw ConfigError("sweep.c_max_fraction", "give either sweep.c_max or sweep.c_max_fraction");
  const int points = cfg.integer("sweep.points", 11);
  const double horizon = positive(cfg, "sweep.horizon", 200.0);
  const double max_horizon = positive(cfg, "sweep.max_horizon", 1600.0);
  const auto Ls = cfg.list("sweep.L");
  cfg.finish();
  if (points < 2) throw ConfigError("sweep.points", "need at least 2 points");
  if (c_min < 0.0) throw ConfigError("sweep.c_min", "speed must be nonnegative");
  if (Ls && rs.kind != "illustration" && rs.kind != "compact_favorable")
    throw ConfigError("sweep.L", "an L sweep needs reaction.kind = illustration or compact_favorable");

  const Grid grid = gs.build();
  const Reaction reaction = rs.build();
  const EigenResult e0 = drift_eigen(grid, reaction.linearization(), 0.0, eig_tol);
  const auto cstar = critical_speed(e0.lambda);
  double hi = 0.0;
  if (c_max) {
    hi = *c_max;
  } else {
    if (!cstar) throw RegimeError("lambda0 >= 0, so c* is undefined; set sweep.c_max");
    hi = c_max_fraction.value_or(2.0) * *cstar;
  }
  if (!(hi > c_min)) throw ConfigError("sweep.c_max", "must exceed sweep.c_min");

  struct Point {
    double L;
    double c;
  };
  std::vector<Point> pts;
  for (double L : Ls.value_or(std::vector<double>{std::nan("")}))
    for (int k = 0; k < points; ++k) pts.push_back({L, c_min + (hi - c_min) * k / (points - 1)});
  struct Result {
    double lambda;
    Outcome outcome;
  };
  say(opt, "sweeping " + std::to_string(pts.size()) + " points");
  const std::vector<Result> res = parallel_map(
      pts,
      [&](const Point& p) {
        ReactionSpec local = rs;
        if (Ls) local.p["L"] = p.L;
        const Reaction r = local.build();
        const double lambda = drift_eigen(grid, r.linearization(), p.c, eig_tol).lambda;
        return Result{lambda, settle_outcome(r, p.c, grid, horizon, max_horizon)};
      },
      opt.workers);
  std::vector<std::string> header = {"c", "lambda", "outcome"};
  if (Ls) header.insert(header.begin(), "L");
  Csv csv(header);
  int undecided = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    std::vector<std::string> row = {format_double(pts[k].c), format_double(res[k].lambda),
                                    std::string(to_string(res[k].outcome))};
    if (Ls) row.insert(row.begin(), format_double(pts[k].L));
    csv.row(row);
    undecided += res[k].outcome == Outcome::Undecided;
  }
  json doc = {{"convention", kConvention},
              {"lambda0", e0.lambda},
              {"c_star", nullable(cstar)},
              {"c_range", {c_min, hi}},
              {"points", pts.size()},
              {"undecided", undecided}};
  ArtifactWriter out(opt.out, "sweep");
  out.write("phase.csv", csv);
  out.write("sweep.json", doc);
  out.commit();
  return undecided ? 3 : 0;
}

using Handler = int (*)(Config&, const Options&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"eigen", cmd_eigen},       {"front", cmd_front},         {"evolve", cmd_evolve},
      {"illustrate", cmd_illustrate}, {"symmetry", cmd_symmetry}, {"concentrate", cmd_concentrate},
      {"pulsate", cmd_pulsate},   {"sweep", cmd_sweep},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"eigen",    "front",       "evolve",  "illustrate",
                                                 "symmetry", "concentrate", "pulsate", "sweep"};
  return names;
}

int run_command(const std::string& name, Config& config, const Options& options) {
  auto it = handlers().find(name);
  if (it == handlers().end()) throw ConfigError("", "unknown command '" + name + "'");
  return it->second(config, options);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UndecidedError*>(&e)) return 3;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) return 1;
  return 2;
}

}  // namespace kppfront::cli
