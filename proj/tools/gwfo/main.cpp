// gwfo: command-line front end for the gwfo library.
//
// Exit status: 0 success, 1 usage or input error, 2 a validation bound failed.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <iostream>
#include <json.hpp>

#include <gwfo/calculus.hpp>
#include <gwfo/classes.hpp>
#include <gwfo/games.hpp>
#include <gwfo/harness.hpp>
#include <gwfo/logic.hpp>
#include <gwfo/report.hpp>
#include <gwfo/sampler.hpp>
#include <gwfo/universal.hpp>

#include "io.hpp"

namespace {

using namespace gwfo;
using cli::UsageError;
using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kValidation = 2;

std::string json_line(const Json& j) { return dump_json(j) + "\n"; }

Conditioning parse_conditioning(const std::string& s) {
  if (s == "none") return Conditioning::None;
  if (s == "infinite") return Conditioning::Infinite;
  if (s == "finite") return Conditioning::Finite;
  throw UsageError(fmt::format("unknown conditioning '{}'", s));
}

Dialect parse_dialect(const std::string& name, std::uint32_t m) {
  if (name == "standard") return Dialect::standard();
  if (name == "ball") {
    if (m == 0) throw UsageError("the ball dialect needs --M >= 1");
    return Dialect::ball(m);
  }
  throw UsageError(fmt::format("unknown dialect '{}'", name));
}

NodeId node_arg(const RootedTree& t, std::uint32_t id, const char* what) {
  if (id >= t.size()) throw UsageError(fmt::format("{} {} is not a node of a {}-node tree", what, id, t.size()));
  return NodeId{id};
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::optional<double> lambda;
  std::string probs;
  std::uint64_t seed = kDefaultSeed.master;
  std::size_t budget = kDefaultBudget;
  bool forest = false;
  std::size_t nodes = 0;
  std::string out;
  std::string trace;
};

int run_simulate(const SimulateArgs& a) {
  if (a.lambda.has_value() == !a.probs.empty()) throw UsageError("give exactly one of --lambda and --probs");
  const auto law = a.lambda ? OffspringDistribution::poisson(*a.lambda)
                            : OffspringDistribution::finite_support(cli::parse_double_list(a.probs));
  Json trace;
  if (a.lambda)
    trace["law"] = Json{{"poisson", *a.lambda}};
  else
    trace["law"] = Json{{"finite_support", std::vector<double>(law.probabilities().begin(), law.probabilities().end())}};
  trace["seed"] = a.seed;
  std::string text;
  if (a.forest) {
    if (a.nodes == 0) throw UsageError("--forest needs --nodes >= 1");
    const auto f = sample_forest(law, Seed{a.seed}, a.nodes);
    for (const auto& t : f.trees) text += serialize_tree_ordered(t) + "\n";
    trace["mode"] = "forest";
    trace["nodes"] = a.nodes;
    trace["trees"] = f.trees.size();
    trace["last_tree_open"] = f.last_tree_open;
    trace["terminated_at"] = f.trace.terminated_at ? Json(*f.trace.terminated_at) : Json(nullptr);
    trace["draws"] = f.trace.draws;
  } else {
    if (a.budget == 0) throw UsageError("--budget must be at least 1");
    const auto s = sample_tree(law, Seed{a.seed}, a.budget);
    text = serialize_tree_ordered(s.tree) + "\n";
    trace["mode"] = "tree";
    trace["budget"] = a.budget;
    trace["status"] = s.status == SampleStatus::Complete ? "complete" : "truncated";
    trace["nodes"] = s.tree.size();
    trace["terminated_at"] = s.trace.terminated_at ? Json(*s.trace.terminated_at) : Json(nullptr);
    trace["draws"] = s.trace.draws;
  }
  cli::write_output(text, a.out);
  const std::string trace_path = !a.trace.empty() ? a.trace : (a.out.empty() ? "" : a.out + ".trace.json");
  if (!trace_path.empty()) cli::write_output(json_line(trace), trace_path);
  return kOk;
}

struct ClassifyArgs {
  std::uint32_t k = 1;
  std::uint32_t depth = 1;
  std::string tree;
  std::string out;
};

int run_classify(const ClassifyArgs& a) {
  const auto t = cli::load_tree(a.tree).tree;
  cli::write_output(serialize_class_file(classify(t, a.k, a.depth)), a.out);
  return kOk;
}

struct ClassArgs {
  std::string cls;
  std::optional<std::uint32_t> k;
  std::optional<std::uint32_t> depth;
};

struct ProbArgs : ClassArgs {
  double lambda = 0.0;
  std::string conditional = "none";
  bool subcritical = false;
};

int run_prob(const ProbArgs& a) {
  const auto c = cli::load_class(a.cls, a.k, a.depth);
  const auto cond = parse_conditioning(a.conditional);
  double value = 0.0;
  switch (cond) {
    case Conditioning::None: value = class_probability(c, a.lambda); break;
    case Conditioning::Finite: value = finite_conditioned_probability(c, a.lambda, a.subcritical); break;
    case Conditioning::Infinite: value = infinite_conditioned_probability(c, a.lambda); break;
  }
  Json j;
  j["class"] = c.canonical();
  j["k"] = c.k();
  j["depth"] = c.depth();
  j["lambda"] = a.lambda;
  j["conditioning"] = a.conditional;
  j["probability"] = value;
  cli::write_output(json_line(j), "");
  return kOk;
}

struct ExprArgs : ClassArgs {
  std::optional<double> at;
};

int run_expr(const ExprArgs& a) {
  const auto c = cli::load_class(a.cls, a.k, a.depth);
  const auto e = class_probability_expr(c);
  if (!a.at) {
    cli::write_output(e.to_string() + "\n", "");
    return kOk;
  }
  Json j;
  j["class"] = c.canonical();
  j["expression"] = e.to_string();
  j["nodes"] = e.node_count();
  j["x"] = *a.at;
  j["value"] = e.evaluate(*a.at);
  cli::write_output(json_line(j), "");
  return kOk;
}

int run_survival(double lambda) {
  const auto s = solve_survival(lambda);
  Json j;
  j["lambda"] = s.lambda;
  j["p"] = s.p;
  j["q"] = s.q;
  j["residual"] = 1.0 - s.p - std::exp(-s.p * s.lambda);
  cli::write_output(json_line(j), "");
  return kOk;
}

struct SentenceArgs {
  std::string formula;
  std::uint32_t depth = 1;
  double lambda = 0.0;
  std::string conditional = "none";
  std::optional<std::uint32_t> k;
  bool no_probe = false;
};

int run_sentence_prob(const SentenceArgs& a) {
  const auto f = parse_formula(cli::file_or_literal(a.formula));
  SentenceOptions options;
  options.k = a.k;
  options.probe_representatives = !a.no_probe;
  const auto r = sentence_probability(f, a.lambda, a.depth, parse_conditioning(a.conditional), options);
  Json j;
  j["formula"] = to_string(f);
  j["quantifier_depth"] = quantifier_depth(f);
  j["k"] = r.classes.k;
  j["depth"] = a.depth;
  j["lambda"] = a.lambda;
  j["conditioning"] = a.conditional;
  j["value"] = r.value;
  j["classes_total"] = r.classes_total;
  j["classes"] = Json::array();
  for (const auto& c : r.classes.classes) j["classes"].push_back(c.canonical());
  j["warnings"] = r.warnings;
  cli::write_output(json_line(j), "");
  return kOk;
}

struct EfArgs {
  std::uint32_t k = 1;
  std::string t1, t2;
  bool ball = false;
  std::uint32_t m = 0;
  std::optional<std::uint32_t> center1, center2, radius;
};

Ball ball_arg(const cli::LoadedTree& lt, std::optional<std::uint32_t> center, std::optional<std::uint32_t> radius,
              std::uint32_t m, const char* which) {
  std::optional<NodeId> c;
  if (center) c = node_arg(lt.tree, *center, which);
  else c = lt.marked;
  if (!c) throw UsageError(fmt::format("{}: give a center id or mark the center with '*'", which));
  if (radius) return ball(lt.tree, *c, *radius);
  if (center) {
    if (m < 2) throw UsageError("extracting a ball needs --radius or --M >= 2");
    return ball(lt.tree, *c, m / 2);
  }
  // A marked file is the ball itself.
  const auto dist = distance_matrix(lt.tree);
  std::uint32_t far = 0;
  for (std::size_t u = 0; u < lt.tree.size(); ++u) far = std::max(far, dist[c->index * lt.tree.size() + u]);
  return Ball::from_tree(lt.tree, *c, far + 1);
}

int run_ef(const EfArgs& a) {
  const auto l1 = cli::load_tree(a.t1);
  const auto l2 = cli::load_tree(a.t2);
  Json j;
  j["k"] = a.k;
  if (!a.ball) {
    j["mode"] = "standard";
    j["winner"] = to_string(ehr_standard(l1.tree, l2.tree, a.k));
  } else {
    if (a.m == 0) throw UsageError("--ball needs --M >= 1");
    const Ball b1 = ball_arg(l1, a.center1, a.radius, a.m, "center1");
    const Ball b2 = ball_arg(l2, a.center2, a.radius, a.m, "center2");
    j["mode"] = "ball";
    j["M"] = a.m;
    j["winner"] = to_string(ehr_ball(b1, b2, a.k, a.m));
  }
  cli::write_output(json_line(j), "");
  return kOk;
}

struct FoArgs {
  std::string formula;
  std::string tree;
  std::string dialect = "standard";
  std::uint32_t m = 0;
  std::optional<std::uint32_t> center;
};

int run_fo_depth(const FoArgs& a) {
  const auto f = parse_formula(cli::file_or_literal(a.formula), parse_dialect(a.dialect, a.m));
  cli::write_output(json_line(Json{{"depth", quantifier_depth(f)}}), "");
  return kOk;
}

int run_fo_eval(const FoArgs& a) {
  const auto dialect = parse_dialect(a.dialect, a.m);
  const auto f = parse_formula(cli::file_or_literal(a.formula), dialect);
  const auto lt = cli::load_tree(a.tree);
  std::optional<NodeId> designated;
  if (a.center)
    designated = node_arg(lt.tree, *a.center, "center");
  else if (dialect.kind == Dialect::Kind::Ball)
    designated = lt.marked;
  Json j;
  j["depth"] = quantifier_depth(f);
  j["value"] = evaluate(f, lt.tree, designated);
  cli::write_output(json_line(j), "");
  return kOk;
}

struct ChristmasArgs {
  std::uint32_t k = 1;
  std::string catalog;
  std::string out;
  std::string check;
  std::optional<std::uint32_t> copies;
  bool exhaustive = false;
};

BallCatalog load_catalog(const std::string& dir, std::uint32_t k) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw UsageError(fmt::format("catalog '{}' is not a directory", dir));
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  BallCatalog catalog{k, {}};
  for (const auto& p : files) {
    const auto m = parse_marked_tree(cli::read_file(p.string()));
    catalog.entries.push_back(Ball::from_tree(m.tree, m.marked, catalog_radius(k)));
  }
  if (catalog.entries.empty()) throw UsageError(fmt::format("catalog '{}' has no ball files", dir));
  return catalog;
}

Json ids_json(const std::vector<std::vector<NodeId>>& ids, const std::vector<NodeId>& text_id) {
  Json out = Json::array();
  for (const auto& row : ids) {
    Json r = Json::array();
    for (NodeId v : row) r.push_back(text_id.empty() ? v.index : text_id[v.index].index);
    out.push_back(r);
  }
  return out;
}

Json point1_json(const Point1Report& p, const std::vector<NodeId>& text_id) {
  Json j;
  j["ok"] = p.ok;
  j["witnesses"] = ids_json(p.witnesses, text_id);
  j["missing_entry"] = p.missing_entry ? Json(*p.missing_entry) : Json(nullptr);
  j["diagnosis"] = p.diagnosis;
  return j;
}

Json point2_json(const Point2Report& p, const std::vector<NodeId>& text_id) {
  Json j;
  j["ok"] = p.ok;
  j["certificate"] = p.certificate;
  j["blocking_prefix"] = ids_json({p.blocking_prefix}, text_id)[0];
  j["blocked_entry"] = p.blocked_entry ? Json(*p.blocked_entry) : Json(nullptr);
  j["diagnosis"] = p.diagnosis;
  return j;
}

int run_christmas(const ChristmasArgs& a) {
  const auto catalog = load_catalog(a.catalog, a.k);
  Json j;
  j["k"] = a.k;
  j["catalog_entries"] = catalog.entries.size();
  bool ok = true;
  if (!a.check.empty()) {
    validate_catalog(catalog);
    const auto t = cli::load_tree(a.check).tree;
    const auto p1 = check_point1(t, catalog);
    const auto p2 = check_point2(t, catalog);
    j["nodes"] = t.size();
    j["point1"] = point1_json(p1, {});
    j["point2"] = point2_json(p2, {});
    ok = p1.ok && p2.ok;
  } else {
    const auto xmas = build_christmas_tree(catalog, a.copies);
    std::vector<NodeId> text_id;
    const std::string text = serialize_tree_ordered(xmas.tree, &text_id);
    if (!a.out.empty()) cli::write_output(text + "\n", a.out);
    j["nodes"] = xmas.tree.size();
    j["centers"] = ids_json(xmas.centers, text_id);
    j["tops"] = ids_json(xmas.tops, text_id);
    Json dist = Json::array();
    for (const auto& row : xmas.centers)
      for (NodeId c : row) dist.push_back(xmas.tree.depth(c));
    j["root_center_distance"] = dist;
    const auto p1 = check_point1(xmas.tree, catalog);
    const auto p2 = check_point2(xmas, catalog);
    j["point1"] = point1_json(p1, text_id);
    j["point2"] = point2_json(p2, text_id);
    ok = p1.ok && p2.ok;
    if (a.exhaustive) {
      const auto p2x = check_point2(xmas.tree, catalog);
      j["point2_exhaustive"] = point2_json(p2x, text_id);
      ok = ok && p2x.ok;
    }
  }
  cli::write_output(json_line(j), "");
  return ok ? kOk : kValidation;
}

struct McArgs {
  double lambda = 2.0;
  std::uint32_t k = 1;
  std::uint32_t depth = 1;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = kDefaultSeed.master;
  std::string format = "json";
  std::string out;
  bool timing = false;
  std::uint32_t proxy_depth = 30;
  std::string pattern = "(())";
  std::string budgets = "100,200,400";
};

constexpr double kZBound = 4.0;
constexpr double kMinExpected = 25.0;

int emit_class_rows(const std::vector<McReport>& rows, const McArgs& a) {
  const std::string note = fmt::format(
      "rows with expected count >= {} must satisfy |z| <= {}; the bound leaves room for testing {} rows at once",
      kMinExpected, kZBound, rows.size());
  cli::write_output(report_emit(rows, parse_report_format(a.format), note), a.out);
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const McReport& r) {
    return r.expected_count() < kMinExpected || (r.z_score && std::abs(*r.z_score) <= kZBound);
  });
  return ok ? kOk : kValidation;
}

int run_mc_classes(const McArgs& a) {
  parse_report_format(a.format);
  McOptions options;
  options.timing = a.timing;
  return emit_class_rows(mc_class_frequencies(a.lambda, a.k, a.depth, a.trials, Seed{a.seed}, options), a);
}

int run_mc_conditional(const McArgs& a) {
  parse_report_format(a.format);
  McOptions options;
  options.timing = a.timing;
  return emit_class_rows(
      mc_conditional_frequencies(a.lambda, a.k, a.depth, a.trials, a.proxy_depth, Seed{a.seed}, options), a);
}

int run_mc_decay(const McArgs& a) {
  const auto format = parse_report_format(a.format);
  McOptions options;
  options.timing = a.timing;
  const auto pattern = cli::load_tree(a.pattern).tree;
  const auto r = containment_decay(pattern, a.lambda, cli::parse_u64_list(a.budgets), a.trials, Seed{a.seed}, options);
  cli::write_output(report_emit(r, format), a.out);
  bool ok = r.fitted_log_slope < 0.0;
  for (std::size_t i = 1; i < r.bad_rates.size(); ++i)
    ok = ok && r.bad_rates[i] <= r.bad_rates[i - 1] + 2.0 * std::hypot(r.std_errors[i], r.std_errors[i - 1]);
  return ok ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galton-Watson trees, Ehrenfeucht games and first-order class probabilities"};
  app.name("gwfo");
  app.require_subcommand(1);
  int rc = kOk;

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Grow a Galton-Watson tree or forest");
  s->add_option("--lambda", sim.lambda, "Poisson mean");
  s->add_option("--probs", sim.probs, "Finite-support law p0,p1,...");
  s->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  s->add_option("--budget", sim.budget, "Maximum number of draws")->capture_default_str();
  s->add_flag("--forest", sim.forest, "Run the forest process");
  s->add_option("--nodes", sim.nodes, "Draws for the forest process");
  s->add_option("--out", sim.out, "Tree output file (default stdout)");
  s->add_option("--trace", sim.trace, "Trace JSON file (default <out>.trace.json)");
  s->callback([&] { rc = run_simulate(sim); });

  ClassifyArgs cls;
  auto* c = app.add_subcommand("classify", "Gamma class of a tree");
  c->add_option("--k", cls.k, "Count cap")->required();
  c->add_option("--depth", cls.depth, "Depth i")->required();
  c->add_option("--tree", cls.tree, "Tree file or text")->required();
  c->add_option("--out", cls.out, "Output file");
  c->callback([&] { rc = run_classify(cls); });

  ProbArgs prob;
  auto* p = app.add_subcommand("prob", "Probability of a class");
  p->add_option("--class", prob.cls, "Class file or canonical text")->required();
  p->add_option("--k", prob.k, "Count cap (for class text)");
  p->add_option("--depth", prob.depth, "Depth (for class text)");
  p->add_option("--lambda", prob.lambda, "Poisson mean")->required();
  p->add_option("--conditional", prob.conditional, "none, infinite or finite")->capture_default_str();
  p->add_flag("--subcritical", prob.subcritical, "Allow finite conditioning with lambda <= 1");
  p->callback([&] { rc = run_prob(prob); });

  ExprArgs expr;
  auto* e = app.add_subcommand("expr", "Class probability as a nice function of x");
  e->add_option("--class", expr.cls, "Class file or canonical text")->required();
  e->add_option("--k", expr.k, "Count cap (for class text)");
  e->add_option("--depth", expr.depth, "Depth (for class text)");
  e->add_option("--at", expr.at, "Also evaluate at this x");
  e->callback([&] { rc = run_expr(expr); });

  double survival_lambda = 0.0;
  auto* sv = app.add_subcommand("survival", "Survival probability p(lambda)");
  sv->add_option("--lambda", survival_lambda, "Poisson mean")->required();
  sv->callback([&] { rc = run_survival(survival_lambda); });

  SentenceArgs sp;
  auto* spc = app.add_subcommand("sentence-prob", "Probability of a first-order sentence");
  spc->add_option("--formula", sp.formula, "Formula file or text")->required();
  spc->add_option("--depth", sp.depth, "Locality depth i")->required();
  spc->add_option("--lambda", sp.lambda, "Poisson mean")->required();
  spc->add_option("--conditional", sp.conditional, "none, infinite or finite")->capture_default_str();
  spc->add_option("--k", sp.k, "Count cap (default: quantifier depth)");
  spc->add_flag("--no-probe", sp.no_probe, "Skip the representative probe");
  spc->callback([&] { rc = run_sentence_prob(sp); });

  EfArgs ef;
  auto* efc = app.add_subcommand("ef", "Decide an Ehrenfeucht game");
  efc->add_option("--k", ef.k, "Rounds")->required();
  efc->add_option("t1", ef.t1, "First tree (file or text)")->required();
  efc->add_option("t2", ef.t2, "Second tree (file or text)")->required();
  efc->add_flag("--ball", ef.ball, "Distance-preserving ball game");
  efc->add_option("--M", ef.m, "Distance bound");
  efc->add_option("--center1", ef.center1, "Center in t1 (preorder id)");
  efc->add_option("--center2", ef.center2, "Center in t2 (preorder id)");
  efc->add_option("--radius", ef.radius, "Ball radius (default M/2)");
  efc->callback([&] { rc = run_ef(ef); });

  FoArgs fo;
  auto* foc = app.add_subcommand("fo", "First-order formulas");
  foc->require_subcommand(1);
  auto* fod = foc->add_subcommand("depth", "Quantifier depth");
  fod->add_option("--formula", fo.formula, "Formula file or text")->required();
  fod->add_option("--dialect", fo.dialect, "standard or ball")->capture_default_str();
  fod->add_option("--M", fo.m, "Distance bound of the ball dialect");
  fod->callback([&] { rc = run_fo_depth(fo); });
  auto* foe = foc->add_subcommand("eval", "Evaluate on a finite tree");
  foe->add_option("--formula", fo.formula, "Formula file or text")->required();
  foe->add_option("--tree", fo.tree, "Tree file or text")->required();
  foe->add_option("--dialect", fo.dialect, "standard or ball")->capture_default_str();
  foe->add_option("--M", fo.m, "Distance bound of the ball dialect");
  foe->add_option("--center", fo.center, "Designated center (preorder id)");
  foe->callback([&] { rc = run_fo_eval(fo); });

  ChristmasArgs xm;
  auto* xmc = app.add_subcommand("christmas", "Build and check a Christmas tree");
  xmc->add_option("--k", xm.k, "Parameter k")->required();
  xmc->add_option("--catalog", xm.catalog, "Directory of marked ball files")->required();
  xmc->add_option("--out", xm.out, "Write the built tree here");
  xmc->add_option("--check", xm.check, "Check this tree instead of building one");
  xmc->add_option("--copies", xm.copies, "Copies per entry (default k)");
  xmc->add_flag("--exhaustive", xm.exhaustive, "Also run the exhaustive point-2 search");
  xmc->callback([&] { rc = run_christmas(xm); });

  McArgs mc;
  auto* mcc = app.add_subcommand("mc", "Monte Carlo experiments");
  mcc->require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--trials", mc.trials, "Number of trials")->capture_default_str();
    sub->add_option("--seed", mc.seed, "Master seed")->capture_default_str();
    sub->add_option("--format", mc.format, "json or csv")->capture_default_str();
    sub->add_option("--out", mc.out, "Output file");
    sub->add_flag("--timing", mc.timing, "Record wall time");
    sub->add_option("--lambda", mc.lambda, "Poisson mean")->capture_default_str();
  };
  auto* mcl = mcc->add_subcommand("classes", "Class frequencies against exact probabilities");
  common(mcl);
  mcl->add_option("--k", mc.k, "Count cap")->capture_default_str();
  mcl->add_option("--depth", mc.depth, "Depth i")->capture_default_str();
  mcl->callback([&] { rc = run_mc_classes(mc); });
  auto* mco = mcc->add_subcommand("conditional", "Class frequencies given survival");
  common(mco);
  mco->add_option("--k", mc.k, "Count cap")->capture_default_str();
  mco->add_option("--depth", mc.depth, "Depth i")->capture_default_str();
  mco->add_option("--proxy-depth", mc.proxy_depth, "Survival proxy depth D")->capture_default_str();
  mco->callback([&] { rc = run_mc_conditional(mc); });
  auto* mcd = mcc->add_subcommand("decay", "Containment determination decay");
  common(mcd);
  mcd->add_option("--pattern", mc.pattern, "Pattern tree (file or text)")->capture_default_str();
  mcd->add_option("--budgets", mc.budgets, "Comma-separated budgets")->capture_default_str();
  mcd->callback([&] { rc = run_mc_decay(mc); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kOk : kUsage;
  } catch (const std::exception& err) {
    std::cerr << "gwfo: error: " << err.what() << '\n';
    return kUsage;
  }
  return rc;
}
