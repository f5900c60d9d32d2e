// soccent: centrality, simulation and correlation runs from the command line.
//
//   soccent centrality --input g.tsv --kappa 5 --omega-ratio 0.3 --seed 7 --measure soc-katz --alpha 0.03 --out run
//   soccent simulate   --input g.tsv --kappa 5 --omega-ratio 0.3 --seed 7 --sim sir --runs 1000 --out run
//   soccent correlate  --expected run/soc-katz.csv --realized run/sir.csv
//   soccent generate   --model grid --rows 30 --cols 30 --out grid.tsv
//
// Exit codes: 0 success, 1 input error, 2 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "soc/soc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonConfig {
  std::string input;
  std::string format = "snap-tsv";
  bool directed = false;
  unsigned kappa = 5;
  std::string omega_file;
  double omega_ratio = 0.0;  // 0: no refill nodes unless --omega-file is given
  std::uint64_t seed = 0;
  std::size_t reps = 1;
  std::string out = "out";
};

struct CentralityConfig {
  std::string measure = "soc-katz";
  std::optional<double> alpha;
  double tol = 1e-10;
  std::size_t max_iter = 10'000;
  std::size_t pairs = 0;
  std::string pairs_file;
  bool exclude_endpoints = false;
  bool unit_endpoints = false;
  bool verify = false;
};

struct SimulateConfig {
  std::string sim = "sir";
  double alpha = 0.03;
  std::size_t runs = 1000;
  std::size_t max_steps = 100'000;
  std::string policy = "shortest";
  std::size_t duration = 10'000;
  double injection_rate = 0.5;
};

struct CorrelateConfig {
  std::string expected;
  std::string realized;
  std::string batch;
  std::string expected_name;
  std::string realized_name;
  std::string out;
  bool tau_b = false;
};

struct GenerateConfig {
  std::string model = "grid";
  std::size_t rows = 10, cols = 10, n = 100, m = 3, side = 5, bridge = 5;
  double p = 0.05;
  bool directed = false;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* sub, CommonConfig& c) {
  sub->add_option("--input", c.input, "Edge-list file")->required();
  sub->add_option("--format", c.format, "snap-tsv | matrix-market | csv")->capture_default_str();
  sub->add_flag("--directed", c.directed, "Treat edges as directed arcs");
  sub->add_option("--kappa", c.kappa, "Full charge (hops without refill)")->capture_default_str();
  auto* file = sub->add_option("--omega-file", c.omega_file, "Refill nodes, one label per line");
  sub->add_option("--omega-ratio", c.omega_ratio, "Fraction of nodes sampled as refill nodes")
      ->capture_default_str()
      ->excludes(file);
  sub->add_option("--seed", c.seed, "Base random seed")->capture_default_str();
  sub->add_option("--reps", c.reps, "Repetitions, each with its own derived seed")->capture_default_str();
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
}

json common_json(const CommonConfig& c) {
  return {{"input", c.input},   {"format", c.format},         {"directed", c.directed},
          {"kappa", c.kappa},   {"omega_file", c.omega_file}, {"omega_ratio", c.omega_ratio},
          {"seed", c.seed},     {"reps", c.reps}};
}

void validate(const CommonConfig& c) {
  if (c.kappa < 1) throw soc::InputError("--kappa must be at least 1");
  if (c.omega_ratio < 0.0 || c.omega_ratio > 1.0) throw soc::InputError("--omega-ratio must lie in (0, 1]");
  if (c.reps < 1) throw soc::InputError("--reps must be at least 1");
}

std::shared_ptr<const soc::Graph> load_graph(const CommonConfig& c) {
  auto g = std::make_shared<const soc::Graph>(soc::load_edge_list(c.input, soc::parse_format(c.format), c.directed));
  if (g->duplicates_collapsed() > 0) {
    std::cerr << "soccent: collapsed " << g->duplicates_collapsed() << " duplicate edges\n";
  }
  if (g->self_loops() > 0) std::cerr << "soccent: graph has " << g->self_loops() << " self-loops\n";
  return g;
}

struct Rep {
  std::size_t index;
  std::uint64_t seed;
  fs::path dir;
  soc::SocInstance inst;
  std::string omega;
};

Rep make_rep(const CommonConfig& c, const std::shared_ptr<const soc::Graph>& g, std::size_t r) {
  const std::uint64_t seed = c.reps == 1 ? c.seed : soc::derive_seed(c.seed, r);
  fs::path dir = c.out;
  if (c.reps > 1) {
    char name[32];
    std::snprintf(name, sizeof name, "rep_%03zu", r);
    dir /= name;
  }
  soc::RefillSet omega = soc::RefillSet::none(g->node_count());
  std::string desc = "none";
  if (!c.omega_file.empty()) {
    std::ifstream in(c.omega_file);
    if (!in) throw soc::InputError("cannot open '" + c.omega_file + "'");
    const auto ids = soc::read_node_list(in, *g);
    omega = soc::RefillSet(g->node_count(), ids);
    desc = "file=" + c.omega_file;
  } else if (c.omega_ratio > 0.0) {
    omega = soc::sample_refill_set(g->node_count(), c.omega_ratio, seed);
    desc = "ratio=" + soc::format_double(c.omega_ratio) + " seed=" + std::to_string(seed);
  }
  return {r, seed, std::move(dir), soc::SocInstance(g, std::move(omega), c.kappa), std::move(desc)};
}

// CSV with the resolved configuration on its first line, plus a sidecar JSON.
void write_outputs(const fs::path& dir, const std::string& stem, const soc::Graph& g,
                   std::span<const double> values, const json& config, const json& meta) {
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / (stem + ".csv"), std::ios::binary);
    if (!csv) throw soc::InputError("cannot write '" + (dir / (stem + ".csv")).string() + "'");
    soc::write_scores_csv(csv, g, values, {"soccent " + config.dump()});
  }
  std::ofstream js(dir / (stem + ".json"), std::ios::binary);
  js << json{{"config", config}, {"meta", meta}}.dump(2) << '\n';
}

std::vector<soc::StPair> read_pairs_file(const std::string& path, const soc::Graph& g) {
  std::ifstream in(path);
  if (!in) throw soc::InputError("cannot open '" + path + "'");
  std::vector<soc::StPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = soc::detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto f = soc::detail::split_ws(s);
    if (f.size() != 2) throw soc::ParseError("expected '<source> <target>'", lineno);
    const auto a = g.find(std::string(f[0]));
    const auto b = g.find(std::string(f[1]));
    if (!a || !b) throw soc::ParseError("unknown node label", lineno);
    pairs.push_back({*a, *b});
  }
  return pairs;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double max_rel_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  return d;
}

// Number of subgraph nodes whose exact net flow lies within 3 standard errors
// of a sampled estimate; `nodes` accumulates the number checked.
double rwbc_mc_agreement(const soc::Adjacency& fwd, soc::NodeId s, soc::NodeId t, std::uint64_t seed,
                         std::size_t& nodes) {
  const auto exact = soc::directed_rwbc_pair(fwd, s, t);
  const auto mc = soc::testkit::monte_carlo_rwbc(fwd, s, t, 20'000, seed);
  std::size_t ok = 0;
  for (std::size_t v = 0; v < exact.net_flow.size(); ++v) {
    ok += std::abs(exact.net_flow[v] - mc.net_flow[v]) <= 3.0 * mc.std_error[v] + 1e-9;
  }
  nodes += exact.net_flow.size();
  return static_cast<double>(ok);
}

json verify(const CentralityConfig& cc, const soc::SocInstance& inst, std::span<const double> values, double alpha,
            std::span<const soc::StPair> pairs, std::uint64_t seed) {
  const soc::Graph& g = inst.graph();
  json r{{"measure", cc.measure}};
  if (cc.measure == "soc-bc") {
    const auto ref = soc::testkit::brute_soc_bc(inst, {8, 3, 32});
    r["max_abs_diff"] = max_abs_diff(values, ref.scores.values);
    r["pass"] = r["max_abs_diff"].get<double>() <= 1e-9;
  } else if (cc.measure == "bc") {
    // With every node a refill node and kappa 1 the enumeration counts ordinary shortest paths.
    if (cc.exclude_endpoints) throw soc::InputError("--verify supports the default endpoint convention only");
    const soc::SocInstance all(inst.shared_graph(), soc::RefillSet::all(g.node_count()), 1);
    const auto ref = soc::testkit::brute_soc_bc(all, {8, 1, 32});
    r["max_abs_diff"] = max_abs_diff(values, ref.scores.values);
    r["pass"] = r["max_abs_diff"].get<double>() <= 1e-9;
  } else if (cc.measure == "soc-katz") {
    const auto ref = soc::testkit::dense_soc_katz(inst, alpha);
    r["max_rel_diff"] = max_rel_diff(values, ref.values);
    r["pass"] = r["max_rel_diff"].get<double>() <= 1e-8;
  } else if (cc.measure == "katz") {
    if (g.node_count() > 200) throw soc::BudgetExceeded("--verify: graph too large for the dense oracle");
    const auto ref = soc::testkit::dense_katz(g, alpha);
    r["max_rel_diff"] = max_rel_diff(values, ref);
    r["pass"] = r["max_rel_diff"].get<double>() <= 1e-8;
  } else {
    if (g.node_count() > 20) throw soc::BudgetExceeded("--verify: graph too large for the sampling oracle");
    const soc::StateGraph sg(inst, false);
    std::size_t nodes = 0;
    double ok = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [s, t] = pairs[k];
      if (cc.measure == "rwbc") {
        if (soc::walk_subgraph(g.arcs(), s, t).empty()) continue;
        ok += rwbc_mc_agreement(g.arcs(), s, t, seed + k, nodes);
      } else {
        const auto fwd = soc::detail::contract_target(sg, t);
        const auto from = sg.indexer().index(s, inst.kappa());
        const auto tau = sg.indexer().index(t, inst.kappa());
        if (soc::walk_subgraph(fwd, from, tau).empty()) continue;
        ok += rwbc_mc_agreement(fwd, from, tau, seed + k, nodes);
      }
    }
    r["nodes_checked"] = nodes;
    r["fraction_within_3se"] = nodes == 0 ? 1.0 : ok / static_cast<double>(nodes);
    r["pass"] = r["fraction_within_3se"].get<double>() >= 0.95;
  }
  return r;
}

int cmd_centrality(const CommonConfig& c, const CentralityConfig& cc) {
  validate(c);
  static const std::vector<std::string> measures{"soc-katz", "katz", "soc-bc", "bc", "soc-rwbc", "rwbc"};
  if (std::find(measures.begin(), measures.end(), cc.measure) == measures.end()) {
    throw soc::InputError("unknown measure '" + cc.measure + "'");
  }
  const bool rwbc = cc.measure == "soc-rwbc" || cc.measure == "rwbc";
  if (rwbc && cc.pairs == 0 && cc.pairs_file.empty()) {
    throw soc::InputError("random-walk measures need --pairs or --pairs-file");
  }
  const auto g = load_graph(c);
  bool all_pass = true;
  for (std::size_t r = 0; r < c.reps; ++r) {
    const Rep rep = make_rep(c, g, r);
    json config = common_json(c);
    config["command"] = "centrality";
    config["measure"] = cc.measure;
    config["rep"] = r;
    config["rep_seed"] = rep.seed;
    json meta = json::object();
    soc::ScoreVector scores;
    double alpha = 0.0;
    std::vector<soc::StPair> pairs;

    if (cc.measure == "soc-katz" || cc.measure == "katz") {
      const soc::AlphaBound bound = cc.measure == "soc-katz"
                                        ? soc::max_alpha(rep.inst, cc.tol)
                                        : soc::alpha_bound_from(soc::spectral_radius(*g, cc.tol));
      alpha = cc.alpha.value_or(std::isfinite(bound.max_alpha) ? 0.9 * bound.max_alpha : 1.0);
      scores = cc.measure == "soc-katz" ? soc::soc_katz(rep.inst, {alpha, cc.tol, cc.max_iter})
                                        : soc::standard_katz(*g, alpha, cc.tol, cc.max_iter);
      meta["max_alpha"] = std::isfinite(bound.max_alpha) ? json(bound.max_alpha) : json("inf");
      meta["lambda_max"] = bound.lambda_max;
      meta["spectral_converged"] = bound.converged;
      config["alpha"] = alpha;
      config["tol"] = cc.tol;
      config["max_iter"] = cc.max_iter;
    } else if (cc.measure == "soc-bc") {
      scores = soc::soc_betweenness(rep.inst);
    } else if (cc.measure == "bc") {
      scores = soc::standard_betweenness(
          *g, cc.exclude_endpoints ? soc::Endpoints::kExcludeBoth : soc::Endpoints::kTargetOnly);
      config["exclude_endpoints"] = cc.exclude_endpoints;
    } else {
      pairs = cc.pairs_file.empty() ? soc::sample_pairs(g->node_count(), cc.pairs, rep.seed)
                                    : read_pairs_file(cc.pairs_file, *g);
      soc::RwbcOptions opt;
      opt.unit_endpoints = cc.unit_endpoints;
      const soc::RwbcResult res =
          cc.measure == "soc-rwbc" ? soc::soc_rwbc(rep.inst, pairs, opt) : soc::standard_rwbc(*g, pairs, opt);
      scores = res.scores;
      json skipped = json::array();
      for (const auto& p : res.skipped) skipped.push_back({g->label(p.source), g->label(p.target)});
      meta["skipped_pairs"] = skipped;
      config["pairs"] = cc.pairs;
      config["pairs_file"] = cc.pairs_file;
      config["unit_endpoints"] = cc.unit_endpoints;
    }
    scores.meta.omega = rep.omega;
    scores.meta.seed = rep.seed;
    meta["score"] = soc::meta_to_json(scores.meta);
    meta["nodes"] = g->node_count();
    meta["edges"] = g->edge_count();
    meta["omega_size"] = rep.inst.omega().size();
    if (cc.verify) {
      meta["verify"] = verify(cc, rep.inst, scores.values, alpha, pairs, rep.seed);
      std::cout << "verify " << meta["verify"].dump() << '\n';
      all_pass = all_pass && meta["verify"]["pass"].get<bool>();
    }
    write_outputs(rep.dir, cc.measure, *g, scores.values, config, meta);
  }
  return all_pass ? 0 : 2;
}

int cmd_simulate(const CommonConfig& c, const SimulateConfig& sc) {
  validate(c);
  if (sc.sim != "sir" && sc.sim != "hopping") throw soc::InputError("unknown simulation '" + sc.sim + "'");
  if (sc.policy != "shortest" && sc.policy != "random") throw soc::InputError("unknown policy '" + sc.policy + "'");
  const auto g = load_graph(c);
  for (std::size_t r = 0; r < c.reps; ++r) {
    const Rep rep = make_rep(c, g, r);
    json config = common_json(c);
    config["command"] = "simulate";
    config["sim"] = sc.sim;
    config["rep"] = r;
    config["rep_seed"] = rep.seed;
    soc::SimOutcome outcome;
    if (sc.sim == "sir") {
      config["alpha"] = sc.alpha;
      config["runs"] = sc.runs;
      config["max_steps"] = sc.max_steps;
      outcome = soc::sir_influence(rep.inst, {sc.alpha, sc.runs, sc.max_steps, rep.seed});
    } else {
      config["policy"] = sc.policy;
      config["duration"] = sc.duration;
      config["injection_rate"] = sc.injection_rate;
      soc::HoppingParams hp;
      hp.policy = sc.policy == "shortest" ? soc::RoutingPolicy::kShortestFeasible
                                          : soc::RoutingPolicy::kRandomFeasible;
      hp.duration = sc.duration;
      hp.injection_rate = sc.injection_rate;
      hp.seed = rep.seed;
      outcome = soc::particle_hopping(rep.inst, hp).outcome;
    }
    outcome.meta["omega"] = rep.omega;
    write_outputs(rep.dir, sc.sim, *g, outcome.values, config, outcome.meta);
  }
  return 0;
}

struct ScoreFile {
  json config = json::object();
  std::vector<std::pair<std::string, double>> rows;
};

ScoreFile read_score_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw soc::InputError("cannot open '" + path.string() + "'");
  ScoreFile f;
  std::string first;
  std::getline(in, first);
  const std::string tag = "# soccent ";
  if (first.rfind(tag, 0) == 0) f.config = json::parse(first.substr(tag.size()), nullptr, false);
  if (f.config.is_discarded()) f.config = json::object();
  in.seekg(0);
  f.rows = soc::read_scores_csv(in);
  return f;
}

json correlate_files(const fs::path& expected, const fs::path& realized, bool tau_b) {
  const ScoreFile e = read_score_file(expected);
  const ScoreFile z = read_score_file(realized);
  std::map<std::string, double> by_label;
  for (const auto& [label, v] : z.rows) {
    if (!by_label.emplace(label, v).second) throw soc::InputError("duplicate label '" + label + "' in realized file");
  }
  if (by_label.size() != e.rows.size()) throw soc::InputError("expected and realized files cover different nodes");
  std::vector<double> y, w;
  for (const auto& [label, v] : e.rows) {
    const auto it = by_label.find(label);
    if (it == by_label.end()) throw soc::InputError("label '" + label + "' missing from realized file");
    y.push_back(v);
    w.push_back(it->second);
  }
  const double tau = soc::kendall_tau(y, w, tau_b ? soc::TauVariant::kTauB : soc::TauVariant::kTauA);
  auto field = [&](const char* key) { return e.config.contains(key) ? e.config[key] : json(nullptr); };
  return {{"measure", field("measure")},
          {"simulation", z.config.contains("sim") ? z.config["sim"] : json(nullptr)},
          {"tau", tau},
          {"variant", tau_b ? "tau-b" : "tau-a"},
          {"n", y.size()},
          {"omega_ratio", field("omega_ratio")},
          {"kappa", field("kappa")},
          {"seed", field("rep_seed")}};
}

// Linear interpolation between order statistics.
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

int cmd_correlate(const CorrelateConfig& cc) {
  if (cc.batch.empty()) {
    if (cc.expected.empty() || cc.realized.empty()) throw soc::InputError("correlate needs --expected and --realized");
    const json report = correlate_files(cc.expected, cc.realized, cc.tau_b);
    if (!cc.out.empty()) {
      std::ofstream out(cc.out, std::ios::binary);
      out << report.dump(2) << '\n';
    }
    std::cout << report.dump() << '\n';
    return 0;
  }
  if (cc.expected_name.empty() || cc.realized_name.empty()) {
    throw soc::InputError("batch mode needs --expected and --realized file names");
  }
  if (!fs::is_directory(cc.batch)) throw soc::InputError("'" + cc.batch + "' is not a directory");
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::recursive_directory_iterator(cc.batch)) {
    if (entry.is_directory() && fs::exists(entry.path() / cc.expected_name) &&
        fs::exists(entry.path() / cc.realized_name)) {
      dirs.push_back(entry.path());
    }
  }
  if (fs::exists(fs::path(cc.batch) / cc.expected_name) && fs::exists(fs::path(cc.batch) / cc.realized_name)) {
    dirs.emplace_back(cc.batch);
  }
  if (dirs.empty()) throw soc::InputError("no repetition directories found under '" + cc.batch + "'");
  std::sort(dirs.begin(), dirs.end());
  std::map<double, std::vector<double>> by_ratio;
  for (const auto& d : dirs) {
    const json r = correlate_files(d / cc.expected_name, d / cc.realized_name, cc.tau_b);
    const double ratio = r["omega_ratio"].is_number() ? r["omega_ratio"].get<double>() : 0.0;
    by_ratio[ratio].push_back(r["tau"].get<double>());
  }
  std::ostringstream csv;
  csv << "omega_ratio,reps,min,q1,median,q3,max,mean\n";
  for (const auto& [ratio, taus] : by_ratio) {
    double mean = 0.0;
    for (double t : taus) mean += t;
    mean /= static_cast<double>(taus.size());
    csv << soc::format_double(ratio) << ',' << taus.size() << ',' << soc::format_double(quantile(taus, 0.0)) << ','
        << soc::format_double(quantile(taus, 0.25)) << ',' << soc::format_double(quantile(taus, 0.5)) << ','
        << soc::format_double(quantile(taus, 0.75)) << ',' << soc::format_double(quantile(taus, 1.0)) << ','
        << soc::format_double(mean) << '\n';
  }
  if (cc.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(cc.out, std::ios::binary);
    out << csv.str();
  }
  return 0;
}

int cmd_generate(const GenerateConfig& gc) {
  soc::Graph g = [&] {
    if (gc.model == "grid") return soc::gen::grid(gc.rows, gc.cols);
    if (gc.model == "path") return soc::gen::path(gc.n);
    if (gc.model == "star") return soc::gen::star(gc.n);
    if (gc.model == "ba") return soc::gen::barabasi_albert(gc.n, gc.m, gc.seed);
    if (gc.model == "er") return soc::gen::erdos_renyi(gc.n, gc.p, gc.directed, gc.seed);
    if (gc.model == "bridged") return soc::gen::bridged_grids(gc.side, gc.bridge);
    throw soc::InputError("unknown model '" + gc.model + "'");
  }();
  if (gc.out.empty()) {
    soc::write_snap_tsv(std::cout, g);
  } else {
    std::ofstream out(gc.out, std::ios::binary);
    if (!out) throw soc::InputError("cannot write '" + gc.out + "'");
    soc::write_snap_tsv(out, g);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"State-of-charge centrality toolkit"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);

  CommonConfig common;
  CentralityConfig cent;
  SimulateConfig sim;
  CorrelateConfig corr;
  GenerateConfig gen;

  auto* c = app.add_subcommand("centrality", "Compute a centrality measure")->configurable();
  add_common(c, common);
  c->add_option("--measure", cent.measure, "soc-katz | katz | soc-bc | bc | soc-rwbc | rwbc")->capture_default_str();
  c->add_option("--alpha", cent.alpha, "Damping factor (default 0.9 / lambda_max)");
  c->add_option("--tol", cent.tol, "Series tolerance")->capture_default_str();
  c->add_option("--max-iter", cent.max_iter, "Series iteration cap")->capture_default_str();
  auto* pairs = c->add_option("--pairs", cent.pairs, "Number of sampled source-target pairs");
  c->add_option("--pairs-file", cent.pairs_file, "Source-target label pairs, one per line")->excludes(pairs);
  c->add_flag("--exclude-endpoints", cent.exclude_endpoints, "bc: credit neither endpoint");
  c->add_flag("--unit-endpoints", cent.unit_endpoints, "rwbc: fix endpoint net flow at 1");
  c->add_flag("--verify", cent.verify, "Check against a reference implementation (small inputs)");

  auto* s = app.add_subcommand("simulate", "Run a spreading or traffic simulation")->configurable();
  add_common(s, common);
  s->add_option("--sim", sim.sim, "sir | hopping")->capture_default_str();
  s->add_option("--alpha", sim.alpha, "SIR transmission probability")->capture_default_str();
  s->add_option("--runs", sim.runs, "SIR episodes per seed node")->capture_default_str();
  s->add_option("--max-steps", sim.max_steps, "SIR round cap per episode")->capture_default_str();
  s->add_option("--policy", sim.policy, "hopping: shortest | random")->capture_default_str();
  s->add_option("--duration", sim.duration, "hopping: time steps")->capture_default_str();
  s->add_option("--injection-rate", sim.injection_rate, "hopping: mean new particles per step")
      ->capture_default_str();

  auto* k = app.add_subcommand("correlate", "Kendall tau between expected and realized scores")->configurable();
  k->add_option("--expected", corr.expected, "Expected-score CSV (file name in batch mode)");
  k->add_option("--realized", corr.realized, "Realized-score CSV (file name in batch mode)");
  k->add_option("--batch", corr.batch, "Root of repetition directories");
  k->add_flag("--tau-b", corr.tau_b, "Use the tie-corrected tau-b");
  k->add_option("--out", corr.out, "Report or summary file");

  auto* gn = app.add_subcommand("generate", "Write a synthetic graph as a SNAP edge list")->configurable();
  gn->add_option("--model", gen.model, "grid | path | star | ba | er | bridged")->capture_default_str();
  gn->add_option("--rows", gen.rows)->capture_default_str();
  gn->add_option("--cols", gen.cols)->capture_default_str();
  gn->add_option("--n", gen.n, "Nodes (path, ba, er) or leaves (star)")->capture_default_str();
  gn->add_option("--m", gen.m, "Edges per new node (ba)")->capture_default_str();
  gn->add_option("--p", gen.p, "Edge probability (er)")->capture_default_str();
  gn->add_option("--side", gen.side, "Grid side (bridged)")->capture_default_str();
  gn->add_option("--bridge", gen.bridge, "Bridge length in edges (bridged)")->capture_default_str();
  gn->add_flag("--directed", gen.directed, "Directed arcs (er)");
  gn->add_option("--seed", gen.seed)->capture_default_str();
  gn->add_option("--out", gen.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (c->parsed()) return cmd_centrality(common, cent);
    if (s->parsed()) return cmd_simulate(common, sim);
    if (k->parsed()) {
      if (!corr.batch.empty()) {
        corr.expected_name = corr.expected;
        corr.realized_name = corr.realized;
      }
      return cmd_correlate(corr);
    }
    return cmd_generate(gen);
  } catch (const soc::NumericalError& e) {
    std::cerr << "soccent: numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::overflow_error& e) {
    std::cerr << "soccent: numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const soc::InputError& e) {
    std::cerr << "soccent: " << e.what() << '\n';
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "soccent: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "soccent: " << e.what() << '\n';
    return 2;
  }
}
