// fkstar: batch front-end for the space-time random-cluster toolkit.
//
//   fkstar sample     --graph data/z.json --q 1 --lambda 0.8 --n 4 --seed 3
//   fkstar theta      --graph data/star3.json --q 2 --ratio 1.5 --sizes 2,4,8
//   fkstar decay      --graph data/z.json --q 2 --ratio 1 --bc wired --sizes 4,8,12,16
//   fkstar scan       --graph data/star3.json --q 2 --ratios 1.2:2.8:0.2 --sizes 8,16,32 --seed 7
//   fkstar dual-check --graph data/z.json --lambda 2 --delta 1 --bc wired --n 6
//   fkstar ed-check   --graph data/star3.json --lambda 2 --delta 1 --beta 4
//
// Exit codes: 0 ok, 1 unexpected failure, 2 usage or validation error,
// 3 a statistical check failed (or a scan found no crossing).

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <fmt/format.h>

#include "fkstar/duality.hpp"
#include "fkstar/io.hpp"
#include "fkstar/observables.hpp"
#include "fkstar/oracle_ed.hpp"

using namespace fkstar;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCheck = 3;

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string graph;
  double q = 2.0;
  std::optional<double> lambda;
  std::optional<double> ratio;
  double delta = 1.0;
  std::string bc = "free";
  std::int64_t n = 4;
  std::string sizes;
  std::string ratios;
  std::string region = "lambda";
  std::int64_t a_max = 0;
  std::int64_t samples = 10000;
  std::optional<std::int64_t> burn_in;
  std::optional<std::int64_t> thinning;
  std::string move;
  std::uint64_t seed = 1;
  int chains = 1;
  double beta = 4.0;
  std::int64_t arm_length = 1;
  double z_limit = 3.0;
  double pass_fraction = 0.95;
  std::string out = "results.csv";
  std::string manifest;
  std::string snapshot;
};

std::vector<std::int64_t> parse_sizes(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error(ErrorCode::kInvalidArgument, "bad size '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "--sizes is empty");
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error(ErrorCode::kInvalidArgument, "bad number '" + s + "'");
  return v;
}

// "lo:hi:step" or a comma list.
std::vector<double> parse_ratios(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw Error(ErrorCode::kInvalidArgument, "--ratios wants lo:hi:step");
    double lo = parse_number(parts[0]), hi = parse_number(parts[1]), step = parse_number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw Error(ErrorCode::kInvalidArgument, "--ratios needs lo <= hi and step > 0");
    // by index, so the grid does not drift
    for (int i = 0; lo + i * step <= hi + 1e-9 * step; ++i) out.push_back(lo + i * step);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "--ratios is empty");
  return out;
}

std::string graph_name(const std::string& path) { return std::filesystem::path(path).stem().string(); }

RCParams params_of(const Options& o) {
  if (o.lambda && o.ratio) throw Error(ErrorCode::kInvalidArgument, "give --lambda or --ratio, not both");
  RCParams p;
  p.q = o.q;
  p.delta = o.delta;
  p.lambda = o.lambda ? *o.lambda : o.ratio ? *o.ratio * o.delta : 1.0;
  p.bc = parse_boundary(o.bc);
  p.validate();
  return p;
}

MoveKind move_of(const Options& o, double q) {
  if (!o.move.empty()) return parse_move(o.move);
  if (q == 1.0) return MoveKind::kDirect;
  if (q == 2.0) return MoveKind::kCluster;
  return MoveKind::kBirthDeath;
}

Schedule schedule_of(const Options& o, const Region& r, double q) {
  Schedule s = default_schedule(r, move_of(o, q), o.samples, o.seed);
  if (o.burn_in) s.burn_in = *o.burn_in;
  if (o.thinning) s.thinning = *o.thinning;
  return s;
}

StarLikeGraph load_star(const Options& o) {
  if (o.graph.empty()) throw Error(ErrorCode::kInvalidArgument, "--graph is required");
  return build_star_like(load_graph_spec(o.graph));
}

ResultRow row_of(const Options& o, const std::string& run_id, const Region& r, const Schedule& s, EstimateCI e) {
  return {run_id, graph_name(o.graph), r.label(), r.n(), s.seed, std::move(e)};
}

struct Output {
  std::vector<ResultRow> rows;
  json results = json::object();  // command-specific summary for the manifest
  std::string extra_csv;          // dual-check report
};

Output run_sample(const Options& o) {
  auto g = load_star(o);
  RCParams p = params_of(o);
  RegionSpec spec;
  spec.kind = o.region == "box" ? RegionKind::kBox : RegionKind::kLambda;
  if (o.region != "box" && o.region != "lambda") throw Error(ErrorCode::kInvalidArgument, "--region is lambda or box");
  spec.n = o.n;
  Region r = make_region(g, spec, p.bc);
  Schedule s = schedule_of(o, r, p.q);
  std::vector<std::string> names{"clusters", "bridges", "deaths", "theta"};
  std::optional<Configuration> last;
  auto reach = boundary_indicator(r, {g.origin(), 0.0});
  TallySet t = run_chains(r, p, s, o.chains, TallySet(4), [&](TallySet& acc, const SampleView& v) {
    acc[0].add(static_cast<double>(v.labeling.components()));
    acc[1].add(static_cast<double>(v.events.bridge_count()));
    acc[2].add(static_cast<double>(v.events.death_count()));
    acc[3].add(reach(v));
    if (!o.snapshot.empty() && v.chain == 0 && v.index + 1 == s.n_samples) last = to_configuration(v.events, v.region);
  });
  Output out;
  for (std::size_t i = 0; i < names.size(); ++i) out.rows.push_back(row_of(o, "sample", r, s, t[i].estimate(names[i], p)));
  if (last) write_text_file(o.snapshot, serialize_configuration(*last, g));
  out.results["run"] = json::parse(run_manifest(r, p, s, o.chains));
  return out;
}

Output run_theta(const Options& o) {
  auto g = load_star(o);
  RCParams p = params_of(o);
  Output out;
  std::vector<std::int64_t> sizes = o.sizes.empty() ? std::vector<std::int64_t>{o.n} : parse_sizes(o.sizes);
  for (std::int64_t n : sizes) {
    Region r = lambda_region(g, n, p.bc);
    Schedule s = schedule_of(o, r, p.q);
    out.rows.push_back(row_of(o, fmt::format("theta-{}", n), r, s, estimate_theta(g, n, p, s, o.chains)));
  }
  return out;
}

Output run_decay(const Options& o) {
  auto g = load_star(o);
  RCParams p = params_of(o);
  if (o.sizes.empty()) throw Error(ErrorCode::kInvalidArgument, "decay needs --sizes (at least 4)");
  Output out;
  std::vector<std::pair<std::int64_t, EstimateCI>> pts;
  for (std::int64_t n : parse_sizes(o.sizes)) {
    bool box = o.region == "box";
    if (!box && o.region != "lambda") throw Error(ErrorCode::kInvalidArgument, "--region is lambda or box");
    Region r = box ? box_region(g, n, 0, 0.0, p.bc) : lambda_region(g, n, p.bc);
    Schedule s = schedule_of(o, r, p.q);
    EstimateCI e = box ? estimate_box_reach(g, n, p, s, o.chains) : estimate_theta(g, n, p, s, o.chains);
    pts.push_back({n, e});
    out.rows.push_back(row_of(o, fmt::format("decay-{}", n), r, s, e));
  }
  DecayFit f = fit_decay(pts);
  out.results = {{"alpha_hat", f.alpha_hat},   {"alpha_se", f.alpha_se}, {"intercept", f.intercept},
                 {"n_lo", f.n_lo},             {"n_hi", f.n_hi},         {"chi2_per_dof", f.chi2_per_dof},
                 {"points", f.points}};
  return out;
}

Output run_scan(const Options& o) {
  auto g = load_star(o);
  if (o.sizes.empty() || o.ratios.empty()) throw Error(ErrorCode::kInvalidArgument, "scan needs --sizes and --ratios");
  std::vector<std::int64_t> sizes = parse_sizes(o.sizes);
  std::vector<double> ratios = parse_ratios(o.ratios);
  RCParams probe{ratios.front() * o.delta, o.delta, o.q, Boundary::kFree};
  probe.validate();
  Region r0 = lambda_region(g, sizes.front(), Boundary::kFree);
  Schedule s = schedule_of(o, r0, o.q);
  Output out;
  std::vector<ScanPoint> table;
  try {
    ScanResult res = scan_critical(g, o.q, ratios, sizes, s, o.delta, o.chains);
    table = res.table;
    out.results = {{"rho_hat", res.rho_hat}, {"bracket", {res.bracket_lo, res.bracket_hi}}};
    json crossings = json::array();
    for (const auto& c : res.crossings) {
      crossings.push_back({{"n_small", c.n_small}, {"n_large", c.n_large}, {"lo", c.lo}, {"hi", c.hi}, {"rho", c.rho}});
    }
    out.results["crossings"] = crossings;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoBracketing) throw;
    throw CheckFailed(e.what());
  }
  for (const auto& pt : table) {
    Region r = lambda_region(g, pt.n, Boundary::kFree);
    out.rows.push_back(row_of(o, fmt::format("scan-{}-{}", pt.n, pt.ratio), r, s, pt.estimate));
  }
  return out;
}

Output run_dual_check(const Options& o, bool& failed) {
  auto g = load_star(o);
  RCParams p = params_of(o);
  Region primal = lambda_region(g, o.n, p.bc);
  Schedule ps = schedule_of(o, primal, p.q);
  Schedule ds = ps;
  ds.seed = o.seed + 1;
  DualityReport rep = duality_check(g, p, o.n, ps, ds, o.chains);
  rep.z_limit = o.z_limit;
  Output out;
  out.extra_csv = duality_csv(rep);
  double pass = rep.pass_fraction();
  out.results = {{"pass_fraction", pass},
                 {"required", o.pass_fraction},
                 {"z_limit", o.z_limit},
                 {"primal_region", rep.primal_region},
                 {"direct_region", rep.direct_region},
                 {"dual_params",
                  {{"q", rep.dual_params.q}, {"lambda", rep.dual_params.lambda}, {"delta", rep.dual_params.delta},
                   {"bc", to_string(rep.dual_params.bc)}}}};
  failed = pass < o.pass_fraction;
  return out;
}

Output run_ed_check(const Options& o, bool& failed) {
  if (o.graph.empty()) throw Error(ErrorCode::kInvalidArgument, "--graph is required");
  GraphSpec spec = load_graph_spec(o.graph);
  FiniteGraph g = spec.rays.empty() ? build_finite_graph(spec) : truncate(build_star_like(spec), o.arm_length);
  RCParams p = params_of(o);
  if (o.q != 2.0) throw Error(ErrorCode::kUnsupportedQ, "ed-check compares with the quantum Ising model, q = 2");
  p.bc = Boundary::kPeriodic;
  Region r = finite_region(g, o.beta, Boundary::kPeriodic);
  Schedule s = schedule_of(o, r, p.q);
  if (!o.thinning && s.move == MoveKind::kCluster) s.thinning = 5;
  int origin = static_cast<int>(g.origin().index);
  std::vector<std::string> names;
  std::vector<Observable> events;
  std::vector<double> exact;
  for (int y = 0; y < g.vertex_count(); ++y) {
    if (y == origin) continue;
    names.push_back(fmt::format("conn:{}-{}", g.vertex_name({kCoreRay, origin}), g.vertex_name({kCoreRay, y})));
    events.push_back(connection_indicator(r, {{kCoreRay, origin}, 0.0}, {{kCoreRay, y}, 0.0}));
    exact.push_back(finite_beta_correlation(g, p.lambda, p.delta, o.beta, origin, y));
  }
  auto est = estimate_observables(r, p, s, o.chains, names, events);
  Output out;
  json checks = json::array();
  failed = false;
  for (std::size_t i = 0; i < est.size(); ++i) {
    double z = z_score(est[i].mean, est[i].std_error, exact[i], 0.0);
    failed = failed || !(std::abs(z) <= o.z_limit);
    checks.push_back({{"observable", names[i]}, {"fk", est[i].mean}, {"se", est[i].std_error}, {"ed", exact[i]},
                      {"z", z}});
    out.rows.push_back({"ed-check", graph_name(o.graph), r.label(), r.n(), s.seed, est[i]});
  }
  out.results = {{"checks", checks}, {"z_limit", o.z_limit}};
  return out;
}

void add_common(CLI::App* c, Options& o) {
  c->add_option("--graph", o.graph, "graph JSON file");
  c->add_option("--q", o.q, "cluster weight q >= 1");
  c->add_option("--lambda", o.lambda, "bridge intensity");
  c->add_option("--ratio", o.ratio, "lambda / delta (instead of --lambda)");
  c->add_option("--delta", o.delta, "death intensity");
  c->add_option("--bc", o.bc, "free | wired | periodic");
  c->add_option("--samples", o.samples, "kept samples per chain");
  c->add_option("--burn-in", o.burn_in, "steps before the first sample");
  c->add_option("--thinning", o.thinning, "steps between samples");
  c->add_option("--move", o.move, "birth-death | cluster | direct (default by q)");
  c->add_option("--seed", o.seed, "master seed");
  c->add_option("--chains", o.chains, "independent chains");
  c->add_option("--out", o.out, "results CSV path");
  c->add_option("--manifest", o.manifest, "manifest JSON path (default: <out>.manifest.json)");
}

// Every option the user gave, as the raw strings from the command line.
json echo_inputs(const CLI::App* sub) {
  json spec = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    auto res = opt->results();
    std::string name = opt->get_name();
    if (name.rfind("--", 0) == 0) name = name.substr(2);
    spec[name] = res.size() == 1 ? json(res[0]) : json(res);
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time random-cluster toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* sample = app.add_subcommand("sample", "sample a region and report basic observables");
  add_common(sample, o);
  sample->add_option("--n", o.n, "region size");
  sample->add_option("--region", o.region, "lambda | box");
  sample->add_option("--snapshot", o.snapshot, "write the last configuration of chain 0 as JSON");

  auto* theta = app.add_subcommand("theta", "boundary-reach probability of the origin in Lambda_n");
  add_common(theta, o);
  theta->add_option("--n", o.n, "region size");
  theta->add_option("--sizes", o.sizes, "comma-separated sizes");

  auto* decay = app.add_subcommand("decay", "boundary reach over sizes and an exponential fit");
  add_common(decay, o);
  decay->add_option("--sizes", o.sizes, "comma-separated sizes (>= 4)");
  decay->add_option("--region", o.region, "lambda | box");

  auto* scan = app.add_subcommand("scan", "critical-ratio scan by spanning-curve crossings");
  add_common(scan, o);
  scan->add_option("--ratios", o.ratios, "lo:hi:step or a comma list of lambda/delta");
  scan->add_option("--sizes", o.sizes, "comma-separated sizes (>= 3)");

  auto* dual = app.add_subcommand("dual-check", "duality check on Z against direct dual samples");
  add_common(dual, o);
  dual->add_option("--n", o.n, "primal Lambda_n size (>= 4)");
  dual->add_option("--z-limit", o.z_limit, "per-event |z| limit");
  dual->add_option("--pass-fraction", o.pass_fraction, "required fraction of passing events");

  auto* ed = app.add_subcommand("ed-check", "FK connection vs exact-diagonalization correlation");
  add_common(ed, o);
  ed->add_option("--beta", o.beta, "inverse temperature = periodic time height");
  ed->add_option("--arm-length", o.arm_length, "truncation of star-like graphs");
  ed->add_option("--z-limit", o.z_limit, "per-pair |z| limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  std::string command = sub->get_name();
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (command == "ed-check" && !sub->get_option("--bc")->count()) o.bc = "periodic";
    if (command == "ed-check" && !sub->get_option("--q")->count()) o.q = 2.0;
    bool failed = false;
    Output out;
    if (command == "sample") out = run_sample(o);
    if (command == "theta") out = run_theta(o);
    if (command == "decay") out = run_decay(o);
    if (command == "scan") out = run_scan(o);
    if (command == "dual-check") out = run_dual_check(o, failed);
    if (command == "ed-check") out = run_ed_check(o, failed);

    write_text_file(o.out, out.extra_csv.empty() ? results_csv(out.rows) : out.extra_csv);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json m = make_manifest(command, {{"inputs", echo_inputs(sub)}, {"results", out.results}}, o.seed, wall);
    std::string mpath = o.manifest.empty() ? o.out + ".manifest.json" : o.manifest;
    write_text_file(mpath, m.dump(2) + "\n");
    std::cout << out.results.dump(2) << "\n";
    if (failed) {
      std::cerr << command << ": statistical check failed\n";
      return kExitCheck;
    }
    return kExitOk;
  } catch (const CheckFailed& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return kExitCheck;
  } catch (const Error& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return kExitFailure;
  }
}
