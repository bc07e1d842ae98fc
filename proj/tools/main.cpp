// etcabs command-line frontend: design -> partition -> tables -> bounds ->
// reach -> automaton -> simulate -> validate, with per-stage subcommands.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <set>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "etcabs/care.hpp"
#include "etcabs/matexp.hpp"
#include "etcabs/model_io.hpp"
#include "etcabs/partition.hpp"
#include "etcabs/properties.hpp"
#include "etcabs/reach.hpp"
#include "etcabs/regional_bounds.hpp"
#include "etcabs/sim.hpp"
#include "etcabs/taylor_tables.hpp"
#include "etcabs/trigger.hpp"
#include "etcabs/tsa.hpp"

namespace {

using namespace etcabs;
namespace fs = std::filesystem;

struct Overrides {
  std::string manifest_path;
  std::string out_dir;
  double W = -1, sigma = -1, psi_scale = -1, tau_cap = -1;
  int l = -1, n_conv = -1, m_bar = -1, eta_samples = -1;
  long time_scale = -1;
  long long seed = -1;
  int threads = 0;
  std::vector<double> x0;
};

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("ETCABS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

RunManifest load_with_overrides(const Overrides& o) {
  RunManifest m = load_manifest(o.manifest_path);
  if (!o.out_dir.empty()) m.out_dir = o.out_dir;
  if (o.W >= 0) m.plant.W = o.W;
  if (o.sigma > 0) m.config.sigma = o.sigma;
  if (o.psi_scale > 0) m.config.psi_scale = o.psi_scale;
  if (o.tau_cap >= 0) m.config.tau_cap = o.tau_cap;
  if (o.l > 0) m.config.l = o.l;
  if (o.n_conv > 0) m.config.n_conv = o.n_conv;
  if (o.m_bar > 1) m.config.m_bar = o.m_bar;
  if (o.eta_samples > 1) m.config.eta_samples = o.eta_samples;
  if (o.time_scale > 0) m.config.time_scale = o.time_scale;
  if (o.seed >= 0) m.seed = static_cast<std::uint64_t>(o.seed);
  if (!o.x0.empty()) {
    Vector v(o.x0.size());
    for (size_t i = 0; i < o.x0.size(); ++i) v(i) = o.x0[i];
    m.x0 = v;
  }
  return m;
}

struct StageClock {
  std::vector<std::pair<std::string, double>> entries;
  std::chrono::steady_clock::time_point mark =
      std::chrono::steady_clock::now();
  void lap(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    entries.emplace_back(
        name, std::chrono::duration<double>(now - mark).count());
    mark = now;
  }
};

// Everything the pipeline accumulates; stages fill it in order.
struct Pipeline {
  RunManifest manifest;
  int threads = 1;
  EtcDesign design;
  double tau_prime = 0;
  std::vector<ConicRegion> cones;
  EmbeddingTables tables;
  std::vector<RegionTiming> timings;
  double epsilon = 0;
  int epsilon_region = 0;
  std::vector<ReachSummary> reach;
  EdgeSet edge_set;
  TimedSafetyAutomaton tsa;
  std::vector<Trace> traces;
  StageClock clock;

  void stage_design() {
    design = make_design(manifest.plant, manifest.config.psi_scale);
    SigmaDiagnostic diag =
        validate_sigma(design, manifest.plant.W, manifest.config.sigma);
    if (!diag.enabled)
      std::cerr << "warning: certificate still negative at sigma; upper "
                   "bounds will saturate\n";
    tau_prime = global_tau_prime(design, manifest.plant.W,
                                 manifest.config.sigma, 4 * manifest.config.l);
    clock.lap("design");
  }
  void stage_partition() {
    cones = make_cones(manifest.config.m_bar,
                       static_cast<int>(manifest.plant.n()));
    clock.lap("partition");
  }
  void stage_tables() {
    tables = build_tables(design, manifest.plant.W, manifest.config.sigma,
                          manifest.config.l, manifest.config.n_conv);
    estimate_eta(tables, design, manifest.config.eta_samples);
    clock.lap("tables");
  }
  void stage_bounds() {
    timings = compute_timings(cones, tables, manifest.config.tau_cap, threads);
    epsilon = precision_epsilon(timings, &epsilon_region);
    clock.lap("bounds");
  }
  void stage_reach() {
    reach = compute_reach(cones, timings, design, manifest.plant.W,
                          manifest.config.sigma, manifest.config.l);
    edge_set = edges(reach, cones);
    clock.lap("reach");
  }
  void stage_automaton() {
    int initial = 0;
    if (manifest.x0) initial = locate(*manifest.x0, cones);
    tsa = assemble(timings, edge_set, initial, manifest.config.time_scale);
    clock.lap("automaton");
  }
  void stage_simulate(int n_traces, double horizon) {
    traces.clear();
    std::mt19937_64 rng(manifest.seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * 3.14159265358979324);
    const Policy pols[] = {Policy::kZero, Policy::kMaxAligned,
                           Policy::kSinusoid, Policy::kRandomPhase};
    for (int i = 0; i < n_traces; ++i) {
      Vector x0;
      if (manifest.x0 && i == 0) {
        x0 = *manifest.x0;
      } else {
        const double a = uni(rng);
        x0 = Eigen::Vector2d(std::cos(a), std::sin(a));
      }
      SimConfig sc;
      sc.horizon = horizon;
      sc.policy = pols[i % 4];
      sc.sinusoid_freq = 1.0 + (i % 7);
      sc.seed = manifest.seed + 1000003ULL * i;
      sc.cap = manifest.config.sigma;
      traces.push_back(run(design, manifest.plant.W, x0, sc, cones));
    }
    clock.lap("simulate");
  }
};

Table bounds_table(const Pipeline& p) {
  Table t;
  t.names = {"s", "theta_lo", "theta_hi", "tau_lo", "tau_hi", "saturated"};
  t.columns.assign(6, {});
  for (const RegionTiming& rt : p.timings) {
    const ConicRegion& c = p.cones[rt.index - 1];
    t.columns[0].push_back(rt.index);
    t.columns[1].push_back(c.theta_lo);
    t.columns[2].push_back(c.theta_hi);
    t.columns[3].push_back(rt.tau_lo);
    t.columns[4].push_back(rt.tau_hi);
    t.columns[5].push_back(rt.saturated_hi ? 1 : 0);
  }
  return t;
}

Table edges_table(const Pipeline& p) {
  Table t;
  t.names = {"s", "t"};
  t.columns.assign(2, {});
  for (auto [s, d] : p.edge_set) {
    t.columns[0].push_back(s);
    t.columns[1].push_back(d);
  }
  return t;
}

Table trace_table(const Pipeline& p, const Trace& tr) {
  Table t;
  t.names = {"k", "t_k", "x1", "x2", "tau_k", "region", "tau_lo", "tau_hi",
             "cap_hit"};
  t.columns.assign(9, {});
  for (size_t k = 0; k < tr.tau_k.size(); ++k) {
    const int r = tr.regions[k];
    t.columns[0].push_back(static_cast<double>(k));
    t.columns[1].push_back(tr.t_k[k]);
    t.columns[2].push_back(tr.x_k[k](0));
    t.columns[3].push_back(tr.x_k[k](1));
    t.columns[4].push_back(tr.tau_k[k]);
    t.columns[5].push_back(r);
    t.columns[6].push_back(p.timings[r - 1].tau_lo);
    t.columns[7].push_back(p.timings[r - 1].tau_hi);
    t.columns[8].push_back(tr.cap_hit[k] ? 1 : 0);
  }
  return t;
}

void write_file(const fs::path& path, const std::string& data) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EtcabsError("cannot write " + path.string());
  out << data;
}

struct ValidationSummary {
  int traces = 0;
  int events = 0;
  int lower_violations = 0;
  int upper_violations = 0;
  int missing_edges = 0;
  int rejected_traces = 0;
  bool clean() const {
    return lower_violations == 0 && upper_violations == 0 &&
           missing_edges == 0 && rejected_traces == 0;
  }
};

ValidationSummary validate_traces(const Pipeline& p) {
  ValidationSummary v;
  const double tol = 1e-3;
  std::set<std::pair<int, int>> edge_lookup(p.edge_set.begin(),
                                            p.edge_set.end());
  for (const Trace& tr : p.traces) {
    ++v.traces;
    for (size_t k = 0; k < tr.tau_k.size(); ++k) {
      ++v.events;
      const RegionTiming& rt = p.timings[tr.regions[k] - 1];
      if (tr.tau_k[k] < rt.tau_lo - tol) ++v.lower_violations;
      if (!tr.cap_hit[k] && tr.tau_k[k] > rt.tau_hi + tol)
        ++v.upper_violations;
      if (!edge_lookup.count({tr.regions[k], tr.regions[k + 1]}))
        ++v.missing_edges;
    }
    if (!accepts(p.tsa, tr.regions, tr.tau_k)) ++v.rejected_traces;
  }
  return v;
}

std::string format_report(const Pipeline& p, const ValidationSummary* val) {
  std::ostringstream o;
  o.precision(9);
  o << "etcabs run report\n=================\n\nmanifest:\n"
    << serialize_manifest(p.manifest) << "\n\n";
  o << "design:\n  K = [";
  for (Eigen::Index i = 0; i < p.design.K.cols(); ++i)
    o << (i ? ", " : "") << p.design.K(0, i);
  o << "]\n  lambda_max(A+A^T) = " << p.design.lambda_max_A
    << "\n  lambda_max(E^T E) = " << p.design.lambda_max_EtE
    << "\n  mu = " << p.design.mu << "\n  psi = " << p.design.Psi(0, 0)
    << "\n  eta = " << p.tables.eta
    << "  (sampled remainder maximization, 1.1 safety factor; soundness up "
       "to the sampling density)\n"
    << "  tau_prime = " << p.tau_prime << "\n\n";
  if (!p.timings.empty()) {
    o << "bounds (s: [tau_lo, tau_hi]):\n";
    for (const RegionTiming& rt : p.timings)
      o << "  " << rt.index << ": [" << rt.tau_lo << ", " << rt.tau_hi << "]"
        << (rt.saturated_hi ? " (saturated)" : "") << "\n";
    o << "epsilon = " << p.epsilon << " (region " << p.epsilon_region
      << ")\n\n";
  }
  if (!p.edge_set.empty())
    o << "edges: " << p.edge_set.size() << "\n\n";
  if (!p.tsa.location_names.empty())
    o << "automaton: " << p.tsa.location_names.size() << " locations, "
      << p.tsa.edges.size() << " edges, time_scale = " << p.tsa.time_scale
      << ", initial = " << p.tsa.initial << "\n\n";
  if (val) {
    o << "validation:\n  traces = " << val->traces
      << "\n  events = " << val->events
      << "\n  lower_violations = " << val->lower_violations
      << "\n  upper_violations = " << val->upper_violations
      << "\n  missing_edges = " << val->missing_edges
      << "\n  rejected_traces = " << val->rejected_traces << "\n\n";
  }
  o << "stage timings (s):\n";
  for (const auto& [name, secs] : p.clock.entries)
    o << "  " << name << ": " << secs << "\n";
  return o.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timed-automaton abstraction of event-triggered control "
               "sampling behavior"};
  app.require_subcommand(1);

  Overrides o;
  int n_traces = 100;
  double horizon = 15.0;
  bool recompute = false;
  std::string stages = "all";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("manifest", o.manifest_path, "Run manifest (JSON)")
        ->required();
    cmd->add_option("--out", o.out_dir, "Output directory override");
    cmd->add_option("--seed", o.seed, "Seed override");
    cmd->add_option("--threads", o.threads,
                    "Worker threads (or ETCABS_THREADS)");
    cmd->add_option("--W", o.W, "Disturbance gain override");
    cmd->add_option("--sigma", o.sigma, "Horizon override");
    cmd->add_option("--l", o.l, "Time subdivisions override");
    cmd->add_option("--n-conv", o.n_conv, "Taylor order override");
    cmd->add_option("--m-bar", o.m_bar, "Angular subdivisions override");
    cmd->add_option("--psi-scale", o.psi_scale, "Psi scale override");
    cmd->add_option("--eta-samples", o.eta_samples,
                    "Remainder sample count override");
    cmd->add_option("--time-scale", o.time_scale, "Clock ticks per second");
    cmd->add_option("--tau-cap", o.tau_cap, "Arbitrated upper-bound cap");
    cmd->add_option("--x0", o.x0, "Initial state components");
  };

  CLI::App* c_design = app.add_subcommand("design", "Controller design only");
  CLI::App* c_bounds = app.add_subcommand("bounds", "Regional timing bounds");
  CLI::App* c_reach = app.add_subcommand("reach", "Reachability edge set");
  CLI::App* c_auto = app.add_subcommand("automaton", "Assemble and export");
  CLI::App* c_sim = app.add_subcommand("simulate", "Closed-loop traces");
  CLI::App* c_val = app.add_subcommand("validate", "Soundness harness");
  CLI::App* c_pipe = app.add_subcommand("pipeline", "All stages");
  for (CLI::App* c : {c_design, c_bounds, c_reach, c_auto, c_sim, c_val,
                      c_pipe})
    add_common(c);
  c_sim->add_option("--traces", n_traces, "Trace count");
  c_sim->add_option("--horizon", horizon, "Simulation horizon (s)");
  c_val->add_option("--traces", n_traces, "Trace count");
  c_val->add_option("--horizon", horizon, "Simulation horizon (s)");
  c_val->add_flag("--recompute", recompute,
                  "Recompute pipeline instead of reading artifacts");
  c_pipe->add_option("--traces", n_traces, "Trace count");
  c_pipe->add_option("--horizon", horizon, "Simulation horizon (s)");
  c_pipe->add_option("--stages", stages,
                     "Comma list of stages to run (default all)");

  CLI11_PARSE(app, argc, argv);

  try {
    Pipeline p;
    p.manifest = load_with_overrides(o);
    p.threads = resolve_threads(o.threads);
    const fs::path out = p.manifest.out_dir;
    auto enabled = [&](const std::string& s) {
      return stages == "all" ||
             (("," + stages + ",").find("," + s + ",") != std::string::npos);
    };

    const std::string cmd = app.get_subcommands().front()->get_name();
    ValidationSummary val;
    bool has_val = false;

    (void)recompute;  // the harness always recomputes in-memory
    p.stage_design();
    if (cmd == "design" || (cmd == "pipeline" && !enabled("bounds") &&
                            stages != "all")) {
      write_file(out / "report.txt", format_report(p, nullptr));
      std::cout << (out / "report.txt").string() << "\n";
      return 0;
    }

    p.stage_partition();
    p.stage_tables();
    p.stage_bounds();
    write_file(out / "bounds.csv", emit_csv(bounds_table(p)));

    if (cmd == "bounds") {
      write_file(out / "report.txt", format_report(p, nullptr));
      std::cout << (out / "report.txt").string() << "\n";
      return 0;
    }

    p.stage_reach();
    write_file(out / "edges.csv", emit_csv(edges_table(p)));
    if (cmd == "reach") {
      write_file(out / "report.txt", format_report(p, nullptr));
      std::cout << (out / "report.txt").string() << "\n";
      return 0;
    }

    p.stage_automaton();
    write_file(out / "automaton.xml", export_tsa(p.tsa, "uppaal-xml"));
    write_file(out / "automaton.json", export_tsa(p.tsa, "json"));
    write_file(out / "automaton.dot", export_tsa(p.tsa, "dot"));
    if (cmd == "automaton") {
      write_file(out / "report.txt", format_report(p, nullptr));
      std::cout << (out / "report.txt").string() << "\n";
      return 0;
    }

    if (cmd == "simulate" || cmd == "validate" || cmd == "pipeline") {
      p.stage_simulate(n_traces, horizon);
      for (size_t i = 0; i < p.traces.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "trace_%03zu.csv", i);
        write_file(out / "traces" / name,
                   emit_csv(trace_table(p, p.traces[i])));
      }
    }
    if (cmd == "validate" || cmd == "pipeline") {
      val = validate_traces(p);
      has_val = true;
      p.clock.lap("validate");
    }

    write_file(out / "report.txt",
               format_report(p, has_val ? &val : nullptr));
    std::cout << (out / "report.txt").string() << "\n";
    if (has_val && !val.clean()) {
      std::cerr << "validation violations detected\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
