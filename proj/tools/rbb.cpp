// rbb: command-line driver for simulations, experiments, the exact oracle,
// the check suite and SVG plots.
//
// Exit codes: 0 success, 1 a check failed, 2 configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rbb/checks.hpp"
#include "rbb/exact_oracle.hpp"
#include "rbb/experiments.hpp"
#include "rbb/plot.hpp"
#include "rbb/table.hpp"
#include "rbb/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

// flag > RBB_SEED > 42
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RBB_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("RBB_SEED is not an unsigned integer: '") + env + "'");
  }
  return 42;
}

rbb::InitialConfig parse_init(const std::string& text) {
  if (text == "uniform") return rbb::InitialConfig::uniform();
  if (text == "single") return rbb::InitialConfig::single_bin();
  if (text.rfind("file:", 0) == 0) {
    const std::string path = text.substr(5);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read init file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string flat;
    for (char c : buf.str()) {
      if (c == '\n' || c == ' ' || c == '\t' || c == '\r') {
        if (!flat.empty() && flat.back() != ',') flat += ',';
      } else {
        flat += c;
      }
    }
    while (!flat.empty() && flat.back() == ',') flat.pop_back();
    const rbb::LoadVector x = rbb::LoadVector::parse(flat);
    return rbb::InitialConfig::from_loads({x.loads().begin(), x.loads().end()});
  }
  throw ConfigError("--init must be uniform, single or file:<path>, got '" + text + "'");
}

void write_table(const rbb::ResultTable& table, const Common& common) {
  auto emit = [&](std::ostream& os) {
    if (common.format == "json") {
      rbb::write_json(os, table);
    } else {
      rbb::write_csv(os, table);
    }
  };
  if (common.out.empty() || common.out == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream f(common.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + common.out + "'");
  emit(f);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "Master seed (overrides RBB_SEED; default 42)");
  cmd->add_option("--out", common.out, "Output path (default stdout)");
  cmd->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

std::string svg_path_for(const std::string& out) {
  if (out.empty() || out == "-") return "plot.svg";
  const auto dot = out.find_last_of('.');
  const auto slash = out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return out.substr(0, dot) + ".svg";
  }
  return out + ".svg";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeated balls-into-bins simulator and validation harness"};
  app.require_subcommand(1);

  Common common;

  // simulate
  std::size_t sim_n = 100;
  rbb::Load sim_m = 1000;
  std::uint64_t sim_rounds = 1000;
  std::string sim_init = "uniform";
  std::string sim_alpha = "practical";
  std::string sim_process = "rbb";
  auto* sim = app.add_subcommand("simulate", "Run one trace and print per-round observables");
  sim->add_option("--n", sim_n, "Bins")->check(CLI::PositiveNumber);
  sim->add_option("--m", sim_m, "Balls")->check(CLI::NonNegativeNumber);
  sim->add_option("--rounds", sim_rounds, "Rounds");
  sim->add_option("--init", sim_init, "uniform | single | file:<path>");
  sim->add_option("--alpha", sim_alpha, "paper | practical | <float>");
  sim->add_option("--process", sim_process, "rbb | idealized")
      ->check(CLI::IsMember({"rbb", "idealized"}));
  add_common(sim, common);

  // experiment / traversal
  std::string exp_name;
  std::vector<std::size_t> exp_n;
  std::vector<rbb::Load> exp_m;
  std::vector<double> exp_mult;
  std::optional<std::uint64_t> exp_rounds;
  std::optional<std::uint64_t> exp_reps;
  std::optional<std::uint64_t> exp_burn_in;
  std::optional<std::uint64_t> exp_cap;
  std::string exp_init;
  std::string exp_alpha = "practical";
  double threshold_factor = 1.5;
  bool want_plot = false;
  unsigned threads = 1;
  bool paper_scale = false;
  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--n", exp_n, "Bin counts (repeatable)")->check(CLI::PositiveNumber);
    cmd->add_option("--m", exp_m, "Absolute ball counts (repeatable)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--m-mult", exp_mult, "Ball counts as multiples of n (repeatable)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--reps", exp_reps, "Repetitions per (n, m)");
    cmd->add_option("--init", exp_init, "uniform | single | file:<path>");
    cmd->add_option("--alpha", exp_alpha, "paper | practical | <float>");
    cmd->add_flag("--plot", want_plot, "Also write an SVG next to --out");
    cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--paper-scale", paper_scale, "Use the full-scale grid and run lengths");
    add_common(cmd, common);
  };
  auto* exp = app.add_subcommand("experiment", "max_load | empty_fraction | convergence | traversal");
  exp->add_option("name", exp_name, "Experiment")
      ->required()
      ->check(CLI::IsMember({"max_load", "empty_fraction", "convergence", "traversal"}));
  exp->add_option("--rounds", exp_rounds, "Rounds per rep (cap for convergence)");
  exp->add_option("--burn-in", exp_burn_in, "Empty-fraction burn-in (default rounds/10)");
  exp->add_option("--threshold-factor", threshold_factor, "Convergence threshold factor")
      ->check(CLI::PositiveNumber);
  exp->add_option("--cap", exp_cap, "Traversal round cap (default 60 m ln m)");
  add_grid(exp);

  auto* trav = app.add_subcommand("traversal", "Cover times under FIFO queues");
  trav->add_option("--cap", exp_cap, "Round cap (default 60 m ln m)");
  add_grid(trav);

  // oracle
  std::size_t or_n = 2;
  rbb::Load or_m = 2;
  std::string or_state;
  std::string or_what = "stationary";
  auto* oracle = app.add_subcommand("oracle", "Exact one-step law, kernel or stationary distribution");
  oracle->add_option("--n", or_n, "Bins")->check(CLI::PositiveNumber);
  oracle->add_option("--m", or_m, "Balls")->check(CLI::NonNegativeNumber);
  oracle->add_option("--what", or_what, "stationary | kernel | step")
      ->check(CLI::IsMember({"stationary", "kernel", "step"}));
  oracle->add_option("--state", or_state, "Comma-separated loads for --what step");
  add_common(oracle, common);

  // check
  std::vector<std::string> check_names;
  bool list_checks = false;
  bool verbose = false;
  auto* check = app.add_subcommand("check", "Run validation checks (default suite if none named)");
  check->add_option("names", check_names, "Check names");
  check->add_flag("--list", list_checks, "List registered checks");
  check->add_flag("--verbose", verbose, "Print each report's detail to stderr");
  add_common(check, common);

  // plot
  std::string plot_in;
  std::string plot_kind = "line";
  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "Render an experiment CSV as SVG");
  plot->add_option("input", plot_in, "Experiment CSV")->required();
  plot->add_option("--experiment", exp_name, "Experiment type of the CSV")
      ->check(CLI::IsMember({"max_load", "empty_fraction", "convergence", "traversal"}));
  plot->add_option("--kind", plot_kind, "line | scatter")->check(CLI::IsMember({"line", "scatter"}));
  plot->add_option("--out", plot_out, "SVG path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sim->parsed()) {
      const std::uint64_t seed = resolve_seed(common.seed);
      const double alpha = rbb::AlphaChoice::parse(sim_alpha).resolve(sim_n, sim_m);
      rbb::RandomSource rng(seed);
      const auto kind = sim_process == "rbb" ? rbb::ProcessKind::kRbb : rbb::ProcessKind::kIdealized;
      const auto rows = rbb::run_trace(kind, sim_n, sim_m, parse_init(sim_init), sim_rounds, rng,
                                       rbb::TraceObservers::all(alpha));
      rbb::ResultTable t{"simulate",
                         {"round", "balls", "empty", "quadratic", "log_phi", "max_load"},
                         {}};
      for (const auto& r : rows) {
        t.rows.push_back({std::to_string(r.round), std::to_string(r.balls),
                          std::to_string(r.empty->empty), std::to_string(*r.quadratic),
                          rbb::format_double(r.exponential->log_phi), std::to_string(*r.max_load)});
      }
      write_table(t, common);
      return kExitOk;
    }

    if (exp->parsed() || trav->parsed()) {
      const auto kind = trav->parsed() ? rbb::ExperimentKind::kTraversal
                                       : rbb::parse_experiment(exp_name);
      rbb::ExperimentConfig cfg;
      if (paper_scale) cfg.apply_paper_scale(kind);
      if (kind == rbb::ExperimentKind::kTraversal && !paper_scale) {
        cfg.m_multipliers = {1};
      }
      if (!exp_n.empty()) cfg.n_list = exp_n;
      if (!exp_m.empty() || !exp_mult.empty()) {
        cfg.m_absolute = exp_m;
        cfg.m_multipliers = exp_mult;
      }
      if (exp_rounds) cfg.rounds = *exp_rounds;
      if (exp_reps) cfg.reps = *exp_reps;
      cfg.burn_in = exp_burn_in;
      cfg.cap = exp_cap;
      cfg.seed = resolve_seed(common.seed);
      if (!exp_init.empty()) cfg.init = parse_init(exp_init);
      cfg.alpha = rbb::AlphaChoice::parse(exp_alpha);
      cfg.threshold_factor = threshold_factor;
      cfg.threads = threads;
      cfg.validate();
      const rbb::ResultTable table = rbb::run_experiment(kind, cfg);
      write_table(table, common);
      if (want_plot) {
        write_text(svg_path_for(common.out), rbb::emit_plot(table, rbb::PlotKind::kLine));
      }
      return kExitOk;
    }

    if (oracle->parsed()) {
      rbb::ResultTable t;
      if (or_what == "step") {
        const rbb::LoadVector x = or_state.empty() ? rbb::InitialConfig::uniform().build(or_n, or_m)
                                                   : rbb::LoadVector::parse(or_state);
        const auto dist = rbb::one_step_distribution(x);
        t = {"oracle_step", {"state", "probability"}, {}};
        for (const auto& o : dist.outcomes) {
          t.rows.push_back({o.state.to_string(), rbb::format_double(o.probability)});
        }
      } else {
        const auto kernel = rbb::transition_kernel(rbb::enumerate_states(or_n, or_m));
        if (or_what == "kernel") {
          t = {"oracle_kernel", {"from", "to", "probability"}, {}};
          for (std::size_t i = 0; i < kernel.rows.size(); ++i) {
            for (auto [j, p] : kernel.rows[i]) {
              t.rows.push_back({kernel.space.states[i].to_string(), kernel.space.states[j].to_string(),
                                rbb::format_double(p)});
            }
          }
        } else {
          const auto res = rbb::stationary_distribution(kernel);
          t = {"oracle_stationary", {"state", "probability"}, {}};
          for (std::size_t i = 0; i < res.pi.size(); ++i) {
            t.rows.push_back({kernel.space.states[i].to_string(), rbb::format_double(res.pi[i])});
          }
        }
      }
      // States contain commas; quote them for CSV.
      if (common.format == "csv") {
        for (auto& row : t.rows) {
          for (std::size_t c = 0; c + 1 < row.size(); ++c) row[c] = "\"" + row[c] + "\"";
        }
      }
      write_table(t, common);
      return kExitOk;
    }

    if (check->parsed()) {
      if (list_checks) {
        for (const auto& name : rbb::registered_checks()) std::cout << name << '\n';
        return kExitOk;
      }
      const std::uint64_t seed = resolve_seed(common.seed);
      const auto reports = rbb::run_checks(check_names, seed);
      if (verbose) {
        for (const auto& r : reports) std::cerr << r.name << ": " << r.detail << '\n';
      }
      write_table(rbb::checks_table(reports), common);
      return rbb::all_passed(reports) ? kExitOk : kExitCheckFailed;
    }

    if (plot->parsed()) {
      std::ifstream in(plot_in);
      if (!in) throw ConfigError("cannot read '" + plot_in + "'");
      rbb::ResultTable table = rbb::read_csv(in);
      if (exp_name.empty()) {
        // Infer the experiment from its header.
        if (table.header == rbb::to_table(std::vector<rbb::MaxLoadRow>{}).header) {
          exp_name = "max_load";
        } else if (table.header == rbb::to_table(std::vector<rbb::EmptyFractionRow>{}).header) {
          exp_name = "empty_fraction";
        } else if (table.header == rbb::to_table(std::vector<rbb::ConvergenceRow>{}).header) {
          exp_name = "convergence";
        } else if (table.header == rbb::to_table(std::vector<rbb::TraversalRow>{}).header) {
          exp_name = "traversal";
        } else {
          throw ConfigError("unrecognized CSV header; pass --experiment");
        }
      }
      table.experiment = exp_name;
      write_text(plot_out, rbb::emit_plot(table, plot_kind == "line" ? rbb::PlotKind::kLine
                                                                       : rbb::PlotKind::kScatter));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "rbb: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
