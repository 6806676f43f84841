#include "varcert_cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "varcert/errors.hpp"
#include "varcert/parallel.hpp"
#include "varcert/report.hpp"
#include "varcert/sample_plan.hpp"

namespace varcert::cli {

namespace {

struct Flags {
  std::optional<std::string> model, weights, center, cstar, eps, box, out, csv, config, save_config;
  std::optional<double> p, r1, r2, value_tol, cert_tol, cluster_tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid, qmc, threads;

  std::optional<double> sigma, lambda, u_radius, v_radius, dim, terms;
  std::optional<std::string> lambdas, kind, flavor, x, xstar, deltas, problem, name;
  bool recovery = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--model", f.model, "gallery:NAME[?k=v,...] or path to a JSON model");
  app->add_option("--p", f.p, "exponent of the weighted l^p norm");
  app->add_option("--weights", f.weights, "comma-separated norm weights");
  app->add_option("--center", f.center, "window center x (comma-separated)");
  app->add_option("--cstar", f.cstar, "window subgradient x* (comma-separated)");
  app->add_option("--r1", f.r1, "primal window radius");
  app->add_option("--r2", f.r2, "dual window radius");
  app->add_option("--eps", f.eps, "value window (inf to disable)");
  app->add_option("--seed", f.seed, "sampling seed");
  app->add_option("--grid", f.grid, "grid points per axis");
  app->add_option("--qmc", f.qmc, "quasi-random points");
  app->add_option("--box", f.box, "sampling box as lo,hi (applied to every axis)");
  app->add_option("--out", f.out, "write the JSON report here instead of stdout");
  app->add_option("--csv", f.csv, "write the result table as CSV");
  app->add_option("--config", f.config, "read a saved run configuration");
  app->add_option("--save-config", f.save_config, "save the effective configuration");
  app->add_option("--value-tol", f.value_tol, "tolerance for equal objective values");
  app->add_option("--cert-tol", f.cert_tol, "slack accepted as nonnegative");
  app->add_option("--cluster-tol", f.cluster_tol, "minimizer cluster diameter");
  app->add_option("--threads", f.threads, "worker threads (0 = hardware)");
}

void add_flag(CLI::App* app, Flags& f, const std::string& which) {
  if (which == "sigma") app->add_option("--sigma", f.sigma, "modulus");
  if (which == "lambda") app->add_option("--lambda", f.lambda, "envelope parameter");
  if (which == "lambdas") app->add_option("--lambdas", f.lambdas, "comma-separated lambda ladder");
  if (which == "kind") app->add_option("--kind", f.kind, "duality or norm");
  if (which == "flavor") app->add_option("--flavor", f.flavor, "combined or limiting");
  if (which == "x") app->add_option("--x", f.x, "evaluation point (comma-separated)");
  if (which == "xstar") app->add_option("--xstar", f.xstar, "tilt vector (comma-separated)");
  if (which == "deltas") app->add_option("--deltas", f.deltas, "comma-separated radii ladder");
  if (which == "u_radius") app->add_option("--u-radius", f.u_radius, "half-width of the tilt box");
  if (which == "v_radius") app->add_option("--v-radius", f.v_radius, "radius of the tilt set");
  if (which == "problem") app->add_option("--problem", f.problem, "built-in sequence name");
  if (which == "recovery") app->add_flag("--recovery", f.recovery, "add the recovery path");
  if (which == "terms") app->add_option("--terms", f.terms, "number of sequence terms");
  if (which == "name") app->add_option("--name", f.name, "gallery model name");
  if (which == "dim") app->add_option("--dim", f.dim, "dimension");
}

struct Leaf {
  std::string command;
  std::string help;
  std::vector<std::string> flags;
};

const std::vector<Leaf>& leaves() {
  static const std::vector<Leaf> all = {
      {"envelope", "Moreau envelope value", {"lambda", "x", "xstar"}},
      {"prox", "proximal mapping", {"lambda", "x", "xstar"}},
      {"certify vc", "variational convexity", {}},
      {"certify svc", "strong variational convexity", {"sigma"}},
      {"certify mono", "local (strong) monotonicity of the subdifferential", {"sigma", "kind", "lambda"}},
      {"certify proxreg", "prox-regularity", {}},
      {"certify subdiffcont", "subdifferential continuity", {"deltas"}},
      {"certify proxsub", "proximal subgradient", {}},
      {"certify psd", "positive semidefiniteness of second subdifferentials", {"sigma", "flavor"}},
      {"certify pointbased", "pointbased second-order condition", {}},
      {"certify tilt", "tilt stability", {"u_radius", "v_radius"}},
      {"certify growth", "second-order growth", {"sigma"}},
      {"certify epi", "epi-convergence of a built-in sequence", {"problem", "recovery", "terms"}},
      {"hull build", "convexified local model", {"sigma"}},
      {"hull check", "graph agreement of the local model", {"sigma"}},
      {"gallery list", "list gallery models", {}},
      {"gallery verify", "run stored gallery verdicts", {"name"}},
      {"estimate c1", "strong monotonicity constant of the duality map", {"dim"}},
      {"estimate lambda0", "prox-boundedness threshold", {"lambdas"}},
  };
  return all;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

void apply(const Flags& f, RunConfig& cfg) {
  if (f.model) cfg.model = *f.model;
  if (f.p) cfg.p = *f.p;
  if (f.weights) cfg.weights = parse_list(*f.weights);
  if (f.center) cfg.center = parse_list(*f.center);
  if (f.cstar) cfg.cstar = parse_list(*f.cstar);
  if (f.r1) cfg.r1 = *f.r1;
  if (f.r2) cfg.r2 = *f.r2;
  if (f.eps) {
    const auto e = parse_list(*f.eps);
    if (e.size() != 1) throw InputError("--eps takes one value");
    cfg.eps = e[0];
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.grid) cfg.grid = *f.grid;
  if (f.qmc) cfg.qmc = *f.qmc;
  if (f.box) {
    const auto b = parse_list(*f.box);
    if (b.size() != 2) throw InputError("--box expects lo,hi");
    cfg.box = Box(Vec{b[0]}, Vec{b[1]});
  }
  if (f.out) cfg.output = *f.out;
  if (f.csv) cfg.csv = *f.csv;
  if (f.value_tol) cfg.tolerances.value_tol = *f.value_tol;
  if (f.cert_tol) cfg.tolerances.cert_tol = *f.cert_tol;
  if (f.cluster_tol) cfg.tolerances.cluster_tol = *f.cluster_tol;

  auto& p = cfg.params;
  if (f.sigma) p["sigma"] = *f.sigma;
  if (f.lambda) p["lambda"] = *f.lambda;
  if (f.u_radius) p["u_radius"] = *f.u_radius;
  if (f.v_radius) p["v_radius"] = *f.v_radius;
  if (f.dim) p["dim"] = *f.dim;
  if (f.terms) p["terms"] = *f.terms;
  if (f.lambdas) p["lambdas"] = parse_list(*f.lambdas);
  if (f.deltas) p["deltas"] = parse_list(*f.deltas);
  if (f.x) p["x"] = parse_list(*f.x);
  if (f.xstar) p["xstar"] = parse_list(*f.xstar);
  if (f.kind) p["kind"] = *f.kind;
  if (f.flavor) p["flavor"] = *f.flavor;
  if (f.problem) p["problem"] = *f.problem;
  if (f.name) p["name"] = *f.name;
  if (f.recovery) p["recovery"] = true;
}

void write_csv(const std::vector<std::vector<std::string>>& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write CSV file '" + path + "'");
  for (const auto& row : table) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string& cell = row[i];
      if (i) out << ',';
      if (cell.find_first_of(",\"\n") != std::string::npos) {
        out << '"';
        for (char c : cell) {
          if (c == '"') out << '"';
          out << c;
        }
        out << '"';
      } else {
        out << cell;
      }
    }
    out << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical certification of variational convexity and related properties", "varcert"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  std::map<std::string, CLI::App*> groups;
  for (const auto& leaf : leaves()) {
    const auto space = leaf.command.find(' ');
    CLI::App* parent = &app;
    std::string local = leaf.command;
    if (space != std::string::npos) {
      const std::string group = leaf.command.substr(0, space);
      local = leaf.command.substr(space + 1);
      if (!groups.count(group)) {
        groups[group] = app.add_subcommand(group, group + " commands");
        groups[group]->require_subcommand(1);
      }
      parent = groups[group];
    }
    CLI::App* sub = parent->add_subcommand(local, leaf.help);
    add_common(sub, flags);
    for (const auto& f : leaf.flags) add_flag(sub, flags, f);
    const std::string command = leaf.command;
    sub->callback([&chosen, command] { chosen = command; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "varcert: error: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    RunConfig cfg;
    if (flags.config) {
      cfg = load_config(*flags.config);
      if (!cfg.command.empty() && cfg.command != chosen)
        throw InputError("config file is for '" + cfg.command + "', not '" + chosen + "'");
    }
    cfg.command = chosen;
    apply(flags, cfg);
    if (flags.threads) set_max_threads(*flags.threads);
    if (flags.save_config) save_config(cfg, *flags.save_config);

    const auto t0 = std::chrono::steady_clock::now();
    const CommandOutput result = execute(cfg);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const nlohmann::json report = make_report(cfg, result, elapsed);

    if (cfg.output) {
      std::ofstream f(*cfg.output);
      if (!f) throw InputError("cannot write report file '" + *cfg.output + "'");
      f << report.dump(2) << "\n";
    } else {
      out << report.dump(2) << "\n";
    }
    if (cfg.csv) write_csv(result.table, *cfg.csv);
    return exit_code_for(result.verdict);
  } catch (const Error& e) {
    err << "varcert: " << to_string(e.kind()) << " error: " << one_line(e.what()) << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "varcert: input error: " << one_line(e.what()) << "\n";
  } catch (const std::exception& e) {
    err << "varcert: internal error: " << one_line(e.what()) << "\n";
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace varcert::cli
