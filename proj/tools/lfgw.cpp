#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lfgw/classify.hpp"
#include "lfgw/env.hpp"
#include "lfgw/errors.hpp"
#include "lfgw/io.hpp"
#include "lfgw/lf.hpp"
#include "lfgw/perpetuity.hpp"
#include "lfgw/quenched.hpp"
#include "lfgw/sim.hpp"

namespace {

using namespace lfgw;

constexpr const char* kVersion = "1.0.0";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

EnvSpec parse_env(const std::string& s) {
  if (s.rfind("const:", 0) == 0) {
    const std::string body = s.substr(6);
    const std::size_t comma = body.find(',');
    if (comma == std::string::npos) {
      throw std::domain_error("--env const: expects const:a,b");
    }
    return EnvSpec::constant(std::stod(body.substr(0, comma)),
                             std::stod(body.substr(comma + 1)));
  }
  if (s.rfind("table:@", 0) == 0) {
    return env_from_json(read_file(s.substr(7)));
  }
  if (!s.empty() && s[0] == '@') {
    return env_from_json(read_file(s.substr(1)));
  }
  throw std::domain_error(
      "--env: expected const:a,b, table:@file.json, or @file.json");
}

struct Options {
  std::string env_str;
  std::string path_file;
  std::string out;
  std::string format = "jsonl";
  std::size_t n = 1;
  std::vector<std::size_t> n_grid;
  std::size_t m = 0;
  std::size_t l = 1;
  std::uint64_t reps = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double eps = 1e-9;
  std::uint64_t n_max = 1 << 20;
  std::size_t tail_cap = 65536;
  bool reduced = false;
  bool eve = false;
  bool trace = false;
};

std::string resolve_seed(const CLI::Option* seed_opt, Options& opt,
                         bool required) {
  if (seed_opt->count() > 0) return "flag";
  if (const char* s = std::getenv("LFGW_DEFAULT_SEED")) {
    opt.seed = std::stoull(s);
    return "LFGW_DEFAULT_SEED";
  }
  if (required) {
    throw std::domain_error(
        "a seed is required: pass --seed or set LFGW_DEFAULT_SEED");
  }
  return "default";
}

void emit_summary(
    const Options& opt,
    const std::vector<std::pair<std::string, std::string>>& rows) {
  for (const auto& [k, v] : rows) std::cout << k << " = " << v << "\n";
  if (!opt.out.empty()) {
    atomic_write(opt.format == "jsonl" ? opt.out + ".summary.csv" : opt.out,
                 summary_csv(rows));
  }
}

SimOptions sim_options(const Options& opt) {
  SimOptions so;
  so.seed = opt.seed;
  so.workers = opt.workers;
  so.trace_z = opt.trace;
  return so;
}

std::vector<std::pair<std::string, std::string>> base_rows(
    const Options& opt, const std::string& command,
    const std::string& seed_source) {
  return {{"version", kVersion},
          {"command", command},
          {"seed", std::to_string(opt.seed)},
          {"seed_source", seed_source}};
}

void cmd_classify(const Options& opt) {
  const EnvSpec env = parse_env(opt.env_str);
  const Trichotomy tri = classify(env, opt.seed);
  std::cout << to_string(tri.sub_case) << " " << to_string(tri.criticality)
            << "\n";
  if (!tri.evidence.note.empty()) {
    std::cout << "note: " << tri.evidence.note << "\n";
  }
  if (tri.evidence.drift) {
    std::cout << "E log A = " << num(*tri.evidence.drift) << "\n";
  }
  if (!opt.out.empty()) {
    nlohmann::json j;
    j["sub_case"] = to_string(tri.sub_case);
    j["criticality"] = to_string(tri.criticality);
    j["note"] = tri.evidence.note;
    if (tri.evidence.drift) j["drift"] = *tri.evidence.drift;
    if (tri.evidence.line_x) j["line_x"] = *tri.evidence.line_x;
    atomic_write(opt.out, j.dump(2) + "\n");
  }
}

void cmd_quenched(const Options& opt) {
  const EnvPath path(path_from_jsonl(read_file(opt.path_file)));
  if (opt.eve) {
    const EveParams ep = eve_of_extinction(path, opt.n, opt.l);
    std::cout << "param_fw = " << num(ep.param_fw) << "\n"
              << "param_rev = " << num(ep.param_rev) << "\n";
    return;
  }
  if (opt.reduced) {
    const ReducedLaw rl = reduced_law(path, opt.m, opt.n);
    std::cout << "forward_param = " << num(rl.forward.p()) << "\n"
              << "reversed_param = " << num(rl.reversed.p()) << "\n";
    return;
  }
  const QuenchedSnapshot snap = snapshot(path, opt.n);
  std::cout << "n = " << snap.n << "\n"
            << "log_a = " << num(snap.law_zn.log_a()) << "\n"
            << "log_b = " << num(snap.law_zn.log_b()) << "\n"
            << "q_n = " << num(snap.q_n) << "\n"
            << "cond_survival_param = " << num(snap.cond_survival.p()) << "\n"
            << "reversed_cond_param = " << num(snap.reversed_cond_survival.p())
            << "\n"
            << "M_n = " << num(snap.m_n) << "\n";
}

void cmd_simulate(const Options& opt, const std::string& seed_source) {
  std::vector<ReplicateRecord> batch;
  if (!opt.path_file.empty()) {
    const EnvPath path(path_from_jsonl(read_file(opt.path_file)));
    batch = simulate_quenched(path, opt.reps, sim_options(opt));
  } else {
    const EnvSpec env = parse_env(opt.env_str);
    batch = simulate_annealed(env, opt.n, opt.reps, sim_options(opt));
  }
  std::uint64_t survived = 0;
  std::uint64_t saturated = 0;
  for (const ReplicateRecord& r : batch) {
    survived += r.survived ? 1 : 0;
    saturated += r.saturated ? 1 : 0;
  }
  auto rows = base_rows(opt, "simulate", seed_source);
  rows.emplace_back("reps", std::to_string(opt.reps));
  rows.emplace_back("survived", std::to_string(survived));
  rows.emplace_back("saturated", std::to_string(saturated));
  if (!opt.out.empty() && opt.format == "jsonl") {
    atomic_write(opt.out, records_to_jsonl(batch));
  }
  emit_summary(opt, rows);
}

void cmd_survival(const Options& opt, const std::string& seed_source) {
  const EnvSpec env = parse_env(opt.env_str);
  const SurvivalEstimate est =
      survival_importance(env, opt.n, opt.reps, sim_options(opt));
  auto rows = base_rows(opt, "survival", seed_source);
  rows.emplace_back("n", std::to_string(opt.n));
  rows.emplace_back("p_hat", num(est.p_hat));
  rows.emplace_back("stderr", num(est.stderr_));
  emit_summary(opt, rows);
}

void cmd_yaglom(const Options& opt, const std::string& seed_source) {
  const EnvSpec env = parse_env(opt.env_str);
  const YaglomReport rep =
      yaglom_quenched_check(env, opt.n, opt.reps, sim_options(opt));
  auto rows = base_rows(opt, "yaglom", seed_source);
  rows.emplace_back("n", std::to_string(opt.n));
  rows.emplace_back("finite_n_param", num(rep.finite_n_param));
  rows.emplace_back("limit_param",
                    rep.limit_param ? num(*rep.limit_param) : "none");
  rows.emplace_back("survivors", std::to_string(rep.survivors));
  rows.emplace_back("ks_statistic", num(rep.ks.statistic));
  rows.emplace_back("ks_threshold", num(rep.ks.threshold));
  rows.emplace_back("ks_pass", rep.ks.pass ? "true" : "false");
  emit_summary(opt, rows);
}

void cmd_martingale(const Options& opt, const std::string& seed_source) {
  const EnvSpec env = parse_env(opt.env_str);
  const MartingaleReport rep =
      martingale_check(env, opt.n, opt.reps, sim_options(opt));
  auto rows = base_rows(opt, "martingale", seed_source);
  rows.emplace_back("n", std::to_string(opt.n));
  rows.emplace_back("r_inf", num(rep.r_inf));
  rows.emplace_back("w_mean", num(rep.w_mean.mean));
  rows.emplace_back("w_stderr", num(rep.w_mean.stderr_));
  rows.emplace_back("atom_freq", num(rep.atom_freq));
  rows.emplace_back("atom_expected", num(rep.atom_expected));
  rows.emplace_back("positive_ks", num(rep.positive_ks.statistic));
  emit_summary(opt, rows);
}

void cmd_decompose(const Options& opt, const std::string& seed_source) {
  const EnvSpec env = parse_env(opt.env_str);
  RngStream rng = make_stream(opt.seed, 0, StreamPurpose::environment);
  std::vector<EnvPair> pairs;
  pairs.reserve(opt.n);
  PathState st;
  for (std::size_t k = 0; k < opt.n; ++k) {
    pairs.push_back(sample_pair(env, rng));
    st = step(st, pairs.back());
  }
  double r_inf;
  if (const auto* c = std::get_if<ConstantPair>(&env.variant())) {
    if (!(c->A < 1.0)) {
      throw DivergentPerpetuity("decompose: constant environment needs A < 1");
    }
    r_inf = c->B / (1.0 - c->A);
  } else {
    // Continue the same stream so the tail is consistent with the prefix.
    r_inf = perpetuity_tail(st, env, opt.eps, opt.n_max, rng).r_inf;
  }
  const EnvPath path(std::move(pairs));
  const DecompositionLaws dec = decomposition_laws(path, opt.n, r_inf);
  const LinearFractional fin =
      from_params(dec.finite_line.w0, dec.finite_line.geom.p());
  auto rows = base_rows(opt, "decompose", seed_source);
  rows.emplace_back("n", std::to_string(opt.n));
  rows.emplace_back("r_inf", num(r_inf));
  rows.emplace_back("r_n_inf", num(dec.r_n_inf));
  rows.emplace_back("finite_line_a", num(fin.a()));
  rows.emplace_back("finite_line_b", num(fin.b()));
  rows.emplace_back("finite_line_w0", num(dec.finite_line.w0));
  rows.emplace_back("finite_line_geom_param", num(dec.finite_line.geom.p()));
  rows.emplace_back("infinite_line_param", num(dec.infinite_line.p()));
  emit_summary(opt, rows);
}

void cmd_kozlov(const Options& opt, const std::string& seed_source) {
  const EnvSpec env = parse_env(opt.env_str);
  const std::vector<KozlovRow> rows =
      kozlov_scan(env, opt.n_grid, opt.reps, sim_options(opt));
  std::string csv = "n,p_hat,sqrt_n_p_hat,stderr\n";
  for (const KozlovRow& r : rows) {
    csv += std::to_string(r.n) + "," + num(r.p_hat) + "," +
           num(r.sqrt_n_p_hat) + "," + num(r.stderr_) + "\n";
    std::cout << "n=" << r.n << " p_hat=" << num(r.p_hat)
              << " sqrt_n_p_hat=" << num(r.sqrt_n_p_hat) << "\n";
  }
  if (!opt.out.empty()) {
    atomic_write(opt.out, csv);
  }
  auto summary = base_rows(opt, "kozlov", seed_source);
  summary.emplace_back("reps", std::to_string(opt.reps));
  summary.emplace_back("grid_size", std::to_string(rows.size()));
  if (!opt.out.empty()) {
    atomic_write(opt.out + ".summary.csv", summary_csv(summary));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lfgw: branching processes with linear-fractional offspring in an "
      "i.i.d. random environment"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub, bool stochastic) {
    sub->add_option("--out", opt.out, "output file (written atomically)");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    CLI::Option* seed =
        sub->add_option("--seed", opt.seed, "64-bit RNG seed");
    if (stochastic) {
      sub->add_option("--workers", opt.workers, "worker thread count")
          ->check(CLI::Range(1u, 256u));
    }
    return seed;
  };

  CLI::App* c_classify = app.add_subcommand("classify", "regime trichotomy");
  c_classify->add_option("--env", opt.env_str, "environment spec")->required();
  const CLI::Option* classify_seed = add_common(c_classify, false);

  CLI::App* c_quenched =
      app.add_subcommand("quenched", "closed-form laws along a path");
  c_quenched->add_option("--path", opt.path_file, "environment path JSONL")
      ->required();
  c_quenched->add_option("--n", opt.n, "generation")->required();
  c_quenched->add_option("--m", opt.m, "reduced-process generation");
  c_quenched->add_option("--l", opt.l, "lookahead for eve-of-extinction");
  c_quenched->add_flag("--reduced", opt.reduced, "print reduced law at (m, n)");
  c_quenched->add_flag("--eve", opt.eve, "print eve-of-extinction params");
  add_common(c_quenched, false);

  CLI::App* c_simulate = app.add_subcommand("simulate", "Monte Carlo batch");
  c_simulate->add_option("--env", opt.env_str, "environment spec");
  c_simulate->add_option("--path", opt.path_file, "environment path JSONL");
  c_simulate->add_option("--n", opt.n, "generations (annealed)");
  c_simulate->add_option("--reps", opt.reps, "replicates");
  c_simulate->add_flag("--trace", opt.trace, "store population traces");
  const CLI::Option* simulate_seed = add_common(c_simulate, true);

  CLI::App* c_survival =
      app.add_subcommand("survival", "tilted survival probability estimate");
  c_survival->add_option("--env", opt.env_str, "environment spec")->required();
  c_survival->add_option("--n", opt.n, "generation")->required();
  c_survival->add_option("--reps", opt.reps, "replicates");
  const CLI::Option* survival_seed = add_common(c_survival, true);

  CLI::App* c_yaglom =
      app.add_subcommand("yaglom", "reversed-order conditional law check");
  c_yaglom->add_option("--env", opt.env_str, "environment spec")->required();
  c_yaglom->add_option("--n", opt.n, "generation")->required();
  c_yaglom->add_option("--reps", opt.reps, "replicates");
  c_yaglom->add_option("--tail-cap", opt.tail_cap, "empirical support cap");
  const CLI::Option* yaglom_seed = add_common(c_yaglom, true);

  CLI::App* c_martingale =
      app.add_subcommand("martingale", "normalized-population limit check");
  c_martingale->add_option("--env", opt.env_str, "environment spec")
      ->required();
  c_martingale->add_option("--n", opt.n, "generation")->required();
  c_martingale->add_option("--reps", opt.reps, "replicates");
  const CLI::Option* martingale_seed = add_common(c_martingale, true);

  CLI::App* c_decompose =
      app.add_subcommand("decompose", "finite/infinite line-of-descent laws");
  c_decompose->add_option("--env", opt.env_str, "environment spec")
      ->required();
  c_decompose->add_option("--n", opt.n, "generation step")->required();
  c_decompose->add_option("--eps", opt.eps, "perpetuity tail target");
  c_decompose->add_option("--n-max", opt.n_max, "perpetuity step budget");
  const CLI::Option* decompose_seed = add_common(c_decompose, true);

  CLI::App* c_kozlov =
      app.add_subcommand("kozlov", "critical survival-decay scan");
  c_kozlov->add_option("--env", opt.env_str, "environment spec")->required();
  c_kozlov->add_option("--n-grid", opt.n_grid, "generations to probe")
      ->required()
      ->delimiter(',');
  c_kozlov->add_option("--reps", opt.reps, "replicates per grid point");
  const CLI::Option* kozlov_seed = add_common(c_kozlov, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (c_classify->parsed()) {
      resolve_seed(classify_seed, opt, false);
      cmd_classify(opt);
    } else if (c_quenched->parsed()) {
      cmd_quenched(opt);
    } else if (c_simulate->parsed()) {
      if (opt.env_str.empty() == opt.path_file.empty()) {
        throw std::domain_error("simulate: give exactly one of --env, --path");
      }
      cmd_simulate(opt, resolve_seed(simulate_seed, opt, true));
    } else if (c_survival->parsed()) {
      cmd_survival(opt, resolve_seed(survival_seed, opt, true));
    } else if (c_yaglom->parsed()) {
      cmd_yaglom(opt, resolve_seed(yaglom_seed, opt, true));
    } else if (c_martingale->parsed()) {
      cmd_martingale(opt, resolve_seed(martingale_seed, opt, true));
    } else if (c_decompose->parsed()) {
      cmd_decompose(opt, resolve_seed(decompose_seed, opt, true));
    } else if (c_kozlov->parsed()) {
      cmd_kozlov(opt, resolve_seed(kozlov_seed, opt, true));
    }
  } catch (const Unclassifiable& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 2;
  } catch (const MomentDiverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 3;
  } catch (const DivergentPerpetuity& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 3;
  } catch (const TailUnavailable& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 3;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 1;
  }
  const auto t1 = std::chrono::steady_clock::now();
  std::cerr << "wall_clock_ms="
            << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                   .count()
            << "\n";
  return rc;
}
