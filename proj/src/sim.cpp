#include "lfgw/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "lfgw/classify.hpp"
#include "lfgw/errors.hpp"
#include "lfgw/logspace.hpp"
#include "lfgw/perpetuity.hpp"
#include "lfgw/samplers.hpp"

namespace lfgw {

void parallel_for(std::uint64_t reps, unsigned workers,
                  const std::function<void(std::uint64_t)>& fn) {
  if (workers <= 1 || reps < 2 * workers) {
    for (std::uint64_t r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    const std::uint64_t lo = reps * t / workers;
    const std::uint64_t hi = reps * (t + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (std::uint64_t r = lo; r < hi; ++r) fn(r);
    });
  }
  for (std::thread& th : pool) th.join();
}

StepResult step_generation(std::uint64_t z, const EnvPair& pair,
                           RngStream& rng) {
  if (z == 0) return StepResult{0, false};
  const double ab = pair.A + pair.B;
  const double p0 = (ab - 1.0) / ab;       // offspring zero mass
  const double p_succ = pair.A / ab;       // positive geometric parameter
  const std::uint64_t m = sample_binomial(z, 1.0 - p0, rng);
  if (m == 0) return StepResult{0, false};
  const std::uint64_t fails = sample_negbin_failures(m, p_succ, rng);
  if (fails > kPopulationCap - m) return StepResult{kPopulationCap, true};
  return StepResult{m + fails, false};
}

namespace {

// Runs z through the whole pair sequence, with sticky saturation.
void run_population(ReplicateRecord& rec, const std::vector<EnvPair>& pairs,
                    RngStream& rng, bool trace) {
  std::uint64_t z = 1;
  if (trace) {
    rec.z_trace.reserve(pairs.size() + 1);
    rec.z_trace.push_back(z);
  }
  for (const EnvPair& p : pairs) {
    if (z > 0 && !rec.saturated) {
      const StepResult sr = step_generation(z, p, rng);
      z = sr.z;
      rec.saturated = rec.saturated || sr.saturated;
    }
    if (trace) rec.z_trace.push_back(z);
  }
  rec.z_final = z;
  rec.survived = z > 0;
}

}  // namespace

std::vector<ReplicateRecord> simulate_quenched(const EnvPath& path,
                                               std::uint64_t reps,
                                               const SimOptions& opts) {
  if (reps == 0) throw std::domain_error("simulate_quenched: reps must be >= 1");
  const PathState& fin = path.state(path.size());
  std::vector<ReplicateRecord> out(reps);
  parallel_for(reps, opts.workers, [&](std::uint64_t r) {
    ReplicateRecord& rec = out[r];
    rec.replicate = r;
    rec.log_pi = fin.log_pi;
    rec.r_dual = fin.rdual();
    RngStream rng = make_stream(opts.seed, r, StreamPurpose::offspring);
    run_population(rec, path.pairs(), rng, opts.trace_z);
  });
  return out;
}

std::vector<ReplicateRecord> simulate_annealed(const EnvSpec& env,
                                               std::size_t n,
                                               std::uint64_t reps,
                                               const SimOptions& opts) {
  if (reps == 0) throw std::domain_error("simulate_annealed: reps must be >= 1");
  std::vector<ReplicateRecord> out(reps);
  parallel_for(reps, opts.workers, [&](std::uint64_t r) {
    ReplicateRecord& rec = out[r];
    rec.replicate = r;
    RngStream env_rng = make_stream(opts.seed, r, StreamPurpose::environment);
    RngStream off_rng = make_stream(opts.seed, r, StreamPurpose::offspring);
    std::vector<EnvPair> pairs;
    pairs.reserve(n);
    PathState st;
    for (std::size_t k = 0; k < n; ++k) {
      pairs.push_back(sample_pair(env, env_rng));
      st = step(st, pairs.back());
    }
    rec.log_pi = st.log_pi;
    rec.r_dual = st.rdual();
    run_population(rec, pairs, off_rng, opts.trace_z);
  });
  return out;
}

SurvivalEstimate survival_importance(const EnvSpec& env, std::size_t n,
                                     std::uint64_t reps,
                                     const SimOptions& opts) {
  if (n == 0) return SurvivalEstimate{1.0, 0.0};
  if (reps == 0) {
    throw std::domain_error("survival_importance: reps must be >= 1");
  }
  const double kap = kappa(env);
  if (!std::isfinite(kap)) {
    throw MomentDiverged("survival_importance: kappa is not finite");
  }
  const EnvSpec tilted = tilt(env);
  std::vector<double> ys(reps);
  parallel_for(reps, opts.workers, [&](std::uint64_t r) {
    RngStream rng = make_stream(opts.seed, r, StreamPurpose::perpetuity);
    PathState st;
    for (std::size_t k = 0; k < n; ++k) st = step(st, sample_pair(tilted, rng));
    ys[r] = std::exp(-log_sum_exp(0.0, st.log_rdual));
  });
  const MeanSd ms = mean_sd(ys);
  if (!std::isfinite(ms.mean)) {
    throw MomentDiverged("survival_importance: estimator mean diverged");
  }
  const double scale = std::exp(kap * static_cast<double>(n));
  return SurvivalEstimate{scale * ms.mean, scale * ms.stderr_};
}

YaglomReport yaglom_quenched_check(const EnvSpec& env, std::size_t n,
                                   std::uint64_t reps, const SimOptions& opts,
                                   double alpha) {
  const Trichotomy tri = classify(env, opts.seed);
  if (tri.criticality != Criticality::subcritical) {
    throw std::domain_error("yaglom_quenched_check: environment not subcritical");
  }
  RngStream env_rng = make_stream(opts.seed, 0, StreamPurpose::environment);
  const EnvPath path = EnvPath::sampled(env, n, env_rng);
  const EnvPath rev = path.reversed();

  YaglomReport rep;
  rep.params.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    rep.params.push_back(
        std::exp(-log_sum_exp(0.0, path.state(k).log_rdual)));
  }
  rep.finite_n_param = rep.params.empty() ? 1.0 : rep.params.back();

  rep.limit_param.reset();
  try {
    RngStream tail_rng = make_stream(opts.seed, 1, StreamPurpose::perpetuity);
    const PerpetuityResult tail = dual_perpetuity_tail(
        path.state(n), env, /*eps=*/1e-9, /*n_max=*/1 << 20, tail_rng);
    rep.limit_param =
        std::exp(-log_sum_exp(0.0, tail.final_state.log_rdual));
  } catch (const TailUnavailable&) {
  } catch (const BudgetExceeded&) {
  }

  const std::vector<ReplicateRecord> batch =
      simulate_quenched(rev, reps, opts);
  EmpiricalLaw emp(1 << 16);
  std::uint64_t survivors = 0;
  for (const ReplicateRecord& r : batch) {
    if (r.survived && !r.saturated) {
      emp.add(r.z_final);
      ++survivors;
    }
  }
  rep.survivors = survivors;
  if (survivors == 0) {
    throw Inconclusive("yaglom_quenched_check: no surviving replicates");
  }
  const GeomPlus g(rep.finite_n_param);
  rep.ks = ks_discrete(
      emp, [&g](std::uint64_t k) { return g.cdf(k); }, alpha);
  return rep;
}

namespace {

MartingaleReport martingale_from_batch(const std::vector<ReplicateRecord>& batch,
                                       double r_inf, double alpha,
                                       bool quenched_log_pi, double log_pi) {
  std::vector<double> ws;
  ws.reserve(batch.size());
  std::vector<double> positive;
  std::uint64_t zeros = 0;
  for (const ReplicateRecord& r : batch) {
    if (r.saturated) continue;
    const double lp = quenched_log_pi ? log_pi : r.log_pi;
    const double w =
        r.z_final == 0
            ? 0.0
            : std::exp(lp + std::log(static_cast<double>(r.z_final)));
    ws.push_back(w);
    if (w == 0.0) {
      ++zeros;
    } else {
      positive.push_back(w);
    }
  }
  if (ws.empty() || positive.empty()) {
    throw Inconclusive("martingale_check: no usable replicates");
  }
  MartingaleReport out;
  out.w_mean = mean_sd(ws);
  out.r_inf = r_inf;
  out.atom_freq =
      static_cast<double>(zeros) / static_cast<double>(ws.size());
  out.atom_expected = 1.0 - 1.0 / r_inf;
  out.positive_ks = ks_continuous(
      std::move(positive),
      [r_inf](double x) { return -std::expm1(-x / r_inf); }, alpha);
  out.reps = ws.size();
  return out;
}

}  // namespace

MartingaleReport martingale_check(const EnvSpec& env, std::size_t n,
                                  std::uint64_t reps, const SimOptions& opts,
                                  double alpha) {
  const Trichotomy tri = classify(env, opts.seed);
  if (tri.criticality != Criticality::supercritical) {
    throw std::domain_error("martingale_check: environment not supercritical");
  }
  RngStream tail_rng = make_stream(opts.seed, 0, StreamPurpose::perpetuity);
  const PathState init;
  const PerpetuityResult tail =
      perpetuity_tail(init, env, /*eps=*/1e-10, /*n_max=*/1 << 20, tail_rng);
  const std::vector<ReplicateRecord> batch =
      simulate_annealed(env, n, reps, opts);
  return martingale_from_batch(batch, tail.r_inf, alpha,
                               /*quenched_log_pi=*/false, 0.0);
}

MartingaleReport martingale_check(const EnvPath& path, double r_inf,
                                  std::uint64_t reps, const SimOptions& opts,
                                  double alpha) {
  const std::vector<ReplicateRecord> batch =
      simulate_quenched(path, reps, opts);
  return martingale_from_batch(batch, r_inf, alpha, /*quenched_log_pi=*/true,
                               path.state(path.size()).log_pi);
}

std::vector<std::vector<std::uint64_t>> reduced_simulate(
    const EnvPath& path, std::size_t n, std::uint64_t reps,
    const SimOptions& opts) {
  if (n > path.size()) {
    throw std::out_of_range("reduced_simulate: n exceeds path length");
  }
  std::vector<double> params(n);
  for (std::size_t m = 1; m <= n; ++m) {
    params[m - 1] = reduced_offspring_law(path, m - 1, m, n).forward.p();
  }
  std::vector<std::vector<std::uint64_t>> out(reps);
  parallel_for(reps, opts.workers, [&](std::uint64_t r) {
    RngStream rng = make_stream(opts.seed, r, StreamPurpose::offspring);
    std::vector<std::uint64_t>& trace = out[r];
    trace.reserve(n + 1);
    std::uint64_t z = 1;
    trace.push_back(z);
    for (std::size_t m = 1; m <= n; ++m) {
      // sum of z i.i.d. Geom_+(p) draws
      const std::uint64_t fails =
          sample_negbin_failures(z, params[m - 1], rng);
      z = fails > kPopulationCap - z ? kPopulationCap : z + fails;
      trace.push_back(z);
    }
  });
  return out;
}

std::vector<KozlovRow> kozlov_scan(const EnvSpec& env,
                                   const std::vector<std::size_t>& n_grid,
                                   std::uint64_t reps,
                                   const SimOptions& opts) {
  if (n_grid.empty()) return {};
  const Trichotomy tri = classify(env, opts.seed);
  if (tri.criticality != Criticality::critical &&
      tri.criticality != Criticality::strongly_critical) {
    throw std::domain_error("kozlov_scan: environment not critical");
  }
  std::vector<std::size_t> sorted = n_grid;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n_max = sorted.back();
  const std::size_t g = sorted.size();
  std::vector<std::vector<double>> vals(reps, std::vector<double>(g));
  parallel_for(reps, opts.workers, [&](std::uint64_t r) {
    RngStream rng = make_stream(opts.seed, r, StreamPurpose::environment);
    PathState st;
    std::size_t gi = 0;
    for (std::size_t k = 0; k <= n_max && gi < g; ++k) {
      while (gi < g && sorted[gi] == k) {
        vals[r][gi] = std::exp(-log_sum_exp(st.log_pi, st.log_r));
        ++gi;
      }
      if (k < n_max) st = step(st, sample_pair(env, rng));
    }
  });
  std::vector<KozlovRow> rows;
  rows.reserve(g);
  std::vector<double> col(reps);
  for (std::size_t gi = 0; gi < g; ++gi) {
    for (std::uint64_t r = 0; r < reps; ++r) col[r] = vals[r][gi];
    const MeanSd ms = mean_sd(col);
    const double sq = std::sqrt(static_cast<double>(sorted[gi]));
    rows.push_back(KozlovRow{static_cast<std::uint64_t>(sorted[gi]), ms.mean,
                             sq * ms.mean, ms.stderr_});
  }
  return rows;
}

}  // namespace lfgw
