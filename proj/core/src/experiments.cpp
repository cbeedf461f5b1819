// Copyright 2026 The sosdec Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sosdec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "sosdec/exact_decoder.hpp"
#include "sosdec/relaxations.hpp"

namespace sosdec {

const char* decoder_name(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::none: return "none";
    case DecoderKind::exact: return "exact";
    case DecoderKind::bnb: return "bnb";
    case DecoderKind::lp: return "lp";
    case DecoderKind::sa: return "sa";
    case DecoderKind::ls: return "ls";
    case DecoderKind::lsplus: return "lsplus";
    case DecoderKind::sos: return "sos";
  }
  return "unknown";
}

DecoderKind decoder_from_name(const std::string& name) {
  for (DecoderKind kind : {DecoderKind::none, DecoderKind::exact, DecoderKind::bnb,
                           DecoderKind::lp, DecoderKind::sa, DecoderKind::ls, DecoderKind::lsplus,
                           DecoderKind::sos}) {
    if (name == decoder_name(kind)) return kind;
  }
  throw std::invalid_argument("unknown decoder: " + name);
}

bool logical_failure(const CssCode& code, const BitVector& e_true, const BitVector& e_hat,
                     bool feasible) {
  if (e_true.size() != static_cast<std::size_t>(code.n) || e_hat.size() != e_true.size())
    throw std::invalid_argument("error vectors must match the qubit count");
  if (!feasible) return true;
  BitVector residual = e_true;
  residual.xor_assign(e_hat);
  for (const BitVector& lz : code.logicals_z)
    if (lz.dot(residual)) return true;
  return false;
}

MldInstance make_instance(const CssCode& code, const BitVector& error, double p) {
  // Weight computation needs p strictly inside (0,1); sampling does not.
  const double p_decode = std::clamp(p, 1e-9, 1.0 - 1e-9);
  MldInstance inst;
  inst.h = code.h_z;
  inst.s = code.h_z.mul(error);
  inst.gamma = uniform_weights(code.n, p_decode).gamma;
  return inst;
}

namespace {

// Shared rounding for the fractional relaxation decoders: threshold 1/2
// (ties to 0) plus the same greedy repair as the moment extraction.
Extraction round_fractional(const std::vector<double>& frac, const MldInstance& inst) {
  const std::size_t n = inst.num_vars();
  Extraction ext;
  ext.e_hat = BitVector(n);
  for (std::size_t i = 0; i < n && i < frac.size(); ++i)
    if (frac[i] > 0.5) ext.e_hat.set(i, true);

  const auto unsatisfied = [&](const BitVector& e) {
    std::vector<std::size_t> rows;
    const BitVector observed = inst.h.mul(e);
    for (std::size_t r = 0; r < inst.h.rows(); ++r)
      if (observed.get(r) != inst.s.get(r)) rows.push_back(r);
    return rows;
  };
  auto unsat = unsatisfied(ext.e_hat);
  for (std::size_t flip = 0; flip < n && !unsat.empty(); ++flip) {
    int candidate = -1;
    double best_dist = 0.0;
    for (std::size_t r : unsat)
      for (std::size_t i : inst.h.row_support(r)) {
        const double dist = std::abs((i < frac.size() ? frac[i] : 0.0) - 0.5);
        if (candidate < 0 || dist < best_dist) {
          candidate = static_cast<int>(i);
          best_dist = dist;
        }
      }
    if (candidate < 0) break;
    ext.e_hat.flip(candidate);
    ++ext.repair_flips;
    unsat = unsatisfied(ext.e_hat);
  }
  ext.feasible = unsat.empty();
  return ext;
}

}  // namespace

SingleDecode decode_single(const CssCode& code, const DecoderConfig& config, double p,
                           std::uint64_t master_seed, std::uint64_t trial_index,
                           std::string* moment_dump_json) {
  using clock = std::chrono::steady_clock;
  SingleDecode out;
  TrialRng rng(master_seed, trial_index);
  out.e_true = sample_error(code.n, p, rng);
  const MldInstance inst = make_instance(code, out.e_true, p);
  out.syndrome_bits = inst.s;

  const auto start = clock::now();
  const auto deadline =
      config.time_limit_s > 0.0
          ? std::optional<clock::time_point>(start + std::chrono::duration_cast<clock::duration>(
                                                         std::chrono::duration<double>(
                                                             config.time_limit_s)))
          : std::nullopt;
  SdpOptions sdp_options;
  sdp_options.tol = config.tol;
  sdp_options.deadline = deadline;

  out.e_hat = BitVector(code.n);
  out.solver_status = "ok";
  try {
    switch (config.kind) {
      case DecoderKind::none: {
        out.feasible = inst.s.is_zero();
        out.lambda = 0.0;
        break;
      }
      case DecoderKind::exact: {
        const ExactResult exact = mld_coset(inst);
        out.e_hat = exact.e_star;
        out.feasible = true;
        out.lambda = exact.value;
        break;
      }
      case DecoderKind::bnb: {
        const ExactResult exact = mld_branch_and_bound(inst, deadline);
        out.e_hat = exact.e_star;
        out.feasible = true;
        out.lambda = exact.value;
        break;
      }
      case DecoderKind::lp:
      case DecoderKind::sa:
      case DecoderKind::ls:
      case DecoderKind::lsplus: {
        const PolyProblem poly = to_polynomial(inst, ParityEncoding::slack_binary);
        RelaxationValue relax;
        if (config.kind == DecoderKind::lp)
          relax = lp_relax(poly, sdp_options);
        else if (config.kind == DecoderKind::sa)
          relax = sherali_adams(inst, config.level, sdp_options);
        else
          relax = lovasz_schrijver(inst, config.kind == DecoderKind::lsplus, sdp_options);
        out.solver_status = status_name(relax.status);
        out.lambda = relax.value;
        if (relax.status == SdpStatus::optimal || relax.status == SdpStatus::max_iterations) {
          const Extraction ext = round_fractional(relax.fractional, inst);
          out.e_hat = ext.e_hat;
          out.feasible = ext.feasible;
        }
        out.timeout = relax.status == SdpStatus::max_iterations && deadline &&
                      clock::now() > *deadline;
        break;
      }
      case DecoderKind::sos: {
        if (moment_dump_json) {
          const PolyProblem poly = to_polynomial(inst, ParityEncoding::slack_binary);
          MomentSolution sol = solve_level(poly, config.level, config.mode, config.tol, deadline);
          *moment_dump_json = moment_solution_to_json(sol);
          out.solver_status = status_name(sol.status);
          out.lambda = sol.lambda;
          if (sol.status == SdpStatus::optimal || sol.status == SdpStatus::max_iterations) {
            const Extraction ext = extract_error(sol, inst);
            out.e_hat = ext.e_hat;
            out.feasible = ext.feasible;
          }
          if (sol.status == SdpStatus::optimal) {
            out.moment_rank = moment_rank(sol, config.level);
            out.rank_loop = config.level >= 2 ? rank_loop(sol) : false;
          }
        } else {
          const DecodeResult res = decode(inst, config.level, config.mode, config.tol, deadline);
          out.e_hat = res.e_hat;
          out.feasible = res.feasible_after_rounding;
          out.lambda = res.lambda;
          out.moment_rank = res.moment_rank;
          out.rank_loop = res.rank_loop;
          out.solver_status = status_name(res.solver_status);
          out.timeout = res.solver_status == SdpStatus::max_iterations && deadline &&
                        clock::now() > *deadline;
        }
        break;
      }
    }
  } catch (const BudgetExceededError& err) {
    out.feasible = false;
    out.solver_status = err.what();
    out.timeout = deadline && clock::now() > *deadline;
  } catch (const std::exception& err) {
    out.feasible = false;
    out.solver_status = err.what();
  }

  out.failure = logical_failure(code, out.e_true, out.e_hat, out.feasible);
  if (out.feasible) out.attained = inst.cost(out.e_hat);
  out.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  return out;
}

TrialStats run_trials(const CssCode& code, const DecoderConfig& config, double p,
                      std::uint64_t trials, std::uint64_t master_seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("physical error rate must be in [0,1]");

  struct Slot {
    bool failure = true;
    bool feasible = false;
    bool timeout = false;
    bool rank_loop = false;
    int rank = 0;
    double gap = 0.0;
    double wall_ms = 0.0;
  };
  std::vector<Slot> slots(trials);

  unsigned workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, trials ? trials : 1));

  std::atomic<std::uint64_t> next{0};
  const auto worker = [&] {
    while (true) {
      const std::uint64_t t = next.fetch_add(1);
      if (t >= trials) break;
      const SingleDecode one = decode_single(code, config, p, master_seed, t);
      Slot& slot = slots[t];
      slot.failure = one.failure;
      slot.feasible = one.feasible;
      slot.timeout = one.timeout;
      slot.rank = one.moment_rank;
      slot.rank_loop = one.rank_loop;
      slot.gap = one.feasible ? one.attained - one.lambda : 0.0;
      slot.wall_ms = one.wall_ms;
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  TrialStats stats;
  stats.family = family_name(code.family);
  stats.distance = code.distance;
  stats.p = p;
  stats.config = config;
  stats.trials = trials;
  stats.seed = master_seed;
  double rank_sum = 0.0, loop_sum = 0.0, gap_sum = 0.0, wall_sum = 0.0;
  std::uint64_t feasible_count = 0;
  for (const Slot& slot : slots) {  // reduce in trial order
    if (slot.failure) ++stats.failures;
    if (slot.timeout) ++stats.timeouts;
    rank_sum += slot.rank;
    loop_sum += slot.rank_loop ? 1.0 : 0.0;
    wall_sum += slot.wall_ms;
    if (slot.feasible) {
      gap_sum += slot.gap;
      ++feasible_count;
    }
  }
  if (trials > 0) {
    stats.p_l = static_cast<double>(stats.failures) / static_cast<double>(trials);
    stats.stderr_p_l = std::sqrt(stats.p_l * (1.0 - stats.p_l) / static_cast<double>(trials));
    stats.mean_rank = rank_sum / static_cast<double>(trials);
    stats.rank_loop_fraction = loop_sum / static_cast<double>(trials);
    stats.mean_wall_ms = wall_sum / static_cast<double>(trials);
    stats.mean_gap = feasible_count ? gap_sum / static_cast<double>(feasible_count) : 0.0;

    // Wilson interval at z = 1.96, reported for small failure counts.
    const double z = 1.959963984540054;
    const double nt = static_cast<double>(trials);
    const double centre = stats.p_l + z * z / (2.0 * nt);
    const double spread =
        z * std::sqrt(stats.p_l * (1.0 - stats.p_l) / nt + z * z / (4.0 * nt * nt));
    const double denom = 1.0 + z * z / nt;
    stats.wilson_low = std::max(0.0, (centre - spread) / denom);
    stats.wilson_high = std::min(1.0, (centre + spread) / denom);
  }
  return stats;
}

std::vector<TrialStats> sweep(const std::vector<CssCode>& codes, const DecoderConfig& config,
                              const std::vector<double>& p_values, std::uint64_t trials,
                              std::uint64_t master_seed) {
  std::vector<TrialStats> rows;
  for (const CssCode& code : codes)
    for (double p : p_values) rows.push_back(run_trials(code, config, p, trials, master_seed));
  return rows;
}

namespace {

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", v);
  return buffer;
}

int csv_level(const DecoderConfig& config) {
  switch (config.kind) {
    case DecoderKind::none:
    case DecoderKind::exact:
    case DecoderKind::bnb: return 0;
    case DecoderKind::lp:
    case DecoderKind::ls:
    case DecoderKind::lsplus: return 1;
    case DecoderKind::sa:
    case DecoderKind::sos: return config.level;
  }
  return 0;
}

}  // namespace

std::string results_csv_header() {
  return "family,distance,p,decoder,level,mode,trials,failures,p_L,stderr,mean_rank,"
         "rank_loop_fraction,mean_gap,mean_wall_ms,seed\n";
}

std::string results_csv_row(const TrialStats& stats, bool include_timing) {
  std::string row;
  row += stats.family;
  row += ',' + std::to_string(stats.distance);
  row += ',' + format_double(stats.p);
  row += ',';
  row += decoder_name(stats.config.kind);
  row += ',' + std::to_string(csv_level(stats.config));
  row += ',';
  row += stats.config.kind == DecoderKind::sos ? sparsity_mode_name(stats.config.mode) : "-";
  row += ',' + std::to_string(stats.trials);
  row += ',' + std::to_string(stats.failures);
  row += ',' + format_double(stats.p_l);
  row += ',' + format_double(stats.stderr_p_l);
  row += ',' + format_double(stats.mean_rank);
  row += ',' + format_double(stats.rank_loop_fraction);
  row += ',' + format_double(stats.mean_gap);
  row += ',' + format_double(include_timing ? stats.mean_wall_ms : 0.0);
  row += ',' + std::to_string(stats.seed);
  row += '\n';
  return row;
}

std::string compare_csv_header() { return "instance_id,method,level,value,exact_value,gap\n"; }

std::string compare_instances_csv(const CssCode& code, int instances, int level, double p,
                                  std::uint64_t master_seed) {
  std::string csv = compare_csv_header();
  for (int idx = 0; idx < instances; ++idx) {
    TrialRng rng(master_seed, static_cast<std::uint64_t>(idx));
    const BitVector error = sample_error(code.n, p, rng);
    const MldInstance inst = make_instance(code, error, p);
    const ComparisonTable table = compare_relaxations(inst, level);
    for (const ComparisonRow& row : table.rows) {
      csv += std::to_string(idx);
      csv += ',';
      csv += relax_method_name(row.method);
      csv += ',' + std::to_string(row.level);
      if (row.status == SdpStatus::optimal) {
        csv += ',' + format_double(row.value);
        csv += table.exact_ok ? ',' + format_double(table.exact_value) : ",";
        csv += table.exact_ok ? ',' + format_double(table.exact_value - row.value) : ",";
      } else {
        csv += ',';
        csv += status_name(row.status);
        csv += table.exact_ok ? ',' + format_double(table.exact_value) : ",";
        csv += ',';
      }
      csv += '\n';
    }
  }
  return csv;
}

}  // namespace sosdec
