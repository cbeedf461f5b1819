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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sosdec/css_code.hpp"
#include "sosdec/lasserre.hpp"
#include "sosdec/mld_problem.hpp"
#include "sosdec/noise.hpp"

namespace sosdec {

enum class DecoderKind { none, exact, bnb, lp, sa, ls, lsplus, sos };

const char* decoder_name(DecoderKind kind);
DecoderKind decoder_from_name(const std::string& name);

struct DecoderConfig {
  DecoderKind kind = DecoderKind::exact;
  int level = 2;                           // sos and sa
  SparsityMode mode = SparsityMode::sparse;  // sos
  double tol = 1e-8;
  double time_limit_s = 60.0;  // per decode; timeouts count as failures
  unsigned threads = 0;        // 0 = hardware concurrency
};

// Failure iff the correction is infeasible or the residual e_true ^ e_hat
// anticommutes with a logical of the opposite sector. The verdict depends
// only on the residual's stabilizer coset.
bool logical_failure(const CssCode& code, const BitVector& e_true, const BitVector& e_hat,
                     bool feasible);

// X-sector decoding instance of a code at uniform physical error rate p.
MldInstance make_instance(const CssCode& code, const BitVector& error, double p);

struct SingleDecode {
  BitVector e_true;
  BitVector e_hat;
  BitVector syndrome_bits;
  bool feasible = false;
  bool failure = true;
  bool timeout = false;
  double lambda = 0.0;          // relaxation lower bound (exact: optimum)
  double attained = 0.0;        // cost of e_hat when feasible
  int moment_rank = 0;          // sos only
  bool rank_loop = false;       // sos, level >= 2
  double wall_ms = 0.0;
  std::string solver_status;
};

// One reproducible trial: the sampled error depends only on
// (master_seed, trial_index, p), never on the decoder. When
// moment_dump_json is non-null and the decoder is sos, it receives the
// moment-solution debug document.
SingleDecode decode_single(const CssCode& code, const DecoderConfig& config, double p,
                           std::uint64_t master_seed, std::uint64_t trial_index,
                           std::string* moment_dump_json = nullptr);

struct TrialStats {
  std::string family;
  int distance = 0;
  double p = 0.0;
  DecoderConfig config;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::uint64_t timeouts = 0;
  double p_l = 0.0;
  double stderr_p_l = 0.0;
  double mean_rank = 0.0;
  double rank_loop_fraction = 0.0;
  double mean_gap = 0.0;
  double mean_wall_ms = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  std::uint64_t seed = 0;
};

// Monte-Carlo logical error estimate. Trials are distributed over a worker
// pool; aggregation is reduced in trial order so results are bit-identical
// regardless of scheduling.
TrialStats run_trials(const CssCode& code, const DecoderConfig& config, double p,
                      std::uint64_t trials, std::uint64_t master_seed);

std::vector<TrialStats> sweep(const std::vector<CssCode>& codes, const DecoderConfig& config,
                              const std::vector<double>& p_values, std::uint64_t trials,
                              std::uint64_t master_seed);

// RESULTS.csv schema (exact column order):
// family,distance,p,decoder,level,mode,trials,failures,p_L,stderr,mean_rank,
// rank_loop_fraction,mean_gap,mean_wall_ms,seed
std::string results_csv_header();
// include_timing=false writes 0 for mean_wall_ms so identical seeds give
// byte-identical files.
std::string results_csv_row(const TrialStats& stats, bool include_timing);

// COMPARE.csv: instance_id,method,level,value,exact_value,gap
std::string compare_csv_header();
std::string compare_instances_csv(const CssCode& code, int instances, int level, double p,
                                  std::uint64_t master_seed);

}  // namespace sosdec
