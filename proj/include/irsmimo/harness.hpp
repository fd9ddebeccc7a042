// SPDX-License-Identifier: Apache-2.0
//
// irsmimo — simulation library for IRS-assisted massive MIMO uplink
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IRSMIMO_HARNESS_HPP
#define IRSMIMO_HARNESS_HPP

#include "irsmimo/asymptotics.hpp"
#include "irsmimo/beamforming.hpp"
#include "irsmimo/channel.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsmimo
{

// Receive schemes of the benchmark. The first three are the sum-rate
// comparison schemes; zf_subopt_irs is exposed for convergence studies.
enum class Scheme
{
    mrc_no_irs,
    mrc_irs,
    zf_opt_irs,
    zf_subopt_irs
};

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string &name);

// Training overhead in symbols for one scheme at a given N: K slots when only
// the effective channels are needed, N + 2K - 1 when the cascaded channels
// must be known as well.
arma::uword training_overhead(Scheme scheme, arma::uword n, arma::uword k);

struct CorrelationRho
{
    double magnitude = 0.5;
    double phase = 0.0;

    std::complex<double> value() const { return std::polar(magnitude, phase); }
};

struct ExperimentConfig
{
    arma::uword m = 512;
    arma::uword k = 8;
    arma::uword t_block = 1000;
    double e_dbm = 13.0;
    double bandwidth_hz = 1e8;
    double noise_psd_dbm_hz = -169.0;
    double beta_bu_db = -100.0;
    double beta_bi_db = -80.0;
    double beta_iu_db = -60.0;
    CorrelationRho rho_bs_user; // C_k^B family
    CorrelationRho rho_bs_irs;  // C^B
    CorrelationRho rho_irs;     // C^I
    CorrelationRho rho_irs_user; // C_k^I family
    std::vector<Scheme> schemes = {Scheme::mrc_no_irs, Scheme::mrc_irs, Scheme::zf_opt_irs};
    std::vector<arma::uword> n_sweep = {10, 50, 90, 130, 170, 210};
    std::vector<arma::uword> m_sweep; // optional; enables convergence studies
    arma::uword trials = 50;
    std::uint64_t seed = 1;
    arma::uword phi_starts = 64;
    arma::uword phi_coord_passes = 2;
    arma::uword convergence_lines = 10;
    arma::uword threads = 0; // 0 = hardware concurrency
};

struct config_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Flat key = value text, '#' comments. Powers carry _dbm suffixes, path
// losses _db; both are converted to linear units internally.
ExperimentConfig parse_config_text(const std::string &text);
ExperimentConfig parse_config_file(const std::string &path);
void validate_config(const ExperimentConfig &config);

// One (scheme, trial) outcome with per-user diagnostics.
struct ResultRecord
{
    Scheme scheme = Scheme::mrc_no_irs;
    arma::uword n = 0;
    arma::uword m = 0;
    arma::uword trial = 0;
    arma::vec gamma;
    arma::vec rate;
    arma::vec leakage;
    double sum_rate = 0.0;
    arma::uword tau = 0;
    bool degenerate = false;
};

struct AggregateRow
{
    Scheme scheme = Scheme::mrc_no_irs;
    arma::uword n = 0;
    arma::uword m = 0;
    double mean_sum_rate = 0.0;
    double std_error = 0.0;
    arma::uword trials_used = 0;
};

struct SweepResult
{
    std::vector<ResultRecord> records;
    std::vector<AggregateRow> aggregates;
};

// Scenario state shared by all trials of one (N, M) sweep point: correlation
// square roots are computed once here, not per trial.
struct Scenario
{
    SystemParams params;
    PathLossSet path_loss;
    arma::cx_mat c_i;      // IRS transmit correlation, used by the limits
    arma::cx_mat c_i_sqrt; // dense Hermitian square root of c_i
    CorrelationSqrts sqrts;
};

Scenario make_scenario(const ExperimentConfig &config, arma::uword n, arma::uword m);

// Runs every enabled scheme on one seeded channel draw. Records come back in
// the order schemes are listed in the config.
std::vector<ResultRecord> run_trial(const ExperimentConfig &config, const Scenario &scenario,
                                    arma::uword trial_index);
std::vector<ResultRecord> run_trial(const ExperimentConfig &config, arma::uword n,
                                    arma::uword m, arma::uword trial_index);

// Full sweep over n_sweep (x m_sweep when present) with per-trial records and
// mean/standard-error aggregates per (scheme, N, M). Degenerate trials are
// kept in the records but excluded from the aggregates.
SweepResult sweep(const ExperimentConfig &config);

// One convergence line: a fixed user-IRS draw compared against the matching
// closed-form limit across the M sweep.
struct ConvergenceRow
{
    Scheme scheme = Scheme::mrc_irs;
    arma::uword n = 0;
    arma::uword m = 0;
    arma::uword line = 0;
    arma::uword user = 0;
    double mc_gamma = 0.0;
    double limit_gamma = 0.0;
    double rel_error = 0.0;
};

// Monte Carlo versus closed-form limits for the schemes that have one
// (mrc_irs and zf_subopt_irs), holding t and phi = 1 fixed per line while h
// and R are redrawn config.trials times per M.
std::vector<ConvergenceRow> convergence_study(const ExperimentConfig &config);

// Serialization. All doubles are printed with round-trip precision so equal
// configs produce byte-identical files.
std::string records_csv(const std::vector<ResultRecord> &records);
std::string aggregates_csv(const std::vector<AggregateRow> &aggregates);
std::string convergence_csv(const std::vector<ConvergenceRow> &rows);
std::string sweep_json(const SweepResult &result);
std::string convergence_json(const std::vector<ConvergenceRow> &rows);
std::string plot_data_csv(const SweepResult &result, const ExperimentConfig &config);

void write_text_file(const std::string &path, const std::string &content);

// Runs fn(0..count-1) across up to n_threads workers (0 = hardware
// concurrency). Rethrows the first task exception after joining.
void parallel_for(arma::uword count, arma::uword n_threads,
                  const std::function<void(arma::uword)> &fn);

} // namespace irsmimo

#endif
