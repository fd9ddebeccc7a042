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

#include "irsmimo/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace irsmimo
{

namespace
{

// Substream tags for the per-trial random streams.
enum : std::uint64_t
{
    kStreamTrial = 11,
    kStreamPhiSearch = 12,
    kStreamConvergenceT = 13,
    kStreamConvergenceHR = 14
};

std::string format_double(double value)
{
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

double mean_of(const std::vector<double> &values)
{
    double total = 0.0;
    for (double v : values)
        total += v;
    return total / static_cast<double>(values.size());
}

double std_error_of(const std::vector<double> &values)
{
    if (values.size() < 2)
        return 0.0;
    const double mean = mean_of(values);
    double ssd = 0.0;
    for (double v : values)
        ssd += (v - mean) * (v - mean);
    const double variance = ssd / static_cast<double>(values.size() - 1);
    return std::sqrt(variance / static_cast<double>(values.size()));
}

} // namespace

std::string to_string(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::mrc_no_irs:
        return "MRC_NO_IRS";
    case Scheme::mrc_irs:
        return "MRC_IRS";
    case Scheme::zf_opt_irs:
        return "ZF_OPT_IRS";
    case Scheme::zf_subopt_irs:
        return "ZF_SUBOPT_IRS";
    }
    throw std::logic_error("to_string: unknown scheme");
}

Scheme scheme_from_string(const std::string &name)
{
    if (name == "MRC_NO_IRS")
        return Scheme::mrc_no_irs;
    if (name == "MRC_IRS")
        return Scheme::mrc_irs;
    if (name == "ZF_OPT_IRS")
        return Scheme::zf_opt_irs;
    if (name == "ZF_SUBOPT_IRS")
        return Scheme::zf_subopt_irs;
    throw config_error("unknown scheme name: " + name);
}

arma::uword training_overhead(Scheme scheme, arma::uword n, arma::uword k)
{
    switch (scheme)
    {
    case Scheme::mrc_no_irs:
    case Scheme::zf_opt_irs:
        return k;
    case Scheme::mrc_irs:
    case Scheme::zf_subopt_irs:
        return n + 2 * k - 1;
    }
    throw std::logic_error("training_overhead: unknown scheme");
}

// --- configuration ------------------------------------------------------

namespace
{

struct KeyValue
{
    std::string key;
    std::string value;
};

std::string trim(const std::string &s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<KeyValue> tokenize_config(const std::string &text)
{
    std::vector<KeyValue> pairs;
    std::istringstream stream(text);
    std::string line;
    arma::uword line_no = 0;
    while (std::getline(stream, line))
    {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
        KeyValue kv;
        kv.key = trim(line.substr(0, eq));
        kv.value = trim(line.substr(eq + 1));
        if (kv.key.empty() || kv.value.empty())
            throw config_error("config line " + std::to_string(line_no) +
                               ": empty key or value");
        pairs.push_back(std::move(kv));
    }
    return pairs;
}

double parse_double(const KeyValue &kv)
{
    std::size_t consumed = 0;
    double value = 0.0;
    try
    {
        value = std::stod(kv.value, &consumed);
    }
    catch (const std::exception &)
    {
        throw config_error("config key " + kv.key + ": not a number: " + kv.value);
    }
    if (consumed != kv.value.size())
        throw config_error("config key " + kv.key + ": trailing characters: " + kv.value);
    return value;
}

std::uint64_t parse_u64(const KeyValue &kv)
{
    const double value = parse_double(kv);
    if (value < 0.0 || value != std::floor(value))
        throw config_error("config key " + kv.key + ": expected a nonnegative integer");
    return static_cast<std::uint64_t>(value);
}

std::vector<std::string> split_list(const std::string &value)
{
    std::vector<std::string> items;
    std::string item;
    std::istringstream stream(value);
    while (std::getline(stream, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            items.push_back(item);
    }
    return items;
}

std::vector<arma::uword> parse_uword_list(const KeyValue &kv)
{
    std::vector<arma::uword> values;
    for (const std::string &item : split_list(kv.value))
        values.push_back(static_cast<arma::uword>(parse_u64({kv.key, item})));
    if (values.empty())
        throw config_error("config key " + kv.key + ": empty list");
    return values;
}

} // namespace

ExperimentConfig parse_config_text(const std::string &text)
{
    ExperimentConfig config;
    for (const KeyValue &kv : tokenize_config(text))
    {
        if (kv.key == "m")
            config.m = parse_u64(kv);
        else if (kv.key == "k")
            config.k = parse_u64(kv);
        else if (kv.key == "t_block")
            config.t_block = parse_u64(kv);
        else if (kv.key == "e_dbm")
            config.e_dbm = parse_double(kv);
        else if (kv.key == "bandwidth_hz")
            config.bandwidth_hz = parse_double(kv);
        else if (kv.key == "noise_psd_dbm_hz")
            config.noise_psd_dbm_hz = parse_double(kv);
        else if (kv.key == "beta_bu_db")
            config.beta_bu_db = parse_double(kv);
        else if (kv.key == "beta_bi_db")
            config.beta_bi_db = parse_double(kv);
        else if (kv.key == "beta_iu_db")
            config.beta_iu_db = parse_double(kv);
        else if (kv.key == "rho_bs_user_mag")
            config.rho_bs_user.magnitude = parse_double(kv);
        else if (kv.key == "rho_bs_user_phase")
            config.rho_bs_user.phase = parse_double(kv);
        else if (kv.key == "rho_bs_irs_mag")
            config.rho_bs_irs.magnitude = parse_double(kv);
        else if (kv.key == "rho_bs_irs_phase")
            config.rho_bs_irs.phase = parse_double(kv);
        else if (kv.key == "rho_irs_mag")
            config.rho_irs.magnitude = parse_double(kv);
        else if (kv.key == "rho_irs_phase")
            config.rho_irs.phase = parse_double(kv);
        else if (kv.key == "rho_irs_user_mag")
            config.rho_irs_user.magnitude = parse_double(kv);
        else if (kv.key == "rho_irs_user_phase")
            config.rho_irs_user.phase = parse_double(kv);
        else if (kv.key == "schemes")
        {
            config.schemes.clear();
            for (const std::string &name : split_list(kv.value))
                config.schemes.push_back(scheme_from_string(name));
        }
        else if (kv.key == "n_sweep")
            config.n_sweep = parse_uword_list(kv);
        else if (kv.key == "m_sweep")
            config.m_sweep = parse_uword_list(kv);
        else if (kv.key == "trials")
            config.trials = parse_u64(kv);
        else if (kv.key == "seed")
            config.seed = parse_u64(kv);
        else if (kv.key == "phi_starts")
            config.phi_starts = parse_u64(kv);
        else if (kv.key == "phi_coord_passes")
            config.phi_coord_passes = parse_u64(kv);
        else if (kv.key == "convergence_lines")
            config.convergence_lines = parse_u64(kv);
        else if (kv.key == "threads")
            config.threads = parse_u64(kv);
        else
            throw config_error("unknown config key: " + kv.key);
    }
    validate_config(config);
    return config;
}

ExperimentConfig parse_config_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void validate_config(const ExperimentConfig &config)
{
    if (config.trials < 1)
        throw config_error("config: trials must be at least 1");
    if (config.k < 1)
        throw config_error("config: k must be at least 1");
    if (config.m < config.k)
        throw config_error("config: m must be at least k");
    if (config.schemes.empty())
        throw config_error("config: schemes must not be empty");
    if (config.n_sweep.empty())
        throw config_error("config: n_sweep must not be empty");
    for (arma::uword n : config.n_sweep)
    {
        if (n <= config.k)
            throw config_error("config: every n must exceed k");
        if (config.t_block <= n + 2 * config.k - 1)
            throw config_error("config: t_block must exceed n + 2k - 1 for every n");
    }
    for (arma::uword m : config.m_sweep)
        if (m < config.k)
            throw config_error("config: every m in m_sweep must be at least k");
    for (const CorrelationRho *rho :
         {&config.rho_bs_user, &config.rho_bs_irs, &config.rho_irs, &config.rho_irs_user})
    {
        if (rho->magnitude < 0.0 || rho->magnitude >= 1.0)
            throw config_error("config: correlation magnitudes must lie in [0, 1)");
        if (!std::isfinite(rho->phase))
            throw config_error("config: correlation phases must be finite");
    }
    if (!(config.bandwidth_hz > 0.0))
        throw config_error("config: bandwidth must be positive");
    if (config.phi_starts < 1)
        throw config_error("config: phi_starts must be at least 1");
    if (config.convergence_lines < 1)
        throw config_error("config: convergence_lines must be at least 1");
    // full parameter-set checks for each sweep point
    for (arma::uword n : config.n_sweep)
    {
        std::vector<arma::uword> ms = config.m_sweep.empty()
                                          ? std::vector<arma::uword>{config.m}
                                          : config.m_sweep;
        for (arma::uword m : ms)
        {
            try
            {
                make_system_params(m, n, config.k, config.t_block, config.e_dbm,
                                   config.bandwidth_hz, config.noise_psd_dbm_hz);
            }
            catch (const std::invalid_argument &err)
            {
                throw config_error(std::string("config: ") + err.what());
            }
        }
    }
}

// --- scenario and trials -------------------------------------------------

Scenario make_scenario(const ExperimentConfig &config, arma::uword n, arma::uword m)
{
    Scenario scenario;
    scenario.params = make_system_params(m, n, config.k, config.t_block, config.e_dbm,
                                         config.bandwidth_hz, config.noise_psd_dbm_hz);
    scenario.path_loss = uniform_path_loss(config.k, config.beta_bu_db, config.beta_bi_db,
                                           config.beta_iu_db);
    validate_path_loss(scenario.path_loss, config.k);

    // share square roots across families with the same (dim, rho)
    struct Cached
    {
        arma::uword dim;
        std::complex<double> rho;
        arma::cx_mat sqrt;
    };
    std::vector<Cached> cache;
    const auto sqrt_for = [&cache](arma::uword dim, std::complex<double> rho) -> arma::cx_mat {
        if (std::abs(rho) == 0.0)
            return arma::cx_mat(); // empty marks identity
        for (const Cached &entry : cache)
            if (entry.dim == dim && entry.rho == rho)
                return entry.sqrt;
        Cached entry{dim, rho, hermitian_sqrt(exp_correlation(dim, rho))};
        cache.push_back(entry);
        return entry.sqrt;
    };

    scenario.sqrts.c_b_user_sqrt.assign(config.k, sqrt_for(m, config.rho_bs_user.value()));
    scenario.sqrts.c_b_sqrt = sqrt_for(m, config.rho_bs_irs.value());
    scenario.sqrts.c_i_sqrt = sqrt_for(n, config.rho_irs.value());
    scenario.sqrts.c_i_user_sqrt.assign(config.k, sqrt_for(n, config.rho_irs_user.value()));

    scenario.c_i = exp_correlation(n, config.rho_irs.value());
    scenario.c_i_sqrt = scenario.sqrts.c_i_sqrt.is_empty()
                            ? arma::cx_mat(n, n, arma::fill::eye)
                            : scenario.sqrts.c_i_sqrt;
    return scenario;
}

namespace
{

ResultRecord evaluate_scheme(const ExperimentConfig &config, const Scenario &scenario,
                             const ChannelRealization &real, Scheme scheme,
                             arma::uword trial_index)
{
    const SystemParams &params = scenario.params;
    const double p = params.transmit_power();

    ReflectionConfig refl;
    switch (scheme)
    {
    case Scheme::mrc_no_irs:
        refl = zero_reflection(params.n);
        break;
    case Scheme::mrc_irs:
    {
        PhiSearchBudget budget;
        budget.random_starts = config.phi_starts;
        budget.coord_passes = config.phi_coord_passes;
        budget.seed = stream_key({config.seed, params.n, params.m, trial_index, kStreamPhiSearch});
        refl = optimize_phi_mrc(real.t, scenario.c_i, scenario.path_loss.beta_bu,
                                scenario.path_loss.beta_bi, params.e_fixed_mw,
                                params.sigma2_mw, budget)
                   .phi;
        break;
    }
    case Scheme::zf_opt_irs:
    case Scheme::zf_subopt_irs:
        refl = ones_reflection(params.n);
        break;
    }

    const arma::cx_mat eff = effective_channels(real, refl);
    BeamformerSet set;
    switch (scheme)
    {
    case Scheme::mrc_no_irs:
    case Scheme::mrc_irs:
        set = mrc(eff);
        break;
    case Scheme::zf_opt_irs:
        set = optimal_zf_set(eff);
        break;
    case Scheme::zf_subopt_irs:
        set = suboptimal_zf_set(real, scenario.c_i_sqrt);
        break;
    }
    ResultRecord record;
    record.scheme = scheme;
    record.n = params.n;
    record.m = params.m;
    record.trial = trial_index;
    record.tau = training_overhead(scheme, params.n, params.k);
    record.gamma = arma::vec(params.k);
    record.leakage = arma::vec(params.k);
    for (arma::uword k = 0; k < params.k; ++k)
    {
        record.gamma(k) = sinr(set, eff, k, p, params.sigma2_mw);
        record.leakage(k) = interference_leakage(set.w.col(k), eff, k);
    }
    record.rate = rates_with_overhead(record.gamma, params.t_block, record.tau).rates;
    record.sum_rate = arma::accu(record.rate);
    record.degenerate = std::any_of(set.degenerate.begin(), set.degenerate.end(),
                                    [](bool flag) { return flag; });
    return record;
}

} // namespace

std::vector<ResultRecord> run_trial(const ExperimentConfig &config, const Scenario &scenario,
                                    arma::uword trial_index)
{
    RngStream rng(config.seed,
                  stream_key({scenario.params.n, scenario.params.m, trial_index, kStreamTrial}));
    const ChannelRealization real =
        sample_realization(scenario.params, scenario.path_loss, scenario.sqrts, rng);

    std::vector<ResultRecord> records;
    records.reserve(config.schemes.size());
    for (Scheme scheme : config.schemes)
        records.push_back(evaluate_scheme(config, scenario, real, scheme, trial_index));
    return records;
}

std::vector<ResultRecord> run_trial(const ExperimentConfig &config, arma::uword n,
                                    arma::uword m, arma::uword trial_index)
{
    validate_config(config);
    return run_trial(config, make_scenario(config, n, m), trial_index);
}

void parallel_for(arma::uword count, arma::uword n_threads,
                  const std::function<void(arma::uword)> &fn)
{
    if (count == 0)
        return;
    arma::uword workers = n_threads == 0 ? std::thread::hardware_concurrency() : n_threads;
    workers = std::max<arma::uword>(1, std::min(workers, count));
    if (workers == 1)
    {
        for (arma::uword i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<arma::uword> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const auto worker = [&]() {
        while (true)
        {
            const arma::uword index = next.fetch_add(1);
            if (index >= count)
                return;
            try
            {
                fn(index);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (arma::uword i = 0; i < workers; ++i)
        pool.emplace_back(worker);
    for (auto &thread : pool)
        thread.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

SweepResult sweep(const ExperimentConfig &config)
{
    validate_config(config);
    const std::vector<arma::uword> ms =
        config.m_sweep.empty() ? std::vector<arma::uword>{config.m} : config.m_sweep;

    SweepResult result;
    for (arma::uword n : config.n_sweep)
    {
        for (arma::uword m : ms)
        {
            const Scenario scenario = make_scenario(config, n, m);
            std::vector<std::vector<ResultRecord>> per_trial(config.trials);
            parallel_for(config.trials, config.threads, [&](arma::uword trial) {
                per_trial[trial] = run_trial(config, scenario, trial);
            });

            // aggregate in deterministic (scheme, trial) order
            for (std::size_t s = 0; s < config.schemes.size(); ++s)
            {
                AggregateRow row;
                row.scheme = config.schemes[s];
                row.n = n;
                row.m = m;
                std::vector<double> sum_rates;
                sum_rates.reserve(config.trials);
                for (arma::uword trial = 0; trial < config.trials; ++trial)
                {
                    const ResultRecord &record = per_trial[trial][s];
                    if (!record.degenerate)
                        sum_rates.push_back(record.sum_rate);
                }
                row.trials_used = sum_rates.size();
                row.mean_sum_rate = sum_rates.empty() ? 0.0 : mean_of(sum_rates);
                row.std_error = std_error_of(sum_rates);
                result.aggregates.push_back(row);
            }
            for (arma::uword trial = 0; trial < config.trials; ++trial)
                for (ResultRecord &record : per_trial[trial])
                    result.records.push_back(std::move(record));
        }
    }
    return result;
}

std::vector<ConvergenceRow> convergence_study(const ExperimentConfig &config)
{
    validate_config(config);
    if (config.m_sweep.empty())
        throw config_error("convergence_study: config must provide m_sweep");

    std::vector<Scheme> schemes;
    for (Scheme scheme : config.schemes)
        if (scheme == Scheme::mrc_irs || scheme == Scheme::zf_subopt_irs)
            schemes.push_back(scheme);
    if (schemes.empty())
        schemes = {Scheme::mrc_irs, Scheme::zf_subopt_irs};

    std::vector<ConvergenceRow> rows;
    for (arma::uword n : config.n_sweep)
    {
        // scenarios per M, shared across lines
        std::vector<Scenario> scenarios;
        scenarios.reserve(config.m_sweep.size());
        for (arma::uword m : config.m_sweep)
            scenarios.push_back(make_scenario(config, n, m));
        const Scenario &base = scenarios.front();

        std::vector<std::vector<ConvergenceRow>> per_line(config.convergence_lines);
        parallel_for(config.convergence_lines, config.threads, [&](arma::uword line) {
            // one user-IRS draw per line, held fixed across the M sweep
            RngStream rng_t(config.seed, stream_key({n, line, kStreamConvergenceT}));
            const arma::cx_mat t =
                sample_user_irs_channels(base.params, base.path_loss, base.sqrts, rng_t);
            const ReflectionConfig phi = ones_reflection(n);

            std::vector<std::vector<double>> limits(schemes.size());
            for (std::size_t s = 0; s < schemes.size(); ++s)
            {
                limits[s].resize(config.k);
                for (arma::uword k = 0; k < config.k; ++k)
                {
                    if (schemes[s] == Scheme::mrc_irs)
                        limits[s][k] = mrc_irs_asymptotic_sinr(
                            phi, t, base.c_i, base.path_loss.beta_bu, base.path_loss.beta_bi,
                            base.params.e_fixed_mw, base.params.sigma2_mw, k);
                    else
                        limits[s][k] = zf_subopt_asymptotic_sinr(
                            t, base.c_i, base.path_loss.beta_bu(k), base.path_loss.beta_bi,
                            base.params.e_fixed_mw, base.params.sigma2_mw, k);
                }
            }

            for (std::size_t mi = 0; mi < config.m_sweep.size(); ++mi)
            {
                const Scenario &scenario = scenarios[mi];
                const SystemParams &params = scenario.params;
                const double p = params.transmit_power();

                arma::mat gamma_sums(config.k, schemes.size(), arma::fill::zeros);
                for (arma::uword inner = 0; inner < config.trials; ++inner)
                {
                    RngStream rng_hr(config.seed, stream_key({n, params.m, line, inner,
                                                              kStreamConvergenceHR}));
                    ChannelRealization real;
                    real.t = t;
                    {
                        RngStream rng_h(rng_hr.seed(), stream_key({rng_hr.stream_id(), 1}));
                        RngStream rng_r(rng_hr.seed(), stream_key({rng_hr.stream_id(), 2}));
                        real.h = sample_direct_channels(params, scenario.path_loss,
                                                        scenario.sqrts, rng_h);
                        real.r_mat = sample_irs_bs_matrix(params, scenario.path_loss,
                                                          scenario.sqrts, rng_r);
                    }
                    const arma::cx_mat eff = effective_channels(real, phi);
                    for (std::size_t s = 0; s < schemes.size(); ++s)
                    {
                        const BeamformerSet set = schemes[s] == Scheme::mrc_irs
                                                      ? mrc(eff)
                                                      : suboptimal_zf_set(real, scenario.c_i_sqrt);
                        for (arma::uword k = 0; k < config.k; ++k)
                            gamma_sums(k, s) += sinr(set, eff, k, p, params.sigma2_mw);
                    }
                }

                for (std::size_t s = 0; s < schemes.size(); ++s)
                    for (arma::uword k = 0; k < config.k; ++k)
                    {
                        ConvergenceRow row;
                        row.scheme = schemes[s];
                        row.n = n;
                        row.m = params.m;
                        row.line = line;
                        row.user = k;
                        row.mc_gamma = gamma_sums(k, s) / static_cast<double>(config.trials);
                        row.limit_gamma = limits[s][k];
                        row.rel_error = std::abs(row.mc_gamma - row.limit_gamma) /
                                        row.limit_gamma;
                        per_line[line].push_back(row);
                    }
            }
        });

        for (const auto &line_rows : per_line)
            rows.insert(rows.end(), line_rows.begin(), line_rows.end());
    }
    return rows;
}

// --- serialization --------------------------------------------------------

std::string records_csv(const std::vector<ResultRecord> &records)
{
    std::ostringstream out;
    out << "scheme,n,m,trial,user,gamma,rate,sum_rate,tau,leakage,degenerate\n";
    for (const ResultRecord &record : records)
        for (arma::uword k = 0; k < record.gamma.n_elem; ++k)
            out << to_string(record.scheme) << ',' << record.n << ',' << record.m << ','
                << record.trial << ',' << k << ',' << format_double(record.gamma(k)) << ','
                << format_double(record.rate(k)) << ',' << format_double(record.sum_rate)
                << ',' << record.tau << ',' << format_double(record.leakage(k)) << ','
                << (record.degenerate ? 1 : 0) << '\n';
    return out.str();
}

std::string aggregates_csv(const std::vector<AggregateRow> &aggregates)
{
    std::ostringstream out;
    out << "scheme,n,m,mean_sum_rate,stderr,trials_used\n";
    for (const AggregateRow &row : aggregates)
        out << to_string(row.scheme) << ',' << row.n << ',' << row.m << ','
            << format_double(row.mean_sum_rate) << ',' << format_double(row.std_error) << ','
            << row.trials_used << '\n';
    return out.str();
}

std::string convergence_csv(const std::vector<ConvergenceRow> &rows)
{
    std::ostringstream out;
    out << "scheme,n,m,line,user,mc_gamma,limit_gamma,rel_error\n";
    for (const ConvergenceRow &row : rows)
        out << to_string(row.scheme) << ',' << row.n << ',' << row.m << ',' << row.line << ','
            << row.user << ',' << format_double(row.mc_gamma) << ','
            << format_double(row.limit_gamma) << ',' << format_double(row.rel_error) << '\n';
    return out.str();
}

std::string sweep_json(const SweepResult &result)
{
    nlohmann::json root;
    root["records"] = nlohmann::json::array();
    for (const ResultRecord &record : result.records)
    {
        for (arma::uword k = 0; k < record.gamma.n_elem; ++k)
        {
            nlohmann::json row;
            row["scheme"] = to_string(record.scheme);
            row["n"] = record.n;
            row["m"] = record.m;
            row["trial"] = record.trial;
            row["user"] = k;
            row["gamma"] = record.gamma(k);
            row["rate"] = record.rate(k);
            row["sum_rate"] = record.sum_rate;
            row["tau"] = record.tau;
            row["leakage"] = record.leakage(k);
            row["degenerate"] = record.degenerate;
            root["records"].push_back(std::move(row));
        }
    }
    root["aggregates"] = nlohmann::json::array();
    for (const AggregateRow &row : result.aggregates)
    {
        nlohmann::json agg;
        agg["scheme"] = to_string(row.scheme);
        agg["n"] = row.n;
        agg["m"] = row.m;
        agg["mean_sum_rate"] = row.mean_sum_rate;
        agg["stderr"] = row.std_error;
        agg["trials_used"] = row.trials_used;
        root["aggregates"].push_back(std::move(agg));
    }
    return root.dump(2) + "\n";
}

std::string convergence_json(const std::vector<ConvergenceRow> &rows)
{
    nlohmann::json root;
    root["convergence"] = nlohmann::json::array();
    for (const ConvergenceRow &row : rows)
    {
        nlohmann::json item;
        item["scheme"] = to_string(row.scheme);
        item["n"] = row.n;
        item["m"] = row.m;
        item["line"] = row.line;
        item["user"] = row.user;
        item["mc_gamma"] = row.mc_gamma;
        item["limit_gamma"] = row.limit_gamma;
        item["rel_error"] = row.rel_error;
        root["convergence"].push_back(std::move(item));
    }
    return root.dump(2) + "\n";
}

std::string plot_data_csv(const SweepResult &result, const ExperimentConfig &config)
{
    std::ostringstream out;
    out << "n,m";
    for (Scheme scheme : config.schemes)
        out << ',' << to_string(scheme) << "_mean," << to_string(scheme) << "_stderr";
    out << '\n';

    std::vector<arma::uword> ms =
        config.m_sweep.empty() ? std::vector<arma::uword>{config.m} : config.m_sweep;
    for (arma::uword n : config.n_sweep)
        for (arma::uword m : ms)
        {
            out << n << ',' << m;
            for (Scheme scheme : config.schemes)
            {
                const auto it = std::find_if(
                    result.aggregates.begin(), result.aggregates.end(),
                    [&](const AggregateRow &row) {
                        return row.scheme == scheme && row.n == n && row.m == m;
                    });
                if (it == result.aggregates.end())
                    out << ",,";
                else
                    out << ',' << format_double(it->mean_sum_rate) << ','
                        << format_double(it->std_error);
            }
            out << '\n';
        }
    return out.str();
}

void write_text_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out)
        throw std::runtime_error("failed writing output file: " + path);
}

} // namespace irsmimo
