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

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace
{

std::vector<arma::uword> parse_sweep_range(const std::string &spec)
{
    // lo:hi:step, inclusive of hi when it lands on the grid
    const auto first = spec.find(':');
    const auto second = spec.find(':', first == std::string::npos ? 0 : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw irsmimo::config_error("--sweep-n expects lo:hi:step");
    long lo = 0, hi = 0, step = 0;
    try
    {
        lo = std::stol(spec.substr(0, first));
        hi = std::stol(spec.substr(first + 1, second - first - 1));
        step = std::stol(spec.substr(second + 1));
    }
    catch (const std::exception &)
    {
        throw irsmimo::config_error("--sweep-n expects numeric lo:hi:step");
    }
    if (lo <= 0 || hi < lo || step <= 0)
        throw irsmimo::config_error("--sweep-n requires 0 < lo <= hi and step > 0");
    std::vector<arma::uword> values;
    for (long v = lo; v <= hi; v += step)
        values.push_back(static_cast<arma::uword>(v));
    return values;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Monte Carlo sum-rate and convergence studies for the "
                 "IRS-assisted massive MIMO uplink"};

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    std::optional<arma::uword> trials_override;
    std::string sweep_n_spec;
    bool run_convergence = false;
    bool emit_plot_data = false;

    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--seed", seed_override, "override the config seed");
    app.add_option("--trials", trials_override, "override the config trial count");
    app.add_option("--sweep-n", sweep_n_spec, "override n_sweep as lo:hi:step");
    app.add_flag("--convergence", run_convergence,
                 "run the M-sweep convergence study instead of the N sweep");
    app.add_flag("--emit-plot-data", emit_plot_data,
                 "also write a per-scheme sum-rate table for plotting");

    CLI11_PARSE(app, argc, argv);

    try
    {
        irsmimo::ExperimentConfig config = irsmimo::parse_config_file(config_path);
        if (seed_override)
            config.seed = *seed_override;
        if (trials_override)
            config.trials = *trials_override;
        if (!sweep_n_spec.empty())
            config.n_sweep = parse_sweep_range(sweep_n_spec);
        irsmimo::validate_config(config);
        if (run_convergence && config.m_sweep.empty())
            throw irsmimo::config_error("--convergence requires m_sweep in the config");

        std::filesystem::create_directories(out_dir);
        const std::filesystem::path out(out_dir);

        if (run_convergence)
        {
            const auto rows = irsmimo::convergence_study(config);
            irsmimo::write_text_file((out / "convergence.csv").string(),
                                     irsmimo::convergence_csv(rows));
            irsmimo::write_text_file((out / "convergence.json").string(),
                                     irsmimo::convergence_json(rows));
            std::cout << "wrote " << rows.size() << " convergence rows to " << out_dir
                      << std::endl;
        }
        else
        {
            const irsmimo::SweepResult result = irsmimo::sweep(config);
            irsmimo::write_text_file((out / "results.csv").string(),
                                     irsmimo::records_csv(result.records));
            irsmimo::write_text_file((out / "aggregates.csv").string(),
                                     irsmimo::aggregates_csv(result.aggregates));
            irsmimo::write_text_file((out / "results.json").string(),
                                     irsmimo::sweep_json(result));
            if (emit_plot_data)
                irsmimo::write_text_file((out / "plot_sum_rate.csv").string(),
                                         irsmimo::plot_data_csv(result, config));
            std::cout << "wrote " << result.records.size() << " trial records and "
                      << result.aggregates.size() << " aggregate rows to " << out_dir
                      << std::endl;
        }
    }
    catch (const irsmimo::config_error &err)
    {
        std::cerr << "config error: " << err.what() << std::endl;
        return 2;
    }
    catch (const std::exception &err)
    {
        std::cerr << "error: " << err.what() << std::endl;
        return 1;
    }
    return 0;
}
