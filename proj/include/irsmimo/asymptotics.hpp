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

#ifndef IRSMIMO_ASYMPTOTICS_HPP
#define IRSMIMO_ASYMPTOTICS_HPP

#include "irsmimo/channel.hpp"
#include "irsmimo/numerics.hpp"

namespace irsmimo
{

enum class AsymptoticRegime
{
    mrc_no_irs,
    mrc_irs,
    zf_subopt_irs
};

// Closed-form large-M SINRs for one regime.
struct AsymptoticReport
{
    arma::vec gamma_bar;
    AsymptoticRegime regime = AsymptoticRegime::mrc_no_irs;
    ReflectionConfig phi_used; // empty when the regime ignores phi
};

// Per-user rates after discounting the training overhead.
struct RateReport
{
    arma::vec rates;
    arma::uword tau = 0;
    double fraction = 0.0; // (T - tau) / T
};

// Closed-form SINRs of every user for one regime. mrc_irs evaluates the
// supplied reflection coefficients (all-ones when phi is empty); the other
// regimes ignore phi.
AsymptoticReport asymptotic_report(AsymptoticRegime regime, const arma::cx_mat &t_all,
                                   const arma::cx_mat &c_i, const arma::vec &beta_bu,
                                   double beta_bi, double e, double sigma2,
                                   const ReflectionConfig &phi = {});

// Large-M MRC SINR without IRS: (E / sigma2) * beta_bu_k.
double mrc_sinr_no_irs(double e, double sigma2, double beta_bu_k);

// Overhead-discounted rate ((T - tau) / T) * log2(1 + gamma).
double rate_with_overhead(double gamma, arma::uword t_block, arma::uword tau);
RateReport rates_with_overhead(const arma::vec &gammas, arma::uword t_block, arma::uword tau);

// Elementwise phi .* t_k.
arma::cx_vec eta(const ReflectionConfig &phi, const arma::cx_vec &t_k);

// Large-M MRC SINR with IRS for arbitrary reflection coefficients.
double mrc_irs_asymptotic_sinr(const ReflectionConfig &phi, const arma::cx_mat &t_all,
                               const arma::cx_mat &c_i, const arma::vec &beta_bu,
                               double beta_bi, double e, double sigma2, arma::uword k);

// Large-M SINR of the structured suboptimal ZF beamformer in the all-ones
// reflection regime: the no-IRS MRC limit plus the projected IRS gain term.
double zf_subopt_asymptotic_sinr(const arma::cx_mat &t_all, const arma::cx_mat &c_i,
                                 double beta_bu_k, double beta_bi, double e,
                                 double sigma2, arma::uword k);

// Search budget for the reflection-coefficient optimizer. The candidate grid
// per element is {0} plus magnitude_levels magnitudes times phase_levels
// equispaced phases; random starts draw from the same grid.
struct PhiSearchBudget
{
    arma::uword random_starts = 64;
    arma::uword coord_passes = 2;
    arma::uword magnitude_levels = 4;
    arma::uword phase_levels = 8;
    std::uint64_t seed = 1;
};

struct PhiSearchResult
{
    ReflectionConfig phi;
    double objective = 0.0; // sum over users of log2(1 + gamma_bar_k(phi))
};

// Maximizes the large-M MRC sum rate over |phi_n| <= 1 via multi-start random
// search plus coordinate-wise grid refinement. Deterministic given the budget
// seed; the all-ones and all-zero baselines are always evaluated first, so the
// result never falls below either.
PhiSearchResult optimize_phi_mrc(const arma::cx_mat &t_all, const arma::cx_mat &c_i,
                                 const arma::vec &beta_bu, double beta_bi, double e,
                                 double sigma2, const PhiSearchBudget &budget);

// Grid of candidate values one phi element ranges over during refinement.
arma::cx_vec phi_candidate_grid(const PhiSearchBudget &budget);

} // namespace irsmimo

#endif
