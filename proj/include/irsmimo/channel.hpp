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

#ifndef IRSMIMO_CHANNEL_HPP
#define IRSMIMO_CHANNEL_HPP

#include "irsmimo/numerics.hpp"

#include <complex>
#include <vector>

namespace irsmimo
{

// Scalar dimensions and power/noise/coherence constants of one scenario.
// Powers are linear milliwatts; conversion helpers below accept dBm.
struct SystemParams
{
    arma::uword m = 0;            // BS antennas
    arma::uword n = 0;            // IRS elements
    arma::uword k = 0;            // single-antenna users
    arma::uword t_block = 0;      // fading block length in symbols
    double e_fixed_mw = 0.0;      // fixed total power E; per-user power is p = E/M
    double sigma2_mw = 0.0;       // noise power over the full bandwidth
    double bandwidth_hz = 0.0;
    double noise_psd_dbm_hz = 0.0;

    double transmit_power() const { return e_fixed_mw / static_cast<double>(m); }
};

double dbm_to_mw(double dbm);
double db_to_linear(double db);
double noise_power_mw(double noise_psd_dbm_hz, double bandwidth_hz);

SystemParams make_system_params(arma::uword m, arma::uword n, arma::uword k,
                                arma::uword t_block, double e_dbm,
                                double bandwidth_hz, double noise_psd_dbm_hz);

// Throws std::invalid_argument unless N > K >= 1, M >= K, T > N + 2K - 1,
// p > 0 and sigma2 matches the stated PSD x bandwidth.
void validate_system_params(const SystemParams &params);

// Linear average power gains per link family.
struct PathLossSet
{
    arma::vec beta_bu; // per-user BS-user gain
    double beta_bi = 0.0; // IRS-BS gain, shared by all elements
    arma::vec beta_iu; // per-user IRS-user gain
};

PathLossSet uniform_path_loss(arma::uword k, double beta_bu_db, double beta_bi_db,
                              double beta_iu_db);

// Rejects non-positive gains or per-user vectors of the wrong length.
void validate_path_loss(const PathLossSet &pl, arma::uword k);

// Receive/transmit correlation matrices of all link families. Each matrix is
// Hermitian positive definite with unit diagonal.
struct CorrelationSet
{
    std::vector<arma::cx_mat> c_b_user; // per-user MxM BS receive correlation
    arma::cx_mat c_b;                   // MxM BS receive correlation for R
    arma::cx_mat c_i;                   // NxN IRS transmit correlation for R
    std::vector<arma::cx_mat> c_i_user; // per-user NxN IRS receive correlation
};

void validate_correlation_set(const CorrelationSet &corr, const SystemParams &params);

// Hermitian square roots of a CorrelationSet, computed once and reused across
// trials. An empty matrix marks an identity factor and skips the multiply.
struct CorrelationSqrts
{
    std::vector<arma::cx_mat> c_b_user_sqrt;
    arma::cx_mat c_b_sqrt;
    arma::cx_mat c_i_sqrt;
    std::vector<arma::cx_mat> c_i_user_sqrt;
};

CorrelationSqrts make_correlation_sqrts(const CorrelationSet &corr);

// Exponential correlation matrix: [i,j] = rho^(j-i) for j >= i, conjugate
// below the diagonal. Requires |rho| < 1; rho = 0 gives the identity.
arma::cx_mat exp_correlation(arma::uword dim, std::complex<double> rho);

// One fading-block draw of every link.
struct ChannelRealization
{
    arma::cx_mat h;     // M x K direct channels, columns h_k
    arma::cx_mat r_mat; // M x N IRS-to-BS matrix R
    arma::cx_mat t;     // N x K user-to-IRS channels, columns t_k
};

// IRS reflection coefficients, |phi_n| <= 1.
struct ReflectionConfig
{
    arma::cx_vec phi;
};

ReflectionConfig ones_reflection(arma::uword n);
ReflectionConfig zero_reflection(arma::uword n);
void validate_reflection(const ReflectionConfig &refl);

// Individual link samplers, exposed so studies can redraw some links while
// holding others fixed (e.g. fixed t across an M-sweep).
arma::cx_mat sample_direct_channels(const SystemParams &params, const PathLossSet &pl,
                                    const CorrelationSqrts &corr, RngStream &rng);
arma::cx_mat sample_irs_bs_matrix(const SystemParams &params, const PathLossSet &pl,
                                  const CorrelationSqrts &corr, RngStream &rng);
arma::cx_mat sample_user_irs_channels(const SystemParams &params, const PathLossSet &pl,
                                      const CorrelationSqrts &corr, RngStream &rng);

// Draws all links of one fading block. Each link family uses its own
// substream derived from rng, so the draw is independent of sampling order.
ChannelRealization sample_realization(const SystemParams &params, const PathLossSet &pl,
                                      const CorrelationSqrts &corr, RngStream &rng);
ChannelRealization sample_realization(const SystemParams &params, const PathLossSet &pl,
                                      const CorrelationSet &corr, RngStream &rng);

// M x N matrix of cascaded channels for user k; column n is t_{k,n} * r_n.
arma::cx_mat cascaded_channels(const ChannelRealization &real, arma::uword k);

// Effective channel h_k + sum_n phi_n g_{k,n} for user k (0-based).
arma::cx_vec effective_channel(const ChannelRealization &real,
                               const ReflectionConfig &refl, arma::uword k);

// All K effective channels as an M x K matrix.
arma::cx_mat effective_channels(const ChannelRealization &real,
                                const ReflectionConfig &refl);

} // namespace irsmimo

#endif
