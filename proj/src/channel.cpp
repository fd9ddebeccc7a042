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

#include "irsmimo/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace irsmimo
{

namespace
{

constexpr double kPhiMagnitudeSlack = 1e-12;

// Substream tags so each link family draws from its own stream.
enum : std::uint64_t
{
    kStreamDirect = 1,
    kStreamIrsBs = 2,
    kStreamUserIrs = 3
};

RngStream substream(const RngStream &rng, std::uint64_t tag)
{
    return RngStream(rng.seed(), stream_key({rng.stream_id(), tag}));
}

bool is_identity_factor(const arma::cx_mat &factor)
{
    return factor.is_empty();
}

arma::cx_mat correlate_left(const arma::cx_mat &factor, const arma::cx_mat &iid)
{
    return is_identity_factor(factor) ? iid : arma::cx_mat(factor * iid);
}

void check_unit_diag_hermitian(const arma::cx_mat &c, arma::uword dim, const char *name)
{
    if (c.n_rows != dim || c.n_cols != dim)
        throw std::invalid_argument(std::string(name) + ": wrong dimensions");
    if (arma::abs(c - c.t()).max() > 1e-12 * std::max(1.0, arma::abs(c).max()))
        throw std::invalid_argument(std::string(name) + ": not Hermitian");
    for (arma::uword i = 0; i < dim; ++i)
        if (std::abs(c(i, i) - std::complex<double>(1.0, 0.0)) > 1e-12)
            throw std::invalid_argument(std::string(name) + ": diagonal must be one");
}

} // namespace

double dbm_to_mw(double dbm)
{
    return std::pow(10.0, dbm / 10.0);
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double noise_power_mw(double noise_psd_dbm_hz, double bandwidth_hz)
{
    return dbm_to_mw(noise_psd_dbm_hz) * bandwidth_hz;
}

SystemParams make_system_params(arma::uword m, arma::uword n, arma::uword k,
                                arma::uword t_block, double e_dbm,
                                double bandwidth_hz, double noise_psd_dbm_hz)
{
    SystemParams params;
    params.m = m;
    params.n = n;
    params.k = k;
    params.t_block = t_block;
    params.e_fixed_mw = dbm_to_mw(e_dbm);
    params.bandwidth_hz = bandwidth_hz;
    params.noise_psd_dbm_hz = noise_psd_dbm_hz;
    params.sigma2_mw = noise_power_mw(noise_psd_dbm_hz, bandwidth_hz);
    validate_system_params(params);
    return params;
}

void validate_system_params(const SystemParams &params)
{
    if (params.k < 1)
        throw std::invalid_argument("SystemParams: K must be at least 1");
    if (params.n <= params.k)
        throw std::invalid_argument("SystemParams: N must exceed K");
    if (params.m < params.k)
        throw std::invalid_argument("SystemParams: M must be at least K");
    if (params.t_block <= params.n + 2 * params.k - 1)
        throw std::invalid_argument("SystemParams: T must exceed N + 2K - 1");
    if (!(params.e_fixed_mw > 0.0) || !(params.transmit_power() > 0.0))
        throw std::invalid_argument("SystemParams: transmit power must be positive");
    if (!(params.sigma2_mw > 0.0))
        throw std::invalid_argument("SystemParams: noise power must be positive");
    const double expected_sigma2 = noise_power_mw(params.noise_psd_dbm_hz, params.bandwidth_hz);
    if (std::abs(params.sigma2_mw - expected_sigma2) > 1e-9 * expected_sigma2)
        throw std::invalid_argument("SystemParams: sigma2 inconsistent with PSD x bandwidth");
}

PathLossSet uniform_path_loss(arma::uword k, double beta_bu_db, double beta_bi_db,
                              double beta_iu_db)
{
    PathLossSet pl;
    pl.beta_bu = arma::vec(k, arma::fill::value(db_to_linear(beta_bu_db)));
    pl.beta_bi = db_to_linear(beta_bi_db);
    pl.beta_iu = arma::vec(k, arma::fill::value(db_to_linear(beta_iu_db)));
    return pl;
}

void validate_path_loss(const PathLossSet &pl, arma::uword k)
{
    if (pl.beta_bu.n_elem != k || pl.beta_iu.n_elem != k)
        throw std::invalid_argument("PathLossSet: per-user vectors must have length K");
    if (pl.beta_bu.min() <= 0.0 || pl.beta_iu.min() <= 0.0 || pl.beta_bi <= 0.0)
        throw std::invalid_argument("PathLossSet: gains must be strictly positive");
}

void validate_correlation_set(const CorrelationSet &corr, const SystemParams &params)
{
    if (corr.c_b_user.size() != params.k || corr.c_i_user.size() != params.k)
        throw std::invalid_argument("CorrelationSet: need one matrix per user");
    for (const auto &c : corr.c_b_user)
        check_unit_diag_hermitian(c, params.m, "CorrelationSet c_b_user");
    check_unit_diag_hermitian(corr.c_b, params.m, "CorrelationSet c_b");
    check_unit_diag_hermitian(corr.c_i, params.n, "CorrelationSet c_i");
    for (const auto &c : corr.c_i_user)
        check_unit_diag_hermitian(c, params.n, "CorrelationSet c_i_user");
}

namespace
{

// Identity factors are kept empty so samplers can skip the O(dim^2) multiply.
arma::cx_mat sqrt_or_identity(const arma::cx_mat &c)
{
    const arma::cx_mat eye = arma::cx_mat(c.n_rows, c.n_cols, arma::fill::eye);
    if (arma::abs(c - eye).max() < 1e-15)
        return arma::cx_mat();
    return hermitian_sqrt(c);
}

} // namespace

CorrelationSqrts make_correlation_sqrts(const CorrelationSet &corr)
{
    CorrelationSqrts sqrts;
    sqrts.c_b_user_sqrt.reserve(corr.c_b_user.size());
    for (const auto &c : corr.c_b_user)
        sqrts.c_b_user_sqrt.push_back(sqrt_or_identity(c));
    sqrts.c_b_sqrt = sqrt_or_identity(corr.c_b);
    sqrts.c_i_sqrt = sqrt_or_identity(corr.c_i);
    sqrts.c_i_user_sqrt.reserve(corr.c_i_user.size());
    for (const auto &c : corr.c_i_user)
        sqrts.c_i_user_sqrt.push_back(sqrt_or_identity(c));
    return sqrts;
}

arma::cx_mat exp_correlation(arma::uword dim, std::complex<double> rho)
{
    if (std::abs(rho) >= 1.0)
        throw std::invalid_argument("exp_correlation: |rho| must be below 1");

    arma::cx_mat c(dim, dim, arma::fill::eye);
    if (std::abs(rho) == 0.0)
        return c;

    // first row rho^0 .. rho^(dim-1), then Toeplitz fill
    arma::cx_vec powers(dim);
    powers(0) = 1.0;
    for (arma::uword d = 1; d < dim; ++d)
        powers(d) = powers(d - 1) * rho;
    for (arma::uword i = 0; i < dim; ++i)
        for (arma::uword j = i + 1; j < dim; ++j)
        {
            c(i, j) = powers(j - i);
            c(j, i) = std::conj(powers(j - i));
        }
    return c;
}

ReflectionConfig ones_reflection(arma::uword n)
{
    return ReflectionConfig{arma::cx_vec(n, arma::fill::ones)};
}

ReflectionConfig zero_reflection(arma::uword n)
{
    return ReflectionConfig{arma::cx_vec(n, arma::fill::zeros)};
}

void validate_reflection(const ReflectionConfig &refl)
{
    if (!refl.phi.is_finite())
        throw std::invalid_argument("ReflectionConfig: phi must be finite");
    if (!refl.phi.is_empty() && arma::abs(refl.phi).max() > 1.0 + kPhiMagnitudeSlack)
        throw std::invalid_argument("ReflectionConfig: |phi_n| must not exceed 1");
}

arma::cx_mat sample_direct_channels(const SystemParams &params, const PathLossSet &pl,
                                    const CorrelationSqrts &corr, RngStream &rng)
{
    arma::cx_mat h(params.m, params.k);
    for (arma::uword k = 0; k < params.k; ++k)
    {
        arma::cx_mat iid = sample_complex_gaussian(params.m, 1, pl.beta_bu(k), rng);
        h.col(k) = correlate_left(corr.c_b_user_sqrt.at(k), iid);
    }
    return h;
}

arma::cx_mat sample_irs_bs_matrix(const SystemParams &params, const PathLossSet &pl,
                                  const CorrelationSqrts &corr, RngStream &rng)
{
    // Per-entry variance beta_bi keeps E[R^H R]/M = beta_bi * C^I given the
    // unit-diagonal BS correlation (trace M).
    arma::cx_mat iid = sample_complex_gaussian(params.m, params.n, pl.beta_bi, rng);
    arma::cx_mat r = correlate_left(corr.c_b_sqrt, iid);
    if (!corr.c_i_sqrt.is_empty())
        r = r * corr.c_i_sqrt;
    return r;
}

arma::cx_mat sample_user_irs_channels(const SystemParams &params, const PathLossSet &pl,
                                      const CorrelationSqrts &corr, RngStream &rng)
{
    arma::cx_mat t(params.n, params.k);
    for (arma::uword k = 0; k < params.k; ++k)
    {
        arma::cx_mat iid = sample_complex_gaussian(params.n, 1, pl.beta_iu(k), rng);
        t.col(k) = correlate_left(corr.c_i_user_sqrt.at(k), iid);
    }
    return t;
}

ChannelRealization sample_realization(const SystemParams &params, const PathLossSet &pl,
                                      const CorrelationSqrts &corr, RngStream &rng)
{
    if (pl.beta_bu.n_elem != params.k || pl.beta_iu.n_elem != params.k)
        throw std::invalid_argument("sample_realization: path loss vectors must have length K");
    if (pl.beta_bu.min() < 0.0 || pl.beta_iu.min() < 0.0 || pl.beta_bi < 0.0)
        throw std::invalid_argument("sample_realization: path loss gains must be nonnegative");
    if (corr.c_b_user_sqrt.size() != params.k || corr.c_i_user_sqrt.size() != params.k)
        throw std::invalid_argument("sample_realization: correlation factors must match K");

    ChannelRealization real;
    RngStream rng_h = substream(rng, kStreamDirect);
    RngStream rng_r = substream(rng, kStreamIrsBs);
    RngStream rng_t = substream(rng, kStreamUserIrs);
    real.h = sample_direct_channels(params, pl, corr, rng_h);
    real.r_mat = sample_irs_bs_matrix(params, pl, corr, rng_r);
    real.t = sample_user_irs_channels(params, pl, corr, rng_t);
    return real;
}

ChannelRealization sample_realization(const SystemParams &params, const PathLossSet &pl,
                                      const CorrelationSet &corr, RngStream &rng)
{
    validate_correlation_set(corr, params);
    return sample_realization(params, pl, make_correlation_sqrts(corr), rng);
}

arma::cx_mat cascaded_channels(const ChannelRealization &real, arma::uword k)
{
    if (k >= real.t.n_cols)
        throw std::invalid_argument("cascaded_channels: user index out of range");
    return real.r_mat * arma::diagmat(real.t.col(k));
}

arma::cx_vec effective_channel(const ChannelRealization &real,
                               const ReflectionConfig &refl, arma::uword k)
{
    if (k >= real.h.n_cols)
        throw std::invalid_argument("effective_channel: user index out of range");
    if (refl.phi.n_elem != real.r_mat.n_cols)
        throw std::invalid_argument("effective_channel: phi length must equal N");
    validate_reflection(refl);
    return real.h.col(k) + real.r_mat * (refl.phi % real.t.col(k));
}

arma::cx_mat effective_channels(const ChannelRealization &real, const ReflectionConfig &refl)
{
    if (refl.phi.n_elem != real.r_mat.n_cols)
        throw std::invalid_argument("effective_channels: phi length must equal N");
    validate_reflection(refl);
    // h + R diag(phi) t computed for all users at once
    return real.h + real.r_mat * (real.t.each_col() % refl.phi);
}

} // namespace irsmimo
