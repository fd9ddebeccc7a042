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

#include "irsmimo/beamforming.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace irsmimo
{

namespace
{

constexpr double kDegenerateRelNorm = 1e-10;

// Rows h_hat_j^H for all j != k.
arma::cx_mat stack_other_channels(const arma::cx_mat &effective_channels, arma::uword k)
{
    const arma::uword m = effective_channels.n_rows;
    const arma::uword n_users = effective_channels.n_cols;
    arma::cx_mat stacked(n_users - 1, m);
    arma::uword row = 0;
    for (arma::uword j = 0; j < n_users; ++j)
    {
        if (j == k)
            continue;
        stacked.row(row++) = effective_channels.col(j).t();
    }
    return stacked;
}

} // namespace

BeamformerSet mrc(const arma::cx_mat &effective_channels)
{
    require_finite(effective_channels, "mrc effective channels");
    BeamformerSet set;
    set.w = effective_channels;
    set.strategy = Strategy::mrc;
    set.degenerate.assign(effective_channels.n_cols, false);
    for (arma::uword k = 0; k < effective_channels.n_cols; ++k)
        if (arma::norm(effective_channels.col(k)) == 0.0)
            set.degenerate[k] = true;
    return set;
}

OptimalZfResult optimal_zf(const arma::cx_mat &effective_channels, arma::uword k)
{
    require_finite(effective_channels, "optimal_zf effective channels");
    const arma::uword m = effective_channels.n_rows;
    const arma::uword n_users = effective_channels.n_cols;
    if (k >= n_users)
        throw std::invalid_argument("optimal_zf: user index out of range");
    if (m < n_users)
        throw std::invalid_argument("optimal_zf: needs M >= K");

    OptimalZfResult result;
    const arma::cx_mat others = stack_other_channels(effective_channels, k);
    result.null_basis = null_space_basis(others);
    const arma::cx_vec own = effective_channels.col(k);
    result.w = result.null_basis * (result.null_basis.t() * own);

    if (arma::norm(result.w) <= kDegenerateRelNorm * arma::norm(own))
    {
        result.w.zeros();
        result.degenerate = true;
    }
    return result;
}

BeamformerSet optimal_zf_set(const arma::cx_mat &effective_channels)
{
    require_finite(effective_channels, "optimal_zf_set effective channels");
    const arma::uword m = effective_channels.n_rows;
    const arma::uword n_users = effective_channels.n_cols;
    if (m < n_users)
        throw std::invalid_argument("optimal_zf_set: needs M >= K");

    BeamformerSet set;
    set.strategy = Strategy::zf_optimal;
    set.w = arma::cx_mat(m, n_users);
    set.degenerate.assign(n_users, false);
    for (arma::uword k = 0; k < n_users; ++k)
    {
        // same projector as optimal_zf, applied as own - U (U^H own) with U a
        // thin row-space basis; skips the M x (M-K+1) null basis at large M
        const arma::cx_vec own = effective_channels.col(k);
        arma::cx_vec w = own;
        if (n_users > 1)
        {
            const arma::cx_mat stacked_h = stack_other_channels(effective_channels, k).t();
            arma::cx_mat u;
            arma::vec s;
            arma::cx_mat v;
            if (!arma::svd_econ(u, s, v, stacked_h, "left"))
                throw std::runtime_error("optimal_zf_set: thin SVD failed");
            const arma::uword rank = numerical_rank(s, n_users - 1, m);
            if (rank > 0)
            {
                const arma::cx_mat row_basis = u.cols(0, rank - 1);
                w = own - row_basis * (row_basis.t() * own);
            }
        }
        if (arma::norm(w) <= kDegenerateRelNorm * arma::norm(own))
        {
            w.zeros();
            set.degenerate[k] = true;
        }
        set.w.col(k) = w;
    }
    return set;
}

SuboptimalZfResult suboptimal_zf(const ChannelRealization &real, arma::uword k,
                                 const arma::cx_mat &c_i_sqrt)
{
    const arma::uword m = real.h.n_rows;
    const arma::uword n = real.r_mat.n_cols;
    const arma::uword n_users = real.h.n_cols;
    if (k >= n_users)
        throw std::invalid_argument("suboptimal_zf: user index out of range");
    if (n <= n_users)
        throw std::invalid_argument("suboptimal_zf: needs N > K");
    if (c_i_sqrt.n_rows != n || c_i_sqrt.n_cols != n)
        throw std::invalid_argument("suboptimal_zf: c_i_sqrt must be N x N");

    const double m_scale = static_cast<double>(m);
    const arma::cx_mat hhat = effective_channels(real, ones_reflection(n));
    const arma::cx_mat g_k = cascaded_channels(real, k);

    SuboptimalZfResult result;
    ZfAuxiliary &aux = result.aux;

    // interference system: rows h_hat_j^H g_{k,n}, rhs -h_hat_j^H h_k
    const arma::cx_mat others = stack_other_channels(hhat, k);
    aux.a_mat = others * g_k;
    aux.b_vec = -(others * real.h.col(k));

    aux.svd = svd_full(aux.a_mat / m_scale);
    aux.lambda_rank = numerical_rank(aux.svd.singular_values, n_users - 1, n);

    arma::cx_vec theta_hat(n, arma::fill::zeros);
    if (aux.lambda_rank > 0)
    {
        const arma::cx_vec b_hat = aux.svd.left.t() * (aux.b_vec / m_scale);
        theta_hat.head(aux.lambda_rank) =
            b_hat.head(aux.lambda_rank) / aux.svd.singular_values.head(aux.lambda_rank);
    }

    // free-block construction: project the own IRS link via QR of D_k
    const arma::cx_mat v2 = aux.svd.right.cols(aux.lambda_rank, n - 1);
    aux.d_mat = c_i_sqrt * arma::diagmat(real.t.col(k)) * v2;
    aux.qr = qr_thin(aux.d_mat);

    const double r_floor = 1e3 * std::numeric_limits<double>::epsilon() *
                           arma::abs(aux.qr.r.diag()).max();
    if (arma::abs(aux.qr.r.diag()).min() <= r_floor)
        throw std::runtime_error("suboptimal_zf: D_k is rank deficient for user " +
                                 std::to_string(k));
    theta_hat.tail(n - aux.lambda_rank) =
        arma::solve(arma::trimatu(aux.qr.r), aux.qr.q.t() * (c_i_sqrt * real.t.col(k)));

    aux.theta = aux.svd.right * theta_hat;
    result.w = real.h.col(k) + g_k * aux.theta;
    return result;
}

BeamformerSet suboptimal_zf_set(const ChannelRealization &real, const arma::cx_mat &c_i_sqrt)
{
    BeamformerSet set;
    set.strategy = Strategy::zf_suboptimal;
    set.w = arma::cx_mat(real.h.n_rows, real.h.n_cols);
    set.degenerate.assign(real.h.n_cols, false);
    set.zf_aux.resize(real.h.n_cols);
    for (arma::uword k = 0; k < real.h.n_cols; ++k)
    {
        SuboptimalZfResult r = suboptimal_zf(real, k, c_i_sqrt);
        set.w.col(k) = r.w;
        set.zf_aux[k] = std::move(r.aux);
    }
    return set;
}

double sinr(const BeamformerSet &w, const arma::cx_mat &effective_channels,
            arma::uword k, double p, double sigma2)
{
    if (sigma2 <= 0.0)
        throw std::invalid_argument("sinr: sigma2 must be positive");
    if (p <= 0.0)
        throw std::invalid_argument("sinr: transmit power must be positive");
    if (k >= effective_channels.n_cols || w.w.n_cols != effective_channels.n_cols)
        throw std::invalid_argument("sinr: user index or beamformer dimensions invalid");

    const arma::cx_vec w_k = w.w.col(k);
    const double w_norm2 = std::real(arma::cdot(w_k, w_k));
    if (w_norm2 == 0.0)
        return 0.0;

    const double signal = std::norm(arma::cdot(w_k, effective_channels.col(k)));
    double interference = 0.0;
    for (arma::uword j = 0; j < effective_channels.n_cols; ++j)
    {
        if (j == k)
            continue;
        interference += std::norm(arma::cdot(w_k, effective_channels.col(j)));
    }
    return p * signal / (p * interference + sigma2 * w_norm2);
}

double interference_leakage(const arma::cx_vec &w_k,
                            const arma::cx_mat &effective_channels, arma::uword k)
{
    if (k >= effective_channels.n_cols)
        throw std::invalid_argument("interference_leakage: user index out of range");
    const double w_norm = arma::norm(w_k);
    if (w_norm == 0.0)
        return 0.0;

    double worst = 0.0;
    for (arma::uword j = 0; j < effective_channels.n_cols; ++j)
    {
        if (j == k)
            continue;
        const double h_norm = arma::norm(effective_channels.col(j));
        if (h_norm == 0.0)
            continue;
        worst = std::max(worst,
                         std::abs(arma::cdot(w_k, effective_channels.col(j))) / (w_norm * h_norm));
    }
    return worst;
}

} // namespace irsmimo
