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

#ifndef IRSMIMO_BEAMFORMING_HPP
#define IRSMIMO_BEAMFORMING_HPP

#include "irsmimo/channel.hpp"
#include "irsmimo/numerics.hpp"

#include <vector>

namespace irsmimo
{

enum class Strategy
{
    mrc,
    zf_optimal,
    zf_suboptimal
};

// Intermediates of the structured suboptimal ZF construction for one user.
struct ZfAuxiliary
{
    arma::cx_mat a_mat;      // (K-1) x N interference system matrix
    arma::cx_vec b_vec;      // (K-1) right-hand side
    arma::cx_vec theta;      // length-N reflection-domain weights
    arma::uword lambda_rank; // numerical rank of a_mat
    SvdFactorization svd;    // SVD of a_mat / M
    arma::cx_mat d_mat;      // N x (N - lambda_rank)
    QrFactorization qr;      // thin QR of d_mat
};

// Per-user receive vectors plus strategy tag. zf_aux is populated only by the
// suboptimal ZF builder; degenerate marks users whose beamformer collapsed to
// zero (their SINR is reported as 0).
struct BeamformerSet
{
    arma::cx_mat w; // M x K, columns w_k
    Strategy strategy = Strategy::mrc;
    std::vector<ZfAuxiliary> zf_aux;
    std::vector<bool> degenerate;
};

// MRC: w_k equals the effective channel of user k.
BeamformerSet mrc(const arma::cx_mat &effective_channels);

struct OptimalZfResult
{
    arma::cx_vec w;
    arma::cx_mat null_basis; // orthonormal basis of null(H_hat_minus_k)
    bool degenerate = false;
};

// Projection of the own effective channel onto the null space of all other
// users' effective channels. A channel inside that row space yields a zero
// vector flagged degenerate instead of an error.
OptimalZfResult optimal_zf(const arma::cx_mat &effective_channels, arma::uword k);
BeamformerSet optimal_zf_set(const arma::cx_mat &effective_channels);

struct SuboptimalZfResult
{
    arma::cx_vec w;
    ZfAuxiliary aux;
};

// Structured suboptimal ZF for the all-ones reflection regime:
// w_k = h_k + sum_n theta_{k,n} g_{k,n} with theta solving the interference
// nulling system through the SVD/QR construction. c_i_sqrt is the Hermitian
// square root of the IRS transmit correlation matrix.
SuboptimalZfResult suboptimal_zf(const ChannelRealization &real, arma::uword k,
                                 const arma::cx_mat &c_i_sqrt);
BeamformerSet suboptimal_zf_set(const ChannelRealization &real,
                                const arma::cx_mat &c_i_sqrt);

// Instantaneous SINR of user k under beamformer set w. A degenerate (zero)
// beamformer returns 0.
double sinr(const BeamformerSet &w, const arma::cx_mat &effective_channels,
            arma::uword k, double p, double sigma2);

// max_{j != k} |w_k^H h_hat_j| / (||w_k|| ||h_hat_j||); 0 when K = 1.
double interference_leakage(const arma::cx_vec &w_k,
                            const arma::cx_mat &effective_channels, arma::uword k);

} // namespace irsmimo

#endif
