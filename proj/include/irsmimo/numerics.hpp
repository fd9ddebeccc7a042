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

#ifndef IRSMIMO_NUMERICS_HPP
#define IRSMIMO_NUMERICS_HPP

#ifndef ARMA_DONT_USE_WRAPPER
#define ARMA_DONT_USE_WRAPPER
#endif
#include <armadillo>

#include <complex>
#include <cstdint>
#include <initializer_list>

namespace irsmimo
{

// Full SVD A = left * diag(singular_values) * right^H, with left and right
// square unitary and singular values sorted descending.
struct SvdFactorization
{
    arma::cx_mat left;
    arma::vec singular_values;
    arma::cx_mat right;
};

// Thin QR: q has orthonormal columns, r is square upper-triangular.
struct QrFactorization
{
    arma::cx_mat q;
    arma::cx_mat r;
};

SvdFactorization svd_full(const arma::cx_mat &a);
QrFactorization qr_thin(const arma::cx_mat &a);

// Principal PSD square root of a Hermitian positive semidefinite matrix.
// Eigenvalues in [-1e-10, 0) are clamped to zero; anything below throws.
arma::cx_mat hermitian_sqrt(const arma::cx_mat &c);

// Default rank threshold: max(rows, cols) * eps * sigma_max.
double default_rank_tolerance(const arma::vec &singular_values,
                              arma::uword n_rows, arma::uword n_cols);

// Count of singular values strictly above the tolerance. Values must be
// nonnegative and sorted descending. Empty input has rank 0.
arma::uword numerical_rank(const arma::vec &singular_values, double tolerance);
arma::uword numerical_rank(const arma::vec &singular_values,
                           arma::uword n_rows, arma::uword n_cols);

// Orthonormal basis of the right null space of a wide matrix (rows < cols).
// Returns cols - rank(h) columns with h * basis = 0.
arma::cx_mat null_space_basis(const arma::cx_mat &h);

// Deterministic counter-seeded random stream. Identical (seed, stream_id)
// pairs reproduce identical draws independent of construction order, so
// Monte Carlo tasks can run in any order or in parallel. Instances are not
// shareable between threads; give each task its own stream.
class RngStream
{
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    // Uniform on (0, 1].
    double uniform();

    // Standard normal via Box-Muller; draws are consumed in pairs.
    double normal();

    std::complex<double> normal_complex(double variance_per_entry);

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t state_[4];
    double cached_normal_;
    bool has_cached_normal_;
};

// Stable 64-bit key from a list of parts, for deriving substream ids.
std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts);

// rows x cols matrix of i.i.d. circularly-symmetric complex Gaussian entries
// with the given per-entry variance (real and imaginary parts carry half
// each). Entries are drawn in row-major order.
arma::cx_mat sample_complex_gaussian(arma::uword rows, arma::uword cols,
                                     double variance, RngStream &rng);

// Shared validation helper: rejects NaN/Inf entries.
void require_finite(const arma::cx_mat &a, const char *what);

} // namespace irsmimo

#endif
