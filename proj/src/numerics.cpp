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

#include "irsmimo/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace irsmimo
{

namespace
{

constexpr double kEigenvalueFloor = -1e-10; // below this the input is not PSD

double max_abs_entry(const arma::cx_mat &a)
{
    return a.is_empty() ? 0.0 : arma::abs(a).max();
}

} // namespace

void require_finite(const arma::cx_mat &a, const char *what)
{
    if (!a.is_finite())
        throw std::invalid_argument(std::string(what) + " contains NaN or Inf entries");
}

SvdFactorization svd_full(const arma::cx_mat &a)
{
    require_finite(a, "svd_full input");
    if (a.n_rows == 0 || a.n_cols == 0)
    {
        SvdFactorization f;
        f.left = arma::cx_mat(a.n_rows, a.n_rows, arma::fill::eye);
        f.right = arma::cx_mat(a.n_cols, a.n_cols, arma::fill::eye);
        f.singular_values = arma::vec();
        return f;
    }

    SvdFactorization f;
    if (!arma::svd(f.left, f.singular_values, f.right, a, "std"))
        throw std::runtime_error("svd_full: LAPACK SVD failed to converge");
    return f;
}

QrFactorization qr_thin(const arma::cx_mat &a)
{
    require_finite(a, "qr_thin input");
    QrFactorization f;
    if (a.n_cols == 0)
    {
        f.q = arma::cx_mat(a.n_rows, 0);
        f.r = arma::cx_mat(0, 0);
        return f;
    }
    if (!arma::qr_econ(f.q, f.r, a))
        throw std::runtime_error("qr_thin: LAPACK QR failed");
    return f;
}

arma::cx_mat hermitian_sqrt(const arma::cx_mat &c)
{
    require_finite(c, "hermitian_sqrt input");
    if (c.n_rows != c.n_cols)
        throw std::invalid_argument("hermitian_sqrt: input must be square");

    const double scale = std::max(1.0, max_abs_entry(c));
    const double herm_dev = max_abs_entry(c - c.t());
    if (herm_dev > 1e-12 * scale)
        throw std::invalid_argument("hermitian_sqrt: input is not Hermitian within 1e-12");

    const arma::cx_mat sym = 0.5 * (c + c.t());
    arma::vec eigenvalues;
    arma::cx_mat eigenvectors;
    if (!arma::eig_sym(eigenvalues, eigenvectors, sym, "std"))
        throw std::runtime_error("hermitian_sqrt: eigendecomposition failed");

    const double floor = kEigenvalueFloor * std::max(1.0, eigenvalues.max());
    arma::vec root_values(eigenvalues.n_elem);
    for (arma::uword i = 0; i < eigenvalues.n_elem; ++i)
    {
        if (eigenvalues(i) < floor)
            throw std::invalid_argument("hermitian_sqrt: input is not positive semidefinite");
        root_values(i) = eigenvalues(i) > 0.0 ? std::sqrt(eigenvalues(i)) : 0.0;
    }

    arma::cx_mat s = eigenvectors * arma::diagmat(root_values) * eigenvectors.t();
    return 0.5 * (s + s.t());
}

double default_rank_tolerance(const arma::vec &singular_values,
                              arma::uword n_rows, arma::uword n_cols)
{
    if (singular_values.is_empty())
        return 0.0;
    const double sigma_max = singular_values(0);
    const double dim = static_cast<double>(std::max(n_rows, n_cols));
    return dim * std::numeric_limits<double>::epsilon() * sigma_max;
}

arma::uword numerical_rank(const arma::vec &singular_values, double tolerance)
{
    arma::uword rank = 0;
    for (arma::uword i = 0; i < singular_values.n_elem; ++i)
    {
        if (singular_values(i) < 0.0)
            throw std::invalid_argument("numerical_rank: singular values must be nonnegative");
        if (i > 0 && singular_values(i) > singular_values(i - 1))
            throw std::invalid_argument("numerical_rank: singular values must be descending");
        if (singular_values(i) > tolerance)
            ++rank;
    }
    return rank;
}

arma::uword numerical_rank(const arma::vec &singular_values,
                           arma::uword n_rows, arma::uword n_cols)
{
    return numerical_rank(singular_values,
                          default_rank_tolerance(singular_values, n_rows, n_cols));
}

arma::cx_mat null_space_basis(const arma::cx_mat &h)
{
    require_finite(h, "null_space_basis input");
    if (h.n_rows >= h.n_cols)
        throw std::invalid_argument("null_space_basis: input must have rows < cols");

    if (h.n_rows == 0)
        return arma::cx_mat(h.n_cols, h.n_cols, arma::fill::eye);

    const SvdFactorization f = svd_full(h);
    const arma::uword rank = numerical_rank(f.singular_values, h.n_rows, h.n_cols);
    return f.right.cols(rank, h.n_cols - 1);
}

// --- RngStream --------------------------------------------------------
//
// xoshiro256++ over a splitmix64-expanded (seed, stream_id) state. Keeps the
// draw sequence identical across platforms, which std::normal_distribution
// does not guarantee.

namespace
{

std::uint64_t splitmix64(std::uint64_t &state)
{
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl64(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), cached_normal_(0.0), has_cached_normal_(false)
{
    std::uint64_t mix = seed ^ (0x6A09E667F3BCC909ULL + stream_id * 0x9E3779B97F4A7C15ULL);
    for (auto &word : state_)
        word = splitmix64(mix);
    // xoshiro must not start from the all-zero state
    if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 && state_[3] == 0)
        state_[0] = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t RngStream::next_u64()
{
    const std::uint64_t result = rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl64(state_[3], 45);
    return result;
}

double RngStream::uniform()
{
    // 53-bit mantissa, shifted into (0, 1]
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal()
{
    if (has_cached_normal_)
    {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
}

std::complex<double> RngStream::normal_complex(double variance_per_entry)
{
    const double sd = std::sqrt(0.5 * variance_per_entry);
    const double re = normal();
    const double im = normal();
    return {sd * re, sd * im};
}

std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts)
{
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    for (std::uint64_t part : parts)
    {
        std::uint64_t mix = h ^ (part + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
        h = splitmix64(mix);
    }
    return h;
}

arma::cx_mat sample_complex_gaussian(arma::uword rows, arma::uword cols,
                                     double variance, RngStream &rng)
{
    if (variance < 0.0)
        throw std::invalid_argument("sample_complex_gaussian: variance must be nonnegative");

    arma::cx_mat a(rows, cols, arma::fill::zeros);
    if (variance == 0.0)
        return a;

    for (arma::uword i = 0; i < rows; ++i)
        for (arma::uword j = 0; j < cols; ++j)
            a(i, j) = rng.normal_complex(variance);
    return a;
}

} // namespace irsmimo
