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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "irsmimo/channel.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace irsmimo;

namespace
{

CorrelationSet identity_correlation(const SystemParams &params)
{
    CorrelationSet corr;
    corr.c_b_user.assign(params.k, arma::cx_mat(params.m, params.m, arma::fill::eye));
    corr.c_b = arma::cx_mat(params.m, params.m, arma::fill::eye);
    corr.c_i = arma::cx_mat(params.n, params.n, arma::fill::eye);
    corr.c_i_user.assign(params.k, arma::cx_mat(params.n, params.n, arma::fill::eye));
    return corr;
}

PathLossSet flat_path_loss(arma::uword k, double beta_bu, double beta_bi, double beta_iu)
{
    PathLossSet pl;
    pl.beta_bu = arma::vec(k, arma::fill::value(beta_bu));
    pl.beta_bi = beta_bi;
    pl.beta_iu = arma::vec(k, arma::fill::value(beta_iu));
    return pl;
}

SystemParams small_params(arma::uword m, arma::uword n, arma::uword k)
{
    return make_system_params(m, n, k, 4 * (n + 2 * k), 13.0, 1e8, -169.0);
}

} // namespace

TEST_CASE("exp_correlation with rho 0 is the identity")
{
    const arma::cx_mat c = exp_correlation(3, 0.0);
    CHECK(arma::abs(c - arma::cx_mat(3, 3, arma::fill::eye)).max() == 0.0);
}

TEST_CASE("exp_correlation direct 2x2 construction")
{
    const arma::cx_mat c = exp_correlation(2, 0.5);
    CHECK(std::abs(c(0, 0) - std::complex<double>(1.0)) < 1e-15);
    CHECK(std::abs(c(0, 1) - std::complex<double>(0.5)) < 1e-15);
    CHECK(std::abs(c(1, 0) - std::complex<double>(0.5)) < 1e-15);
    CHECK(std::abs(c(1, 1) - std::complex<double>(1.0)) < 1e-15);
}

TEST_CASE("exp_correlation with complex rho is unit-diagonal positive definite")
{
    const arma::cx_mat c = exp_correlation(8, std::polar(0.5, 0.3));
    for (arma::uword i = 0; i < 8; ++i)
        CHECK(std::abs(c(i, i) - std::complex<double>(1.0)) <= 1e-14);

    arma::vec eigenvalues;
    REQUIRE(arma::eig_sym(eigenvalues, c));
    CHECK(eigenvalues.min() > 0.0);
    CHECK(arma::abs(c - c.t()).max() < 1e-15);
}

TEST_CASE("exp_correlation rejects |rho| >= 1")
{
    CHECK_THROWS_AS(exp_correlation(4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(exp_correlation(4, std::polar(1.2, 0.1)), std::invalid_argument);
}

TEST_CASE("sample_realization with zero path loss is all zero")
{
    const SystemParams params = small_params(8, 6, 2);
    const PathLossSet pl = flat_path_loss(2, 0.0, 0.0, 0.0);
    RngStream rng(1, 0);
    const ChannelRealization real =
        sample_realization(params, pl, identity_correlation(params), rng);
    CHECK(arma::abs(real.h).max() == 0.0);
    CHECK(arma::abs(real.r_mat).max() == 0.0);
    CHECK(arma::abs(real.t).max() == 0.0);
}

TEST_CASE("sample_realization is deterministic per stream")
{
    const SystemParams params = small_params(8, 6, 2);
    const PathLossSet pl = flat_path_loss(2, 1.0, 1.0, 1.0);
    const CorrelationSqrts sqrts = make_correlation_sqrts(identity_correlation(params));
    RngStream rng_a(9, 4);
    RngStream rng_b(9, 4);
    const ChannelRealization a = sample_realization(params, pl, sqrts, rng_a);
    const ChannelRealization b = sample_realization(params, pl, sqrts, rng_b);
    CHECK(arma::abs(a.h - b.h).max() == 0.0);
    CHECK(arma::abs(a.r_mat - b.r_mat).max() == 0.0);
    CHECK(arma::abs(a.t - b.t).max() == 0.0);
}

TEST_CASE("direct channel sample covariance approaches the identity")
{
    const SystemParams params = small_params(4, 6, 1);
    const PathLossSet pl = flat_path_loss(1, 1.0, 1.0, 1.0);
    const CorrelationSqrts sqrts = make_correlation_sqrts(identity_correlation(params));

    arma::cx_mat cov(4, 4, arma::fill::zeros);
    const arma::uword draws = 10000;
    for (arma::uword i = 0; i < draws; ++i)
    {
        RngStream rng(11, i);
        const arma::cx_mat h = sample_direct_channels(params, pl, sqrts, rng);
        cov += h.col(0) * h.col(0).t();
    }
    cov /= static_cast<double>(draws);
    const arma::cx_mat eye(4, 4, arma::fill::eye);
    CHECK(arma::norm(cov - eye, "fro") / arma::norm(eye, "fro") < 0.05);
}

TEST_CASE("IRS-BS matrix second moment matches beta_bi C^I")
{
    // (1/M) E[R^H R] = beta_bi * C^I under the unit-trace-per-antenna model
    const arma::uword m = 256, n = 4, k = 1;
    const SystemParams params = small_params(m, n, k);
    const double beta_bi = 0.7;

    CorrelationSet corr = identity_correlation(params);
    corr.c_b = exp_correlation(m, std::polar(0.4, 0.2));
    corr.c_i = exp_correlation(n, std::polar(0.6, -0.5));
    const CorrelationSqrts sqrts = make_correlation_sqrts(corr);
    const PathLossSet pl = flat_path_loss(k, 1.0, beta_bi, 1.0);

    arma::cx_mat second_moment(n, n, arma::fill::zeros);
    const arma::uword draws = 1000;
    for (arma::uword i = 0; i < draws; ++i)
    {
        RngStream rng(12, i);
        const arma::cx_mat r = sample_irs_bs_matrix(params, pl, sqrts, rng);
        second_moment += r.t() * r;
    }
    second_moment /= static_cast<double>(draws * m);
    const arma::cx_mat expected = beta_bi * corr.c_i;
    CHECK(arma::norm(second_moment - expected, "fro") / arma::norm(expected, "fro") < 0.05);
}

TEST_CASE("cascaded_channels of a zero user-IRS link is zero")
{
    ChannelRealization real;
    real.h = arma::cx_mat(4, 1, arma::fill::ones);
    real.r_mat = arma::cx_mat(4, 3, arma::fill::ones);
    real.t = arma::cx_mat(3, 1, arma::fill::zeros);
    CHECK(arma::abs(cascaded_channels(real, 0)).max() == 0.0);
}

TEST_CASE("cascaded_channels scalar case")
{
    ChannelRealization real;
    real.h = arma::cx_mat(2, 1, arma::fill::zeros);
    real.r_mat = arma::cx_mat(2, 1, arma::fill::ones);
    real.t = arma::cx_mat(1, 1);
    real.t(0, 0) = std::complex<double>(0.0, 2.0);
    const arma::cx_mat g = cascaded_channels(real, 0);
    CHECK(std::abs(g(0, 0) - std::complex<double>(0.0, 2.0)) < 1e-15);
    CHECK(std::abs(g(1, 0) - std::complex<double>(0.0, 2.0)) < 1e-15);
}

TEST_CASE("cascaded_channels definition column by column")
{
    const SystemParams params = small_params(6, 5, 2);
    const PathLossSet pl = flat_path_loss(2, 1.0, 1.0, 1.0);
    RngStream rng(13, 0);
    const ChannelRealization real =
        sample_realization(params, pl, identity_correlation(params), rng);

    for (arma::uword k = 0; k < 2; ++k)
    {
        const arma::cx_mat g = cascaded_channels(real, k);
        for (arma::uword n = 0; n < 5; ++n)
        {
            const arma::cx_vec expected = real.t(n, k) * real.r_mat.col(n);
            CHECK(arma::norm(g.col(n) - expected) <= 1e-14);
        }
    }
    CHECK_THROWS_AS(cascaded_channels(real, 2), std::invalid_argument);
}

TEST_CASE("effective_channel reduces to the direct channel when the IRS is off")
{
    const SystemParams params = small_params(6, 5, 2);
    const PathLossSet pl = flat_path_loss(2, 1.0, 1.0, 1.0);
    RngStream rng(14, 0);
    const ChannelRealization real =
        sample_realization(params, pl, identity_correlation(params), rng);

    const arma::cx_vec hhat = effective_channel(real, zero_reflection(5), 0);
    CHECK(arma::norm(hhat - real.h.col(0)) == 0.0);
}

TEST_CASE("effective_channel with all-ones reflection adds every cascaded column")
{
    const SystemParams params = small_params(6, 5, 2);
    const PathLossSet pl = flat_path_loss(2, 1.0, 1.0, 1.0);
    RngStream rng(15, 0);
    const ChannelRealization real =
        sample_realization(params, pl, identity_correlation(params), rng);

    const arma::cx_mat g = cascaded_channels(real, 1);
    const arma::cx_vec expected = real.h.col(1) + arma::sum(g, 1);
    const arma::cx_vec hhat = effective_channel(real, ones_reflection(5), 1);
    CHECK(arma::norm(hhat - expected) <= 1e-13);
}

TEST_CASE("effective_channel matches the matrix form for random reflections")
{
    const SystemParams params = small_params(6, 5, 2);
    const PathLossSet pl = flat_path_loss(2, 1.0, 1.0, 1.0);
    RngStream rng(16, 0);
    const ChannelRealization real =
        sample_realization(params, pl, identity_correlation(params), rng);

    ReflectionConfig refl;
    refl.phi = arma::cx_vec(5);
    RngStream phase_rng(16, 1);
    for (arma::uword i = 0; i < 5; ++i)
        refl.phi(i) = std::polar(phase_rng.uniform(), 2.0 * M_PI * phase_rng.uniform());

    const arma::cx_vec hhat = effective_channel(real, refl, 0);
    const arma::cx_vec via_matrix =
        real.h.col(0) + cascaded_channels(real, 0) * refl.phi;
    CHECK(arma::norm(hhat - real.h.col(0) - cascaded_channels(real, 0) * refl.phi) <= 1e-12);
    CHECK(arma::norm(hhat - via_matrix) <= 1e-12);

    // matrix builder agrees with the per-user accessor
    const arma::cx_mat all = effective_channels(real, refl);
    CHECK(arma::norm(arma::cx_vec(all.col(0)) - hhat) <= 1e-12);
}

TEST_CASE("effective_channel enforces the reflection magnitude constraint")
{
    const SystemParams params = small_params(6, 5, 2);
    const PathLossSet pl = flat_path_loss(2, 1.0, 1.0, 1.0);
    RngStream rng(17, 0);
    const ChannelRealization real =
        sample_realization(params, pl, identity_correlation(params), rng);

    ReflectionConfig refl = ones_reflection(5);
    refl.phi(2) = std::complex<double>(1.5, 0.0);
    CHECK_THROWS_AS(effective_channel(real, refl, 0), std::invalid_argument);
}

TEST_CASE("favorable propagation holds without the IRS and breaks with it")
{
    // Without IRS: mean |h_k^H h_j| / M shrinks as M grows. With the IRS on,
    // the cross-product concentrates on beta_bi * eta_k^H C^I eta_j instead.
    const arma::uword k_users = 2, n = 8;
    const double beta_bu = 0.5, beta_bi = 4.0, beta_iu = 1.0;
    const arma::uword trials = 200;
    const std::vector<arma::uword> m_values = {256, 1024, 4096};

    // BS-side correlation kept identity so the M = 4096 sweep stays cheap
    const arma::cx_mat c_i = exp_correlation(n, 0.5);

    // fixed user-IRS draw shared by the whole sweep
    SystemParams params_t = small_params(16, n, k_users);
    CorrelationSet corr_t = identity_correlation(params_t);
    corr_t.c_i = c_i;
    corr_t.c_i_user.assign(k_users, c_i);
    const CorrelationSqrts sqrts_t = make_correlation_sqrts(corr_t);
    const PathLossSet pl = flat_path_loss(k_users, beta_bu, beta_bi, beta_iu);
    RngStream rng_t(18, 0);
    const arma::cx_mat t = sample_user_irs_channels(params_t, pl, sqrts_t, rng_t);

    const arma::cx_vec eta_0 = t.col(0), eta_1 = t.col(1); // phi = 1
    const std::complex<double> cross_limit = beta_bi * arma::cdot(eta_0, c_i * eta_1);
    const double norm_limit = beta_bu + beta_bi * std::real(arma::cdot(eta_0, c_i * eta_0));

    double previous_mean = arma::datum::inf;
    for (arma::uword m : m_values)
    {
        const SystemParams params = small_params(m, n, k_users);
        CorrelationSet corr = identity_correlation(params);
        corr.c_i = c_i;
        corr.c_i_user.assign(k_users, c_i);
        const CorrelationSqrts sqrts = make_correlation_sqrts(corr);

        double mean_cross_no_irs = 0.0;
        std::vector<double> cross_errors, norm_errors;
        for (arma::uword trial = 0; trial < trials; ++trial)
        {
            RngStream rng_h(19, stream_key({m, trial, 1}));
            RngStream rng_r(19, stream_key({m, trial, 2}));
            const arma::cx_mat h = sample_direct_channels(params, pl, sqrts, rng_h);
            const arma::cx_mat r_mat = sample_irs_bs_matrix(params, pl, sqrts, rng_r);

            mean_cross_no_irs += std::abs(arma::cdot(h.col(0), h.col(1))) /
                                 static_cast<double>(m);

            ChannelRealization real;
            real.h = h;
            real.r_mat = r_mat;
            real.t = t;
            const arma::cx_mat hhat = effective_channels(real, ones_reflection(n));
            const std::complex<double> cross =
                arma::cdot(hhat.col(0), hhat.col(1)) / static_cast<double>(m);
            cross_errors.push_back(std::abs(cross - cross_limit) / std::abs(cross_limit));
            const double own =
                std::real(arma::cdot(hhat.col(0), hhat.col(0))) / static_cast<double>(m);
            norm_errors.push_back(std::abs(own - norm_limit) / norm_limit);
        }
        mean_cross_no_irs /= static_cast<double>(trials);

        CHECK(mean_cross_no_irs < previous_mean);
        previous_mean = mean_cross_no_irs;

        if (m == 4096)
        {
            CHECK(mean_cross_no_irs < 0.1 * std::sqrt(beta_bu * beta_bu));
            std::sort(cross_errors.begin(), cross_errors.end());
            std::sort(norm_errors.begin(), norm_errors.end());
            CHECK(cross_errors[trials / 2] <= 0.10);
            CHECK(norm_errors[trials / 2] <= 0.10);
        }
    }
}

TEST_CASE("system parameter validation")
{
    CHECK_THROWS_AS(make_system_params(4, 3, 4, 1000, 13.0, 1e8, -169.0),
                    std::invalid_argument); // N <= K
    CHECK_THROWS_AS(make_system_params(2, 8, 4, 1000, 13.0, 1e8, -169.0),
                    std::invalid_argument); // M < K
    CHECK_THROWS_AS(make_system_params(8, 8, 4, 15, 13.0, 1e8, -169.0),
                    std::invalid_argument); // T too short
    const SystemParams params = make_system_params(8, 8, 4, 1000, 13.0, 1e8, -169.0);
    CHECK(params.transmit_power() == doctest::Approx(params.e_fixed_mw / 8.0));
}

TEST_CASE("path loss validation")
{
    const PathLossSet pl = uniform_path_loss(3, -100.0, -80.0, -60.0);
    CHECK(pl.beta_bu.n_elem == 3);
    CHECK(pl.beta_bu(0) == doctest::Approx(1e-10));
    CHECK(pl.beta_bi == doctest::Approx(1e-8));
    CHECK(pl.beta_iu(2) == doctest::Approx(1e-6));
    CHECK_NOTHROW(validate_path_loss(pl, 3));
    CHECK_THROWS_AS(validate_path_loss(pl, 4), std::invalid_argument);
    CHECK_THROWS_AS(validate_path_loss(flat_path_loss(3, 0.0, 1.0, 1.0), 3),
                    std::invalid_argument);
}

TEST_CASE("sample_realization rejects mismatched dimensions")
{
    const SystemParams params = small_params(8, 6, 2);
    const PathLossSet wrong = flat_path_loss(3, 1.0, 1.0, 1.0);
    const CorrelationSqrts sqrts = make_correlation_sqrts(identity_correlation(params));
    RngStream rng(20, 0);
    CHECK_THROWS_AS(sample_realization(params, wrong, sqrts, rng), std::invalid_argument);
}
