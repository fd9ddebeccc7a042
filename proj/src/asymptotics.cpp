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

#include "irsmimo/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace irsmimo
{

double mrc_sinr_no_irs(double e, double sigma2, double beta_bu_k)
{
    if (e <= 0.0 || sigma2 <= 0.0)
        throw std::invalid_argument("mrc_sinr_no_irs: E and sigma2 must be positive");
    if (beta_bu_k < 0.0)
        throw std::invalid_argument("mrc_sinr_no_irs: path loss must be nonnegative");
    return (e / sigma2) * beta_bu_k;
}

double rate_with_overhead(double gamma, arma::uword t_block, arma::uword tau)
{
    if (t_block == 0 || tau >= t_block)
        throw std::invalid_argument("rate_with_overhead: need 0 <= tau < T");
    if (gamma < 0.0)
        throw std::invalid_argument("rate_with_overhead: SINR must be nonnegative");
    const double fraction =
        static_cast<double>(t_block - tau) / static_cast<double>(t_block);
    return fraction * std::log2(1.0 + gamma);
}

RateReport rates_with_overhead(const arma::vec &gammas, arma::uword t_block, arma::uword tau)
{
    RateReport report;
    report.tau = tau;
    report.fraction = static_cast<double>(t_block - tau) / static_cast<double>(t_block);
    report.rates = arma::vec(gammas.n_elem);
    for (arma::uword k = 0; k < gammas.n_elem; ++k)
        report.rates(k) = rate_with_overhead(gammas(k), t_block, tau);
    return report;
}

arma::cx_vec eta(const ReflectionConfig &phi, const arma::cx_vec &t_k)
{
    if (phi.phi.n_elem != t_k.n_elem)
        throw std::invalid_argument("eta: phi and t_k lengths differ");
    return phi.phi % t_k;
}

namespace
{

// Large-M MRC SINR of user k from the Gram matrix q(k, j) = eta_k^H C^I eta_j.
double mrc_irs_sinr_from_gram(const arma::cx_mat &gram, const arma::vec &beta_bu,
                              double beta_bi, double e, double sigma2, arma::uword k)
{
    const double own = beta_bu(k) + beta_bi * std::real(gram(k, k));
    if (own <= 0.0)
        return 0.0; // no signal path at all
    double interference = 0.0;
    for (arma::uword j = 0; j < gram.n_cols; ++j)
    {
        if (j == k)
            continue;
        interference += std::norm(beta_bi * gram(k, j));
    }
    return own * own * e / (interference * e + sigma2 * own);
}

double sum_rate_from_gram(const arma::cx_mat &gram, const arma::vec &beta_bu,
                          double beta_bi, double e, double sigma2)
{
    double total = 0.0;
    for (arma::uword k = 0; k < gram.n_cols; ++k)
        total += std::log2(1.0 + mrc_irs_sinr_from_gram(gram, beta_bu, beta_bi, e, sigma2, k));
    return total;
}

} // namespace

double mrc_irs_asymptotic_sinr(const ReflectionConfig &phi, const arma::cx_mat &t_all,
                               const arma::cx_mat &c_i, const arma::vec &beta_bu,
                               double beta_bi, double e, double sigma2, arma::uword k)
{
    if (sigma2 <= 0.0 || e <= 0.0)
        throw std::invalid_argument("mrc_irs_asymptotic_sinr: E and sigma2 must be positive");
    if (k >= t_all.n_cols || beta_bu.n_elem != t_all.n_cols)
        throw std::invalid_argument("mrc_irs_asymptotic_sinr: user index or beta length invalid");
    validate_reflection(phi);

    const arma::uword n_users = t_all.n_cols;
    const arma::cx_vec eta_k = eta(phi, t_all.col(k));
    const arma::cx_vec c_eta_k = c_i * eta_k;

    arma::cx_mat gram(n_users, n_users, arma::fill::zeros);
    for (arma::uword j = 0; j < n_users; ++j)
        gram(k, j) = arma::cdot(eta_k, c_i * eta(phi, t_all.col(j)));
    gram(k, k) = arma::cdot(eta_k, c_eta_k);
    return mrc_irs_sinr_from_gram(gram, beta_bu, beta_bi, e, sigma2, k);
}

double zf_subopt_asymptotic_sinr(const arma::cx_mat &t_all, const arma::cx_mat &c_i,
                                 double beta_bu_k, double beta_bi, double e,
                                 double sigma2, arma::uword k)
{
    const arma::uword n = t_all.n_rows;
    const arma::uword n_users = t_all.n_cols;
    if (k >= n_users)
        throw std::invalid_argument("zf_subopt_asymptotic_sinr: user index out of range");
    if (n <= n_users)
        throw std::invalid_argument("zf_subopt_asymptotic_sinr: needs N > K");

    // no IRS link for user k: the projected gain term vanishes identically
    if (arma::norm(t_all.col(k)) == 0.0)
        return mrc_sinr_no_irs(e, sigma2, beta_bu_k);

    // limit of A_k / M: rows beta_bi * t_j^H C^I diag(t_k), j != k
    arma::cx_mat a_limit(n_users - 1, n);
    arma::uword row = 0;
    for (arma::uword j = 0; j < n_users; ++j)
    {
        if (j == k)
            continue;
        a_limit.row(row++) =
            beta_bi * ((c_i * t_all.col(j)).t() % t_all.col(k).st());
    }

    const SvdFactorization svd = svd_full(a_limit);
    const arma::uword lambda = numerical_rank(svd.singular_values, n_users - 1, n);
    const arma::cx_mat v2 = svd.right.cols(lambda, n - 1);

    const arma::cx_mat c_i_sqrt = hermitian_sqrt(c_i);
    const arma::cx_mat d_mat = c_i_sqrt * arma::diagmat(t_all.col(k)) * v2;
    const QrFactorization qr = qr_thin(d_mat);
    const double r_floor = 1e3 * std::numeric_limits<double>::epsilon() *
                           arma::abs(qr.r.diag()).max();
    if (arma::abs(qr.r.diag()).min() <= r_floor)
        throw std::runtime_error("zf_subopt_asymptotic_sinr: D_k is rank deficient for user " +
                                 std::to_string(k));

    const double gain =
        std::pow(arma::norm(qr.q.t() * (c_i_sqrt * t_all.col(k))), 2);
    return mrc_sinr_no_irs(e, sigma2, beta_bu_k) + (e / sigma2) * beta_bi * gain;
}

AsymptoticReport asymptotic_report(AsymptoticRegime regime, const arma::cx_mat &t_all,
                                   const arma::cx_mat &c_i, const arma::vec &beta_bu,
                                   double beta_bi, double e, double sigma2,
                                   const ReflectionConfig &phi)
{
    const arma::uword n_users = t_all.n_cols;
    AsymptoticReport report;
    report.regime = regime;
    report.gamma_bar = arma::vec(n_users);
    switch (regime)
    {
    case AsymptoticRegime::mrc_no_irs:
        for (arma::uword k = 0; k < n_users; ++k)
            report.gamma_bar(k) = mrc_sinr_no_irs(e, sigma2, beta_bu(k));
        break;
    case AsymptoticRegime::mrc_irs:
        report.phi_used = phi.phi.is_empty() ? ones_reflection(t_all.n_rows) : phi;
        for (arma::uword k = 0; k < n_users; ++k)
            report.gamma_bar(k) = mrc_irs_asymptotic_sinr(report.phi_used, t_all, c_i,
                                                          beta_bu, beta_bi, e, sigma2, k);
        break;
    case AsymptoticRegime::zf_subopt_irs:
        report.phi_used = ones_reflection(t_all.n_rows); // the scheme fixes phi = 1
        for (arma::uword k = 0; k < n_users; ++k)
            report.gamma_bar(k) = zf_subopt_asymptotic_sinr(t_all, c_i, beta_bu(k), beta_bi,
                                                            e, sigma2, k);
        break;
    }
    return report;
}

// --- reflection coefficient search -------------------------------------
//
// The objective is evaluated through the Gram matrix q(k, j) = eta_k^H C eta_j
// with eta_k = phi .* t_k. Changing one element phi_n shifts row n of the eta
// matrix only, so candidate objectives during coordinate refinement come from
// rank-one Gram updates instead of full O(N^2 K) recomputations.

namespace
{

struct GramState
{
    arma::cx_vec phi;
    arma::cx_mat eta_mat; // N x K, columns eta_k
    arma::cx_mat w_mat;   // C^I * eta_mat
    arma::cx_mat gram;    // eta^H C eta

    void rebuild(const arma::cx_vec &new_phi, const arma::cx_mat &t_all,
                 const arma::cx_mat &c_i)
    {
        phi = new_phi;
        eta_mat = t_all.each_col() % phi;
        w_mat = c_i * eta_mat;
        gram = eta_mat.t() * w_mat;
    }
};

arma::cx_mat gram_after_element_change(const GramState &state, const arma::cx_mat &c_i,
                                       const arma::cx_mat &t_all, arma::uword n,
                                       std::complex<double> candidate,
                                       const arma::cx_vec &eta_dot_cn)
{
    const arma::cx_rowvec delta =
        (candidate - state.phi(n)) * t_all.row(n);
    arma::cx_mat gram = state.gram;
    gram += eta_dot_cn * delta;
    gram += delta.t() * state.w_mat.row(n);
    gram += c_i(n, n) * (delta.t() * delta);
    return gram;
}

} // namespace

arma::cx_vec phi_candidate_grid(const PhiSearchBudget &budget)
{
    if (budget.magnitude_levels == 0 || budget.phase_levels == 0)
        throw std::invalid_argument("phi_candidate_grid: grid must be nonempty");
    arma::cx_vec grid(1 + budget.magnitude_levels * budget.phase_levels);
    grid(0) = 0.0;
    arma::uword idx = 1;
    for (arma::uword mi = 0; mi < budget.magnitude_levels; ++mi)
    {
        const double mag = static_cast<double>(mi + 1) /
                           static_cast<double>(budget.magnitude_levels);
        for (arma::uword pi = 0; pi < budget.phase_levels; ++pi)
        {
            const double angle = 2.0 * M_PI * static_cast<double>(pi) /
                                 static_cast<double>(budget.phase_levels);
            grid(idx++) = std::polar(mag, angle);
        }
    }
    return grid;
}

PhiSearchResult optimize_phi_mrc(const arma::cx_mat &t_all, const arma::cx_mat &c_i,
                                 const arma::vec &beta_bu, double beta_bi, double e,
                                 double sigma2, const PhiSearchBudget &budget)
{
    if (budget.random_starts < 1)
        throw std::invalid_argument("optimize_phi_mrc: need at least one random start");
    if (beta_bu.n_elem != t_all.n_cols)
        throw std::invalid_argument("optimize_phi_mrc: beta length must equal K");

    const arma::uword n = t_all.n_rows;
    const arma::cx_vec grid = phi_candidate_grid(budget);

    GramState state;
    const auto evaluate = [&](const arma::cx_vec &phi) {
        state.rebuild(phi, t_all, c_i);
        return sum_rate_from_gram(state.gram, beta_bu, beta_bi, e, sigma2);
    };

    // baselines first, then grid-sampled random starts; strict improvement
    // keeps the earliest winner so ties break toward the lowest start index
    arma::cx_vec best_phi(n, arma::fill::ones);
    double best_objective = evaluate(best_phi);

    const arma::cx_vec zero_phi(n, arma::fill::zeros);
    const double zero_objective = evaluate(zero_phi);
    if (zero_objective > best_objective)
    {
        best_objective = zero_objective;
        best_phi = zero_phi;
    }

    RngStream rng(budget.seed, stream_key({0x9D2C5680ULL, n, t_all.n_cols}));
    for (arma::uword start = 0; start < budget.random_starts; ++start)
    {
        arma::cx_vec phi(n);
        for (arma::uword i = 0; i < n; ++i)
            phi(i) = grid(rng.next_u64() % grid.n_elem);
        const double objective = evaluate(phi);
        if (objective > best_objective)
        {
            best_objective = objective;
            best_phi = phi;
        }
    }

    // coordinate-wise refinement over the same grid
    state.rebuild(best_phi, t_all, c_i);
    for (arma::uword pass = 0; pass < budget.coord_passes; ++pass)
    {
        for (arma::uword i = 0; i < n; ++i)
        {
            const arma::cx_vec eta_dot_cn = state.eta_mat.t() * c_i.col(i);
            std::complex<double> best_candidate = state.phi(i);
            arma::cx_mat best_gram = state.gram;
            for (arma::uword g = 0; g < grid.n_elem; ++g)
            {
                if (grid(g) == state.phi(i))
                    continue;
                arma::cx_mat gram =
                    gram_after_element_change(state, c_i, t_all, i, grid(g), eta_dot_cn);
                const double objective =
                    sum_rate_from_gram(gram, beta_bu, beta_bi, e, sigma2);
                if (objective > best_objective)
                {
                    best_objective = objective;
                    best_candidate = grid(g);
                    best_gram = std::move(gram);
                }
            }
            if (best_candidate != state.phi(i))
            {
                const arma::cx_rowvec delta =
                    (best_candidate - state.phi(i)) * t_all.row(i);
                state.w_mat += c_i.col(i) * delta;
                state.eta_mat.row(i) += delta;
                state.phi(i) = best_candidate;
                state.gram = std::move(best_gram);
            }
        }
        // refresh accumulated rank-one updates once per pass
        state.rebuild(state.phi, t_all, c_i);
        best_objective = sum_rate_from_gram(state.gram, beta_bu, beta_bi, e, sigma2);
    }

    PhiSearchResult result;
    result.phi = ReflectionConfig{state.phi};
    result.objective = best_objective;
    return result;
}

} // namespace irsmimo
