// SPDX-License-Identifier: Apache-2.0
//
// Fast-timescale polarforming and precoding solver: a penalty dual
// decomposition outer loop around block-coordinate descent over the user
// polarformers, their codebook copies, the shared BS polarformer and copy,
// the per-user LMMSE equalizers and MSE weights, and the power-constrained
// precoders.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "p6dma/channel.hpp"

namespace p6dma {

struct SolverConfig {
    double inner_tol = 1e-4;       // relative Lagrangian reduction
    double outer_tol = 1e-3;       // max-norm consensus violation
    double penalty_shrink = 0.7;   // in (0, 1)
    double initial_penalty = 1.0;
    int max_inner = 50;
    int max_outer = 60;
    double power_budget = 1.0;     // total transmit power
    double noise_power = 1e-12;
    bool optimize_precoders = true;
    // Deterministic starts tried by solve_multistart. The consensus descent
    // is a local method; with coarse codebooks extra starts escape the
    // co-phased basin.
    int num_starts = 1;
};

/// Fixed data of one solve: per-user channel realizations and rate weights.
struct PddProblem {
    std::vector<ChannelSample> samples;
    std::vector<double> user_weights;
    double tx_scale = kTxPolarformerScale;

    int num_users() const { return static_cast<int>(samples.size()); }
    int num_antennas() const {
        return samples.empty() ? 0 : static_cast<int>(samples.front().unpolarformed.size());
    }
};

/// All block variables. Polarformers are stored in codebook coordinates;
/// the BS transmit prefactor is applied when channels are formed.
struct PddState {
    std::vector<PolarVec> user_polarformers;  // w_k, relaxed
    std::vector<PolarVec> user_copies;        // codebook-feasible copies
    PolarVec bs_polarformer;                  // v, relaxed
    PolarVec bs_copy;
    std::vector<Complex> equalizers;          // xi_k
    std::vector<double> mse_weights;          // eps_k > 0
    std::vector<CVec> precoders;              // c_k
    std::vector<PolarVec> user_duals;         // t_k
    PolarVec bs_dual;                         // t_bar
    double penalty = 1.0;                     // mu > 0
};

struct IterationRecord {
    int outer = 0;
    int inner = 0;
    double lagrangian = 0.0;
    double sum_rate = 0.0;       // weighted, at the codebook copies
    double max_violation = 0.0;
    double penalty = 0.0;
};

struct SolveResult {
    PddState state;
    bool converged = false;
    int outer_iterations = 0;
    int inner_iterations = 0;    // total BCD sweeps
    double weighted_sum_rate = 0.0;
    std::vector<double> per_user_rates;
    std::vector<IterationRecord> trace;
};

/// Effective channels h_k for given polarformers (relaxed or copies).
std::vector<CVec> effective_channels(const PddProblem& problem,
                                     const std::vector<PolarVec>& user_polarformers,
                                     const PolarVec& bs_polarformer);

/// Per-user mean square error for the current equalizer and precoders.
double mse(int k, const PddState& state, const std::vector<CVec>& channels,
           double noise_power);

/// LMMSE equalizers xi_k = h_k^H c_k / (sum_j |h_k^H c_j|^2 + noise).
void update_equalizers(PddState& state, const std::vector<CVec>& channels,
                       double noise_power);

/// Weight update eps_k = 1/e_k. Throws std::logic_error if some e_k <= 0.
void update_mse_weights(PddState& state, const std::vector<CVec>& channels,
                        double noise_power);

/// Closed-form minimizer of the w_k block (a 2x2 regularized LS solve per
/// user). Requires penalty > 0.
void update_user_polarformers(PddState& state, const PddProblem& problem,
                              double noise_power);

/// Elementwise codebook projection of w_k + mu*t_k.
void update_user_copies(PddState& state, const QuantizationConfig& quant);

/// Closed-form minimizer of the shared v block.
void update_bs_polarformer(PddState& state, const PddProblem& problem,
                           double noise_power);

/// Elementwise codebook projection of v + mu*t_bar.
void update_bs_copy(PddState& state, const QuantizationConfig& quant);

/// Power-constrained precoder block: c_k(eta) = (B + eta I)^-1 g_k with the
/// multiplier eta >= 0 found by bisection so the power budget is met with
/// complementary slackness.
void update_precoders(PddState& state, const std::vector<CVec>& channels,
                      const PddProblem& problem, double power_budget);

/// Augmented Lagrangian of the consensus-penalized WMMSE problem. The
/// weighting term uses the natural logarithm, under which eps = 1/e is the
/// exact block minimizer; rates are still reported in bits.
double augmented_lagrangian(const PddState& state, const PddProblem& problem,
                            double noise_power);

/// Base-2 WMMSE objective sum_k rho_k (eps_k e_k - log2 eps_k), the form
/// whose value at the LMMSE point equals sum_k rho_k (1 - R_k).
double wmmse_objective_bits(const PddState& state, const PddProblem& problem,
                            double noise_power);

/// Dual ascent t += (w - w_copy)/mu followed by the penalty shrink.
void dual_and_penalty_update(PddState& state, double penalty_shrink);

/// max over blocks of the infinity-norm consensus violation.
double max_consensus_violation(const PddState& state);

/// Co-phased max-amplitude polarformers, MRT precoders, zero duals.
PddState initial_state(const PddProblem& problem, const SolverConfig& config,
                       const QuantizationConfig& quant);

/// Up to config.num_starts deterministic initial points: the co-phased
/// default, BS-polarformer phase flips, alignment-seeded user polarformers,
/// and single-user precoder allocations for the strongest users.
std::vector<PddState> initial_states(const PddProblem& problem, const SolverConfig& config,
                                     const QuantizationConfig& quant);

/// Weighted sum rate evaluated at the codebook copies with the state's
/// precoders.
RateReport feasible_rate(const PddState& state, const PddProblem& problem,
                         double noise_power);

/// Runs the nested PDD/BCD loops (Algorithm: inner sweeps until the
/// relative Lagrangian reduction drops below inner_tol, dual/penalty update,
/// stop when the consensus violation falls below outer_tol). Throws
/// std::runtime_error with an iteration dump if the Lagrangian turns
/// non-finite.
SolveResult solve(const PddProblem& problem, const SolverConfig& config,
                  const QuantizationConfig& quant,
                  const std::optional<PddState>& init = std::nullopt);

/// solve() from every initial_states() point; returns the run with the
/// best feasible weighted sum rate, with inner/outer iteration counts
/// accumulated over all starts.
SolveResult solve_multistart(const PddProblem& problem, const SolverConfig& config,
                             const QuantizationConfig& quant);

/// CSV rows: iteration,lagrangian,sum_rate,max_violation,penalty.
std::string trace_to_csv(const std::vector<IterationRecord>& trace);

}  // namespace p6dma
