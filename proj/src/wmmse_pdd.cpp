// SPDX-License-Identifier: Apache-2.0

#include "p6dma/wmmse_pdd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace p6dma {

namespace {

constexpr double kTiny = 1e-300;

// Interference-plus-noise denominator sum_j |h_k^H c_j|^2 + noise.
double received_power(const CVec& channel, const std::vector<CVec>& precoders,
                      double noise_power) {
    double total = noise_power;
    for (const CVec& c : precoders) {
        total += std::norm(channel.dot(c));
    }
    return total;
}

}  // namespace

std::vector<CVec> effective_channels(const PddProblem& problem,
                                     const std::vector<PolarVec>& user_polarformers,
                                     const PolarVec& bs_polarformer) {
    std::vector<CVec> channels(problem.samples.size());
    for (size_t k = 0; k < problem.samples.size(); ++k) {
        channels[k] = effective_channel(problem.samples[k], user_polarformers[k],
                                        bs_polarformer, problem.tx_scale);
    }
    return channels;
}

double mse(int k, const PddState& state, const std::vector<CVec>& channels,
           double noise_power) {
    const size_t uk = static_cast<size_t>(k);
    const Complex xi = state.equalizers[uk];
    const double total = received_power(channels[uk], state.precoders, noise_power);
    const Complex desired = channels[uk].dot(state.precoders[uk]);
    return std::norm(xi) * total - 2.0 * std::real(std::conj(xi) * desired) + 1.0;
}

void update_equalizers(PddState& state, const std::vector<CVec>& channels,
                       double noise_power) {
    for (size_t k = 0; k < channels.size(); ++k) {
        const double total = received_power(channels[k], state.precoders, noise_power);
        state.equalizers[k] = channels[k].dot(state.precoders[k]) / total;
    }
}

void update_mse_weights(PddState& state, const std::vector<CVec>& channels,
                        double noise_power) {
    for (size_t k = 0; k < channels.size(); ++k) {
        const double e = mse(static_cast<int>(k), state, channels, noise_power);
        if (e <= 0.0) {
            throw std::logic_error("update_mse_weights: nonpositive MSE for user " +
                                   std::to_string(k));
        }
        state.mse_weights[k] = 1.0 / e;
    }
}

void update_user_polarformers(PddState& state, const PddProblem& problem,
                              double /*noise_power*/) {
    const double mu = state.penalty;
    const PolarVec v_scaled = problem.tx_scale * state.bs_polarformer;
    for (size_t k = 0; k < problem.samples.size(); ++k) {
        const ChannelSample& sample = problem.samples[k];
        const double rho = problem.user_weights[k];
        const double eps = state.mse_weights[k];
        const Complex xi = state.equalizers[k];

        // h_k = M_k w_k with M_k = h_los (v^H A); only M_k^H c_j is needed.
        const Eigen::RowVector2cd row =
            v_scaled.adjoint() * sample.depolarization.cast<Complex>();
        Eigen::Matrix2cd quad = Eigen::Matrix2cd::Zero();
        PolarVec y_own = PolarVec::Zero();
        const double coef = 2.0 * rho * eps * std::norm(xi);
        for (size_t j = 0; j < state.precoders.size(); ++j) {
            const Complex overlap = sample.unpolarformed.dot(state.precoders[j]);
            const PolarVec y = row.adjoint() * overlap;  // M_k^H c_j
            quad.noalias() += coef * (y * y.adjoint());
            if (j == k) {
                y_own = y;
            }
        }
        quad += (1.0 / mu) * Eigen::Matrix2cd::Identity();
        const PolarVec rhs = 2.0 * rho * eps * std::conj(xi) * y_own +
                             (1.0 / mu) * (state.user_copies[k] - mu * state.user_duals[k]);
        state.user_polarformers[k] = quad.ldlt().solve(rhs);
        if (!state.user_polarformers[k].allFinite()) {
            throw std::runtime_error("update_user_polarformers: singular system");
        }
    }
}

void update_user_copies(PddState& state, const QuantizationConfig& quant) {
    const double mu = state.penalty;
    for (size_t k = 0; k < state.user_polarformers.size(); ++k) {
        for (int i = 0; i < 2; ++i) {
            const Complex target = state.user_polarformers[k](i) + mu * state.user_duals[k](i);
            state.user_copies[k](i) = project_to_codebook(target, quant);
        }
    }
}

void update_bs_polarformer(PddState& state, const PddProblem& problem,
                           double /*noise_power*/) {
    const double mu = state.penalty;
    const double s = problem.tx_scale;
    Eigen::Matrix2cd quad = Eigen::Matrix2cd::Zero();
    PolarVec rhs = PolarVec::Zero();
    for (size_t k = 0; k < problem.samples.size(); ++k) {
        const ChannelSample& sample = problem.samples[k];
        const double rho = problem.user_weights[k];
        const double eps = state.mse_weights[k];
        const Complex xi = state.equalizers[k];

        const PolarVec coupled =
            sample.depolarization.cast<Complex>() * state.user_polarformers[k];
        double overlap_power = 0.0;
        Complex own_overlap = 0.0;
        for (size_t j = 0; j < state.precoders.size(); ++j) {
            const Complex overlap = sample.unpolarformed.dot(state.precoders[j]);
            overlap_power += std::norm(overlap);
            if (j == k) {
                own_overlap = overlap;
            }
        }
        quad.noalias() +=
            (2.0 * s * s * rho * eps * std::norm(xi) * overlap_power) * (coupled * coupled.adjoint());
        rhs += (2.0 * s * rho * eps) * xi * std::conj(own_overlap) * coupled;
    }
    quad += (1.0 / mu) * Eigen::Matrix2cd::Identity();
    rhs += (1.0 / mu) * (state.bs_copy - mu * state.bs_dual);
    state.bs_polarformer = quad.ldlt().solve(rhs);
    if (!state.bs_polarformer.allFinite()) {
        throw std::runtime_error("update_bs_polarformer: singular system");
    }
}

void update_bs_copy(PddState& state, const QuantizationConfig& quant) {
    const double mu = state.penalty;
    for (int i = 0; i < 2; ++i) {
        const Complex target = state.bs_polarformer(i) + mu * state.bs_dual(i);
        state.bs_copy(i) = project_to_codebook(target, quant);
    }
}

void update_precoders(PddState& state, const std::vector<CVec>& channels,
                      const PddProblem& problem, double power_budget) {
    const int num_users = problem.num_users();
    const int n = problem.num_antennas();
    auto zero_all = [&] {
        for (CVec& c : state.precoders) {
            c = CVec::Zero(n);
        }
    };
    if (power_budget <= 0.0) {
        zero_all();
        return;
    }

    CMat quad = CMat::Zero(n, n);
    std::vector<CVec> targets(static_cast<size_t>(num_users));
    double target_power = 0.0;
    for (int k = 0; k < num_users; ++k) {
        const size_t uk = static_cast<size_t>(k);
        const double coef = problem.user_weights[uk] * state.mse_weights[uk];
        quad.noalias() +=
            (coef * std::norm(state.equalizers[uk])) * (channels[uk] * channels[uk].adjoint());
        targets[uk] = coef * state.equalizers[uk] * channels[uk];
        target_power += targets[uk].squaredNorm();
    }
    if (target_power <= kTiny) {
        zero_all();  // degenerate all-zero channels
        return;
    }

    Eigen::SelfAdjointEigenSolver<CMat> eig(quad);
    const Eigen::VectorXd eigenvalues = eig.eigenvalues().cwiseMax(0.0);
    const CMat& basis = eig.eigenvectors();
    std::vector<CVec> projected(static_cast<size_t>(num_users));
    for (int k = 0; k < num_users; ++k) {
        projected[static_cast<size_t>(k)] = basis.adjoint() * targets[static_cast<size_t>(k)];
    }

    const double lambda_max = eigenvalues.maxCoeff();
    const double null_tol = lambda_max * 1e-13;
    auto power_at = [&](double eta) {
        double total = 0.0;
        for (const CVec& p : projected) {
            for (int i = 0; i < n; ++i) {
                const double denom = eigenvalues(i) + eta;
                total += std::norm(p(i)) / (denom * denom);
            }
        }
        return total;
    };

    // Feasibility of the unconstrained minimizer: the targets lie in the
    // range of the quadratic form, so null-space mass is arithmetic noise.
    double regular_power = 0.0;
    double null_mass = 0.0;
    for (const CVec& p : projected) {
        for (int i = 0; i < n; ++i) {
            if (eigenvalues(i) > null_tol) {
                regular_power += std::norm(p(i)) / (eigenvalues(i) * eigenvalues(i));
            } else {
                null_mass += std::norm(p(i));
            }
        }
    }

    double eta = 0.0;
    if (null_mass <= target_power * 1e-18 && regular_power <= power_budget) {
        for (int k = 0; k < num_users; ++k) {
            CVec scaled = projected[static_cast<size_t>(k)];
            for (int i = 0; i < n; ++i) {
                scaled(i) = (eigenvalues(i) > null_tol) ? scaled(i) / eigenvalues(i) : Complex(0.0);
            }
            state.precoders[static_cast<size_t>(k)] = basis * scaled;
        }
        return;
    }

    double lo = 0.0;
    double hi = std::sqrt(target_power / power_budget) + lambda_max;
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (power_at(mid) > power_budget) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    eta = hi;  // power_at(hi) <= budget keeps the iterate feasible

    for (int k = 0; k < num_users; ++k) {
        CVec scaled = projected[static_cast<size_t>(k)];
        for (int i = 0; i < n; ++i) {
            scaled(i) /= (eigenvalues(i) + eta);
        }
        state.precoders[static_cast<size_t>(k)] = basis * scaled;
    }
}

double augmented_lagrangian(const PddState& state, const PddProblem& problem,
                            double noise_power) {
    const std::vector<CVec> channels =
        effective_channels(problem, state.user_polarformers, state.bs_polarformer);
    double value = 0.0;
    for (size_t k = 0; k < channels.size(); ++k) {
        const double e = mse(static_cast<int>(k), state, channels, noise_power);
        value += problem.user_weights[k] *
                 (state.mse_weights[k] * e - std::log(state.mse_weights[k]));
    }
    const double mu = state.penalty;
    for (size_t k = 0; k < channels.size(); ++k) {
        value += (state.user_polarformers[k] - state.user_copies[k] + mu * state.user_duals[k])
                     .squaredNorm() /
                 (2.0 * mu);
    }
    value += (state.bs_polarformer - state.bs_copy + mu * state.bs_dual).squaredNorm() / (2.0 * mu);
    return value;
}

double wmmse_objective_bits(const PddState& state, const PddProblem& problem,
                            double noise_power) {
    const std::vector<CVec> channels =
        effective_channels(problem, state.user_polarformers, state.bs_polarformer);
    double value = 0.0;
    for (size_t k = 0; k < channels.size(); ++k) {
        const double e = mse(static_cast<int>(k), state, channels, noise_power);
        value += problem.user_weights[k] *
                 (state.mse_weights[k] * e - std::log2(state.mse_weights[k]));
    }
    return value;
}

void dual_and_penalty_update(PddState& state, double penalty_shrink) {
    const double mu = state.penalty;
    for (size_t k = 0; k < state.user_polarformers.size(); ++k) {
        state.user_duals[k] += (state.user_polarformers[k] - state.user_copies[k]) / mu;
    }
    state.bs_dual += (state.bs_polarformer - state.bs_copy) / mu;
    state.penalty = penalty_shrink * mu;
}

double max_consensus_violation(const PddState& state) {
    double violation =
        (state.bs_polarformer - state.bs_copy).cwiseAbs().maxCoeff();
    for (size_t k = 0; k < state.user_polarformers.size(); ++k) {
        violation = std::max(
            violation, (state.user_polarformers[k] - state.user_copies[k]).cwiseAbs().maxCoeff());
    }
    return violation;
}

PddState initial_state(const PddProblem& problem, const SolverConfig& config,
                       const QuantizationConfig& quant) {
    const int num_users = problem.num_users();
    const int n = problem.num_antennas();
    const std::vector<double> amplitudes = amplitude_set(quant);
    const double rho_max = amplitudes.back();

    PddState state;
    state.user_polarformers.assign(static_cast<size_t>(num_users),
                                   PolarVec::Constant(Complex(rho_max, 0.0)));
    state.user_copies = state.user_polarformers;
    state.bs_polarformer = PolarVec::Constant(Complex(rho_max, 0.0));
    state.bs_copy = state.bs_polarformer;
    state.equalizers.assign(static_cast<size_t>(num_users), Complex(0.0));
    state.mse_weights.assign(static_cast<size_t>(num_users), 1.0);
    state.user_duals.assign(static_cast<size_t>(num_users), PolarVec::Zero());
    state.bs_dual = PolarVec::Zero();
    state.penalty = config.initial_penalty;

    const std::vector<CVec> channels =
        effective_channels(problem, state.user_polarformers, state.bs_polarformer);
    state.precoders.resize(static_cast<size_t>(num_users));
    const double per_user_power =
        (num_users > 0) ? config.power_budget / static_cast<double>(num_users) : 0.0;
    for (size_t k = 0; k < channels.size(); ++k) {
        const double norm = channels[k].norm();
        state.precoders[k] = (norm > 0.0 && per_user_power > 0.0)
                                 ? CVec(std::sqrt(per_user_power) * channels[k] / norm)
                                 : CVec(CVec::Zero(n));
    }
    return state;
}

std::vector<PddState> initial_states(const PddProblem& problem, const SolverConfig& config,
                                     const QuantizationConfig& quant) {
    const int num_users = problem.num_users();
    const int n = problem.num_antennas();

    auto mrt = [&](PddState& state, int solo) {
        const std::vector<CVec> channels =
            effective_channels(problem, state.user_polarformers, state.bs_polarformer);
        for (int k = 0; k < num_users; ++k) {
            const size_t uk = static_cast<size_t>(k);
            const double norm = channels[uk].norm();
            const double power = (solo < 0)
                                     ? config.power_budget / static_cast<double>(num_users)
                                     : (k == solo ? config.power_budget : 0.0);
            state.precoders[uk] = (norm > 0.0 && power > 0.0)
                                      ? CVec(std::sqrt(power) * channels[uk] / norm)
                                      : CVec(CVec::Zero(n));
        }
    };
    auto flip_bs_phase = [](PddState& state) {
        state.bs_polarformer(1) = -state.bs_polarformer(1);
        state.bs_copy = state.bs_polarformer;
    };
    auto align_users = [&](PddState& state) {
        for (int k = 0; k < num_users; ++k) {
            const size_t uk = static_cast<size_t>(k);
            const PolarVec target =
                problem.samples[uk].depolarization.cast<Complex>().adjoint() *
                state.bs_polarformer;
            PolarVec w;
            w << project_to_codebook(target(0), quant), project_to_codebook(target(1), quant);
            if (std::abs(w(0)) + std::abs(w(1)) > 0.0) {
                state.user_polarformers[uk] = w;
                state.user_copies[uk] = w;
            }
        }
    };
    auto make_start = [&](bool bs_flip, bool aligned, int solo) {
        PddState state = initial_state(problem, config, quant);
        if (bs_flip) {
            flip_bs_phase(state);
        }
        if (aligned) {
            align_users(state);
        }
        mrt(state, solo);
        return state;
    };

    std::vector<PddState> starts;
    starts.push_back(initial_state(problem, config, quant));
    starts.push_back(make_start(true, false, -1));
    starts.push_back(make_start(false, true, -1));
    starts.push_back(make_start(true, true, -1));
    if (config.optimize_precoders) {
        // strongest users first for the single-user allocations
        std::vector<int> order(static_cast<size_t>(num_users));
        for (int k = 0; k < num_users; ++k) {
            order[static_cast<size_t>(k)] = k;
        }
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return problem.samples[static_cast<size_t>(a)].unpolarformed.squaredNorm() >
                   problem.samples[static_cast<size_t>(b)].unpolarformed.squaredNorm();
        });
        for (int k : order) {
            starts.push_back(make_start(false, true, k));
            starts.push_back(make_start(true, true, k));
        }
    }
    const size_t count = static_cast<size_t>(std::max(1, config.num_starts));
    if (starts.size() > count) {
        starts.resize(count);
    }
    return starts;
}

RateReport feasible_rate(const PddState& state, const PddProblem& problem,
                         double noise_power) {
    const std::vector<CVec> channels =
        effective_channels(problem, state.user_copies, state.bs_copy);
    return achievable_rate(channels, state.precoders, noise_power, problem.user_weights);
}

SolveResult solve(const PddProblem& problem, const SolverConfig& config,
                  const QuantizationConfig& quant,
                  const std::optional<PddState>& init) {
    if (config.penalty_shrink <= 0.0 || config.penalty_shrink >= 1.0) {
        throw std::invalid_argument("solve: penalty_shrink must lie in (0, 1)");
    }
    if (config.inner_tol <= 0.0 || config.outer_tol <= 0.0) {
        throw std::invalid_argument("solve: tolerances must be positive");
    }

    SolveResult result;
    PddState& state = result.state;
    state = init ? *init : initial_state(problem, config, quant);

    std::vector<CVec> channels =
        effective_channels(problem, state.user_polarformers, state.bs_polarformer);
    update_equalizers(state, channels, config.noise_power);
    update_mse_weights(state, channels, config.noise_power);

    double lagrangian_prev = augmented_lagrangian(state, problem, config.noise_power);
    for (int outer = 0; outer < config.max_outer; ++outer) {
        for (int inner = 0; inner < config.max_inner; ++inner) {
            update_user_polarformers(state, problem, config.noise_power);
            update_user_copies(state, quant);
            update_bs_polarformer(state, problem, config.noise_power);
            update_bs_copy(state, quant);
            channels = effective_channels(problem, state.user_polarformers, state.bs_polarformer);
            update_equalizers(state, channels, config.noise_power);
            update_mse_weights(state, channels, config.noise_power);
            if (config.optimize_precoders) {
                update_precoders(state, channels, problem, config.power_budget);
            }

            const double lagrangian = augmented_lagrangian(state, problem, config.noise_power);
            if (!std::isfinite(lagrangian)) {
                std::ostringstream dump;
                dump << "solve: non-finite Lagrangian at outer " << outer << " inner " << inner
                     << "; trace:\n"
                     << trace_to_csv(result.trace);
                throw std::runtime_error(dump.str());
            }
            result.trace.push_back({outer, inner, lagrangian,
                                    feasible_rate(state, problem, config.noise_power).weighted_sum,
                                    max_consensus_violation(state), state.penalty});
            ++result.inner_iterations;

            const double reduction = lagrangian_prev - lagrangian;
            lagrangian_prev = lagrangian;
            if (reduction <= config.inner_tol * std::max(1.0, std::abs(lagrangian_prev))) {
                break;
            }
        }

        dual_and_penalty_update(state, config.penalty_shrink);
        ++result.outer_iterations;
        lagrangian_prev = augmented_lagrangian(state, problem, config.noise_power);

        if (max_consensus_violation(state) < config.outer_tol) {
            result.converged = true;
            break;
        }
    }

    const RateReport report = feasible_rate(state, problem, config.noise_power);
    result.weighted_sum_rate = report.weighted_sum;
    result.per_user_rates = report.per_user;
    return result;
}

SolveResult solve_multistart(const PddProblem& problem, const SolverConfig& config,
                             const QuantizationConfig& quant) {
    const std::vector<PddState> starts = initial_states(problem, config, quant);
    SolveResult best;
    int inner_total = 0;
    int outer_total = 0;
    bool have_best = false;
    for (const PddState& start : starts) {
        SolveResult run = solve(problem, config, quant, start);
        inner_total += run.inner_iterations;
        outer_total += run.outer_iterations;
        if (!have_best || run.weighted_sum_rate > best.weighted_sum_rate) {
            best = std::move(run);
            have_best = true;
        }
    }
    best.inner_iterations = inner_total;
    best.outer_iterations = outer_total;
    return best;
}

std::string trace_to_csv(const std::vector<IterationRecord>& trace) {
    std::ostringstream out;
    out << "iteration,lagrangian,sum_rate,max_violation,penalty\n";
    out.precision(17);
    int iteration = 0;
    for (const IterationRecord& rec : trace) {
        out << iteration++ << ',' << rec.lagrangian << ',' << rec.sum_rate << ','
            << rec.max_violation << ',' << rec.penalty << '\n';
    }
    return out.str();
}

}  // namespace p6dma
