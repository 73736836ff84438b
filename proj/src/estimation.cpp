#include "markhawkes/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "markhawkes/mark_model.hpp"
#include "markhawkes/random.hpp"

namespace markhawkes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logistic(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

// Softmax over (x_0, ..., x_{M-2}, 0).
void softmax_row(const double* logits, std::size_t marks, double* out) {
    double largest = 0.0;
    for (std::size_t k = 0; k + 1 < marks; ++k) {
        largest = std::max(largest, logits[k]);
    }
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < marks; ++k) {
        out[k] = std::exp(logits[k] - largest);
        total += out[k];
    }
    out[marks - 1] = std::exp(-largest);
    total += out[marks - 1];
    for (std::size_t k = 0; k < marks; ++k) {
        out[k] /= total;
    }
}

void logits_from_row(std::span<const double> row, double* out) {
    const double reference = std::log(row.back());
    for (std::size_t k = 0; k + 1 < row.size(); ++k) {
        out[k] = std::log(row[k]) - reference;
    }
}

// d loglik / d x_k for a softmax row, given d loglik / d p_m.
void chain_softmax(std::span<const double> probs, std::span<const double> natural_grad, double* out) {
    double mean = 0.0;
    for (std::size_t m = 0; m < probs.size(); ++m) {
        mean += natural_grad[m] * probs[m];
    }
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
        out[k] = probs[k] * (natural_grad[k] - mean);
    }
}

bool row_on_boundary(std::span<const double> row) {
    return std::any_of(row.begin(), row.end(),
                       [](double p) { return p < kBoundaryThreshold || p > 1.0 - kBoundaryThreshold; });
}

ParameterInterval degenerate(std::string name, double value) {
    return ParameterInterval{std::move(name), value, value, value, true};
}

ParameterInterval log_scale_interval(std::string name, double value, double variance) {
    if (value < kBoundaryThreshold) {
        return degenerate(std::move(name), value);
    }
    const double se = std::sqrt(std::max(0.0, variance));
    const double u = std::log(value);
    return ParameterInterval{std::move(name), value, std::exp(u - kZ95 * se), std::exp(u + kZ95 * se), false};
}

ParameterInterval logit_scale_interval(std::string name, double value, double variance) {
    const double se = std::sqrt(std::max(0.0, variance));
    const double u = logit(value);
    return ParameterInterval{std::move(name), value, logistic(u - kZ95 * se), logistic(u + kZ95 * se), false};
}

template <class Objective>
Vector best_of_restarts(const Objective& objective,
                        const Vector& base,
                        std::size_t restarts,
                        double jitter,
                        std::uint64_t seed,
                        const OptimizerConfig& optimizer,
                        OptimizeResult& best) {
    best.value = kNegInf;
    bool have = false;
    for (std::size_t k = 0; k < std::max<std::size_t>(1, restarts); ++k) {
        Vector start = base;
        if (k > 0) {
            Rng rng(derive_seed(seed, k));
            std::normal_distribution<double> noise(0.0, jitter);
            for (Eigen::Index i = 0; i < start.size(); ++i) {
                start[i] += noise(rng);
            }
        }
        Vector probe;
        if (!std::isfinite(objective(start, &probe))) {
            continue;
        }
        OptimizeResult run = maximize_bfgs(objective, start, optimizer);
        if (!have || run.value > best.value) {
            best = std::move(run);
            have = true;
        }
    }
    if (!have) {
        throw std::domain_error("no restart produced a finite objective");
    }
    return best.x;
}

} // namespace

// ---------------------------------------------------------------------------
// MarkParamTransform

MarkParamTransform::MarkParamTransform(int mark_count, int covariate_count)
    : mark_count_(mark_count), covariate_count_(covariate_count) {
    if (mark_count < 2 || covariate_count < 1) {
        throw ValidationError(fmt::format("invalid dimensions M={}, Z={}", mark_count, covariate_count));
    }
}

std::size_t MarkParamTransform::size() const {
    const auto m = static_cast<std::size_t>(mark_count_);
    const auto z = static_cast<std::size_t>(covariate_count_);
    return z * (m - 1) + z * m * (m - 1) + 2;
}

std::size_t MarkParamTransform::delta_offset(std::size_t z) const {
    return z * static_cast<std::size_t>(mark_count_ - 1);
}

std::size_t MarkParamTransform::gamma_offset(std::size_t z, std::size_t r) const {
    const auto m = static_cast<std::size_t>(mark_count_);
    const auto zc = static_cast<std::size_t>(covariate_count_);
    return zc * (m - 1) + (z * m + r) * (m - 1);
}

std::size_t MarkParamTransform::alpha_star_index() const { return size() - 2; }
std::size_t MarkParamTransform::beta_index() const { return size() - 1; }

Vector MarkParamTransform::to_unconstrained(const MarkModelParams& params) const {
    if (params.mark_count() != mark_count_ || params.covariate_count() != covariate_count_) {
        throw ValidationError("parameter dimensions do not match transform");
    }
    const auto m = static_cast<std::size_t>(mark_count_);
    Vector x(static_cast<Eigen::Index>(size()));
    for (std::size_t z = 0; z < static_cast<std::size_t>(covariate_count_); ++z) {
        logits_from_row(params.delta_row(z), x.data() + delta_offset(z));
        for (std::size_t r = 0; r < m; ++r) {
            logits_from_row(params.gamma_row(z, r), x.data() + gamma_offset(z, r));
        }
    }
    x[static_cast<Eigen::Index>(alpha_star_index())] = std::log(params.alpha_star());
    x[static_cast<Eigen::Index>(beta_index())] = std::log(params.beta());
    return x;
}

MarkModelParams MarkParamTransform::to_natural(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != size()) {
        throw ValidationError(fmt::format("expected {} free parameters, got {}", size(), x.size()));
    }
    const auto m = static_cast<std::size_t>(mark_count_);
    const auto zc = static_cast<std::size_t>(covariate_count_);
    std::vector<double> delta(zc * m);
    std::vector<double> gamma(zc * m * m);
    for (std::size_t z = 0; z < zc; ++z) {
        softmax_row(x.data() + delta_offset(z), m, delta.data() + z * m);
        for (std::size_t r = 0; r < m; ++r) {
            softmax_row(x.data() + gamma_offset(z, r), m, gamma.data() + (z * m + r) * m);
        }
    }
    return MarkModelParams(std::exp(x[static_cast<Eigen::Index>(alpha_star_index())]),
                           std::exp(x[static_cast<Eigen::Index>(beta_index())]), mark_count_, covariate_count_,
                           std::move(delta), std::move(gamma));
}

std::vector<std::string> MarkParamTransform::coordinate_names() const {
    std::vector<std::string> names(size());
    const auto m = static_cast<std::size_t>(mark_count_);
    for (std::size_t z = 0; z < static_cast<std::size_t>(covariate_count_); ++z) {
        for (std::size_t k = 0; k + 1 < m; ++k) {
            names[delta_offset(z) + k] = fmt::format("logit delta[{}|{}]", k + 1, z + 1);
            for (std::size_t r = 0; r < m; ++r) {
                names[gamma_offset(z, r) + k] = fmt::format("logit gamma[{}->{}|{}]", r + 1, k + 1, z + 1);
            }
        }
    }
    names[alpha_star_index()] = "log alpha_star";
    names[beta_index()] = "log beta";
    return names;
}

// ---------------------------------------------------------------------------
// Mark likelihood

double mark_log_likelihood(const EventSequence& sequence, const MarkModelParams& params) {
    double total = 0.0;
    ExcitationState state(params.mark_count());
    for (const Event& e : sequence) {
        const auto dist = mark_probability_stream(state, e.time, e.covariate, params);
        const double p = dist.of(e.mark);
        if (!(p > 0.0)) {
            return kNegInf;
        }
        total += std::log(p);
        advance(state, e.time, e.mark, params.beta());
    }
    return total;
}

double mark_log_likelihood_unconstrained(const EventSequence& sequence,
                                         const MarkParamTransform& transform,
                                         const Vector& x,
                                         Vector* gradient) {
    const double log_alpha = x[static_cast<Eigen::Index>(transform.alpha_star_index())];
    const double log_beta = x[static_cast<Eigen::Index>(transform.beta_index())];
    if (!x.allFinite() || std::abs(log_alpha) > 700.0 || std::abs(log_beta) > 700.0) {
        if (gradient) {
            gradient->setConstant(static_cast<Eigen::Index>(transform.size()),
                                  std::numeric_limits<double>::quiet_NaN());
        }
        return kNegInf;
    }
    const MarkModelParams params = transform.to_natural(x);
    const auto M = static_cast<std::size_t>(params.mark_count());
    const auto Z = static_cast<std::size_t>(params.covariate_count());
    const double a = params.alpha_star();
    const double beta = params.beta();

    std::vector<double> R(M, 0.0);  // decayed sums
    std::vector<double> S(M, 0.0);  // d R / d beta
    std::vector<double> E(M), F(M), N(M), w(M);

    double g_alpha = 0.0;
    double g_beta = 0.0;
    std::vector<double> g_delta(gradient ? Z * M : 0, 0.0);
    std::vector<double> g_gamma(gradient ? Z * M * M : 0, 0.0);

    double total = 0.0;
    double last = 0.0;
    bool started = false;
    for (const Event& e : sequence) {
        if (e.covariate < 1 || static_cast<std::size_t>(e.covariate) > Z || e.mark < 1 ||
            static_cast<std::size_t>(e.mark) > M) {
            throw ValidationError("sequence does not match parameter dimensions");
        }
        if (started) {
            const double dt = e.time - last;
            const double factor = std::exp(-beta * dt);
            for (std::size_t r = 0; r < M; ++r) {
                S[r] = factor * (S[r] - dt * R[r]);
                R[r] *= factor;
            }
        }
        const std::size_t z = e.covariate_index();
        const std::size_t mi = e.mark_index();
        double D = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            double em = 0.0;
            double fm = 0.0;
            for (std::size_t r = 0; r < M; ++r) {
                const double g = params.gamma(z, r, m);
                em += R[r] * g;
                fm += S[r] * g;
            }
            E[m] = em;
            F[m] = fm;
            N[m] = params.delta(z, m) + a * em;
            D += N[m];
        }
        if (!(N[mi] > 0.0)) {
            if (gradient) {
                gradient->setConstant(static_cast<Eigen::Index>(transform.size()),
                                      std::numeric_limits<double>::quiet_NaN());
            }
            return kNegInf;
        }
        total += std::log(N[mi]) - std::log(D);

        if (gradient) {
            for (std::size_t m = 0; m < M; ++m) {
                w[m] = (m == mi ? 1.0 / N[mi] : 0.0) - 1.0 / D;
                g_alpha += w[m] * E[m];
                g_beta += a * w[m] * F[m];
                g_delta[z * M + m] += w[m];
            }
            for (std::size_t r = 0; r < M; ++r) {
                if (R[r] == 0.0) {
                    continue;
                }
                for (std::size_t m = 0; m < M; ++m) {
                    g_gamma[(z * M + r) * M + m] += a * R[r] * w[m];
                }
            }
        }

        R[mi] += 1.0;
        last = e.time;
        started = true;
    }

    if (gradient) {
        gradient->resize(static_cast<Eigen::Index>(transform.size()));
        for (std::size_t z = 0; z < Z; ++z) {
            chain_softmax(params.delta_row(z), std::span<const double>(g_delta.data() + z * M, M),
                          gradient->data() + transform.delta_offset(z));
            for (std::size_t r = 0; r < M; ++r) {
                chain_softmax(params.gamma_row(z, r),
                              std::span<const double>(g_gamma.data() + (z * M + r) * M, M),
                              gradient->data() + transform.gamma_offset(z, r));
            }
        }
        (*gradient)[static_cast<Eigen::Index>(transform.alpha_star_index())] = a * g_alpha;
        (*gradient)[static_cast<Eigen::Index>(transform.beta_index())] = beta * g_beta;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Intervals

std::vector<bool> boundary_coordinates(const MarkModelParams& params, const MarkParamTransform& transform) {
    std::vector<bool> masked(transform.size(), false);
    const auto M = static_cast<std::size_t>(params.mark_count());
    auto mask_row = [&](std::size_t offset) {
        for (std::size_t k = 0; k + 1 < M; ++k) {
            masked[offset + k] = true;
        }
    };
    for (std::size_t z = 0; z < static_cast<std::size_t>(params.covariate_count()); ++z) {
        if (row_on_boundary(params.delta_row(z))) {
            mask_row(transform.delta_offset(z));
        }
        for (std::size_t r = 0; r < M; ++r) {
            if (row_on_boundary(params.gamma_row(z, r))) {
                mask_row(transform.gamma_offset(z, r));
            }
        }
    }
    if (params.alpha_star() < kBoundaryThreshold) {
        masked[transform.alpha_star_index()] = true;
    }
    return masked;
}

CovarianceEstimate masked_covariance(const Matrix& hessian, const std::vector<bool>& masked) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < hessian.rows(); ++i) {
        if (!masked[static_cast<std::size_t>(i)]) {
            keep.push_back(i);
        }
    }
    const auto k = static_cast<Eigen::Index>(keep.size());
    Matrix reduced(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            reduced(i, j) = hessian(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
        }
    }
    const CovarianceEstimate inner = observed_information_covariance(reduced);
    CovarianceEstimate out;
    out.singular = inner.singular;
    out.covariance = Matrix::Zero(hessian.rows(), hessian.cols());
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            out.covariance(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]) =
                inner.covariance(i, j);
        }
    }
    return out;
}

std::vector<ParameterInterval> mark_confidence_intervals(const MarkModelParams& params,
                                                         const Matrix& covariance,
                                                         const MarkParamTransform& transform) {
    const auto M = static_cast<std::size_t>(params.mark_count());
    std::vector<ParameterInterval> out;

    // logit(p_m) has gradient ([m = k] - p_k) / (1 - p_m) w.r.t. row logit k.
    auto row_intervals = [&](std::span<const double> row, std::size_t offset, auto&& name_of) {
        const bool boundary = row_on_boundary(row);
        for (std::size_t m = 0; m < M; ++m) {
            if (boundary) {
                out.push_back(degenerate(name_of(m), row[m]));
                continue;
            }
            Vector g = Vector::Zero(static_cast<Eigen::Index>(M - 1));
            for (std::size_t k = 0; k + 1 < M; ++k) {
                g[static_cast<Eigen::Index>(k)] = ((m == k ? 1.0 : 0.0) - row[k]) / (1.0 - row[m]);
            }
            const auto o = static_cast<Eigen::Index>(offset);
            const auto w = static_cast<Eigen::Index>(M - 1);
            const double variance = g.dot(covariance.block(o, o, w, w) * g);
            out.push_back(logit_scale_interval(name_of(m), row[m], variance));
        }
    };

    for (std::size_t z = 0; z < static_cast<std::size_t>(params.covariate_count()); ++z) {
        row_intervals(params.delta_row(z), transform.delta_offset(z),
                      [&](std::size_t m) { return fmt::format("delta[{}|{}]", m + 1, z + 1); });
    }
    const auto ai = static_cast<Eigen::Index>(transform.alpha_star_index());
    const auto bi = static_cast<Eigen::Index>(transform.beta_index());
    out.push_back(log_scale_interval("alpha_star", params.alpha_star(), covariance(ai, ai)));
    out.push_back(log_scale_interval("beta", params.beta(), covariance(bi, bi)));
    for (std::size_t z = 0; z < static_cast<std::size_t>(params.covariate_count()); ++z) {
        for (std::size_t r = 0; r < M; ++r) {
            row_intervals(params.gamma_row(z, r), transform.gamma_offset(z, r), [&](std::size_t c) {
                return fmt::format("gamma[{}->{}|{}]", r + 1, c + 1, z + 1);
            });
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mark model fit

MarkFitResult fit_mark_model(const EventSequence& train, const MarkFitConfig& config) {
    const int M = train.mark_count();
    const int Z = train.covariate_count();
    const auto Mu = static_cast<std::size_t>(M);
    const auto Zu = static_cast<std::size_t>(Z);

    std::vector<double> mark_totals(Mu, 0.0);
    std::vector<double> counts(Zu * Mu, 0.0);
    for (const Event& e : train) {
        mark_totals[e.mark_index()] += 1.0;
        counts[e.covariate_index() * Mu + e.mark_index()] += 1.0;
    }
    for (std::size_t m = 0; m < Mu; ++m) {
        if (mark_totals[m] < 2.0) {
            throw ValidationError(fmt::format("training data has {} events of mark {}; at least 2 required",
                                              mark_totals[m], m + 1));
        }
    }

    // Empirical per-covariate mark frequencies, smoothed so no entry is zero.
    std::vector<double> delta(Zu * Mu);
    std::vector<double> gamma(Zu * Mu * Mu);
    for (std::size_t z = 0; z < Zu; ++z) {
        double n_z = 0.0;
        for (std::size_t m = 0; m < Mu; ++m) {
            n_z += counts[z * Mu + m];
        }
        for (std::size_t m = 0; m < Mu; ++m) {
            const double p = (counts[z * Mu + m] + 0.5) / (n_z + 0.5 * static_cast<double>(Mu));
            delta[z * Mu + m] = p;
            for (std::size_t r = 0; r < Mu; ++r) {
                gamma[(z * Mu + r) * Mu + m] = p;
            }
        }
    }
    const MarkModelParams initial(config.initial_alpha_star, config.initial_beta, M, Z, std::move(delta),
                                  std::move(gamma));
    const MarkParamTransform transform(M, Z);

    const DifferentiableObjective objective = [&](const Vector& x, Vector* grad) {
        return mark_log_likelihood_unconstrained(train, transform, x, grad);
    };

    OptimizeResult best;
    best_of_restarts(objective, transform.to_unconstrained(initial), config.restarts, config.jitter, config.seed,
                     config.optimizer, best);

    MarkFitResult result;
    result.params = transform.to_natural(best.x);
    result.log_likelihood = best.value;
    result.free_parameters = best.x;
    result.converged = best.converged;
    result.iterations = best.iterations;
    result.seed = config.seed;
    result.restarts = std::max<std::size_t>(1, config.restarts);

    const Matrix hessian = hessian_from_gradient(objective, best.x, config.hessian_step);
    const auto masked = boundary_coordinates(result.params, transform);
    const CovarianceEstimate cov = masked_covariance(hessian, masked);
    result.covariance = cov.covariance;
    result.hessian_singular = cov.singular;
    result.ci95 = mark_confidence_intervals(result.params, result.covariance, transform);
    return result;
}

// ---------------------------------------------------------------------------
// Poisson

PoissonFit fit_poisson(std::size_t count, double horizon) {
    if (!(horizon > 0.0)) {
        throw ValidationError(fmt::format("horizon must be positive, got {}", horizon));
    }
    PoissonFit fit;
    fit.count = count;
    fit.horizon = horizon;
    const auto n = static_cast<double>(count);
    fit.rate = n / horizon;
    const double half_width = kZ95 * std::sqrt(n) / horizon;
    fit.lower = std::max(0.0, fit.rate - half_width);
    fit.upper = fit.rate + half_width;
    return fit;
}

// ---------------------------------------------------------------------------
// Unmarked Hawkes

Vector hawkes_to_unconstrained(const UnmarkedHawkesParams& params) {
    Vector x(3);
    x << std::log(params.mu), logit(params.alpha), std::log(params.beta);
    return x;
}

UnmarkedHawkesParams hawkes_to_natural(const Vector& x) {
    return UnmarkedHawkesParams{std::exp(x[0]), logistic(x[1]), std::exp(x[2])};
}

namespace {

struct HawkesTerms {
    double value{0.0};
    double d_mu{0.0};
    double d_alpha{0.0};
    double d_beta{0.0};
};

HawkesTerms hawkes_terms(std::span<const double> times, double T, const UnmarkedHawkesParams& p) {
    HawkesTerms out;
    double A = 0.0;
    double B = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0) {
            const double dt = times[i] - times[i - 1];
            const double factor = std::exp(-p.beta * dt);
            B = factor * (B - dt * (1.0 + A));
            A = factor * (1.0 + A);
        }
        const double lambda = p.mu + p.alpha * p.beta * A;
        if (!(lambda > 0.0)) {
            out.value = kNegInf;
            return out;
        }
        out.value += std::log(lambda);
        out.d_mu += 1.0 / lambda;
        out.d_alpha += p.beta * A / lambda;
        out.d_beta += p.alpha * (A + p.beta * B) / lambda;

        const double tail = T - times[i];
        const double decay = std::exp(-p.beta * tail);
        out.value -= p.alpha * (1.0 - decay);
        out.d_alpha -= 1.0 - decay;
        out.d_beta -= p.alpha * tail * decay;
    }
    out.value -= p.mu * T;
    out.d_mu -= T;
    return out;
}

} // namespace

double hawkes_log_likelihood(std::span<const double> times, double horizon, const UnmarkedHawkesParams& params) {
    return hawkes_terms(times, horizon, params).value;
}

double hawkes_log_likelihood_unconstrained(std::span<const double> times,
                                           double horizon,
                                           const Vector& x,
                                           Vector* gradient) {
    if (!x.allFinite() || std::abs(x[0]) > 700.0 || std::abs(x[2]) > 700.0) {
        if (gradient) {
            gradient->setConstant(3, std::numeric_limits<double>::quiet_NaN());
        }
        return kNegInf;
    }
    const UnmarkedHawkesParams p = hawkes_to_natural(x);
    const HawkesTerms terms = hawkes_terms(times, horizon, p);
    if (gradient) {
        gradient->resize(3);
        (*gradient)[0] = p.mu * terms.d_mu;
        (*gradient)[1] = p.alpha * (1.0 - p.alpha) * terms.d_alpha;
        (*gradient)[2] = p.beta * terms.d_beta;
    }
    return terms.value;
}

HawkesFitResult fit_unmarked_hawkes(std::span<const double> times, double horizon, const HawkesFitConfig& config) {
    if (times.size() < 10) {
        throw ValidationError(fmt::format("Hawkes fit needs at least 10 events, got {}", times.size()));
    }
    if (!(horizon >= times.back())) {
        throw ValidationError("horizon precedes the last event");
    }
    const double rate = static_cast<double>(times.size()) / horizon;
    const UnmarkedHawkesParams initial{0.5 * rate, 0.5, rate};

    const DifferentiableObjective objective = [&](const Vector& x, Vector* grad) {
        return hawkes_log_likelihood_unconstrained(times, horizon, x, grad);
    };
    OptimizeResult best;
    best_of_restarts(objective, hawkes_to_unconstrained(initial), config.restarts, config.jitter, config.seed,
                     config.optimizer, best);

    HawkesFitResult result;
    result.params = hawkes_to_natural(best.x);
    result.log_likelihood = best.value;
    result.free_parameters = best.x;
    result.converged = best.converged;
    result.iterations = best.iterations;
    result.seed = config.seed;
    result.restarts = std::max<std::size_t>(1, config.restarts);

    const Matrix hessian = hessian_from_gradient(objective, best.x, config.hessian_step);
    const CovarianceEstimate cov = observed_information_covariance(hessian);
    result.covariance = cov.covariance;
    result.hessian_singular = cov.singular;
    result.ci95.push_back(log_scale_interval("mu", result.params.mu, cov.covariance(0, 0)));
    if (result.params.alpha < kBoundaryThreshold || result.params.alpha > 1.0 - kBoundaryThreshold) {
        result.ci95.push_back(degenerate("alpha", result.params.alpha));
    } else {
        result.ci95.push_back(logit_scale_interval("alpha", result.params.alpha, cov.covariance(1, 1)));
    }
    result.ci95.push_back(log_scale_interval("beta", result.params.beta, cov.covariance(2, 2)));
    return result;
}

} // namespace markhawkes
