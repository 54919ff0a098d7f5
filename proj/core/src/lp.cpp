#include "lhvprobe/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lhvprobe {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-9;
constexpr double kFarkasStrict = 1e-7;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRefactorPeriod = 64;
constexpr int kMaxIterations = 50000;

enum class VarState { Basic, AtLower, AtUpper };

class Simplex {
public:
    explicit Simplex(const LpProblem& p)
        : m_(p.rows), n_(p.cols), total_(p.cols + p.rows) {
        cols_.assign(total_, std::vector<double>(m_, 0.0));
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t c = 0; c < n_; ++c) {
                cols_[c][r] = p.at(r, c);
            }
        }
        b_ = p.rhs;
        upper_.assign(total_, kInf);
        if (!p.upper_bounds.empty()) {
            for (std::size_t c = 0; c < n_; ++c) upper_[c] = p.upper_bounds[c];
        }
        // artificial for row r carries the sign of b_r so it starts feasible
        sign_.resize(m_);
        for (std::size_t r = 0; r < m_; ++r) {
            sign_[r] = (b_[r] >= 0.0) ? 1.0 : -1.0;
            cols_[n_ + r][r] = sign_[r];
        }

        state_.assign(total_, VarState::AtLower);
        x_.assign(total_, 0.0);
        basis_.resize(m_);
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            basis_[r] = n_ + r;
            state_[n_ + r] = VarState::Basic;
            x_[n_ + r] = std::abs(b_[r]);
            binv_[r * m_ + r] = sign_[r];
        }

        cost_.assign(total_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) cost_[n_ + r] = -1.0;
    }

    // phase 1: maximize -(sum of artificials); returns false on numerical
    // breakdown
    bool run_phase1() { return iterate(); }

    double artificial_sum() const {
        double s = 0.0;
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] >= n_) s += std::max(0.0, x_[basis_[r]]);
        }
        for (std::size_t j = n_; j < total_; ++j) {
            if (state_[j] != VarState::Basic) s += x_[j];
        }
        return s;
    }

    std::vector<double> phase1_multipliers() const { return btran(); }

    // switch to the real objective; artificials get pinned at zero
    void enter_phase2(const std::vector<double>& objective) {
        for (std::size_t j = 0; j < n_; ++j) cost_[j] = objective[j];
        for (std::size_t j = n_; j < total_; ++j) {
            cost_[j] = 0.0;
            upper_[j] = 0.0;
            if (state_[j] != VarState::Basic) x_[j] = 0.0;
        }
        // basic artificials of dependent rows sit at ~0; clamp the drift
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] >= n_ && std::abs(x_[basis_[r]]) <= kFeasTol) {
                x_[basis_[r]] = 0.0;
            }
        }
        stall_count_ = 0;
        bland_ = false;
    }

    bool run_phase2() { return iterate(); }

    bool unbounded() const { return unbounded_; }

    std::vector<double> structural_solution() const {
        return {x_.begin(), x_.begin() + static_cast<long>(n_)};
    }

private:
    std::size_t m_, n_, total_;
    std::vector<std::vector<double>> cols_;
    std::vector<double> b_;
    std::vector<double> sign_;
    std::vector<double> upper_;
    std::vector<double> cost_;
    std::vector<double> x_;
    std::vector<std::size_t> basis_;
    std::vector<VarState> state_;
    std::vector<double> binv_;  // row-major m x m
    bool bland_ = false;
    bool unbounded_ = false;
    int stall_count_ = 0;
    int pivots_since_refactor_ = 0;

    std::vector<double> btran() const {
        std::vector<double> y(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) y[k] += cb * row[k];
        }
        return y;
    }

    std::vector<double> ftran(std::size_t j) const {
        std::vector<double> w(m_, 0.0);
        const std::vector<double>& col = cols_[j];
        for (std::size_t k = 0; k < m_; ++k) {
            const double a = col[k];
            if (a == 0.0) continue;
            for (std::size_t i = 0; i < m_; ++i) {
                w[i] += binv_[i * m_ + k] * a;
            }
        }
        return w;
    }

    double objective_now() const {
        double z = 0.0;
        for (std::size_t j = 0; j < total_; ++j) {
            if (x_[j] != 0.0) z += cost_[j] * x_[j];
        }
        return z;
    }

    bool refactorize() {
        // rebuild binv_ from the basis by Gauss-Jordan with partial pivoting
        std::vector<double> work(m_ * 2 * m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            const std::vector<double>& col = cols_[basis_[r]];
            for (std::size_t i = 0; i < m_; ++i) {
                work[i * 2 * m_ + r] = col[i];
            }
            work[r * 2 * m_ + m_ + r] = 1.0;
        }
        for (std::size_t c = 0; c < m_; ++c) {
            std::size_t piv = c;
            double best = std::abs(work[c * 2 * m_ + c]);
            for (std::size_t r = c + 1; r < m_; ++r) {
                const double mag = std::abs(work[r * 2 * m_ + c]);
                if (mag > best) {
                    best = mag;
                    piv = r;
                }
            }
            if (best < 1e-12) return false;
            if (piv != c) {
                for (std::size_t k = 0; k < 2 * m_; ++k) {
                    std::swap(work[piv * 2 * m_ + k], work[c * 2 * m_ + k]);
                }
            }
            const double inv = 1.0 / work[c * 2 * m_ + c];
            for (std::size_t k = 0; k < 2 * m_; ++k) work[c * 2 * m_ + k] *= inv;
            for (std::size_t r = 0; r < m_; ++r) {
                if (r == c) continue;
                const double f = work[r * 2 * m_ + c];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < 2 * m_; ++k) {
                    work[r * 2 * m_ + k] -= f * work[c * 2 * m_ + k];
                }
            }
        }
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t k = 0; k < m_; ++k) {
                binv_[r * m_ + k] = work[r * 2 * m_ + m_ + k];
            }
        }
        recompute_basics();
        pivots_since_refactor_ = 0;
        return true;
    }

    void recompute_basics() {
        std::vector<double> tilde = b_;
        for (std::size_t j = 0; j < total_; ++j) {
            if (state_[j] == VarState::AtUpper && x_[j] != 0.0) {
                const std::vector<double>& col = cols_[j];
                for (std::size_t r = 0; r < m_; ++r) {
                    tilde[r] -= col[r] * x_[j];
                }
            }
        }
        for (std::size_t i = 0; i < m_; ++i) {
            double v = 0.0;
            const double* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) v += row[k] * tilde[k];
            x_[basis_[i]] = v;
        }
    }

    // core loop for the current cost vector; true on clean termination
    // (optimal or unbounded flag set), false on numerical breakdown
    bool iterate() {
        double z_prev = objective_now();
        for (int iter = 0; iter < kMaxIterations; ++iter) {
            const std::vector<double> y = btran();

            // pricing
            std::size_t enter = total_;
            double best_score = 0.0;
            for (std::size_t j = 0; j < total_; ++j) {
                if (state_[j] == VarState::Basic) continue;
                if (upper_[j] <= 0.0) continue;  // fixed at zero
                double d = cost_[j];
                const std::vector<double>& col = cols_[j];
                for (std::size_t r = 0; r < m_; ++r) {
                    if (col[r] != 0.0) d -= y[r] * col[r];
                }
                const bool from_lower = state_[j] == VarState::AtLower;
                const bool eligible =
                    from_lower ? d > kPivotTol : d < -kPivotTol;
                if (!eligible) continue;
                if (bland_) {
                    enter = j;
                    break;
                }
                const double score = std::abs(d);
                if (score > best_score) {
                    best_score = score;
                    enter = j;
                }
            }
            if (enter == total_) return true;  // optimal for this phase

            const bool from_lower = state_[enter] == VarState::AtLower;
            const std::vector<double> w = ftran(enter);

            // ratio test: t is how far the entering variable moves off its
            // bound; basic slot i changes at rate -delta_i
            double t_basic = kInf;
            std::size_t leave_slot = m_;
            bool leave_to_upper = false;
            double leave_mag = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double delta = from_lower ? w[i] : -w[i];
                const std::size_t bj = basis_[i];
                double limit;
                bool to_upper;
                if (delta > kPivotTol) {
                    limit = std::max(0.0, x_[bj]) / delta;
                    to_upper = false;
                } else if (delta < -kPivotTol && upper_[bj] < kInf) {
                    limit = std::max(0.0, upper_[bj] - x_[bj]) / (-delta);
                    to_upper = true;
                } else {
                    continue;
                }
                bool take;
                if (leave_slot == m_ || limit < t_basic - 1e-12) {
                    take = true;
                } else if (limit <= t_basic + 1e-12) {
                    take = bland_ ? bj < basis_[leave_slot]
                                  : std::abs(w[i]) > leave_mag;
                } else {
                    take = false;
                }
                if (take) {
                    t_basic = std::min(limit, t_basic);
                    leave_slot = i;
                    leave_to_upper = to_upper;
                    leave_mag = std::abs(w[i]);
                }
            }

            const double t_bound = upper_[enter];  // kInf when unbounded above
            if (t_basic >= kInf && t_bound >= kInf) {
                unbounded_ = true;
                return true;
            }
            const bool bound_flip = t_bound <= t_basic;
            const double t = std::max(0.0, bound_flip ? t_bound : t_basic);

            // apply the step to the basic values
            for (std::size_t i = 0; i < m_; ++i) {
                const double delta = from_lower ? w[i] : -w[i];
                if (delta != 0.0) x_[basis_[i]] -= t * delta;
            }

            if (bound_flip) {
                // entering variable runs to its other bound
                state_[enter] = from_lower ? VarState::AtUpper : VarState::AtLower;
                x_[enter] = from_lower ? upper_[enter] : 0.0;
            } else {
                // pivot: entering becomes basic, slot's variable leaves
                const std::size_t leaving = basis_[leave_slot];
                state_[leaving] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
                x_[leaving] = leave_to_upper ? upper_[leaving] : 0.0;

                x_[enter] = from_lower ? t : upper_[enter] - t;
                state_[enter] = VarState::Basic;
                basis_[leave_slot] = enter;

                // eta update of binv_
                const double wr = w[leave_slot];
                if (std::abs(wr) < kPivotTol) {
                    if (!refactorize()) return false;
                } else {
                    double* prow = &binv_[leave_slot * m_];
                    for (std::size_t k = 0; k < m_; ++k) prow[k] /= wr;
                    for (std::size_t i = 0; i < m_; ++i) {
                        if (i == leave_slot) continue;
                        const double f = w[i];
                        if (f == 0.0) continue;
                        double* row = &binv_[i * m_];
                        for (std::size_t k = 0; k < m_; ++k) {
                            row[k] -= f * prow[k];
                        }
                    }
                    if (++pivots_since_refactor_ >= kRefactorPeriod) {
                        if (!refactorize()) return false;
                    }
                }
            }

            const double z = objective_now();
            if (z > z_prev + 1e-12) {
                stall_count_ = 0;
            } else if (!bland_) {
                if (++stall_count_ > 2 * static_cast<int>(total_)) {
                    bland_ = true;
                }
            }
            z_prev = z;
        }
        return false;  // iteration budget exhausted
    }
};

double verify_residual(const LpProblem& p, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t r = 0; r < p.rows; ++r) {
        double lhs = 0.0;
        for (std::size_t c = 0; c < p.cols; ++c) lhs += p.at(r, c) * x[c];
        worst = std::max(worst, std::abs(lhs - p.rhs[r]));
    }
    return worst;
}

bool verify_bounds(const LpProblem& p, const std::vector<double>& x) {
    for (std::size_t c = 0; c < p.cols; ++c) {
        if (x[c] < -kFeasTol) return false;
        if (!p.upper_bounds.empty() && x[c] > p.upper_bounds[c] + kFeasTol) {
            return false;
        }
    }
    return true;
}

// Farkas witness check, generalized to finite upper bounds:
// y'b - sum_j u_j max(0, y'A_j) must be strictly positive, and columns
// without an upper bound must satisfy y'A_j <= tolerance.
bool verify_farkas(const LpProblem& p, const std::vector<double>& y) {
    double gap = 0.0;
    for (std::size_t r = 0; r < p.rows; ++r) gap += y[r] * p.rhs[r];
    for (std::size_t c = 0; c < p.cols; ++c) {
        double ya = 0.0;
        for (std::size_t r = 0; r < p.rows; ++r) ya += y[r] * p.at(r, c);
        const double ub =
            p.upper_bounds.empty() ? kInf : p.upper_bounds[c];
        if (ub >= kInf) {
            if (ya > kFeasTol) return false;
        } else if (ya > 0.0) {
            gap -= ub * ya;
        }
    }
    return gap >= kFarkasStrict;
}

}  // namespace

LpOutcome solve(const LpProblem& p) {
    if (p.rows == 0 || p.cols == 0 || p.matrix.size() != p.rows * p.cols ||
        p.rhs.size() != p.rows || p.objective.size() != p.cols ||
        (!p.upper_bounds.empty() && p.upper_bounds.size() != p.cols)) {
        throw std::invalid_argument("malformed LP problem");
    }
    for (double v : p.matrix) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite LP entry");
    }

    LpOutcome out;
    Simplex engine(p);

    if (!engine.run_phase1()) {
        out.status = LpStatus::NumericalFailure;
        return out;
    }

    if (engine.artificial_sum() > kFeasTol) {
        // negated phase-1 multipliers are the Farkas dual
        std::vector<double> y = engine.phase1_multipliers();
        for (double& v : y) v = -v;
        double scale = 0.0;
        for (double v : y) scale = std::max(scale, std::abs(v));
        if (scale > 0.0) {
            for (double& v : y) v /= scale;
        }
        if (!verify_farkas(p, y)) {
            out.status = LpStatus::NumericalFailure;
            return out;
        }
        out.status = LpStatus::Infeasible;
        out.farkas_dual = std::move(y);
        return out;
    }

    engine.enter_phase2(p.objective);
    if (!engine.run_phase2()) {
        out.status = LpStatus::NumericalFailure;
        return out;
    }
    if (engine.unbounded()) {
        out.status = LpStatus::Unbounded;
        return out;
    }

    std::vector<double> x = engine.structural_solution();
    for (double& v : x) {
        if (v < 0.0 && v > -kFeasTol) v = 0.0;
    }
    const double residual = verify_residual(p, x);
    if (residual > kFeasTol || !verify_bounds(p, x)) {
        out.status = LpStatus::NumericalFailure;
        out.residual = residual;
        return out;
    }
    double z = 0.0;
    for (std::size_t c = 0; c < p.cols; ++c) z += p.objective[c] * x[c];

    out.status = LpStatus::FeasibleOptimal;
    out.solution = std::move(x);
    out.objective_value = z;
    out.residual = residual;
    return out;
}

}  // namespace lhvprobe
