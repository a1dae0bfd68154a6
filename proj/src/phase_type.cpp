#include "ruin/phase_type.hpp"

#include <cmath>
#include <string>

#include "ruin/errors.hpp"

namespace ruin {

namespace {

// Pade(13,13) numerator coefficients (denominator uses the same set with alternating signs).
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// Largest ||A||_1 for which the unscaled Pade(13,13) approximant stays at double accuracy.
constexpr double kTheta13 = 5.371920351148152;

} // namespace

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& m, double t) {
    if (m.rows() != m.cols()) throw DimensionMismatch("matrix_exp: matrix must be square");
    const int d = static_cast<int>(m.rows());
    Eigen::MatrixXd A = m * t;

    const double norm = A.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
        A /= std::ldexp(1.0, squarings);
    }

    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd A2 = A * A;
    const Eigen::MatrixXd A4 = A2 * A2;
    const Eigen::MatrixXd A6 = A2 * A4;
    const Eigen::MatrixXd U =
        A * (A6 * (kPade13[13] * A6 + kPade13[11] * A4 + kPade13[9] * A2) +
             kPade13[7] * A6 + kPade13[5] * A4 + kPade13[3] * A2 + kPade13[1] * I);
    const Eigen::MatrixXd V =
        A6 * (kPade13[12] * A6 + kPade13[10] * A4 + kPade13[8] * A2) +
        kPade13[6] * A6 + kPade13[4] * A4 + kPade13[2] * A2 + kPade13[0] * I;

    Eigen::MatrixXd E = (V - U).partialPivLu().solve(V + U);
    for (int i = 0; i < squarings; ++i) E = E * E;
    return E;
}

PhaseType::PhaseType(Eigen::VectorXd alpha, Eigen::MatrixXd T)
    : d_(static_cast<int>(alpha.size())), alpha_(std::move(alpha)), T_(std::move(T)) {
    if (d_ < 1) throw ConfigError("phase-type: need at least one phase");
    if (T_.rows() != d_ || T_.cols() != d_)
        throw DimensionMismatch("phase-type: alpha has " + std::to_string(d_) +
                                " entries but T is " + std::to_string(T_.rows()) + "x" +
                                std::to_string(T_.cols()));
    if (alpha_.minCoeff() < 0.0) throw ConfigError("phase-type: alpha must be nonnegative");
    if (std::abs(alpha_.sum() - 1.0) > 1e-12)
        throw ConfigError("phase-type: alpha must sum to 1 (got " + std::to_string(alpha_.sum()) + ")");

    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j < d_; ++j) {
            if (i != j && T_(i, j) < 0.0)
                throw ConfigError("phase-type: off-diagonal T entries must be nonnegative");
        }
        if (T_(i, i) >= 0.0) throw ConfigError("phase-type: diagonal T entries must be negative");
        if (T_.row(i).sum() > 1e-12) throw ConfigError("phase-type: row sums of T must be <= 0");
    }

    exit_ = -(T_ * Eigen::VectorXd::Ones(d_));
    for (int i = 0; i < d_; ++i)
        if (exit_(i) < 0.0 && exit_(i) > -1e-12) exit_(i) = 0.0;

    eig_ = Eigen::EigenSolver<Eigen::MatrixXd>(T_).eigenvalues();
    if (eig_.real().maxCoeff() >= 0.0)
        throw ConfigError("phase-type: T must have eigenvalues with negative real part "
                          "(absorption unreachable from some phase)");
}

double PhaseType::cdf(double z) const {
    if (z < 0.0) throw NegativeArgument("phase-type cdf: negative argument");
    const double v = 1.0 - alpha_.dot(matrix_exp(T_, z) * Eigen::VectorXd::Ones(d_));
    return std::min(1.0, std::max(0.0, v));
}

double PhaseType::pdf(double z) const {
    if (z < 0.0) throw NegativeArgument("phase-type pdf: negative argument");
    return alpha_.dot(matrix_exp(T_, z) * exit_);
}

double PhaseType::moment(int n) const {
    if (n < 1) throw IndexOutOfRange("phase-type moment: order must be >= 1");
    Eigen::VectorXd v = Eigen::VectorXd::Ones(d_);
    const auto lu = (-T_).partialPivLu();
    double factorial = 1.0;
    for (int i = 1; i <= n; ++i) {
        v = lu.solve(v);
        factorial *= i;
    }
    return factorial * alpha_.dot(v);
}

double PhaseType::tail_cutoff(double eps) const {
    double hi = 1.0;
    while (cdf(hi) <= 1.0 - eps) hi *= 2.0;
    double lo = hi * 0.5;
    for (int i = 0; i < 80 && hi - lo > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) > 1.0 - eps ? hi : lo) = mid;
    }
    return hi;
}

double PhaseType::sample(Xoshiro256pp& rng) const {
    // pick the starting phase from alpha
    int phase = d_ - 1;
    double u = rng.uniform();
    for (int i = 0; i < d_; ++i) {
        u -= alpha_(i);
        if (u <= 0.0) {
            phase = i;
            break;
        }
    }

    double time = 0.0;
    while (true) {
        const double total = -T_(phase, phase);
        time += rng.exponential(total);
        double v = rng.uniform() * total;
        v -= exit_(phase);
        if (v <= 0.0) return time;   // absorbed
        int next = phase;
        for (int j = 0; j < d_; ++j) {
            if (j == phase) continue;
            v -= T_(phase, j);
            if (v <= 0.0) {
                next = j;
                break;
            }
        }
        phase = next;
    }
}

double PhaseType::rate() const {
    if (d_ != 1) throw NotExponentialClaims("rate(): claims distribution has more than one phase");
    return -T_(0, 0);
}

} // namespace ruin
