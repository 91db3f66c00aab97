#pragma once

#include "sparsefront/objectives.hpp"

#include <chrono>
#include <limits>

namespace sparsefront {

struct ArmijoParams {
    double delta = 0.5;
    double gamma = 1e-4;
    int h_max = 30;
};

struct StepResult {
    double alpha = 0.0;
    VectorXd F;       // objective values at x + alpha v (at x when alpha = 0)
    bool found = false;
};

/// Largest delta^h, h = 0..h_max, with F(x + a v) <= F(x) + gamma a theta
/// componentwise. Requires theta < 0.
StepResult armijo_full(const MultiObjective& obj, const VectorXd& x, const VectorXd& v, double theta,
                       const VectorXd& Fx, const ArmijoParams& params = {});

/// Snaps tiny negative weights produced by the QP back to zero.
void clean_weights(VectorXd& x);

/// Wall-clock and iteration budget, checked between outer iterations only.
struct Budget {
    double seconds = std::numeric_limits<double>::infinity();
    long iterations = std::numeric_limits<long>::max();

    static Budget iterations_only(long it) { return {std::numeric_limits<double>::infinity(), it}; }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    bool exceeded(const Budget& b, long iterations) const {
        return iterations >= b.iterations || elapsed() >= b.seconds;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace sparsefront
