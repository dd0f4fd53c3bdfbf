#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>

namespace mcl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

template <typename T>
using VecX = Eigen::VectorX<T>;
template <typename T>
using MatX = Eigen::MatrixX<T>;

// Solver / validation failures. Each carries enough context to report.
struct NoConvergence : std::runtime_error {
    int iterations;
    double residual;
    NoConvergence(int it, double res)
        : std::runtime_error("equilibrium Newton stalled after " + std::to_string(it) +
                             " iterations, residual " + std::to_string(res)),
          iterations(it), residual(res) {}
};

struct PinchOff : std::runtime_error {
    PinchOff(double minh)
        : std::runtime_error("surface pinch-off: min height " + std::to_string(minh)) {}
};

struct ChainViolation : std::runtime_error {
    std::string which;
    explicit ChainViolation(std::string w)
        : std::runtime_error("index chain violation: " + w), which(std::move(w)) {}
};

struct IndexOutOfRange : std::runtime_error {
    explicit IndexOutOfRange(const std::string& w) : std::runtime_error("index out of range: " + w) {}
};

struct DegenerateMap : std::runtime_error {
    double min_jacobian;
    explicit DegenerateMap(double minj)
        : std::runtime_error("flattening map degenerate: min J = " + std::to_string(minj)),
          min_jacobian(minj) {}
};

struct EigensolveFailure : std::runtime_error {
    explicit EigensolveFailure(const std::string& w) : std::runtime_error("eigensolve failed: " + w) {}
};

struct SubspaceTooSmall : std::runtime_error {
    int requested, available;
    SubspaceTooSmall(int req, int avail)
        : std::runtime_error("constrained subspace dimension " + std::to_string(avail) +
                             " < requested basis size " + std::to_string(req)),
          requested(req), available(avail) {}
};

struct SingularStepMatrix : std::runtime_error {
    double rcond;
    explicit SingularStepMatrix(double rc)
        : std::runtime_error("time-step matrix singular (rcond ~ " + std::to_string(rc) + ")"),
          rcond(rc) {}
};

struct HistoryGap : std::runtime_error {
    HistoryGap() : std::runtime_error("trajectory history incomplete") {}
};

struct SaddlePointSolveFailure : std::runtime_error {
    explicit SaddlePointSolveFailure(const std::string& w)
        : std::runtime_error("pressure saddle solve failed: " + w) {}
};

struct CompatibilityFailure : std::runtime_error {
    std::string condition;
    explicit CompatibilityFailure(std::string c)
        : std::runtime_error("initial-data compatibility violated: " + c), condition(std::move(c)) {}
};

struct SmallnessViolation : std::runtime_error {
    explicit SmallnessViolation(double norm, double bound)
        : std::runtime_error("initial surface too large: " + std::to_string(norm) + " > " +
                             std::to_string(bound)) {}
};

struct NotContracting : std::runtime_error {
    explicit NotContracting(double ratio)
        : std::runtime_error("fixed-point iteration not contracting (ratio " +
                             std::to_string(ratio) + ")") {}
};

struct MaxIterExceeded : std::runtime_error {
    explicit MaxIterExceeded(int n)
        : std::runtime_error("fixed-point iteration exceeded " + std::to_string(n) + " iterations") {}
};

struct DegenerateSeries : std::runtime_error {
    DegenerateSeries() : std::runtime_error("energy series hit zero or numerical floor") {}
};

}  // namespace mcl
