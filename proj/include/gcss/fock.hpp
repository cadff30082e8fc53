#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <optional>

#include "gcss/errors.hpp"
#include "gcss/numerics.hpp"

namespace gcss {

using SparseOp = Eigen::SparseMatrix<Complex>;

// State vector in a Fock basis truncated at n_max photons.
// Amplitudes are stored as given; truncation loss stays visible in the norm.
class FockVector {
public:
    explicit FockVector(int n_max);
    FockVector(int n_max, Eigen::VectorXcd amplitudes);

    static FockVector basis_state(int n, int n_max);

    int n_max() const { return n_max_; }
    int dim() const { return n_max_ + 1; }
    const Eigen::VectorXcd& amplitudes() const { return amp_; }
    Eigen::VectorXcd& amplitudes() { return amp_; }

    double squared_norm() const { return amp_.squaredNorm(); }
    // Population of the two highest Fock levels; the truncation-health metric.
    double leakage() const;

    FockVector normalized() const;

private:
    int n_max_;
    Eigen::VectorXcd amp_;
};

class FockDensity {
public:
    explicit FockDensity(int n_max);
    FockDensity(int n_max, Eigen::MatrixXcd matrix);

    static FockDensity from_pure(const FockVector& v);

    int n_max() const { return n_max_; }
    int dim() const { return n_max_ + 1; }
    const Eigen::MatrixXcd& matrix() const { return mat_; }
    Eigen::MatrixXcd& matrix() { return mat_; }

    double trace_real() const { return mat_.trace().real(); }
    double hermiticity_defect() const;
    double leakage() const;
    FockDensity normalized() const;

private:
    int n_max_;
    Eigen::MatrixXcd mat_;
};

// Linear operator on a truncated Fock space (or a product of two of them).
// Stored sparse; a dense copy is materialized on demand.
class FockOperator {
public:
    explicit FockOperator(SparseOp m);
    explicit FockOperator(const Eigen::MatrixXcd& m);

    int dim() const { return static_cast<int>(sparse_.rows()); }
    const SparseOp& sparse() const { return sparse_; }
    const Eigen::MatrixXcd& dense() const;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
    Eigen::VectorXcd apply_dense(const Eigen::VectorXcd& v) const;

    FockOperator adjoint() const;
    FockOperator operator*(const FockOperator& rhs) const;
    FockOperator operator+(const FockOperator& rhs) const;
    FockOperator scaled(Complex factor) const;

    double hermiticity_defect() const;
    long nonzeros() const { return sparse_.nonZeros(); }

private:
    SparseOp sparse_;
    mutable std::optional<Eigen::MatrixXcd> dense_;
};

struct LadderOperators {
    FockOperator annihilation;
    FockOperator creation;
    FockOperator number;
};

// |alpha> in the truncated basis, coefficients via log-domain factorials.
// Not renormalized. Throws TruncationError when |alpha|^2 > n_max.
FockVector coherent_fock(Complex alpha, int n_max);

// a, a^dag, n with the conventional matrix elements; the creation operator
// annihilates the cutoff level (nothing above n_max to raise into).
LadderOperators ladder_operators(int n_max);

// exp(alpha a^dag - conj(alpha) a) by dense scaling-and-squaring.
// Requires |alpha|^2 <= n_max/4; throws TruncationError when the unitarity
// defect max|D^dag D - I| exceeds 1e-6.
FockOperator displacement_operator(Complex alpha, int n_max);
double unitarity_defect(const FockOperator& op);

// Two-mode objects. Index map: n_total = i*(n_max_b+1) + j, mode a first.
struct TwoModeVector {
    int n_max_a = 0;
    int n_max_b = 0;
    Eigen::VectorXcd amp;

    int dim() const { return (n_max_a + 1) * (n_max_b + 1); }
    double squared_norm() const { return amp.squaredNorm(); }
    // Population with either index in its top two levels.
    double leakage() const;
};

struct TwoModeDensity {
    int n_max_a = 0;
    int n_max_b = 0;
    Eigen::MatrixXcd mat;

    int dim() const { return (n_max_a + 1) * (n_max_b + 1); }
};

TwoModeVector tensor_product(const FockVector& a, const FockVector& b);
TwoModeDensity tensor_product(const FockDensity& a, const FockDensity& b);

enum class Mode { a, b };

// Reduced density operator of the kept mode. Preserves trace and hermiticity.
FockDensity partial_trace(const TwoModeDensity& rho, Mode keep);
FockDensity partial_trace(const TwoModeVector& psi, Mode keep);

Complex expectation_value(const FockOperator& op, const FockVector& state);
Complex expectation_value(const FockOperator& op, const FockDensity& state);
Complex expectation_value(const FockOperator& op, const TwoModeVector& state);

}  // namespace gcss
