#include "gcss/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <vector>

namespace gcss {

FockVector::FockVector(int n_max) : n_max_(n_max), amp_(Eigen::VectorXcd::Zero(n_max + 1)) {
    if (n_max < 0) throw DimensionError("FockVector: n_max must be >= 0");
}

FockVector::FockVector(int n_max, Eigen::VectorXcd amplitudes)
    : n_max_(n_max), amp_(std::move(amplitudes)) {
    if (amp_.size() != n_max_ + 1)
        throw DimensionError("FockVector: amplitude length must be n_max+1");
}

FockVector FockVector::basis_state(int n, int n_max) {
    if (n < 0 || n > n_max) throw DimensionError("basis_state: n out of range");
    FockVector v(n_max);
    v.amp_(n) = 1.0;
    return v;
}

double FockVector::leakage() const {
    double l = std::norm(amp_(n_max_));
    if (n_max_ >= 1) l += std::norm(amp_(n_max_ - 1));
    return l;
}

FockVector FockVector::normalized() const {
    double n = amp_.norm();
    if (n < 1e-300) throw NullStateError("FockVector::normalized: zero vector");
    return FockVector(n_max_, amp_ / n);
}

FockDensity::FockDensity(int n_max)
    : n_max_(n_max), mat_(Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1)) {
    if (n_max < 0) throw DimensionError("FockDensity: n_max must be >= 0");
}

FockDensity::FockDensity(int n_max, Eigen::MatrixXcd matrix)
    : n_max_(n_max), mat_(std::move(matrix)) {
    if (mat_.rows() != n_max_ + 1 || mat_.cols() != n_max_ + 1)
        throw DimensionError("FockDensity: matrix must be (n_max+1)^2");
}

FockDensity FockDensity::from_pure(const FockVector& v) {
    return FockDensity(v.n_max(), v.amplitudes() * v.amplitudes().adjoint());
}

double FockDensity::hermiticity_defect() const {
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

double FockDensity::leakage() const {
    double l = std::abs(mat_(n_max_, n_max_));
    if (n_max_ >= 1) l += std::abs(mat_(n_max_ - 1, n_max_ - 1));
    return l;
}

FockDensity FockDensity::normalized() const {
    double tr = trace_real();
    if (std::abs(tr) < 1e-300) throw NullStateError("FockDensity::normalized: zero trace");
    return FockDensity(n_max_, mat_ / tr);
}

FockOperator::FockOperator(SparseOp m) : sparse_(std::move(m)) {
    if (sparse_.rows() != sparse_.cols()) throw DimensionError("FockOperator: square matrix required");
}

FockOperator::FockOperator(const Eigen::MatrixXcd& m) : sparse_(m.sparseView(1.0, 0.0)) {
    if (m.rows() != m.cols()) throw DimensionError("FockOperator: square matrix required");
    dense_ = m;
}

const Eigen::MatrixXcd& FockOperator::dense() const {
    if (!dense_) dense_ = Eigen::MatrixXcd(sparse_);
    return *dense_;
}

Eigen::VectorXcd FockOperator::apply(const Eigen::VectorXcd& v) const {
    if (v.size() != sparse_.rows()) throw DimensionError("FockOperator::apply: dimension mismatch");
    return sparse_ * v;
}

Eigen::VectorXcd FockOperator::apply_dense(const Eigen::VectorXcd& v) const {
    if (v.size() != sparse_.rows()) throw DimensionError("FockOperator::apply_dense: dimension mismatch");
    return dense() * v;
}

FockOperator FockOperator::adjoint() const {
    return FockOperator(SparseOp(sparse_.adjoint()));
}

FockOperator FockOperator::operator*(const FockOperator& rhs) const {
    if (dim() != rhs.dim()) throw DimensionError("FockOperator::operator*: dimension mismatch");
    return FockOperator(SparseOp(sparse_ * rhs.sparse_));
}

FockOperator FockOperator::operator+(const FockOperator& rhs) const {
    if (dim() != rhs.dim()) throw DimensionError("FockOperator::operator+: dimension mismatch");
    return FockOperator(SparseOp(sparse_ + rhs.sparse_));
}

FockOperator FockOperator::scaled(Complex factor) const {
    return FockOperator(SparseOp(sparse_ * factor));
}

double FockOperator::hermiticity_defect() const {
    return Eigen::MatrixXcd(SparseOp(sparse_ - SparseOp(sparse_.adjoint()))).cwiseAbs().maxCoeff();
}

FockVector coherent_fock(Complex alpha, int n_max) {
    if (n_max < 0) throw DimensionError("coherent_fock: n_max must be >= 0");
    const double a2 = std::norm(alpha);
    if (a2 > static_cast<double>(n_max))
        throw TruncationError("coherent_fock: |alpha|^2 exceeds n_max, truncation too lossy");
    FockVector v(n_max);
    if (a2 == 0.0) {
        v.amplitudes()(0) = 1.0;
        return v;
    }
    const double ln_abs = std::log(std::abs(alpha));
    const double phase = std::arg(alpha);
    double lgamma_np1 = 0.0;  // lgamma(n+1), accumulated
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) lgamma_np1 += std::log(static_cast<double>(n));
        const double ln_mag = -0.5 * a2 + n * ln_abs - 0.5 * lgamma_np1;
        v.amplitudes()(n) = std::polar(std::exp(ln_mag), n * phase);
    }
    return v;
}

LadderOperators ladder_operators(int n_max) {
    if (n_max < 1) throw DimensionError("ladder_operators: n_max must be >= 1");
    const int d = n_max + 1;
    std::vector<Eigen::Triplet<Complex>> ta, tc, tn;
    for (int n = 1; n <= n_max; ++n) ta.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
    for (int n = 0; n < n_max; ++n) tc.emplace_back(n + 1, n, std::sqrt(static_cast<double>(n + 1)));
    for (int n = 1; n <= n_max; ++n) tn.emplace_back(n, n, static_cast<double>(n));
    SparseOp a(d, d), c(d, d), num(d, d);
    a.setFromTriplets(ta.begin(), ta.end());
    c.setFromTriplets(tc.begin(), tc.end());
    num.setFromTriplets(tn.begin(), tn.end());
    return {FockOperator(std::move(a)), FockOperator(std::move(c)), FockOperator(std::move(num))};
}

double unitarity_defect(const FockOperator& op) {
    const Eigen::MatrixXcd& d = op.dense();
    Eigen::MatrixXcd gram = d.adjoint() * d;
    gram.diagonal().array() -= 1.0;
    return gram.cwiseAbs().maxCoeff();
}

FockOperator displacement_operator(Complex alpha, int n_max) {
    if (n_max < 1) throw DimensionError("displacement_operator: n_max must be >= 1");
    if (std::norm(alpha) > n_max / 4.0)
        throw TruncationError("displacement_operator: |alpha|^2 > n_max/4");
    auto ops = ladder_operators(n_max);
    Eigen::MatrixXcd gen = alpha * ops.creation.dense() - std::conj(alpha) * ops.annihilation.dense();
    FockOperator d(Eigen::MatrixXcd(gen.exp()));
    if (unitarity_defect(d) > 1e-6)
        throw TruncationError("displacement_operator: unitarity defect exceeds 1e-6, raise n_max");
    return d;
}

double TwoModeVector::leakage() const {
    const int db = n_max_b + 1;
    double l = 0.0;
    for (int i = 0; i <= n_max_a; ++i)
        for (int j = 0; j <= n_max_b; ++j)
            if (i >= n_max_a - 1 || j >= n_max_b - 1) l += std::norm(amp(i * db + j));
    return l;
}

TwoModeVector tensor_product(const FockVector& a, const FockVector& b) {
    TwoModeVector out;
    out.n_max_a = a.n_max();
    out.n_max_b = b.n_max();
    out.amp.resize(out.dim());
    const int db = b.n_max() + 1;
    for (int i = 0; i <= a.n_max(); ++i)
        for (int j = 0; j <= b.n_max(); ++j)
            out.amp(i * db + j) = a.amplitudes()(i) * b.amplitudes()(j);
    return out;
}

TwoModeDensity tensor_product(const FockDensity& a, const FockDensity& b) {
    TwoModeDensity out;
    out.n_max_a = a.n_max();
    out.n_max_b = b.n_max();
    const int da = a.dim(), db = b.dim();
    out.mat.resize(da * db, da * db);
    for (int i = 0; i < da; ++i)
        for (int k = 0; k < da; ++k)
            out.mat.block(i * db, k * db, db, db) = a.matrix()(i, k) * b.matrix();
    return out;
}

FockDensity partial_trace(const TwoModeDensity& rho, Mode keep) {
    const int da = rho.n_max_a + 1, db = rho.n_max_b + 1;
    if (keep == Mode::a) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(da, da);
        for (int i = 0; i < da; ++i)
            for (int k = 0; k < da; ++k)
                for (int j = 0; j < db; ++j) out(i, k) += rho.mat(i * db + j, k * db + j);
        return FockDensity(rho.n_max_a, std::move(out));
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(db, db);
    for (int j = 0; j < db; ++j)
        for (int l = 0; l < db; ++l)
            for (int i = 0; i < da; ++i) out(j, l) += rho.mat(i * db + j, i * db + l);
    return FockDensity(rho.n_max_b, std::move(out));
}

FockDensity partial_trace(const TwoModeVector& psi, Mode keep) {
    const int da = psi.n_max_a + 1, db = psi.n_max_b + 1;
    // Reshape |psi> as a (da x db) matrix M, then rho_a = M M^dag, rho_b = M^T conj(M).
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(
        psi.amp.data(), da, db);
    if (keep == Mode::a) return FockDensity(psi.n_max_a, Eigen::MatrixXcd(M * M.adjoint()));
    return FockDensity(psi.n_max_b, Eigen::MatrixXcd(M.transpose() * M.conjugate()));
}

Complex expectation_value(const FockOperator& op, const FockVector& state) {
    if (op.dim() != state.dim()) throw DimensionError("expectation_value: dimension mismatch");
    return state.amplitudes().dot(op.apply(state.amplitudes()));
}

Complex expectation_value(const FockOperator& op, const FockDensity& state) {
    if (op.dim() != state.dim()) throw DimensionError("expectation_value: dimension mismatch");
    return (op.sparse() * state.matrix()).trace();
}

Complex expectation_value(const FockOperator& op, const TwoModeVector& state) {
    if (op.dim() != state.dim()) throw DimensionError("expectation_value: dimension mismatch");
    return state.amp.dot(op.apply(state.amp));
}

}  // namespace gcss
