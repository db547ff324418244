#pragma once

// Value types shared by every blockineq module: the dense complex carrier,
// validated matrix classes, sorted spectra, tolerances and the error type.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blockineq {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

enum class ErrorKind {
    non_finite,
    not_square,
    dimension_mismatch,
    not_hermitian,
    not_psd,
    not_unitary,
    not_symmetry,
    non_convergence,
    singular_input,
    invalid_spectrum,
    not_normal,
    dominance_violated,
    not_contraction,
    index_constraint,
    degenerate_angle,
    nonpositive_param,
    invalid_rank,
    invalid_config,
    even_k,
    empty_input,
    parse_error,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::non_finite: return "NonFinite";
    case ErrorKind::not_square: return "NotSquare";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::not_hermitian: return "NotHermitian";
    case ErrorKind::not_psd: return "NotPsd";
    case ErrorKind::not_unitary: return "NotUnitary";
    case ErrorKind::not_symmetry: return "NotSymmetry";
    case ErrorKind::non_convergence: return "NonConvergence";
    case ErrorKind::singular_input: return "SingularInput";
    case ErrorKind::invalid_spectrum: return "InvalidSpectrum";
    case ErrorKind::not_normal: return "NotNormal";
    case ErrorKind::dominance_violated: return "DominanceViolated";
    case ErrorKind::not_contraction: return "NotContraction";
    case ErrorKind::index_constraint: return "IndexConstraint";
    case ErrorKind::degenerate_angle: return "DegenerateAngle";
    case ErrorKind::nonpositive_param: return "NonpositiveParam";
    case ErrorKind::invalid_rank: return "InvalidRank";
    case ErrorKind::invalid_config: return "InvalidConfig";
    case ErrorKind::even_k: return "EvenK";
    case ErrorKind::empty_input: return "EmptyInput";
    case ErrorKind::parse_error: return "ParseError";
    }
    return "Unknown";
}

/// Error raised by every blockineq operation. `value()` carries the
/// diagnostic number attached to the failure (offending eigenvalue,
/// residual, commutator norm, ...) or NaN when there is none.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what,
          double value = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), value_(value) {}

    ErrorKind kind() const noexcept { return kind_; }
    double value() const noexcept { return value_; }

private:
    ErrorKind kind_;
    double value_;
};

/// Relative and absolute tolerances. The relative part scales PSD and
/// Loewner margins; the absolute part decides when an eigenvalue counts as 0.
struct Tolerance {
    double rel = 1e-9;
    double abs = 1e-12;

    void validate() const {
        if (!(rel > 0.0) || !(abs > 0.0)) {
            throw Error(ErrorKind::invalid_config, "tolerances must be strictly positive");
        }
    }
};

inline double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Mat& m) {
    return m.allFinite();
}

inline void require_square(const Mat& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::not_square, std::string(what) + " must be square");
    }
    if (!all_finite(m)) {
        throw Error(ErrorKind::non_finite, std::string(what) + " has NaN or Inf entries");
    }
}

inline void require_same_dim(const Mat& a, const Mat& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::dimension_mismatch,
                    std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
}

inline Mat hermitian_part(const Mat& m) {
    return (m + m.adjoint()) * 0.5;
}

/// Real values sorted non-increasing. `largest(i)` is 1-based and returns 0
/// past the natural dimension, so eigenvalue inequalities can index freely.
class Spectrum {
public:
    Spectrum() = default;
    explicit Spectrum(std::vector<double> values) : values_(std::move(values)) {
        std::sort(values_.begin(), values_.end(), std::greater<>());
    }

    std::size_t natural_dim() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }

    double largest(std::size_t i) const {
        if (i == 0) {
            throw Error(ErrorKind::index_constraint, "spectrum index is 1-based");
        }
        return i <= values_.size() ? values_[i - 1] : 0.0;
    }
    double max() const { return values_.empty() ? 0.0 : values_.front(); }
    double min() const { return values_.empty() ? 0.0 : values_.back(); }

    Spectrum pow(double alpha) const {
        std::vector<double> out;
        out.reserve(values_.size());
        for (double v : values_) out.push_back(v > 0.0 ? std::pow(v, alpha) : 0.0);
        return Spectrum(std::move(out));
    }

    /// Values at or below `floor` (rounding noise around 0) replaced by 0.
    Spectrum zero_below(double floor) const {
        std::vector<double> out = values_;
        for (double& v : out) {
            if (v <= floor) v = 0.0;
        }
        return Spectrum(std::move(out));
    }

private:
    std::vector<double> values_;
};

class HermitianMatrix {
public:
    HermitianMatrix() = default;

    /// Validates ||M - M*||_max <= tol.abs * max(1, ||M||_max) and stores (M+M*)/2.
    static HermitianMatrix from(const Mat& m, const Tolerance& tol = {}) {
        require_square(m, "Hermitian operand");
        const double skew = max_abs(m - m.adjoint());
        if (skew > tol.abs * std::max(1.0, max_abs(m))) {
            throw Error(ErrorKind::not_hermitian, "||M - M*||_max = " + std::to_string(skew), skew);
        }
        return HermitianMatrix(hermitian_part(m));
    }

    /// Hermitian by construction (e.g. X + X*); only symmetrizes away rounding.
    static HermitianMatrix symmetrized(const Mat& m) {
        require_square(m, "Hermitian operand");
        return HermitianMatrix(hermitian_part(m));
    }

    const Mat& mat() const noexcept { return m_; }
    Index dim() const noexcept { return m_.rows(); }

protected:
    explicit HermitianMatrix(Mat m) : m_(std::move(m)) {}
    Mat m_;
};

class PsdMatrix : public HermitianMatrix {
public:
    PsdMatrix() = default;

    /// Checks lambda_min >= -tol.rel * max(1, lambda_max). Defined in linalg.hpp.
    static PsdMatrix from(const Mat& m, const Tolerance& tol = {});

    /// For results that are PSD by construction (|M|, G*G, square roots).
    static PsdMatrix trusted(const Mat& m) { return PsdMatrix(hermitian_part(m)); }

private:
    explicit PsdMatrix(Mat m) : HermitianMatrix(std::move(m)) {}
};

class UnitaryMatrix {
public:
    UnitaryMatrix() = default;

    static UnitaryMatrix from(const Mat& m, double tol = 1e-9) {
        require_square(m, "unitary operand");
        const double defect = unitarity_defect(m);
        if (defect > tol) {
            throw Error(ErrorKind::not_unitary, "||VV* - I||_max = " + std::to_string(defect), defect);
        }
        return UnitaryMatrix(m);
    }

    static UnitaryMatrix trusted(Mat m) { return UnitaryMatrix(std::move(m)); }

    static double unitarity_defect(const Mat& m) {
        return max_abs(m * m.adjoint() - Mat::Identity(m.rows(), m.cols()));
    }

    const Mat& mat() const noexcept { return m_; }
    Index dim() const noexcept { return m_.rows(); }

protected:
    explicit UnitaryMatrix(Mat m) : m_(std::move(m)) {}
    Mat m_;
};

/// Hermitian and unitary: V = V* = V^{-1}.
class SymmetryMatrix : public UnitaryMatrix {
public:
    SymmetryMatrix() = default;

    static SymmetryMatrix from(const Mat& m, double tol = 1e-9) {
        const UnitaryMatrix u = UnitaryMatrix::from(m, tol);
        const double skew = max_abs(m - m.adjoint());
        if (skew > tol) {
            throw Error(ErrorKind::not_symmetry, "||V - V*||_max = " + std::to_string(skew), skew);
        }
        return SymmetryMatrix(u.mat());
    }

    static SymmetryMatrix trusted(Mat m) { return SymmetryMatrix(std::move(m)); }

private:
    explicit SymmetryMatrix(Mat m) : UnitaryMatrix(std::move(m)) {}
};

}  // namespace blockineq
