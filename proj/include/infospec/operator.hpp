#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>

#include "infospec/common.hpp"

namespace infospec {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kIngestTol = 1e-9;
inline constexpr double kZeroBand = 1e-11;
inline constexpr double kClipFloor = 1e-300;
inline constexpr int kDefaultBruteCap = 1 << 10;

double max_abs_entry(const Matrix& m);

class HermitianOperator {
public:
    HermitianOperator() = default;
    // Rejects anything further than 1e-12 from Hermitian, then stores the
    // symmetrized matrix.
    explicit HermitianOperator(const Matrix& m);

    static HermitianOperator identity(int dim);
    static HermitianOperator diagonal(const std::vector<double>& d);
    // Accepts up to `tol` asymmetry and symmetrizes (used for ingest and for
    // results of floating point products).
    static HermitianOperator symmetrized(const Matrix& m, double tol = kInf);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }
    double max_abs() const { return max_abs_entry(m_); }

    HermitianOperator operator+(const HermitianOperator& o) const;
    HermitianOperator operator-(const HermitianOperator& o) const;
    HermitianOperator operator*(double s) const;

private:
    Matrix m_;
};

class DensityOperator {
public:
    // Eigenvalues >= -1e-10 and unit trace within 1e-10.
    explicit DensityOperator(const HermitianOperator& op);
    explicit DensityOperator(const Matrix& m) : DensityOperator(HermitianOperator(m)) {}

    const HermitianOperator& op() const { return op_; }
    operator const HermitianOperator&() const { return op_; }
    int dim() const { return op_.dim(); }
    const Matrix& matrix() const { return op_.matrix(); }

private:
    HermitianOperator op_;
};

struct SpectralDecomposition {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // columns
};

SpectralDecomposition spectral_decompose(const HermitianOperator& a);

// Exact block structure (connected components of the nonzero pattern) with
// one decomposition per block. Eigenvalue thresholds still refer to the
// whole operator.
struct BlockSpectrum {
    std::vector<std::vector<int>> blocks;
    std::vector<SpectralDecomposition> parts;
};

// Components of the union of the nonzero patterns of the given operators.
std::vector<std::vector<int>> connected_blocks(const std::vector<const Matrix*>& ops);
BlockSpectrum block_spectral_decompose(const HermitianOperator& a,
                                       const std::vector<std::vector<int>>& blocks);
Matrix submatrix(const Matrix& m, const std::vector<int>& idx);

// Width of the band |lambda| <= 1e-11 max(1, |A|_max) treated as zero.
double zero_tolerance(const HermitianOperator& a);

class Projection {
public:
    const HermitianOperator& op() const { return op_; }
    operator const HermitianOperator&() const { return op_; }
    const Matrix& matrix() const { return op_.matrix(); }
    int rank() const { return rank_; }

    static Projection from_columns(const Matrix& v, int dim);
    static Projection from_matrix(const Matrix& p, int rank);

private:
    HermitianOperator op_;
    int rank_ = 0;
};

Projection positive_part_projection(const HermitianOperator& a, Mode mode);
Projection positive_part_projection(const HermitianOperator& a, const SpectralDecomposition& sd,
                                    Mode mode);
// Assembles {A > 0} or {A >= 0} from a block spectrum; `tol` is the zero band
// of the whole operator.
Projection projection_from_blocks(const BlockSpectrum& bs, double tol, int dim, Mode mode);

// How eigenvalues outside a function's domain (here: <= 0) are treated.
enum class DomainPolicy {
    Any,          // f is defined everywhere
    Reject,       // nonpositive eigenvalue -> DomainError
    ClipFloor,    // clip below 1e-300 (full-support operators only)
};

// f applied to eigenvalues. For Reject/ClipFloor the domain is (0, inf).
HermitianOperator matrix_function(const HermitianOperator& a, const std::function<double(double)>& f,
                                  DomainPolicy policy = DomainPolicy::Any);

// log and real powers using the default policy: clip when flagged
// full-support, reject otherwise.
HermitianOperator matrix_log(const HermitianOperator& a, bool full_support = false);
HermitianOperator matrix_power(const HermitianOperator& a, double p, bool full_support = false);
HermitianOperator matrix_exp(const HermitianOperator& a);

HermitianOperator tensor_power(const HermitianOperator& a, int n, long long cap = kDefaultBruteCap);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

// Re Tr(AB); the imaginary residual is checked.
double trace_pair(const HermitianOperator& a, const HermitianOperator& b);

// {"dim": d, "re": [[...]], "im": [[...]]}
HermitianOperator operator_from_json_text(const std::string& text);
std::string operator_to_json_text(const HermitianOperator& a);

}  // namespace infospec
