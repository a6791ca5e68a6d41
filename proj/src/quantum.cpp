#include "infospec/quantum.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <tuple>

namespace infospec {

QuantumTest::QuantumTest(const HermitianOperator& t) : op_(t) {
    auto sd = spectral_decompose(t);
    double lo = sd.eigenvalues(0), hi = sd.eigenvalues(sd.eigenvalues.size() - 1);
    if (lo < -1e-10 || hi > 1.0 + 1e-10) {
        std::ostringstream os;
        os << "test eigenvalues must lie in [0,1] (got range [" << lo << ", " << hi << "])";
        throw InputError(os.str());
    }
}

QuantumTest::QuantumTest(const Projection& p) : op_(p.op()) {}

std::pair<DensityOperator, DensityOperator> pure_state_operators(double delta) {
    if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("delta must lie in [0,1]");
    Matrix r = Matrix::Zero(2, 2);
    r(0, 0) = 1.0;
    Eigen::Vector2cd phi(std::sqrt(delta), std::sqrt(1.0 - delta));
    Matrix s = phi * phi.adjoint();
    return {DensityOperator(HermitianOperator::symmetrized(r)), DensityOperator(HermitianOperator::symmetrized(s))};
}

// Weights (w_rho, w_sigma) of the likelihood operator w_rho rho - w_sigma sigma.
static std::pair<double, double> np_weights(double a, int n) {
    const double na = n * a;
    // Beyond exp's range the positive rescale e^{-na} keeps the projection.
    if (na > 600.0) return {std::exp(-na), 1.0};
    return {1.0, std::exp(na)};
}

double np_log_rho_weight(double a, int n) { return n * a > 600.0 ? -n * a : 0.0; }

double likelihood_band(double x, double y, double floor) {
    return std::max(kZeroBand * std::max(std::abs(x), std::abs(y)), floor);
}

static HermitianOperator np_operator(const HermitianOperator& rho, const HermitianOperator& sigma, double a,
                                     int n) {
    if (rho.dim() != sigma.dim()) throw InputError("rho and sigma dimensions differ");
    if (n < 1) throw InputError("n must be >= 1");
    const auto [wr, ws] = np_weights(a, n);
    return HermitianOperator::symmetrized(wr * rho.matrix() - ws * sigma.matrix());
}

namespace {

// Eigenvectors of the likelihood operator with their weighted rho and sigma
// weights and the tie band of each.
struct LikelihoodSpectrum {
    std::vector<std::vector<int>> blocks;
    std::vector<SpectralDecomposition> parts;
    std::vector<Eigen::VectorXd> x, y, band;  // w_rho <v|rho|v>, w_sigma <v|sigma|v>
    double wr = 1.0, ws = 1.0;
};

LikelihoodSpectrum likelihood_spectrum(const HermitianOperator& rho, const HermitianOperator& sigma, double a,
                                       int n) {
    HermitianOperator A = np_operator(rho, sigma, a, n);
    LikelihoodSpectrum ls;
    std::tie(ls.wr, ls.ws) = np_weights(a, n);
    ls.blocks = connected_blocks({&rho.matrix(), &sigma.matrix()});
    auto bs = block_spectral_decompose(A, ls.blocks);
    ls.parts = std::move(bs.parts);
    double radius = 0.0;
    for (const auto& sd : ls.parts)
        if (sd.eigenvalues.size() > 0)
            radius = std::max({radius, std::abs(sd.eigenvalues(0)), std::abs(sd.eigenvalues(sd.eigenvalues.size() - 1))});
    const double floor = kRoundingBand * radius;
    for (size_t b = 0; b < ls.blocks.size(); ++b) {
        const auto& sd = ls.parts[b];
        Matrix rb = ls.blocks.size() == 1 ? rho.matrix() : submatrix(rho.matrix(), ls.blocks[b]);
        Matrix sb = ls.blocks.size() == 1 ? sigma.matrix() : submatrix(sigma.matrix(), ls.blocks[b]);
        // <v|rho|v> and <v|sigma|v> per eigenvector; real blocks skip complex products
        Eigen::VectorXd rd, sdg;
        if (rb.imag().isZero(0.0) && sb.imag().isZero(0.0) && sd.eigenvectors.imag().isZero(0.0)) {
            const Eigen::MatrixXd v = sd.eigenvectors.real();
            rd = (v.array() * (rb.real() * v).array()).colwise().sum().transpose();
            sdg = (v.array() * (sb.real() * v).array()).colwise().sum().transpose();
        } else {
            const Matrix rv = rb * sd.eigenvectors, sv = sb * sd.eigenvectors;
            rd = (sd.eigenvectors.conjugate().array() * rv.array()).colwise().sum().real().transpose();
            sdg = (sd.eigenvectors.conjugate().array() * sv.array()).colwise().sum().real().transpose();
        }
        Eigen::VectorXd band(rd.size());
        for (Eigen::Index c = 0; c < rd.size(); ++c) band(c) = likelihood_band(ls.wr * rd(c), ls.ws * sdg(c), floor);
        ls.x.push_back(std::move(rd));
        ls.y.push_back(std::move(sdg));
        ls.band.push_back(std::move(band));
    }
    return ls;
}

}  // namespace

Projection quantum_np_projection(const HermitianOperator& rho, const HermitianOperator& sigma, double a, int n,
                                 Mode mode) {
    const LikelihoodSpectrum ls = likelihood_spectrum(rho, sigma, a, n);
    Matrix p = Matrix::Zero(rho.dim(), rho.dim());
    int rank = 0;
    for (size_t b = 0; b < ls.blocks.size(); ++b) {
        const auto& idx = ls.blocks[b];
        const auto& sd = ls.parts[b];
        Matrix sub = Matrix::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
        for (Eigen::Index c = 0; c < sd.eigenvalues.size(); ++c) {
            const double l = sd.eigenvalues(c), tol = ls.band[b](c);
            if (mode == Mode::Strict ? l > tol : l >= -tol) {
                sub += sd.eigenvectors.col(c) * sd.eigenvectors.col(c).adjoint();
                ++rank;
            }
        }
        for (size_t j = 0; j < idx.size(); ++j)
            for (size_t i = 0; i < idx.size(); ++i)
                p(idx[i], idx[j]) = sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return Projection::from_matrix(p, rank);
}

TestEvaluation evaluate_quantum_test(const HermitianOperator& rho, const HermitianOperator& sigma,
                                     const QuantumTest& t, int n) {
    if (rho.dim() != sigma.dim() || rho.dim() != t.dim()) throw InputError("dimension mismatch");
    HermitianOperator comp = HermitianOperator::symmetrized(Matrix::Identity(t.dim(), t.dim()) - t.op().matrix());
    double alpha = trace_pair(rho, comp);
    double beta = trace_pair(sigma, t.op());
    double beta_c = trace_pair(sigma, comp);
    return make_evaluation(alpha, beta, beta_c, n);
}

std::array<NPEvaluation, 2> quantum_np_evaluation_both(const HermitianOperator& rho, const HermitianOperator& sigma,
                                                       double a, int n) {
    const LikelihoodSpectrum ls = likelihood_spectrum(rho, sigma, a, n);
    const double wr = ls.wr, ws = ls.ws;
    // [mode][0: kept, 1: rejected] for rho and sigma
    double r[2][2] = {{0, 0}, {0, 0}}, s[2][2] = {{0, 0}, {0, 0}};
    int rank[2] = {0, 0};
    for (size_t b = 0; b < ls.blocks.size(); ++b) {
        const auto& sd = ls.parts[b];
        for (Eigen::Index c = 0; c < sd.eigenvalues.size(); ++c) {
            const double l = sd.eigenvalues(c), tol = ls.band[b](c);
            const double rc = ls.x[b](c);
            const double sc = ls.y[b](c);
            const bool keep[2] = {l > tol, l >= -tol};
            // kept sigma weight from the eigen identity, band eigenvalues as exact zeros
            const double sk = ws > 0.0 ? std::max((wr * rc - (std::abs(l) <= tol ? 0.0 : l)) / ws, 0.0) : sc;
            for (int m = 0; m < 2; ++m) {
                r[m][keep[m] ? 0 : 1] += rc;
                s[m][keep[m] ? 0 : 1] += keep[m] ? sk : sc;
                rank[m] += keep[m];
            }
        }
    }
    std::array<NPEvaluation, 2> out;
    for (int m = 0; m < 2; ++m) {
        out[m].g = r[m][0];
        out[m].rank = rank[m];
        out[m].eval = make_evaluation(std::max(r[m][1], 0.0), std::max(s[m][0], 0.0), std::max(s[m][1], 0.0), n);
    }
    return out;
}

NPEvaluation quantum_np_evaluation(const HermitianOperator& rho, const HermitianOperator& sigma, double a, int n,
                                   Mode mode) {
    return quantum_np_evaluation_both(rho, sigma, a, n)[mode == Mode::Strict ? 0 : 1];
}

namespace {

struct SupportSpectrum {
    std::vector<double> values;  // eigenvalues above the zero band
    Matrix vectors;
    Matrix null_vectors;
};

SupportSpectrum support_spectrum(const HermitianOperator& x) {
    auto sd = spectral_decompose(x);
    double tol = zero_tolerance(x);
    std::vector<Eigen::Index> keep, drop;
    for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) (sd.eigenvalues(i) > tol ? keep : drop).push_back(i);
    SupportSpectrum s;
    s.vectors.resize(x.dim(), static_cast<Eigen::Index>(keep.size()));
    s.null_vectors.resize(x.dim(), static_cast<Eigen::Index>(drop.size()));
    for (size_t c = 0; c < keep.size(); ++c) {
        s.values.push_back(sd.eigenvalues(keep[c]));
        s.vectors.col(static_cast<Eigen::Index>(c)) = sd.eigenvectors.col(keep[c]);
    }
    for (size_t c = 0; c < drop.size(); ++c) s.null_vectors.col(static_cast<Eigen::Index>(c)) = sd.eigenvectors.col(drop[c]);
    return s;
}

// Tr(rho P_null(sigma))
double null_weight(const HermitianOperator& rho, const SupportSpectrum& s) {
    if (s.null_vectors.cols() == 0) return 0.0;
    return (s.null_vectors.adjoint() * rho.matrix() * s.null_vectors).trace().real();
}

}  // namespace

double quantum_relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw InputError("dimension mismatch");
    auto ss = support_spectrum(sigma);
    if (null_weight(rho, ss) > 1e-10) return kInf;
    auto rs = support_spectrum(rho);
    double d = 0.0;
    for (double l : rs.values) d += l * std::log(l);
    Matrix proj = ss.vectors.adjoint() * rho.matrix() * ss.vectors;
    for (size_t j = 0; j < ss.values.size(); ++j)
        d -= std::log(ss.values[j]) * proj(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real();
    return d;
}

double quantum_psi(const HermitianOperator& rho, const HermitianOperator& sigma, double theta) {
    if (rho.dim() != sigma.dim()) throw InputError("dimension mismatch");
    if (theta == 0.0) return std::log(rho.trace());
    auto ss = support_spectrum(sigma);
    if (theta > 0.0 && null_weight(rho, ss) > 1e-10) return kInf;
    auto rs = support_spectrum(rho);
    Matrix overlap = rs.vectors.adjoint() * ss.vectors;
    std::vector<double> terms;
    terms.reserve(rs.values.size() * ss.values.size());
    for (size_t i = 0; i < rs.values.size(); ++i)
        for (size_t j = 0; j < ss.values.size(); ++j) {
            double o = std::norm(overlap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            if (o <= 0.0) continue;
            terms.push_back((1.0 + theta) * std::log(rs.values[i]) - theta * std::log(ss.values[j]) + std::log(o));
        }
    if (terms.empty()) return -kInf;
    return log_sum_exp(terms);
}

double quantum_psi_left_limit(const HermitianOperator& rho, const HermitianOperator& sigma) {
    auto ss = support_spectrum(sigma);
    double w = (ss.vectors.adjoint() * rho.matrix() * ss.vectors).trace().real();
    return w > 0.0 ? std::log(w) : -kInf;
}

double ogawa_nagaoka_bound(const HermitianOperator& rho, const HermitianOperator& sigma, int n, double a,
                           double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw InputError("theta must lie in [0,1]");
    if (n < 1) throw InputError("n must be >= 1");
    double psi = quantum_psi(rho, sigma, theta);
    return std::exp(-n * (a * theta - psi));
}

double measured_binary_divergence(const HermitianOperator& rho, const HermitianOperator& sigma,
                                  const QuantumTest& t) {
    double p = std::clamp(trace_pair(rho, t.op()), 0.0, 1.0);
    double q = std::clamp(trace_pair(sigma, t.op()), 0.0, 1.0);
    return binary_divergence(p, q);
}

double pure_state_g(const PureStatePair& pair, double a) {
    const double d = pair.delta;
    if (!(d >= 0.0 && d <= 1.0)) throw InputError("delta must lie in [0,1]");
    if (pair.n < 1) throw InputError("n must be >= 1");
    const double na = pair.n * a;
    if (d == 1.0 && na == 0.0) throw DomainError("closed form is degenerate at delta = 1, a = 0");
    double num, den;
    if (na > 0.0) {
        // divide through by e^{na}
        double u = std::exp(-na);
        num = u + 1.0 - 2.0 * d;
        den = 2.0 * std::sqrt((1.0 + u) * (1.0 + u) - 4.0 * u * d);
    } else {
        double t = std::exp(na);
        num = 1.0 + t - 2.0 * t * d;
        den = 2.0 * std::sqrt((1.0 + t) * (1.0 + t) - 4.0 * t * d);
    }
    return 0.5 + num / den;
}

std::pair<HermitianOperator, HermitianOperator> real_qubit_frame(const HermitianOperator& rho,
                                                                 const HermitianOperator& sigma) {
    if (rho.dim() != 2 || sigma.dim() != 2) return {rho, sigma};
    // sigma's eigenbasis, then a phase on the second vector makes rho's coherence real
    const Matrix w = spectral_decompose(sigma).eigenvectors;
    const Matrix r1 = w.adjoint() * rho.matrix() * w;
    const double phi = std::arg(r1(0, 1));
    Matrix u = w;
    u.col(1) *= std::polar(1.0, -phi);
    Matrix r = u.adjoint() * rho.matrix() * u, s = u.adjoint() * sigma.matrix() * u;
    if (r.imag().cwiseAbs().maxCoeff() > 1e-12 || s.imag().cwiseAbs().maxCoeff() > 1e-12) return {rho, sigma};
    r = r.real().cast<cplx>();
    s = s.real().cast<cplx>();
    return {HermitianOperator::symmetrized(r), HermitianOperator::symmetrized(s)};
}

std::array<NPEvaluation, 2> brute_force_iid_evaluation_both(const HermitianOperator& rho,
                                                            const HermitianOperator& sigma, int n, double a,
                                                            long long cap) {
    const auto [r, s] = real_qubit_frame(rho, sigma);
    return quantum_np_evaluation_both(tensor_power(r, n, cap), tensor_power(s, n, cap), a, n);
}

NPEvaluation brute_force_iid_evaluation(const HermitianOperator& rho, const HermitianOperator& sigma, int n,
                                        double a, Mode mode, long long cap) {
    return brute_force_iid_evaluation_both(rho, sigma, n, a, cap)[mode == Mode::Strict ? 0 : 1];
}

double brute_force_iid_g(const HermitianOperator& rho, const HermitianOperator& sigma, int n, double a, Mode mode,
                         long long cap) {
    return brute_force_iid_evaluation(rho, sigma, n, a, mode, cap).g;
}

}  // namespace infospec
