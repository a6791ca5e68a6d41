#include "infospec/schur.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "infospec/quantum.hpp"

namespace infospec {

namespace {

using u128 = unsigned __int128;

std::vector<u128> pascal_row(int n) {
    std::vector<u128> row(static_cast<size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[j] += row[j - 1];
    return row;
}

// sqrt(C(m,i) / C(m,j))
double binomial_ratio_sqrt(int m, int i, int j) {
    if (m <= 60) return std::sqrt(binomial(m, i) / binomial(m, j));
    return std::exp(0.5 * (log_binomial(m, i) - log_binomial(m, j)));
}

std::vector<cplx> powers(cplx x, int m) {
    std::vector<cplx> p(static_cast<size_t>(m) + 1);
    p[0] = 1.0;
    for (int i = 1; i <= m; ++i) p[i] = p[i - 1] * x;
    return p;
}

struct OperatorFactors {
    double det = 0.0;      // 0 once inside the tolerance band
    double scale = 0.0;    // max |entry|
    double log_det = -kInf;
};

OperatorFactors qubit_factors(const HermitianOperator& x, const char* name) {
    if (x.dim() != 2) throw InputError("Schur decomposition needs 2x2 operators");
    const Matrix& m = x.matrix();
    OperatorFactors f;
    f.scale = x.max_abs();
    double tr = m.trace().real();
    double det = m(0, 0).real() * m(1, 1).real() - std::norm(m(0, 1));
    double tol = 1e-12 * f.scale * f.scale;
    if (det < -tol || tr < -1e-12 * f.scale) {
        std::ostringstream os;
        os << name << " is not positive semidefinite (det = " << det << ")";
        throw InputError(os.str());
    }
    f.det = det > tol ? det : 0.0;
    f.log_det = f.det > 0.0 ? std::log(f.det) : -kInf;
    return f;
}

void fill_block(const HermitianOperator& x, const OperatorFactors& f, int n, int k, double& log_scale,
                Matrix& block) {
    const int m = n - 2 * k;
    if ((k >= 1 && f.det == 0.0) || f.scale == 0.0) {
        log_scale = -kInf;
        block.resize(0, 0);
        return;
    }
    Matrix s = sym_power_matrix(x.matrix() / f.scale, m);
    double mx = max_abs_entry(s);
    if (mx == 0.0) {
        log_scale = -kInf;
        block.resize(0, 0);
        return;
    }
    log_scale = k * (k > 0 ? f.log_det : 0.0) + m * std::log(f.scale) + std::log(mx);
    block = s / mx;
}

}  // namespace

Matrix sym_power_matrix(const Matrix& A, int m) {
    if (m < 0) throw InputError("symmetric power needs m >= 0");
    if (A.rows() != 2 || A.cols() != 2) throw InputError("symmetric power needs a 2x2 matrix");
    Matrix out = Matrix::Zero(m + 1, m + 1);
    if (m == 0) {
        out(0, 0) = 1.0;
        return out;
    }
    // x -> a x + c y, y -> b x + d y (columns of A)
    auto pa = powers(A(0, 0), m), pb = powers(A(0, 1), m), pc = powers(A(1, 0), m), pd = powers(A(1, 1), m);
    for (int j = 0; j <= m; ++j) {
        for (int i = 0; i <= m; ++i) {
            cplx acc = 0.0;
            int plo = std::max(0, i - j), phi = std::min(m - j, i);
            for (int p = plo; p <= phi; ++p) {
                int q = i - p;
                acc += binomial(m - j, p) * pa[m - j - p] * pc[p] * binomial(j, q) * pb[j - q] * pd[q];
            }
            out(i, j) = acc * binomial_ratio_sqrt(m, j, i);
        }
    }
    return out;
}

unsigned __int128 exact_multiplicity(int n, int k) {
    if (n < 1 || n > 125) throw SizeError("exact multiplicity needs 1 <= n <= 125");
    if (k < 0 || 2 * k > n) throw InputError("k out of range");
    auto row = pascal_row(n);
    return row[k] - (k > 0 ? row[k - 1] : 0);
}

double log_multiplicity(int n, int k) {
    if (k < 0 || 2 * k > n) throw InputError("k out of range");
    return log_binomial(n, k) + std::log(static_cast<double>(n - 2 * k + 1)) -
           std::log(static_cast<double>(n - k + 1));
}

bool dimension_identity(int n) {
    if (n < 1 || n > 125) throw SizeError("dimension identity checked for 1 <= n <= 125");
    auto row = pascal_row(n);
    u128 total = 0;
    for (int k = 0; 2 * k <= n; ++k) {
        u128 mult = row[k] - (k > 0 ? row[k - 1] : 0);
        total += mult * static_cast<u128>(n - 2 * k + 1);
    }
    return total == (static_cast<u128>(1) << n);
}

SchurBlockDecomposition build_decomposition(const HermitianOperator& rho, const HermitianOperator& sigma, int n,
                                            const SchurOptions& opts) {
    if (n < 1) throw InputError("n must be >= 1");
    if (n > kExactMultiplicityMaxN && opts.strict_multiplicity)
        throw SizeError("multiplicities beyond n = 56 are not exact doubles (strict mode)");
    auto fr = qubit_factors(rho, "rho");
    auto fs = qubit_factors(sigma, "sigma");
    SchurBlockDecomposition dec;
    dec.n = n;
    const bool exact = n <= kExactMultiplicityMaxN;
    std::vector<u128> row;
    if (exact) row = pascal_row(n);
    for (int k = 0; 2 * k <= n; ++k) {
        SchurBlock b;
        b.k = k;
        b.dim = n - 2 * k + 1;
        b.exact_multiplicity = exact;
        if (exact) {
            u128 m = row[k] - (k > 0 ? row[k - 1] : 0);
            b.multiplicity = static_cast<double>(m);
            b.log_multiplicity = std::log(b.multiplicity);
        } else {
            b.log_multiplicity = log_multiplicity(n, k);
            b.multiplicity = std::exp(b.log_multiplicity);
        }
        fill_block(rho, fr, n, k, b.log_scale_rho, b.block_rho);
        fill_block(sigma, fs, n, k, b.log_scale_sigma, b.block_sigma);
        if (opts.corrupt && (k % 2 == 1) && !b.rho_vanishes()) b.block_rho = -b.block_rho;
        dec.blocks.push_back(std::move(b));
    }
    return dec;
}

namespace {

// sigma weight of a kept eigenvector of w_r R - w_s S from <v|R|v> and lambda,
// band eigenvalues counted as exact zeros; the direct <v|S|v> only resolves
// it to ~eps of the block scale, far above e^{-na} for large a
double kept_sigma_weight(double weighted_rho, double lambda, double tol, double ws) {
    const double l = std::abs(lambda) <= tol ? 0.0 : lambda;
    return std::max((weighted_rho - l) / ws, 0.0);
}

}  // namespace

IidEvaluation fast_iid_evaluation(const SchurBlockDecomposition& dec, double a, Mode mode, bool rescale) {
    if (!std::isfinite(a)) throw InputError("threshold a must be finite");
    const double na = dec.n * a;
    double log_g = -kInf, log_alpha = -kInf, log_beta = -kInf, log_beta_c = -kInf;
    for (const auto& b : dec.blocks) {
        const double sr = b.log_scale_rho;
        const double ss = b.sigma_vanishes() ? -kInf : na + b.log_scale_sigma;
        if (sr == -kInf && ss == -kInf) continue;
        const double s = rescale ? std::max(sr, ss) : 0.0;
        Matrix delta = Matrix::Zero(b.dim, b.dim);
        if (sr != -kInf) delta += std::exp(sr - s) * b.block_rho;
        if (ss != -kInf) delta -= std::exp(ss - s) * b.block_sigma;
        HermitianOperator d = HermitianOperator::symmetrized(delta);
        auto sd = spectral_decompose(d);
        const double floor =
            kRoundingBand * std::max(std::abs(sd.eigenvalues(0)), std::abs(sd.eigenvalues(sd.eigenvalues.size() - 1)));
        const double wr = sr == -kInf ? 0.0 : std::exp(sr - s), ws = ss == -kInf ? 0.0 : std::exp(ss - s);
        double rk = 0.0, rr = 0.0, sk = 0.0, sr_sum = 0.0;
        for (Eigen::Index c = 0; c < sd.eigenvalues.size(); ++c) {
            const double l = sd.eigenvalues(c);
            auto v = sd.eigenvectors.col(c);
            const double r = b.rho_vanishes() ? 0.0 : v.dot(b.block_rho * v).real();
            const double sd_w = b.sigma_vanishes() ? 0.0 : v.dot(b.block_sigma * v).real();
            const double tol = likelihood_band(wr * r, ws * sd_w, floor);
            const bool keep = mode == Mode::Strict ? l > tol : l >= -tol;
            double q = 0.0;
            if (!b.sigma_vanishes()) q = keep && ws > 0.0 ? kept_sigma_weight(wr * r, l, tol, ws) : sd_w;
            (keep ? rk : rr) += r;
            (keep ? sk : sr_sum) += q;
        }
        const double lm = b.log_multiplicity;
        if (rk > 0.0) log_g = log_add(log_g, lm + sr + std::log(rk));
        if (rr > 0.0) log_alpha = log_add(log_alpha, lm + sr + std::log(rr));
        if (sk > 0.0) log_beta = log_add(log_beta, lm + b.log_scale_sigma + std::log(sk));
        if (sr_sum > 0.0) log_beta_c = log_add(log_beta_c, lm + b.log_scale_sigma + std::log(sr_sum));
    }
    IidEvaluation out;
    out.g = std::exp(log_g);
    out.eval = make_evaluation_log(log_alpha, log_beta, log_beta_c, dec.n);
    return out;
}

double schur_trace(const SchurBlockDecomposition& dec, bool rho) {
    double total = 0.0;
    for (const auto& b : dec.blocks) {
        double s = rho ? b.log_scale_rho : b.log_scale_sigma;
        if (s == -kInf) continue;
        double tr = (rho ? b.block_rho : b.block_sigma).trace().real();
        if (tr == 0.0) continue;
        total += (tr > 0 ? 1.0 : -1.0) * std::exp(b.log_multiplicity + s + std::log(std::abs(tr)));
    }
    return total;
}

std::vector<GCurveRow> g_curve(const HermitianOperator& rho, const HermitianOperator& sigma,
                               const std::vector<int>& n_list, const std::vector<double>& a_grid, Mode mode) {
    std::vector<GCurveRow> rows;
    for (int n : n_list) {
        auto dec = build_decomposition(rho, sigma, n);
        for (double a : a_grid) {
            auto ev = fast_iid_evaluation(dec, a, mode);
            rows.push_back({n, a, ev.g, ev.eval.alpha, ev.eval.beta});
        }
    }
    return rows;
}

std::string sym_cache_key(const Matrix& a, int n, int k) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const void* p, size_t len) {
        const unsigned char* c = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < len; ++i) {
            h ^= c[i];
            h *= 1099511628211ULL;
        }
    };
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double re = a(i).real(), im = a(i).imag();
        mix(&re, sizeof re);
        mix(&im, sizeof im);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "sym-%016llx-n%d-k%d.bin", static_cast<unsigned long long>(h), n, k);
    return buf;
}

static_assert(std::endian::native == std::endian::little, "cache layout assumes a little-endian host");

void save_sym_cache(const std::string& path, const Matrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write cache file " + path);
    out.write("ISSYM001", 8);
    std::uint64_t dim = static_cast<std::uint64_t>(m.rows());
    out.write(reinterpret_cast<const char*>(&dim), 8);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double v[2] = {m(i, j).real(), m(i, j).imag()};
            out.write(reinterpret_cast<const char*>(v), 16);
        }
}

Matrix load_sym_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read cache file " + path);
    char magic[8];
    std::uint64_t dim = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&dim), 8);
    if (!in || std::memcmp(magic, "ISSYM001", 8) != 0 || dim > 100000) throw InputError("bad cache header in " + path);
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double v[2];
            in.read(reinterpret_cast<char*>(v), 16);
            m(i, j) = cplx(v[0], v[1]);
        }
    if (!in) throw InputError("truncated cache file " + path);
    return m;
}

}  // namespace infospec
