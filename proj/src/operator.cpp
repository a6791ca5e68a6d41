#include "infospec/operator.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

namespace infospec {

double max_abs_entry(const Matrix& m) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, std::abs(m(i, j)));
    return best;
}

static double asymmetry(const Matrix& m) { return max_abs_entry(m - m.adjoint()); }

HermitianOperator::HermitianOperator(const Matrix& m) {
    if (m.rows() < 1 || m.rows() != m.cols())
        throw InputError("operator must be square with dim >= 1");
    double asym = asymmetry(m);
    if (!(asym <= kHermitianTol))
        throw InputError("operator is not Hermitian (asymmetry " + std::to_string(asym) + ")");
    m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::symmetrized(const Matrix& m, double tol) {
    if (m.rows() < 1 || m.rows() != m.cols())
        throw InputError("operator must be square with dim >= 1");
    double asym = asymmetry(m);
    if (!(asym <= tol))
        throw InputError("asymmetry " + std::to_string(asym) + " exceeds ingest tolerance");
    HermitianOperator h;
    h.m_ = 0.5 * (m + m.adjoint());
    return h;
}

HermitianOperator HermitianOperator::identity(int dim) {
    return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& d) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return HermitianOperator(m);
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
    if (dim() != o.dim()) throw InputError("dimension mismatch");
    return symmetrized(m_ + o.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
    if (dim() != o.dim()) throw InputError("dimension mismatch");
    return symmetrized(m_ - o.m_);
}

HermitianOperator HermitianOperator::operator*(double s) const { return symmetrized(m_ * s); }

DensityOperator::DensityOperator(const HermitianOperator& op) : op_(op) {
    double tr = op.trace();
    if (!(std::abs(tr - 1.0) <= 1e-10))
        throw InputError("density operator must have unit trace (got " + std::to_string(tr) + ")");
    auto sd = spectral_decompose(op);
    if (sd.eigenvalues(0) < -1e-10)
        throw InputError("density operator has negative eigenvalue " + std::to_string(sd.eigenvalues(0)));
}

namespace {

bool is_real(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (m(i, j).imag() != 0.0) return false;
    return true;
}

SpectralDecomposition dense_eigen(const Matrix& m) {
    const Eigen::Index d = m.rows();
    SpectralDecomposition sd;
    if (is_real(m)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real());
        if (es.info() != Eigen::Success)
            throw EigenError("eigensolver failed to converge (dim " + std::to_string(d) + ")");
        sd.eigenvalues = es.eigenvalues();
        sd.eigenvectors = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        if (es.info() != Eigen::Success)
            throw EigenError("eigensolver failed to converge (dim " + std::to_string(d) + ")");
        sd.eigenvalues = es.eigenvalues();
        sd.eigenvectors = es.eigenvectors();
    }
    return sd;
}

void check_residual(const Matrix& m, const SpectralDecomposition& sd) {
    // Cheap probe instead of a full reconstruction: A v = lambda v on a few columns.
    const Eigen::Index d = m.rows();
    double scale = std::max(1.0, max_abs_entry(m));
    Eigen::Index step = std::max<Eigen::Index>(1, d / 8);
    for (Eigen::Index c = 0; c < d; c += step) {
        double r = max_abs_entry(m * sd.eigenvectors.col(c) - sd.eigenvalues(c) * sd.eigenvectors.col(c));
        if (!(r <= 1e-9 * scale * std::sqrt(static_cast<double>(d)))) {
            std::ostringstream os;
            os << "eigensolver residual " << r << " too large (dim " << d << ")";
            throw EigenError(os.str());
        }
    }
}

}  // namespace

Matrix submatrix(const Matrix& m, const std::vector<int>& idx) {
    const Eigen::Index b = static_cast<Eigen::Index>(idx.size());
    Matrix out(b, b);
    for (Eigen::Index j = 0; j < b; ++j)
        for (Eigen::Index i = 0; i < b; ++i) out(i, j) = m(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    return out;
}

std::vector<std::vector<int>> connected_blocks(const std::vector<const Matrix*>& ops) {
    const int d = static_cast<int>(ops.front()->rows());
    std::vector<int> parent(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) parent[static_cast<size_t>(i)] = i;
    auto find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    for (const Matrix* m : ops)
        for (int j = 0; j < d; ++j)
            for (int i = j + 1; i < d; ++i)
                if ((*m)(i, j) != cplx(0.0, 0.0)) {
                    int a = find(i), b = find(j);
                    if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
                }
    std::vector<int> label(static_cast<size_t>(d), -1);
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < d; ++i) {
        int r = find(i);
        if (label[static_cast<size_t>(r)] < 0) {
            label[static_cast<size_t>(r)] = static_cast<int>(blocks.size());
            blocks.emplace_back();
        }
        blocks[static_cast<size_t>(label[static_cast<size_t>(r)])].push_back(i);
    }
    return blocks;
}

BlockSpectrum block_spectral_decompose(const HermitianOperator& a,
                                       const std::vector<std::vector<int>>& blocks) {
    BlockSpectrum bs;
    bs.blocks = blocks;
    bs.parts.reserve(blocks.size());
    for (const auto& b : blocks) {
        Matrix sub = blocks.size() == 1 ? a.matrix() : submatrix(a.matrix(), b);
        auto sd = dense_eigen(sub);
        check_residual(sub, sd);
        bs.parts.push_back(std::move(sd));
    }
    return bs;
}

SpectralDecomposition spectral_decompose(const HermitianOperator& a) {
    auto blocks = connected_blocks({&a.matrix()});
    auto bs = block_spectral_decompose(a, blocks);
    if (blocks.size() == 1) return std::move(bs.parts.front());
    const Eigen::Index d = a.dim();
    struct Item {
        double value;
        size_t block;
        Eigen::Index col;
    };
    std::vector<Item> items;
    for (size_t b = 0; b < blocks.size(); ++b)
        for (Eigen::Index c = 0; c < bs.parts[b].eigenvalues.size(); ++c)
            items.push_back({bs.parts[b].eigenvalues(c), b, c});
    std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.value < y.value; });
    SpectralDecomposition sd;
    sd.eigenvalues.resize(d);
    sd.eigenvectors = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const Item& it = items[static_cast<size_t>(k)];
        sd.eigenvalues(k) = it.value;
        const auto& idx = blocks[it.block];
        for (size_t r = 0; r < idx.size(); ++r)
            sd.eigenvectors(idx[r], k) = bs.parts[it.block].eigenvectors(static_cast<Eigen::Index>(r), it.col);
    }
    return sd;
}

double zero_tolerance(const HermitianOperator& a) { return kZeroBand * std::max(1.0, a.max_abs()); }

Projection Projection::from_matrix(const Matrix& p, int rank) {
    Projection out;
    out.op_ = HermitianOperator::symmetrized(p);
    out.rank_ = rank;
    return out;
}

Projection Projection::from_columns(const Matrix& v, int dim) {
    Projection p;
    if (v.cols() == 0) {
        p.op_ = HermitianOperator::symmetrized(Matrix::Zero(dim, dim));
    } else {
        p.op_ = HermitianOperator::symmetrized(v * v.adjoint());
    }
    p.rank_ = static_cast<int>(v.cols());
    return p;
}

Projection positive_part_projection(const HermitianOperator& a, const SpectralDecomposition& sd,
                                    Mode mode) {
    double tol = zero_tolerance(a);
    const int d = a.dim();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < d; ++i) {
        double l = sd.eigenvalues(i);
        bool in = mode == Mode::Strict ? l > tol : l >= -tol;
        if (in) keep.push_back(i);
    }
    Matrix v(d, static_cast<Eigen::Index>(keep.size()));
    for (size_t c = 0; c < keep.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = sd.eigenvectors.col(keep[c]);
    return Projection::from_columns(v, d);
}

Projection positive_part_projection(const HermitianOperator& a, Mode mode) {
    auto blocks = connected_blocks({&a.matrix()});
    if (blocks.size() == 1) return positive_part_projection(a, spectral_decompose(a), mode);
    auto bs = block_spectral_decompose(a, blocks);
    return projection_from_blocks(bs, zero_tolerance(a), a.dim(), mode);
}

Projection projection_from_blocks(const BlockSpectrum& bs, double tol, int dim, Mode mode) {
    Matrix p = Matrix::Zero(dim, dim);
    int rank = 0;
    for (size_t b = 0; b < bs.blocks.size(); ++b) {
        const auto& idx = bs.blocks[b];
        const auto& sd = bs.parts[b];
        Matrix sub = Matrix::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
        for (Eigen::Index c = 0; c < sd.eigenvalues.size(); ++c) {
            double l = sd.eigenvalues(c);
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

HermitianOperator matrix_function(const HermitianOperator& a, const std::function<double(double)>& f,
                                  DomainPolicy policy) {
    auto sd = spectral_decompose(a);
    RealVector fl(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < fl.size(); ++i) {
        double l = sd.eigenvalues(i);
        if (policy != DomainPolicy::Any && !(l > 0.0)) {
            if (policy == DomainPolicy::Reject || l < -zero_tolerance(a)) {
                std::ostringstream os;
                os << "eigenvalue " << l << " outside the function domain (0, inf)";
                throw DomainError(os.str());
            }
            l = kClipFloor;
        }
        if (policy == DomainPolicy::ClipFloor && l < kClipFloor) l = kClipFloor;
        fl(i) = f(l);
        if (std::isnan(fl(i))) {
            std::ostringstream os;
            os << "function undefined at eigenvalue " << l;
            throw DomainError(os.str());
        }
    }
    return HermitianOperator::symmetrized(sd.eigenvectors * fl.asDiagonal() * sd.eigenvectors.adjoint());
}

HermitianOperator matrix_log(const HermitianOperator& a, bool full_support) {
    return matrix_function(a, [](double x) { return std::log(x); },
                           full_support ? DomainPolicy::ClipFloor : DomainPolicy::Reject);
}

HermitianOperator matrix_power(const HermitianOperator& a, double p, bool full_support) {
    if (p >= 0.0 && !full_support)
        return matrix_function(a, [p](double x) { return x > 0.0 ? std::pow(x, p) : (p == 0.0 ? 1.0 : 0.0); },
                               DomainPolicy::Any);
    return matrix_function(a, [p](double x) { return std::pow(x, p); },
                           full_support ? DomainPolicy::ClipFloor : DomainPolicy::Reject);
}

HermitianOperator matrix_exp(const HermitianOperator& a) {
    return matrix_function(a, [](double x) { return std::exp(x); });
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
    const Matrix& x = a.matrix();
    const Matrix& y = b.matrix();
    const Eigen::Index p = x.rows(), q = y.rows();
    Matrix out(p * q, p * q);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) out.block(i * q, j * q, q, q) = x(i, j) * y;
    return HermitianOperator::symmetrized(out);
}

HermitianOperator tensor_power(const HermitianOperator& a, int n, long long cap) {
    if (n < 1) throw InputError("tensor power needs n >= 1");
    long double total = std::pow(static_cast<long double>(a.dim()), n);
    if (total > static_cast<long double>(cap)) {
        std::ostringstream os;
        os << "tensor power dimension " << a.dim() << "^" << n << " = " << static_cast<double>(total)
           << " exceeds cap " << cap;
        throw SizeError(os.str());
    }
    HermitianOperator out = a;
    for (int i = 1; i < n; ++i) out = kron(out, a);
    return out;
}

double trace_pair(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) throw InputError("trace_pair: dimension mismatch");
    const Matrix& x = a.matrix();
    const Matrix& y = b.matrix();
    cplx s = 0.0;
    double mag = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            cplx t = x(i, j) * y(j, i);
            s += t;
            mag += std::abs(t);
        }
    if (std::abs(s.imag()) > 1e-10 * std::max(1.0, mag))
        throw PropertyFailure("trace_pair: imaginary residual " + std::to_string(s.imag()));
    return s.real();
}

HermitianOperator operator_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw InputError(std::string("operator JSON: ") + e.what());
    }
    if (!j.contains("dim") || !j.contains("re")) throw InputError("operator JSON needs 'dim' and 're'");
    int d = j.at("dim").get<int>();
    if (d < 1) throw InputError("operator JSON: dim must be >= 1");
    auto grab = [&](const char* key, Matrix& m, bool real_part) {
        const auto& rows = j.at(key);
        if (!rows.is_array() || static_cast<int>(rows.size()) != d)
            throw InputError(std::string("operator JSON: '") + key + "' must have dim rows");
        for (int r = 0; r < d; ++r) {
            const auto& row = rows[static_cast<size_t>(r)];
            if (!row.is_array() || static_cast<int>(row.size()) != d)
                throw InputError(std::string("operator JSON: '") + key + "' row length mismatch");
            for (int c = 0; c < d; ++c) {
                double v = row[static_cast<size_t>(c)].get<double>();
                if (real_part)
                    m(r, c) = cplx(v, m(r, c).imag());
                else
                    m(r, c) = cplx(m(r, c).real(), v);
            }
        }
    };
    Matrix m = Matrix::Zero(d, d);
    try {
        grab("re", m, true);
        if (j.contains("im")) grab("im", m, false);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("operator JSON: ") + e.what());
    }
    return HermitianOperator::symmetrized(m, kIngestTol);
}

std::string operator_to_json_text(const HermitianOperator& a) {
    nlohmann::json j;
    j["dim"] = a.dim();
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int r = 0; r < a.dim(); ++r) {
        nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
        for (int c = 0; c < a.dim(); ++c) {
            rr.push_back(a.matrix()(r, c).real());
            ir.push_back(a.matrix()(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ir);
    }
    j["re"] = re;
    j["im"] = im;
    return j.dump();
}

}  // namespace infospec
