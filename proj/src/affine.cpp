#include "lpvsyn/affine.hpp"

namespace lpvsyn {

AffineMatrix AffineMatrix::variable(int var, Index rows, Index cols, double coeffScale) {
    AffineMatrix a = zero(rows, cols);
    a.terms_[var] = Matrix::Constant(rows, cols, coeffScale);
    if (rows != 1 || cols != 1)
        throw DimensionError("AffineMatrix::variable creates scalar entries only");
    return a;
}

Matrix AffineMatrix::eval(const Vector& x) const {
    Matrix v = c_;
    for (const auto& [i, coeff] : terms_) v += x(i) * coeff;
    return v;
}

AffineMatrix AffineMatrix::transpose() const {
    AffineMatrix out(Matrix(c_.transpose()));
    for (const auto& [i, coeff] : terms_) out.terms_[i] = coeff.transpose();
    return out;
}

AffineMatrix AffineMatrix::operator+(const AffineMatrix& o) const {
    if (rows() != o.rows() || cols() != o.cols()) throw DimensionError("affine +: size mismatch");
    AffineMatrix out(c_ + o.c_);
    out.terms_ = terms_;
    for (const auto& [i, coeff] : o.terms_) {
        auto it = out.terms_.find(i);
        if (it == out.terms_.end())
            out.terms_[i] = coeff;
        else
            it->second += coeff;
    }
    return out;
}

AffineMatrix AffineMatrix::operator-(const AffineMatrix& o) const { return *this + o.scaled(-1.0); }

AffineMatrix AffineMatrix::operator-() const { return scaled(-1.0); }

AffineMatrix AffineMatrix::scaled(double s) const {
    AffineMatrix out(Matrix(s * c_));
    for (const auto& [i, coeff] : terms_) out.terms_[i] = s * coeff;
    return out;
}

AffineMatrix AffineMatrix::leftMul(const Matrix& m) const {
    if (m.cols() != rows()) throw DimensionError("affine leftMul: size mismatch");
    AffineMatrix out(Matrix(m * c_));
    for (const auto& [i, coeff] : terms_) out.terms_[i] = m * coeff;
    return out;
}

AffineMatrix AffineMatrix::rightMul(const Matrix& m) const {
    if (cols() != m.rows()) throw DimensionError("affine rightMul: size mismatch");
    AffineMatrix out(Matrix(c_ * m));
    for (const auto& [i, coeff] : terms_) out.terms_[i] = coeff * m;
    return out;
}

AffineMatrix AffineMatrix::blockRef(Index row, Index col, Index nr, Index nc) const {
    AffineMatrix out(Matrix(c_.block(row, col, nr, nc)));
    for (const auto& [i, coeff] : terms_) {
        Matrix b = coeff.block(row, col, nr, nc);
        if (b.cwiseAbs().maxCoeff() > 0.0) out.terms_[i] = std::move(b);
    }
    return out;
}

AffineMatrix AffineMatrix::projected(const Partition& rp, const Partition& cp, Projector which) const {
    AffineMatrix out(project(c_, rp, cp, which));
    for (const auto& [i, coeff] : terms_) {
        Matrix p = project(coeff, rp, cp, which);
        if (p.cwiseAbs().maxCoeff() > 0.0) out.terms_[i] = std::move(p);
    }
    return out;
}

void AffineMatrix::addTerm(int var, const Matrix& coeff) {
    if (coeff.rows() != rows() || coeff.cols() != cols())
        throw DimensionError("affine addTerm: size mismatch");
    auto it = terms_.find(var);
    if (it == terms_.end())
        terms_[var] = coeff;
    else
        it->second += coeff;
}

AffineMatrix AffineMatrix::hcat(const std::vector<AffineMatrix>& parts) {
    std::vector<std::vector<AffineMatrix>> row{parts};
    return fromBlocks(row);
}

AffineMatrix AffineMatrix::vcat(const std::vector<AffineMatrix>& parts) {
    std::vector<std::vector<AffineMatrix>> col;
    col.reserve(parts.size());
    for (const auto& p : parts) col.push_back({p});
    return fromBlocks(col);
}

AffineMatrix AffineMatrix::blockDiag(const std::vector<AffineMatrix>& parts) {
    Index n = parts.size();
    std::vector<std::vector<AffineMatrix>> blocks(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (i == j)
                blocks[i].push_back(parts[i]);
            else
                blocks[i].push_back(zero(parts[i].rows(), parts[j].cols()));
        }
    }
    return fromBlocks(blocks);
}

AffineMatrix AffineMatrix::fromBlocks(const std::vector<std::vector<AffineMatrix>>& blocks) {
    if (blocks.empty()) return zero(0, 0);
    const size_t ncols = blocks.front().size();
    Index totalRows = 0, totalCols = 0;
    for (const auto& row : blocks) {
        if (row.size() != ncols) throw DimensionError("fromBlocks: ragged block rows");
        totalRows += row.front().rows();
    }
    for (const auto& b : blocks.front()) totalCols += b.cols();

    AffineMatrix out = zero(totalRows, totalCols);
    Index r0 = 0;
    for (const auto& row : blocks) {
        Index c0 = 0;
        const Index h = row.front().rows();
        for (const auto& b : row) {
            if (b.rows() != h) throw DimensionError("fromBlocks: inconsistent block heights");
            out.c_.block(r0, c0, b.rows(), b.cols()) = b.c_;
            for (const auto& [i, coeff] : b.terms_) {
                auto it = out.terms_.find(i);
                if (it == out.terms_.end())
                    it = out.terms_.emplace(i, Matrix::Zero(totalRows, totalCols)).first;
                it->second.block(r0, c0, b.rows(), b.cols()) += coeff;
            }
            c0 += b.cols();
        }
        r0 += h;
    }
    return out;
}

AffineMatrix AffineMatrix::heSym() const { return *this + transpose(); }

QuadMatrix::QuadMatrix(const AffineMatrix& a, const AffineMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("quad product: size mismatch");
    affine_ = AffineMatrix(Matrix(a.constant() * b.constant()));
    for (const auto& [i, coeff] : a.terms()) affine_.addTerm(i, coeff * b.constant());
    for (const auto& [j, coeff] : b.terms()) affine_.addTerm(j, a.constant() * coeff);
    for (const auto& [i, ca] : a.terms())
        for (const auto& [j, cb] : b.terms()) {
            Matrix q = ca * cb;
            if (q.cwiseAbs().maxCoeff() == 0.0) continue;
            auto key = std::make_pair(i, j);
            auto it = quad_.find(key);
            if (it == quad_.end())
                quad_[key] = std::move(q);
            else
                it->second += q;
        }
}

QuadMatrix& QuadMatrix::project(const Partition& rp, const Partition& cp, Projector which) {
    affine_ = affine_.projected(rp, cp, which);
    for (auto it = quad_.begin(); it != quad_.end();) {
        it->second = lpvsyn::project(it->second, rp, cp, which);
        if (it->second.cwiseAbs().maxCoeff() == 0.0)
            it = quad_.erase(it);
        else
            ++it;
    }
    return *this;
}

double QuadMatrix::maxQuadCoeff() const {
    double m = 0.0;
    for (const auto& [key, coeff] : quad_) m = std::max(m, coeff.cwiseAbs().maxCoeff());
    return m;
}

AffineMatrix QuadMatrix::toAffine(double tol) const {
    if (maxQuadCoeff() > tol)
        throw std::logic_error("expression is genuinely quadratic; structured cancellation failed "
                               "(residual " + std::to_string(maxQuadCoeff()) + ")");
    return affine_;
}

}  // namespace lpvsyn
