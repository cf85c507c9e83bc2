#include "lpvsyn/blockmat.hpp"

#include <sstream>

namespace lpvsyn {

Partition::Partition(std::vector<Index> parts) : parts_(std::move(parts)) {
    for (Index p : parts_) {
        if (p < 0) throw DimensionError("partition parts must be nonnegative");
        total_ += p;
    }
}

Index Partition::offset(Index i) const {
    Index off = 0;
    for (Index j = 0; j < i; ++j) off += parts_.at(static_cast<size_t>(j));
    return off;
}

Partition Partition::concat(const Partition& a, const Partition& b) {
    std::vector<Index> parts = a.parts_;
    parts.insert(parts.end(), b.parts_.begin(), b.parts_.end());
    return Partition(parts);
}

Partition Partition::asTwo() const {
    if (size() == 2) return *this;
    if (size() == 0) return Partition::two(0, 0);
    if (size() == 1) return Partition::two(part(0), 0);
    throw DimensionError("expected a partition of at most two parts, got " + to_string(*this));
}

BlockMatrix::BlockMatrix(Matrix m, Partition rp, Partition cp)
    : data(std::move(m)), rowPart(std::move(rp)), colPart(std::move(cp)) {
    if (data.rows() != rowPart.total() || data.cols() != colPart.total())
        throw DimensionError("matrix dimensions do not match partitions");
}

Eigen::Block<Matrix> BlockMatrix::block(Index i, Index j) {
    return data.block(rowPart.offset(i), colPart.offset(j), rowPart.part(i), colPart.part(j));
}

Eigen::Block<const Matrix> BlockMatrix::block(Index i, Index j) const {
    return data.block(rowPart.offset(i), colPart.offset(j), rowPart.part(i), colPart.part(j));
}

Matrix he(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("He() needs a square matrix");
    return m + m.transpose();
}

BlockMatrix he(const BlockMatrix& m) { return BlockMatrix(he(m.data), m.rowPart, m.colPart); }

Matrix project(const Matrix& m, const Partition& rowPart, const Partition& colPart, Projector which) {
    if (m.rows() != rowPart.total() || m.cols() != colPart.total())
        throw DimensionError("projection: matrix does not match partitions");
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    if (which == Projector::Right) {
        if (colPart.size() != 2 && colPart.size() != 1)
            throw DimensionError("right projector needs a 1x2 column partition");
        const Partition cp = colPart.asTwo();
        out.rightCols(cp.part(1)) = m.rightCols(cp.part(1));
        return out;
    }
    const Partition rp = rowPart.asTwo();
    const Partition cp = colPart.asTwo();
    if (which == Projector::Lower) {
        out = m;
        out.topRightCorner(rp.part(0), cp.part(1)).setZero();
    } else {  // StrictUpper
        out.topRightCorner(rp.part(0), cp.part(1)) = m.topRightCorner(rp.part(0), cp.part(1));
    }
    return out;
}

BlockMatrix project(const BlockMatrix& m, Projector which) {
    return BlockMatrix(project(m.data, m.rowPart, m.colPart, which), m.rowPart, m.colPart);
}

bool structure_check(const Matrix& m, const Partition& rowPart, const Partition& colPart,
                     const StructureMask& mask, double tol) {
    const Partition rp = rowPart.asTwo();
    const Partition cp = colPart.asTwo();
    if (m.rows() != rp.total() || m.cols() != cp.total())
        throw DimensionError("structure_check: matrix does not match partitions");
    for (auto [i, j] : mask.zeroBlocks) {
        if (i >= rp.size() || j >= cp.size())
            throw DimensionError("structure mask block index out of range");
        if (rp.part(i) == 0 || cp.part(j) == 0) continue;
        const auto blk = m.block(rp.offset(i), cp.offset(j), rp.part(i), cp.part(j));
        if (blk.cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

bool structure_check(const BlockMatrix& m, const StructureMask& mask, double tol) {
    return structure_check(m.data, m.rowPart, m.colPart, mask, tol);
}

void enforce_structure(Matrix& m, const Partition& rowPart, const Partition& colPart,
                       const StructureMask& mask) {
    const Partition rp = rowPart.asTwo();
    const Partition cp = colPart.asTwo();
    for (auto [i, j] : mask.zeroBlocks) {
        if (rp.part(i) == 0 || cp.part(j) == 0) continue;
        m.block(rp.offset(i), cp.offset(j), rp.part(i), cp.part(j)).setZero();
    }
}

std::string to_string(const Partition& p) {
    std::ostringstream os;
    os << "(";
    for (Index i = 0; i < p.size(); ++i) os << (i ? "," : "") << p.part(i);
    os << ")";
    return os.str();
}

}  // namespace lpvsyn
