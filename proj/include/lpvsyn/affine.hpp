#pragma once

#include "lpvsyn/blockmat.hpp"

#include <map>
#include <string>
#include <vector>

namespace lpvsyn {

// Pool of scalar decision variables. Indices are handed out in construction
// order, which fixes the variable ordering of every assembled problem.
class VarPool {
  public:
    int fresh(const std::string& name) {
        names_.push_back(name);
        return static_cast<int>(names_.size()) - 1;
    }
    int count() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_.at(static_cast<size_t>(i)); }

  private:
    std::vector<std::string> names_;
};

// Matrix-valued expression, affine in the pool variables:
//   value(x) = c + sum_i x_i * terms[i]
class AffineMatrix {
  public:
    AffineMatrix() = default;
    explicit AffineMatrix(Matrix constant) : c_(std::move(constant)) {}
    static AffineMatrix constant(Matrix m) { return AffineMatrix(std::move(m)); }
    static AffineMatrix zero(Index rows, Index cols) { return AffineMatrix(Matrix::Zero(rows, cols)); }
    static AffineMatrix identity(Index n) { return AffineMatrix(Matrix::Identity(n, n)); }
    static AffineMatrix variable(int var, Index rows, Index cols, double coeffScale = 1.0);

    Index rows() const { return c_.rows(); }
    Index cols() const { return c_.cols(); }
    const Matrix& constant() const { return c_; }
    const std::map<int, Matrix>& terms() const { return terms_; }
    bool isConstant() const { return terms_.empty(); }

    Matrix eval(const Vector& x) const;

    AffineMatrix transpose() const;
    AffineMatrix operator+(const AffineMatrix& o) const;
    AffineMatrix operator-(const AffineMatrix& o) const;
    AffineMatrix operator-() const;
    AffineMatrix scaled(double s) const;
    AffineMatrix leftMul(const Matrix& m) const;    // m * this
    AffineMatrix rightMul(const Matrix& m) const;   // this * m
    AffineMatrix blockRef(Index row, Index col, Index nr, Index nc) const;
    AffineMatrix projected(const Partition& rp, const Partition& cp, Projector which) const;

    // Caller asserts the target block is free; adds entry-wise.
    void addTerm(int var, const Matrix& coeff);
    void addConstant(const Matrix& m) { c_ += m; }
    void setConstant(Matrix m) { c_ = std::move(m); }

    static AffineMatrix hcat(const std::vector<AffineMatrix>& parts);
    static AffineMatrix vcat(const std::vector<AffineMatrix>& parts);
    static AffineMatrix blockDiag(const std::vector<AffineMatrix>& parts);
    // 2D block assembly; all entries in a row must share heights, per column widths.
    static AffineMatrix fromBlocks(const std::vector<std::vector<AffineMatrix>>& blocks);

    AffineMatrix heSym() const;  // this + this^T

  private:
    Matrix c_{Matrix::Zero(0, 0)};
    std::map<int, Matrix> terms_;
};

// Product of two affine expressions, with the quadratic part tracked
// explicitly. The structured variables of the synthesis theorems are built so
// that all quadratic terms cancel (possibly after a projection); toAffine()
// verifies this and throws if a genuine quadratic remainder survives.
class QuadMatrix {
  public:
    QuadMatrix(const AffineMatrix& a, const AffineMatrix& b);  // a * b

    QuadMatrix& project(const Partition& rp, const Partition& cp, Projector which);
    AffineMatrix toAffine(double tol = 1e-9) const;
    double maxQuadCoeff() const;

  private:
    AffineMatrix affine_;
    std::map<std::pair<int, int>, Matrix> quad_;
};

}  // namespace lpvsyn
