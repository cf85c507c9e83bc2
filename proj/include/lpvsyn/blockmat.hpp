#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lpvsyn {

using Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Ordered tuple of nonnegative block sizes. A part of size 0 is legal and
// collapses the block grid, e.g. (a1,0) behaves like the 1-part tuple a1.
class Partition {
  public:
    Partition() = default;
    explicit Partition(std::vector<Index> parts);
    Partition(std::initializer_list<Index> parts) : Partition(std::vector<Index>(parts)) {}
    static Partition single(Index n) { return Partition({n}); }
    static Partition two(Index a, Index b) { return Partition({a, b}); }

    Index size() const { return static_cast<Index>(parts_.size()); }
    Index part(Index i) const { return parts_.at(static_cast<size_t>(i)); }
    Index total() const { return total_; }
    Index offset(Index i) const;
    const std::vector<Index>& parts() const { return parts_; }

    // (a,b) concatenated into one tuple, e.g. l = (r,s).
    static Partition concat(const Partition& a, const Partition& b);
    // Degenerate 2-part view: () -> (0,0), (a) -> (a,0), (a,b) unchanged.
    Partition asTwo() const;

    bool operator==(const Partition& o) const { return parts_ == o.parts_; }

  private:
    std::vector<Index> parts_;
    Index total_ = 0;
};

// Dense matrix with row/column block partitions.
struct BlockMatrix {
    Matrix data;
    Partition rowPart;
    Partition colPart;

    BlockMatrix() = default;
    BlockMatrix(Matrix m, Partition rp, Partition cp);

    Index rows() const { return data.rows(); }
    Index cols() const { return data.cols(); }
    Eigen::Block<Matrix> block(Index i, Index j);
    Eigen::Block<const Matrix> block(Index i, Index j) const;
};

// Set of block positions required to be exactly zero on the partition grid.
struct StructureMask {
    std::set<std::pair<Index, Index>> zeroBlocks;

    static StructureMask none() { return {}; }
    // [[*,0],[*,*]]
    static StructureMask lower() { return {{{0, 1}}}; }
    // [[0,*],[0,0]]
    static StructureMask strictUpper() { return {{{0, 0}, {1, 0}, {1, 1}}}; }
    // [[0],[*]] : top row block zero
    static StructureMask topZero() { return {{{0, 0}, {0, 1}}}; }
    // [[*,0],[*,0]] : right column block zero
    static StructureMask rightZero() { return {{{0, 1}, {1, 1}}}; }
    static StructureMask zero() { return {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}}; }
};

enum class Projector { Lower, StrictUpper, Right };

// He(P) := P + P^T
Matrix he(const Matrix& m);
BlockMatrix he(const BlockMatrix& m);

// Projections onto the lower / strict upper / right block part of a 2x2
// (or 1x2 for Right) partitioned matrix. Degenerate partitions are allowed.
Matrix project(const Matrix& m, const Partition& rowPart, const Partition& colPart, Projector which);
BlockMatrix project(const BlockMatrix& m, Projector which);

// True iff every block listed in the mask has max-abs entry <= tol.
bool structure_check(const Matrix& m, const Partition& rowPart, const Partition& colPart,
                     const StructureMask& mask, double tol);
bool structure_check(const BlockMatrix& m, const StructureMask& mask, double tol);

// Overwrites masked blocks with exact zeros.
void enforce_structure(Matrix& m, const Partition& rowPart, const Partition& colPart,
                       const StructureMask& mask);

std::string to_string(const Partition& p);

}  // namespace lpvsyn
