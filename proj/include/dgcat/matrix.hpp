#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dgcat/scalar.hpp"

namespace dgcat {

using Vec = std::vector<Scalar>;  // dense column vector

Vec zero_vec(int n, const Field& f);
bool is_zero_vec(const Vec& v);
Vec add_vec(const Vec& a, const Vec& b);
Vec sub_vec(const Vec& a, const Vec& b);
Vec scale_vec(const Scalar& c, const Vec& v);

/* Sparse exact matrix, stored by rows. Pivoting is deterministic
 * (columns left to right, lowest row index) so representatives and
 * solutions are bit-reproducible. */
class SparseMat {
  public:
    SparseMat() = default;
    SparseMat(int rows, int cols, const Field& f);
    static SparseMat identity(int n, const Field& f);
    static SparseMat from_columns(int rows, const std::vector<Vec>& cols, const Field& f);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Field& field() const { return field_; }

    Scalar get(int i, int j) const;
    void set(int i, int j, Scalar v);  // erases the entry on zero
    void add_at(int i, int j, const Scalar& v);
    const std::map<int, Scalar>& row(int i) const { return data_[static_cast<size_t>(i)]; }

    bool is_zero() const;
    long nnz() const;

    SparseMat operator*(const SparseMat& o) const;
    SparseMat operator+(const SparseMat& o) const;
    SparseMat operator-(const SparseMat& o) const;
    SparseMat scaled(const Scalar& c) const;
    SparseMat transposed() const;
    Vec apply(const Vec& x) const;
    Vec column(int j) const;

    friend bool operator==(const SparseMat& a, const SparseMat& b);

    std::string str() const;

  private:
    int rows_ = 0, cols_ = 0;
    Field field_;
    std::vector<std::map<int, Scalar>> data_;

    void check_shape_(const SparseMat& o, const char* op) const;
};

/* Row echelon form of a fixed matrix, reusable for repeated solves.
 * Keeps the row transform so Ax = b feasibility and particular
 * solutions are exact for arbitrary right-hand sides. */
class Echelon {
  public:
    explicit Echelon(const SparseMat& a);

    int rank() const { return static_cast<int>(pivot_cols_.size()); }
    const std::vector<int>& pivot_cols() const { return pivot_cols_; }
    /* one exact solution of Ax = b, or nullopt when infeasible */
    std::optional<Vec> solve(const Vec& b) const;
    bool in_image(const Vec& b) const { return solve(b).has_value(); }
    /* deterministic kernel basis (one vector per free column, ascending) */
    std::vector<Vec> kernel() const;

  private:
    int rows_ = 0, cols_ = 0;
    Field field_;
    std::vector<std::map<int, Scalar>> rr_;     // reduced rows of A, one per pivot
    std::vector<std::map<int, Scalar>> tr_;     // matching rows of the transform T
    std::vector<std::map<int, Scalar>> tnull_;  // transform rows with zero A-row
    std::vector<int> pivot_cols_;
};

int rank(const SparseMat& a);
std::optional<Vec> solve(const SparseMat& a, const Vec& b);
std::vector<Vec> kernel_basis(const SparseMat& a);
std::vector<int> independent_columns(const SparseMat& a);

/* Incremental span with exact reduction; used for image spans and
 * quotient-by-subspace representative picking. */
class SpanBuilder {
  public:
    SpanBuilder(int dim, const Field& f);
    /* reduce v against the current span; returns the residue */
    Vec residue(const Vec& v) const;
    /* try to add v; returns true when v enlarged the span */
    bool add(const Vec& v);
    bool contains(const Vec& v) const { return is_zero_vec(residue(v)); }
    int dim() const { return static_cast<int>(rows_.size()); }

  private:
    int n_;
    Field field_;
    std::vector<std::pair<int, Vec>> rows_;  // (pivot index, reduced vector), pivot normalized to 1
};

}  // namespace dgcat
