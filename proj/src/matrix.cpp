#include "dgcat/matrix.hpp"

#include <sstream>

namespace dgcat {

Vec zero_vec(int n, const Field& f)
{
    return Vec(static_cast<size_t>(n), Scalar::zero(f));
}

bool is_zero_vec(const Vec& v)
{
    for (const auto& x : v)
        if (!x.is_zero())
            return false;
    return true;
}

Vec add_vec(const Vec& a, const Vec& b)
{
    if (a.size() != b.size())
        throw DgError("vector size mismatch");
    Vec r = a;
    for (size_t i = 0; i < r.size(); ++i)
        r[i] += b[i];
    return r;
}

Vec sub_vec(const Vec& a, const Vec& b)
{
    if (a.size() != b.size())
        throw DgError("vector size mismatch");
    Vec r = a;
    for (size_t i = 0; i < r.size(); ++i)
        r[i] -= b[i];
    return r;
}

Vec scale_vec(const Scalar& c, const Vec& v)
{
    Vec r = v;
    for (auto& x : r)
        x *= c;
    return r;
}

SparseMat::SparseMat(int rows, int cols, const Field& f)
    : rows_(rows), cols_(cols), field_(f), data_(static_cast<size_t>(rows))
{
    if (rows < 0 || cols < 0)
        throw DgError("negative matrix dimension");
}

SparseMat SparseMat::identity(int n, const Field& f)
{
    SparseMat m(n, n, f);
    for (int i = 0; i < n; ++i)
        m.set(i, i, Scalar::one(f));
    return m;
}

SparseMat SparseMat::from_columns(int rows, const std::vector<Vec>& cols, const Field& f)
{
    SparseMat m(rows, static_cast<int>(cols.size()), f);
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
        const Vec& c = cols[static_cast<size_t>(j)];
        if (static_cast<int>(c.size()) != rows)
            throw DgError("column length mismatch");
        for (int i = 0; i < rows; ++i)
            if (!c[static_cast<size_t>(i)].is_zero())
                m.set(i, j, c[static_cast<size_t>(i)]);
    }
    return m;
}

Scalar SparseMat::get(int i, int j) const
{
    const auto& r = data_.at(static_cast<size_t>(i));
    auto it = r.find(j);
    return it == r.end() ? Scalar::zero(field_) : it->second;
}

void SparseMat::set(int i, int j, Scalar v)
{
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw DgError("matrix index out of range");
    auto& r = data_[static_cast<size_t>(i)];
    if (v.is_zero())
        r.erase(j);
    else
        r[j] = std::move(v);
}

void SparseMat::add_at(int i, int j, const Scalar& v)
{
    if (v.is_zero())
        return;
    auto& r = data_.at(static_cast<size_t>(i));
    auto [it, fresh] = r.emplace(j, v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero())
            r.erase(it);
    }
}

bool SparseMat::is_zero() const
{
    for (const auto& r : data_)
        if (!r.empty())
            return false;
    return true;
}

long SparseMat::nnz() const
{
    long n = 0;
    for (const auto& r : data_)
        n += static_cast<long>(r.size());
    return n;
}

void SparseMat::check_shape_(const SparseMat& o, const char* op) const
{
    if (!(field_ == o.field_))
        throw DgError(std::string("matrix field mismatch in ") + op);
}

SparseMat SparseMat::operator*(const SparseMat& o) const
{
    check_shape_(o, "mul");
    if (cols_ != o.rows_)
        throw DgError("matrix shape mismatch in mul");
    SparseMat m(rows_, o.cols_, field_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& [k, aik] : data_[static_cast<size_t>(i)])
            for (const auto& [j, bkj] : o.data_[static_cast<size_t>(k)])
                m.add_at(i, j, aik * bkj);
    return m;
}

SparseMat SparseMat::operator+(const SparseMat& o) const
{
    check_shape_(o, "add");
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw DgError("matrix shape mismatch in add");
    SparseMat m = *this;
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : o.data_[static_cast<size_t>(i)])
            m.add_at(i, j, v);
    return m;
}

SparseMat SparseMat::operator-(const SparseMat& o) const
{
    return *this + o.scaled(-Scalar::one(field_));
}

SparseMat SparseMat::scaled(const Scalar& c) const
{
    SparseMat m(rows_, cols_, field_);
    if (c.is_zero())
        return m;
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : data_[static_cast<size_t>(i)])
            m.set(i, j, v * c);
    return m;
}

SparseMat SparseMat::transposed() const
{
    SparseMat m(cols_, rows_, field_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : data_[static_cast<size_t>(i)])
            m.set(j, i, v);
    return m;
}

Vec SparseMat::apply(const Vec& x) const
{
    if (static_cast<int>(x.size()) != cols_)
        throw DgError("vector length mismatch in apply");
    Vec y = zero_vec(rows_, field_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : data_[static_cast<size_t>(i)])
            y[static_cast<size_t>(i)] += v * x[static_cast<size_t>(j)];
    return y;
}

Vec SparseMat::column(int j) const
{
    Vec c = zero_vec(rows_, field_);
    for (int i = 0; i < rows_; ++i) {
        auto it = data_[static_cast<size_t>(i)].find(j);
        if (it != data_[static_cast<size_t>(i)].end())
            c[static_cast<size_t>(i)] = it->second;
    }
    return c;
}

bool operator==(const SparseMat& a, const SparseMat& b)
{
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.data_ == b.data_;
}

std::string SparseMat::str() const
{
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j)
            os << get(i, j).str() << (j + 1 < cols_ ? " " : "");
        os << "\n";
    }
    return os.str();
}

namespace {

void axpy_row(std::map<int, Scalar>& dst, const Scalar& c, const std::map<int, Scalar>& src)
{
    for (const auto& [j, v] : src) {
        auto [it, fresh] = dst.emplace(j, c * v);
        if (!fresh) {
            it->second += c * v;
            if (it->second.is_zero())
                dst.erase(it);
        }
    }
}

}  // namespace

Echelon::Echelon(const SparseMat& a) : rows_(a.rows()), cols_(a.cols()), field_(a.field())
{
    /* working rows of [A | I] */
    std::vector<std::map<int, Scalar>> wa(static_cast<size_t>(rows_));
    std::vector<std::map<int, Scalar>> wt(static_cast<size_t>(rows_));
    for (int i = 0; i < rows_; ++i) {
        wa[static_cast<size_t>(i)] = a.row(i);
        wt[static_cast<size_t>(i)][i] = Scalar::one(field_);
    }
    std::vector<bool> used(static_cast<size_t>(rows_), false);
    std::vector<int> pivot_row;
    for (int col = 0; col < cols_; ++col) {
        int piv = -1;
        for (int i = 0; i < rows_; ++i) {
            if (used[static_cast<size_t>(i)])
                continue;
            if (wa[static_cast<size_t>(i)].count(col)) {
                piv = i;
                break;
            }
        }
        if (piv < 0)
            continue;
        used[static_cast<size_t>(piv)] = true;
        Scalar inv = wa[static_cast<size_t>(piv)][col].inverse();
        for (auto& [j, v] : wa[static_cast<size_t>(piv)])
            v *= inv;
        for (auto& [j, v] : wt[static_cast<size_t>(piv)])
            v *= inv;
        for (int i = 0; i < rows_; ++i) {
            if (i == piv)
                continue;
            auto it = wa[static_cast<size_t>(i)].find(col);
            if (it == wa[static_cast<size_t>(i)].end())
                continue;
            Scalar c = -it->second;
            axpy_row(wa[static_cast<size_t>(i)], c, wa[static_cast<size_t>(piv)]);
            axpy_row(wt[static_cast<size_t>(i)], c, wt[static_cast<size_t>(piv)]);
        }
        pivot_cols_.push_back(col);
        pivot_row.push_back(piv);
    }
    /* rows keep changing while later columns are eliminated; only the
     * fully reduced versions are kept */
    for (int piv : pivot_row) {
        rr_.push_back(wa[static_cast<size_t>(piv)]);
        tr_.push_back(wt[static_cast<size_t>(piv)]);
    }
    for (int i = 0; i < rows_; ++i)
        if (!used[static_cast<size_t>(i)])
            tnull_.push_back(wt[static_cast<size_t>(i)]);
}

std::optional<Vec> Echelon::solve(const Vec& b) const
{
    if (static_cast<int>(b.size()) != rows_)
        throw DgError("rhs length mismatch in solve");
    auto dot = [&](const std::map<int, Scalar>& row) {
        Scalar s = Scalar::zero(field_);
        for (const auto& [j, v] : row)
            s += v * b[static_cast<size_t>(j)];
        return s;
    };
    for (const auto& row : tnull_)
        if (!dot(row).is_zero())
            return std::nullopt;
    Vec x = zero_vec(cols_, field_);
    for (size_t k = 0; k < pivot_cols_.size(); ++k)
        x[static_cast<size_t>(pivot_cols_[k])] = dot(tr_[k]);
    /* pivot columns of the reduced rows may still hit free columns;
     * with x = 0 on free columns the pivot assignment is exact */
    return x;
}

std::vector<Vec> Echelon::kernel() const
{
    std::vector<bool> is_pivot(static_cast<size_t>(cols_), false);
    for (int c : pivot_cols_)
        is_pivot[static_cast<size_t>(c)] = true;
    std::vector<Vec> out;
    for (int free = 0; free < cols_; ++free) {
        if (is_pivot[static_cast<size_t>(free)])
            continue;
        Vec v = zero_vec(cols_, field_);
        v[static_cast<size_t>(free)] = Scalar::one(field_);
        for (size_t k = 0; k < pivot_cols_.size(); ++k) {
            auto it = rr_[k].find(free);
            if (it != rr_[k].end())
                v[static_cast<size_t>(pivot_cols_[k])] = -it->second;
        }
        out.push_back(std::move(v));
    }
    return out;
}

int rank(const SparseMat& a)
{
    return Echelon(a).rank();
}

std::optional<Vec> solve(const SparseMat& a, const Vec& b)
{
    return Echelon(a).solve(b);
}

std::vector<Vec> kernel_basis(const SparseMat& a)
{
    return Echelon(a).kernel();
}

std::vector<int> independent_columns(const SparseMat& a)
{
    return Echelon(a).pivot_cols();
}

SpanBuilder::SpanBuilder(int dim, const Field& f) : n_(dim), field_(f) {}

Vec SpanBuilder::residue(const Vec& v) const
{
    if (static_cast<int>(v.size()) != n_)
        throw DgError("vector length mismatch in span");
    Vec r = v;
    for (const auto& [piv, row] : rows_) {
        const Scalar& c = r[static_cast<size_t>(piv)];
        if (c.is_zero())
            continue;
        Scalar cc = c;
        for (int j = 0; j < n_; ++j)
            r[static_cast<size_t>(j)] -= cc * row[static_cast<size_t>(j)];
    }
    return r;
}

bool SpanBuilder::add(const Vec& v)
{
    Vec r = residue(v);
    int piv = -1;
    for (int j = 0; j < n_; ++j) {
        if (!r[static_cast<size_t>(j)].is_zero()) {
            piv = j;
            break;
        }
    }
    if (piv < 0)
        return false;
    Scalar inv = r[static_cast<size_t>(piv)].inverse();
    for (auto& x : r)
        x *= inv;
    /* keep rows reduced against each other */
    for (auto& [p, row] : rows_) {
        const Scalar c = row[static_cast<size_t>(piv)];
        if (c.is_zero())
            continue;
        for (int j = 0; j < n_; ++j)
            row[static_cast<size_t>(j)] -= c * r[static_cast<size_t>(j)];
    }
    rows_.emplace_back(piv, std::move(r));
    return true;
}

}  // namespace dgcat
