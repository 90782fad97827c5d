#include "dgcat/complex.hpp"

#include <algorithm>
#include <sstream>

namespace dgcat {

void Complex::set_dim(int deg, int dim)
{
    if (dim < 0)
        throw DgError("negative dimension");
    if (dim == 0)
        dim_.erase(deg);
    else
        dim_[deg] = dim;
}

void Complex::set_diff(int deg, SparseMat m)
{
    if (m.rows() != dim(deg + 1) || m.cols() != dim(deg))
        throw DgError("differential shape mismatch at degree " + std::to_string(deg));
    if (m.is_zero())
        diff_.erase(deg);
    else
        diff_[deg] = std::move(m);
}

void Complex::restrict_known(int lo, int hi)
{
    if (lo > hi)
        throw DgError("bad known range");
    known_lo_ = lo;
    known_hi_ = hi;
}

bool Complex::degree_known(int d) const
{
    if (!known_lo_)
        return true;
    return *known_lo_ <= d && d <= *known_hi_;
}

int Complex::dim(int d) const
{
    auto it = dim_.find(d);
    if (it != dim_.end())
        return it->second;
    if (!degree_known(d))
        throw DgError("dimension requested at unknown degree " + std::to_string(d));
    return 0;
}

SparseMat Complex::diff(int d) const
{
    auto it = diff_.find(d);
    if (it == diff_.end())
        return SparseMat(dim(d + 1), dim(d), field_);
    return it->second;
}

std::vector<int> Complex::support() const
{
    std::vector<int> s;
    for (const auto& [d, n] : dim_)
        if (n > 0)
            s.push_back(d);
    return s;
}

int Complex::total_dim() const
{
    int t = 0;
    for (const auto& [d, n] : dim_)
        t += n;
    return t;
}

void Complex::validate() const
{
    for (const auto& [d, m] : diff_) {
        if (m.rows() != dim(d + 1) || m.cols() != dim(d))
            throw DgError("differential shape mismatch at degree " + std::to_string(d));
        if (!(m.field() == field_))
            throw DgError("differential field mismatch");
    }
    for (const auto& [d, n] : dim_) {
        if (!degree_known(d - 1) || !degree_known(d + 1))
            continue;
        SparseMat sq = diff(d) * diff(d - 1);
        if (!sq.is_zero())
            throw DgError("d^2 != 0 at degree " + std::to_string(d - 1));
    }
}

bool operator==(const Complex& a, const Complex& b)
{
    if (!(a.field_ == b.field_) || a.dim_ != b.dim_)
        return false;
    auto degrees = a.support();
    for (int d : degrees) {
        if (a.dim(d + 1) == 0)
            continue;
        if (!(a.diff(d) == b.diff(d)))
            return false;
    }
    return true;
}

std::string Complex::str() const
{
    std::ostringstream os;
    for (const auto& [d, n] : dim_)
        os << "deg " << d << " dim " << n << "\n";
    for (const auto& [d, m] : diff_) {
        if (m.is_zero())
            continue;
        os << "d " << d << " =";
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                os << " " << m.get(i, j).str();
        os << "\n";
    }
    return os.str();
}

Complex sphere(int m, const Field& f)
{
    Complex c(f);
    c.set_dim(m, 1);
    return c;
}

Complex disk(int n, const Field& f)
{
    Complex c(f);
    c.set_dim(n - 2, 1);
    c.set_dim(n - 1, 1);
    SparseMat d(1, 1, f);
    d.set(0, 0, Scalar::one(f));
    c.set_diff(n - 2, std::move(d));
    return c;
}

Complex direct_sum(const Complex& a, const Complex& b)
{
    if (!(a.field() == b.field()))
        throw DgError("field mismatch in direct sum");
    Complex c(a.field());
    std::map<int, int> dims;
    for (int d : a.support())
        dims[d] += a.dim(d);
    for (int d : b.support())
        dims[d] += b.dim(d);
    for (const auto& [d, n] : dims)
        c.set_dim(d, n);
    for (const auto& [d, n] : dims) {
        if (c.dim(d + 1) == 0)
            continue;
        SparseMat m(c.dim(d + 1), c.dim(d), a.field());
        const SparseMat da = a.diff(d), db = b.diff(d);
        for (int i = 0; i < da.rows(); ++i)
            for (const auto& [j, v] : da.row(i))
                m.set(i, j, v);
        for (int i = 0; i < db.rows(); ++i)
            for (const auto& [j, v] : db.row(i))
                m.set(a.dim(d + 1) + i, a.dim(d) + j, v);
        c.set_diff(d, std::move(m));
    }
    c.validate();
    return c;
}

Complex shift(const Complex& a, int k)
{
    Complex c(a.field());
    for (int d : a.support())
        c.set_dim(d - k, a.dim(d));
    Scalar sign = (k % 2 == 0) ? Scalar::one(a.field()) : -Scalar::one(a.field());
    for (int d : a.support())
        if (a.dim(d + 1) > 0)
            c.set_diff(d - k, a.diff(d).scaled(sign));
    return c;
}

SparseMat GradedMap::at(int d) const
{
    auto it = comp.find(d);
    if (it != comp.end())
        return it->second;
    return SparseMat(target.dim(d + degree), source.dim(d), source.field());
}

void GradedMap::set(int d, SparseMat m)
{
    if (m.rows() != target.dim(d + degree) || m.cols() != source.dim(d))
        throw DgError("graded map component shape mismatch at degree " + std::to_string(d));
    if (m.is_zero())
        comp.erase(d);
    else
        comp[d] = std::move(m);
}

bool GradedMap::commutes() const
{
    for (int d : source.support()) {
        if (!source.degree_known(d + 1) || !target.degree_known(d + degree + 1))
            continue;
        SparseMat lhs = target.diff(d + degree) * at(d);
        SparseMat rhs = at(d + 1) * source.diff(d);
        if (!(lhs == rhs))
            return false;
    }
    return true;
}

void GradedMap::validate_chain() const
{
    if (degree != 0)
        throw DgError("chain map must have degree 0");
    if (!commutes())
        throw DgError("map does not commute with differentials");
}

bool GradedMap::is_identity() const
{
    if (degree != 0)
        return false;
    for (int d : source.support()) {
        if (source.dim(d) != target.dim(d))
            return false;
        if (!(at(d) == SparseMat::identity(source.dim(d), source.field())))
            return false;
    }
    for (int d : target.support())
        if (source.dim(d) != target.dim(d))
            return false;
    return true;
}

GradedMap identity_map(const Complex& c)
{
    GradedMap m{c, c, 0, {}};
    for (int d : c.support())
        m.comp[d] = SparseMat::identity(c.dim(d), c.field());
    return m;
}

GradedMap zero_map(const Complex& src, const Complex& dst, int degree)
{
    return GradedMap{src, dst, degree, {}};
}

GradedMap differential_map(const Complex& c)
{
    GradedMap m{c, c, 1, {}};
    for (int d : c.support())
        if (c.degree_known(d + 1) && c.dim(d + 1) > 0)
            m.comp[d] = c.diff(d);
    return m;
}

GradedMap compose(const GradedMap& g, const GradedMap& f)
{
    GradedMap m{f.source, g.target, f.degree + g.degree, {}};
    for (int d : f.source.support()) {
        SparseMat c = g.at(d + f.degree) * f.at(d);
        if (!c.is_zero())
            m.comp[d] = std::move(c);
    }
    return m;
}

GradedMap map_add(const GradedMap& a, const GradedMap& b)
{
    if (a.degree != b.degree)
        throw DgError("degree mismatch in map addition");
    GradedMap m{a.source, a.target, a.degree, {}};
    for (int d : a.source.support()) {
        SparseMat c = a.at(d) + b.at(d);
        if (!c.is_zero())
            m.comp[d] = std::move(c);
    }
    return m;
}

bool map_equal(const GradedMap& a, const GradedMap& b)
{
    if (a.degree != b.degree)
        return false;
    for (int d : a.source.support())
        if (!(a.at(d) == b.at(d)))
            return false;
    for (int d : b.source.support())
        if (!(a.at(d) == b.at(d)))
            return false;
    return true;
}

ConeResult cone(const GradedMap& f)
{
    f.validate_chain();
    const Complex& a = f.source;
    const Complex& b = f.target;
    const Field& k = a.field();
    Complex c(k);
    std::map<int, std::pair<int, int>> parts;  // degree -> (dim b, dim a[+1])
    for (int d : b.support())
        parts[d].first = b.dim(d);
    for (int d : a.support())
        parts[d - 1].second = a.dim(d);
    for (const auto& [d, p] : parts)
        c.set_dim(d, p.first + p.second);
    for (const auto& [d, p] : parts) {
        if (c.dim(d + 1) == 0)
            continue;
        int bt = (parts.count(d + 1)) ? parts.at(d + 1).first : 0;
        SparseMat m(c.dim(d + 1), c.dim(d), k);
        /* d(y, x) = (dy + f(x), -dx) */
        const SparseMat db = b.diff(d);
        for (int i = 0; i < db.rows(); ++i)
            for (const auto& [j, v] : db.row(i))
                m.set(i, j, v);
        const SparseMat fx = f.at(d + 1);
        for (int i = 0; i < fx.rows(); ++i)
            for (const auto& [j, v] : fx.row(i))
                m.set(i, p.first + j, v);
        const SparseMat da = a.diff(d + 1);
        for (int i = 0; i < da.rows(); ++i)
            for (const auto& [j, v] : da.row(i))
                m.set(bt + i, p.first + j, -v);
        c.set_diff(d, std::move(m));
    }
    c.validate();

    GradedMap incl{b, c, 0, {}};
    for (int d : b.support()) {
        SparseMat m(c.dim(d), b.dim(d), k);
        for (int i = 0; i < b.dim(d); ++i)
            m.set(i, i, Scalar::one(k));
        incl.comp[d] = std::move(m);
    }
    incl.validate_chain();

    Complex a1 = shift(a, 1);
    GradedMap proj{c, a1, 0, {}};
    for (const auto& [d, p] : parts) {
        if (p.second == 0)
            continue;
        SparseMat m(p.second, c.dim(d), k);
        for (int i = 0; i < p.second; ++i)
            m.set(i, p.first + i, Scalar::one(k));
        proj.comp[d] = std::move(m);
    }
    proj.validate_chain();
    return ConeResult{std::move(c), std::move(incl), std::move(proj)};
}

GradedMap contraction_of_cone_id(int m, const Field& f)
{
    Complex d = disk(m + 1, f);
    GradedMap h{d, d, -1, {}};
    SparseMat c(1, 1, f);
    c.set(0, 0, Scalar::one(f));
    h.comp[m] = std::move(c);
    /* dh + hd = id, checked exactly */
    GradedMap lhs = map_add(compose(differential_map(d), h), compose(h, differential_map(d)));
    if (!map_equal(lhs, identity_map(d)))
        throw DgError("contraction identity failed");
    return h;
}

HomComplex hom_complex(const Complex& a, const Complex& b)
{
    if (!(a.field() == b.field()))
        throw DgError("field mismatch in hom complex");
    const Field& k = a.field();
    HomComplex h;
    h.a = a;
    h.b = b;
    h.cx = Complex(k);
    std::vector<int> sa = a.support(), sb = b.support();
    if (sa.empty() || sb.empty())
        return h;
    int nlo = sb.front() - sa.back(), nhi = sb.back() - sa.front();
    for (int n = nlo; n <= nhi; ++n) {
        std::vector<std::tuple<int, int, int>> basis;
        for (int i : sa) {
            int j = i + n;
            if (b.dim(j) == 0)
                continue;
            for (int r = 0; r < a.dim(i); ++r)
                for (int c = 0; c < b.dim(j); ++c)
                    basis.emplace_back(i, r, c);
        }
        if (!basis.empty()) {
            h.cx.set_dim(n, static_cast<int>(basis.size()));
            h.basis[n] = std::move(basis);
        }
    }
    /* d(phi) = d_b . phi - (-1)^n phi . d_a */
    for (int n = nlo; n <= nhi; ++n) {
        if (h.cx.dim(n) == 0 || h.cx.dim(n + 1) == 0)
            continue;
        SparseMat m(h.cx.dim(n + 1), h.cx.dim(n), k);
        Scalar sgn = (((n % 2) + 2) % 2 == 0) ? -Scalar::one(k) : Scalar::one(k);
        const auto& bs = h.basis.at(n);
        for (int col = 0; col < static_cast<int>(bs.size()); ++col) {
            auto [i, r, c] = bs[static_cast<size_t>(col)];
            const SparseMat db = b.diff(i + n);
            for (int c2 = 0; c2 < db.rows(); ++c2) {
                Scalar v = db.get(c2, c);
                if (v.is_zero())
                    continue;
                int row = h.index_of(n + 1, i, r, c2);
                if (row >= 0)
                    m.add_at(row, col, v);
            }
            const SparseMat da = a.diff(i - 1);
            for (int r2 = 0; r2 < da.cols(); ++r2) {
                Scalar v = da.get(r, r2);
                if (v.is_zero())
                    continue;
                int row = h.index_of(n + 1, i - 1, r2, c);
                if (row >= 0)
                    m.add_at(row, col, sgn * v);
            }
        }
        h.cx.set_diff(n, std::move(m));
    }
    h.cx.validate();
    return h;
}

int HomComplex::index_of(int n, int i, int r, int c) const
{
    auto it = basis.find(n);
    if (it == basis.end())
        return -1;
    const auto& bs = it->second;
    auto key = std::make_tuple(i, r, c);
    auto jt = std::lower_bound(bs.begin(), bs.end(), key);
    if (jt == bs.end() || *jt != key)
        return -1;
    return static_cast<int>(jt - bs.begin());
}

Vec HomComplex::to_vec(const GradedMap& f) const
{
    int n = f.degree;
    Vec v = zero_vec(cx.dim(n), cx.field());
    auto it = basis.find(n);
    if (it == basis.end()) {
        for (const auto& [d, m] : f.comp)
            if (!m.is_zero())
                throw DgError("hom coordinates: map degree outside hom support");
        return v;
    }
    for (size_t idx = 0; idx < it->second.size(); ++idx) {
        auto [i, r, c] = it->second[idx];
        v[idx] = f.at(i).get(c, r);
    }
    return v;
}

GradedMap HomComplex::to_map(int n, const Vec& coords) const
{
    GradedMap f{a, b, n, {}};
    auto it = basis.find(n);
    if (it == basis.end())
        return f;
    if (coords.size() != it->second.size())
        throw DgError("hom coordinate length mismatch");
    for (size_t idx = 0; idx < it->second.size(); ++idx) {
        if (coords[idx].is_zero())
            continue;
        auto [i, r, c] = it->second[idx];
        SparseMat m = f.at(i);
        m.set(c, r, coords[idx]);
        f.set(i, std::move(m));
    }
    return f;
}

GradedMap hom_post_compose(const HomComplex& hab, const HomComplex& hab2, const GradedMap& p)
{
    p.validate_chain();
    GradedMap q{hab.cx, hab2.cx, 0, {}};
    for (const auto& [n, bs] : hab.basis) {
        if (hab2.cx.dim(n) == 0)
            continue;
        SparseMat m(hab2.cx.dim(n), hab.cx.dim(n), hab.cx.field());
        for (int col = 0; col < static_cast<int>(bs.size()); ++col) {
            auto [i, r, c] = bs[static_cast<size_t>(col)];
            const SparseMat pc = p.at(i + n);
            for (int c2 = 0; c2 < pc.rows(); ++c2) {
                Scalar v = pc.get(c2, c);
                if (v.is_zero())
                    continue;
                int row = hab2.index_of(n, i, r, c2);
                if (row >= 0)
                    m.add_at(row, col, v);
            }
        }
        if (!m.is_zero())
            q.comp[n] = std::move(m);
    }
    q.validate_chain();
    return q;
}

HomologyResult homology(const Complex& c, GradedWindow w)
{
    for (int d = w.lo - 1; d <= w.hi + 1; ++d)
        if (!c.degree_known(d))
            throw DgError("homology window " + w.str() + " not flanked by available degrees (degree " + std::to_string(d) + " unknown)");
    HomologyResult res;
    res.window = w;
    for (int d = w.lo; d <= w.hi; ++d) {
        std::vector<Vec> reps;
        if (c.dim(d) > 0) {
            SpanBuilder span(c.dim(d), c.field());
            const SparseMat prev = c.diff(d - 1);
            for (int j = 0; j < prev.cols(); ++j)
                span.add(prev.column(j));
            for (const Vec& z : kernel_basis(c.diff(d)))
                if (span.add(z))
                    reps.push_back(z);
        }
        res.dims[d] = static_cast<int>(reps.size());
        res.representatives[d] = std::move(reps);
    }
    return res;
}

std::string verdict_str(VerdictStatus s)
{
    switch (s) {
        case VerdictStatus::yes: return "yes";
        case VerdictStatus::no: return "no";
        default: return "inconclusive";
    }
}

SurjQisoVerdict check_surj_qiso(const GradedMap& p, GradedWindow w)
{
    SurjQisoVerdict v;
    if (p.degree != 0) {
        v.status = VerdictStatus::inconclusive;
        v.witness = "not a degree-0 map";
        return v;
    }
    for (int d = w.lo - 1; d <= w.hi + 1; ++d) {
        if (!p.source.degree_known(d) || !p.target.degree_known(d)) {
            v.status = VerdictStatus::inconclusive;
            v.witness = "window not flanked by available degrees";
            return v;
        }
    }
    if (!p.commutes()) {
        v.status = VerdictStatus::no;
        v.witness_kind = "not-a-chain-map";
        v.witness = "components do not commute with differentials";
        return v;
    }
    for (int d = w.lo; d <= w.hi; ++d) {
        if (p.target.dim(d) == 0)
            continue;
        if (rank(p.at(d)) < p.target.dim(d)) {
            v.status = VerdictStatus::no;
            v.witness_kind = "not-surjective";
            v.witness_degree = d;
            v.witness = "not surjective in degree " + std::to_string(d);
            return v;
        }
    }
    HomologyResult hs = homology(p.source, w);
    HomologyResult ht = homology(p.target, w);
    for (int d = w.lo; d <= w.hi; ++d) {
        if (hs.dims.at(d) != ht.dims.at(d)) {
            v.status = VerdictStatus::no;
            v.witness_kind = "homology-mismatch";
            v.witness_degree = d;
            v.witness = "H^" + std::to_string(d) + " dims " + std::to_string(hs.dims.at(d)) + " vs " + std::to_string(ht.dims.at(d));
            return v;
        }
        /* induced map on classes must be invertible */
        int hdim = hs.dims.at(d);
        if (hdim == 0)
            continue;
        /* express p(rep) in the target homology basis modulo boundaries */
        std::vector<Vec> cols;
        const auto& treps = ht.representatives.at(d);
        const SparseMat bnd = p.target.diff(d - 1);
        int ncols = static_cast<int>(treps.size()) + bnd.cols();
        SparseMat sys(p.target.dim(d), ncols, p.target.field());
        for (int j = 0; j < static_cast<int>(treps.size()); ++j)
            for (int i = 0; i < p.target.dim(d); ++i)
                sys.set(i, j, treps[static_cast<size_t>(j)][static_cast<size_t>(i)]);
        for (int j = 0; j < bnd.cols(); ++j) {
            Vec col = bnd.column(j);
            for (int i = 0; i < p.target.dim(d); ++i)
                sys.set(i, static_cast<int>(treps.size()) + j, col[static_cast<size_t>(i)]);
        }
        Echelon ech(sys);
        SparseMat induced(hdim, hdim, p.target.field());
        bool ok = true;
        for (int j = 0; j < hdim; ++j) {
            Vec img = p.at(d).apply(hs.representatives.at(d)[static_cast<size_t>(j)]);
            auto sol = ech.solve(img);
            if (!sol) {
                ok = false;
                break;
            }
            for (int i = 0; i < hdim; ++i)
                induced.set(i, j, (*sol)[static_cast<size_t>(i)]);
        }
        if (!ok || rank(induced) < hdim) {
            v.status = VerdictStatus::no;
            v.witness_kind = "homology-mismatch";
            v.witness_degree = d;
            v.witness = "induced map on H^" + std::to_string(d) + " not invertible";
            return v;
        }
    }
    v.status = VerdictStatus::yes;
    return v;
}

VecLift lift_sphere_disk(const GradedMap& p, int zdeg, const Vec& z, const Vec& w)
{
    VecLift out;
    const Field& k = p.source.field();
    if (static_cast<int>(z.size()) != p.source.dim(zdeg))
        throw DgError("cycle length mismatch");
    if (static_cast<int>(w.size()) != p.target.dim(zdeg - 1))
        throw DgError("target element length mismatch");
    if (!is_zero_vec(p.source.diff(zdeg).apply(z)))
        throw DgError("z is not a cycle");
    if (p.target.diff(zdeg - 1).apply(w) != p.at(zdeg).apply(z))
        throw DgError("dw != p(z): square does not commute");

    auto pre = solve(p.at(zdeg - 1), w);
    if (!pre) {
        out.message = "window insufficient: no preimage of w in degree " + std::to_string(zdeg - 1);
        return out;
    }
    Vec r = sub_vec(z, p.source.diff(zdeg - 1).apply(*pre));
    /* solve dk = r with p(k) = 0: stack the two systems */
    int nk = p.source.dim(zdeg - 1);
    int rows = p.source.dim(zdeg) + p.target.dim(zdeg - 1);
    SparseMat sys(rows, nk, k);
    const SparseMat d = p.source.diff(zdeg - 1);
    for (int i = 0; i < d.rows(); ++i)
        for (const auto& [j, v] : d.row(i))
            sys.set(i, j, v);
    const SparseMat pm = p.at(zdeg - 1);
    for (int i = 0; i < pm.rows(); ++i)
        for (const auto& [j, v] : pm.row(i))
            sys.set(p.source.dim(zdeg) + i, j, v);
    Vec rhs = zero_vec(rows, k);
    for (int i = 0; i < p.source.dim(zdeg); ++i)
        rhs[static_cast<size_t>(i)] = r[static_cast<size_t>(i)];
    auto fix = solve(sys, rhs);
    if (!fix) {
        out.message = "window insufficient: kernel correction infeasible in degree " + std::to_string(zdeg - 1);
        return out;
    }
    out.v = add_vec(*pre, *fix);
    /* exact verification of both conditions */
    if (p.at(zdeg - 1).apply(out.v) != w || p.source.diff(zdeg - 1).apply(out.v) != z)
        throw DgError("internal: lift verification failed");
    out.status = VecLift::Status::found;
    return out;
}

}  // namespace dgcat
