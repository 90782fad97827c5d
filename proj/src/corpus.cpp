#include "dgcat/corpus.hpp"

#include <algorithm>

namespace dgcat {

namespace {

Scalar small_scalar(Rng& rng, const Field& f, bool nonzero = false)
{
    long num = rng.next(nonzero ? 1 : -2, 2);
    if (nonzero && num == 0)
        num = 1;
    if (f.is_rational() && rng.chance(25))
        return Scalar::of_fraction(num, rng.next(1, 3), f);
    return Scalar::of_int(num, f);
}

/* random invertible change of basis per degree: unit lower x unit upper
 * triangular products with small entries */
SparseMat random_gln(Rng& rng, const Field& f, int n)
{
    SparseMat m = SparseMat::identity(n, f);
    int ops = static_cast<int>(rng.next(0, 2 * n));
    for (int t = 0; t < ops; ++t) {
        int i = static_cast<int>(rng.next(0, n - 1));
        int j = static_cast<int>(rng.next(0, n - 1));
        if (i == j)
            continue;
        SparseMat e = SparseMat::identity(n, f);
        e.set(i, j, small_scalar(rng, f, true));
        m = m * e;
    }
    return m;
}

Complex conjugate(const Complex& c, Rng& rng, std::map<int, SparseMat>* out_changes = nullptr)
{
    const Field& f = c.field();
    std::map<int, SparseMat> g;
    for (int d : c.support())
        g.emplace(d, random_gln(rng, f, c.dim(d)));
    Complex out(f);
    for (int d : c.support())
        out.set_dim(d, c.dim(d));
    for (int d : c.support()) {
        if (c.dim(d + 1) == 0)
            continue;
        /* d' = g_{d+1} d g_d^{-1}: solve g_d^T x^T = ... cheaper to
         * invert by solving columns */
        SparseMat gd = g.at(d);
        Echelon ech(gd);
        SparseMat inv(gd.cols(), gd.rows(), f);
        for (int j = 0; j < gd.rows(); ++j) {
            Vec e = zero_vec(gd.rows(), f);
            e[static_cast<size_t>(j)] = Scalar::one(f);
            auto col = ech.solve(e);
            if (!col)
                throw DgError("internal: basis change not invertible");
            for (int i = 0; i < gd.cols(); ++i)
                if (!(*col)[static_cast<size_t>(i)].is_zero())
                    inv.set(i, j, (*col)[static_cast<size_t>(i)]);
        }
        out.set_diff(d, g.at(d + 1) * c.diff(d) * inv);
    }
    out.validate();
    if (out_changes)
        *out_changes = std::move(g);
    return out;
}

}  // namespace

RandomComplex random_complex(Rng& rng, const Field& f, int deg_lo, int deg_hi, int max_total_dim,
                             bool acyclic)
{
    RandomComplex out;
    Complex plain(f);
    std::map<int, int> hdims;
    int budget = max_total_dim;
    int guard = 0;
    while (budget > 0 && guard++ < 4 * max_total_dim) {
        if (!acyclic && rng.chance(40)) {
            int d = static_cast<int>(rng.next(deg_lo, deg_hi));
            plain = direct_sum(plain, sphere(d, f));
            hdims[d] += 1;
            budget -= 1;
        }
        else if (budget >= 2) {
            int n = static_cast<int>(rng.next(deg_lo + 2, deg_hi + 1));
            plain = direct_sum(plain, disk(n, f));
            budget -= 2;
        }
        else {
            break;
        }
    }
    if (plain.total_dim() == 0) {
        int d = static_cast<int>(rng.next(deg_lo, deg_hi));
        if (acyclic) {
            plain = disk(std::min(d + 2, deg_hi + 1), f);
        }
        else {
            plain = sphere(d, f);
            hdims[d] += 1;
        }
    }
    out.cx = conjugate(plain, rng);
    out.homology_dims = std::move(hdims);
    return out;
}

SurjQisoInstance random_surj_qiso(Rng& rng, const Field& f, int deg_lo, int deg_hi,
                                  int max_total_dim)
{
    SurjQisoInstance out;
    RandomComplex dst = random_complex(rng, f, deg_lo, deg_hi, std::max(1, max_total_dim / 2));
    RandomComplex pad = random_complex(rng, f, deg_lo, deg_hi,
                                       std::max(2, max_total_dim - dst.cx.total_dim()), true);
    Complex plain_src = direct_sum(dst.cx, pad.cx);
    /* p0: plain projection onto the first summand */
    GradedMap p0{plain_src, dst.cx, 0, {}};
    for (int d : dst.cx.support()) {
        SparseMat m(dst.cx.dim(d), plain_src.dim(d), f);
        for (int i = 0; i < dst.cx.dim(d); ++i)
            m.set(i, i, Scalar::one(f));
        p0.comp[d] = std::move(m);
    }
    p0.validate_chain();
    std::map<int, SparseMat> g;
    Complex src = conjugate(plain_src, rng, &g);
    GradedMap p{src, dst.cx, 0, {}};
    for (int d : src.support()) {
        /* p = p0 . g_d^{-1} */
        SparseMat gd = g.at(d);
        Echelon ech(gd);
        SparseMat inv(gd.cols(), gd.rows(), f);
        for (int j = 0; j < gd.rows(); ++j) {
            Vec e = zero_vec(gd.rows(), f);
            e[static_cast<size_t>(j)] = Scalar::one(f);
            auto col = ech.solve(e);
            for (int i = 0; i < gd.cols(); ++i)
                if (!(*col)[static_cast<size_t>(i)].is_zero())
                    inv.set(i, j, (*col)[static_cast<size_t>(i)]);
        }
        SparseMat m = p0.at(d) * inv;
        if (!m.is_zero())
            p.comp[d] = std::move(m);
    }
    p.validate_chain();
    out.src = std::move(src);
    out.dst = dst.cx;
    out.p = std::move(p);
    out.homology_dims = dst.homology_dims;
    return out;
}

NonSurjInstance random_non_surj(Rng& rng, const Field& f, int deg_lo, int deg_hi, int max_total_dim)
{
    NonSurjInstance out;
    if (rng.chance(50)) {
        /* extra sphere downstairs, missed by p */
        SurjQisoInstance base = random_surj_qiso(rng, f, deg_lo, deg_hi, max_total_dim - 1);
        int d = static_cast<int>(rng.next(deg_lo, deg_hi));
        Complex dst = direct_sum(base.dst, sphere(d, f));
        GradedMap p{base.src, dst, 0, {}};
        for (int dd : base.src.support()) {
            SparseMat old = base.p.at(dd);
            SparseMat m(dst.dim(dd), base.src.dim(dd), f);
            for (int i = 0; i < old.rows(); ++i)
                for (const auto& [j, v] : old.row(i))
                    m.set(i, j, v);
            if (!m.is_zero())
                p.comp[dd] = std::move(m);
        }
        p.validate_chain();
        out.p = std::move(p);
        out.defect = "not-surjective";
        out.degree = d;
    }
    else {
        /* extra sphere upstairs: surjective but extra homology */
        SurjQisoInstance base = random_surj_qiso(rng, f, deg_lo, deg_hi, max_total_dim - 1);
        int d = static_cast<int>(rng.next(deg_lo, deg_hi));
        Complex src = direct_sum(base.src, sphere(d, f));
        GradedMap p{src, base.dst, 0, {}};
        for (int dd : src.support()) {
            SparseMat old = base.p.at(dd);
            SparseMat m(base.dst.dim(dd), src.dim(dd), f);
            for (int i = 0; i < old.rows(); ++i)
                for (const auto& [j, v] : old.row(i))
                    m.set(i, j, v);
            if (!m.is_zero())
                p.comp[dd] = std::move(m);
        }
        p.validate_chain();
        out.p = std::move(p);
        out.defect = "homology-mismatch";
        out.degree = d;
    }
    return out;
}

PresPtr bimodule_presentation(const Complex& c, const std::string& x, const std::string& y,
                              const std::string& arrow_prefix)
{
    const Field& f = c.field();
    std::vector<std::string> objects = {x, y};
    std::vector<DgPresentation::ArrowSpec> arrows;
    std::vector<std::vector<std::string>> names;  // per support degree
    std::vector<int> degs = c.support();
    for (int d : degs) {
        std::vector<std::string> level;
        for (int i = 0; i < c.dim(d); ++i) {
            std::string nm = arrow_prefix + std::to_string(d < 0 ? -d : d) + (d < 0 ? "m" : "") + "_" +
                             std::to_string(i);
            arrows.push_back({nm, x, y, d});
            level.push_back(nm);
        }
        names.push_back(level);
    }
    PresPtr skeleton = make_presentation(f, objects, arrows);
    std::map<std::string, FormalSum> diffs;
    for (size_t di = 0; di < degs.size(); ++di) {
        int d = degs[di];
        if (c.dim(d + 1) == 0)
            continue;
        SparseMat m = c.diff(d);
        for (int j = 0; j < c.dim(d); ++j) {
            FormalSum s;
            for (int i = 0; i < c.dim(d + 1); ++i) {
                Scalar v = m.get(i, j);
                if (v.is_zero())
                    continue;
                int a = skeleton->arrow_index(names[di + 1][static_cast<size_t>(i)]);
                s += FormalSum(Word(skeleton->arrow(a).src, skeleton->arrow(a).dst, d + 1, {a}), v);
            }
            if (!s.is_zero())
                diffs[names[di][static_cast<size_t>(j)]] = s;
        }
    }
    return make_presentation(f, std::move(objects), std::move(arrows), std::move(diffs));
}

DgFunctor bimodule_functor(const GradedMap& p, const std::string& x, const std::string& y,
                           const std::string& src_prefix, const std::string& dst_prefix)
{
    PresPtr s = bimodule_presentation(p.source, x, y, src_prefix);
    PresPtr t = bimodule_presentation(p.target, x, y, dst_prefix);
    std::map<std::string, std::string> omap{{x, x}, {y, y}};
    std::map<std::string, FormalSum> amap;
    /* arrows of s, sorted by name, correspond to (degree, index) pairs */
    for (int a = 0; a < s->num_arrows(); ++a) {
        const Arrow& ar = s->arrow(a);
        /* recover the basis index from the arrow name suffix */
        auto us = ar.name.rfind('_');
        int idx = std::stoi(ar.name.substr(us + 1));
        FormalSum img;
        SparseMat m = p.at(ar.deg);
        for (int i = 0; i < m.rows(); ++i) {
            Scalar v = m.get(i, idx);
            if (v.is_zero())
                continue;
            std::string nm = dst_prefix + std::to_string(ar.deg < 0 ? -ar.deg : ar.deg) +
                             (ar.deg < 0 ? "m" : "") + "_" + std::to_string(i);
            int ta = t->arrow_index(nm);
            img += FormalSum(Word(t->arrow(ta).src, t->arrow(ta).dst, ar.deg, {ta}), v);
        }
        amap[ar.name] = img;
    }
    return DgFunctor(std::move(s), std::move(t), std::move(omap), std::move(amap));
}

PresPtr random_one_directional(Rng& rng, const Field& f, int max_objects, int max_arrows,
                               const Bounds& b)
{
    int nobj = static_cast<int>(rng.next(2, std::max(2, max_objects)));
    std::vector<std::string> objects;
    for (int i = 0; i < nobj; ++i)
        objects.push_back("X" + std::to_string(i));
    int narr = static_cast<int>(rng.next(1, std::max(1, max_arrows)));
    /* grow arrow by arrow; each differential is a random cycle among
     * existing words, so d^2 = 0 holds by construction */
    std::vector<DgPresentation::ArrowSpec> arrows;
    std::map<std::string, FormalSum> diffs;  // rebuilt against the latest skeleton
    PresPtr cur = make_presentation(f, objects, {});
    for (int t = 0; t < narr; ++t) {
        int si = static_cast<int>(rng.next(0, nobj - 2));
        int ti = static_cast<int>(rng.next(si + 1, nobj - 1));
        int deg = static_cast<int>(rng.next(-2, 2));
        std::string nm = "a" + std::to_string(t);
        arrows.push_back({nm, objects[static_cast<size_t>(si)], objects[static_cast<size_t>(ti)], deg});
        std::map<std::string, FormalSum> ndiffs;
        PresPtr skel = make_presentation(f, objects, arrows);
        for (const auto& [name, sum] : diffs)
            ndiffs[name] = remap_sum(sum, *cur, *skel);
        /* maybe aim d(a) at a random cycle of matching degree */
        if (rng.chance(50)) {
            Bounds local = b;
            local.window = GradedWindow(deg + 1, deg + 1);
            BoundedHom bh = realize_hom(skel, objects[static_cast<size_t>(si)],
                                        objects[static_cast<size_t>(ti)], local);
            if (bh.exact_realization() && bh.complex.dim(deg + 1) > 0) {
                std::vector<Vec> cycles = kernel_basis(bh.complex.diff(deg + 1));
                /* drop cycles that mention the new arrow itself */
                std::vector<Vec> usable;
                int self = skel->arrow_index(nm);
                for (const Vec& z : cycles) {
                    FormalSum s = bh.element(deg + 1, z);
                    bool self_ref = false;
                    for (const auto& [w, cc] : s.terms())
                        for (int a : w.arrows())
                            if (a == self)
                                self_ref = true;
                    if (!self_ref)
                        usable.push_back(z);
                }
                if (!usable.empty()) {
                    FormalSum z;
                    for (const Vec& v : usable)
                        if (rng.chance(60))
                            z += bh.element(deg + 1, v).scaled(small_scalar(rng, f, true));
                    if (!z.is_zero())
                        ndiffs[nm] = z;
                }
            }
        }
        cur = make_presentation(f, objects, arrows, ndiffs);
        diffs = std::move(ndiffs);
    }
    ValidationReport vr = cur->validate();
    if (!vr.ok())
        throw DgError("internal: random one-directional presentation invalid:\n" + vr.str());
    return cur;
}

}  // namespace dgcat
