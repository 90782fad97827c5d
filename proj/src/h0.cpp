#include "dgcat/h0.hpp"

namespace dgcat {

namespace {

/* echelon of [reps | boundaries] in degree 0, for class extraction */
Echelon make_class_solver(const BoundedHom& bh, const std::vector<Vec>& reps)
{
    const Field& k = bh.pres->field();
    int dim0 = static_cast<int>(bh.degree_words(0).size());
    SparseMat bnd = bh.complex.dim(0) > 0 ? bh.complex.diff(-1) : SparseMat(0, 0, k);
    SparseMat sys(dim0, static_cast<int>(reps.size()) + bnd.cols(), k);
    for (int j = 0; j < static_cast<int>(reps.size()); ++j)
        for (int i = 0; i < dim0; ++i)
            if (!reps[static_cast<size_t>(j)][static_cast<size_t>(i)].is_zero())
                sys.set(i, j, reps[static_cast<size_t>(j)][static_cast<size_t>(i)]);
    for (int j = 0; j < bnd.cols(); ++j) {
        Vec col = bnd.column(j);
        for (int i = 0; i < dim0; ++i)
            if (!col[static_cast<size_t>(i)].is_zero())
                sys.set(i, static_cast<int>(reps.size()) + j, col[static_cast<size_t>(i)]);
    }
    return Echelon(sys);
}

}  // namespace

std::optional<Vec> H0Category::class_of(int x, int y, const FormalSum& s) const
{
    const auto& bh = realized_.at({x, y});
    const auto& h = homs_.at({x, y});
    auto coords = bh.coords(s, 0);
    if (!coords)
        return std::nullopt;
    auto sol = class_solver_.at({x, y}).solve(*coords);
    if (!sol)
        return std::nullopt;
    Vec out(sol->begin(), sol->begin() + static_cast<long>(h.reps.size()));
    return out;
}

std::optional<Vec> H0Category::compose_classes(int x, int y, int z, const Vec& fc, const Vec& gc) const
{
    const auto& tab = table_.at({x, y, z});
    const auto& out_hom = homs_.at({x, z});
    Vec acc = zero_vec(static_cast<int>(out_hom.reps.size()), pres->field());
    for (size_t gi = 0; gi < gc.size(); ++gi) {
        if (gc[gi].is_zero())
            continue;
        for (size_t fi = 0; fi < fc.size(); ++fi) {
            if (fc[fi].is_zero())
                continue;
            const auto& cell = tab.at(gi).at(fi);
            if (!cell)
                return std::nullopt;
            acc = add_vec(acc, scale_vec(gc[gi] * fc[fi], *cell));
        }
    }
    return acc;
}

Vec H0Category::identity_class(int x) const
{
    const auto& h = homs_.at({x, x});
    if (pres->is_zero_object(x))
        return zero_vec(static_cast<int>(h.reps.size()), pres->field());
    FormalSum idw(Word::identity(x), Scalar::one(pres->field()));
    auto c = class_of(x, x, idw);
    if (!c)
        throw DgError("identity class not expressible");
    return *c;
}

H0Category h0_category(const PresPtr& p, const Bounds& b)
{
    H0Category h;
    h.pres = p;
    h.maxlen = b.maxlen;
    Bounds local = b;
    local.window = GradedWindow(-1, 1);
    const Field& k = p->field();

    int n = p->num_objects();
    std::map<std::pair<int, int>, std::vector<Vec>> rep_vecs;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            BoundedHom bh = realize_hom(p, x, y, local);
            H0Category::Hom hom;
            hom.certified = bh.exact_realization();
            std::vector<Vec> reps;
            if (bh.complex.dim(0) > 0) {
                HomologyResult hr = homology(bh.complex, GradedWindow(0, 0));
                reps = hr.representatives.at(0);
                for (const Vec& r : reps)
                    hom.reps.push_back(bh.element(0, r));
            }
            rep_vecs[{x, y}] = reps;
            h.class_solver_.emplace(std::make_pair(x, y), make_class_solver(bh, reps));
            h.realized_.emplace(std::make_pair(x, y), std::move(bh));
            h.homs_.emplace(std::make_pair(x, y), std::move(hom));
        }
    }
    /* composition tables */
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                const auto& hf = h.homs_.at({x, y});
                const auto& hg = h.homs_.at({y, z});
                std::vector<std::vector<std::optional<Vec>>> tab(
                    hg.reps.size(), std::vector<std::optional<Vec>>(hf.reps.size()));
                for (size_t gi = 0; gi < hg.reps.size(); ++gi)
                    for (size_t fi = 0; fi < hf.reps.size(); ++fi) {
                        FormalSum prod = hg.reps[gi] * hf.reps[fi];
                        tab[gi][fi] = h.class_of(x, z, prod);
                    }
                h.table_.emplace(std::make_tuple(x, y, z), std::move(tab));
            }
    /* unit and associativity, asserted exactly where tables resolve */
    for (int x = 0; x < n && h.unital; ++x) {
        if (p->is_zero_object(x))
            continue;
        Vec idc = h.identity_class(x);
        for (int y = 0; y < n && h.unital; ++y) {
            for (size_t fi = 0; fi < h.homs_.at({x, y}).reps.size(); ++fi) {
                Vec fc = zero_vec(static_cast<int>(h.homs_.at({x, y}).reps.size()), k);
                fc[fi] = Scalar::one(k);
                auto left = h.compose_classes(x, x, y, idc, fc);
                if (left && !(*left == fc))
                    h.unital = false;
                if (p->is_zero_object(y))
                    continue;
                auto right = h.compose_classes(x, y, y, fc, h.identity_class(y));
                if (right && !(*right == fc))
                    h.unital = false;
            }
        }
    }
    for (int x = 0; x < n && h.associative; ++x)
        for (int y = 0; y < n && h.associative; ++y)
            for (int z = 0; z < n && h.associative; ++z)
                for (int w = 0; w < n && h.associative; ++w) {
                    const auto& hf = h.homs_.at({x, y});
                    const auto& hg = h.homs_.at({y, z});
                    const auto& hk = h.homs_.at({z, w});
                    for (size_t fi = 0; fi < hf.reps.size() && h.associative; ++fi)
                        for (size_t gi = 0; gi < hg.reps.size() && h.associative; ++gi)
                            for (size_t ki = 0; ki < hk.reps.size() && h.associative; ++ki) {
                                Vec fc = zero_vec(static_cast<int>(hf.reps.size()), k);
                                fc[fi] = Scalar::one(k);
                                Vec gc = zero_vec(static_cast<int>(hg.reps.size()), k);
                                gc[gi] = Scalar::one(k);
                                Vec kc = zero_vec(static_cast<int>(hk.reps.size()), k);
                                kc[ki] = Scalar::one(k);
                                auto gf = h.compose_classes(x, y, z, fc, gc);
                                auto kg = h.compose_classes(y, z, w, gc, kc);
                                if (!gf || !kg)
                                    continue;
                                auto l = h.compose_classes(x, z, w, *gf, kc);
                                auto r = h.compose_classes(x, y, w, fc, *kg);
                                if (l && r && !(*l == *r))
                                    h.associative = false;
                            }
                }
    return h;
}

namespace {

/* joint feasibility of [g][f] = [1_x], [f][g] = [1_y] in g, for fixed f */
std::optional<Vec> solve_inverse(const H0Category& h, int x, int y, const Vec& fc)
{
    const Field& k = h.pres->field();
    int gn = static_cast<int>(h.hom(y, x).reps.size());
    int dx = static_cast<int>(h.hom(x, x).reps.size());
    int dy = static_cast<int>(h.hom(y, y).reps.size());
    SparseMat sys(dx + dy, gn, k);
    for (int gi = 0; gi < gn; ++gi) {
        Vec gc = zero_vec(gn, k);
        gc[static_cast<size_t>(gi)] = Scalar::one(k);
        auto gf = h.compose_classes(x, y, x, fc, gc);  // g o f : x -> x
        auto fg = h.compose_classes(y, x, y, gc, fc);  // f o g : y -> y
        if (!gf || !fg)
            return std::nullopt;
        for (int i = 0; i < dx; ++i)
            sys.set(i, gi, (*gf)[static_cast<size_t>(i)]);
        for (int i = 0; i < dy; ++i)
            sys.set(dx + i, gi, (*fg)[static_cast<size_t>(i)]);
    }
    Vec rhs = zero_vec(dx + dy, k);
    Vec idx = h.identity_class(x), idy = h.identity_class(y);
    for (int i = 0; i < dx; ++i)
        rhs[static_cast<size_t>(i)] = idx[static_cast<size_t>(i)];
    for (int i = 0; i < dy; ++i)
        rhs[static_cast<size_t>(dx + i)] = idy[static_cast<size_t>(i)];
    return solve(sys, rhs);
}

FormalSum from_class(const H0Category& h, int x, int y, const Vec& c)
{
    FormalSum s;
    const auto& reps = h.hom(x, y).reps;
    for (size_t i = 0; i < c.size(); ++i)
        if (!c[i].is_zero())
            s += reps[i].scaled(c[i]);
    return s;
}

}  // namespace

H0IsoResult find_h0_iso(const H0Category& h, int x, int y)
{
    H0IsoResult out;
    const Field& k = h.pres->field();
    if (h.pres->is_zero_object(x) || h.pres->is_zero_object(y)) {
        /* only p is isomorphic to p (all homs in and out are zero) */
        if (x == y) {
            out.status = VerdictStatus::yes;
            out.note = "zero object";
        }
        else {
            out.status = VerdictStatus::no;
            out.note = "zero object against a nonzero object";
        }
        return out;
    }
    int fn = static_cast<int>(h.hom(x, y).reps.size());
    /* candidates: basis classes, signed pairs, the identity route, and
     * the zero map (it wins exactly when both identity classes vanish) */
    std::vector<Vec> candidates;
    if (x == y)
        candidates.push_back(h.identity_class(x));
    candidates.push_back(zero_vec(fn, k));
    for (int i = 0; i < fn; ++i) {
        Vec c = zero_vec(fn, k);
        c[static_cast<size_t>(i)] = Scalar::one(k);
        candidates.push_back(std::move(c));
    }
    for (int i = 0; i < fn; ++i)
        for (int j = i + 1; j < fn; ++j)
            for (int s = 0; s < 2; ++s) {
                Vec c = zero_vec(fn, k);
                c[static_cast<size_t>(i)] = Scalar::one(k);
                c[static_cast<size_t>(j)] = s ? -Scalar::one(k) : Scalar::one(k);
                candidates.push_back(std::move(c));
            }
    for (const Vec& fc : candidates) {
        auto gc = solve_inverse(h, x, y, fc);
        if (gc) {
            out.status = VerdictStatus::yes;
            out.iso = from_class(h, x, y, fc);
            out.inverse = from_class(h, y, x, *gc);
            return out;
        }
    }
    /* certified refutation: [1_x] outside the span of all composites */
    bool span_ok = true;
    {
        int dx = static_cast<int>(h.hom(x, x).reps.size());
        SpanBuilder span(dx, k);
        bool complete = true;
        int gn = static_cast<int>(h.hom(y, x).reps.size());
        for (int gi = 0; gi < gn; ++gi)
            for (int fi = 0; fi < fn; ++fi) {
                Vec fc = zero_vec(fn, k);
                fc[static_cast<size_t>(fi)] = Scalar::one(k);
                Vec gc = zero_vec(gn, k);
                gc[static_cast<size_t>(gi)] = Scalar::one(k);
                auto gf = h.compose_classes(x, y, x, fc, gc);
                if (!gf) {
                    complete = false;
                    continue;
                }
                span.add(*gf);
            }
        if (complete && dx >= 0) {
            Vec idx = h.identity_class(x);
            if (!span.contains(idx))
                span_ok = false;
        }
    }
    if (!span_ok && h.hom(x, y).certified && h.hom(y, x).certified && h.hom(x, x).certified) {
        out.status = VerdictStatus::no;
        out.note = "identity class of " + h.pres->object_name(x) + " is not in the span of composite classes";
        return out;
    }
    out.status = VerdictStatus::inconclusive;
    out.note = "no isomorphism found among candidate classes";
    return out;
}

H0InverseResult h0_inverse(const H0Category& h, int x, int y, const FormalSum& q)
{
    H0InverseResult out;
    auto qc = h.class_of(x, y, q);
    if (!qc) {
        out.note = "class of q not expressible within bounds";
        return out;
    }
    auto gc = solve_inverse(h, x, y, *qc);
    if (gc) {
        out.status = VerdictStatus::yes;
        out.inverse = from_class(h, y, x, *gc);
        return out;
    }
    /* for a single fixed class the joint system is a complete test */
    if (h.hom(x, y).certified && h.hom(y, x).certified && h.hom(x, x).certified &&
        h.hom(y, y).certified) {
        out.status = VerdictStatus::no;
        out.note = "[q] admits no two-sided inverse";
    }
    else {
        out.note = "inverse system infeasible within bounds";
    }
    return out;
}

}  // namespace dgcat
