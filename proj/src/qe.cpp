#include "dgcat/qe.hpp"

#include "dgcat/util.hpp"

namespace dgcat {

std::string qe_status_str(QEStatus s)
{
    switch (s) {
        case QEStatus::certified_yes: return "certified-yes";
        case QEStatus::certified_no: return "certified-no";
        default: return "inconclusive";
    }
}

namespace {

/* induced map on homology classes in one degree; nullopt when the
 * image of a representative is not a cycle-plus-boundary combination */
std::optional<SparseMat> induced_h_matrix(const GradedMap& p, int d, const HomologyResult& hs,
                                          const HomologyResult& ht)
{
    const Field& k = p.source.field();
    int ns = hs.dims.at(d), nt = ht.dims.at(d);
    SparseMat out(nt, ns, k);
    if (ns == 0)
        return out;
    const auto& treps = ht.representatives.at(d);
    const SparseMat bnd = p.target.diff(d - 1);
    SparseMat sys(p.target.dim(d), nt + bnd.cols(), k);
    for (int j = 0; j < nt; ++j)
        for (int i = 0; i < p.target.dim(d); ++i)
            sys.set(i, j, treps[static_cast<size_t>(j)][static_cast<size_t>(i)]);
    for (int j = 0; j < bnd.cols(); ++j) {
        Vec col = bnd.column(j);
        for (int i = 0; i < p.target.dim(d); ++i)
            sys.set(i, nt + j, col[static_cast<size_t>(i)]);
    }
    Echelon ech(sys);
    for (int j = 0; j < ns; ++j) {
        Vec img = p.at(d).apply(hs.representatives.at(d)[static_cast<size_t>(j)]);
        auto sol = ech.solve(img);
        if (!sol)
            return std::nullopt;
        for (int i = 0; i < nt; ++i)
            out.set(i, j, (*sol)[static_cast<size_t>(i)]);
    }
    return out;
}

}  // namespace

QEVerdict check_quasi_equivalence(const DgFunctor& f, const Bounds& b)
{
    QEVerdict v;
    v.window = b.window;
    v.maxlen = b.maxlen;
    const PresPtr& src = f.source();
    const PresPtr& dst = f.target();
    int n = src->num_objects();

    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            pairs.emplace_back(x, y);

    std::vector<QEPairReport> reports(pairs.size());
    parallel_for(pairs.size(), [&](size_t i) {
        auto [x, y] = pairs[i];
        QEPairReport rep;
        rep.x = x;
        rep.y = y;
        BoundedHom hs = realize_hom(src, x, y, b);
        BoundedHom ht = realize_hom(dst, f.object_image(x), f.object_image(y), b);
        HomologyResult hrs = homology(hs.complex, b.window);
        HomologyResult hrt = homology(ht.complex, b.window);
        rep.h_src = hrs.dims;
        rep.h_dst = hrt.dims;
        rep.certified = hs.exact_realization() && ht.exact_realization();
        InducedHomMap ind = induced_hom_map(f, hs, ht);
        if (ind.leaked)
            rep.certified = false;
        bool dims_equal = true;
        int bad_deg = 0;
        for (int d = b.window.lo; d <= b.window.hi; ++d)
            if (hrs.dims.at(d) != hrt.dims.at(d)) {
                dims_equal = false;
                bad_deg = d;
                break;
            }
        if (!dims_equal) {
            rep.iso = VerdictStatus::no;
            rep.note = "H^" + std::to_string(bad_deg) + " dims " + std::to_string(hrs.dims.at(bad_deg)) +
                       " vs " + std::to_string(hrt.dims.at(bad_deg));
        }
        else {
            rep.iso = VerdictStatus::yes;
            for (int d = b.window.lo; d <= b.window.hi && rep.iso == VerdictStatus::yes; ++d) {
                if (hrs.dims.at(d) == 0)
                    continue;
                auto m = induced_h_matrix(ind.map, d, hrs, hrt);
                if (!m) {
                    rep.iso = VerdictStatus::inconclusive;
                    rep.certified = false;
                    rep.note = "induced class map not expressible at degree " + std::to_string(d);
                }
                else if (rank(*m) < hrs.dims.at(d)) {
                    rep.iso = VerdictStatus::no;
                    rep.note = "induced map on H^" + std::to_string(d) + " not invertible";
                }
            }
        }
        reports[i] = std::move(rep);
    });
    v.pairs = std::move(reports);

    /* essential surjectivity on H^0 of the target */
    H0Category h0t = h0_category(dst, b);
    for (int e = 0; e < dst->num_objects(); ++e) {
        EssSurjReport rep;
        rep.target_object = e;
        rep.hit = VerdictStatus::no;
        rep.certified = true;
        for (int c = 0; c < n; ++c) {
            H0IsoResult iso = find_h0_iso(h0t, f.object_image(c), e);
            if (iso.status == VerdictStatus::yes) {
                rep.hit = VerdictStatus::yes;
                rep.via_source_object = c;
                rep.certified = h0t.hom(f.object_image(c), e).certified &&
                                h0t.hom(e, f.object_image(c)).certified;
                rep.note = iso.note;
                break;
            }
            if (iso.status == VerdictStatus::inconclusive) {
                rep.hit = VerdictStatus::inconclusive;
                rep.certified = false;
            }
            if (iso.status == VerdictStatus::no && rep.hit == VerdictStatus::no) {
                rep.certified = rep.certified && h0t.hom(f.object_image(c), e).certified &&
                                h0t.hom(e, f.object_image(c)).certified &&
                                h0t.hom(e, e).certified;
            }
        }
        v.ess_surj.push_back(rep);
    }

    bool any_no = false, all_yes_certified = true;
    std::string witness;
    for (const auto& rep : v.pairs) {
        if (rep.iso == VerdictStatus::no && rep.certified) {
            any_no = true;
            witness = "hom (" + src->object_name(rep.x) + "," + src->object_name(rep.y) + "): " + rep.note;
            break;
        }
        if (!(rep.iso == VerdictStatus::yes && rep.certified))
            all_yes_certified = false;
    }
    if (!any_no)
        for (const auto& rep : v.ess_surj) {
            if (rep.hit == VerdictStatus::no && rep.certified) {
                any_no = true;
                witness = "object " + dst->object_name(rep.target_object) + " not H0-isomorphic to any image object";
                break;
            }
            if (!(rep.hit == VerdictStatus::yes && rep.certified))
                all_yes_certified = false;
        }
    if (any_no) {
        v.status = QEStatus::certified_no;
        v.witness = witness;
    }
    else if (all_yes_certified) {
        v.status = QEStatus::certified_yes;
    }
    else {
        v.status = QEStatus::inconclusive;
        v.witness = "bounds too small for a certificate";
    }
    return v;
}

}  // namespace dgcat
