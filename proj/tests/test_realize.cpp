#include "doctest.h"

#include "dgcat/corpus.hpp"
#include "dgcat/realize.hpp"

using namespace dgcat;

namespace {
const Field Q = field_q();
}

TEST_CASE("word enumeration order and content for cat_K 1 -> 2")
{
    PresPtr k = cat_K(Q);
    auto ws = enumerate_words(*k, k->object_index("1"), k->object_index("2"), -2, 0, 2);
    REQUIRE(ws.size() == 4);
    CHECK(k->word_str(ws[0]) == "f");
    CHECK(k->word_str(ws[1]) == "r12");
    CHECK(k->word_str(ws[2]) == "f.r1");
    CHECK(k->word_str(ws[3]) == "r2.f");
}

TEST_CASE("finiteness certificates")
{
    PresPtr k = cat_K(Q);
    FinitenessReport r = finiteness_certificate(*k, k->object_index("1"), k->object_index("1"),
                                                GradedWindow(-2, 2));
    CHECK(r.status == FiniteStatus::truncated);
    CHECK(!r.witness_cycle.empty());

    PresPtr pn = cat_P(1, Q);
    FinitenessReport rp = finiteness_certificate(*pn, pn->object_index("6"), pn->object_index("7"),
                                                 GradedWindow(-2, 2));
    CHECK(rp.status == FiniteStatus::certified_finite);

    /* one-directional categories are always certified */
    Rng rng(3);
    Bounds b;
    for (int t = 0; t < 5; ++t) {
        PresPtr od = random_one_directional(rng, Q, 4, 6, b);
        for (int x = 0; x < od->num_objects(); ++x)
            for (int y = 0; y < od->num_objects(); ++y)
                CHECK(finiteness_certificate(*od, x, y, b.window).status ==
                      FiniteStatus::certified_finite);
    }
}

TEST_CASE("realize_hom reproduces the defining complexes")
{
    Bounds b;
    b.window = GradedWindow(-3, 1);
    b.maxlen = 4;
    PresPtr p0 = cat_P(0, Q);
    BoundedHom h = realize_hom(p0, "6", "7", b);
    CHECK(h.exact_realization());
    CHECK(h.complex == disk(0, Q));

    PresPtr c1 = cat_C(1, Q);
    BoundedHom hc = realize_hom(c1, "8", "9", b);
    CHECK(hc.exact_realization());
    CHECK(hc.complex == sphere(0, Q));

    /* p endpoints give the zero complex */
    PresPtr ia = add_point(cat_A(Q));
    BoundedHom hp = realize_hom(ia, "3", "p", b);
    CHECK(hp.words.empty());
    CHECK(hp.complex.total_dim() == 0);
    CHECK(hp.exact.certified());
}

TEST_CASE("End(1) of cat_K realizes with a d-stable truncation")
{
    Bounds b;
    b.window = GradedWindow(-3, 3);
    b.maxlen = 4;
    PresPtr k = cat_K(Q);
    BoundedHom h = realize_hom(k, "1", "1", b);
    CHECK(!h.exact_realization());
    CHECK(h.complex.total_dim() > 0);
    /* the carried complex is honest: d^2 = 0 holds on it */
    CHECK_NOTHROW(h.complex.validate());
    /* truncated homology of End(1) sees H^0 = k in the window */
    HomologyResult hr = homology(h.complex, GradedWindow(-2, 2));
    CHECK(hr.dims.at(0) == 1);
    CHECK(hr.dims.at(-1) == 0);
    CHECK(hr.dims.at(-2) == 0);
}

TEST_CASE("certified homs are maxlen-independent beyond their bound")
{
    Rng rng(21);
    Bounds small, big;
    small.window = big.window = GradedWindow(-4, 4);
    small.maxlen = 4;
    big.maxlen = 9;
    for (int t = 0; t < 6; ++t) {
        PresPtr od = random_one_directional(rng, Q, 4, 6, small);
        for (int x = 0; x < od->num_objects(); ++x)
            for (int y = 0; y < od->num_objects(); ++y) {
                BoundedHom hs = realize_hom(od, x, y, small);
                BoundedHom hb = realize_hom(od, x, y, big);
                if (!hs.exact_realization())
                    continue;  // maxlen 4 below the completeness bound
                HomologyResult a = homology(hs.complex, GradedWindow(-3, 3));
                HomologyResult c = homology(hb.complex, GradedWindow(-3, 3));
                CHECK(a.dims == c.dims);
            }
    }
}

TEST_CASE("induced hom maps are chain maps on exact realizations")
{
    Rng rng(31);
    Bounds b;
    b.window = GradedWindow(-4, 4);
    for (int t = 0; t < 6; ++t) {
        SurjQisoInstance inst = random_surj_qiso(rng, Q, -2, 2, 6);
        DgFunctor g = bimodule_functor(inst.p, "X", "Y", "a", "b");
        CHECK(validate_functor(g).ok());
        BoundedHom sh = realize_hom(g.source(), "X", "Y", b);
        BoundedHom th = realize_hom(g.target(), "X", "Y", b);
        CHECK(sh.exact_realization());
        CHECK(th.exact_realization());
        InducedHomMap ind = induced_hom_map(g, sh, th);
        CHECK(!ind.leaked);
        CHECK(ind.map.commutes());
        /* the realized source complex is the original complex up to
         * conjugation: homology dims agree with the known answer */
        HomologyResult hs = homology(sh.complex, GradedWindow(-3, 3));
        for (int d = -3; d <= 3; ++d) {
            int want = inst.homology_dims.count(d) ? inst.homology_dims.at(d) : 0;
            CHECK(hs.dims.at(d) == want);
        }
    }
}
