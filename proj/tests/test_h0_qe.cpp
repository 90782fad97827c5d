#include "doctest.h"

#include "dgcat/h0.hpp"
#include "dgcat/qe.hpp"

using namespace dgcat;

namespace {
const Field Q = field_q();
}

TEST_CASE("H0 of cat_B: End(4) = k, Hom(4,5) = 0")
{
    Bounds b;
    H0Category h = h0_category(cat_B(Q), b);
    PresPtr bb = h.pres;
    CHECK(h.hom(bb->object_index("4"), bb->object_index("4")).reps.size() == 1);
    CHECK(h.hom(bb->object_index("4"), bb->object_index("5")).reps.empty());
    CHECK(h.hom(bb->object_index("5"), bb->object_index("4")).reps.empty());
    CHECK(h.associative);
    CHECK(h.unital);
}

TEST_CASE("H0 of cat_C(1): k, k, and no isomorphism 8 = 9")
{
    Bounds b;
    PresPtr c1 = cat_C(1, Q);
    H0Category h = h0_category(c1, b);
    int o8 = c1->object_index("8"), o9 = c1->object_index("9");
    CHECK(h.hom(o8, o8).reps.size() == 1);
    CHECK(h.hom(o8, o9).reps.size() == 1);  // the degree-0 generator c
    CHECK(h.hom(o9, o8).reps.empty());
    H0IsoResult iso = find_h0_iso(h, o8, o9);
    CHECK(iso.status == VerdictStatus::no);
    /* every object is isomorphic to itself */
    CHECK(find_h0_iso(h, o8, o8).status == VerdictStatus::yes);
    CHECK(find_h0_iso(h, o9, o9).status == VerdictStatus::yes);
}

TEST_CASE("h0_inverse scales identities over Q")
{
    Bounds b;
    PresPtr k = cat_K(Q);
    H0Category h = h0_category(k, b);
    int o1 = k->object_index("1");
    FormalSum q(Word::identity(o1), Scalar::of_int(2, Q));
    H0InverseResult inv = h0_inverse(h, o1, o1, q);
    REQUIRE(inv.status == VerdictStatus::yes);
    /* g q = 1 in H0; here even on the nose */
    REQUIRE(inv.inverse.terms().size() == 1);
    CHECK(inv.inverse.terms().begin()->second == Scalar::of_fraction(1, 2, Q));
}

TEST_CASE("quasi-equivalence: identity functors certify yes")
{
    Bounds b;
    for (const PresPtr& p : {cat_B(Q), cat_P(2, Q), cat_C(0, Q), add_point(cat_B(Q))}) {
        QEVerdict v = check_quasi_equivalence(identity_functor(p), b);
        CHECK(v.status == QEStatus::certified_yes);
    }
}

TEST_CASE("IR(n) is a quasi-equivalence, IS(n) is not")
{
    Bounds b;
    for (int n : {-1, 0, 2}) {
        QEVerdict vr = check_quasi_equivalence(pointed(fun_R(n, Q)), b);
        CHECK(vr.status == QEStatus::certified_yes);

        QEVerdict vs = check_quasi_equivalence(pointed(fun_S(n, Q)), b);
        CHECK(vs.status == QEStatus::certified_no);
        CHECK(vs.witness.find("H^" + std::to_string(n - 1)) != std::string::npos);
    }
}

TEST_CASE("IF is inconclusive at small bounds with stabilizing evidence")
{
    DgFunctor iff = pointed(fun_F(Q));
    for (int maxlen : {4, 6, 8}) {
        Bounds b;
        b.window = GradedWindow(-3, 3);
        b.maxlen = maxlen;
        QEVerdict v = check_quasi_equivalence(iff, b);
        CHECK(v.status == QEStatus::inconclusive);
        /* the (3,3) pair compares End(3) = k against truncated End(1):
         * H^0 = k and nothing else in the window, at every maxlen */
        bool found = false;
        for (const auto& rep : v.pairs) {
            if (iff.source()->object_name(rep.x) == "3" && iff.source()->object_name(rep.y) == "3") {
                found = true;
                CHECK(rep.h_src == rep.h_dst);
                CHECK(rep.h_dst.at(0) == 1);
            }
        }
        CHECK(found);
        /* object 2 of IK is hit up to H0-iso through [f] */
        bool two_hit = false;
        for (const auto& es : v.ess_surj)
            if (iff.target()->object_name(es.target_object) == "2" && es.hit == VerdictStatus::yes)
                two_hit = true;
        CHECK(two_hit);
    }
}

TEST_CASE("certified verdicts are stable under maxlen growth")
{
    for (int maxlen : {6, 8, 10}) {
        Bounds b;
        b.maxlen = maxlen;
        CHECK(check_quasi_equivalence(pointed(fun_R(1, Q)), b).status == QEStatus::certified_yes);
        CHECK(check_quasi_equivalence(pointed(fun_S(1, Q)), b).status == QEStatus::certified_no);
    }
}
