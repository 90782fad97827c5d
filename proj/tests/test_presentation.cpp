#include "doctest.h"

#include "dgcat/presentation.hpp"
#include "dgcat/realize.hpp"
#include "dgcat/util.hpp"

using namespace dgcat;

namespace {
const Field Q = field_q();

FormalSum aw(const PresPtr& p, const std::string& name)
{
    int a = p->arrow_index(name);
    REQUIRE(a >= 0);
    const Arrow& ar = p->arrow(a);
    return FormalSum(Word(ar.src, ar.dst, ar.deg, {a}), Scalar::one(p->field()));
}

FormalSum idw(const PresPtr& p, const std::string& obj)
{
    return FormalSum(Word::identity(p->object_index(obj)), Scalar::one(p->field()));
}
}  // namespace

TEST_CASE("the builders validate with zero defects")
{
    for (const PresPtr& p : {cat_A(Q), cat_B(Q), cat_K(Q), cat_O(Q), cat_C(0, Q), cat_C(-2, Q),
                             cat_P(0, Q), cat_P(3, Q)}) {
        ValidationReport r = p->validate();
        CHECK(r.ok());
    }
}

TEST_CASE("cat_K satisfies d^2 = 0 on r12 symbolically")
{
    PresPtr k = cat_K(Q);
    /* d(r12) = f.r1 - r2.f as assigned */
    FormalSum dr12 = k->d(k->arrow_index("r12"));
    CHECK(dr12 == aw(k, "f") * aw(k, "r1") - aw(k, "r2") * aw(k, "f"));
    /* d^2 r12 = d(f r1 - r2 f) = f(gf - 1) - (fg - 1)f = 0 */
    CHECK(k->differential(dr12).is_zero());
}

TEST_CASE("endpoint-inconsistent differentials are rejected")
{
    PresPtr k = cat_K(Q);
    /* fg - 1_1 mixes End(2) and End(1): the sum itself is malformed */
    CHECK_THROWS_WITH_AS((void)(aw(k, "f") * aw(k, "g") - idw(k, "1")),
                         doctest::Contains("endpoint or degree mismatch"), DgError);
    /* gf - 1_1 is well-formed but has the wrong endpoints for r2 */
    std::map<std::string, FormalSum> diffs;
    std::vector<DgPresentation::ArrowSpec> arrows = {
        {"f", "1", "2", 0}, {"g", "2", "1", 0}, {"r1", "1", "1", -1}, {"r2", "2", "2", -1}, {"r12", "1", "2", -2}};
    PresPtr skel = make_presentation(Q, {"1", "2"}, arrows);
    diffs["r2"] = aw(skel, "g") * aw(skel, "f") - idw(skel, "1");
    PresPtr bad = make_presentation(Q, {"1", "2"}, arrows, diffs);
    ValidationReport r = bad->validate();
    CHECK(!r.ok());
    CHECK(r.str().find("endpoint mismatch") != std::string::npos);
}

TEST_CASE("degree errors are reported")
{
    std::vector<DgPresentation::ArrowSpec> arrows = {{"a", "x", "y", 0}, {"b", "x", "y", 0}};
    PresPtr skel = make_presentation(Q, {"x", "y"}, arrows);
    std::map<std::string, FormalSum> diffs;
    diffs["a"] = aw(skel, "b");  // degree 0, but d must raise degree by 1
    PresPtr bad = make_presentation(Q, {"x", "y"}, arrows, diffs);
    ValidationReport r = bad->validate();
    CHECK(!r.ok());
    CHECK(r.str().find("degree error") != std::string::npos);
}

TEST_CASE("Leibniz differential on words")
{
    PresPtr k = cat_K(Q);
    /* d(g.f) = 0: both closed */
    CHECK(k->differential(aw(k, "g") * aw(k, "f")).is_zero());
    /* d(r1.r1) = (gf - 1) r1 - r1 (gf - 1), the sign being (-1)^{-1} */
    FormalSum gf1 = aw(k, "g") * aw(k, "f") - idw(k, "1");
    FormalSum got = k->differential(aw(k, "r1") * aw(k, "r1"));
    CHECK(got == gf1 * aw(k, "r1") - aw(k, "r1") * gf1);
    /* d(id) = 0 */
    CHECK(k->differential(idw(k, "1")).is_zero());
}

TEST_CASE("d^2 = 0 on random formal sums over cat_K")
{
    PresPtr k = cat_K(Q);
    Rng rng(5);
    std::vector<Word> pool = enumerate_words(*k, k->object_index("1"), k->object_index("2"), -4, 0, 4);
    REQUIRE(!pool.empty());
    for (int trial = 0; trial < 20; ++trial) {
        /* random homogeneous sum: pick a degree represented in the pool */
        const Word& seed = pool[static_cast<size_t>(rng.next(0, static_cast<long>(pool.size()) - 1))];
        FormalSum s(seed, Scalar::of_int(rng.next(1, 3), Q));
        for (const Word& w : pool)
            if (w.deg() == seed.deg() && rng.chance(30))
                s += FormalSum(w, Scalar::of_int(rng.next(-2, 2), Q));
        CHECK(k->differential(k->differential(s)).is_zero());
    }
}

TEST_CASE("add_point adjoins a fresh zero object and forgetting undoes it")
{
    PresPtr a = cat_A(Q);
    PresPtr ia = add_point(a);
    CHECK(ia->num_objects() == 2);
    CHECK(ia->zero_object().has_value());
    CHECK(ia->object_name(*ia->zero_object()) == "p");
    CHECK(*forget_point(ia) == *a);
    CHECK_THROWS_AS(add_point(ia), DgError);

    /* name clash is renamed deterministically */
    PresPtr withp = make_presentation(Q, {"p"}, {});
    PresPtr wp = add_point(withp);
    CHECK(wp->object_index("p1") >= 0);

    /* hom to or from p is empty, End(p) included */
    Bounds b;
    CHECK(enumerate_words(*ia, ia->object_index("3"), *ia->zero_object(), -5, 5, 5).empty());
    CHECK(enumerate_words(*ia, *ia->zero_object(), *ia->zero_object(), -5, 5, 5).empty());
}

TEST_CASE("arrows incident to the zero object are rejected at construction")
{
    CHECK_THROWS_WITH_AS(make_presentation(Q, {"x", "p"}, {{"a", "x", "p", 0}}, {}, "p"),
                         doctest::Contains("incident to the zero object"), DgError);
}

TEST_CASE("builder homs match their defining data")
{
    Bounds b;
    PresPtr bb = cat_B(Q);
    CHECK(enumerate_words(*bb, bb->object_index("4"), bb->object_index("5"), -6, 6, 6).empty());

    PresPtr pn = cat_P(2, Q);
    auto ws = enumerate_words(*pn, pn->object_index("6"), pn->object_index("7"), -6, 6, 6);
    CHECK(ws.size() == 2);  // l and j

    PresPtr cn = cat_C(1, Q);
    auto cw = enumerate_words(*cn, cn->object_index("8"), cn->object_index("9"), -6, 6, 6);
    CHECK(cw.size() == 1);

    /* fun_S sends the C(n) generator to j, the degree n-1 disk element */
    for (int n : {-2, 0, 3}) {
        DgFunctor s = fun_S(n, Q);
        FormalSum img = s.arrow_image(s.source()->arrow_index("c"));
        REQUIRE(img.terms().size() == 1);
        const Word& w = img.terms().begin()->first;
        CHECK(s.target()->arrow(w.arrows().at(0)).name == "j");
        CHECK(w.deg() == n - 1);
        CHECK(validate_functor(s).ok());
    }
}

TEST_CASE("functor validation: retraction, fun_F, and a chain-condition failure")
{
    PresPtr k = cat_K(Q);
    PresPtr a = cat_A(Q);
    std::map<std::string, FormalSum> amap;
    amap["f"] = idw(a, "3");
    amap["g"] = idw(a, "3");
    amap["r1"] = FormalSum{};
    amap["r2"] = FormalSum{};
    amap["r12"] = FormalSum{};
    DgFunctor retract(k, a, {{"1", "3"}, {"2", "3"}}, amap);
    CHECK(validate_functor(retract).ok());

    CHECK(validate_functor(fun_F(Q)).ok());
    CHECK(validate_functor(fun_Q(Q)).ok());
    for (int n : {-1, 0, 2})
        CHECK(validate_functor(fun_R(n, Q)).ok());

    /* r1 |-> 0 with f |-> 0, g |-> id: F(d r1) = -id != 0 = d F(r1) */
    std::map<std::string, FormalSum> bad;
    bad["f"] = FormalSum{};
    bad["g"] = idw(a, "3");
    bad["r1"] = FormalSum{};
    bad["r2"] = FormalSum{};
    bad["r12"] = FormalSum{};
    DgFunctor wrong(k, a, {{"1", "3"}, {"2", "3"}}, bad);
    ValidationReport r = validate_functor(wrong);
    CHECK(!r.ok());
    CHECK(r.str().find("chain condition") != std::string::npos);
}

TEST_CASE("functor composition is associative and preserves validity")
{
    Rng rng(17);
    PresPtr k = cat_K(Q);
    DgFunctor f = fun_F(Q);                 // A -> K
    DgFunctor idk = identity_functor(k);    // K -> K
    PresPtr a = cat_A(Q);
    std::map<std::string, FormalSum> amap;
    amap["f"] = idw(a, "3");
    amap["g"] = idw(a, "3");
    amap["r1"] = FormalSum{};
    amap["r2"] = FormalSum{};
    amap["r12"] = FormalSum{};
    DgFunctor retract(k, a, {{"1", "3"}, {"2", "3"}}, amap);  // K -> A

    DgFunctor left = compose(retract, compose(idk, f));
    DgFunctor right = compose(compose(retract, idk), f);
    CHECK(functor_equal(left, right));
    CHECK(validate_functor(left).ok());
    /* the retraction after F is the identity of A */
    CHECK(functor_equal(left, identity_functor(a)));
}

TEST_CASE("pointed functors preserve the added point")
{
    DgFunctor isn = pointed(fun_S(1, Q));
    CHECK(validate_functor(isn).ok());
    CHECK(isn.source()->zero_object().has_value());
    int p = *isn.source()->zero_object();
    CHECK(isn.target()->is_zero_object(isn.object_image(p)));
    /* the terminal functor exists for every presentation */
    DgFunctor t = terminal_functor(cat_K(Q));
    CHECK(validate_functor(t).ok());
}
