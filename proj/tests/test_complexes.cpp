#include "doctest.h"

#include "dgcat/complex.hpp"
#include "dgcat/corpus.hpp"

using namespace dgcat;

namespace {
const Field Q = field_q();
}

TEST_CASE("scalar arithmetic is exact and rejects division by zero")
{
    Scalar a = Scalar::of_fraction(1, 3, Q);
    Scalar b = Scalar::of_fraction(2, 6, Q);
    CHECK(a == b);
    CHECK((a + b).str() == "2/3");
    CHECK((a - b).is_zero());
    CHECK_THROWS_AS(a / Scalar::zero(Q), DgError);
    CHECK_THROWS_AS(Scalar::zero(Q).inverse(), DgError);

    Field f7 = field_fp(7);
    Scalar x = Scalar::of_int(3, f7);
    CHECK((x * x.inverse()).is_one());
    CHECK(Scalar::of_int(10, f7) == Scalar::of_int(3, f7));
    CHECK(Scalar::parse("-5/2", Q).str() == "-5/2");
    CHECK_THROWS_AS(field_fp(6), DgError);
    CHECK_THROWS_AS((void)(x + a), DgError);  // mixed fields
}

TEST_CASE("sparse elimination: rank, solve, kernel")
{
    SparseMat m(2, 3, Q);
    m.set(0, 0, Scalar::of_int(1, Q));
    m.set(0, 1, Scalar::of_int(2, Q));
    m.set(1, 1, Scalar::of_int(1, Q));
    m.set(1, 2, Scalar::of_int(1, Q));
    CHECK(rank(m) == 2);
    Vec b = {Scalar::of_int(3, Q), Scalar::of_int(1, Q)};
    auto x = solve(m, b);
    REQUIRE(x);
    CHECK(m.apply(*x) == b);
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 1);
    CHECK(is_zero_vec(m.apply(ker[0])));

    /* infeasible system */
    SparseMat z(2, 1, Q);
    z.set(0, 0, Scalar::of_int(1, Q));
    z.set(1, 0, Scalar::of_int(1, Q));
    Vec bad = {Scalar::of_int(1, Q), Scalar::of_int(2, Q)};
    CHECK(!solve(z, bad));
}

TEST_CASE("random exact solves reproduce their right-hand sides")
{
    Rng rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        int rows = static_cast<int>(rng.next(1, 5)), cols = static_cast<int>(rng.next(1, 5));
        SparseMat m(rows, cols, Q);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (rng.chance(60))
                    m.set(i, j, Scalar::of_fraction(rng.next(-3, 3), rng.next(1, 3), Q));
        Vec x0 = zero_vec(cols, Q);
        for (int j = 0; j < cols; ++j)
            x0[static_cast<size_t>(j)] = Scalar::of_int(rng.next(-2, 2), Q);
        Vec b = m.apply(x0);
        auto x = solve(m, b);
        REQUIRE(x);
        CHECK(m.apply(*x) == b);
        for (const Vec& k : kernel_basis(m))
            CHECK(is_zero_vec(m.apply(k)));
    }
}

TEST_CASE("spheres and disks")
{
    Complex s0 = sphere(0, Q);
    CHECK(s0.dim(0) == 1);
    CHECK(s0.dim(1) == 0);
    CHECK(s0.dim(-1) == 0);
    /* S^{n-1} has its k in degree n-1 */
    for (int n : {-2, 0, 3})
        CHECK(sphere(n - 1, Q).dim(n - 1) == 1);
    HomologyResult h = homology(sphere(3, Q), GradedWindow(0, 4));
    CHECK(h.dims.at(3) == 1);
    CHECK(h.dims.at(2) == 0);

    Complex d1 = disk(1, Q);
    CHECK(d1.dim(-1) == 1);
    CHECK(d1.dim(0) == 1);
    CHECK(d1.diff(-1).get(0, 0).is_one());
    for (int n : {-2, 0, 1, 3}) {
        HomologyResult hd = homology(disk(n, Q), GradedWindow(n - 4, n + 2));
        for (const auto& [deg, dim] : hd.dims)
            CHECK(dim == 0);
    }
}

TEST_CASE("cone of the identity of the sphere is the disk")
{
    for (int n : {-1, 0, 2}) {
        ConeResult c = cone(identity_map(sphere(n - 1, Q)));
        CHECK(c.cone == disk(n, Q));
    }
}

TEST_CASE("cone of the zero self-map of sphere(0) has homology in degrees -1 and 0")
{
    Complex s = sphere(0, Q);
    GradedMap zero = zero_map(s, s);
    ConeResult c = cone(zero);
    HomologyResult h = homology(c.cone, GradedWindow(-2, 1));
    CHECK(h.dims.at(-1) == 1);
    CHECK(h.dims.at(0) == 1);
    CHECK(h.dims.at(-2) == 0);
    CHECK(h.dims.at(1) == 0);
}

TEST_CASE("cone detects quasi-isomorphisms: acyclic iff qiso")
{
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        SurjQisoInstance inst = random_surj_qiso(rng, Q, -2, 2, 6);
        ConeResult c = cone(inst.p);
        HomologyResult h = homology(c.cone, GradedWindow(-4, 4));
        for (const auto& [deg, dim] : h.dims)
            CHECK(dim == 0);
    }
    /* and a non-qiso has a non-acyclic cone */
    Rng rng2(8);
    NonSurjInstance bad = random_non_surj(rng2, Q, -2, 2, 6);
    ConeResult c = cone(bad.p);
    HomologyResult h = homology(c.cone, GradedWindow(-4, 4));
    int total = 0;
    for (const auto& [deg, dim] : h.dims)
        total += dim;
    CHECK(total > 0);
}

TEST_CASE("contraction of the cone on the identity")
{
    for (int m : {-3, 0, 2}) {
        GradedMap h = contraction_of_cone_id(m, Q);
        GradedMap lhs = map_add(compose(differential_map(h.source), h),
                                compose(h, differential_map(h.source)));
        CHECK(map_equal(lhs, identity_map(h.source)));
    }
}

TEST_CASE("transported contraction still satisfies dh + hd = id")
{
    /* conjugate disk(1) by an invertible map and transport h */
    Complex d = disk(1, Q);
    GradedMap h = contraction_of_cone_id(0, Q);
    /* g : d -> d', with d' = d but basis scaled */
    Complex d2(Q);
    d2.set_dim(-1, 1);
    d2.set_dim(0, 1);
    SparseMat m(1, 1, Q);
    m.set(0, 0, Scalar::of_int(2, Q));
    d2.set_diff(-1, m);  // d' = 2 after scaling one basis vector
    GradedMap g{d, d2, 0, {}};
    SparseMat g0(1, 1, Q);
    g0.set(0, 0, Scalar::of_int(2, Q));
    g.comp[-1] = SparseMat::identity(1, Q);
    g.comp[0] = g0;
    g.validate_chain();
    /* h' = g h g^{-1} */
    GradedMap hprime{d2, d2, -1, {}};
    SparseMat h0(1, 1, Q);
    h0.set(0, 0, Scalar::of_fraction(1, 2, Q));
    hprime.comp[0] = h0;
    GradedMap lhs = map_add(compose(differential_map(d2), hprime),
                            compose(hprime, differential_map(d2)));
    CHECK(map_equal(lhs, identity_map(d2)));
}

TEST_CASE("homology is additive under direct sums")
{
    Rng rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        RandomComplex a = random_complex(rng, Q, -2, 2, 5);
        RandomComplex b = random_complex(rng, Q, -2, 2, 5);
        Complex s = direct_sum(a.cx, b.cx);
        HomologyResult hs = homology(s, GradedWindow(-4, 4));
        HomologyResult ha = homology(a.cx, GradedWindow(-4, 4));
        HomologyResult hb = homology(b.cx, GradedWindow(-4, 4));
        for (int deg = -4; deg <= 4; ++deg)
            CHECK(hs.dims.at(deg) == ha.dims.at(deg) + hb.dims.at(deg));
        /* the structured construction knows its homology */
        for (int deg = -4; deg <= 4; ++deg) {
            int want = a.homology_dims.count(deg) ? a.homology_dims.at(deg) : 0;
            CHECK(ha.dims.at(deg) == want);
        }
    }

    /* disk(0) (+) sphere(2): one class, in degree 2 */
    Complex s = direct_sum(disk(0, Q), sphere(2, Q));
    HomologyResult h = homology(s, GradedWindow(-3, 3));
    for (int deg = -3; deg <= 3; ++deg)
        CHECK(h.dims.at(deg) == (deg == 2 ? 1 : 0));
}

TEST_CASE("homology refuses windows it cannot certify")
{
    Complex c = disk(1, Q);
    c.restrict_known(-2, 1);
    CHECK_NOTHROW(homology(c, GradedWindow(-1, 0)));
    CHECK_THROWS_WITH_AS(homology(c, GradedWindow(-1, 1)),
                         doctest::Contains("not flanked"), DgError);
}

TEST_CASE("check_surj_qiso verdicts")
{
    Complex d1 = disk(1, Q);
    CHECK(check_surj_qiso(identity_map(d1), GradedWindow(-2, 1)).status == VerdictStatus::yes);

    Complex zero(Q);
    GradedMap to_zero = zero_map(d1, zero);
    CHECK(check_surj_qiso(to_zero, GradedWindow(-2, 1)).status == VerdictStatus::yes);

    GradedMap s_to_zero = zero_map(sphere(0, Q), zero);
    SurjQisoVerdict v = check_surj_qiso(s_to_zero, GradedWindow(-1, 1));
    CHECK(v.status == VerdictStatus::no);
    CHECK(v.witness_kind == "homology-mismatch");
    CHECK(v.witness_degree == 0);
}

TEST_CASE("lift_sphere_disk solves the two conditions exactly")
{
    /* disk(1) -> 0, z = the degree-0 basis cycle, w = 0 */
    Complex d1 = disk(1, Q);
    Complex zero(Q);
    GradedMap p = zero_map(d1, zero);
    Vec z = {Scalar::of_int(1, Q)};
    Vec w;  // the zero complex has no coordinates
    VecLift lift = lift_sphere_disk(p, 0, z, w);
    REQUIRE(lift.status == VecLift::Status::found);
    CHECK(lift.v == Vec{Scalar::of_int(1, Q)});  // the degree -1 basis element

    /* degenerate: p = id, z = d(v0), w = v0 */
    GradedMap idm = identity_map(d1);
    Vec v0 = {Scalar::of_int(3, Q)};
    Vec z2 = d1.diff(-1).apply(v0);
    VecLift l2 = lift_sphere_disk(idm, 0, z2, v0);
    REQUIRE(l2.status == VecLift::Status::found);
    CHECK(d1.diff(-1).apply(l2.v) == z2);
    CHECK(l2.v == v0);
}

TEST_CASE("lift_sphere_disk on random surjective quasi-isos")
{
    Rng rng(1234);
    for (int trial = 0; trial < 40; ++trial) {
        SurjQisoInstance inst = random_surj_qiso(rng, Q, -2, 2, 8);
        /* pick z = d(u) upstairs, w = p(u) + cycle downstairs */
        int zdeg = static_cast<int>(rng.next(-1, 2));
        int udim = inst.src.dim(zdeg - 1);
        Vec u = zero_vec(udim, Q);
        for (int i = 0; i < udim; ++i)
            u[static_cast<size_t>(i)] = Scalar::of_int(rng.next(-2, 2), Q);
        Vec z = inst.src.diff(zdeg - 1).apply(u);
        Vec w = inst.p.at(zdeg - 1).apply(u);
        VecLift l = lift_sphere_disk(inst.p, zdeg, z, w);
        REQUIRE(l.status == VecLift::Status::found);
        CHECK(inst.p.at(zdeg - 1).apply(l.v) == w);
        CHECK(inst.src.diff(zdeg - 1).apply(l.v) == z);
    }
}

TEST_CASE("contraction transport across a surjective quasi-iso of acyclic complexes")
{
    Rng rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        /* both sides acyclic: p: C2 -> C1 projection-style */
        RandomComplex c1r = random_complex(rng, Q, -2, 2, 4, true);
        RandomComplex padr = random_complex(rng, Q, -2, 2, 4, true);
        Complex c1 = c1r.cx;
        Complex c2 = direct_sum(c1, padr.cx);
        GradedMap p{c2, c1, 0, {}};
        for (int d : c1.support()) {
            SparseMat m(c1.dim(d), c2.dim(d), Q);
            for (int i = 0; i < c1.dim(d); ++i)
                m.set(i, i, Scalar::one(Q));
            p.comp[d] = std::move(m);
        }
        p.validate_chain();
        /* find a contraction h of c1 by a linear solve: dh + hd = id */
        HomComplex end1 = hom_complex(c1, c1);
        Vec id1 = end1.to_vec(identity_map(c1));
        auto hvec = solve(end1.cx.diff(-1), id1);
        REQUIRE(hvec);
        GradedMap h = end1.to_map(-1, *hvec);
        /* transport along Hom(c2, c2) -> Hom(c2, c1), z = id, w = h o p */
        HomComplex h22 = hom_complex(c2, c2);
        HomComplex h21 = hom_complex(c2, c1);
        GradedMap post = hom_post_compose(h22, h21, p);
        Vec zz = h22.to_vec(identity_map(c2));
        Vec ww = h21.to_vec(compose(h, p));
        VecLift l = lift_sphere_disk(post, 0, zz, ww);
        REQUIRE(l.status == VecLift::Status::found);
        GradedMap hstar = h22.to_map(-1, l.v);
        GradedMap lhs = map_add(compose(differential_map(c2), hstar),
                                compose(hstar, differential_map(c2)));
        CHECK(map_equal(lhs, identity_map(c2)));      // d h* = 1 exactly
        CHECK(map_equal(compose(p, hstar), compose(h, p)));  // p h* = h p
    }
}
