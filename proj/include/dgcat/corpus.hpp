#pragma once

#include "dgcat/presentation.hpp"
#include "dgcat/realize.hpp"
#include "dgcat/util.hpp"

namespace dgcat {

/* Structured random complexes: a direct sum of spheres and disks with
 * known homology, conjugated by a random basis change so nothing is
 * diagonal. Differentials stay exact by construction. */
struct RandomComplex {
    Complex cx;
    std::map<int, int> homology_dims;
};
RandomComplex random_complex(Rng& rng, const Field& f, int deg_lo, int deg_hi, int max_total_dim,
                             bool acyclic = false);

/* A random surjective quasi-isomorphism p : src -> dst: dst is random,
 * src = dst (+) disks, p the projection, both conjugated. */
struct SurjQisoInstance {
    Complex src, dst;
    GradedMap p;
    std::map<int, int> homology_dims;  // shared by both sides
};
SurjQisoInstance random_surj_qiso(Rng& rng, const Field& f, int deg_lo, int deg_hi,
                                  int max_total_dim);

/* A chain map that fails Surj: either missing an element (a sphere or
 * disk summand downstairs outside the image) or hiding extra homology
 * upstairs. */
struct NonSurjInstance {
    GradedMap p;
    std::string defect;  // "not-surjective" | "homology-mismatch"
    int degree = 0;      // a witnessing degree
};
NonSurjInstance random_non_surj(Rng& rng, const Field& f, int deg_lo, int deg_hi, int max_total_dim);

/* Two-object one-directional presentation with Hom(x, y) realizing the
 * given complex: one generator per basis element. */
PresPtr bimodule_presentation(const Complex& c, const std::string& x, const std::string& y,
                              const std::string& arrow_prefix);

/* The functor between bimodule presentations induced by a chain map. */
DgFunctor bimodule_functor(const GradedMap& p, const std::string& x, const std::string& y,
                           const std::string& src_prefix, const std::string& dst_prefix);

/* Random one-directional (DAG-shaped) presentation with exact
 * differentials built cycle-by-cycle; all homs are certified finite. */
PresPtr random_one_directional(Rng& rng, const Field& f, int max_objects, int max_arrows,
                               const Bounds& b);

}  // namespace dgcat
