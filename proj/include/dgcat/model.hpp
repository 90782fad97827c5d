#pragma once

#include <variant>

#include "dgcat/cells.hpp"
#include "dgcat/h0.hpp"
#include "dgcat/qe.hpp"

namespace dgcat {

struct PairSurjReport {
    int x = 0, y = 0;  // source pair
    VerdictStatus surjective = VerdictStatus::inconclusive;
    VerdictStatus qiso = VerdictStatus::inconclusive;
    bool certified = false;
    std::string note;
};

struct SurjVerdict {
    VerdictStatus status = VerdictStatus::inconclusive;
    bool object_surjective = false;
    std::string missed_object;
    std::vector<PairSurjReport> pairs;
    std::string witness;
};

/* The Surj class: surjective on objects, surjective quasi-isomorphisms
 * on all hom complexes. Certified per pair only under finiteness
 * certificates; surjectivity evidence additionally carries explicit
 * preimages found by composing generator images. */
SurjVerdict check_surj(const DgFunctor& g, const Bounds& b);

enum class GenKind { q, is_n, ir_n, if_k };
std::string gen_kind_str(GenKind g, int n);

struct LiftProblem {
    GenKind gen = GenKind::q;
    int n = 0;
    DgFunctor top, bottom, right;
};
ValidationReport validate_lift_problem(const LiftProblem& p);

struct LiftSolution {
    DgFunctor diagonal;
    std::vector<std::string> checks;
};

struct NonLiftWitness {
    std::string kind;  // missed-object | not-in-image | homology-obstruction | infeasible-system
    std::string detail;
    std::string x, y;     // source hom pair, when hom-level
    int degree = 0;
    FormalSum z, w;       // the square data entering the certificate
    DgFunctor right;
    Bounds bounds;
};
/* Re-run the witness certificate from scratch. */
bool recheck_witness(const NonLiftWitness& w);

struct Inconclusive {
    std::string reason;
};

using LiftOutcome = std::variant<LiftSolution, NonLiftWitness, Inconclusive>;

/* Constructive lifting against the generating maps. Solutions carry a
 * diagonal that is re-validated symbolically, with both triangles
 * checked exactly. */
LiftOutcome lift(const LiftProblem& p, const Bounds& b);

/* Solve the K constraints for g, r1, r2, r12 with f = q fixed; q must
 * be invertible in H^0. Packaged as a functor from (I)K when solvable. */
struct PromoteResult {
    VerdictStatus status = VerdictStatus::inconclusive;
    std::optional<DgFunctor> functor;
    std::string note;
};
PromoteResult promote_h0_iso(const PresPtr& s, const FormalSum& q, const Bounds& b);

/* Lemme 3's object-surjectivity extraction: find C and an H^0-iso
 * q : L(C) -> E, promote q to K-data, lift the IF square, and return
 * the lifted preimage object of E. */
struct ExtractResult {
    VerdictStatus status = VerdictStatus::inconclusive;
    std::string object;
    std::string note;
};
ExtractResult extract_object_surjectivity(const DgFunctor& l, const std::string& target_object,
                                          const Bounds& b);

struct FibrationVerdict {
    VerdictStatus status = VerdictStatus::inconclusive;
    std::string witness;
    std::vector<std::string> probes;  // one line per solved K-data probe
    std::vector<PairSurjReport> pairs;
};
/* J-inj probing: windowed hom surjectivity plus IF-lifting against all
 * K-data found in the target and identity data at every object. */
FibrationVerdict check_fibration(const DgFunctor& g, const Bounds& b);

struct FactorizationCell {
    CellAttachment cell;
    AttachmentRecord record;
    std::string mapped_to;  // printed image of the adjoined generator
};

struct FactorizationResult {
    std::vector<FactorizationCell> cells;
    PresPtr middle;
    DgFunctor left;   // I-cell composite (an inclusion)
    DgFunctor right;  // extended functor, right . left == input
    bool composite_exact = false;
    SurjVerdict residual;
    int stages_used = 0;
};
/* Bounded small-object-argument factorization through I-cells. */
FactorizationResult factorize(const DgFunctor& f, const Bounds& b, int stages);

}  // namespace dgcat
