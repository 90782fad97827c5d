#pragma once

#include "dgcat/realize.hpp"

namespace dgcat {

/* H^0 of a presentation within bounds: degree-0 cycles modulo
 * boundaries over the windowed word bases, with exact composition
 * tables. Hom classes touching the zero object are empty. */
class H0Category {
  public:
    PresPtr pres;
    int maxlen = 0;

    struct Hom {
        std::vector<FormalSum> reps;  // degree-0 cycle representatives
        bool certified = false;       // realization was exact
    };

    const Hom& hom(int x, int y) const { return homs_.at({x, y}); }
    /* class of a degree-0 cycle in hom(x,y); nullopt on a leak */
    std::optional<Vec> class_of(int x, int y, const FormalSum& s) const;
    /* coordinates of [g o f] for classes f at (x,y), g at (y,z) */
    std::optional<Vec> compose_classes(int x, int y, int z, const Vec& fc, const Vec& gc) const;
    Vec identity_class(int x) const;

    bool associative = true;  // asserted exactly over available tables
    bool unital = true;

  private:
    friend H0Category h0_category(const PresPtr& p, const Bounds& b);
    std::map<std::pair<int, int>, Hom> homs_;
    std::map<std::pair<int, int>, BoundedHom> realized_;
    /* table[(x,y,z)][g_idx][f_idx] = class coords of g o f, when expressible */
    std::map<std::tuple<int, int, int>, std::vector<std::vector<std::optional<Vec>>>> table_;
    std::map<std::pair<int, int>, Echelon> class_solver_;  // [reps | boundaries]
};

H0Category h0_category(const PresPtr& p, const Bounds& b);

/* Search for an H^0 isomorphism x -> y. `yes` comes with witnessing
 * cycles; `no` is certified by a span obstruction (the identity class
 * is not even in the span of all composite classes). */
struct H0IsoResult {
    VerdictStatus status = VerdictStatus::inconclusive;
    FormalSum iso, inverse;
    std::string note;
};
H0IsoResult find_h0_iso(const H0Category& h, int x, int y);

/* Decide invertibility of a given class [q], q : x -> y a degree-0
 * cycle; on success returns an inverse class representative. */
struct H0InverseResult {
    VerdictStatus status = VerdictStatus::inconclusive;
    FormalSum inverse;
    std::string note;
};
H0InverseResult h0_inverse(const H0Category& h, int x, int y, const FormalSum& q);

}  // namespace dgcat
