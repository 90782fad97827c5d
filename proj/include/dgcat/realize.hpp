#pragma once

#include <optional>

#include "dgcat/complex.hpp"
#include "dgcat/presentation.hpp"

namespace dgcat {

struct Bounds {
    GradedWindow window{-6, 6};
    int maxlen = 8;
    long basis_budget = 100000;  // safety cap on enumerated words per hom
};

enum class FiniteStatus { certified_finite, truncated };

struct FinitenessReport {
    FiniteStatus status = FiniteStatus::truncated;
    std::string reason;
    std::optional<int> complete_maxlen;      // certified: no windowed word is longer
    std::vector<std::string> witness_cycle;  // arrow names of a problematic cycle
    int cycle_sign = 0;                      // certified: 0 acyclic, else the shared sign
    bool certified() const { return status == FiniteStatus::certified_finite; }
};

/* All composable words x -> y with degree in [deg_lo, deg_hi] and length
 * <= maxlen, ordered by length then lexicographically by arrow names.
 * Complete up to the returned effective_maxlen (= maxlen unless the
 * budget stopped a level early). */
std::vector<Word> enumerate_words(const DgPresentation& p, int x, int y, int deg_lo, int deg_hi,
                                  int maxlen, long budget = 100000,
                                  int* effective_maxlen = nullptr);

/* Sound-but-incomplete finiteness test: the hom basis is certified
 * finite in every degree window when each directed cycle through the
 * x-to-y subgraph has nonzero total degree and all cycle degrees share
 * one sign. */
FinitenessReport finiteness_certificate(const DgPresentation& p, int x, int y, GradedWindow w);

/* One hom-complex realized over a word basis restricted to a flanked
 * degree window and a word-length bound. The carried complex lives on
 * the largest d-stable sub-basis; dropped words are reported, never
 * silently truncated. */
class BoundedHom {
  public:
    PresPtr pres;
    int src = 0, dst = 0;
    GradedWindow window;  // requested window; the basis spans [lo-1, hi+1]
    int maxlen = 0;
    std::vector<Word> words;     // the full enumerated basis
    std::vector<Word> excluded;  // words whose differential escapes the basis
    Complex complex;             // over words minus excluded, known range = flank
    FinitenessReport exact;

    /* certified finite, maxlen covers the certificate, nothing dropped */
    bool exact_realization() const;

    const std::vector<Word>& degree_words(int deg) const;
    std::optional<int> index_in_degree(const Word& w) const;
    /* coordinates of a homogeneous sum in the carried basis at `deg`;
     * nullopt when a term lies outside (a leak) */
    std::optional<Vec> coords(const FormalSum& s, int deg) const;
    FormalSum element(int deg, const Vec& v) const;

  private:
    friend BoundedHom realize_hom(const PresPtr&, int, int, const Bounds&);
    std::map<int, std::vector<Word>> basis_;
    std::map<Word, std::pair<int, int>> pos_;
};

BoundedHom realize_hom(const PresPtr& p, int x, int y, const Bounds& b);
BoundedHom realize_hom(const PresPtr& p, const std::string& x, const std::string& y, const Bounds& b);

/* The matrix of a dg functor between realized homs (degree by degree).
 * Image terms that leave the target basis are recorded as leaks and
 * dropped from the matrix; callers must treat leaked maps as evidence
 * only. */
struct InducedHomMap {
    GradedMap map;
    bool leaked = false;
    std::vector<std::string> leaks;
};
InducedHomMap induced_hom_map(const DgFunctor& f, const BoundedHom& s, const BoundedHom& t);

}  // namespace dgcat
