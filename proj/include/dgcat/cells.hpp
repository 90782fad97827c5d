#pragma once

#include "dgcat/realize.hpp"

namespace dgcat {

enum class CellShape { add_object, attach_disk, kill_cycle, attach_htpy_eq };
std::string cell_shape_str(CellShape s);

/* One cell attachment: a pushout along a generating (acyclic)
 * cofibration. Endpoints may be the zero object; adjoined generators
 * incident to it are dropped (the pointed colimit forces them to 0). */
struct CellAttachment {
    CellShape shape = CellShape::add_object;
    int n = 0;          // degree parameter for attach_disk / kill_cycle
    std::string x, y;   // attachment endpoints (x only, for attach_htpy_eq)
    FormalSum cycle;    // kill_cycle: z, a degree n-1 cycle x -> y
    std::string prefix = "c";
};

struct AttachmentRecord {
    CellShape shape = CellShape::add_object;
    int n = 0;
    std::vector<std::string> fresh_objects;
    std::vector<std::string> fresh_arrows;
    /* generators whose occurrence count grades or filters the word
     * basis: {l, j} for disks, the r's for homotopy-equivalence data,
     * {h} for adjoined contractions */
    std::vector<std::string> counted_arrows;
    std::string src, dst;  // attachment endpoints, when meaningful
};

struct PushoutResult {
    PresPtr base;
    PresPtr result;
    DgFunctor inc;  // identity on old objects and generators
    AttachmentRecord record;
};

PushoutResult attach(const PresPtr& p, const CellAttachment& cell);

/* Adjoin h in End(x) of degree -1 with dh = id_x. */
PushoutResult adjoin_contraction(const PresPtr& p, const std::string& x);

/* The direct-sum decomposition of Hom_U(X,Y) after an attach_disk:
 * grade the word basis by the number m of adjoined-generator
 * occurrences, check each graded piece is a subcomplex isomorphic to
 * the tensor of base homs with m disk factors, contract every m >= 1
 * piece, and compare homology with the base. */
struct DirectSumReport {
    bool grading_preserved = false;
    bool splitting_ok = false;       // unique factorization at adjoined generators
    bool tensor_shape_ok = false;    // realized differential == factorwise Leibniz
    bool contractions_ok = false;    // dh + hd = id on every m >= 1 piece, window interior
    bool homology_equal = false;     // H(Hom_U) == H(Hom_J) over the window
    bool certified = false;
    int max_pieces = 0;
    std::map<int, int> h_base, h_attached;
    std::vector<std::string> notes;
    bool ok() const
    {
        return grading_preserved && splitting_ok && tensor_shape_ok && contractions_ok && homology_equal;
    }
};
DirectSumReport verify_direct_sum(const PushoutResult& u, const std::string& x, const std::string& y,
                                  const Bounds& b);

/* The filtration argument for attach_htpy_eq / adjoin_contraction
 * output: d never raises the counted-generator occurrence count (it
 * drops by at most one), the count-0 layer is the image of the base,
 * and truncated homology agrees with the base across growing maxlen. */
struct FiltrationReport {
    bool count_monotone = false;    // counts of d-terms are <= m
    bool count_step_le_one = false; // and >= m - 1
    bool zero_layer_is_base = false;
    std::vector<int> maxlens;
    std::vector<bool> homology_agrees;  // per maxlen, dims against the base hom
    bool stable = false;
    std::vector<std::string> notes;
    bool ok() const { return count_monotone && zero_layer_is_base && stable; }
};
FiltrationReport verify_filtration(const PushoutResult& m, const std::string& x, const std::string& y,
                                   const Bounds& b, std::vector<int> maxlens = {});

}  // namespace dgcat
