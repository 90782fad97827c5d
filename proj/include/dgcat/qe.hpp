#pragma once

#include "dgcat/h0.hpp"
#include "dgcat/realize.hpp"

namespace dgcat {

enum class QEStatus { certified_yes, certified_no, inconclusive };
std::string qe_status_str(QEStatus s);

struct QEPairReport {
    int x = 0, y = 0;  // source objects
    std::map<int, int> h_src, h_dst;  // homology dims over the window
    VerdictStatus iso = VerdictStatus::inconclusive;
    bool certified = false;
    std::string note;
};

struct EssSurjReport {
    int target_object = 0;
    VerdictStatus hit = VerdictStatus::inconclusive;
    int via_source_object = -1;
    bool certified = false;
    std::string note;
};

struct QEVerdict {
    QEStatus status = QEStatus::inconclusive;
    std::string witness;
    std::vector<QEPairReport> pairs;
    std::vector<EssSurjReport> ess_surj;
    GradedWindow window;
    int maxlen = 0;
};

/* Quasi-equivalence check: F induces homology isomorphisms on every
 * hom pair and is essentially surjective on H^0 of the target.
 * Certified answers only under finiteness certificates on both sides;
 * anything else degrades to inconclusive evidence. */
QEVerdict check_quasi_equivalence(const DgFunctor& f, const Bounds& b);

}  // namespace dgcat
