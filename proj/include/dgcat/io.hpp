#pragma once

#include <functional>

#include "dgcat/model.hpp"

namespace dgcat {

struct ParseError : DgError {
    int line = 0, col = 0;
    ParseError(int line_, int col_, const std::string& msg)
        : DgError("line " + std::to_string(line_) + ", col " + std::to_string(col_) + ": " + msg),
          line(line_), col(col_)
    {
    }
};

/* Presentation files: `ring`, `object`, `arrow`, `d` lines, `#`
 * comments. Printing is canonical (sorted objects and arrows, reduced
 * rationals), so print . parse is a normal form. */
PresPtr parse_presentation(const std::string& text, std::optional<Field> force_ring = std::nullopt);
std::string print_presentation(const DgPresentation& p);

FormalSum parse_sum(const std::string& text, const DgPresentation& p, int line_no = 0);
std::string print_sum(const DgPresentation& p, const FormalSum& s);

DgFunctor parse_functor(const std::string& text,
                        const std::function<PresPtr(const std::string&)>& resolve);
std::string print_functor(const DgFunctor& f, const std::string& source_ref,
                          const std::string& target_ref);

Complex parse_complex(const std::string& text, std::optional<Field> force_ring = std::nullopt);
std::string print_complex(const Complex& c);

/* Built-in generators: K, A, B, O, C(n), P(n) and the pointed variants
 * IK, IA, IB, IC(n), IP(n); functors F, R(n), S(n), Q and IF, IR(n),
 * IS(n). */
PresPtr builtin_presentation(const std::string& name, const Field& f);
DgFunctor builtin_functor(const std::string& name, const Field& f);
bool is_builtin_ref(const std::string& ref);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/* `builtin:NAME` or a path on disk. */
PresPtr load_presentation(const std::string& ref, const Field& default_ring);
DgFunctor load_functor(const std::string& path, const Field& default_ring);

LiftProblem load_lift_problem(const std::string& path, const Field& default_ring);

/* KillCycle sums are kept as text and parsed against the presentation
 * current at application time, so scripts can chain attachments. */
struct AttachScript {
    PresPtr base;
    std::vector<CellAttachment> cells;
    std::vector<std::string> cycle_texts;  // aligned with cells; empty if none
};
AttachScript load_attach_script(const std::string& path, const Field& default_ring);

}  // namespace dgcat
