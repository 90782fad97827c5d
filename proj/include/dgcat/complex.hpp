#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgcat/matrix.hpp"

namespace dgcat {

struct GradedWindow {
    int lo = 0, hi = 0;  // inclusive

    GradedWindow() = default;
    GradedWindow(int l, int h) : lo(l), hi(h)
    {
        if (l > h)
            throw DgError("bad window: lo > hi");
    }
    bool contains(int d) const { return lo <= d && d <= hi; }
    std::string str() const { return std::to_string(lo) + ".." + std::to_string(hi); }
};

/* Finitely supported complex of finite-dimensional vector spaces with a
 * degree +1 differential. Degrees outside the known range (all of Z by
 * default) are unspecified rather than zero; windowed realizations use
 * this to refuse claims their window cannot support. */
class Complex {
  public:
    Complex() = default;
    explicit Complex(const Field& f) : field_(f) {}

    const Field& field() const { return field_; }
    void set_dim(int deg, int dim);
    void set_diff(int deg, SparseMat m);  // shape dim(deg+1) x dim(deg)
    void restrict_known(int lo, int hi);

    bool degree_known(int d) const;
    int dim(int d) const;         // throws on unknown degree
    SparseMat diff(int d) const;  // zero matrix of the right shape if unset
    std::vector<int> support() const;  // degrees with dim > 0, ascending
    int total_dim() const;

    void validate() const;  // shapes and d^2 = 0; throws DgError

    friend bool operator==(const Complex& a, const Complex& b);
    std::string str() const;

  private:
    Field field_;
    std::map<int, int> dim_;
    std::map<int, SparseMat> diff_;
    std::optional<int> known_lo_, known_hi_;
};

Complex sphere(int m, const Field& f);
Complex disk(int n, const Field& f);
Complex direct_sum(const Complex& a, const Complex& b);
Complex shift(const Complex& a, int k);  // shift(a,k)^i = a^{i+k}, diff scaled by (-1)^k

/* Degree-homogeneous linear map between complexes; degree 0 plus the
 * commuting condition makes it a chain map. */
struct GradedMap {
    Complex source, target;
    int degree = 0;
    std::map<int, SparseMat> comp;  // comp[d] : source dim(d) -> target dim(d + degree)

    SparseMat at(int d) const;  // zero block when unset
    void set(int d, SparseMat m);
    bool commutes() const;           // target diff . f == f . source diff on known degrees
    void validate_chain() const;     // degree 0 + commutes, else throws
    bool is_identity() const;
};

GradedMap identity_map(const Complex& c);
GradedMap zero_map(const Complex& src, const Complex& dst, int degree = 0);
GradedMap differential_map(const Complex& c);  // degree +1
GradedMap compose(const GradedMap& g, const GradedMap& f);
GradedMap map_add(const GradedMap& a, const GradedMap& b);
bool map_equal(const GradedMap& a, const GradedMap& b);

struct ConeResult {
    Complex cone;
    GradedMap include_target;        // target -> cone
    GradedMap project_shift_source;  // cone -> shift(source, 1)
};
ConeResult cone(const GradedMap& f);

/* The canonical contraction h of disk(m+1) = cone(id of sphere(m)):
 * a degree -1 endomorphism with dh + hd = id, verified exactly. */
GradedMap contraction_of_cone_id(int m, const Field& f);

/* The hom complex Hom(a, b) with its basis bookkeeping: basis element
 * (i, r, c) is the homogeneous map taking the r-th basis vector of a^i
 * to the c-th basis vector of b^{i+n}. */
struct HomComplex {
    Complex cx;
    Complex a, b;
    std::map<int, std::vector<std::tuple<int, int, int>>> basis;  // degree -> (i, r, c)

    int index_of(int n, int i, int r, int c) const;
    Vec to_vec(const GradedMap& f) const;            // f : a -> b homogeneous
    GradedMap to_map(int n, const Vec& coords) const;
};
HomComplex hom_complex(const Complex& a, const Complex& b);

/* Post-composition with a chain map p : b -> b2, as a chain map
 * Hom(a, b) -> Hom(a, b2). */
GradedMap hom_post_compose(const HomComplex& hab, const HomComplex& hab2, const GradedMap& p);

struct HomologyResult {
    GradedWindow window;
    std::map<int, int> dims;
    std::map<int, std::vector<Vec>> representatives;  // cycle reps in C[d] coordinates
};
/* Exact homology over [w.lo, w.hi]; requires degrees w.lo-1 .. w.hi+1 known. */
HomologyResult homology(const Complex& c, GradedWindow w);

enum class VerdictStatus { yes, no, inconclusive };
std::string verdict_str(VerdictStatus s);

struct SurjQisoVerdict {
    VerdictStatus status = VerdictStatus::inconclusive;
    std::string witness;                 // empty unless status == no
    std::optional<int> witness_degree;
    std::string witness_kind;            // "not-surjective" | "homology-mismatch"
};
/* p surjective in every degree of w and a homology iso there. */
SurjQisoVerdict check_surj_qiso(const GradedMap& p, GradedWindow w);

struct VecLift {
    enum class Status { found, infeasible } status = Status::infeasible;
    Vec v;
    std::string message;
};
/* Solve p(v) = w, dv = z for z a cycle in the source at degree zdeg and
 * w in the target at degree zdeg - 1 with dw = p(z). Infeasibility is
 * reported as "window insufficient"; deciding a genuine non-lift is the
 * caller's job (it needs finiteness certificates). */
VecLift lift_sphere_disk(const GradedMap& p, int zdeg, const Vec& z, const Vec& w);

}  // namespace dgcat
