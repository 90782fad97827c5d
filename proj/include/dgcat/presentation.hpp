#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgcat/scalar.hpp"

namespace dgcat {

struct Arrow {
    std::string name;
    int src = 0, dst = 0;  // object indices
    int deg = 0;

    friend bool operator==(const Arrow&, const Arrow&) = default;
};

/* Composable word a_k ... a_1 (a_1 applied first) between objects of a
 * fixed quiver, or an identity word. Arrows are stored in written order,
 * index 0 being the leftmost (last applied) factor. Ordering is by
 * length, then left-to-right by arrow index; presentations keep their
 * arrows sorted by name, so this matches lexicographic-by-name. */
class Word {
  public:
    static Word identity(int obj) { return Word(obj, obj, 0, {}); }
    Word(int src, int dst, int deg, std::vector<int> arrows)
        : src_(src), dst_(dst), deg_(deg), arrows_(std::move(arrows))
    {
    }

    bool is_identity() const { return arrows_.empty(); }
    int src() const { return src_; }
    int dst() const { return dst_; }
    int deg() const { return deg_; }
    int length() const { return static_cast<int>(arrows_.size()); }
    const std::vector<int>& arrows() const { return arrows_; }

    friend std::strong_ordering operator<=>(const Word& a, const Word& b)
    {
        if (auto c = a.arrows_.size() <=> b.arrows_.size(); c != 0)
            return c;
        if (auto c = a.arrows_ <=> b.arrows_; c != 0)
            return c;
        if (auto c = a.src_ <=> b.src_; c != 0)
            return c;
        return a.dst_ <=> b.dst_;
    }
    friend bool operator==(const Word&, const Word&) = default;

  private:
    int src_, dst_, deg_;
    std::vector<int> arrows_;
};

Word concat(const Word& left, const Word& right);  // left . right, right applied first

/* Homogeneous formal k-linear combination of parallel words. The empty
 * sum is the zero element and carries no endpoints. Zero coefficients
 * are never stored. */
class FormalSum {
  public:
    FormalSum() = default;
    FormalSum(const Word& w, Scalar c);

    bool is_zero() const { return terms_.empty(); }
    int src() const;
    int dst() const;
    int deg() const;
    const std::map<Word, Scalar>& terms() const { return terms_; }

    FormalSum& operator+=(const FormalSum& o);
    FormalSum& operator-=(const FormalSum& o);
    friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
    friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
    FormalSum operator-() const;
    FormalSum scaled(const Scalar& c) const;
    friend FormalSum operator*(const FormalSum& left, const FormalSum& right);  // composition
    friend bool operator==(const FormalSum&, const FormalSum&) = default;

  private:
    std::map<Word, Scalar> terms_;
    void add_term_(const Word& w, const Scalar& c);
};

struct Defect {
    std::string where;
    std::string what;
};

struct ValidationReport {
    std::vector<Defect> defects;
    bool ok() const { return defects.empty(); }
    std::string str() const;
};

class DgPresentation;
using PresPtr = std::shared_ptr<const DgPresentation>;

/* Semi-free dg presentation: a graded quiver plus a differential
 * assignment on generating arrows, extended to all words by the Leibniz
 * rule d(w.v) = d(w).v + (-1)^{deg w} w.d(v). Objects and arrows are
 * kept sorted by name so indices, word order and printed output are
 * canonical. An optional distinguished object p is a zero object: no
 * arrow may touch it and all homs through it vanish, End(p) included. */
class DgPresentation {
  public:
    struct ArrowSpec {
        std::string name, src, dst;
        int deg = 0;
    };

    DgPresentation(Field f, std::vector<std::string> objects,
                   std::vector<ArrowSpec> arrows,
                   std::map<std::string, FormalSum> diffs = {},
                   std::optional<std::string> zero_object = std::nullopt);

    const Field& field() const { return field_; }
    int num_objects() const { return static_cast<int>(objects_.size()); }
    int num_arrows() const { return static_cast<int>(arrows_.size()); }
    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const Arrow& arrow(int a) const { return arrows_.at(static_cast<size_t>(a)); }
    const FormalSum& d(int a) const { return d_.at(static_cast<size_t>(a)); }
    std::optional<int> zero_object() const { return zero_object_; }
    bool is_zero_object(int obj) const { return zero_object_ && *zero_object_ == obj; }

    int object_index(const std::string& name) const;   // -1 if absent
    int arrow_index(const std::string& name) const;    // -1 if absent
    const std::string& object_name(int obj) const { return objects_.at(static_cast<size_t>(obj)); }

    FormalSum differential(const Word& w) const;
    FormalSum differential(const FormalSum& s) const;

    std::string word_str(const Word& w) const;
    std::string sum_str(const FormalSum& s) const;

    ValidationReport validate() const;

    friend bool operator==(const DgPresentation& a, const DgPresentation& b);

  private:
    Field field_;
    std::vector<std::string> objects_;
    std::vector<Arrow> arrows_;
    std::vector<FormalSum> d_;
    std::optional<int> zero_object_;
    std::map<std::string, int> object_idx_, arrow_idx_;
};

PresPtr make_presentation(Field f, std::vector<std::string> objects,
                          std::vector<DgPresentation::ArrowSpec> arrows,
                          std::map<std::string, FormalSum> diffs = {},
                          std::optional<std::string> zero_object = std::nullopt);

/* Carry a sum between presentations sharing object/arrow names. */
FormalSum remap_sum(const FormalSum& s, const DgPresentation& from, const DgPresentation& to);

/* The point-adding functor I: adjoin a fresh zero object (renamed
 * deterministically on a clash). Hom-complexes between old objects are
 * untouched. */
PresPtr add_point(const PresPtr& c, const std::string& preferred = "p");
PresPtr forget_point(const PresPtr& c);

/* Dg functor stored on generators: an object map plus an arrow-to-sum
 * map of matching degree and endpoints (possibly the zero sum). */
class DgFunctor {
  public:
    DgFunctor() = default;  // empty; assign before use
    DgFunctor(PresPtr src, PresPtr dst, std::map<std::string, std::string> object_map,
              std::map<std::string, FormalSum> arrow_map);

    const PresPtr& source() const { return src_; }
    const PresPtr& target() const { return dst_; }
    int object_image(int obj) const { return omap_.at(static_cast<size_t>(obj)); }
    const FormalSum& arrow_image(int a) const { return amap_.at(static_cast<size_t>(a)); }

    FormalSum apply(const Word& w) const;
    FormalSum apply(const FormalSum& s) const;

  private:
    PresPtr src_, dst_;
    std::vector<int> omap_;
    std::vector<FormalSum> amap_;
};

ValidationReport validate_functor(const DgFunctor& f);
DgFunctor identity_functor(const PresPtr& p);
DgFunctor compose(const DgFunctor& g, const DgFunctor& f);
bool functor_equal(const DgFunctor& a, const DgFunctor& b);

/* Builders for the categories and functors of the generating sets. */
PresPtr cat_A(const Field& f);
PresPtr cat_B(const Field& f);
PresPtr cat_C(int n, const Field& f);
PresPtr cat_P(int n, const Field& f);
PresPtr cat_K(const Field& f);
PresPtr cat_O(const Field& f);  // pointed: single zero object p

DgFunctor fun_F(const Field& f);            // A -> K, 3 |-> 1
DgFunctor fun_R(int n, const Field& f);     // B -> P(n)
DgFunctor fun_S(int n, const Field& f);     // C(n) -> P(n), c |-> j
DgFunctor fun_Q(const Field& f);            // O -> IA in the pointed category
DgFunctor pointed(const DgFunctor& f);      // add_point on both sides, p |-> p
DgFunctor terminal_functor(const PresPtr& c);  // C -> O (everything to p)

}  // namespace dgcat
