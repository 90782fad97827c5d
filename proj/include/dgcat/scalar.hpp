#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace dgcat {

/* Errors raised on broken preconditions (division by zero, mismatched
 * fields, malformed constructions). Validation-style operations return
 * reports instead of throwing. */
struct DgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Coefficient field: the rationals (p == 0) or F_p for a prime p < 2^31. */
struct Field {
    std::uint32_t p = 0;

    bool is_rational() const { return p == 0; }
    std::string str() const { return p == 0 ? "Q" : "F " + std::to_string(p); }
    friend bool operator==(const Field&, const Field&) = default;
};

Field field_q();
Field field_fp(std::uint32_t p);  // throws DgError unless p is prime and < 2^31

/* Exact scalar in Q (arbitrary-precision rational) or F_p (kept reduced
 * to [0, p)). All arithmetic is exact; division by zero throws. */
class Scalar {
  public:
    Scalar() = default;  // 0 in Q
    static Scalar zero(const Field& f);
    static Scalar one(const Field& f);
    static Scalar of_int(long n, const Field& f);
    static Scalar of_fraction(long num, long den, const Field& f);
    static Scalar parse(const std::string& text, const Field& f);  // "n" or "n/d"

    const Field& field() const { return field_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_negative() const { return field_.p == 0 && v_ < 0; }
    Scalar abs() const { return is_negative() ? -*this : *this; }

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    Scalar inverse() const;

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.field_ == b.field_ && a.v_ == b.v_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    std::string str() const;  // canonical "n" or "n/d"; F_p representative in [0, p)

  private:
    mpq_class v_;  // in F_p mode an integer in [0, p)
    Field field_;

    void reduce_();
    static void check_same_field_(const Scalar& a, const Scalar& b);
};

}  // namespace dgcat
