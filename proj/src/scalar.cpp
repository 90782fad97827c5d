#include "dgcat/scalar.hpp"

namespace dgcat {

namespace {

bool is_prime(std::uint32_t p)
{
    if (p < 2)
        return false;
    for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0)
            return false;
    return true;
}

/* v mod p for a canonical mpq with denominator coprime to p */
mpq_class mod_reduce(const mpq_class& v, std::uint32_t p)
{
    mpz_class num = v.get_num(), den = v.get_den(), pz(p);
    mpz_class n = num % pz;
    if (n < 0)
        n += pz;
    if (den == 1)
        return mpq_class(n);
    mpz_class dinv;
    if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()) == 0)
        throw DgError("denominator not invertible mod " + std::to_string(p));
    mpz_class r = (n * dinv) % pz;
    if (r < 0)
        r += pz;
    return mpq_class(r);
}

}  // namespace

Field field_q()
{
    return Field{};
}

Field field_fp(std::uint32_t p)
{
    if (p >= (1u << 31))
        throw DgError("field characteristic must be < 2^31");
    if (!is_prime(p))
        throw DgError("field characteristic " + std::to_string(p) + " is not prime");
    return Field{p};
}

Scalar Scalar::zero(const Field& f)
{
    Scalar s;
    s.field_ = f;
    return s;
}

Scalar Scalar::one(const Field& f)
{
    Scalar s;
    s.field_ = f;
    s.v_ = 1;
    return s;
}

Scalar Scalar::of_int(long n, const Field& f)
{
    Scalar s;
    s.field_ = f;
    s.v_ = n;
    s.reduce_();
    return s;
}

Scalar Scalar::of_fraction(long num, long den, const Field& f)
{
    if (den == 0)
        throw DgError("zero denominator");
    Scalar s;
    s.field_ = f;
    s.v_ = mpq_class(num, den);
    s.v_.canonicalize();
    s.reduce_();
    return s;
}

Scalar Scalar::parse(const std::string& text, const Field& f)
{
    Scalar s;
    s.field_ = f;
    try {
        s.v_ = mpq_class(text);
    }
    catch (const std::invalid_argument&) {
        throw DgError("bad rational literal '" + text + "'");
    }
    if (s.v_.get_den() == 0)
        throw DgError("zero denominator in '" + text + "'");
    s.v_.canonicalize();
    s.reduce_();
    return s;
}

void Scalar::reduce_()
{
    if (field_.p != 0)
        v_ = mod_reduce(v_, field_.p);
}

void Scalar::check_same_field_(const Scalar& a, const Scalar& b)
{
    if (!(a.field_ == b.field_))
        throw DgError("mixed coefficient fields (" + a.field_.str() + " vs " + b.field_.str() + ")");
}

Scalar Scalar::operator-() const
{
    Scalar s = *this;
    s.v_ = -s.v_;
    s.reduce_();
    return s;
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    check_same_field_(*this, o);
    v_ += o.v_;
    reduce_();
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    check_same_field_(*this, o);
    v_ -= o.v_;
    reduce_();
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    check_same_field_(*this, o);
    v_ *= o.v_;
    reduce_();
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    check_same_field_(*this, o);
    return *this *= o.inverse();
}

Scalar Scalar::inverse() const
{
    if (is_zero())
        throw DgError("division by zero in " + field_.str());
    Scalar s = *this;
    if (field_.p == 0) {
        s.v_ = 1 / v_;
        return s;
    }
    mpz_class inv, pz(field_.p);
    mpz_class num = v_.get_num();
    mpz_invert(inv.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t());
    s.v_ = mpq_class(inv);
    return s;
}

std::string Scalar::str() const
{
    if (v_.get_den() == 1)
        return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

}  // namespace dgcat
