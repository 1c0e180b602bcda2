#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace rlab {

using Real = long double;
using BigInt = boost::multiprecision::cpp_int;
using Complex = std::complex<double>;
using ComplexL = std::complex<Real>;

template <class T>
struct Matrix2 {
    T a{1}, b{0}, c{0}, d{1};

    Matrix2() = default;
    Matrix2(T a_, T b_, T c_, T d_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

    T det() const { return a * d - b * c; }
    T trace() const { return a + d; }

    friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const Matrix2& x, const Matrix2& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
};

using IntMatrix = Matrix2<BigInt>;
using RealMatrix = Matrix2<Real>;

enum class ElementClass { identity, elliptic, parabolic, hyperbolic };

std::string to_string(ElementClass k);

// point of R ∪ {∞}
struct BoundaryPoint {
    bool infinite = false;
    Real x = 0;
};

// throws DomainError unless ad - bc = 1
IntMatrix make_int_matrix(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d);
RealMatrix make_real_matrix(Real a, Real b, Real c, Real d);

RealMatrix to_real(const IntMatrix& m);

template <class T>
Matrix2<T> compose(const Matrix2<T>& x, const Matrix2<T>& y) { return x * y; }

template <class T>
Matrix2<T> inverse(const Matrix2<T>& m) { return {m.d, -m.b, -m.c, m.a}; }

ElementClass classify(const IntMatrix& m);
ElementClass classify(const RealMatrix& m, Real tol = 0);

// 2 acosh(|tr|/2); DomainError unless hyperbolic
Real displacement_length(const IntMatrix& m);
Real displacement_length(const RealMatrix& m);
Real length_from_trace(Real abs_trace);

// attracting point first; DomainError unless hyperbolic
std::pair<BoundaryPoint, BoundaryPoint> fixed_points(const RealMatrix& m);
std::pair<BoundaryPoint, BoundaryPoint> fixed_points(const IntMatrix& m);

ComplexL apply(const RealMatrix& m, ComplexL z);
Real apply(const RealMatrix& m, Real x);
// g'(z) = (cz + d)^-2
ComplexL derivative(const RealMatrix& m, ComplexL z);

}  // namespace rlab
