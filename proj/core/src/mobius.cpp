#include "rlab/mobius.hpp"

#include <cmath>
#include <limits>

#include "rlab/errors.hpp"

namespace rlab {

namespace {

Real default_tol(const RealMatrix& m) {
    Real s = std::max({std::fabs(m.a), std::fabs(m.b), std::fabs(m.c), std::fabs(m.d), Real(1)});
    return 64 * std::numeric_limits<Real>::epsilon() * s * s;
}

BoundaryPoint finite(Real x) { return {false, x}; }

}  // namespace

std::string to_string(ElementClass k) {
    switch (k) {
    case ElementClass::identity: return "identity";
    case ElementClass::elliptic: return "elliptic";
    case ElementClass::parabolic: return "parabolic";
    case ElementClass::hyperbolic: return "hyperbolic";
    }
    return "?";
}

IntMatrix make_int_matrix(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d) {
    if (a * d - b * c != 1)
        throw DomainError("integer matrix has determinant " + BigInt(a * d - b * c).str() + ", expected 1");
    return {a, b, c, d};
}

RealMatrix make_real_matrix(Real a, Real b, Real c, Real d) {
    RealMatrix m{a, b, c, d};
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
        throw DomainError("matrix entry is not finite");
    if (std::fabs(m.det() - 1) > default_tol(m))
        throw DomainError("matrix determinant deviates from 1");
    return m;
}

RealMatrix to_real(const IntMatrix& m) {
    return {m.a.convert_to<Real>(), m.b.convert_to<Real>(), m.c.convert_to<Real>(), m.d.convert_to<Real>()};
}

ElementClass classify(const IntMatrix& m) {
    if (m.b == 0 && m.c == 0 && (m.a == m.d) && (m.a == 1 || m.a == -1))
        return ElementClass::identity;
    BigInt t = abs(m.trace());
    if (t < 2) return ElementClass::elliptic;
    if (t == 2) return ElementClass::parabolic;
    return ElementClass::hyperbolic;
}

ElementClass classify(const RealMatrix& m, Real tol) {
    if (tol <= 0) tol = default_tol(m);
    if (std::fabs(m.b) <= tol && std::fabs(m.c) <= tol && std::fabs(m.a - m.d) <= tol &&
        std::fabs(std::fabs(m.a) - 1) <= tol)
        return ElementClass::identity;
    Real t = std::fabs(m.trace());
    if (std::fabs(t - 2) <= tol) return ElementClass::parabolic;
    return t < 2 ? ElementClass::elliptic : ElementClass::hyperbolic;
}

Real length_from_trace(Real abs_trace) {
    // acosh(1 + y) written to keep precision when |tr| is close to 2
    Real y = (abs_trace - 2) / 2;
    return 2 * std::log1p(y + std::sqrt(y * (2 + y)));
}

Real displacement_length(const IntMatrix& m) {
    if (classify(m) != ElementClass::hyperbolic)
        throw DomainError("displacement length requires a hyperbolic element");
    BigInt t = abs(m.trace());
    Real y = BigInt(t - 2).convert_to<Real>() / 2;
    return 2 * std::log1p(y + std::sqrt(y * (2 + y)));
}

Real displacement_length(const RealMatrix& m) {
    if (classify(m) != ElementClass::hyperbolic)
        throw DomainError("displacement length requires a hyperbolic element");
    return length_from_trace(std::fabs(m.trace()));
}

std::pair<BoundaryPoint, BoundaryPoint> fixed_points(const RealMatrix& m) {
    if (classify(m) != ElementClass::hyperbolic)
        throw DomainError("fixed points requested for a non-hyperbolic element");
    Real t = m.trace();
    Real disc = std::sqrt((t - 2) * (t + 2));
    if (m.c == 0) {
        // fixes ∞ and b/(d - a); ∞ attracts when |a| > |d|
        BoundaryPoint inf{true, 0};
        BoundaryPoint x = finite(m.b / (m.d - m.a));
        return std::fabs(m.a) > std::fabs(m.d) ? std::make_pair(inf, x) : std::make_pair(x, inf);
    }
    // roots of c z^2 + (d - a) z - b
    Real p = m.d - m.a;
    Real q = -(p + std::copysign(disc, p)) / 2;
    Real z1 = q / m.c;
    Real z2 = (q != 0) ? -m.b / q : (m.a - m.d + disc) / (2 * m.c);
    // attracting: |c z + d| > 1
    if (std::fabs(m.c * z1 + m.d) > std::fabs(m.c * z2 + m.d))
        return {finite(z1), finite(z2)};
    return {finite(z2), finite(z1)};
}

std::pair<BoundaryPoint, BoundaryPoint> fixed_points(const IntMatrix& m) {
    if (classify(m) != ElementClass::hyperbolic)
        throw DomainError("fixed points requested for a non-hyperbolic element");
    return fixed_points(to_real(m));
}

ComplexL apply(const RealMatrix& m, ComplexL z) { return (m.a * z + m.b) / (m.c * z + m.d); }

Real apply(const RealMatrix& m, Real x) { return (m.a * x + m.b) / (m.c * x + m.d); }

ComplexL derivative(const RealMatrix& m, ComplexL z) {
    ComplexL w = m.c * z + m.d;
    return Real(1) / (w * w);
}

}  // namespace rlab
