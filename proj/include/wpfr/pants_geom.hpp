#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "wpfr/errors.hpp"

namespace wpfr {

struct BoundaryLengths {
    double l1, l2, l3;

    BoundaryLengths(double a, double b, double c) : l1(a), l2(b), l3(c) {
        if (!(a > 0.0 && b > 0.0 && c > 0.0))
            throw domain_error("BoundaryLengths: lengths must be positive");
    }
};

// Coordinates (L1, L2, u): arc lengths at the self-intersection and
// u = cos^2(theta/2) for the outer angle theta.
struct ConvCoords {
    double L1, L2, u;

    ConvCoords(double a, double b, double c) : L1(a), L2(b), u(c) {
        if (!(a > 0.0 && b > 0.0))
            throw domain_error("ConvCoords: L1, L2 must be positive");
        if (!(c > 0.0 && c < 1.0))
            throw domain_error("ConvCoords: u must lie in (0,1)");
    }
};

namespace stable {

// log cosh / log sinh / log-sum-exp, safe for huge arguments.
inline double log_cosh(double x) {
    x = std::fabs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
}
inline double log_sinh(double x) {
    return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}
inline double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}
// acosh(y) given log(y), valid for log(y) >= 0
inline double acosh_from_log(double ly) {
    if (ly > 20.0) return ly + std::log(2.0);
    const double y = std::exp(ly);
    return std::acosh(y);
}

}  // namespace stable

// length floor for non-simple geodesics; equals 4 acosh(sqrt 2)
inline double length_floor() { return 2.0 * std::acosh(3.0); }
inline double ell0() { return 4.0 * std::acosh(std::sqrt(2.0)); }

// cosh(LF/2) = 2 cosh(l1/2) cosh(l2/2) + cosh(l3/2); argument >= 3 always.
inline double figure_eight_length(const BoundaryLengths& b) {
    const double arg = 2.0 * std::cosh(0.5 * b.l1) * std::cosh(0.5 * b.l2) +
                       std::cosh(0.5 * b.l3);
    return 2.0 * std::acosh(arg);
}

// cosh(L_j/2) = [cosh(l1/2) sinh((j+1)l2/2) + cosh(l3/2) sinh(j l2/2)]
//               / sinh(l2/2);  j = 1 reduces to the figure-eight.
// Arguments beyond ~500 in j*l2 are evaluated in log space.
inline double iterated_length(const BoundaryLengths& b, int j) {
    if (j < 1) throw domain_error("iterated_length: j must be >= 1");
    const double jd = static_cast<double>(j);
    if (jd * b.l2 > 500.0 || b.l1 > 500.0 || b.l3 > 500.0) {
        const double la = stable::log_cosh(0.5 * b.l1) +
                          stable::log_sinh(0.5 * (jd + 1.0) * b.l2);
        const double lb = stable::log_cosh(0.5 * b.l3) +
                          stable::log_sinh(0.5 * jd * b.l2);
        const double larg =
            stable::log_add(la, lb) - stable::log_sinh(0.5 * b.l2);
        return 2.0 * stable::acosh_from_log(larg);
    }
    const double s2 = std::sinh(0.5 * b.l2);
    const double arg = (std::cosh(0.5 * b.l1) * std::sinh(0.5 * (jd + 1.0) * b.l2) +
                        std::cosh(0.5 * b.l3) * std::sinh(0.5 * jd * b.l2)) /
                       s2;
    return 2.0 * std::acosh(arg);
}

// ---------------------------------------------------------------------------
// Domain E_j and the (l1,l2,l3) <-> (L1,L2,u) change of variables

enum class DomainConstraint { none, first_cuff, second_cuff, third_boundary };

inline const char* constraint_name(DomainConstraint c) {
    switch (c) {
        case DomainConstraint::first_cuff: return "sqrt(u) cosh(L1/2) > 1";
        case DomainConstraint::second_cuff: return "sqrt(u) cosh(L2/2) > 1";
        case DomainConstraint::third_boundary:
            return "third boundary cosh(l3/2) > 1";
        default: return "none";
    }
}

struct DomainCheck {
    bool inside;
    DomainConstraint violated;
};

namespace detail {

// a_j(l2) = sinh(l2/2)/sinh(j l2/2),
// b_j(l2) = sinh((j+1) l2/2) / (2 sinh(l2/2) cosh(j l2/2)); both 1 at j=1.
inline double iter_a(double l2, int j) {
    return std::sinh(0.5 * l2) / std::sinh(0.5 * j * l2);
}
inline double iter_b(double l2, int j) {
    return std::sinh(0.5 * (j + 1.0) * l2) /
           (2.0 * std::sinh(0.5 * l2) * std::cosh(0.5 * j * l2));
}

// cosh(l3/2) as a function of the coordinates; requires the second cuff
// constraint to already hold when j >= 2.
inline double cosh_half_l3(const ConvCoords& c, int j) {
    const double sum = std::cosh(0.5 * (c.L1 + c.L2));
    const double diff = std::cosh(0.5 * (c.L1 - c.L2));
    if (j == 1) return (1.0 - c.u) * sum - c.u * diff;
    const double ch_jl2 = std::sqrt(c.u) * std::cosh(0.5 * c.L2);
    const double l2 = 2.0 / j * std::acosh(ch_jl2);
    const double a = iter_a(l2, j);
    const double b = iter_b(l2, j);
    return a * ((1.0 - b * c.u) * sum - b * c.u * diff);
}

}  // namespace detail

inline DomainCheck in_domain_E(const ConvCoords& c, int j) {
    if (j < 1) throw domain_error("in_domain_E: j must be >= 1");
    const double su = std::sqrt(c.u);
    if (!(su * std::cosh(0.5 * c.L1) > 1.0))
        return {false, DomainConstraint::first_cuff};
    if (!(su * std::cosh(0.5 * c.L2) > 1.0))
        return {false, DomainConstraint::second_cuff};
    if (!(detail::cosh_half_l3(c, j) > 1.0))
        return {false, DomainConstraint::third_boundary};
    return {true, DomainConstraint::none};
}

inline BoundaryLengths coords_to_boundary(const ConvCoords& c, int j) {
    const DomainCheck chk = in_domain_E(c, j);
    if (!chk.inside)
        throw domain_error(std::string("coords_to_boundary: point outside E_j, "
                                       "violated constraint: ") +
                           constraint_name(chk.violated));
    const double su = std::sqrt(c.u);
    const double l1 = 2.0 * std::acosh(su * std::cosh(0.5 * c.L1));
    const double l2 = 2.0 / j * std::acosh(su * std::cosh(0.5 * c.L2));
    const double l3 = 2.0 * std::acosh(detail::cosh_half_l3(c, j));
    return BoundaryLengths(l1, l2, l3);
}

struct RootSolveOptions {
    int max_iterations = 200;
    double tolerance = 1e-14;
};

// Inverse map: 1-D bisection in u (the sum L1(u)+L2(u) is strictly
// decreasing), then L1, L2 explicit. The bracket is seeded at the u -> 1
// end where the sum tends to l1 + j*l2 < L_j.
inline ConvCoords boundary_to_coords(const BoundaryLengths& b, int j,
                                     const RootSolveOptions& opt = {}) {
    if (j < 1) throw domain_error("boundary_to_coords: j must be >= 1");
    const double target = iterated_length(b, j);
    const double ch1 = std::cosh(0.5 * b.l1);
    const double chj = std::cosh(0.5 * j * b.l2);
    auto sum_L = [&](double u) {
        const double su = std::sqrt(u);
        return 2.0 * std::acosh(ch1 / su) + 2.0 * std::acosh(chj / su);
    };
    double hi = 1.0 - 1e-16;           // sum_L(hi) < target
    double lo = 0.5;
    int guard = 0;
    while (sum_L(lo) < target) {
        lo *= 0.5;
        if (++guard > 2000)
            throw numeric_error("boundary_to_coords: no lower bracket, last u=" +
                                std::to_string(lo));
    }
    double flo = sum_L(lo) - target;
    for (int it = 0; it < opt.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = sum_L(mid) - target;
        if (fm > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < opt.tolerance * hi) break;
    }
    const double u = 0.5 * (lo + hi);
    if (!(std::fabs(sum_L(u) - target) < 1e-8 * std::max(1.0, target)))
        throw numeric_error(
            "boundary_to_coords: bisection stalled, bracket [" +
            std::to_string(lo) + ", " + std::to_string(hi) + "], residual " +
            std::to_string(flo));
    const double su = std::sqrt(u);
    const double L1 = 2.0 * std::acosh(ch1 / su);
    const double L2 = 2.0 * std::acosh(chj / su);
    return ConvCoords(L1, L2, u);
}

// |det d(l1,l2,l3)/d(L1,L2,u)|; closed form
//   sinh^2((L1+L2)/2) * s_j / prod_i sinh(l_i/2),
//   s_1 = 1,  s_j = sinh^2(l2/2) / (j sinh^2(j l2/2)).
inline double jacobian(const ConvCoords& c, int j) {
    const BoundaryLengths b = coords_to_boundary(c, j);  // validates domain
    const double num = std::pow(std::sinh(0.5 * (c.L1 + c.L2)), 2);
    double scale = 1.0;
    if (j >= 2) {
        const double s = std::sinh(0.5 * b.l2) / std::sinh(0.5 * j * b.l2);
        scale = s * s / j;
    }
    return num * scale /
           (std::sinh(0.5 * b.l1) * std::sinh(0.5 * b.l2) * std::sinh(0.5 * b.l3));
}

// ---------------------------------------------------------------------------
// Level-set domain bookkeeping (j = 1)

struct DomainParams {
    double u_minus = 0.0;
    double u_plus = 0.0;
    double L_minus_inf = 0.0;
    double L_minus = 0.0;  // NaN when u > u_plus (no admissible L)
    bool in_E1 = false;
};

inline double u_minus_of(double ell) {
    const double c = std::cosh(0.25 * ell);
    return 1.0 / (c * c);
}
inline double u_plus_of(double ell) { return 1.0 - u_minus_of(ell); }

inline double L_minus_inf_of(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw domain_error("L_minus_inf: u must be in (0,1)");
    const double first = 2.0 * std::acosh(1.0 / std::sqrt(u));
    const double second = std::log(u / (1.0 - u));
    return std::max(first, second);
}

inline DomainParams domain_params(double ell, double u) {
    if (!(ell > 0.0)) throw domain_error("domain_params: ell must be > 0");
    if (!(u > 0.0 && u < 1.0))
        throw domain_error("domain_params: u must be in (0,1)");
    DomainParams p;
    p.u_minus = u_minus_of(ell);
    p.u_plus = u_plus_of(ell);
    p.L_minus_inf = L_minus_inf_of(u);
    const double first = 2.0 * std::acosh(1.0 / std::sqrt(u));
    const double arg = ((1.0 - u) * std::cosh(0.5 * ell) - 1.0) / u;
    if (arg >= 1.0) {
        const double third = 0.5 * ell - std::acosh(arg);
        p.L_minus = std::max(first, third);
    } else {
        p.L_minus = std::numeric_limits<double>::quiet_NaN();
    }
    p.in_E1 = ell > ell0() && u > p.u_minus && u < p.u_plus;
    return p;
}

// Scaled gap (L_minus - L_minus_inf) / (l e^{-l/2} / (1-u)); finite and
// bounded on E_1, which is the content of the domain approximation bound.
inline double delta_Lmin_ratio(double ell, double u) {
    const DomainParams p = domain_params(ell, u);
    if (!p.in_E1 || std::isnan(p.L_minus))
        throw domain_error("delta_Lmin_ratio: (ell,u) must lie in E_1");
    const double gap = p.L_minus - p.L_minus_inf;
    return gap / (ell * std::exp(-0.5 * ell) / (1.0 - u));
}

// ---------------------------------------------------------------------------
// Expansion remainders of the coordinate change

struct ExpansionRemainders {
    double r0;  // l1(L,u) - L - log u
    double r;   // log(1 - u/(1-u) e^{-L})
};

inline ExpansionRemainders expansion_remainders(double L, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw domain_error("expansion_remainders: u must be in (0,1)");
    const double x = std::sqrt(u) * std::cosh(0.5 * L);
    if (!(x > 1.0))
        throw domain_error("expansion_remainders: L below L_minus_inf(u)");
    const double t = u / (1.0 - u) * std::exp(-L);
    if (!(t < 1.0))
        throw domain_error("expansion_remainders: log argument non-positive");
    ExpansionRemainders out;
    out.r0 = 2.0 * std::acosh(x) - L - std::log(u);
    out.r = std::log1p(-t);
    return out;
}

// ---------------------------------------------------------------------------

enum class FillMode { filling, double_filling };

// length inequality for filling loops: boundary <= 2 length (filling) or
// boundary <= length (double-filling)
inline bool double_fill_check(double boundary_total, double geodesic_length,
                              FillMode mode) {
    if (!(boundary_total > 0.0 && geodesic_length > 0.0))
        throw domain_error("double_fill_check: inputs must be positive");
    const double cap = mode == FillMode::filling ? 2.0 * geodesic_length
                                                 : geodesic_length;
    return boundary_total <= cap;
}

}  // namespace wpfr
