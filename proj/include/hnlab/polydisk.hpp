#ifndef HNLAB_POLYDISK_HPP
#define HNLAB_POLYDISK_HPP

// Rational inner and Cayley inner functions on the polydisk, the kernels of
// the boundary integral representation, and the nonuniqueness demo families.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "hnlab/multipoly.hpp"
#include "hnlab/util.hpp"

namespace hnlab {

// ---------------------------------------------------------------------------
// Rational inner functions z^m p*(z)/p(z) with p zero-free in the open
// polydisk.
// ---------------------------------------------------------------------------
struct RationalInner {
    CPoly p;
    CPoly pstar;   // reflection of p at its multi-degree
    MultiIndex m;  // monomial shift
    MultiIndex n;  // multi-degree of p

    int dim() const { return p.dim(); }

    Complex eval(const std::vector<Complex>& z) const {
        Complex den = p.eval(z);
        if (den == Complex{})
            throw std::domain_error("RationalInner: denominator vanishes at the point");
        Complex mono{1.0, 0.0};
        for (std::size_t j = 0; j < m.size(); ++j)
            for (int k = 0; k < m[j]; ++k) mono *= z[j];
        return mono * pstar.eval(z) / den;
    }

    Complex operator()(const std::vector<Complex>& z) const { return eval(z); }
};

namespace detail {

/// Scans p over product grids of |z_j| in {0.5, 0.9, 0.99} times uniform
/// angles, plus random interior points. Returns false when a value within
/// 1e-12 of zero is found. The per-axis angle count shrinks with dimension
/// to keep the product grid tractable.
inline bool polydisk_interior_nonvanishing(const CPoly& p, std::uint64_t seed = 0x5eed) {
    const int d = p.dim();
    const std::vector<double> radii{0.5, 0.9, 0.99};
    const int angles = d <= 2 ? (1 << 10) : (1 << 4);
    const std::size_t per_axis = radii.size() * static_cast<std::size_t>(angles);

    // Per-axis value tables, then odometer over the product grid.
    std::vector<Complex> axis_vals(per_axis);
    for (std::size_t r = 0; r < radii.size(); ++r)
        for (int a = 0; a < angles; ++a)
            axis_vals[r * static_cast<std::size_t>(angles) + static_cast<std::size_t>(a)] =
                std::polar(radii[r], 2.0 * kPi * a / angles);

    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<Complex> z(static_cast<std::size_t>(d));
    for (;;) {
        for (int j = 0; j < d; ++j) z[static_cast<std::size_t>(j)] = axis_vals[idx[static_cast<std::size_t>(j)]];
        if (std::abs(p.eval(z)) <= 1e-12) return false;
        int j = d - 1;
        while (j >= 0) {
            if (++idx[static_cast<std::size_t>(j)] < per_axis) break;
            idx[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }

    Rng rng(mix_seed(seed, 0xa11));
    for (int s = 0; s < 10000; ++s) {
        for (int j = 0; j < d; ++j) z[static_cast<std::size_t>(j)] = disk_point(rng, 0.999);
        if (std::abs(p.eval(z)) <= 1e-12) return false;
    }
    return true;
}

}  // namespace detail

/// Builds the rational inner function z^m p*/p after a sampling stability
/// certificate on p. Zeros on the closed boundary are allowed (they occur
/// for d >= 2, e.g. 2 - z1 - z2 at (1,1)); only open-polydisk zeros reject.
inline RationalInner rif_from_denominator(CPoly p, MultiIndex m);

// ---------------------------------------------------------------------------
// Cayley transform pair.
// ---------------------------------------------------------------------------
inline Complex cayley(Complex f) {
    if (f == Complex{1.0, 0.0})
        throw std::domain_error("cayley: pole at f = 1");
    return (Complex{1.0, 0.0} + f) / (Complex{1.0, 0.0} - f);
}

inline Complex cayley_inverse(Complex phi) {
    if (phi == Complex{-1.0, 0.0})
        throw std::domain_error("cayley_inverse: pole at phi = -1");
    return (phi - Complex{1.0, 0.0}) / (phi + Complex{1.0, 0.0});
}

/// Herglotz-Nevanlinna function (1+f)/(1-f) of a rational inner f.
struct CayleyInner {
    RationalInner f;

    int dim() const { return f.dim(); }

    Complex eval(const std::vector<Complex>& z) const { return cayley(f.eval(z)); }
    Complex operator()(const std::vector<Complex>& z) const { return eval(z); }
};

// ---------------------------------------------------------------------------
// Taylor sections via series division.
// ---------------------------------------------------------------------------
inline PowerSeries taylor_section(const RationalInner& f, const MultiIndex& bound) {
    IndexBox box(bound);
    CPoly numer = CPoly::monomial(f.dim(), f.m, Complex{1.0, 0.0}) * f.pstar;
    return series_divide(numer, f.p, box);
}

inline PowerSeries taylor_section(const CayleyInner& phi, const MultiIndex& bound) {
    IndexBox box(bound);
    CPoly shift = CPoly::monomial(phi.f.dim(), phi.f.m, Complex{1.0, 0.0});
    CPoly numer = phi.f.p + shift * phi.f.pstar;
    CPoly denom = phi.f.p - shift * phi.f.pstar;
    if (denom.coeff(MultiIndex(static_cast<std::size_t>(phi.f.dim()), 0)) == Complex{})
        throw std::domain_error("taylor_section: Cayley pole at the origin (f(0) = 1)");
    return series_divide(numer, denom, box);
}

// ---------------------------------------------------------------------------
// Kernels of the boundary representation.
// ---------------------------------------------------------------------------
inline void check_kernel_point(const std::vector<Complex>& z,
                               const std::vector<Complex>& xi) {
    if (z.size() != xi.size() || z.empty())
        throw std::invalid_argument("kernel: dimension mismatch");
    for (const Complex& v : z)
        if (std::abs(v) >= 1.0)
            throw std::invalid_argument("kernel: z must lie in the open polydisk");
    for (const Complex& u : xi)
        if (std::abs(std::abs(u) - 1.0) > 1e-9)
            throw std::invalid_argument("kernel: xi must lie on the torus");
}

/// H(z, xi) = 2 / prod_j (1 - z_j conj(xi_j)) - 1.
inline Complex kernel_H(const std::vector<Complex>& z, const std::vector<Complex>& xi) {
    check_kernel_point(z, xi);
    Complex prod{1.0, 0.0};
    for (std::size_t j = 0; j < z.size(); ++j)
        prod *= Complex{1.0, 0.0} - z[j] * std::conj(xi[j]);
    return 2.0 / prod - Complex{1.0, 0.0};
}

/// Poisson-Szego kernel prod_j (1-|z_j|^2) / |1 - z_j conj(xi_j)|^2.
inline double poisson_szego(const std::vector<Complex>& z, const std::vector<Complex>& xi) {
    check_kernel_point(z, xi);
    double acc = 1.0;
    for (std::size_t j = 0; j < z.size(); ++j)
        acc *= (1.0 - std::norm(z[j])) / std::norm(Complex{1.0, 0.0} - z[j] * std::conj(xi[j]));
    return acc;
}

// ---------------------------------------------------------------------------
// JSON:  RIF as {"p": <CPoly>, "m": [...]}.
// ---------------------------------------------------------------------------
inline nlohmann::json to_json(const RationalInner& f) {
    return {{"p", to_json(f.p)}, {"m", f.m}};
}

inline RationalInner rif_from_json(const nlohmann::json& j) {
    return rif_from_denominator(cpoly_from_json(j.at("p")),
                                j.at("m").get<MultiIndex>());
}

// ---------------------------------------------------------------------------
// Nonuniqueness families: z1 + l z2^2 on the ball and
// (z1+z2)/2 + (l/2)(z1 - z2)^2 on the bidisk share affine data for all l.
// On the torus the second family reads e^{ia}(cos b - 2l sin^2(b) e^{ia}) in
// the coordinates a = (t1+t2)/2, b = (t1-t2)/2, so its sup norm is
// max_c (c + 2l(1-c^2)) over c in [0,1], which equals 1 exactly when
// l <= 1/4; the grid maximization below confirms this without using the
// closed form.
// ---------------------------------------------------------------------------
struct NonuniquenessRow {
    double lambda = 0.0;
    double sup_f = 0.0;  // sup norm over the closed ball B_2
    double sup_g = 0.0;  // sup norm over the closed bidisk
};

struct NonuniquenessReport {
    std::vector<NonuniquenessRow> rows;
    double affine_deviation = 0.0;  // max change of any |alpha| <= 1 coefficient
};

namespace detail {

/// Maximizes a real function on a rectangle by a coarse grid plus two levels
/// of local refinement around the running maximum.
inline double grid_max_2d(const std::function<double(double, double)>& f,
                          double ax, double bx, double ay, double by,
                          int grid) {
    double best = -std::numeric_limits<double>::infinity();
    double bx0 = ax, by0 = ay;
    auto scan = [&](double x0, double x1, double y0, double y1) {
        for (int i = 0; i <= grid; ++i) {
            double x = x0 + (x1 - x0) * i / grid;
            for (int j = 0; j <= grid; ++j) {
                double y = y0 + (y1 - y0) * j / grid;
                double v = f(x, y);
                if (v > best) { best = v; bx0 = x; by0 = y; }
            }
        }
    };
    scan(ax, bx, ay, by);
    double hx = (bx - ax) / grid, hy = (by - ay) / grid;
    for (int level = 0; level < 2; ++level) {
        scan(std::max(ax, bx0 - hx), std::min(bx, bx0 + hx),
             std::max(ay, by0 - hy), std::min(by, by0 + hy));
        hx = 2.0 * hx / grid;
        hy = 2.0 * hy / grid;
    }
    return best;
}

}  // namespace detail

/// Sup norms of the two families over a lambda grid in [0, 1/4]. Both stay
/// at 1 while the affine Taylor data never moves, exhibiting non-unique
/// extremal extensions of degree-one data.
inline NonuniquenessReport nonuniqueness_demo(int lambda_count = 11, int grid = 768) {
    NonuniquenessReport rep;
    CPoly f_base(2), g_base(2);

    for (int i = 0; i < lambda_count; ++i) {
        double lam = 0.25 * i / (lambda_count - 1);

        // f_lambda = z1 + lam z2^2 as a polynomial; affine data read off exactly.
        CPoly f(2);
        f.add_term(MultiIndex{1, 0}, 1.0);
        f.add_term(MultiIndex{0, 2}, lam);
        CPoly g(2);
        g.add_term(MultiIndex{1, 0}, 0.5);
        g.add_term(MultiIndex{0, 1}, 0.5);
        g.add_term(MultiIndex{2, 0}, 0.5 * lam);
        g.add_term(MultiIndex{1, 1}, -lam);
        g.add_term(MultiIndex{0, 2}, 0.5 * lam);
        if (i == 0) { f_base = f; g_base = g; }
        for (const MultiIndex& a :
             {MultiIndex{0, 0}, MultiIndex{1, 0}, MultiIndex{0, 1}}) {
            rep.affine_deviation = std::max(
                rep.affine_deviation,
                std::max(std::abs(f.coeff(a) - f_base.coeff(a)),
                         std::abs(g.coeff(a) - g_base.coeff(a))));
        }

        NonuniquenessRow row;
        row.lambda = lam;
        // Sphere: z1 = cos(u) e^{i psi1}, z2 = sin(u) e^{i psi2}; the modulus
        // depends on the relative phase chi = psi1 - 2 psi2 only.
        row.sup_f = detail::grid_max_2d(
            [&](double u, double chi) {
                double r1 = std::cos(u), r2 = std::sin(u);
                return std::abs(std::polar(r1, chi) + Complex{lam * r2 * r2, 0.0});
            },
            0.0, 0.5 * kPi, 0.0, 2.0 * kPi, grid);
        // Bidisk: distinguished boundary torus.
        row.sup_g = detail::grid_max_2d(
            [&](double th1, double th2) {
                std::vector<Complex> z{std::polar(1.0, th1), std::polar(1.0, th2)};
                return std::abs(g.eval(z));
            },
            0.0, 2.0 * kPi, 0.0, 2.0 * kPi, grid);
        rep.rows.push_back(row);
    }
    return rep;
}

inline RationalInner rif_from_denominator(CPoly p, MultiIndex m) {
    const int d = p.dim();
    if (static_cast<int>(m.size()) != d)
        throw std::invalid_argument("rif_from_denominator: shift dimension mismatch");
    for (int v : m)
        if (v < 0) throw std::invalid_argument("rif_from_denominator: negative shift");
    if (p.coeff(MultiIndex(static_cast<std::size_t>(d), 0)) == Complex{})
        throw std::domain_error("rif_from_denominator: p(0) = 0");
    if (!detail::polydisk_interior_nonvanishing(p))
        throw std::domain_error(
            "rif_from_denominator: stability certificate failed (interior zero)");
    MultiIndex n = p.multi_degree();
    CPoly ps = reflect(p, n);
    return RationalInner{std::move(p), std::move(ps), std::move(m), std::move(n)};
}

}  // namespace hnlab

#endif  // HNLAB_POLYDISK_HPP
