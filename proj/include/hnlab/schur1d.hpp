#ifndef HNLAB_SCHUR1D_HPP
#define HNLAB_SCHUR1D_HPP

// One-variable Schur apparatus: Schur parameters from Taylor data, Wall
// polynomials, Blaschke reconstruction, contractive recombination, and the
// explicit superresolution certificate for degree-n Blaschke products.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hnlab/multipoly.hpp"
#include "hnlab/util.hpp"

namespace hnlab {

constexpr double kUniModulusTol = 1e-10;  // |1 - |gamma|| below this terminates
// The recursion divides by (1 - |gamma_k|^2) at every step, so boundary
// parameters computed from degree-10 sections carry up to ~1e-9 of noise.
// Rejection therefore kicks in above a wider band than termination; the band
// in between is treated as a noisy boundary hit.
constexpr double kSchurRejectTol = 1e-8;

struct SchurChain {
    std::vector<Complex> gamma;
    bool terminated = false;
};

/// Rows of intermediate Taylor coefficients: rows[k][j] = c_j^{(k)} is the
/// j-th coefficient of the k-th Schur iterate, j = 0 .. n-k.
struct IntermediateTaylorTable {
    std::vector<std::vector<Complex>> rows;
};

struct SchurAnalysis {
    SchurChain chain;
    IntermediateTaylorTable table;
};

namespace detail {

// One step of the coefficient recursion, obtained by matching coefficients
// in z f_{k+1} (1 - conj(g) f_k) = f_k - g:
//   c_j^{(k+1)} = (c_{j+1}^{(k)} + conj(g) sum_{i=1..j} c_i^{(k)} c_{j-i}^{(k+1)})
//                 / (1 - |g|^2).
inline std::vector<Complex> schur_step(const std::vector<Complex>& row, Complex g) {
    const double denom = 1.0 - std::norm(g);
    std::vector<Complex> next(row.size() - 1);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
        Complex acc = row[j + 1];
        for (std::size_t i = 1; i <= j; ++i)
            acc += std::conj(g) * row[i] * next[j - i];
        next[j] = acc / denom;
    }
    return next;
}

}  // namespace detail

/// Schur's algorithm on Taylor data c_0..c_n. Terminates early when some
/// |gamma_k| reaches the unit circle; rejects data that cannot come from a
/// Schur function.
inline SchurAnalysis schur_parameters(const std::vector<Complex>& taylor) {
    if (taylor.empty())
        throw std::invalid_argument("schur_parameters: empty Taylor data");
    SchurAnalysis out;
    out.table.rows.push_back(taylor);
    for (;;) {
        const auto& row = out.table.rows.back();
        Complex g = row[0];
        double mod = std::abs(g);
        if (mod > 1.0 + kSchurRejectTol)
            throw std::domain_error("schur_parameters: data not from a Schur function");
        out.chain.gamma.push_back(g);
        if (mod >= 1.0 - kUniModulusTol) {
            out.chain.terminated = true;
            return out;
        }
        if (row.size() == 1) return out;
        out.table.rows.push_back(detail::schur_step(row, g));
    }
}

/// Same recursion without the Schur-class checks: the parameter maps are
/// rational in the Taylor data, and the Lipschitz estimator must evaluate
/// them slightly outside the class.
inline std::vector<Complex> schur_parameters_unchecked(std::vector<Complex> row) {
    if (row.empty())
        throw std::invalid_argument("schur_parameters_unchecked: empty Taylor data");
    std::vector<Complex> gamma;
    gamma.reserve(row.size());
    while (true) {
        Complex g = row[0];
        gamma.push_back(g);
        if (row.size() == 1) break;
        if (std::abs(1.0 - std::norm(g)) < 1e-14)
            throw std::domain_error("schur_parameters_unchecked: singular step");
        row = detail::schur_step(row, g);
    }
    return gamma;
}

struct WallQuadruple {
    CPoly A, B, Astar, Bstar;  // degree-n polynomials in one variable
    double omega = 1.0;        // prod_j (1 - |gamma_j|^2)
};

namespace detail {

inline CPoly poly_from_coeffs(const std::vector<Complex>& c) {
    CPoly p(1);
    for (std::size_t k = 0; k < c.size(); ++k)
        p.add_term(MultiIndex{static_cast<int>(k)}, c[k]);
    return p;
}

}  // namespace detail

/// Wall polynomials of the chain, by the degree recursion
///   A_{n+1} = A_n + g z B*_n,   B_{n+1} = B_n + g z A*_n,
///   A*_{n+1} = z A*_n + conj(g) B_n,   B*_{n+1} = z B*_n + conj(g) A_n.
inline WallQuadruple wall_polynomials(const SchurChain& chain) {
    if (chain.gamma.empty())
        throw std::invalid_argument("wall_polynomials: empty chain");
    const std::size_t n = chain.gamma.size() - 1;
    std::vector<Complex> A{chain.gamma[0]}, B{Complex{1.0, 0.0}};
    std::vector<Complex> As{std::conj(chain.gamma[0])}, Bs{Complex{1.0, 0.0}};
    double omega = 1.0 - std::norm(chain.gamma[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        Complex g = chain.gamma[k];
        std::vector<Complex> nA(k + 1), nB(k + 1), nAs(k + 1), nBs(k + 1);
        for (std::size_t j = 0; j < k; ++j) {
            nA[j] += A[j];
            nB[j] += B[j];
            nA[j + 1] += g * Bs[j];
            nB[j + 1] += g * As[j];
            nAs[j + 1] += As[j];
            nBs[j + 1] += Bs[j];
            nAs[j] += std::conj(g) * B[j];
            nBs[j] += std::conj(g) * A[j];
        }
        A = std::move(nA);
        B = std::move(nB);
        As = std::move(nAs);
        Bs = std::move(nBs);
        omega *= 1.0 - std::norm(g);
    }
    WallQuadruple q{detail::poly_from_coeffs(A), detail::poly_from_coeffs(B),
                    detail::poly_from_coeffs(As), detail::poly_from_coeffs(Bs),
                    omega};
    return q;
}

/// Rational function held as a numerator/denominator pair of 1-D polynomials.
struct BlaschkeRational {
    CPoly num, den;

    Complex eval(Complex z) const {
        Complex d = den.eval({z});
        if (d == Complex{})
            throw std::domain_error("BlaschkeRational: denominator vanishes at the point");
        return num.eval({z}) / d;
    }

    std::vector<Complex> taylor(int order) const {
        IndexBox box{MultiIndex{order}};
        PowerSeries s = series_divide(num, den, box);
        std::vector<Complex> c(static_cast<std::size_t>(order) + 1);
        for (int k = 0; k <= order; ++k) c[static_cast<std::size_t>(k)] = s.at(MultiIndex{k});
        return c;
    }
};

/// A_k / B_k for a terminated chain: the Blaschke product of degree k that
/// generated the data.
inline BlaschkeRational blaschke_from_chain(const SchurChain& chain) {
    if (!chain.terminated)
        throw std::invalid_argument("blaschke_from_chain: chain not terminated");
    WallQuadruple q = wall_polynomials(chain);
    return BlaschkeRational{q.A, q.B};
}

using ScalarFn = std::function<Complex(Complex)>;

/// z -> (A_n + z B*_n h) / (B_n + z A*_n h); contractive whenever h is.
inline ScalarFn schur_recombine(const WallQuadruple& quad, ScalarFn h) {
    return [quad, h = std::move(h)](Complex z) {
        Complex hv = h(z);
        Complex den = quad.B.eval({z}) + z * quad.Astar.eval({z}) * hv;
        if (den == Complex{})
            throw std::domain_error("schur_recombine: denominator vanished");
        return (quad.A.eval({z}) + z * quad.Bstar.eval({z}) * hv) / den;
    };
}

// ---------------------------------------------------------------------------
// Superresolution certificate.
// ---------------------------------------------------------------------------
struct SuperresCertificate1D {
    double L = 0.0;    // min of |B_n| over the closed disk
    double M = 0.0;    // fitted Lipschitz constant of the Wall coefficients
    double eps = 0.0;  // radius of the Taylor-data ball the fit covers

    /// Certified bound at |z| = r for a coefficient gap e <= eps.
    double bound(double r, double e) const {
        return 4.0 * M * e / ((L - M * e) * (1.0 - r));
    }
    double bound(double r) const { return bound(r, eps); }
};

namespace detail {

inline std::vector<Complex> wall_coefficient_vector(const std::vector<Complex>& taylor) {
    std::vector<Complex> gamma = schur_parameters_unchecked(taylor);
    SchurChain chain{std::move(gamma), false};
    WallQuadruple q = wall_polynomials(chain);
    const int n = static_cast<int>(taylor.size()) - 1;
    std::vector<Complex> w;
    w.reserve(4 * static_cast<std::size_t>(n + 1));
    for (const CPoly* p : {&q.A, &q.B, &q.Astar, &q.Bstar})
        for (int k = 0; k <= n; ++k) w.push_back(p->coeff(MultiIndex{k}));
    return w;
}

inline double min_modulus_on_circle(const CPoly& p, int samples = 1 << 12) {
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < samples; ++i) {
        double th = 2.0 * kPi * i / samples;
        double v = std::abs(p.eval({std::polar(1.0, th)}));
        if (v < best) { best = v; best_i = i; }
    }
    double h = 2.0 * kPi / samples;
    double lo = 2.0 * kPi * best_i / samples - h;
    double hi = lo + 2.0 * h;
    double th = golden_minimize(
        [&](double t) { return std::abs(p.eval({std::polar(1.0, t)})); }, lo, hi);
    return std::min(best, std::abs(p.eval({std::polar(1.0, th)})));
}

}  // namespace detail

/// Certificate data for a Blaschke section: the chain must terminate at some
/// k within the data, and the certificate is built at that degree. L is the
/// boundary minimum of |B_k| (B_k is zero-free on the closed disk, so the
/// circle minimum is the disk minimum); M is a central finite-difference
/// Lipschitz fit of all Wall coefficients over the eps-ball of Taylor data,
/// reported as fitted rather than proved. Degree-k Wall coefficients depend
/// on the first k+1 Taylor coefficients only, so the ball is sampled there.
inline SuperresCertificate1D superres_bound_1d(const std::vector<Complex>& taylor,
                                               double eps,
                                               std::uint64_t seed = 0) {
    SchurAnalysis an = schur_parameters(taylor);
    if (!an.chain.terminated)
        throw std::invalid_argument(
            "superres_bound_1d: data is not a Blaschke section");
    WallQuadruple q = wall_polynomials(an.chain);

    SuperresCertificate1D cert;
    cert.eps = eps;
    cert.L = detail::min_modulus_on_circle(q.B);

    const std::size_t n1 = an.chain.gamma.size();
    const std::size_t realdim = 2 * n1;
    const double h = 1e-5;
    Rng rng(mix_seed(seed, 0x5ca1ab1e));
    double maxM = 0.0;
    for (int pt = 0; pt < 64; ++pt) {
        // Uniform point of the closed eps-ball in R^{2(n+1)}.
        std::vector<double> dir(realdim);
        double norm2 = 0.0;
        for (auto& v : dir) { v = normal01(rng); norm2 += v * v; }
        double radius =
            eps * std::pow(uniform01(rng), 1.0 / static_cast<double>(realdim));
        double scale = radius / std::sqrt(std::max(norm2, 1e-300));
        std::vector<Complex> base(taylor.begin(),
                                  taylor.begin() + static_cast<long>(n1));
        for (std::size_t k = 0; k < n1; ++k)
            base[k] += Complex{dir[2 * k] * scale, dir[2 * k + 1] * scale};

        std::vector<double> grad2(4 * n1, 0.0);
        for (std::size_t i = 0; i < realdim; ++i) {
            std::vector<Complex> xp = base, xm = base;
            Complex step = (i % 2 == 0) ? Complex{h, 0.0} : Complex{0.0, h};
            xp[i / 2] += step;
            xm[i / 2] -= step;
            std::vector<Complex> wp = detail::wall_coefficient_vector(xp);
            std::vector<Complex> wm = detail::wall_coefficient_vector(xm);
            for (std::size_t c = 0; c < grad2.size(); ++c)
                grad2[c] += std::norm((wp[c] - wm[c]) / (2.0 * h));
        }
        for (double g2 : grad2) maxM = std::max(maxM, std::sqrt(g2));
    }
    cert.M = maxM;
    if (cert.L - cert.M * eps <= 0.0)
        throw std::domain_error("superres_bound_1d: eps too large for the certificate");
    return cert;
}

/// A Schur function with known Taylor section, used as perturbation input.
struct SchurPerturbation {
    std::vector<Complex> taylor;
    ScalarFn eval;
};

struct SuperresRow1D {
    double eps = 0.0;
    double z_radius = 0.0;
    double max_distance = 0.0;
    double certified_bound = 0.0;
    double violation = 0.0;  // max_distance - certified_bound
};

/// Sweeps each perturbation over circles |z| = r and compares measured
/// distance against the certificate. Violations are data, not errors.
inline std::vector<SuperresRow1D> verify_superres_1d(
    const std::vector<Complex>& f_taylor,
    const std::vector<SchurPerturbation>& perturbations,
    const std::vector<double>& radii,
    const SuperresCertificate1D& cert,
    int angles = 512) {
    SchurAnalysis an = schur_parameters(f_taylor);
    BlaschkeRational f = blaschke_from_chain(an.chain);

    std::vector<SuperresRow1D> rows;
    rows.reserve(perturbations.size() * radii.size());
    for (const auto& g : perturbations) {
        if (g.taylor.size() != f_taylor.size())
            throw std::invalid_argument("verify_superres_1d: section length mismatch");
        double gap2 = 0.0;
        for (std::size_t k = 0; k < f_taylor.size(); ++k)
            gap2 += std::norm(f_taylor[k] - g.taylor[k]);
        double eps_g = std::sqrt(gap2);
        for (double r : radii) {
            SuperresRow1D row;
            row.eps = eps_g;
            row.z_radius = r;
            double dmax = 0.0;
            for (int i = 0; i < angles; ++i) {
                Complex z = std::polar(r, 2.0 * kPi * i / angles);
                dmax = std::max(dmax, std::abs(f.eval(z) - g.eval(z)));
            }
            row.max_distance = dmax;
            row.certified_bound = cert.bound(r, eps_g);
            row.violation = row.max_distance - row.certified_bound;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace hnlab

#endif  // HNLAB_SCHUR1D_HPP
