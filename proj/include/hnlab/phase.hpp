#ifndef HNLAB_PHASE_HPP
#define HNLAB_PHASE_HPP

// Exponential-transform machinery: phase functions of Herglotz-Nevanlinna
// sources on torus grids, their Fourier tables, the universal coefficient
// maps, and reconstruction through the boundary integral.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnlab/multipoly.hpp"
#include "hnlab/polydisk.hpp"
#include "hnlab/util.hpp"

namespace hnlab {

// ---------------------------------------------------------------------------
// Evaluable Herglotz sources.
// ---------------------------------------------------------------------------
struct HerglotzSource {
    int dim = 1;
    std::function<Complex(const std::vector<Complex>&)> eval;
    // Rational sources with a.e. boundary values are sampled at r = 1
    // directly; everything else goes through the radial schedule.
    bool boundary_evaluable = false;
};

inline HerglotzSource source_from_cayley(const CayleyInner& phi) {
    return {phi.dim(), [phi](const std::vector<Complex>& z) { return phi.eval(z); },
            true};
}

inline HerglotzSource source_constant(int dim, Complex c) {
    if (c.real() < 0.0)
        throw std::invalid_argument("source_constant: Re c must be >= 0");
    return {dim, [c](const std::vector<Complex>&) { return c; }, true};
}

/// Convex mixture (1-t) a + t b; Herglotz whenever both inputs are.
inline HerglotzSource source_mixture(const HerglotzSource& a, const HerglotzSource& b,
                                     double t) {
    if (a.dim != b.dim)
        throw std::invalid_argument("source_mixture: dimension mismatch");
    auto ea = a.eval, eb = b.eval;
    return {a.dim,
            [ea, eb, t](const std::vector<Complex>& z) {
                return (1.0 - t) * ea(z) + t * eb(z);
            },
            a.boundary_evaluable && b.boundary_evaluable};
}

// ---------------------------------------------------------------------------
// PhaseGrid: samples of the phase g = 1/2 - arg(phi)/pi on the uniform
// N^d torus grid, row-major.
// ---------------------------------------------------------------------------
struct PhaseGrid {
    int dim = 1;
    int n = 0;  // per-axis resolution, power of two
    std::vector<double> samples;
    std::vector<double> radii_used;
    bool converged = true;

    std::size_t size() const { return samples.size(); }

    double at(const std::vector<int>& k) const {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < k.size(); ++j)
            idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(k[j]);
        return samples[idx];
    }
};

inline std::vector<double> default_radius_schedule() {
    std::vector<double> r;
    for (int k = 4; k <= 14; ++k) r.push_back(1.0 - std::pow(2.0, -k));
    return r;
}

namespace detail {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Grid angles for one flattened row-major index.
inline void grid_angles(std::size_t idx, int dim, int n, std::vector<double>& theta) {
    theta.resize(static_cast<std::size_t>(dim));
    for (int j = dim - 1; j >= 0; --j) {
        theta[static_cast<std::size_t>(j)] =
            2.0 * kPi * static_cast<double>(idx % static_cast<std::size_t>(n)) / n;
        idx /= static_cast<std::size_t>(n);
    }
}

/// Phase value at one point; throws on domain failures. Values within fp
/// noise of a zero or a pole count as singular so the shift policy can see
/// boundary singularities that rounding hides (e.g. phi(-1) = 6e-17 i for
/// the Cayley transform of z).
inline double phase_at(const HerglotzSource& src, const std::vector<double>& theta,
                       double r) {
    std::vector<Complex> z(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) z[j] = std::polar(r, theta[j]);
    Complex v = src.eval(z);
    double mod = std::abs(v);
    if (!std::isfinite(mod) || mod < 1e-13 || mod > 1e13)
        throw std::domain_error("phase_function: log branch failure (phi = 0 or infinite)");
    if (v.real() < -1e-8)
        throw std::domain_error("phase_function: source is not Herglotz at a sample");
    double a = std::arg(v);
    if (std::abs(a) > 0.5 * kPi + 1e-8)
        throw std::domain_error("phase_function: phase left [-pi/2, pi/2]");
    return std::clamp(0.5 - a / kPi, 0.0, 1.0);
}

/// Boundary sampling with the half-cell shift policy: grid points that land
/// on singular points of the source (poles, zeros of the denominator) take
/// the average of the two symmetric half-cell shifts. A transversal jump
/// through the node then contributes one sample from each side, which keeps
/// the quadrature unbiased there; boundary values exist a.e. so the shifted
/// points are regular.
inline double phase_at_boundary(const HerglotzSource& src, const std::vector<double>& theta,
                                int n) {
    try {
        return phase_at(src, theta, 1.0);
    } catch (const std::domain_error&) {
    }
    const double half = kPi / n;
    auto shifted = [&](double off, bool all_axes) {
        std::vector<double> t(theta);
        if (all_axes) {
            for (double& v : t) v += off;
        } else {
            t[0] += off;
        }
        return phase_at(src, t, 1.0);
    };
    for (double off : {half, 0.5 * half}) {
        for (bool all_axes : {true, false}) {
            try {
                double a = shifted(off, all_axes);
                double b = shifted(-off, all_axes);
                return 0.5 * (a + b);
            } catch (const std::domain_error&) {
                continue;
            }
        }
    }
    for (double off : {half, 0.5 * half}) {
        try {
            return shifted(off, true);
        } catch (const std::domain_error&) {
            continue;
        }
    }
    throw std::domain_error("phase_function: persistent singularity at a grid point");
}

}  // namespace detail

/// Samples the phase function of a Herglotz source on the uniform torus
/// grid. Boundary-evaluable sources are sampled at r = 1; otherwise the
/// radial schedule runs until two consecutive levels agree pointwise to
/// 1e-6, and the last level is returned with converged = false when the
/// schedule is exhausted first.
inline PhaseGrid phase_function(const HerglotzSource& src, int n,
                                std::vector<double> schedule = default_radius_schedule(),
                                int threads = 1) {
    if (!detail::is_power_of_two(n))
        throw std::invalid_argument("phase_function: N must be a power of two");
    PhaseGrid grid;
    grid.dim = src.dim;
    grid.n = n;
    std::size_t total = 1;
    for (int j = 0; j < src.dim; ++j) total *= static_cast<std::size_t>(n);
    grid.samples.assign(total, 0.0);

    if (src.boundary_evaluable) {
        grid.radii_used = {1.0};
        parallel_for(total, threads, [&](std::size_t idx) {
            std::vector<double> theta;
            detail::grid_angles(idx, src.dim, n, theta);
            grid.samples[idx] = detail::phase_at_boundary(src, theta, n);
        });
        return grid;
    }

    std::vector<double> prev;
    grid.converged = false;
    for (std::size_t level = 0; level < schedule.size(); ++level) {
        double r = schedule[level];
        grid.radii_used.push_back(r);
        parallel_for(total, threads, [&](std::size_t idx) {
            std::vector<double> theta;
            detail::grid_angles(idx, src.dim, n, theta);
            grid.samples[idx] = detail::phase_at(src, theta, r);
        });
        if (!prev.empty()) {
            double diff = 0.0;
            for (std::size_t i = 0; i < total; ++i)
                diff = std::max(diff, std::abs(grid.samples[i] - prev[i]));
            if (diff < 1e-6) {
                grid.converged = true;
                return grid;
            }
        }
        prev = grid.samples;
    }
    return grid;
}

/// Mean absolute difference of two grids: the L1(T^d) distance for the
/// normalized Haar measure.
inline double phase_l1_distance(const PhaseGrid& a, const PhaseGrid& b) {
    if (a.dim != b.dim || a.n != b.n)
        throw std::invalid_argument("phase_l1_distance: grid shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        acc += std::abs(a.samples[i] - b.samples[i]);
    return acc / static_cast<double>(a.samples.size());
}

// ---------------------------------------------------------------------------
// FourierTable: coefficients over the symmetric box |alpha_j| <= bound_j,
// dense in lexicographic order of the shifted index alpha + bound.
// ---------------------------------------------------------------------------
struct FourierTable {
    int dim = 1;
    MultiIndex bound;  // nonnegative entries
    std::vector<Complex> coeff;

    explicit FourierTable(MultiIndex b)
        : dim(static_cast<int>(b.size())), bound(std::move(b)) {
        std::size_t total = 1;
        for (int v : bound) {
            if (v < 0) throw std::invalid_argument("FourierTable: negative bound");
            total *= static_cast<std::size_t>(2 * v + 1);
        }
        coeff.assign(total, Complex{});
    }

    std::size_t rank(const std::vector<int>& alpha) const {
        std::size_t r = 0;
        for (std::size_t j = 0; j < alpha.size(); ++j)
            r = r * static_cast<std::size_t>(2 * bound[j] + 1) +
                static_cast<std::size_t>(alpha[j] + bound[j]);
        return r;
    }

    bool contains(const std::vector<int>& alpha) const {
        if (static_cast<int>(alpha.size()) != dim) return false;
        for (std::size_t j = 0; j < alpha.size(); ++j)
            if (std::abs(alpha[j]) > bound[j]) return false;
        return true;
    }

    Complex at(const std::vector<int>& alpha) const {
        return contains(alpha) ? coeff[rank(alpha)] : Complex{};
    }

    void set(const std::vector<int>& alpha, Complex c) {
        if (!contains(alpha))
            throw std::invalid_argument("FourierTable::set: index outside the box");
        coeff[rank(alpha)] = c;
    }

    template <class F>
    void for_each(F&& f) const {
        std::vector<int> a(static_cast<std::size_t>(dim));
        for (std::size_t j = 0; j < a.size(); ++j) a[j] = -bound[j];
        for (;;) {
            f(const_cast<const std::vector<int>&>(a));
            int j = dim - 1;
            for (; j >= 0; --j) {
                if (a[static_cast<std::size_t>(j)] < bound[static_cast<std::size_t>(j)]) {
                    ++a[static_cast<std::size_t>(j)];
                    for (std::size_t k = static_cast<std::size_t>(j) + 1; k < a.size(); ++k)
                        a[k] = -bound[k];
                    break;
                }
            }
            if (j < 0) return;
        }
    }
};

/// Equal-weight quadrature of g against conj(xi)^alpha over the uniform
/// grid, evaluated as a separable discrete Fourier transform; exact for
/// trigonometric polynomials of per-axis degree below N/2.
inline FourierTable fourier_coeffs(const PhaseGrid& grid, const MultiIndex& bound) {
    if (static_cast<int>(bound.size()) != grid.dim)
        throw std::invalid_argument("fourier_coeffs: bound dimension mismatch");
    for (int b : bound)
        if (b < 0 || 2 * b >= grid.n)
            throw std::invalid_argument("fourier_coeffs: box exceeds the Nyquist limit");

    const int n = grid.n;
    // axis-by-axis contraction: start with real samples, finish with the box.
    std::vector<Complex> cur(grid.samples.begin(), grid.samples.end());
    std::size_t lead = 1;  // product of already-transformed axis sizes
    std::size_t trail = cur.size() / static_cast<std::size_t>(n);
    for (int axis = 0; axis < grid.dim; ++axis) {
        const int b = bound[static_cast<std::size_t>(axis)];
        const std::size_t out_axis = static_cast<std::size_t>(2 * b + 1);
        std::vector<Complex> next(lead * out_axis * trail, Complex{});
        // twiddle[m][k] = e^{-2 pi i (m - b) k / n} / n
        std::vector<std::vector<Complex>> twiddle(out_axis, std::vector<Complex>(static_cast<std::size_t>(n)));
        for (std::size_t m = 0; m < out_axis; ++m) {
            int freq = static_cast<int>(m) - b;
            for (int k = 0; k < n; ++k)
                twiddle[m][static_cast<std::size_t>(k)] =
                    std::polar(1.0 / n, -2.0 * kPi * freq * k / n);
        }
        for (std::size_t l = 0; l < lead; ++l)
            for (std::size_t m = 0; m < out_axis; ++m)
                for (std::size_t t = 0; t < trail; ++t) {
                    Complex acc{};
                    const std::size_t base = l * static_cast<std::size_t>(n) * trail + t;
                    for (int k = 0; k < n; ++k)
                        acc += cur[base + static_cast<std::size_t>(k) * trail] *
                               twiddle[m][static_cast<std::size_t>(k)];
                    next[(l * out_axis + m) * trail + t] = acc;
                }
        cur = std::move(next);
        lead *= out_axis;
        if (axis + 1 < grid.dim) trail /= static_cast<std::size_t>(n);
    }
    FourierTable table{bound};
    table.coeff = std::move(cur);
    return table;
}

// ---------------------------------------------------------------------------
// Universal coefficient maps: the Fourier data of the phase is a rational
// expression in the Taylor section of phi. Matching the expansion of the
// boundary kernel H against log phi gives
//   g^(0)      = 1/2 - arg(phi(0)) / pi,
//   g^(alpha)  = i c_alpha(log phi) / (2 pi)   for alpha != 0, alpha >= 0,
// and conjugate symmetry fills the opposite orthant; mixed-sign entries
// vanish for Herglotz sources.
// ---------------------------------------------------------------------------
struct UniversalMapInput {
    PowerSeries taylor_phi;
    Complex phi0;
};

inline FourierTable universal_L(const UniversalMapInput& input) {
    const PowerSeries& t = input.taylor_phi;
    if (input.phi0 == Complex{})
        throw std::domain_error("universal_L: phi(0) = 0");
    if (input.phi0.real() < 0.0)
        throw std::invalid_argument("universal_L: Re phi(0) must be >= 0");
    if (std::abs(t.constant_term() - input.phi0) > 1e-9)
        throw std::invalid_argument("universal_L: phi(0) disagrees with the section");
    FourierTable table{t.box().bound()};
    std::vector<int> zero(static_cast<std::size_t>(t.dim()), 0);
    table.set(zero, Complex{0.5 - std::arg(input.phi0) / kPi, 0.0});

    PowerSeries logphi = series_log(t, t.box());
    const Complex factor{0.0, 1.0 / (2.0 * kPi)};
    t.box().for_each([&](const MultiIndex& a) {
        if (std::all_of(a.begin(), a.end(), [](int v) { return v == 0; })) return;
        Complex ghat = factor * logphi.at(a);
        std::vector<int> pos(a.begin(), a.end());
        std::vector<int> neg(pos);
        for (int& v : neg) v = -v;
        table.set(pos, ghat);
        table.set(neg, std::conj(ghat));
    });
    return table;
}

/// phi(z) = i exp(pi Im psi(0)) exp(-i pi \int H(z, .) g dTheta), with the
/// integral evaluated by the grid's equal-weight quadrature.
inline Complex reconstruct_phi(const PhaseGrid& grid, double im_psi0,
                               const std::vector<Complex>& z) {
    if (static_cast<int>(z.size()) != grid.dim)
        throw std::invalid_argument("reconstruct_phi: point dimension mismatch");
    for (const Complex& v : z)
        if (std::abs(v) >= 1.0)
            throw std::invalid_argument("reconstruct_phi: z must lie in the open polydisk");
    Complex acc{};
    std::vector<double> theta;
    std::vector<Complex> xi(z.size());
    for (std::size_t idx = 0; idx < grid.samples.size(); ++idx) {
        detail::grid_angles(idx, grid.dim, grid.n, theta);
        for (std::size_t j = 0; j < xi.size(); ++j) xi[j] = std::polar(1.0, theta[j]);
        acc += kernel_H(z, xi) * grid.samples[idx];
    }
    acc /= static_cast<double>(grid.samples.size());
    return Complex{0.0, 1.0} * std::exp(kPi * im_psi0) *
           std::exp(Complex{0.0, -kPi} * acc);
}

/// Mean over the grid of |g - chi_{P > 0}|.
inline double indicator_fit(const PhaseGrid& grid, const TrigPoly& p) {
    if (p.dim != grid.dim)
        throw std::invalid_argument("indicator_fit: dimension mismatch");
    double acc = 0.0;
    std::vector<double> theta;
    std::vector<Complex> xi(static_cast<std::size_t>(grid.dim));
    for (std::size_t idx = 0; idx < grid.samples.size(); ++idx) {
        detail::grid_angles(idx, grid.dim, grid.n, theta);
        for (std::size_t j = 0; j < xi.size(); ++j) xi[j] = std::polar(1.0, theta[j]);
        double chi = p.eval(xi) > 0.0 ? 1.0 : 0.0;
        acc += std::abs(grid.samples[idx] - chi);
    }
    return acc / static_cast<double>(grid.samples.size());
}

// ---------------------------------------------------------------------------
// Moment condition of pluriharmonic measures: mixed-sign Fourier
// coefficients must vanish.
// ---------------------------------------------------------------------------
struct PluriharmonicReport {
    std::vector<std::vector<int>> violations;
    double max_mixed = 0.0;
    bool pass = true;
};

inline PluriharmonicReport pluriharmonic_check(const FourierTable& table, double tol) {
    PluriharmonicReport rep;
    table.for_each([&](const std::vector<int>& a) {
        bool has_pos = false, has_neg = false;
        for (int v : a) {
            has_pos |= v > 0;
            has_neg |= v < 0;
        }
        if (!(has_pos && has_neg)) return;
        double mag = std::abs(table.at(a));
        rep.max_mixed = std::max(rep.max_mixed, mag);
        if (mag > tol) rep.violations.push_back(a);
    });
    rep.pass = rep.violations.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// PHG1 binary format: "PHG1" magic, then u32 dim, u32 N, u32 radius count,
// u32 converged flag, the radii as float64, and the samples as float64 in
// row-major order. All integers and floats little-endian.
// ---------------------------------------------------------------------------
inline void save_phase_grid(const PhaseGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_phase_grid: cannot open " + path);
    out.write("PHG1", 4);
    auto put_u32 = [&](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    put_u32(static_cast<std::uint32_t>(grid.dim));
    put_u32(static_cast<std::uint32_t>(grid.n));
    put_u32(static_cast<std::uint32_t>(grid.radii_used.size()));
    put_u32(grid.converged ? 1u : 0u);
    auto put_f64 = [&](double v) {
        static_assert(sizeof(double) == 8);
        out.write(reinterpret_cast<const char*>(&v), 8);
    };
    for (double r : grid.radii_used) put_f64(r);
    for (double s : grid.samples) put_f64(s);
    if (!out) throw std::runtime_error("save_phase_grid: write failed for " + path);
}

inline PhaseGrid load_phase_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_phase_grid: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "PHG1", 4) != 0)
        throw std::runtime_error("load_phase_grid: bad magic");
    auto get_u32 = [&]() {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) |
               (static_cast<std::uint32_t>(b[3]) << 24);
    };
    PhaseGrid grid;
    grid.dim = static_cast<int>(get_u32());
    grid.n = static_cast<int>(get_u32());
    std::uint32_t radii = get_u32();
    grid.converged = get_u32() != 0;
    auto get_f64 = [&]() {
        double v;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    for (std::uint32_t i = 0; i < radii; ++i) grid.radii_used.push_back(get_f64());
    std::size_t total = 1;
    for (int j = 0; j < grid.dim; ++j) total *= static_cast<std::size_t>(grid.n);
    grid.samples.resize(total);
    for (std::size_t i = 0; i < total; ++i) grid.samples[i] = get_f64();
    if (!in) throw std::runtime_error("load_phase_grid: truncated file");
    return grid;
}

}  // namespace hnlab

#endif  // HNLAB_PHASE_HPP
