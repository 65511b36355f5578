#pragma once

#include <complex>
#include <vector>

#include "treewave/laurent.hpp"

namespace treewave::flat {

/// Finitely supported function Z -> Scalar, stored as its Laurent series f^[x].
using ZFunction = LaurentPoly;

struct DegenerateSpectralParameter : std::domain_error {
    using std::domain_error::domain_error;
};

/// Space-time samples of a solution on a time window; the t = -1, 0, 1 slices
/// are always kept so initial-condition functionals stay checkable.
class WaveGrid {
public:
    WaveGrid(long t_lo, long t_hi);

    long t_min() const { return t_lo_; }
    long t_max() const { return t_hi_; }

    const LaurentPoly& slice(long t) const;
    LaurentPoly& slice(long t);
    Scalar value(long n, long t) const { return slice(t).coeff(n); }

    /// u(n, t+1) + u(n, t-1) - u(n+1, t) - u(n-1, t) over all interior cells.
    bool residual_is_zero() const;

private:
    long t_lo_, t_hi_;
    std::vector<LaurentPoly> slices_;
};

/// Unique wave solution with h_i-initial condition g_i (eqn u = g1 (m1, x^t) + g2 (m2, x^t)).
WaveGrid solve(const BasisPair& basis, const ZFunction& g1, const ZFunction& g2, long t_lo,
               long t_hi);

/// [y^0]( u^[y](n, .) * h(y^-1) ) as a function of n.
ZFunction initial_functional(const WaveGrid& grid, const LaurentPoly& h);

/// F_m(n, t) = [x^n] (m, x^t).
Scalar fundamental_solution(const LaurentPoly& m, long n, long t);

/// Time-one propagator with respect to a basis: [[ (m1 h1, x), (m2 h1, x) ],
/// [ (m1 h2, x), (m2 h2, x) ]].
struct Propagator {
    SymLaurentPoly a, b, c, d;  // [[a, b], [c, d]]

    Propagator mul(const Propagator& o) const;
    Propagator pow(long t) const;
};

Propagator propagator_matrix(const BasisPair& basis);

/// Function Z -> Scalar with a finite core and eventually constant tails on
/// each parity class.
class EventuallyConstFn {
public:
    EventuallyConstFn() = default;
    EventuallyConstFn(long lo, long hi, std::vector<Scalar> core, Scalar left_even,
                      Scalar left_odd, Scalar right_even, Scalar right_odd);

    Scalar eval(long k) const;
    long core_lo() const { return lo_; }
    long core_hi() const { return hi_; }

    /// (w(n+1) - w(n-1))/2; finitely supported because tails are constant per parity.
    ZFunction derivative() const;

    EventuallyConstFn plus_parity_constant(const Scalar& even_c, const Scalar& odd_c) const;

private:
    long lo_ = 0, hi_ = -1;
    std::vector<Scalar> core_;
    Scalar left_even_, left_odd_, right_even_, right_odd_;
};

struct Dalembert {
    EventuallyConstFn w_inf, w_minus_inf;

    Scalar eval(long n, long t) const {
        return w_inf.eval(n - t) + w_minus_inf.eval(n + t);
    }
};

/// d'Alembert components for the solution with standard data u(.,0) = f,
/// (u(.,1) - u(.,-1))/2 = g; built from the cumulative-sum formulas.
Dalembert dalembert_decompose(const ZFunction& f, const ZFunction& g);

/// Convenience overload reading the standard data off a grid.
Dalembert dalembert_decompose(const WaveGrid& grid);

/// E(t): squared-difference form, conserved in t.
Scalar energy(const WaveGrid& grid, long t);

/// Energy via left/right movers: ||w_inf'||^2 + ||w_minus_inf'||^2.
Scalar energy_lr(const Dalembert& d);

struct SpectralSolution {
    std::complex<double> g_inf, g_minus_inf;

    std::complex<double> eval(long t, std::complex<double> xi) const {
        return g_inf * std::pow(xi, static_cast<double>(t)) +
               g_minus_inf * std::pow(xi, static_cast<double>(-t));
    }
};

/// Solve [[1,1],[xi,xi^-1]] [g_inf, g_minus_inf]^T = [a, b]^T for xi != +-1.
SpectralSolution spectral_solve(std::complex<double> xi, std::complex<double> a,
                                std::complex<double> b);

}  // namespace treewave::flat
