#include "treewave/flatwave.hpp"

#include <algorithm>

namespace treewave::flat {

WaveGrid::WaveGrid(long t_lo, long t_hi) {
    t_lo_ = std::min(t_lo, -1L);
    t_hi_ = std::max(t_hi, 1L);
    slices_.resize(static_cast<size_t>(t_hi_ - t_lo_ + 1));
}

const LaurentPoly& WaveGrid::slice(long t) const {
    if (t < t_lo_ || t > t_hi_) throw std::out_of_range("WaveGrid: t outside stored range");
    return slices_[static_cast<size_t>(t - t_lo_)];
}

LaurentPoly& WaveGrid::slice(long t) {
    if (t < t_lo_ || t > t_hi_) throw std::out_of_range("WaveGrid: t outside stored range");
    return slices_[static_cast<size_t>(t - t_lo_)];
}

bool WaveGrid::residual_is_zero() const {
    for (long t = t_lo_ + 1; t <= t_hi_ - 1; ++t) {
        LaurentPoly lhs = slice(t + 1) + slice(t - 1);
        LaurentPoly rhs = slice(t).shifted(1) + slice(t).shifted(-1);
        if (lhs != rhs) return false;
    }
    return true;
}

WaveGrid solve(const BasisPair& basis, const ZFunction& g1, const ZFunction& g2, long t_lo,
               long t_hi) {
    WaveGrid grid(t_lo, t_hi);
    for (long t = grid.t_min(); t <= grid.t_max(); ++t) {
        LaurentPoly xt = LaurentPoly::monomial(t);
        grid.slice(t) = g1 * pairing(basis.m1, xt).poly() + g2 * pairing(basis.m2, xt).poly();
    }
    return grid;
}

ZFunction initial_functional(const WaveGrid& grid, const LaurentPoly& h) {
    ZFunction out;
    for (const auto& [i, ci] : h.coeffs()) out += grid.slice(i) * ci;
    return out;
}

Scalar fundamental_solution(const LaurentPoly& m, long n, long t) {
    return pairing(m, LaurentPoly::monomial(t)).coeff(n);
}

Propagator Propagator::mul(const Propagator& o) const {
    return Propagator{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
                      c * o.b + d * o.d};
}

Propagator Propagator::pow(long t) const {
    SymLaurentPoly one(LaurentPoly::constant(Scalar(1)));
    Propagator acc{one, SymLaurentPoly(), SymLaurentPoly(), one};
    Propagator base = *this;
    for (long k = t; k > 0; k >>= 1) {
        if (k & 1) acc = acc.mul(base);
        base = base.mul(base);
    }
    return acc;
}

Propagator propagator_matrix(const BasisPair& basis) {
    LaurentPoly x = LaurentPoly::monomial(1);
    return Propagator{pairing(basis.m1 * basis.h1, x), pairing(basis.m2 * basis.h1, x),
                      pairing(basis.m1 * basis.h2, x), pairing(basis.m2 * basis.h2, x)};
}

EventuallyConstFn::EventuallyConstFn(long lo, long hi, std::vector<Scalar> core,
                                     Scalar left_even, Scalar left_odd, Scalar right_even,
                                     Scalar right_odd)
    : lo_(lo),
      hi_(hi),
      core_(std::move(core)),
      left_even_(std::move(left_even)),
      left_odd_(std::move(left_odd)),
      right_even_(std::move(right_even)),
      right_odd_(std::move(right_odd)) {}

Scalar EventuallyConstFn::eval(long k) const {
    if (k >= lo_ && k <= hi_) return core_[static_cast<size_t>(k - lo_)];
    bool even = ((k % 2) == 0);
    if (k < lo_) return even ? left_even_ : left_odd_;
    return even ? right_even_ : right_odd_;
}

ZFunction EventuallyConstFn::derivative() const {
    ZFunction out;
    Scalar half(Rational(1, 2));
    for (long n = lo_ - 1; n <= hi_ + 1; ++n) out.set(n, (eval(n + 1) - eval(n - 1)) * half);
    return out;
}

EventuallyConstFn EventuallyConstFn::plus_parity_constant(const Scalar& even_c,
                                                          const Scalar& odd_c) const {
    std::vector<Scalar> core = core_;
    for (long k = lo_; k <= hi_; ++k)
        core[static_cast<size_t>(k - lo_)] += ((k % 2) == 0) ? even_c : odd_c;
    return EventuallyConstFn(lo_, hi_, std::move(core), left_even_ + even_c, left_odd_ + odd_c,
                             right_even_ + even_c, right_odd_ + odd_c);
}

namespace {

// Cumulative-sum value of the right-moving g-component at k.
Scalar w_g_inf_at(const ZFunction& g, long k) {
    if (k == 0) return Scalar(0);
    long sign = k > 0 ? 1 : -1;
    long a = std::labs(k);
    Scalar acc(0);
    if (a % 2 == 1) {
        acc = g.coeff(0) * Scalar(Rational(1, 2));
        for (long l = 2; l <= a - 1; l += 2) acc += g.coeff(sign * l);
    } else {
        for (long l = 1; l <= a - 1; l += 2) acc += g.coeff(sign * l);
    }
    return Scalar(-sign) * acc;
}

}  // namespace

Dalembert dalembert_decompose(const ZFunction& f, const ZFunction& g) {
    long support = 1;
    if (!f.is_zero()) support = std::max({support, std::labs(f.min_deg()), f.max_deg()});
    if (!g.is_zero()) support = std::max({support, std::labs(g.min_deg()), g.max_deg()});
    const long K = support + 3;

    Scalar half(Rational(1, 2));
    std::vector<Scalar> w_inf_core, w_minf_core;
    for (long k = -K; k <= K; ++k) {
        Scalar wf = f.coeff(k) * half;
        Scalar wg = w_g_inf_at(g, k);
        w_inf_core.push_back(wf + wg);
        w_minf_core.push_back(wf - wg);
    }

    // The cumulative sums saturate for |k| >= support + 2, so the tail
    // constants can be read off just outside the core.
    auto tail = [&](long beyond, int parity, bool inf_side) {
        long k = beyond;
        if (((k % 2) + 2) % 2 != parity) k += (k > 0 ? 1 : -1);
        Scalar wg = w_g_inf_at(g, k);
        return inf_side ? wg : -wg;
    };
    EventuallyConstFn w_inf(-K, K, std::move(w_inf_core), tail(-K - 1, 0, true),
                            tail(-K - 1, 1, true), tail(K + 1, 0, true), tail(K + 1, 1, true));
    EventuallyConstFn w_minf(-K, K, std::move(w_minf_core), tail(-K - 1, 0, false),
                             tail(-K - 1, 1, false), tail(K + 1, 0, false),
                             tail(K + 1, 1, false));
    return Dalembert{std::move(w_inf), std::move(w_minf)};
}

Dalembert dalembert_decompose(const WaveGrid& grid) {
    ZFunction f = grid.slice(0);
    ZFunction g = (grid.slice(1) - grid.slice(-1)) * Scalar(Rational(1, 2));
    return dalembert_decompose(f, g);
}

Scalar energy(const WaveGrid& grid, long t) {
    const LaurentPoly& u = grid.slice(t);
    LaurentPoly du_space = (u.shifted(1) - u.shifted(-1)) * Scalar(Rational(1, 2));
    LaurentPoly du_time = (grid.slice(t + 1) - grid.slice(t - 1)) * Scalar(Rational(1, 2));
    Scalar acc(0);
    for (const auto& kv : du_space.coeffs()) acc += kv.second * kv.second;
    for (const auto& kv : du_time.coeffs()) acc += kv.second * kv.second;
    return acc;
}

Scalar energy_lr(const Dalembert& d) {
    // Substituting u = w_inf(n-t) + w_minus_inf(n+t) into the energy form,
    // the cross terms of the space and time squares cancel pointwise and
    // E = 2 ||w_inf'||^2 + 2 ||w_minus_inf'||^2.
    Scalar acc(0);
    ZFunction di = d.w_inf.derivative(), dm = d.w_minus_inf.derivative();
    for (const auto& kv : di.coeffs()) acc += kv.second * kv.second;
    for (const auto& kv : dm.coeffs()) acc += kv.second * kv.second;
    return Scalar(2) * acc;
}

SpectralSolution spectral_solve(std::complex<double> xi, std::complex<double> a,
                                std::complex<double> b) {
    if (std::abs(xi - 1.0) < 1e-12 || std::abs(xi + 1.0) < 1e-12)
        throw DegenerateSpectralParameter(
            "spectral_solve: xi = +-1 gives a linear-in-t family, not a 2x2 solve");
    std::complex<double> xinv = 1.0 / xi;
    std::complex<double> det = xinv - xi;
    return SpectralSolution{(a * xinv - b) / det, (b - a * xi) / det};
}

}  // namespace treewave::flat
