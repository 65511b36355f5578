#include "treewave/bitree.hpp"

#include <algorithm>
#include <cmath>

namespace treewave::bitree {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);
}  // namespace

BiTreeBall::BiTreeBall(long p, long q, int radius) : p_(p), q_(q), radius_(radius) {
    if (p < 1 || q < 1) throw std::domain_error("BiTreeBall: p, q >= 1 required");
    if (radius < 0) throw std::domain_error("BiTreeBall: radius >= 0 required");
    std::size_t total = 1, sphere = 1;
    sphere_start_ = {0, 1};
    for (int r = 1; r <= radius; ++r) {
        if (r == 1)
            sphere = static_cast<std::size_t>(q + 1);
        else
            sphere *= static_cast<std::size_t>((r % 2 == 0) ? p : q);
        total += sphere;
        sphere_start_.push_back(total);
    }
    depth_.resize(total);
    parent_.assign(total, kNoParent);
    child_begin_.assign(total, kNoParent);
    depth_[0] = 0;
    for (int r = 0; r < radius; ++r) {
        std::size_t next = sphere_start_[static_cast<std::size_t>(r) + 1];
        for (std::size_t v = sphere_begin(r); v < sphere_end(r); ++v) {
            std::size_t nc = child_count_at_depth(r);
            child_begin_[v] = next;
            for (std::size_t c = 0; c < nc; ++c) {
                parent_[next] = v;
                depth_[next] = r + 1;
                ++next;
            }
        }
    }
}

std::size_t BiTreeBall::child_count(std::size_t v) const {
    if (depth_[v] >= radius_) return 0;
    return child_count_at_depth(depth_[v]);
}

int BiTreeBall::meet_depth(std::size_t u, std::size_t v) const {
    while (depth_[u] > depth_[v]) u = parent_[u];
    while (depth_[v] > depth_[u]) v = parent_[v];
    while (u != v) {
        u = parent_[u];
        v = parent_[v];
    }
    return depth_[u];
}

std::size_t BiTreeBall::ancestor_at(std::size_t v, int d) const {
    while (depth_[v] > d) v = parent_[v];
    if (depth_[v] != d) throw std::domain_error("BiTreeBall::ancestor_at: vertex shallower than d");
    return v;
}

std::size_t BiTreeBall::ray_vertex(int d) const {
    if (d > radius_) throw std::domain_error("BiTreeBall::ray_vertex: beyond ball radius");
    std::size_t v = 0;
    for (int i = 0; i < d; ++i) v = child(v, 0);
    return v;
}

double BiTreeBall::cylinder_mass(int depth) const {
    // 1/((q+1) p q p q ...), depth-1 alternating factors starting with p.
    double m = 1.0 / static_cast<double>(q_ + 1);
    for (int r = 2; r <= depth; ++r) m /= static_cast<double>((r % 2 == 0) ? p_ : q_);
    return m;
}

int support_radius(const BiTreeBall& ball, const VertexFn& f) {
    int r = -1;
    for (std::size_t v = 0; v < f.size(); ++v)
        if (!f[v].is_zero()) r = std::max(r, ball.depth(v));
    return r;
}

VertexFn biradial_to_vertex(const BiTreeBall& ball, const BiRadialFn& f) {
    VertexFn out(ball.size(), Scalar(0));
    for (std::size_t v = 0; v < ball.size(); ++v) {
        int d = ball.depth(v);
        if (d % 2 != 0) continue;
        std::size_t half = static_cast<std::size_t>(d / 2);
        if (half < f.size()) out[v] = f[half];
    }
    return out;
}

BiRadialFn vertex_to_biradial(const BiTreeBall& ball, const VertexFn& f) {
    std::size_t half_max = static_cast<std::size_t>(ball.radius() / 2);
    BiRadialFn out(half_max + 1, Scalar(0));
    for (int r = 0; r <= ball.radius(); ++r) {
        std::size_t b = ball.sphere_begin(r);
        if (r % 2 != 0) {
            for (std::size_t v = b; v < ball.sphere_end(r); ++v)
                if (!f[v].is_zero())
                    throw std::domain_error("vertex_to_biradial: support off the q-class");
            continue;
        }
        for (std::size_t v = b; v < ball.sphere_end(r); ++v)
            if (f[v] != f[b]) throw std::domain_error("vertex_to_biradial: not radial");
        out[static_cast<std::size_t>(r / 2)] = f[b];
    }
    return out;
}

VertexFn adjacency_apply(const BiTreeBall& ball, const VertexFn& f) {
    if (support_radius(ball, f) >= ball.radius())
        throw BoundaryTouch("bitree adjacency: support touches the boundary sphere");
    VertexFn out(ball.size(), Scalar(0));
    for (std::size_t v = 0; v < ball.size(); ++v) {
        if (f[v].is_zero()) continue;
        if (v != 0) out[ball.parent(v)] += f[v];
        for (std::size_t c = 0; c < ball.child_count(v); ++c) out[ball.child(v, c)] += f[v];
    }
    return out;
}

VertexFn bq_apply(const BiTreeBall& ball, const VertexFn& f) {
    for (std::size_t v = 0; v < f.size(); ++v)
        if (!f[v].is_zero() && !ball.is_q_vertex(v))
            throw std::domain_error("bq_apply: input supported off the q-class");
    VertexFn a2 = adjacency_apply(ball, adjacency_apply(ball, f));
    Scalar scale = (Scalar(2) * sqrt_pq_scalar(ball.p(), ball.q())).inv();
    long pq_shift = ball.q() + 1 + ball.p() - 1;  // (q+1) from A^2, (p-1) from B_q
    VertexFn out(ball.size(), Scalar(0));
    for (std::size_t v = 0; v < ball.size(); ++v) {
        if (!ball.is_q_vertex(v)) continue;
        out[v] = (a2[v] - Scalar(pq_shift) * f[v]) * scale;
    }
    return out;
}

BiRadialFn bq_radial(long p, long q, const BiRadialFn& f) {
    std::size_t n = f.size();
    BiRadialFn out(n + 1, Scalar(0));
    auto get = [&](std::size_t r) { return r < n ? f[r] : Scalar(0); };
    Scalar scale = (Scalar(2) * sqrt_pq_scalar(p, q)).inv();
    out[0] = (Scalar((q + 1) * p) * get(1) - Scalar(p - 1) * get(0)) * scale;
    for (std::size_t r = 1; r <= n; ++r)
        out[r] = (get(r - 1) + Scalar(p * q) * get(r + 1)) * scale;
    while (out.size() > 1 && out.back().is_zero()) out.pop_back();
    return out;
}

int busemann(const BiTreeBall& ball, std::size_t omega, std::size_t v) {
    if (ball.depth(omega) < ball.depth(v))
        throw InsufficientDepth("bitree busemann: direction word shallower than the vertex");
    return 2 * ball.meet_depth(omega, v) - ball.depth(v);
}

LaurentPoly satake_bi(const BiTreeBall& ball, const BiRadialFn& f, std::size_t omega) {
    int s = 2 * (static_cast<int>(f.size()) - 1);
    while (s >= 0 && f[static_cast<std::size_t>(s / 2)].is_zero()) s -= 2;
    if (s < 0) return LaurentPoly();
    if (ball.depth(omega) < s)
        throw InsufficientDepth("satake_bi: boundary word shallower than the support");
    std::map<long, Scalar> sums;
    for (int r = 0; r <= s; r += 2) {
        const Scalar& val = f[static_cast<std::size_t>(r / 2)];
        if (val.is_zero()) continue;
        for (std::size_t v = ball.sphere_begin(r); v < ball.sphere_end(r); ++v) {
            int h = busemann(ball, omega, v);
            sums[h / 2] += val;
        }
    }
    Scalar a = sqrt_pq_scalar(ball.p(), ball.q());
    LaurentPoly out;
    for (const auto& [k, sum] : sums) out.set(k, a.pow(k) * sum);
    return out;
}

BiRadialFn convolve_biradial(long p, long q, const BiRadialFn& f, const BiRadialFn& g) {
    int rf = static_cast<int>(f.size()) - 1, rg = static_cast<int>(g.size()) - 1;
    BiTreeBall ball(p, q, 2 * (rf + rg));
    BiRadialFn out(static_cast<std::size_t>(rf + rg) + 1, Scalar(0));
    for (int r = 0; r <= rf + rg; ++r) {
        std::size_t rep = ball.ray_vertex(2 * r);
        Scalar acc(0);
        for (int rw = 0; rw <= rf; ++rw) {
            if (f[static_cast<std::size_t>(rw)].is_zero()) continue;
            for (std::size_t w = ball.sphere_begin(2 * rw); w < ball.sphere_end(2 * rw); ++w) {
                int d = ball.dist(w, rep) / 2;
                if (d <= rg && !g[static_cast<std::size_t>(d)].is_zero())
                    acc += f[static_cast<std::size_t>(rw)] * g[static_cast<std::size_t>(d)];
            }
        }
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

std::complex<double> b_function_bi(long p, long q, std::complex<double> xi) {
    double a_inv = 1.0 / std::sqrt(static_cast<double>(p) * q);
    double binv = std::sqrt(static_cast<double>(p) / q);
    std::complex<double> xinv = 1.0 / xi;
    return (1.0 - a_inv * xinv) * (1.0 + binv * xinv) * xi;
}

std::complex<double> c_function_bi(long p, long q, std::complex<double> xi) {
    return b_function_bi(p, q, xi) / (xi - 1.0 / xi);
}

double spherical_bi(long p, long q, std::complex<double> xi, long two_t) {
    if (two_t % 2 != 0) throw std::domain_error("spherical_bi: distance must be even");
    long t = two_t / 2;
    double a = std::sqrt(static_cast<double>(p) * q);
    double qd = static_cast<double>(q);
    if (std::abs(xi - 1.0) > 1e-6 && std::abs(xi + 1.0) > 1e-6) {
        std::complex<double> xinv = 1.0 / xi;
        std::complex<double> val =
            std::pow(xi, static_cast<double>(t)) * c_function_bi(p, q, xi) +
            std::pow(xinv, static_cast<double>(t)) * c_function_bi(p, q, xinv);
        return std::pow(a, -static_cast<double>(t)) / (1.0 + 1.0 / qd) * val.real();
    }
    double z = ((xi + 1.0 / xi) / 2.0).real();
    cheb::ChebFamily fam = cheb::special_family(cheb::FamilyKind::H, p, q);
    return std::pow(a, -static_cast<double>(t)) / (1.0 + 1.0 / qd) * fam.cheb(t).eval(z);
}

Scalar spherical_bi_exact(long p, long q, const Scalar& z, long two_t) {
    if (two_t % 2 != 0) throw std::domain_error("spherical_bi_exact: distance must be even");
    long t = two_t / 2;
    cheb::ChebFamily fam = cheb::special_family(cheb::FamilyKind::H, p, q);
    Scalar at = sqrt_pq_scalar(p, q).pow(-t);
    return at * fam.cheb(t).eval(z) * Scalar(Rational(q, q + 1));
}

cheb::SpectralMeasure plancherel_bi(long p, long q) {
    cheb::ChebFamily fam = cheb::special_family(cheb::FamilyKind::H, p, q);
    double weight = (1.0 + 1.0 / static_cast<double>(q)) / (4.0 * kPi);
    std::vector<cheb::Atom> atoms;
    if (p > q) {
        double b = std::sqrt(static_cast<double>(q) / p);
        double mass = 1.0 - static_cast<double>(q + 1) / static_cast<double>(p + 1);
        atoms.push_back(cheb::Atom{-b, -(b + 1.0 / b) / 2.0, mass});
    }
    return cheb::SpectralMeasure(fam.h(), weight, std::move(atoms),
                                 "plancherel_bi(" + std::to_string(p) + "," + std::to_string(q) +
                                     ")");
}

double inverse_satake_bi(long p, long q, const SymLaurentPoly& sat, long l, int nodes) {
    cheb::SpectralMeasure mu = plancherel_bi(p, q);
    double acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        double theta = tree::node_theta(j, nodes);
        std::complex<double> xi = std::polar(1.0, theta);
        acc += sat.poly().eval(xi).real() * spherical_bi(p, q, xi, 2 * l) *
               mu.density_theta(theta);
    }
    acc *= 2.0 * kPi / nodes;
    for (const cheb::Atom& atom : mu.atoms()) {
        // phi at the atom via the H_t form in doubles
        cheb::ChebFamily fam = cheb::special_family(cheb::FamilyKind::H, p, q);
        double a = std::sqrt(static_cast<double>(p) * q);
        double phi_atom = std::pow(a, -static_cast<double>(l)) /
                          (1.0 + 1.0 / static_cast<double>(q)) * fam.cheb(l).eval(atom.z);
        acc += atom.mass * sat.poly().eval(std::complex<double>(atom.xi, 0.0)).real() * phi_atom;
    }
    return acc;
}

BiRadialFn kernel_closed_form_bi(BiKernel kind, long t, long p, long q) {
    if (t < 0) throw std::domain_error("kernel_closed_form_bi: t >= 0");
    BiRadialFn out(static_cast<std::size_t>(t) + 1, Scalar(0));
    Scalar a_inv = sqrt_pq_scalar(p, q).pow(-1);
    Scalar b_inv = sqrt_pq_scalar(p, q) * Scalar(Rational(1, q));  // sqrt(p/q)
    Scalar at = a_inv.pow(t);
    switch (kind) {
        case BiKernel::U: {
            Scalar denom_inv = (a_inv + b_inv).inv();
            for (long l = 0; l <= t; ++l) {
                Scalar num = a_inv.pow(t - l + 1) - (-b_inv).pow(t - l + 1);
                out[static_cast<std::size_t>(l)] = num * denom_inv * a_inv.pow(l);
            }
            break;
        }
        case BiKernel::R:
            for (long l = 0; l <= t; ++l) out[static_cast<std::size_t>(l)] = at;
            break;
        case BiKernel::H:
            if (t == 0)
                out[0] = Scalar(1) + Scalar(Rational(1, q));
            else
                out[static_cast<std::size_t>(t)] = at;
            break;
    }
    return out;
}

VertexFn apply_poly_in_bq(const BiTreeBall& ball, const Poly& poly, const VertexFn& f) {
    VertexFn acc(ball.size(), Scalar(0));
    for (long k = poly.degree(); k >= 0; --k) {
        if (k != poly.degree()) acc = bq_apply(ball, acc);
        Scalar ck = poly.coeff(k);
        if (!ck.is_zero())
            for (std::size_t i = 0; i < f.size(); ++i) acc[i] += ck * f[i];
    }
    return acc;
}

BiRadialFn apply_poly_in_bq_radial(long p, long q, const Poly& poly, const BiRadialFn& f) {
    BiRadialFn acc(1, Scalar(0));
    for (long k = poly.degree(); k >= 0; --k) {
        if (k != poly.degree()) acc = bq_radial(p, q, acc);
        Scalar ck = poly.coeff(k);
        if (!ck.is_zero()) {
            if (acc.size() < f.size()) acc.resize(f.size(), Scalar(0));
            for (std::size_t i = 0; i < f.size(); ++i) acc[i] += ck * f[i];
        }
    }
    return acc;
}

BiWaveSeries wave_solve_bi(const BiTreeBall& ball, const BasisPair& basis, const VertexFn& g1,
                           const VertexFn& g2, long t_lo, long t_hi) {
    long lo = std::min(t_lo, 0L), hi = std::max(t_hi, 1L);
    int need = std::max(support_radius(ball, g1), support_radius(ball, g2)) +
               2 * static_cast<int>(std::max(std::labs(lo), std::labs(hi)));
    if (need > ball.radius())
        throw BallTooSmall("wave_solve_bi: ball radius " + std::to_string(ball.radius()) +
                           " < support + 2|t| = " + std::to_string(need));

    BiWaveSeries s;
    s.t_lo = lo;
    s.t_hi = hi;
    s.slices.resize(static_cast<std::size_t>(hi - lo + 1));
    auto combine = [&](long t) {
        VertexFn a = apply_poly_in_bq(ball, cheb::cheb_of(basis.m1, t), g1);
        VertexFn b = apply_poly_in_bq(ball, cheb::cheb_of(basis.m2, t), g2);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
    };
    s.at(0) = combine(0);
    s.at(1) = combine(1);
    for (long t = 1; t < hi; ++t) {
        VertexFn mid = bq_apply(ball, s.at(t));
        VertexFn next(ball.size());
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = Scalar(2) * mid[i] - s.at(t - 1)[i];
        s.at(t + 1) = std::move(next);
    }
    for (long t = 0; t > lo; --t) {
        VertexFn mid = bq_apply(ball, s.at(t));
        VertexFn prev(ball.size());
        for (std::size_t i = 0; i < prev.size(); ++i)
            prev[i] = Scalar(2) * mid[i] - s.at(t + 1)[i];
        s.at(t - 1) = std::move(prev);
    }
    return s;
}

BiRadialWaveSeries wave_solve_bi_radial(long p, long q, const BasisPair& basis,
                                        const BiRadialFn& g1, const BiRadialFn& g2, long t_lo,
                                        long t_hi) {
    long lo = std::min(t_lo, 0L), hi = std::max(t_hi, 1L);
    BiRadialWaveSeries s;
    s.t_lo = lo;
    s.t_hi = hi;
    s.slices.resize(static_cast<std::size_t>(hi - lo + 1));
    auto step = [&](const BiRadialFn& mid_in, const BiRadialFn& other) {
        BiRadialFn mid = bq_radial(p, q, mid_in);
        if (mid.size() < other.size()) mid.resize(other.size(), Scalar(0));
        for (std::size_t i = 0; i < mid.size(); ++i) {
            Scalar o = i < other.size() ? other[i] : Scalar(0);
            mid[i] = Scalar(2) * mid[i] - o;
        }
        return mid;
    };
    auto combine = [&](long t) {
        BiRadialFn a = apply_poly_in_bq_radial(p, q, cheb::cheb_of(basis.m1, t), g1);
        BiRadialFn b = apply_poly_in_bq_radial(p, q, cheb::cheb_of(basis.m2, t), g2);
        if (a.size() < b.size()) a.resize(b.size(), Scalar(0));
        for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
        return a;
    };
    s.at(0) = combine(0);
    s.at(1) = combine(1);
    for (long t = 1; t < hi; ++t) s.at(t + 1) = step(s.at(t), s.at(t - 1));
    for (long t = 0; t > lo; --t) s.at(t - 1) = step(s.at(t), s.at(t + 1));
    return s;
}

Scalar bi_energy(const BiTreeBall& ball, const BiWaveSeries& series, long t) {
    const VertexFn& u = series.at(t);
    VertexFn bbu = bq_apply(ball, bq_apply(ball, u));
    Scalar acc(0);
    Scalar half(Rational(1, 2));
    const VertexFn &up = series.at(t + 1), &um = series.at(t - 1);
    for (std::size_t v = 0; v < u.size(); ++v) {
        if (!ball.is_q_vertex(v)) continue;
        acc += u[v] * (u[v] - bbu[v]);
        Scalar dt = (up[v] - um[v]) * half;
        acc += dt * dt;
    }
    return acc;
}

Scalar energy_form_bi(const BiTreeBall& ball, const VertexFn& g1, const VertexFn& g2,
                      const VertexFn& f1, const VertexFn& f2) {
    VertexFn bbg = bq_apply(ball, bq_apply(ball, g1));
    Scalar acc(0);
    for (std::size_t v = 0; v < g1.size(); ++v) {
        if (!ball.is_q_vertex(v)) continue;
        acc += (g1[v] - bbg[v]) * f1[v];
        acc += g2[v] * f2[v];
    }
    return acc;
}

std::pair<VertexFn, VertexFn> propagate_state_bi(const BiTreeBall& ball, const VertexFn& f1,
                                                 const VertexFn& f2) {
    VertexFn bu = bq_apply(ball, f1);
    VertexFn bbu = bq_apply(ball, bu);
    VertexFn bj = bq_apply(ball, f2);
    VertexFn u_next(ball.size()), j_next(ball.size());
    for (std::size_t v = 0; v < ball.size(); ++v) {
        u_next[v] = bu[v] + f2[v];
        j_next[v] = bbu[v] - f1[v] + bj[v];
    }
    return {std::move(u_next), std::move(j_next)};
}

BiCylinderSet::BiCylinderSet(const BiTreeBall& ball, int depth) : ball_(&ball), depth_(depth) {
    if (depth < 1 || depth > ball.radius())
        throw std::domain_error("BiCylinderSet: depth must lie in [1, radius]");
    count_ = ball.sphere_size(depth);
    mass_ = ball.cylinder_mass(depth);
}

std::complex<double> helgason_bi(const BiTreeBall& ball, const VertexFn& f,
                                 std::complex<double> xi, std::size_t omega) {
    if (support_radius(ball, f) > ball.depth(omega))
        throw InsufficientDepth("helgason_bi: cylinder depth below the support radius");
    double a = std::sqrt(static_cast<double>(ball.p()) * ball.q());
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t v = 0; v < f.size(); ++v) {
        if (f[v].is_zero()) continue;
        int l = busemann(ball, omega, v) / 2;
        acc += f[v].to_double() * std::pow(a, l) * std::pow(xi, l);
    }
    return acc;
}

BoundaryField t_pm_bi(const BiTreeBall& ball, const BiCylinderSet& cyls, const VertexFn& f1,
                      const VertexFn& f2, int nodes, int sign) {
    int s = std::max(support_radius(ball, f1), support_radius(ball, f2));
    if (s > cyls.depth())
        throw InsufficientDepth("t_pm_bi: cylinder depth below the support radius");

    double a = std::sqrt(static_cast<double>(ball.p()) * ball.q());
    std::size_t nc = cyls.count();
    std::vector<std::map<int, double>> w1(nc), w2(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        std::size_t omega = cyls.vertex(c);
        for (std::size_t v = 0; v < ball.size(); ++v) {
            bool z1 = v < f1.size() && !f1[v].is_zero();
            bool z2 = v < f2.size() && !f2[v].is_zero();
            if (!z1 && !z2) continue;
            int l = busemann(ball, omega, v) / 2;
            if (z1) w1[c][l] += f1[v].to_double() * std::pow(a, l);
            if (z2) w2[c][l] += f2[v].to_double() * std::pow(a, l);
        }
    }

    BoundaryField field;
    field.nodes = nodes;
    field.cyl_depth = cyls.depth();
    field.val.assign(static_cast<std::size_t>(nodes),
                     std::vector<std::complex<double>>(nc, {0.0, 0.0}));
    for (int j = 0; j < nodes; ++j) {
        std::complex<double> xi = std::polar(1.0, tree::node_theta(j, nodes));
        std::complex<double> xe = (sign >= 0) ? std::conj(xi) : xi;  // xi^{-/+1}
        std::complex<double> cinv = 1.0 / c_function_bi(ball.p(), ball.q(), xe);
        std::complex<double> halfdiff =
            ((sign >= 0 ? xi : std::conj(xi)) - xe) / 2.0;  // (xi^{+-1} - xi^{-+1})/2
        double pm = sign >= 0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < nc; ++c) {
            std::complex<double> hel1(0.0, 0.0), hel2(0.0, 0.0);
            for (const auto& [l, w] : w1[c]) hel1 += w * std::pow(xe, l);
            for (const auto& [l, w] : w2[c]) hel2 += w * std::pow(xe, l);
            field.val[static_cast<std::size_t>(j)][c] = hel1 * cinv * halfdiff + pm * hel2 * cinv;
        }
    }
    return field;
}

BoundaryField r_plus_from_t_plus_bi(long p, long q, const BoundaryField& t) {
    BoundaryField out = t;
    double qinv = 1.0 / static_cast<double>(q);
    for (int j = 0; j < t.nodes; ++j) {
        std::complex<double> xi = std::polar(1.0, tree::node_theta(j, t.nodes));
        std::complex<double> factor = (1.0 + qinv) / b_function_bi(p, q, xi);
        for (auto& v : out.val[static_cast<std::size_t>(j)]) v *= factor;
    }
    return out;
}

double field_norm2_bi(long p, long q, const BiCylinderSet& cyls, const BoundaryField& field) {
    (void)p;
    double acc = 0.0;
    for (int j = 0; j < field.nodes; ++j)
        for (std::size_t c = 0; c < cyls.count(); ++c)
            acc += std::norm(field.val[static_cast<std::size_t>(j)][c]);
    double qd = static_cast<double>(q);
    return acc * cyls.mass() * (1.0 + 1.0 / qd) / (2.0 * field.nodes);
}

double reconstruct_bi(const BiTreeBall& ball, const BiCylinderSet& cyls,
                      const TranslationSeries& k, std::size_t v, long t) {
    int depth_needed = std::max(ball.depth(v), cyls.depth());
    if (depth_needed > ball.radius())
        throw InsufficientDepth("reconstruct_bi: ball too shallow");
    double a = std::sqrt(static_cast<double>(ball.p()) * ball.q());
    double nu = ball.cylinder_mass(depth_needed);
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t w = ball.sphere_begin(depth_needed); w < ball.sphere_end(depth_needed);
         ++w) {
        int l = busemann(ball, w, v) / 2;
        long n = l - t;
        if (n < k.n_lo || n > k.n_hi)
            throw std::domain_error("reconstruct_bi: k series window too narrow");
        acc += std::pow(a, l) * k.at(n, cyls.index_of_ancestor(w));
    }
    return (acc * nu).real();
}

std::pair<double, double> resonances_bi(long p, long q) {
    return {1.0 / std::sqrt(static_cast<double>(p) * q),
            -std::sqrt(static_cast<double>(p) / q)};
}

}  // namespace treewave::bitree
