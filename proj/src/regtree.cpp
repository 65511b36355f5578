#include "treewave/regtree.hpp"

#include <algorithm>
#include <cmath>

namespace treewave::tree {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);
}  // namespace

TreeBall::TreeBall(long q, int radius) : q_(q), radius_(radius) {
    if (q < 1) throw std::domain_error("TreeBall: q >= 1 required");
    if (radius < 0) throw std::domain_error("TreeBall: radius >= 0 required");
    std::size_t total = 1, sphere = 1;
    sphere_start_ = {0, 1};
    for (int r = 1; r <= radius; ++r) {
        sphere = (r == 1) ? static_cast<std::size_t>(q + 1)
                          : sphere * static_cast<std::size_t>(q);
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
            std::size_t nc = (r == 0) ? static_cast<std::size_t>(q_ + 1)
                                      : static_cast<std::size_t>(q_);
            // q = 1: the root still has 2 children, interior vertices 1.
            child_begin_[v] = next;
            for (std::size_t c = 0; c < nc; ++c) {
                parent_[next] = v;
                depth_[next] = r + 1;
                ++next;
            }
        }
    }
}

std::size_t TreeBall::child_count(std::size_t v) const {
    if (depth_[v] >= radius_) return 0;
    return depth_[v] == 0 ? static_cast<std::size_t>(q_ + 1) : static_cast<std::size_t>(q_);
}

int TreeBall::meet_depth(std::size_t u, std::size_t v) const {
    while (depth_[u] > depth_[v]) u = parent_[u];
    while (depth_[v] > depth_[u]) v = parent_[v];
    while (u != v) {
        u = parent_[u];
        v = parent_[v];
    }
    return depth_[u];
}

std::size_t TreeBall::ancestor_at(std::size_t v, int d) const {
    while (depth_[v] > d) v = parent_[v];
    if (depth_[v] != d) throw std::domain_error("ancestor_at: vertex is shallower than d");
    return v;
}

std::size_t TreeBall::ray_vertex(int d) const {
    if (d > radius_) throw std::domain_error("ray_vertex: beyond ball radius");
    std::size_t v = 0;
    for (int i = 0; i < d; ++i) v = child(v, 0);
    return v;
}

int support_radius(const TreeBall& ball, const VertexFn& f) {
    int r = -1;
    for (std::size_t v = 0; v < f.size(); ++v)
        if (!f[v].is_zero()) r = std::max(r, ball.depth(v));
    return r;
}

VertexFn radial_to_vertex(const TreeBall& ball, const RadialFn& f) {
    VertexFn out(ball.size(), Scalar(0));
    for (std::size_t v = 0; v < ball.size(); ++v) {
        int r = ball.depth(v);
        if (r < static_cast<int>(f.size())) out[v] = f[static_cast<std::size_t>(r)];
    }
    return out;
}

bool is_radial(const TreeBall& ball, const VertexFn& f) {
    for (int r = 0; r <= ball.radius(); ++r) {
        std::size_t b = ball.sphere_begin(r);
        for (std::size_t v = b + 1; v < ball.sphere_end(r); ++v)
            if (f[v] != f[b]) return false;
    }
    return true;
}

RadialFn vertex_to_radial(const TreeBall& ball, const VertexFn& f) {
    if (!is_radial(ball, f)) throw std::domain_error("vertex_to_radial: not radial");
    RadialFn out(static_cast<std::size_t>(ball.radius()) + 1, Scalar(0));
    for (int r = 0; r <= ball.radius(); ++r) out[static_cast<std::size_t>(r)] = f[ball.sphere_begin(r)];
    return out;
}

VertexFn adjacency_apply(const TreeBall& ball, const VertexFn& f) {
    if (support_radius(ball, f) >= ball.radius())
        throw BoundaryTouch("adjacency_apply: support touches the boundary sphere");
    VertexFn out(ball.size(), Scalar(0));
    for (std::size_t v = 0; v < ball.size(); ++v) {
        if (f[v].is_zero()) continue;
        if (v != 0) out[ball.parent(v)] += f[v];
        for (std::size_t c = 0; c < ball.child_count(v); ++c) out[ball.child(v, c)] += f[v];
    }
    return out;
}

VertexFn adjacency_apply_interior(const TreeBall& ball, const VertexFn& f) {
    // Neighbour sums on depth <= radius - 1 only; values on the boundary
    // sphere of the output are meaningless.
    VertexFn out(ball.size(), Scalar(0));
    for (std::size_t v = 0; v < ball.sphere_end(ball.radius() - 1); ++v) {
        Scalar acc(0);
        if (v != 0) acc += f[ball.parent(v)];
        for (std::size_t c = 0; c < ball.child_count(v); ++c) acc += f[ball.child(v, c)];
        out[v] = acc;
    }
    return out;
}

RadialFn adjacency_radial(long q, const RadialFn& f) {
    // (A f)(0) = (q+1) f(1), (A f)(r) = f(r-1) + q f(r+1).
    std::size_t n = f.size();
    RadialFn out(n + 1, Scalar(0));
    auto get = [&](std::size_t r) { return r < n ? f[r] : Scalar(0); };
    out[0] = Scalar(q + 1) * get(1);
    for (std::size_t r = 1; r <= n; ++r) out[r] = get(r - 1) + Scalar(q) * get(r + 1);
    while (out.size() > 1 && out.back().is_zero()) out.pop_back();
    return out;
}

int busemann(const TreeBall& ball, std::size_t omega, std::size_t v) {
    if (ball.depth(omega) < ball.depth(v))
        throw InsufficientDepth("busemann: direction word shallower than the vertex");
    return 2 * ball.meet_depth(omega, v) - ball.depth(v);
}

LaurentPoly satake(const TreeBall& ball, const RadialFn& f, std::size_t omega) {
    int s = static_cast<int>(f.size()) - 1;
    while (s >= 0 && f[static_cast<std::size_t>(s)].is_zero()) --s;
    if (s < 0) return LaurentPoly();
    if (ball.depth(omega) < s)
        throw InsufficientDepth("satake: need a boundary word at least as deep as the support");
    std::map<long, Scalar> sums;
    for (int r = 0; r <= s; ++r) {
        const Scalar& val = f[static_cast<std::size_t>(r)];
        if (val.is_zero()) continue;
        for (std::size_t v = ball.sphere_begin(r); v < ball.sphere_end(r); ++v)
            sums[busemann(ball, omega, v)] += val;
    }
    Scalar sq = sqrt_scalar(ball.q());
    LaurentPoly out;
    for (const auto& [k, sum] : sums) out.set(k, sq.pow(k) * sum);
    return out;
}

RadialFn convolve_radial(long q, const RadialFn& f, const RadialFn& g) {
    int rf = static_cast<int>(f.size()) - 1, rg = static_cast<int>(g.size()) - 1;
    TreeBall ball(q, rf + rg);
    RadialFn out(static_cast<std::size_t>(rf + rg) + 1, Scalar(0));
    for (int r = 0; r <= rf + rg; ++r) {
        std::size_t rep = ball.ray_vertex(r);
        Scalar acc(0);
        for (int rw = 0; rw <= rf; ++rw) {
            if (f[static_cast<std::size_t>(rw)].is_zero()) continue;
            for (std::size_t w = ball.sphere_begin(rw); w < ball.sphere_end(rw); ++w) {
                int d = ball.dist(w, rep);
                if (d <= rg && !g[static_cast<std::size_t>(d)].is_zero())
                    acc += f[static_cast<std::size_t>(rw)] * g[static_cast<std::size_t>(d)];
            }
        }
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

std::complex<double> c_function(long q, std::complex<double> xi) {
    std::complex<double> xinv = 1.0 / xi;
    return (xi - xinv / static_cast<double>(q)) / (xi - xinv);
}

double spherical(long q, std::complex<double> xi, long t) {
    double qd = static_cast<double>(q);
    if (std::abs(xi - 1.0) > 1e-6 && std::abs(xi + 1.0) > 1e-6) {
        std::complex<double> xinv = 1.0 / xi;
        std::complex<double> val = std::pow(xi, static_cast<double>(t)) * c_function(q, xi) +
                                   std::pow(xinv, static_cast<double>(t)) * c_function(q, xinv);
        return (std::pow(qd, -0.5 * t) / (1.0 + 1.0 / qd)) * val.real();
    }
    // Chebyshev form at the branch points.
    double z = ((xi + 1.0 / xi) / 2.0).real();
    double t0 = 1.0, t1 = z, u0 = 1.0, u1 = 2.0 * z;
    if (t == 0) return 1.0;
    for (long k = 1; k < t; ++k) {
        double t2 = 2.0 * z * t1 - t0;
        double u2 = 2.0 * z * u1 - u0;
        t0 = t1; t1 = t2;
        u0 = u1; u1 = u2;
    }
    return std::pow(qd, -0.5 * t) * (2.0 / (qd + 1.0) * t1 + (qd - 1.0) / (qd + 1.0) * u1);
}

Scalar spherical_exact(long q, const Scalar& z, long t) {
    static const cheb::ChebFamily fam_t = cheb::special_family(cheb::FamilyKind::T);
    static const cheb::ChebFamily fam_u = cheb::special_family(cheb::FamilyKind::U);
    Scalar tt = fam_t.cheb(t).eval(z);
    Scalar ut = fam_u.cheb(t + 1).eval(z);
    Scalar qinv_half = sqrt_scalar(q).pow(-t);
    return qinv_half * (Scalar(2) * tt + Scalar(q - 1) * ut) * Scalar(Rational(1, q + 1));
}

cheb::SpectralMeasure plancherel_measure(long q) {
    LaurentPoly h = LaurentPoly::monomial(1);
    h.set(-1, Scalar(Rational(-1, q)));
    double weight = (1.0 + 1.0 / static_cast<double>(q)) / (4.0 * kPi);
    return cheb::SpectralMeasure(h, weight, {}, "plancherel(q=" + std::to_string(q) + ")");
}

double inverse_satake(long q, const SymLaurentPoly& p, long l, int nodes) {
    cheb::SpectralMeasure mu = plancherel_measure(q);
    double acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        double theta = node_theta(j, nodes);
        std::complex<double> xi = std::polar(1.0, theta);
        acc += p.poly().eval(xi).real() * spherical(q, xi, l) * mu.density_theta(theta);
    }
    return acc * 2.0 * kPi / nodes;
}

VertexFn apply_poly_in_b(const TreeBall& ball, const Poly& p, const VertexFn& f) {
    Scalar b_scale = (Scalar(2) * sqrt_scalar(ball.q())).inv();
    VertexFn acc(ball.size(), Scalar(0));
    for (long k = p.degree(); k >= 0; --k) {
        if (k != p.degree()) {
            acc = adjacency_apply(ball, acc);
            for (auto& v : acc) v = v * b_scale;
        }
        Scalar ck = p.coeff(k);
        if (!ck.is_zero())
            for (std::size_t i = 0; i < f.size(); ++i) acc[i] += ck * f[i];
    }
    return acc;
}

TreeWaveSeries wave_solve(const TreeBall& ball, const BasisPair& basis, const VertexFn& g1,
                          const VertexFn& g2, long t_lo, long t_hi) {
    long lo = std::min(t_lo, 0L), hi = std::max(t_hi, 1L);
    int need = std::max(support_radius(ball, g1), support_radius(ball, g2)) +
               static_cast<int>(std::max(std::labs(lo), std::labs(hi)));
    if (need > ball.radius())
        throw BallTooSmall("wave_solve: ball radius " + std::to_string(ball.radius()) +
                           " < support + |t| = " + std::to_string(need));

    TreeWaveSeries s;
    s.t_lo = lo;
    s.t_hi = hi;
    s.slices.resize(static_cast<std::size_t>(hi - lo + 1));

    Scalar b_scale = (Scalar(2) * sqrt_scalar(ball.q())).inv();
    auto apply_b = [&](const VertexFn& f) {
        VertexFn out = adjacency_apply(ball, f);
        for (auto& v : out) v = v * b_scale;
        return out;
    };
    auto combine = [&](long t) {
        VertexFn a = apply_poly_in_b(ball, cheb::cheb_of(basis.m1, t), g1);
        VertexFn b = apply_poly_in_b(ball, cheb::cheb_of(basis.m2, t), g2);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
    };
    s.at(0) = combine(0);
    s.at(1) = combine(1);
    for (long t = 1; t < hi; ++t) {
        VertexFn mid = apply_b(s.at(t));
        VertexFn next(ball.size());
        const VertexFn& prev = s.at(t - 1);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = Scalar(2) * mid[i] - prev[i];
        s.at(t + 1) = std::move(next);
    }
    for (long t = 0; t > lo; --t) {
        VertexFn mid = apply_b(s.at(t));
        VertexFn prev(ball.size());
        const VertexFn& next = s.at(t + 1);
        for (std::size_t i = 0; i < prev.size(); ++i)
            prev[i] = Scalar(2) * mid[i] - next[i];
        s.at(t - 1) = std::move(prev);
    }
    return s;
}

RadialFn apply_poly_in_b_radial(long q, const Poly& p, const RadialFn& f) {
    Scalar b_scale = (Scalar(2) * sqrt_scalar(q)).inv();
    RadialFn acc(1, Scalar(0));
    for (long k = p.degree(); k >= 0; --k) {
        if (k != p.degree()) {
            acc = adjacency_radial(q, acc);
            for (auto& v : acc) v = v * b_scale;
        }
        Scalar ck = p.coeff(k);
        if (!ck.is_zero()) {
            if (acc.size() < f.size()) acc.resize(f.size(), Scalar(0));
            for (std::size_t i = 0; i < f.size(); ++i) acc[i] += ck * f[i];
        }
    }
    return acc;
}

RadialWaveSeries wave_solve_radial(long q, const BasisPair& basis, const RadialFn& g1,
                                   const RadialFn& g2, long t_lo, long t_hi) {
    long lo = std::min(t_lo, 0L), hi = std::max(t_hi, 1L);
    RadialWaveSeries s;
    s.t_lo = lo;
    s.t_hi = hi;
    s.slices.resize(static_cast<std::size_t>(hi - lo + 1));

    Scalar b_scale = (Scalar(2) * sqrt_scalar(q)).inv();
    auto apply_b = [&](const RadialFn& f) {
        RadialFn out = adjacency_radial(q, f);
        for (auto& v : out) v = v * b_scale;
        return out;
    };
    auto step = [&](const RadialFn& mid_in, const RadialFn& other) {
        RadialFn mid = apply_b(mid_in);
        if (mid.size() < other.size()) mid.resize(other.size(), Scalar(0));
        for (std::size_t i = 0; i < mid.size(); ++i) {
            Scalar o = i < other.size() ? other[i] : Scalar(0);
            mid[i] = Scalar(2) * mid[i] - o;
        }
        return mid;
    };
    auto combine = [&](long t) {
        RadialFn a = apply_poly_in_b_radial(q, cheb::cheb_of(basis.m1, t), g1);
        RadialFn b = apply_poly_in_b_radial(q, cheb::cheb_of(basis.m2, t), g2);
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

RadialFn kernel_closed_form(TreeKernel kind, long t, long q) {
    if (t < 0) throw std::domain_error("kernel_closed_form: t >= 0");
    RadialFn out(static_cast<std::size_t>(t) + 1, Scalar(0));
    Scalar qth = sqrt_scalar(q).pow(-t);  // q^{-t/2}
    switch (kind) {
        case TreeKernel::U:
            for (long r = t % 2; r <= t; r += 2) out[static_cast<std::size_t>(r)] = qth;
            break;
        case TreeKernel::T:
            if (t == 0) {
                out[0] = Scalar(1);
            } else {
                Scalar inside = Scalar(Rational(1 - q, 2)) * qth;
                for (long r = t % 2; r < t; r += 2) out[static_cast<std::size_t>(r)] = inside;
                out[static_cast<std::size_t>(t)] = Scalar(Rational(1, 2)) * qth;
            }
            break;
        case TreeKernel::F:
            if (t == 0) {
                out[0] = Scalar(1) + Scalar(Rational(1, q));
            } else {
                out[static_cast<std::size_t>(t)] = qth;
            }
            break;
    }
    return out;
}

Scalar tree_energy(const TreeBall& ball, const TreeWaveSeries& series, long t) {
    const VertexFn& u = series.at(t);
    VertexFn au = adjacency_apply(ball, adjacency_apply(ball, u));
    Scalar quarter_q = Scalar(Rational(1, 4 * ball.q()));
    Scalar acc(0);
    const VertexFn &up = series.at(t + 1), &um = series.at(t - 1);
    Scalar half(Rational(1, 2));
    for (std::size_t v = 0; v < u.size(); ++v) {
        acc += u[v] * (u[v] - quarter_q * au[v]);
        Scalar dt = (up[v] - um[v]) * half;
        acc += dt * dt;
    }
    return acc;
}

Scalar energy_form(const TreeBall& ball, const VertexFn& g1, const VertexFn& g2,
                   const VertexFn& f1, const VertexFn& f2) {
    VertexFn ag = adjacency_apply(ball, adjacency_apply(ball, g1));
    Scalar quarter_q = Scalar(Rational(1, 4 * ball.q()));
    Scalar acc(0);
    for (std::size_t v = 0; v < g1.size(); ++v) {
        acc += (g1[v] - quarter_q * ag[v]) * f1[v];
        acc += g2[v] * f2[v];
    }
    return acc;
}

std::pair<VertexFn, VertexFn> propagate_state(const TreeBall& ball, const VertexFn& f1,
                                              const VertexFn& f2) {
    Scalar b_scale = (Scalar(2) * sqrt_scalar(ball.q())).inv();
    auto apply_b = [&](const VertexFn& f) {
        VertexFn out = adjacency_apply(ball, f);
        for (auto& v : out) v = v * b_scale;
        return out;
    };
    VertexFn bu = apply_b(f1);
    VertexFn bbu = apply_b(bu);
    VertexFn bj = apply_b(f2);
    VertexFn u_next(ball.size()), j_next(ball.size());
    for (std::size_t v = 0; v < ball.size(); ++v) {
        u_next[v] = bu[v] + f2[v];
        j_next[v] = bbu[v] - f1[v] + bj[v];
    }
    return {std::move(u_next), std::move(j_next)};
}

VertexFn plane_wave(const TreeBall& ball, std::size_t omega, const std::map<long, Scalar>& f,
                    int sign, long t) {
    VertexFn out(ball.size(), Scalar(0));
    Scalar sq = sqrt_scalar(ball.q());
    for (std::size_t v = 0; v < ball.size(); ++v) {
        int h = busemann(ball, omega, v);
        long arg = sign >= 0 ? h - t : h + t;
        auto it = f.find(arg);
        if (it != f.end() && !it->second.is_zero()) out[v] = sq.pow(h) * it->second;
    }
    return out;
}

CylinderSet::CylinderSet(const TreeBall& ball, int depth) : ball_(&ball), depth_(depth) {
    if (depth < 1 || depth > ball.radius())
        throw std::domain_error("CylinderSet: depth must lie in [1, radius]");
    count_ = ball.sphere_size(depth);
    mass_ = 1.0 / (static_cast<double>(ball.q() + 1) *
                   std::pow(static_cast<double>(ball.q()), depth - 1));
}

std::size_t CylinderSet::vertex(std::size_t i) const { return ball_->sphere_begin(depth_) + i; }

std::size_t CylinderSet::index_of_ancestor(std::size_t v) const {
    return ball_->ancestor_at(v, depth_) - ball_->sphere_begin(depth_);
}

std::complex<double> helgason(const TreeBall& ball, const VertexFn& f, std::complex<double> xi,
                              std::size_t omega) {
    if (support_radius(ball, f) > ball.depth(omega))
        throw InsufficientDepth("helgason: cylinder depth below the support radius");
    double sq = std::sqrt(static_cast<double>(ball.q()));
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t v = 0; v < f.size(); ++v) {
        if (f[v].is_zero()) continue;
        int h = busemann(ball, omega, v);
        acc += f[v].to_double() * std::pow(sq, h) * std::pow(xi, h);
    }
    return acc;
}

double node_theta(int j, int nodes) { return 2.0 * kPi * (j + 0.5) / nodes; }

BoundaryField t_plus(const TreeBall& ball, const CylinderSet& cyls, const VertexFn& f1,
                     const VertexFn& f2, int nodes) {
    int s = std::max(support_radius(ball, f1), support_radius(ball, f2));
    if (s > cyls.depth())
        throw InsufficientDepth("t_plus: cylinder depth below the support radius");

    // Aggregate q^{h/2} f(x) by Busemann level per cylinder; each Helgason
    // value is then a short Laurent sum in xi.
    double sq = std::sqrt(static_cast<double>(ball.q()));
    std::size_t nc = cyls.count();
    std::vector<std::map<int, double>> w1(nc), w2(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        std::size_t omega = cyls.vertex(c);
        for (std::size_t v = 0; v < ball.size(); ++v) {
            bool z1 = v < f1.size() && !f1[v].is_zero();
            bool z2 = v < f2.size() && !f2[v].is_zero();
            if (!z1 && !z2) continue;
            int h = busemann(ball, omega, v);
            if (z1) w1[c][h] += f1[v].to_double() * std::pow(sq, h);
            if (z2) w2[c][h] += f2[v].to_double() * std::pow(sq, h);
        }
    }

    BoundaryField field;
    field.nodes = nodes;
    field.cyl_depth = cyls.depth();
    field.val.assign(static_cast<std::size_t>(nodes),
                     std::vector<std::complex<double>>(nc, {0.0, 0.0}));
    for (int j = 0; j < nodes; ++j) {
        double theta = node_theta(j, nodes);
        std::complex<double> xi = std::polar(1.0, theta);
        std::complex<double> xi_inv = std::conj(xi);
        std::complex<double> cinv = 1.0 / c_function(ball.q(), xi_inv);
        std::complex<double> halfdiff = (xi - xi_inv) / 2.0;
        for (std::size_t c = 0; c < nc; ++c) {
            std::complex<double> hel1(0.0, 0.0), hel2(0.0, 0.0);
            for (const auto& [h, w] : w1[c]) hel1 += w * std::pow(xi_inv, h);
            for (const auto& [h, w] : w2[c]) hel2 += w * std::pow(xi_inv, h);
            field.val[static_cast<std::size_t>(j)][c] = hel1 * cinv * halfdiff - hel2 * cinv;
        }
    }
    return field;
}

BoundaryField r_plus_from_t_plus(long q, const BoundaryField& t) {
    BoundaryField out = t;
    double qinv = 1.0 / static_cast<double>(q);
    for (int j = 0; j < t.nodes; ++j) {
        std::complex<double> xi = std::polar(1.0, node_theta(j, t.nodes));
        std::complex<double> factor = (1.0 + qinv) / (xi - qinv / xi);
        for (auto& v : out.val[static_cast<std::size_t>(j)]) v *= factor;
    }
    return out;
}

double field_norm2(long q, const CylinderSet& cyls, const BoundaryField& field) {
    double acc = 0.0;
    for (int j = 0; j < field.nodes; ++j)
        for (std::size_t c = 0; c < cyls.count(); ++c)
            acc += std::norm(field.val[static_cast<std::size_t>(j)][c]);
    double qd = static_cast<double>(q);
    return acc * cyls.mass() * (1.0 + 1.0 / qd) / (2.0 * field.nodes);
}

TranslationSeries k_plus(const BoundaryField& r_field, long n_lo, long n_hi) {
    TranslationSeries k;
    k.n_lo = n_lo;
    k.n_hi = n_hi;
    k.cyl_depth = r_field.cyl_depth;
    std::size_t nc = r_field.val.empty() ? 0 : r_field.val[0].size();
    k.val.assign(static_cast<std::size_t>(n_hi - n_lo + 1),
                 std::vector<std::complex<double>>(nc, {0.0, 0.0}));
    for (long n = n_lo; n <= n_hi; ++n) {
        auto& row = k.val[static_cast<std::size_t>(n - n_lo)];
        for (int j = 0; j < r_field.nodes; ++j) {
            std::complex<double> ph = std::polar(1.0, node_theta(j, r_field.nodes) * n);
            for (std::size_t c = 0; c < nc; ++c)
                row[c] += r_field.val[static_cast<std::size_t>(j)][c] * ph;
        }
        for (auto& v : row) v /= static_cast<double>(r_field.nodes);
    }
    return k;
}

double reconstruct(const TreeBall& ball, const CylinderSet& cyls, const TranslationSeries& k,
                   std::size_t v, long t) {
    int depth_needed = std::max(ball.depth(v), cyls.depth());
    if (depth_needed > ball.radius())
        throw InsufficientDepth("reconstruct: vertex deeper than cylinder structure allows");
    double sq = std::sqrt(static_cast<double>(ball.q()));
    double nu = 1.0 / (static_cast<double>(ball.q() + 1) *
                       std::pow(static_cast<double>(ball.q()), depth_needed - 1));
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t w = ball.sphere_begin(depth_needed); w < ball.sphere_end(depth_needed);
         ++w) {
        int h = busemann(ball, w, v);
        long n = h - t;
        if (n < k.n_lo || n > k.n_hi)
            throw std::domain_error("reconstruct: k series window too narrow");
        std::size_t c = cyls.index_of_ancestor(w);
        acc += std::pow(sq, h) * k.at(n, c);
    }
    return (acc * nu).real();
}

std::complex<double> scattering_multiplier(long q, std::complex<double> xi) {
    double qinv = 1.0 / static_cast<double>(q);
    std::complex<double> xinv = 1.0 / xi;
    return (xinv - qinv * xi) / (xi - qinv * xinv);
}

std::pair<double, double> resonances(long q) {
    double r = 1.0 / std::sqrt(static_cast<double>(q));
    return {r, -r};
}

CylinderPredicateReport cylinder_average_predicate(const TreeBall& ball, const CylinderSet& cyls,
                                                   const TranslationSeries& k, int max_depth,
                                                   double tol) {
    CylinderPredicateReport report;
    double qd = static_cast<double>(ball.q());

    // cylinder averages: k~(t, v) = (sum over cylinders below v of nu k)/nu(Omega(v))
    auto avg = [&](long n, std::size_t v) {
        std::complex<double> acc(0.0, 0.0);
        std::size_t cnt = 0;
        for (std::size_t w = ball.sphere_begin(cyls.depth()); w < ball.sphere_end(cyls.depth());
             ++w) {
            if (ball.ancestor_at(w, ball.depth(v)) != v) continue;
            acc += k.at(n, cyls.index_of_ancestor(w));
            ++cnt;
        }
        return acc / static_cast<double>(cnt);
    };

    for (long n = k.n_lo; n <= k.n_hi; ++n)
        if (std::abs(avg(n, 0)) > tol) report.root_ok = false;

    for (int d = 1; d <= max_depth; ++d) {
        for (std::size_t v = ball.sphere_begin(d); v < ball.sphere_end(d); ++v) {
            bool ok = true;
            for (long n = k.n_lo + 2; n <= k.n_hi; ++n)
                if (std::abs(qd * avg(n, v) - avg(n - 2, v)) > tol) ok = false;
            if (!ok) report.failed_vertices.push_back(v);
        }
    }
    return report;
}

}  // namespace treewave::tree
