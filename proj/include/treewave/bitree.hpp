#pragma once

#include "treewave/regtree.hpp"

namespace treewave::bitree {

using tree::BallTooSmall;
using tree::BoundaryTouch;
using tree::InsufficientDepth;
using tree::BoundaryField;
using tree::TranslationSeries;
using tree::VertexFn;

/// Ball in the (p+1, q+1)-biregular tree in edge distance, rooted at the
/// degree-(q+1) vertex o_q. Even depths are q-type, odd depths p-type.
class BiTreeBall {
public:
    BiTreeBall(long p, long q, int radius);

    long p() const { return p_; }
    long q() const { return q_; }
    int radius() const { return radius_; }
    std::size_t size() const { return parent_.size(); }

    int depth(std::size_t v) const { return depth_[v]; }
    bool is_q_vertex(std::size_t v) const { return depth_[v] % 2 == 0; }
    std::size_t parent(std::size_t v) const { return parent_[v]; }
    std::size_t child_count(std::size_t v) const;
    std::size_t child(std::size_t v, std::size_t i) const { return child_begin_[v] + i; }

    std::size_t sphere_begin(int r) const { return sphere_start_[static_cast<std::size_t>(r)]; }
    std::size_t sphere_end(int r) const { return sphere_start_[static_cast<std::size_t>(r) + 1]; }
    std::size_t sphere_size(int r) const { return sphere_end(r) - sphere_begin(r); }

    int meet_depth(std::size_t u, std::size_t v) const;
    int dist(std::size_t u, std::size_t v) const {
        return depth(u) + depth(v) - 2 * meet_depth(u, v);
    }
    std::size_t ancestor_at(std::size_t v, int d) const;
    std::size_t ray_vertex(int d) const;

    /// Harmonic measure of a cylinder at the given depth.
    double cylinder_mass(int depth) const;

private:
    long p_, q_;
    int radius_;
    std::vector<int> depth_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> child_begin_;
    std::vector<std::size_t> sphere_start_;

    std::size_t child_count_at_depth(int r) const {
        if (r == 0) return static_cast<std::size_t>(q_ + 1);
        return static_cast<std::size_t>((r % 2 == 1) ? p_ : q_);
    }
};

/// Radial profile on the q-class, indexed by half-distance d(o_q, v)/2.
using BiRadialFn = std::vector<Scalar>;

int support_radius(const BiTreeBall& ball, const VertexFn& f);  // edge distance
VertexFn biradial_to_vertex(const BiTreeBall& ball, const BiRadialFn& f);
BiRadialFn vertex_to_biradial(const BiTreeBall& ball, const VertexFn& f);

/// Full bipartite adjacency (for the A^2 route to A_2^q).
VertexFn adjacency_apply(const BiTreeBall& ball, const VertexFn& f);

/// B_q = (A_2^q - (p-1)) / (2 sqrt(pq)) with A_2^q realized as
/// (A^2)|_{V_q} - (q+1) Id. Input must be supported on the q-class.
VertexFn bq_apply(const BiTreeBall& ball, const VertexFn& f);

/// B_q on radial profiles: (B f)(0) = ((q+1) p f(1) - (p-1) f(0)) / (2 sqrt(pq)),
/// (B f)(r) = (f(r-1) + pq f(r+1)) / (2 sqrt(pq)).
BiRadialFn bq_radial(long p, long q, const BiRadialFn& f);

int busemann(const BiTreeBall& ball, std::size_t omega, std::size_t v);

/// [x^k] Sat(f) = (pq)^{k/2} sum over h_omega^{-1}(2k) of f.
LaurentPoly satake_bi(const BiTreeBall& ball, const BiRadialFn& f, std::size_t omega);

/// Convolution of radial kernels on the q-class (oracle).
BiRadialFn convolve_biradial(long p, long q, const BiRadialFn& f, const BiRadialFn& g);

/// c(xi) = (1 - a^-1 xi^-1)(1 + b^-1 xi^-1) xi / (xi - xi^-1), a = sqrt(pq),
/// b = sqrt(q/p).
std::complex<double> c_function_bi(long p, long q, std::complex<double> xi);
/// Numerator of the c-function.
std::complex<double> b_function_bi(long p, long q, std::complex<double> xi);

/// Spherical function at even distance two_t, Harish-Chandra form (falls back
/// to the H_t form near xi = +-1).
double spherical_bi(long p, long q, std::complex<double> xi, long two_t);

/// phi_z(2t) = (pq)^{-t/2} H_t(z) / (1 + q^-1), exact.
Scalar spherical_bi_exact(long p, long q, const Scalar& z, long two_t);

/// Plancherel: (1+q^-1)/(4 pi) |c|^-2 dtheta, plus the atom at
/// z = -(p+q)/(2 sqrt(pq)) of mass 1 - (q+1)/(p+1) when p > q.
cheb::SpectralMeasure plancherel_bi(long p, long q);

/// Inversion at even distance 2 l (quadrature plus the atom when p > q).
double inverse_satake_bi(long p, long q, const SymLaurentPoly& sat, long l, int nodes = 2048);

enum class BiKernel { U, R, H };

/// Closed forms of U_t(B_q), R_t(B_q), H_t(B_q) applied to delta_{o_q}.
BiRadialFn kernel_closed_form_bi(BiKernel kind, long t, long p, long q);

struct BiWaveSeries {
    long t_lo = 0, t_hi = 0;
    std::vector<VertexFn> slices;

    const VertexFn& at(long t) const { return slices[static_cast<std::size_t>(t - t_lo)]; }
    VertexFn& at(long t) { return slices[static_cast<std::size_t>(t - t_lo)]; }
};

BiWaveSeries wave_solve_bi(const BiTreeBall& ball, const BasisPair& basis, const VertexFn& g1,
                           const VertexFn& g2, long t_lo, long t_hi);

struct BiRadialWaveSeries {
    long t_lo = 0, t_hi = 0;
    std::vector<BiRadialFn> slices;

    const BiRadialFn& at(long t) const { return slices[static_cast<std::size_t>(t - t_lo)]; }
    BiRadialFn& at(long t) { return slices[static_cast<std::size_t>(t - t_lo)]; }
};

BiRadialWaveSeries wave_solve_bi_radial(long p, long q, const BasisPair& basis,
                                        const BiRadialFn& g1, const BiRadialFn& g2, long t_lo,
                                        long t_hi);

VertexFn apply_poly_in_bq(const BiTreeBall& ball, const Poly& poly, const VertexFn& f);
BiRadialFn apply_poly_in_bq_radial(long p, long q, const Poly& poly, const BiRadialFn& f);

/// E(t) = <(1 - B_q^2) u, u> + ||(u(t+1) - u(t-1))/2||^2 over the q-class.
Scalar bi_energy(const BiTreeBall& ball, const BiWaveSeries& series, long t);

Scalar energy_form_bi(const BiTreeBall& ball, const VertexFn& g1, const VertexFn& g2,
                      const VertexFn& f1, const VertexFn& f2);

std::pair<VertexFn, VertexFn> propagate_state_bi(const BiTreeBall& ball, const VertexFn& f1,
                                                 const VertexFn& f2);

/// Cylinders at a fixed (even) depth of the biregular boundary.
class BiCylinderSet {
public:
    BiCylinderSet(const BiTreeBall& ball, int depth);

    int depth() const { return depth_; }
    std::size_t count() const { return count_; }
    std::size_t vertex(std::size_t i) const { return ball_->sphere_begin(depth_) + i; }
    double mass() const { return mass_; }
    std::size_t index_of_ancestor(std::size_t v) const {
        return ball_->ancestor_at(v, depth_) - ball_->sphere_begin(depth_);
    }
    const BiTreeBall& ball() const { return *ball_; }

private:
    const BiTreeBall* ball_;
    int depth_;
    std::size_t count_;
    double mass_;
};

/// Helgason transform in the half-index convention: sum of
/// f(x) (pq)^{l/2} xi^l over x, l = h_omega(x)/2.
std::complex<double> helgason_bi(const BiTreeBall& ball, const VertexFn& f,
                                 std::complex<double> xi, std::size_t omega);

/// T_{+-}: sign = +1 outgoing, -1 incoming.
BoundaryField t_pm_bi(const BiTreeBall& ball, const BiCylinderSet& cyls, const VertexFn& f1,
                      const VertexFn& f2, int nodes, int sign);

/// R_+ = (1 + q^-1) / b(xi) T_+ (the regular-tree-consistent normalization).
BoundaryField r_plus_from_t_plus_bi(long p, long q, const BoundaryField& t);

double field_norm2_bi(long p, long q, const BiCylinderSet& cyls, const BoundaryField& field);

/// u(v, t) = sum over cylinders of nu (pq)^{l/2} k(l - t, omega).
double reconstruct_bi(const BiTreeBall& ball, const BiCylinderSet& cyls,
                      const TranslationSeries& k, std::size_t v, long t);

/// Resonances of the biregular scattering operator.
std::pair<double, double> resonances_bi(long p, long q);

}  // namespace treewave::bitree
