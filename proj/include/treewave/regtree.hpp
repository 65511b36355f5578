#pragma once

#include <complex>
#include <vector>

#include "treewave/chebyshev.hpp"
#include "treewave/laurent.hpp"

namespace treewave::tree {

struct BoundaryTouch : std::domain_error {
    using std::domain_error::domain_error;
};
struct BallTooSmall : std::domain_error {
    using std::domain_error::domain_error;
};
struct InsufficientDepth : std::domain_error {
    using std::domain_error::domain_error;
};

/// Ball of given radius in the (q+1)-regular tree. Vertices are indexed
/// breadth-first so each sphere is contiguous and children of a vertex are
/// consecutive. q = 1 gives the two-sided line through the root.
class TreeBall {
public:
    TreeBall(long q, int radius);

    long q() const { return q_; }
    int radius() const { return radius_; }
    std::size_t size() const { return parent_.size(); }

    int depth(std::size_t v) const { return depth_[v]; }
    std::size_t parent(std::size_t v) const { return parent_[v]; }
    std::size_t child_count(std::size_t v) const;
    std::size_t child(std::size_t v, std::size_t letter) const { return child_begin_[v] + letter; }

    std::size_t sphere_begin(int r) const { return sphere_start_[static_cast<std::size_t>(r)]; }
    std::size_t sphere_end(int r) const { return sphere_start_[static_cast<std::size_t>(r) + 1]; }
    std::size_t sphere_size(int r) const { return sphere_end(r) - sphere_begin(r); }

    /// Depth of the deepest common ancestor.
    int meet_depth(std::size_t u, std::size_t v) const;
    int dist(std::size_t u, std::size_t v) const {
        return depth(u) + depth(v) - 2 * meet_depth(u, v);
    }
    std::size_t ancestor_at(std::size_t v, int d) const;

    /// Vertex at the given depth along the all-first-letter ray (a canonical
    /// boundary direction).
    std::size_t ray_vertex(int d) const;

private:
    long q_;
    int radius_;
    std::vector<int> depth_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> child_begin_;
    std::vector<std::size_t> sphere_start_;
};

using VertexFn = std::vector<Scalar>;   // indexed by ball vertex
using RadialFn = std::vector<Scalar>;   // indexed by radius

int support_radius(const TreeBall& ball, const VertexFn& f);
VertexFn radial_to_vertex(const TreeBall& ball, const RadialFn& f);
bool is_radial(const TreeBall& ball, const VertexFn& f);
RadialFn vertex_to_radial(const TreeBall& ball, const VertexFn& f);

/// [A f](v) = sum of f over neighbours; throws BoundaryTouch if the support
/// of f reaches the boundary sphere.
VertexFn adjacency_apply(const TreeBall& ball, const VertexFn& f);

/// Busemann index h_omega(v) = 2 meet(omega, v) - d(o, v), for a boundary
/// direction represented by a vertex omega with depth(omega) >= depth(v).
int busemann(const TreeBall& ball, std::size_t omega, std::size_t v);

/// Satake transform of a radial function: [x^k] = q^{k/2} sum_{h_omega = k} f(v).
LaurentPoly satake(const TreeBall& ball, const RadialFn& f, std::size_t omega);

/// Convolution of radial kernels on the tree (independent oracle for the
/// Satake homomorphism). Result radius = rf + rg.
RadialFn convolve_radial(long q, const RadialFn& f, const RadialFn& g);

/// c(xi) = (xi - q^-1 xi^-1)/(xi - xi^-1).
std::complex<double> c_function(long q, std::complex<double> xi);

/// Spherical function via the Harish-Chandra expansion; falls back to the
/// Chebyshev form near xi = +-1.
double spherical(long q, std::complex<double> xi, long t);

/// phi_z(t) = q^{-t/2} ( 2/(q+1) T_t(z) + (q-1)/(q+1) U_t(z) ), exact.
Scalar spherical_exact(long q, const Scalar& z, long t);

/// Plancherel measure (1 + q^-1)/(4 pi) |c|^-2 dtheta; probability measure.
cheb::SpectralMeasure plancherel_measure(long q);

/// Inverse transform evaluated on the sphere of radius l by quadrature.
double inverse_satake(long q, const SymLaurentPoly& p, long l, int nodes = 2048);

struct TreeWaveSeries {
    long t_lo = 0, t_hi = 0;
    std::vector<VertexFn> slices;

    const VertexFn& at(long t) const { return slices[static_cast<std::size_t>(t - t_lo)]; }
    VertexFn& at(long t) { return slices[static_cast<std::size_t>(t - t_lo)]; }
};

/// Chebyshev-recurrence wave solver: u(., t+1) = 2 B u(., t) - u(., t-1)
/// with B = A/(2 sqrt q), seeded by Ch_0, Ch_1 of the dual basis.
TreeWaveSeries wave_solve(const TreeBall& ball, const BasisPair& basis, const VertexFn& g1,
                          const VertexFn& g2, long t_lo, long t_hi);

/// Apply a z-polynomial in B = A/(2 sqrt q).
VertexFn apply_poly_in_b(const TreeBall& ball, const Poly& p, const VertexFn& f);

/// Interior-only neighbour sums (no boundary check); output is valid on
/// depth <= radius - 1. For data that fills the whole ball, e.g. plane waves.
VertexFn adjacency_apply_interior(const TreeBall& ball, const VertexFn& f);

/// A on radial profiles: (A f)(0) = (q+1) f(1), (A f)(r) = f(r-1) + q f(r+1).
RadialFn adjacency_radial(long q, const RadialFn& f);

RadialFn apply_poly_in_b_radial(long q, const Poly& p, const RadialFn& f);

struct RadialWaveSeries {
    long t_lo = 0, t_hi = 0;
    std::vector<RadialFn> slices;

    const RadialFn& at(long t) const { return slices[static_cast<std::size_t>(t - t_lo)]; }
    RadialFn& at(long t) { return slices[static_cast<std::size_t>(t - t_lo)]; }
};

/// Same solver on radial profiles; no ball bound, the profile just grows.
RadialWaveSeries wave_solve_radial(long q, const BasisPair& basis, const RadialFn& g1,
                                   const RadialFn& g2, long t_lo, long t_hi);

enum class TreeKernel { T, U, F };

/// Closed-form kernels of Prop-style T_t, U_t, F_t applied to delta_o.
RadialFn kernel_closed_form(TreeKernel kind, long t, long q);

/// E(t) = <(1 - A^2/(4q)) u(., t), u(., t)> + || (u(., t+1) - u(., t-1))/2 ||^2.
Scalar tree_energy(const TreeBall& ball, const TreeWaveSeries& series, long t);

/// Energy form [(g1,g2),(f1,f2)] of the scattering Hilbert space.
Scalar energy_form(const TreeBall& ball, const VertexFn& g1, const VertexFn& g2,
                   const VertexFn& f1, const VertexFn& f2);

/// One step of the unitary wave propagator on state pairs (u, j).
std::pair<VertexFn, VertexFn> propagate_state(const TreeBall& ball, const VertexFn& f1,
                                              const VertexFn& f2);

/// Horocyclic plane wave F_+(v,t) = q^{h/2} f(h - t) (sign = +1) or
/// F_-(v,t) = q^{h/2} f(h + t) (sign = -1).
VertexFn plane_wave(const TreeBall& ball, std::size_t omega, const std::map<long, Scalar>& f,
                    int sign, long t);

/// Cylinders of a fixed depth: one per sphere-depth vertex, with harmonic
/// measure 1/((q+1) q^(depth-1)).
class CylinderSet {
public:
    CylinderSet(const TreeBall& ball, int depth);

    int depth() const { return depth_; }
    std::size_t count() const { return count_; }
    std::size_t vertex(std::size_t i) const;  // representative vertex
    double mass() const { return mass_; }     // same for every cylinder
    std::size_t index_of_ancestor(std::size_t v) const;  // cylinder containing v's directions

    const TreeBall& ball() const { return *ball_; }

private:
    const TreeBall* ball_;
    int depth_;
    std::size_t count_;
    double mass_;
};

/// Helgason transform at one boundary cylinder: sum f(x) q^{h/2} xi^h.
/// The cylinder depth must dominate the support radius.
std::complex<double> helgason(const TreeBall& ball, const VertexFn& f, std::complex<double> xi,
                              std::size_t omega);

/// Field on (xi-node, cylinder); nodes are the midpoint grid on S^1.
struct BoundaryField {
    int nodes = 0;
    int cyl_depth = 0;
    std::vector<std::vector<std::complex<double>>> val;  // [node][cyl]

    std::complex<double>& at(int j, std::size_t c) { return val[j][c]; }
    const std::complex<double>& at(int j, std::size_t c) const { return val[j][c]; }
};

double node_theta(int j, int nodes);

/// Outgoing map T_+ on finite-energy states.
BoundaryField t_plus(const TreeBall& ball, const CylinderSet& cyls, const VertexFn& f1,
                     const VertexFn& f2, int nodes);

/// R_+ = (1 + q^-1)/(xi - q^-1 xi^-1) T_+.
BoundaryField r_plus_from_t_plus(long q, const BoundaryField& t);

/// ||field||^2 in L^2(S^1 x Omega) with the (1+q^-1)/(4 pi) dtheta x dnu weight.
double field_norm2(long q, const CylinderSet& cyls, const BoundaryField& field);

/// k_+(n, omega): Fourier coefficients in t of R_+.
struct TranslationSeries {
    long n_lo = 0, n_hi = 0;
    int cyl_depth = 0;
    std::vector<std::vector<std::complex<double>>> val;  // [n - n_lo][cyl]

    const std::complex<double>& at(long n, std::size_t c) const {
        return val[static_cast<std::size_t>(n - n_lo)][c];
    }
};

TranslationSeries k_plus(const BoundaryField& r_field, long n_lo, long n_hi);

/// Superposition formula: u(v, t) = sum over cylinders of
/// nu * q^{h/2} k_+(h - t, omega).
double reconstruct(const TreeBall& ball, const CylinderSet& cyls, const TranslationSeries& k,
                   std::size_t v, long t);

/// Scattering multiplier (xi^-1 - q^-1 xi)/(xi - q^-1 xi^-1); unimodular on S^1.
std::complex<double> scattering_multiplier(long q, std::complex<double> xi);

/// Poles of the scattering operator: +- q^{-1/2}.
std::pair<double, double> resonances(long q);

/// Finite-depth test of the zero-solution criterion: per vertex, whether
/// q k~(t, v) = k~(t-2, v) throughout the window (and k~(., o) = 0).
struct CylinderPredicateReport {
    bool root_ok = true;
    std::vector<std::size_t> failed_vertices;
    bool all_ok() const { return root_ok && failed_vertices.empty(); }
};

CylinderPredicateReport cylinder_average_predicate(const TreeBall& ball, const CylinderSet& cyls,
                                                   const TranslationSeries& k, int max_depth,
                                                   double tol);

}  // namespace treewave::tree
