#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "treewave/laurent.hpp"

namespace treewave::deloc {

struct GraphError : std::domain_error {
    using std::domain_error::domain_error;
};
struct NTooSmall : std::domain_error {
    using std::domain_error::domain_error;
};

/// Finite simple connected (p+1, q+1)-biregular graph. Vertices 0..n_q-1 are
/// the q-class (degree q+1), the rest the p-class.
struct BiregularGraph {
    long p = 0, q = 0;
    std::size_t n_q = 0, n_p = 0;
    std::vector<std::vector<int>> adj;

    std::size_t size() const { return adj.size(); }
    bool is_q_vertex(std::size_t v) const { return v < n_q; }

    /// Degree classes, simplicity, connectivity, |V_p|(p+1) = |V_q|(q+1).
    void validate() const;

    std::uint64_t hash() const;
};

/// Configuration-model generator with rejection of multi-edges and
/// disconnected samples; deterministic for a fixed seed.
BiregularGraph gen_biregular(std::size_t n_q, long p, long q, std::uint64_t seed,
                             int max_tries = 500);

BiregularGraph load_graph(std::istream& in);
void save_graph(std::ostream& out, const BiregularGraph& g);

/// B_q = ((A^2)|_{V_q} - (p+q) I) / (2 sqrt(pq)) as a dense symmetric matrix.
Eigen::MatrixXd bq_matrix(const BiregularGraph& g);

struct EigenSystem {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns
};

/// Dense symmetric eigensolver (tridiagonalization + implicit QL), ascending
/// eigenvalues, deterministic ordering.
EigenSystem eig(const Eigen::MatrixXd& m);

/// Descent of the tree sphere operator S~_n to the graph: entries are
/// non-backtracking 2n-walk counts scaled by (pq)^{-n/2}. Agrees with the
/// sphere sum below the injectivity radius.
Eigen::MatrixXd sn_matrix(const BiregularGraph& g, int n);
std::vector<Eigen::MatrixXd> sn_matrices(const BiregularGraph& g, int n_max);

double op_norm_1_inf(const Eigen::MatrixXd& m);  // max |entry| = L^1 -> L^inf
double op_norm_2(const Eigen::MatrixXd& m);      // spectral norm (symmetric)

/// Riesz-Thorin upper bound for L^r -> L^s, r in [1,2), s conjugate.
double interpolated_norm(double norm_1_inf, double norm_2, double r);

/// Upper bound for ||S_n||_{L^r -> L^s}; exact max-entry norm at r = 1.
double sn_norm(const BiregularGraph& g, int n, double r);

/// Largest (C = max, alpha = 1/2) achieved constants over n <= window:
/// ||S_n|| <= C (pq)^{-n/2}.
std::pair<double, double> achieved_hypothesis_constants(const BiregularGraph& g, double r,
                                                        int window);

// ---- exact kernel-construction identities (Laurent side) ----

/// Standard Fejer kernel of order M: sum_{|j| <= M-1} ((M-|j|)/M) x^j; F_M(1) = M.
LaurentPoly fejer(long M);
double fejer_value(long M, double theta);

/// F_M(x^d) - 1 - ((M-1)/M)(x^d + x^-d).
LaurentPoly tilde_f(long M, long d);

/// R_t and classical U_t at z = (x + x^-1)/2 as Laurent polynomials.
LaurentPoly r_t_laurent(long t, const Scalar& b_inv);
LaurentPoly u_t_laurent(long t);

/// x^k + x^-k = R_k - b^-1 R_{k-1} - (1-b^-2) sum_{j<=l} (-b^-1)^j R_{k-2-j}
///            - (1-b^-2)(-b^-1)^{l+1} U_{k-3-l}; returns the right-hand side.
LaurentPoly cheb1_via_r(long k, long l, const Scalar& b_inv);

/// Coefficient of U_{d-3} that cancels the R-expansion remainders.
Scalar tilde_g_correction(long M, long d, const Scalar& b_inv);

/// tilde G via the direct route (tilde_F + correction * U_{d-3}).
LaurentPoly tilde_g_direct(long M, long d, const Scalar& b_inv);
/// tilde G via the explicit R-combination; equal to the direct route.
LaurentPoly tilde_g_r_expansion(long M, long d, const Scalar& b_inv);

// ---- numeric kernel for certificates ----

/// K_lambda^N = (1/4) tilde K_M^d in structured form:
/// K(z) = (1/4)( sum_{c=2}^{M-1} (2(M-c)/M) T_{cd}(z) + corr U_{d-3}(z) ).
struct KernelPoly {
    long M = 0, d = 0, N = 0;
    double lambda = 0.0, eps = 0.0, gamma = 0.0;
    double corr = 0.0;
    bool untempered_fallback = false;

    long degree() const { return (M - 1) * d; }

    /// Stable pointwise evaluation; finite for tempered z, may overflow to
    /// +inf for strongly untempered z (use log_eval there).
    double eval(double z) const;

    /// log K(z) for |z| > 1 (K is positive there for even d).
    double log_eval_untempered(double z) const;
};

/// gamma calibration: largest gamma <= 1/2 with F_M >= M/2 + 4 on |theta| <
/// gamma/M (1000-point check).
double calibrate_gamma(long M);

/// Even d with M d <= N, |d theta0 mod 2pi| <= gamma/M and d >= c N,
/// c = gamma/(16 pi M^2); throws NTooSmall if none exists.
long find_d(double theta0, long M, double gamma, long N);

/// Kernel for the eigenvalue lambda; requires q > p. The Fejer order M
/// defaults to ceil(128/eps) capped for desk scale (>= 8/eps so that
/// K(lambda) >= 1/eps still holds; the property is checked, not assumed).
KernelPoly build_k(double lambda, long N, double eps, long p, long q);

/// Checks of the three kernel properties on the instance spectrum plus a
/// dense [-1,1] grid.
struct KernelPropertyReport {
    bool degree_ok = false;
    bool value_at_lambda_ok = false;  // K(lambda) >= 1/eps
    bool min_ok = false;              // K >= -1 on spectrum and grid
    bool all_ok() const { return degree_ok && value_at_lambda_ok && min_ok; }
};

KernelPropertyReport kernel_properties(const KernelPoly& k, const Eigen::VectorXd& spectrum);

struct NormReport {
    double log_beta_direct = 0.0;  // verified ||K(B_q)||_{r->s} upper bound (log)
    double log_b_chain = 0.0;      // hypothesis-based triangle bound (log)
    double eta = 0.0;              // chain decay rate: log_b_chain ~ -eta N log(pq)
    bool hypothesis_ok = false;
    int first_violation_n = -1;
    int checked_up_to = 0;
};

/// ||S_n||_{r->s} upper bounds for n = 0..window (reusable across kernels).
std::vector<double> sn_norm_table(const BiregularGraph& g, double r, int window);

NormReport verify_k(const BiregularGraph& g, const EigenSystem& es, const KernelPoly& k,
                    double r, double c_hyp, double alpha, int hyp_window,
                    const std::vector<double>* sn_norms = nullptr);

struct Certificate {
    std::uint64_t graph_hash = 0;
    double lambda = 0.0, eps = 0.0, r = 1.0, c_hyp = 1.0, alpha = 0.5;
    long N = 0, M = 0, d = 0;
    double gamma = 0.0;
    double log_k_at_lambda = 0.0;
    double log_beta = 0.0;     // verified norm bound used in the chain
    double log_b_chain = 0.0;  // reported hypothesis-based bound
    double eta = 0.0;
    long lower_bound = 0;      // L: every E with mass > eps has |E| >= L
    double log_l_hyp = 0.0;    // conditional (hypothesis-through-N) bound, log
    bool eig_ok = false, k_lambda_ok = false, k_min_ok = false, hyp_ok = false,
         norm_ok = false;

    bool valid() const { return eig_ok && k_lambda_ok && k_min_ok && norm_ok; }
};

/// Full certification chain: spectral inequality + Hoelder + verified norm
/// bound. Throws GraphError for invalid eigenpairs or p >= q.
Certificate certify(const BiregularGraph& g, const EigenSystem& es, const Eigen::VectorXd& phi,
                    double lambda, double eps, double r, double c_hyp, double alpha, long N,
                    int hyp_window = 8, const std::vector<double>* sn_norms = nullptr);

}  // namespace treewave::deloc
