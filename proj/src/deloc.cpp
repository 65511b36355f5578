#include "treewave/deloc.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace treewave::deloc {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0); }
double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0); }
}  // namespace

void BiregularGraph::validate() const {
    if (p < 1 || q < 1) throw GraphError("graph: p, q >= 1 required");
    if (n_q + n_p != adj.size()) throw GraphError("graph: class sizes inconsistent");
    if (n_p * static_cast<std::size_t>(p + 1) != n_q * static_cast<std::size_t>(q + 1))
        throw GraphError("graph: |V_p|(p+1) != |V_q|(q+1)");
    for (std::size_t v = 0; v < adj.size(); ++v) {
        std::size_t want = is_q_vertex(v) ? static_cast<std::size_t>(q + 1)
                                          : static_cast<std::size_t>(p + 1);
        if (adj[v].size() != want)
            throw GraphError("graph: vertex " + std::to_string(v) + " has wrong degree");
        std::set<int> seen;
        for (int w : adj[v]) {
            if (w < 0 || static_cast<std::size_t>(w) >= adj.size() ||
                static_cast<std::size_t>(w) == v)
                throw GraphError("graph: bad edge endpoint");
            if (is_q_vertex(v) == is_q_vertex(static_cast<std::size_t>(w)))
                throw GraphError("graph: edge inside one class");
            if (!seen.insert(w).second) throw GraphError("graph: multi-edge");
        }
    }
    // connectivity
    std::vector<char> vis(adj.size(), 0);
    std::queue<std::size_t> bfs;
    bfs.push(0);
    vis[0] = 1;
    std::size_t cnt = 1;
    while (!bfs.empty()) {
        std::size_t v = bfs.front();
        bfs.pop();
        for (int w : adj[v])
            if (!vis[static_cast<std::size_t>(w)]) {
                vis[static_cast<std::size_t>(w)] = 1;
                ++cnt;
                bfs.push(static_cast<std::size_t>(w));
            }
    }
    if (cnt != adj.size()) throw GraphError("graph: not connected");
}

std::uint64_t BiregularGraph::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        h ^= x;
        h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(p));
    mix(static_cast<std::uint64_t>(q));
    mix(n_q);
    for (std::size_t v = 0; v < adj.size(); ++v) {
        std::vector<int> nb = adj[v];
        std::sort(nb.begin(), nb.end());
        for (int w : nb)
            if (static_cast<std::size_t>(w) > v) {
                mix(v);
                mix(static_cast<std::uint64_t>(w));
            }
    }
    return h;
}

BiregularGraph gen_biregular(std::size_t n_q, long p, long q, std::uint64_t seed,
                             int max_tries) {
    std::size_t half_edges = n_q * static_cast<std::size_t>(q + 1);
    if (half_edges % static_cast<std::size_t>(p + 1) != 0)
        throw GraphError("gen_biregular: n_q (q+1) not divisible by p+1");
    std::size_t n_p = half_edges / static_cast<std::size_t>(p + 1);

    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<int> stubs(half_edges);
        for (std::size_t i = 0; i < half_edges; ++i)
            stubs[i] = static_cast<int>(n_q + i / static_cast<std::size_t>(p + 1));
        std::shuffle(stubs.begin(), stubs.end(), rng);

        BiregularGraph g;
        g.p = p;
        g.q = q;
        g.n_q = n_q;
        g.n_p = n_p;
        g.adj.assign(n_q + n_p, {});
        bool simple = true;
        std::set<std::pair<int, int>> edges;
        for (std::size_t i = 0; i < half_edges && simple; ++i) {
            int u = static_cast<int>(i / static_cast<std::size_t>(q + 1));
            int w = stubs[i];
            if (!edges.insert({u, w}).second) simple = false;
            g.adj[static_cast<std::size_t>(u)].push_back(w);
            g.adj[static_cast<std::size_t>(w)].push_back(u);
        }
        if (!simple) continue;
        try {
            g.validate();
        } catch (const GraphError&) {
            continue;
        }
        return g;
    }
    throw GraphError("gen_biregular: retries exhausted");
}

void save_graph(std::ostream& out, const BiregularGraph& g) {
    out << "# p=" << g.p << " q=" << g.q << "\n";
    for (std::size_t v = 0; v < g.size(); ++v)
        for (int w : g.adj[v])
            if (static_cast<std::size_t>(w) > v) out << v << " " << w << "\n";
}

BiregularGraph load_graph(std::istream& in) {
    std::string line;
    long p = -1, q = -1;
    std::vector<std::pair<int, int>> edges;
    int vmax = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::size_t pp = line.find("p="), qq = line.find("q=");
            if (pp == std::string::npos || qq == std::string::npos)
                throw GraphError("load_graph: header must carry p= and q=");
            p = std::stol(line.substr(pp + 2));
            q = std::stol(line.substr(qq + 2));
            continue;
        }
        std::istringstream ls(line);
        int u, w;
        if (!(ls >> u >> w)) throw GraphError("load_graph: bad edge line: " + line);
        edges.emplace_back(u, w);
        vmax = std::max({vmax, u, w});
    }
    if (p < 1 || q < 1) throw GraphError("load_graph: missing '# p=.. q=..' header");
    if (vmax < 0) throw GraphError("load_graph: no edges");

    std::size_t n = static_cast<std::size_t>(vmax) + 1;
    std::vector<std::vector<int>> adj(n);
    for (auto [u, w] : edges) {
        adj[static_cast<std::size_t>(u)].push_back(w);
        adj[static_cast<std::size_t>(w)].push_back(u);
    }
    // 2-colour; the q-class is the colour whose degree is q+1.
    std::vector<int> colour(n, -1);
    std::queue<std::size_t> bfs;
    colour[0] = 0;
    bfs.push(0);
    while (!bfs.empty()) {
        std::size_t v = bfs.front();
        bfs.pop();
        for (int w : adj[v]) {
            std::size_t wz = static_cast<std::size_t>(w);
            if (colour[wz] == -1) {
                colour[wz] = 1 - colour[v];
                bfs.push(wz);
            } else if (colour[wz] == colour[v]) {
                throw GraphError("load_graph: graph not bipartite");
            }
        }
    }
    int q_colour = 0;
    if (p != q) {
        q_colour = (adj[0].size() == static_cast<std::size_t>(q + 1)) ? colour[0] : 1 - colour[0];
    }
    std::vector<int> relabel(n);
    std::size_t next = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (colour[v] == q_colour) relabel[v] = static_cast<int>(next++);
    std::size_t n_q = next;
    for (std::size_t v = 0; v < n; ++v)
        if (colour[v] != q_colour) relabel[v] = static_cast<int>(next++);

    BiregularGraph g;
    g.p = p;
    g.q = q;
    g.n_q = n_q;
    g.n_p = n - n_q;
    g.adj.assign(n, {});
    for (auto [u, w] : edges) {
        g.adj[static_cast<std::size_t>(relabel[static_cast<std::size_t>(u)])].push_back(
            relabel[static_cast<std::size_t>(w)]);
        g.adj[static_cast<std::size_t>(relabel[static_cast<std::size_t>(w)])].push_back(
            relabel[static_cast<std::size_t>(u)]);
    }
    g.validate();
    return g;
}

Eigen::MatrixXd bq_matrix(const BiregularGraph& g) {
    std::size_t n = g.n_q;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t v = 0; v < n; ++v)
        for (int w : g.adj[v])
            for (int x : g.adj[static_cast<std::size_t>(w)])
                m(v, static_cast<std::size_t>(x)) += 1.0;
    double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(g.p) * g.q));
    for (std::size_t v = 0; v < n; ++v) m(v, v) -= static_cast<double>(g.p + g.q);
    return m * scale;
}

EigenSystem eig(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<Eigen::MatrixXd> sn_matrices(const BiregularGraph& g, int n_max) {
    std::size_t n = g.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd deg(n);
    for (std::size_t v = 0; v < n; ++v) {
        for (int w : g.adj[v]) a(v, static_cast<std::size_t>(w)) = 1.0;
        deg(v) = static_cast<double>(g.adj[v].size());
    }
    double root_pq = std::sqrt(static_cast<double>(g.p) * g.q);

    std::vector<Eigen::MatrixXd> out;
    out.push_back(Eigen::MatrixXd::Identity(g.n_q, g.n_q));  // S_0
    if (n_max == 0) return out;

    // non-backtracking walk counts W_k: W_1 = A, W_2 = A^2 - D,
    // W_{k+1} = A W_k - (D - I) W_{k-1}.
    Eigen::MatrixXd w_prev = a;
    Eigen::MatrixXd w_cur = a * a;
    w_cur -= deg.asDiagonal().toDenseMatrix();
    out.push_back(w_cur.topLeftCorner(g.n_q, g.n_q) / root_pq);
    for (int k = 2; k < 2 * n_max; ++k) {
        Eigen::MatrixXd w_next = a * w_cur - (deg.asDiagonal().toDenseMatrix() -
                                              Eigen::MatrixXd::Identity(n, n)) *
                                                 w_prev;
        w_prev = std::move(w_cur);
        w_cur = std::move(w_next);
        if ((k + 1) % 2 == 0) {
            int half = (k + 1) / 2;
            out.push_back(w_cur.topLeftCorner(g.n_q, g.n_q) / std::pow(root_pq, half));
        }
    }
    return out;
}

Eigen::MatrixXd sn_matrix(const BiregularGraph& g, int n) {
    return sn_matrices(g, n).back();
}

double op_norm_1_inf(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double op_norm_2(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double interpolated_norm(double norm_1_inf, double norm_2, double r) {
    if (r < 1.0 || r >= 2.0) throw std::domain_error("interpolated_norm: r in [1,2) required");
    double t = 2.0 - 2.0 / r;  // 0 at r=1, ->1 at r=2
    return std::pow(norm_1_inf, 1.0 - t) * std::pow(norm_2, t);
}

double sn_norm(const BiregularGraph& g, int n, double r) {
    Eigen::MatrixXd s = sn_matrix(g, n);
    if (r == 1.0) return op_norm_1_inf(s);
    return interpolated_norm(op_norm_1_inf(s), op_norm_2(s), r);
}

std::pair<double, double> achieved_hypothesis_constants(const BiregularGraph& g, double r,
                                                        int window) {
    std::vector<Eigen::MatrixXd> mats = sn_matrices(g, window);
    double pq = static_cast<double>(g.p) * g.q;
    double c = 1.0;
    for (int n = 0; n <= window; ++n) {
        const Eigen::MatrixXd& s = mats[static_cast<std::size_t>(n)];
        double nrm = (r == 1.0) ? op_norm_1_inf(s)
                                : interpolated_norm(op_norm_1_inf(s), op_norm_2(s), r);
        c = std::max(c, nrm * std::pow(pq, 0.5 * n));
    }
    return {c, 0.5};
}

LaurentPoly fejer(long M) {
    LaurentPoly f;
    for (long j = -(M - 1); j <= M - 1; ++j)
        f.set(j, Scalar(Rational(M - std::labs(j), M)));
    return f;
}

double fejer_value(long M, double theta) {
    double s = std::sin(theta / 2.0);
    if (std::abs(s) < 1e-12) return static_cast<double>(M);
    double top = std::sin(M * theta / 2.0);
    return top * top / (s * s * M);
}

LaurentPoly tilde_f(long M, long d) {
    LaurentPoly f;
    for (long j = 2; j <= M - 1; ++j) {
        Scalar w(Rational(M - j, M));
        f.set(j * d, w);
        f.set(-j * d, w);
    }
    return f;
}

LaurentPoly u_t_laurent(long t) {
    LaurentPoly f;
    if (t < 0) {
        if (t == -1) return f;
        throw std::domain_error("u_t_laurent: t >= -1 required");
    }
    for (long j = -t; j <= t; j += 2) f.set(j, Scalar(1));
    return f;
}

LaurentPoly r_t_laurent(long t, const Scalar& b_inv) {
    return u_t_laurent(t) + u_t_laurent(t - 1) * b_inv;
}

LaurentPoly cheb1_via_r(long k, long l, const Scalar& b_inv) {
    Scalar one_minus_b2 = Scalar(1) - b_inv * b_inv;
    LaurentPoly acc = r_t_laurent(k, b_inv) - r_t_laurent(k - 1, b_inv) * b_inv;
    for (long j = 0; j <= l; ++j)
        acc -= r_t_laurent(k - 2 - j, b_inv) * (one_minus_b2 * (-b_inv).pow(j));
    acc -= u_t_laurent(k - 3 - l) * (one_minus_b2 * (-b_inv).pow(l + 1));
    return acc;
}

Scalar tilde_g_correction(long M, long d, const Scalar& b_inv) {
    Scalar acc(0);
    for (long c = 2; c <= M - 1; ++c)
        acc += Scalar(Rational(M - c, M)) * (-b_inv).pow((c - 1) * d + 1);
    return (Scalar(1) - b_inv * b_inv) * acc;
}

LaurentPoly tilde_g_direct(long M, long d, const Scalar& b_inv) {
    if (d < 4) throw std::domain_error("tilde_g: d >= 4 required");
    return tilde_f(M, d) + u_t_laurent(d - 3) * tilde_g_correction(M, d, b_inv);
}

LaurentPoly tilde_g_r_expansion(long M, long d, const Scalar& b_inv) {
    if (d < 4) throw std::domain_error("tilde_g: d >= 4 required");
    Scalar one_minus_b2 = Scalar(1) - b_inv * b_inv;
    LaurentPoly acc;
    for (long c = 2; c <= M - 1; ++c) {
        Scalar w(Rational(M - c, M));
        acc += r_t_laurent(c * d, b_inv) * w;
        acc -= r_t_laurent(c * d - 1, b_inv) * (w * b_inv);
        for (long j = 0; j <= (c - 1) * d; ++j)
            acc -= r_t_laurent(c * d - 2 - j, b_inv) * (w * one_minus_b2 * (-b_inv).pow(j));
    }
    return acc;
}

double KernelPoly::eval(double z) const {
    if (std::abs(z) <= 1.0) {
        double theta = std::acos(std::clamp(z, -1.0, 1.0));
        // T_{cd}(z) = T_c(w) with w = T_d(z): one table-free recurrence in c.
        double w = std::cos(d * theta);
        double t_prev = 1.0, t_cur = w;  // T_0(w), T_1(w)
        double acc = 0.0;
        for (long c = 2; c <= M - 1; ++c) {
            double t_next = 2.0 * w * t_cur - t_prev;
            t_prev = t_cur;
            t_cur = t_next;
            acc += 2.0 * static_cast<double>(M - c) / M * t_cur;
        }
        double st = std::sin(theta);
        double u;
        if (std::abs(st) > 1e-9) {
            u = std::sin((d - 2) * theta) / st;
        } else {
            u = (z > 0) ? static_cast<double>(d - 2)
                        : static_cast<double>(d - 2) * ((d - 3) % 2 == 0 ? 1.0 : -1.0);
        }
        return (acc + corr * u) / 4.0;
    }
    double eta = std::acosh(std::abs(z));
    if ((M - 1) * d * eta > 700.0) {
        return std::numeric_limits<double>::infinity();  // callers use the log form
    }
    double acc = 0.0;
    for (long c = 2; c <= M - 1; ++c)
        acc += 2.0 * static_cast<double>(M - c) / M * std::cosh(c * d * eta);
    double u = std::sinh((d - 2) * eta) / std::sinh(eta);
    if (z < 0) u = -u;  // d even: T_{cd} even, U_{d-3} odd
    return (acc + corr * u) / 4.0;
}

double KernelPoly::log_eval_untempered(double z) const {
    double eta = std::acosh(std::abs(z));
    double log_f = -std::numeric_limits<double>::infinity();
    for (long c = 2; c <= M - 1; ++c)
        log_f = log_sum_exp(log_f, std::log(2.0 * static_cast<double>(M - c) / M) +
                                       log_cosh(c * d * eta));
    double log_u = log_sinh((d - 2) * eta) - log_sinh(eta);
    double log_cu = (corr == 0.0) ? -std::numeric_limits<double>::infinity()
                                  : std::log(std::abs(corr)) + log_u;
    bool cu_positive = (corr < 0.0) == (z < 0.0);  // corr*U sign (d even)
    double log_k;
    if (corr == 0.0) {
        log_k = log_f;
    } else if (cu_positive) {
        log_k = log_sum_exp(log_f, log_cu);
    } else {
        if (log_cu >= log_f)
            throw std::domain_error("KernelPoly: correction dominates, kernel not positive");
        log_k = log_f + std::log1p(-std::exp(log_cu - log_f));
    }
    return log_k - std::log(4.0);
}

double calibrate_gamma(long M) {
    double target = static_cast<double>(M) / 2.0 + 4.0;
    for (double gamma = 0.5; gamma > 1e-4; gamma *= 0.9) {
        bool ok = true;
        for (int j = 0; j <= 999 && ok; ++j) {
            double theta = gamma / M * (static_cast<double>(j) / 999.0);
            if (fejer_value(M, theta) < target) ok = false;
        }
        if (ok) return gamma;
    }
    throw std::domain_error("calibrate_gamma: no admissible gamma (M too small)");
}

long find_d(double theta0, long M, double gamma, long N) {
    double c = gamma / (16.0 * kPi * M * M);
    long top = (N / M) & ~1L;
    for (long d = top; d >= 2; d -= 2) {
        if (static_cast<double>(d) < c * static_cast<double>(N)) break;
        double r = std::fmod(d * theta0, 2.0 * kPi);
        if (r < 0) r += 2.0 * kPi;
        double dist = std::min(r, 2.0 * kPi - r);
        if (dist <= gamma / M) return d;
    }
    throw NTooSmall("find_d: no even d <= N/M approximates theta0 well enough");
}

KernelPoly build_k(double lambda, long N, double eps, long p, long q) {
    if (q <= p) throw GraphError("build_k: q > p required (b^-1 < 1)");
    if (eps <= 0 || eps >= 1) throw std::domain_error("build_k: eps in (0,1) required");

    long m_paper = static_cast<long>(std::ceil(128.0 / eps));
    long m_min = static_cast<long>(std::ceil(8.0 / eps));
    if (m_min % 2) ++m_min;
    long M = std::min({m_paper, 64L, N / 4});
    M &= ~1L;
    if (M < std::max(m_min, 16L))
        throw NTooSmall("build_k: N too small to fit an adequate Fejer order");

    double gamma = calibrate_gamma(M);
    bool untempered = std::abs(lambda) > 1.0;
    double theta0 = untempered ? 0.0 : std::acos(std::clamp(lambda, -1.0, 1.0));
    long d = find_d(theta0, M, gamma, N);
    if (d < 4) throw NTooSmall("build_k: admissible d is below 4");

    double b_inv = std::sqrt(static_cast<double>(p) / q);
    double corr = 0.0;
    for (long c = 2; c <= M - 1; ++c)
        corr += static_cast<double>(M - c) / M * std::pow(-b_inv, (c - 1) * d + 1);
    corr *= (1.0 - b_inv * b_inv);

    KernelPoly k;
    k.M = M;
    k.d = d;
    k.N = N;
    k.lambda = lambda;
    k.eps = eps;
    k.gamma = gamma;
    k.corr = corr;
    k.untempered_fallback = untempered;
    return k;
}

KernelPropertyReport kernel_properties(const KernelPoly& k, const Eigen::VectorXd& spectrum) {
    KernelPropertyReport rep;
    rep.degree_ok = k.degree() <= k.N;

    double inv_eps = 1.0 / k.eps;
    if (k.untempered_fallback) {
        rep.value_at_lambda_ok = k.log_eval_untempered(k.lambda) >= std::log(inv_eps);
    } else {
        rep.value_at_lambda_ok = k.eval(k.lambda) >= inv_eps;
    }

    bool min_ok = true;
    for (int i = 0; i < spectrum.size() && min_ok; ++i) {
        double mu = spectrum(i);
        if (std::abs(mu) <= 1.0) {
            if (k.eval(mu) < -1.0 - 1e-9) min_ok = false;
        } else {
            // positive by the log form; computing it validates positivity
            (void)k.log_eval_untempered(mu);
        }
    }
    for (int i = 0; i <= 10000 && min_ok; ++i) {
        double z = -1.0 + 2.0 * i / 10000.0;
        if (k.eval(z) < -1.0 - 1e-9) min_ok = false;
    }
    rep.min_ok = min_ok;
    return rep;
}

std::vector<double> sn_norm_table(const BiregularGraph& g, double r, int window) {
    std::vector<Eigen::MatrixXd> mats = sn_matrices(g, window);
    std::vector<double> out;
    out.reserve(mats.size());
    for (const Eigen::MatrixXd& s : mats)
        out.push_back((r == 1.0) ? op_norm_1_inf(s)
                                 : interpolated_norm(op_norm_1_inf(s), op_norm_2(s), r));
    return out;
}

NormReport verify_k(const BiregularGraph& g, const EigenSystem& es, const KernelPoly& k,
                    double r, double c_hyp, double alpha, int hyp_window,
                    const std::vector<double>* sn_norms) {
    NormReport rep;
    double pq = static_cast<double>(g.p) * g.q;
    double lpq = std::log(pq);

    // hypothesis check over the window
    int window = std::min<long>(hyp_window, k.M * k.d);
    rep.checked_up_to = window;
    rep.hypothesis_ok = true;
    rep.first_violation_n = -1;
    std::vector<double> local;
    if (!sn_norms) {
        local = sn_norm_table(g, r, window);
        sn_norms = &local;
    }
    for (int n = 0; n <= window && n < static_cast<int>(sn_norms->size()); ++n) {
        if ((*sn_norms)[static_cast<std::size_t>(n)] >
            c_hyp * std::pow(pq, -alpha * n) * (1.0 + 1e-12)) {
            rep.hypothesis_ok = false;
            if (rep.first_violation_n < 0) rep.first_violation_n = n;
        }
    }

    // triangle-inequality chain: ||K(B_q)|| <= (1/4) sum_t |c_t| bound_t with
    // bound_t = C (pq)^{-t/2} sum_{n<=t} (pq)^{(1/2-alpha)n} from the R_t
    // non-backtracking decomposition. Accumulated in log space.
    auto log_bound_t = [&](long t) {
        double base = std::log(c_hyp) - 0.5 * t * lpq;
        double expo = (0.5 - alpha) * lpq;
        if (std::abs(expo) < 1e-15) return base + std::log(static_cast<double>(t + 1));
        if (expo > 0)  // dominated by the top term
            return base + expo * (t + 1) - std::log1p(-std::exp(-expo));
        return base - std::log1p(-std::exp(expo));
    };
    double b_inv = std::sqrt(static_cast<double>(g.p) / g.q);
    double log_chain = -std::numeric_limits<double>::infinity();
    double log_1mb2 = std::log(1.0 - b_inv * b_inv);
    double log_binv = std::log(b_inv);
    for (long c = 2; c <= k.M - 1; ++c) {
        double lw = std::log(static_cast<double>(k.M - c) / k.M);
        log_chain = log_sum_exp(log_chain, lw + log_bound_t(c * k.d));
        log_chain = log_sum_exp(log_chain, lw + log_binv + log_bound_t(c * k.d - 1));
        // the geometric j-sum: |coef_j| = w (1-b^-2) b_inv^j at t = cd-2-j
        for (long j = 0; j <= (c - 1) * k.d; ++j) {
            long t = c * k.d - 2 - j;
            double term = lw + log_1mb2 + j * log_binv + log_bound_t(t);
            log_chain = log_sum_exp(log_chain, term);
            if (term < log_chain - 46.0) break;  // later terms cannot matter
        }
    }
    log_chain -= std::log(4.0);
    rep.log_b_chain = log_chain;
    rep.eta = -log_chain / (static_cast<double>(k.N) * lpq);

    // direct verified bound from the actual matrix in its eigenbasis
    const Eigen::VectorXd& mu = es.values;
    std::vector<double> log_abs_k(static_cast<std::size_t>(mu.size()));
    bool all_finite = true;
    double log_n22 = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < mu.size(); ++i) {
        double la;
        if (std::abs(mu(i)) <= 1.0) {
            la = std::log(std::abs(k.eval(mu(i))) + 1e-300);
        } else {
            la = k.log_eval_untempered(mu(i));
        }
        log_abs_k[static_cast<std::size_t>(i)] = la;
        if (la > 690.0) all_finite = false;
        log_n22 = std::max(log_n22, la);
    }

    double log_n1inf;
    {
        // always-valid upper bound: sum_i |K(mu_i)| max_v phi_i(v)^2
        double bound = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < mu.size(); ++i) {
            double m2 = es.vectors.col(i).cwiseAbs().maxCoeff();
            bound = log_sum_exp(bound, log_abs_k[static_cast<std::size_t>(i)] +
                                           2.0 * std::log(m2 + 1e-300));
        }
        log_n1inf = bound;
        if (all_finite) {
            Eigen::VectorXd kv(mu.size());
            for (int i = 0; i < mu.size(); ++i)
                kv(i) = std::abs(mu(i)) <= 1.0
                            ? k.eval(mu(i))
                            : std::copysign(std::exp(log_abs_k[static_cast<std::size_t>(i)]),
                                            1.0);
            Eigen::MatrixXd km = es.vectors * kv.asDiagonal() * es.vectors.transpose();
            double exact = km.cwiseAbs().maxCoeff();
            log_n1inf = std::min(log_n1inf, std::log(exact + 1e-300));
        }
    }
    double t = 2.0 - 2.0 / r;
    rep.log_beta_direct = (1.0 - t) * log_n1inf + t * log_n22;
    return rep;
}

Certificate certify(const BiregularGraph& g, const EigenSystem& es, const Eigen::VectorXd& phi,
                    double lambda, double eps, double r, double c_hyp, double alpha, long N,
                    int hyp_window, const std::vector<double>* sn_norms) {
    if (g.q <= g.p) throw GraphError("certify: q > p required");
    if (r < 1.0 || r >= 2.0) throw std::domain_error("certify: r in [1,2) required");

    Certificate cert;
    cert.graph_hash = g.hash();
    cert.lambda = lambda;
    cert.eps = eps;
    cert.r = r;
    cert.c_hyp = c_hyp;
    cert.alpha = alpha;
    cert.N = N;

    Eigen::MatrixXd b = bq_matrix(g);
    double res = (b * phi - lambda * phi).cwiseAbs().maxCoeff();
    double norm = phi.norm();
    cert.eig_ok = res <= 1e-8 && std::abs(norm - 1.0) <= 1e-8;
    if (!cert.eig_ok) throw GraphError("certify: (phi, lambda) is not a normalized eigenpair");

    KernelPoly k = build_k(lambda, N, eps, g.p, g.q);
    cert.M = k.M;
    cert.d = k.d;
    cert.gamma = k.gamma;

    KernelPropertyReport props = kernel_properties(k, es.values);
    cert.k_lambda_ok = props.value_at_lambda_ok && props.degree_ok;
    cert.k_min_ok = props.min_ok;

    NormReport nr = verify_k(g, es, k, r, c_hyp, alpha, hyp_window, sn_norms);
    cert.hyp_ok = nr.hypothesis_ok;
    cert.log_beta = nr.log_beta_direct;
    cert.log_b_chain = nr.log_b_chain;
    cert.eta = nr.eta;
    cert.norm_ok = std::isfinite(nr.log_beta_direct);

    cert.log_k_at_lambda = k.untempered_fallback
                               ? k.log_eval_untempered(lambda)
                               : std::log(std::max(k.eval(lambda), 1e-300));

    // spectral + Hoelder chain: every E with sum_E |phi|^2 > eps satisfies
    // |E|^{2/r - 1} >= ((K(lambda) + 1) eps - 1) / beta.
    double log_num;
    if (cert.log_k_at_lambda < 690.0) {
        double num = (std::exp(cert.log_k_at_lambda) + 1.0) * eps - 1.0;
        if (num <= 0.0) {
            cert.k_lambda_ok = false;
            num = 1e-300;
        }
        log_num = std::log(num);
    } else {
        // K huge: (K+1)eps - 1 >= K eps (1 - 1/(K eps)), sound lower bound
        double le = cert.log_k_at_lambda + std::log(eps);
        log_num = le + std::log1p(-std::exp(-le));
    }

    double exponent = r / (2.0 - r);
    double log_l = exponent * (log_num - cert.log_beta);
    if (cert.valid()) {
        double l = std::exp(std::min(log_l, 42.0));  // e^42 > any desk-scale graph
        cert.lower_bound = std::max<long>(1, static_cast<long>(std::ceil(l - 1e-12)));
    } else {
        cert.lower_bound = 0;
    }
    cert.log_l_hyp = exponent * (log_num - cert.log_b_chain);
    return cert;
}

}  // namespace treewave::deloc
