#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "treewave/bitree.hpp"
#include "treewave/chebyshev.hpp"
#include "treewave/flatwave.hpp"
#include "treewave/io.hpp"
#include "treewave/regtree.hpp"

namespace tw = treewave;
using nlohmann::json;

namespace {

std::pair<long, long> parse_range(const std::string& text) {
    std::size_t colon = text.find(':', 1);
    if (colon == std::string::npos)
        throw CLI::ValidationError("range", "expected lo:hi, got " + text);
    return {std::stol(text.substr(0, colon)), std::stol(text.substr(colon + 1))};
}

json read_json_arg(const std::string& arg) {
    if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw std::runtime_error("cannot open " + arg);
    json j;
    in >> j;
    return j;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    return file;
}

tw::BasisPair basis_by_name(const std::string& name) {
    if (name == "std") return tw::standard_basis();
    if (name == "x")
        return tw::make_basis(tw::LaurentPoly::constant(tw::Scalar(1)),
                              tw::LaurentPoly::monomial(1));
    throw CLI::ValidationError("basis", "unknown basis " + name + " (std | x)");
}

int thread_count() {
    if (const char* env = std::getenv("TREEWAVE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

tw::cheb::ChebFamily family_by_name(const std::string& name, long p, long q,
                                    const std::string& b_inv) {
    using tw::cheb::FamilyKind;
    if (name == "T") return tw::cheb::special_family(FamilyKind::T);
    if (name == "U") return tw::cheb::special_family(FamilyKind::U);
    if (name == "V") return tw::cheb::special_family(FamilyKind::V);
    if (name == "W") return tw::cheb::special_family(FamilyKind::W);
    if (name == "F") return tw::cheb::special_family(FamilyKind::F, 1, q);
    if (name == "H") return tw::cheb::special_family(FamilyKind::H, p, q);
    if (name == "R") return tw::cheb::special_family(FamilyKind::R, p, q);
    if (name == "MP") return tw::cheb::mp_family(tw::io::scalar_from_string(b_inv));
    throw CLI::ValidationError("family", "unknown family " + name);
}

int run_wave_z(const std::string& basis, const std::string& f_arg, const std::string& g_arg,
               const std::string& range, const std::string& out_path) {
    tw::BasisPair bp = basis_by_name(basis);
    tw::flat::ZFunction f = tw::io::zfunction_from_json(read_json_arg(f_arg));
    tw::flat::ZFunction g = tw::io::zfunction_from_json(read_json_arg(g_arg));
    auto [lo, hi] = parse_range(range);
    tw::flat::WaveGrid grid = tw::flat::solve(bp, f, g, lo, hi);

    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "n,t,value\n";
    for (long t = lo; t <= hi; ++t)
        for (const auto& [n, v] : grid.slice(t).coeffs())
            out << n << "," << t << "," << tw::io::scalar_to_string(v) << "\n";
    return 0;
}

json slices_to_json(long t_lo, long t_hi,
                    const std::function<const std::vector<tw::Scalar>&(long)>& slice) {
    json slices = json::object();
    for (long t = t_lo; t <= t_hi; ++t) {
        json one = json::object();
        const auto& s = slice(t);
        for (std::size_t v = 0; v < s.size(); ++v)
            if (!s[v].is_zero()) one[std::to_string(v)] = tw::io::scalar_to_string(s[v]);
        slices[std::to_string(t)] = std::move(one);
    }
    return slices;
}

std::vector<tw::Scalar> vertex_fn_from_json(const json& j, std::size_t size) {
    std::vector<tw::Scalar> f(size, tw::Scalar(0));
    for (const auto& [key, val] : j.items()) {
        std::size_t v = std::stoul(key);
        if (v >= size) throw std::runtime_error("vertex index " + key + " outside the ball");
        f[v] = tw::io::scalar_from_json(val);
    }
    return f;
}

int run_wave_tree(long q, int radius, const std::string& init, const std::string& g1_arg,
                  const std::string& g2_arg, const std::string& range,
                  const std::string& out_path) {
    tw::BasisPair bp = basis_by_name(init);
    tw::tree::TreeBall ball(q, radius);
    tw::tree::VertexFn g1 = g1_arg.empty()
                                ? tw::tree::VertexFn(ball.size(), tw::Scalar(0))
                                : vertex_fn_from_json(read_json_arg(g1_arg), ball.size());
    tw::tree::VertexFn g2 = g2_arg.empty()
                                ? tw::tree::VertexFn(ball.size(), tw::Scalar(0))
                                : vertex_fn_from_json(read_json_arg(g2_arg), ball.size());
    auto [lo, hi] = parse_range(range);
    tw::tree::TreeWaveSeries s = tw::tree::wave_solve(ball, bp, g1, g2, lo, hi);

    json out = {{"q", q},
                {"radius", radius},
                {"t_lo", lo},
                {"t_hi", hi},
                {"slices", slices_to_json(lo, hi, [&](long t) -> const std::vector<tw::Scalar>& {
                     return s.at(t);
                 })}};
    std::ofstream file;
    open_out(file, out_path) << out.dump(1) << "\n";
    return 0;
}

int run_wave_bitree(long p, long q, int radius, const std::string& init,
                    const std::string& g1_arg, const std::string& g2_arg,
                    const std::string& range, const std::string& out_path) {
    tw::BasisPair bp = basis_by_name(init);
    tw::bitree::BiTreeBall ball(p, q, radius);
    tw::tree::VertexFn g1 = g1_arg.empty()
                                ? tw::tree::VertexFn(ball.size(), tw::Scalar(0))
                                : vertex_fn_from_json(read_json_arg(g1_arg), ball.size());
    tw::tree::VertexFn g2 = g2_arg.empty()
                                ? tw::tree::VertexFn(ball.size(), tw::Scalar(0))
                                : vertex_fn_from_json(read_json_arg(g2_arg), ball.size());
    auto [lo, hi] = parse_range(range);
    tw::bitree::BiWaveSeries s = tw::bitree::wave_solve_bi(ball, bp, g1, g2, lo, hi);

    json out = {{"p", p},
                {"q", q},
                {"radius", radius},
                {"t_lo", lo},
                {"t_hi", hi},
                {"slices", slices_to_json(lo, hi, [&](long t) -> const std::vector<tw::Scalar>& {
                     return s.at(t);
                 })}};
    std::ofstream file;
    open_out(file, out_path) << out.dump(1) << "\n";
    return 0;
}

int run_cheb_table(const std::string& family, long p, long q, const std::string& b_inv,
                   long t_max, const std::string& out_path) {
    tw::cheb::ChebFamily fam = family_by_name(family, p, q, b_inv);
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "t,k,coeff\n";
    for (long t = 0; t <= t_max; ++t) {
        tw::Poly c = fam.cheb(t);
        for (long k = 0; k <= c.degree(); ++k)
            out << t << "," << k << "," << tw::io::scalar_to_string(c.coeff(k)) << "\n";
    }
    return 0;
}

int run_ortho_check(const std::string& family, long p, long q, const std::string& b_inv,
                    long kmax, int nodes) {
    tw::cheb::ChebFamily fam = family_by_name(family, p, q, b_inv);
    tw::cheb::SpectralMeasure mu = tw::cheb::ortho_measure(fam);

    std::vector<std::pair<long, long>> pairs;
    for (long k = 0; k <= kmax; ++k)
        for (long n = k + 1; n <= kmax; ++n) pairs.emplace_back(k, n);
    for (long t = 0; t <= kmax; ++t) fam.cheb(t);  // warm the cache before threading

    int workers = std::min<int>(thread_count(), static_cast<int>(pairs.size()));
    std::vector<double> worst(static_cast<std::size_t>(std::max(workers, 1)), 0.0);
    auto work = [&](int w) {
        for (std::size_t i = static_cast<std::size_t>(w); i < pairs.size();
             i += static_cast<std::size_t>(workers)) {
            auto [k, n] = pairs[i];
            double v = std::abs(tw::cheb::quad_inner(fam.cheb(k), fam.cheb(n), mu, nodes));
            worst[static_cast<std::size_t>(w)] = std::max(worst[static_cast<std::size_t>(w)], v);
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }
    double max_off = *std::max_element(worst.begin(), worst.end());
    double diag = tw::cheb::quad_inner(fam.cheb(1), fam.cheb(1), mu, nodes);
    std::cout << "family " << family << ": max |<f_k, f_n>| = " << max_off
              << " over k != n <= " << kmax << ", <f_1, f_1> = " << diag << "\n";
    bool ok = max_off < 1e-8 && diag > 0.0;
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

int run_scatter(long q, int depth, const std::string& state_arg, int nodes,
                const std::string& report_path) {
    tw::tree::TreeBall ball(q, depth + 1);
    json state = read_json_arg(state_arg);
    tw::tree::VertexFn f1 = vertex_fn_from_json(state.value("f1", json::object()), ball.size());
    tw::tree::VertexFn f2 = vertex_fn_from_json(state.value("f2", json::object()), ball.size());

    tw::tree::CylinderSet cyls(ball, depth);
    tw::tree::BoundaryField field = tw::tree::t_plus(ball, cyls, f1, f2, nodes);
    double norm2 = tw::tree::field_norm2(q, cyls, field);
    double energy = tw::tree::energy_form(ball, f1, f2, f1, f2).to_double();

    json values = json::array();
    for (int j = 0; j < nodes; ++j) {
        json row = json::array();
        for (std::size_t c = 0; c < cyls.count(); ++c)
            row.push_back({field.at(j, c).real(), field.at(j, c).imag()});
        values.push_back(std::move(row));
    }
    json report = {{"q", q},
                   {"depth", depth},
                   {"nodes", nodes},
                   {"energy_form", energy},
                   {"t_plus_norm2", norm2},
                   {"isometry_residual", std::abs(norm2 - energy)},
                   {"t_plus", std::move(values)}};
    std::ofstream file;
    open_out(file, report_path) << report.dump() << "\n";
    return 0;
}

int run_gen_graph(std::size_t nq, long p, long q, std::uint64_t seed,
                  const std::string& out_path) {
    tw::deloc::BiregularGraph g = tw::deloc::gen_biregular(nq, p, q, seed);
    std::ofstream file;
    tw::deloc::save_graph(open_out(file, out_path), g);
    return 0;
}

int run_deloc_certify(const std::string& graph_path, double eps, double r, long n_param,
                      long index, int window, double c_hyp, double alpha,
                      const std::string& out_path) {
    std::ifstream in(graph_path);
    if (!in) throw std::runtime_error("cannot open " + graph_path);
    tw::deloc::BiregularGraph g = tw::deloc::load_graph(in);
    tw::deloc::EigenSystem es = tw::deloc::eig(tw::deloc::bq_matrix(g));

    if (c_hyp <= 0.0) {
        auto [c_ach, a_ach] = tw::deloc::achieved_hypothesis_constants(g, r, window);
        c_hyp = c_ach;
        alpha = a_ach;
    }
    long i = (index < 0) ? es.values.size() - 1 : index;
    if (i < 0 || i >= es.values.size()) throw std::runtime_error("eigenpair index out of range");

    tw::deloc::Certificate cert = tw::deloc::certify(g, es, es.vectors.col(i), es.values(i),
                                                     eps, r, c_hyp, alpha, n_param, window);
    std::ofstream file;
    open_out(file, out_path) << tw::io::certificate_to_json(cert).dump(1) << "\n";
    if (!cert.hyp_ok) return 2;
    return cert.valid() ? 0 : 1;
}

int run_selftest() {
    int passed = 0, total = 0;
    auto check = [&](bool ok, const std::string& what) {
        ++total;
        if (ok)
            ++passed;
        else
            std::cout << "FAIL " << what << "\n";
    };

    using namespace tw;
    BasisPair sb = standard_basis();
    check(gram_det(sb.h1, sb.h2).poly() == LaurentPoly::constant(Scalar(-1)),
          "standard Gram determinant");
    auto [m1, m2] = dual_basis(LaurentPoly::constant(Scalar(1)), LaurentPoly::monomial(1));
    check(m1 == -LaurentPoly::monomial(-1) && m2 == LaurentPoly::constant(Scalar(1)),
          "dual basis of (1, x)");

    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    std::uniform_int_distribution<long> deg(-5, 5);
    for (int i = 0; i < 50; ++i) {
        LaurentPoly c;
        for (int t = 0; t < 4; ++t) c.add_to(deg(rng), Scalar(Rational(num(rng), den(rng))));
        auto [a1, a2] = decompose(c, sb);
        check(a1.poly() * sb.h1 + a2.poly() * sb.h2 == c, "decompose/recombine");
    }

    flat::WaveGrid grid = flat::solve(sb, LaurentPoly::monomial(0), flat::ZFunction(), -12, 12);
    check(grid.residual_is_zero(), "flat residual");
    check(flat::energy(grid, 0) == flat::energy(grid, 9), "flat energy conservation");

    for (auto kind : {cheb::FamilyKind::T, cheb::FamilyKind::U, cheb::FamilyKind::F,
                      cheb::FamilyKind::H}) {
        cheb::ChebFamily fam = cheb::special_family(kind, 2, 3);
        LaurentPoly diff = LaurentPoly::monomial(1) - LaurentPoly::monomial(-1);
        for (long t = 0; t <= 20; t += 5) {
            LaurentPoly numr = fam.h().shifted(t);
            numr -= numr.w0();
            check(poly_to_sym(fam.cheb(t)).poly() * diff == numr, "Chebyshev defining identity");
        }
    }

    Scalar b_inv(Rational(1, 2));
    for (long k = 3; k <= 12; ++k)
        check(deloc::cheb1_via_r(k, k - 3, b_inv) ==
                  LaurentPoly::monomial(k) + LaurentPoly::monomial(-k),
              "power-sum R expansion");
    check(deloc::tilde_g_direct(6, 6, b_inv) == deloc::tilde_g_r_expansion(6, 6, b_inv),
          "kernel construction routes agree");

    std::cout << "selftest: " << passed << "/" << total << " checks passed\n";
    return passed == total ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete wave equations on Z, regular and biregular trees"};
    app.require_subcommand(1);

    // wave-z
    std::string wz_basis = "std", wz_f = "{}", wz_g = "{}", wz_range = "-10:10", wz_out;
    auto* wz = app.add_subcommand("wave-z", "flat wave equation solver");
    wz->add_option("--basis", wz_basis, "initial-condition basis (std | x)");
    wz->add_option("--f", wz_f, "first datum (inline JSON or file)");
    wz->add_option("--g", wz_g, "second datum (inline JSON or file)");
    wz->add_option("--t", wz_range, "time range lo:hi");
    wz->add_option("--out", wz_out, "output CSV (default stdout)");

    // wave-tree
    long wt_q = 2;
    int wt_radius = 8;
    std::string wt_init = "std", wt_g1, wt_g2, wt_range = "0:4", wt_out;
    auto* wt = app.add_subcommand("wave-tree", "wave equation on the (q+1)-regular tree");
    wt->add_option("--q", wt_q, "branching parameter")->required();
    wt->add_option("--radius", wt_radius, "ball radius")->required();
    wt->add_option("--init", wt_init, "basis (std | x)");
    wt->add_option("--g1", wt_g1, "first datum (vertex map JSON or file)");
    wt->add_option("--g2", wt_g2, "second datum");
    wt->add_option("--t", wt_range, "time range lo:hi");
    wt->add_option("--out", wt_out, "output JSON (default stdout)");

    // wave-bitree
    long wb_p = 2, wb_q = 3;
    int wb_radius = 10;
    std::string wb_init = "std", wb_g1, wb_g2, wb_range = "0:3", wb_out;
    auto* wb = app.add_subcommand("wave-bitree", "wave equation on the biregular tree");
    wb->add_option("--p", wb_p)->required();
    wb->add_option("--q", wb_q)->required();
    wb->add_option("--radius", wb_radius)->required();
    wb->add_option("--init", wb_init, "basis (std | x)");
    wb->add_option("--g1", wb_g1);
    wb->add_option("--g2", wb_g2);
    wb->add_option("--t", wb_range);
    wb->add_option("--out", wb_out);

    // cheb-table
    std::string ct_family = "T", ct_binv = "1/2", ct_out;
    long ct_p = 2, ct_q = 3, ct_tmax = 12;
    auto* ct = app.add_subcommand("cheb-table", "coefficients of a Chebyshev family");
    ct->add_option("--family", ct_family, "T U V W F H R MP")->required();
    ct->add_option("--p", ct_p);
    ct->add_option("--q", ct_q);
    ct->add_option("--b-inv", ct_binv, "b^-1 for the MP family");
    ct->add_option("--t-max", ct_tmax);
    ct->add_option("--out", ct_out);

    // ortho-check
    std::string oc_family = "T", oc_binv = "1/2";
    long oc_p = 2, oc_q = 3, oc_kmax = 12;
    int oc_nodes = 4096;
    auto* oc = app.add_subcommand("ortho-check", "quadrature orthogonality check");
    oc->add_option("--family", oc_family)->required();
    oc->add_option("--p", oc_p);
    oc->add_option("--q", oc_q);
    oc->add_option("--b-inv", oc_binv);
    oc->add_option("--kmax", oc_kmax);
    oc->add_option("--nodes", oc_nodes);

    // scatter
    long sc_q = 2;
    int sc_depth = 4, sc_nodes = 2048;
    std::string sc_state, sc_report;
    auto* sc = app.add_subcommand("scatter", "outgoing translation representation");
    sc->add_option("--q", sc_q)->required();
    sc->add_option("--depth", sc_depth, "cylinder depth")->required();
    sc->add_option("--state", sc_state, "state JSON {\"f1\":{...},\"f2\":{...}}")->required();
    sc->add_option("--nodes", sc_nodes);
    sc->add_option("--report", sc_report, "report JSON (default stdout)");

    // deloc-certify
    std::string dc_graph, dc_out;
    double dc_eps = 0.25, dc_r = 1.0, dc_c = -1.0, dc_alpha = 0.5;
    long dc_n = 400, dc_index = -1;
    int dc_window = 8;
    auto* dc = app.add_subcommand("deloc-certify", "delocalization certificate");
    dc->add_option("--graph", dc_graph)->required();
    dc->add_option("--eps", dc_eps);
    dc->add_option("--r", dc_r);
    dc->add_option("--N", dc_n);
    dc->add_option("--index", dc_index, "eigenpair index (default: top)");
    dc->add_option("--window", dc_window, "hypothesis check window");
    dc->add_option("--C", dc_c, "hypothesis constant (default: achieved)");
    dc->add_option("--alpha", dc_alpha, "hypothesis exponent");
    dc->add_option("--out", dc_out);

    // gen-graph
    std::size_t gg_nq = 40;
    long gg_p = 2, gg_q = 3;
    std::uint64_t gg_seed = 1;
    std::string gg_out;
    auto* gg = app.add_subcommand("gen-graph", "random biregular graph (configuration model)");
    gg->add_option("--nq", gg_nq)->required();
    gg->add_option("--p", gg_p)->required();
    gg->add_option("--q", gg_q)->required();
    gg->add_option("--seed", gg_seed)->required();
    gg->add_option("--out", gg_out);

    auto* st = app.add_subcommand("selftest", "run the exact-identity suite");
    (void)st;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    }

    try {
        if (wz->parsed()) return run_wave_z(wz_basis, wz_f, wz_g, wz_range, wz_out);
        if (wt->parsed())
            return run_wave_tree(wt_q, wt_radius, wt_init, wt_g1, wt_g2, wt_range, wt_out);
        if (wb->parsed())
            return run_wave_bitree(wb_p, wb_q, wb_radius, wb_init, wb_g1, wb_g2, wb_range,
                                   wb_out);
        if (ct->parsed()) return run_cheb_table(ct_family, ct_p, ct_q, ct_binv, ct_tmax, ct_out);
        if (oc->parsed())
            return run_ortho_check(oc_family, oc_p, oc_q, oc_binv, oc_kmax, oc_nodes);
        if (sc->parsed()) return run_scatter(sc_q, sc_depth, sc_state, sc_nodes, sc_report);
        if (dc->parsed())
            return run_deloc_certify(dc_graph, dc_eps, dc_r, dc_n, dc_index, dc_window, dc_c,
                                     dc_alpha, dc_out);
        if (gg->parsed()) return run_gen_graph(gg_nq, gg_p, gg_q, gg_seed, gg_out);
        if (st->parsed()) return run_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
