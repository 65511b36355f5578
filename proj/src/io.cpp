#include "treewave/io.hpp"

#include <charconv>
#include <sstream>

namespace treewave::io {

namespace {

std::string rat_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

Rational rat_from_string(const std::string& s) {
    std::size_t slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

std::string double_str(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace

json scalar_to_json(const Scalar& s) {
    switch (s.kind()) {
        case Scalar::Kind::Rat: {
            const Rational& r = s.rat();
            return json{{"kind", "rat"},
                        {"num", boost::multiprecision::numerator(r).str()},
                        {"den", boost::multiprecision::denominator(r).str()}};
        }
        case Scalar::Kind::Quad: {
            const QuadExt& x = s.quad();
            return json{{"kind", "quad"}, {"p", x.p()},          {"q", x.q()},
                        {"a", rat_str(x.a())}, {"b", rat_str(x.b())}, {"c", rat_str(x.c())},
                        {"d", rat_str(x.d())}};
        }
        case Scalar::Kind::F64:
            return json{{"kind", "f64"}, {"value", s.f64()}};
    }
    return json();
}

Scalar scalar_from_json(const json& j) {
    if (j.is_number_integer()) return Scalar(Rational(j.get<long long>()));
    if (j.is_number_float()) return Scalar(j.get<double>());
    if (j.is_string()) return scalar_from_string(j.get<std::string>());
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "rat")
        return Scalar(Rational(BigInt(j.at("num").get<std::string>()),
                               BigInt(j.at("den").get<std::string>())));
    if (kind == "quad")
        return Scalar(QuadExt(j.at("p").get<long>(), j.at("q").get<long>(),
                              rat_from_string(j.at("a").get<std::string>()),
                              rat_from_string(j.at("b").get<std::string>()),
                              rat_from_string(j.at("c").get<std::string>()),
                              rat_from_string(j.at("d").get<std::string>())));
    if (kind == "f64") return Scalar(j.at("value").get<double>());
    throw std::domain_error("scalar_from_json: unknown kind " + kind);
}

std::string scalar_to_string(const Scalar& s) {
    switch (s.kind()) {
        case Scalar::Kind::Rat: return rat_str(s.rat());
        case Scalar::Kind::Quad: return s.quad().str();
        case Scalar::Kind::F64: return double_str(s.f64());
    }
    return "0";
}

Scalar scalar_from_string(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw std::domain_error("scalar_from_string: empty");
    if (t.find('.') != std::string::npos || t.find('e') != std::string::npos ||
        t.find("inf") != std::string::npos) {
        return Scalar(std::stod(t));
    }

    // split into signed terms; '-' inside a term only occurs as leading sign
    std::vector<std::string> terms;
    std::string cur;
    for (std::size_t i = 0; i < t.size(); ++i) {
        char c = t[i];
        if ((c == '+' || c == '-') && i > 0 && t[i - 1] != '/' && !cur.empty()) {
            terms.push_back(cur);
            cur.clear();
        }
        if (!(c == '+' && cur.empty())) cur += c;
    }
    if (!cur.empty()) terms.push_back(cur);

    Rational a(0);
    std::map<long, Rational> radicals;
    const std::string root = "√";
    for (std::string term : terms) {
        std::size_t rpos = term.find(root);
        if (rpos == std::string::npos) {
            a += rat_from_string(term);
            continue;
        }
        long n = std::stol(term.substr(rpos + root.size()));
        std::string coeff = term.substr(0, rpos);
        Rational c(1);
        if (coeff == "-")
            c = -1;
        else if (!coeff.empty())
            c = rat_from_string(coeff);
        radicals[n] += c;
    }
    for (auto it = radicals.begin(); it != radicals.end();) {
        if (it->second == 0)
            it = radicals.erase(it);
        else
            ++it;
    }
    if (radicals.empty()) return Scalar(a);
    if (radicals.size() == 1) {
        auto [n, c] = *radicals.begin();
        return Scalar(QuadExt(1, n, a, Rational(0), c, Rational(0)));
    }
    if (radicals.size() > 3) throw std::domain_error("scalar_from_string: too many radicals");
    // two or three radicals: sort, smallest is sqrt(p), next sqrt(q); a third
    // must be sqrt(pq).
    auto it = radicals.begin();
    long p = it->first;
    Rational b = it->second;
    ++it;
    long q = it->first;
    Rational c = it->second;
    Rational d(0);
    ++it;
    if (it != radicals.end()) {
        if (it->first != p * q)
            throw std::domain_error("scalar_from_string: radicals are not {p, q, pq}");
        d = it->second;
    }
    return Scalar(QuadExt(p, q, a, b, c, d));
}

json laurent_to_json(const LaurentPoly& f) {
    json coeffs = json::object();
    for (const auto& [k, v] : f.coeffs()) coeffs[std::to_string(k)] = scalar_to_json(v);
    return json{{"coeffs", coeffs}};
}

LaurentPoly laurent_from_json(const json& j) {
    LaurentPoly f;
    for (const auto& [key, val] : j.at("coeffs").items())
        f.set(std::stol(key), scalar_from_json(val));
    return f;
}

json zfunction_to_json(const LaurentPoly& f) {
    json out = json::object();
    for (const auto& [k, v] : f.coeffs()) out[std::to_string(k)] = scalar_to_json(v);
    return out;
}

LaurentPoly zfunction_from_json(const json& j) {
    LaurentPoly f;
    for (const auto& [key, val] : j.items()) f.set(std::stol(key), scalar_from_json(val));
    return f;
}

json certificate_to_json(const deloc::Certificate& cert) {
    return json{{"graph_hash", cert.graph_hash},
                {"lambda", cert.lambda},
                {"eps", cert.eps},
                {"r", cert.r},
                {"C", cert.c_hyp},
                {"alpha", cert.alpha},
                {"N", cert.N},
                {"M", cert.M},
                {"d", cert.d},
                {"gamma", cert.gamma},
                {"log_k_at_lambda", cert.log_k_at_lambda},
                {"log_norm_bound", cert.log_beta},
                {"log_chain_bound", cert.log_b_chain},
                {"eta", cert.eta},
                {"lower_bound", cert.lower_bound},
                {"log_lower_bound_hypothetical", cert.log_l_hyp},
                {"steps",
                 {{"eigenpair", cert.eig_ok},
                  {"kernel_value_at_lambda", cert.k_lambda_ok},
                  {"kernel_min", cert.k_min_ok},
                  {"hypothesis", cert.hyp_ok},
                  {"norm_bound", cert.norm_ok}}},
                {"valid", cert.valid()}};
}

}  // namespace treewave::io
