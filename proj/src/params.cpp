#include "xxzsov/params.hpp"

#include <cmath>
#include <limits>

namespace xxzsov {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::massless: return "massless";
        case Regime::massive: return "massive";
        case Regime::generic: return "generic";
    }
    return "generic";
}

Regime regime_from_string(const std::string& s) {
    if (s == "massless") return Regime::massless;
    if (s == "massive") return Regime::massive;
    if (s == "generic") return Regime::generic;
    throw ConfigError("unknown regime '" + s + "'");
}

ModelParams::ModelParams(int n_sites, cplx q, std::vector<cplx> inhomogeneities,
                         Regime regime, double regime_tol)
    : n_(n_sites), q_(q), eta_(std::move(inhomogeneities)), regime_(regime) {
    if (n_ < 1) throw std::invalid_argument("ModelParams: n_sites must be >= 1");
    if (static_cast<int>(eta_.size()) != n_)
        throw std::invalid_argument("ModelParams: expected " + std::to_string(n_) +
                                    " inhomogeneities, got " + std::to_string(eta_.size()));
    if (q_ == cplx{} || std::abs(q_ - 1.0) < regime_tol || std::abs(q_ + 1.0) < regime_tol)
        throw std::invalid_argument("ModelParams: q must avoid {0, 1, -1}");
    for (const auto& e : eta_)
        if (e == cplx{}) throw std::invalid_argument("ModelParams: inhomogeneities must be nonzero");

    if (regime_ == Regime::massless) {
        if (std::abs(std::abs(q_) - 1.0) > regime_tol)
            throw std::invalid_argument("ModelParams: massless regime requires |q| = 1");
        for (const auto& e : eta_)
            if (std::abs(e.imag()) > regime_tol * std::abs(e))
                throw std::invalid_argument("ModelParams: massless regime requires real inhomogeneities");
    } else if (regime_ == Regime::massive) {
        if (std::abs(q_.imag()) > regime_tol || q_.real() <= 0.0)
            throw std::invalid_argument("ModelParams: massive regime requires q real positive");
        for (const auto& e : eta_)
            if (std::abs(std::abs(e) - 1.0) > regime_tol)
                throw std::invalid_argument("ModelParams: massive regime requires unimodular inhomogeneities");
    }
}

bool ModelParams::homogeneous(double rel_tol) const {
    for (const auto& e : eta_)
        if (std::abs(e - 1.0) > rel_tol) return false;
    return true;
}

SovCheck validate_sov_condition(const ModelParams& params, double rel_tol) {
    SovCheck out;
    out.margin = std::numeric_limits<double>::infinity();
    const auto& eta = params.inhomogeneities();
    const int n = params.n_sites();
    for (int a = 1; a <= n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
            for (int j = -1; j <= 1; ++j) {
                const cplx qa = std::pow(params.q(), j) * eta[static_cast<std::size_t>(a) - 1];
                const double gap = std::abs(qa - eta[static_cast<std::size_t>(b) - 1]) /
                                   std::abs(eta[static_cast<std::size_t>(b) - 1]);
                out.margin = std::min(out.margin, gap);
                if (gap <= rel_tol) {
                    out.ok = false;
                    out.violations.push_back({a, b, j});
                }
            }
        }
    }
    return out;
}

cplx eval_a(const ModelParams& params, cplx lambda) {
    if (lambda == cplx{}) throw std::domain_error("eval_a: lambda must be nonzero");
    cplx p = kSignA;
    const cplx lq = lambda * params.q();
    for (const auto& e : params.inhomogeneities()) p *= lq / e - e / lq;
    return p;
}

cplx eval_d(const ModelParams& params, cplx lambda) {
    if (lambda == cplx{}) throw std::domain_error("eval_d: lambda must be nonzero");
    cplx p = 1.0;
    for (const auto& e : params.inhomogeneities()) p *= lambda / e - e / lambda;
    return p;
}

}  // namespace xxzsov
