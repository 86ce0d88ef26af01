#include "xxzsov/laurent.hpp"

#include <cmath>
#include <cstdlib>

#include "xxzsov/oracle.hpp"

namespace xxzsov {

namespace {

bool exponent_fits(int e, Parity p) {
    switch (p) {
        case Parity::even: return e % 2 == 0;
        case Parity::odd: return std::abs(e % 2) == 1;
        case Parity::none: return true;
    }
    return true;
}

cplx int_pow(cplx x, int e) {
    if (e == 0) return 1.0;
    cplx base = e > 0 ? x : 1.0 / x;
    int n = std::abs(e);
    cplx r = 1.0;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

}  // namespace

LaurentPoly::LaurentPoly(std::map<int, cplx> coeffs, Parity parity)
    : coeffs_(std::move(coeffs)), parity_(parity) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second == cplx{}) {
            it = coeffs_.erase(it);
            continue;
        }
        if (!exponent_fits(it->first, parity_))
            throw std::invalid_argument("LaurentPoly: exponent " + std::to_string(it->first) +
                                        " violates the parity constraint");
        ++it;
    }
}

LaurentPoly LaurentPoly::constant(cplx c) {
    return LaurentPoly(std::map<int, cplx>{{0, c}}, Parity::even);
}

LaurentPoly LaurentPoly::monomial(int exponent, cplx c) {
    return LaurentPoly(std::map<int, cplx>{{exponent, c}},
                       exponent % 2 == 0 ? Parity::even : Parity::odd);
}

cplx LaurentPoly::eval(cplx lambda) const {
    if (lambda == cplx{} && !coeffs_.empty() && coeffs_.begin()->first < 0)
        throw std::domain_error("LaurentPoly: evaluation at 0 with negative exponents");
    cplx s = 0.0;
    for (const auto& [e, c] : coeffs_) s += c * int_pow(lambda, e);
    return s;
}

LaurentPoly LaurentPoly::derivative() const {
    std::map<int, cplx> d;
    for (const auto& [e, c] : coeffs_)
        if (e != 0) d[e - 1] = static_cast<double>(e) * c;
    Parity p = Parity::none;
    if (parity_ == Parity::even) p = Parity::odd;
    if (parity_ == Parity::odd) p = Parity::even;
    return LaurentPoly(std::move(d), p);
}

cplx LaurentPoly::coeff(int exponent) const {
    auto it = coeffs_.find(exponent);
    return it == coeffs_.end() ? cplx{} : it->second;
}

int LaurentPoly::min_exp() const {
    if (coeffs_.empty()) throw std::logic_error("LaurentPoly: empty polynomial");
    return coeffs_.begin()->first;
}

int LaurentPoly::max_exp() const {
    if (coeffs_.empty()) throw std::logic_error("LaurentPoly: empty polynomial");
    return coeffs_.rbegin()->first;
}

std::vector<std::vector<cplx>> laurent_interpolate_many(
    const std::vector<cplx>& nodes, const std::vector<std::vector<cplx>>& values,
    const std::vector<int>& exponents) {
    const std::size_t n = nodes.size();
    if (n != exponents.size())
        throw std::invalid_argument("laurent_interpolate: node/exponent count mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (nodes[i] == cplx{})
            throw std::invalid_argument("laurent_interpolate: nodes must be nonzero");
        for (std::size_t j = i + 1; j < n; ++j)
            if (nodes[i] == nodes[j])
                throw std::invalid_argument("laurent_interpolate: nodes must be distinct");
    }
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v(i, j) = int_pow(nodes[i], exponents[j]);

    LUFactorization lu = [&] {
        try {
            return LUFactorization::factor(v, 1e-16);
        } catch (const SingularMatrixError&) {
            // Refactor without the threshold to get a usable condition estimate.
            double cond = std::numeric_limits<double>::infinity();
            try {
                cond = LUFactorization::factor(v).condition_estimate();
            } catch (const SingularMatrixError&) {
            }
            throw ConditioningError("laurent_interpolate: generalized Vandermonde is singular", cond);
        }
    }();

    Matrix rhs(n, values.size());
    for (std::size_t c = 0; c < values.size(); ++c) {
        if (values[c].size() != n)
            throw std::invalid_argument("laurent_interpolate: value count mismatch");
        for (std::size_t i = 0; i < n; ++i) rhs(i, c) = values[c][i];
    }
    Matrix sol = lu.solve(rhs);
    std::vector<std::vector<cplx>> out(values.size(), std::vector<cplx>(n));
    for (std::size_t c = 0; c < values.size(); ++c)
        for (std::size_t j = 0; j < n; ++j) out[c][j] = sol(j, c);
    return out;
}

LaurentPoly laurent_interpolate(const std::vector<cplx>& nodes,
                                const std::vector<cplx>& values,
                                const std::vector<int>& exponents, Parity parity) {
    auto sol = laurent_interpolate_many(nodes, {values}, exponents);
    std::map<int, cplx> coeffs;
    for (std::size_t j = 0; j < exponents.size(); ++j) coeffs[exponents[j]] = sol[0][j];
    return LaurentPoly(std::move(coeffs), parity);
}

}  // namespace xxzsov
