#ifndef XXZSOV_LAURENT_HPP
#define XXZSOV_LAURENT_HPP

#include <map>
#include <vector>

#include "xxzsov/common.hpp"

namespace xxzsov {

enum class Parity { even, odd, none };

// Complex Laurent polynomial with an optional parity constraint on the
// exponent support (enforced at construction, not inferred).
class LaurentPoly {
public:
    LaurentPoly() = default;
    explicit LaurentPoly(std::map<int, cplx> coeffs, Parity parity = Parity::none);

    static LaurentPoly constant(cplx c);
    static LaurentPoly monomial(int exponent, cplx c);

    cplx eval(cplx lambda) const;
    LaurentPoly derivative() const;

    const std::map<int, cplx>& coeffs() const { return coeffs_; }
    cplx coeff(int exponent) const;
    Parity parity() const { return parity_; }
    int min_exp() const;
    int max_exp() const;
    bool empty() const { return coeffs_.empty(); }

private:
    std::map<int, cplx> coeffs_;
    Parity parity_ = Parity::none;
};

// Recovers the coefficients on the given exponent support from point
// evaluations by solving the generalized Vandermonde system with the oracle
// LU. Throws ConditioningError (with a one-norm condition estimate) when the
// system is singular or extremely ill-conditioned.
LaurentPoly laurent_interpolate(const std::vector<cplx>& nodes,
                                const std::vector<cplx>& values,
                                const std::vector<int>& exponents,
                                Parity parity = Parity::none);

// Shared Vandermonde solve for interpolating many functions sampled at the
// same nodes: returns coefficient vectors column-by-column (one per input
// value set laid out as rows of `values`).
std::vector<std::vector<cplx>> laurent_interpolate_many(
    const std::vector<cplx>& nodes, const std::vector<std::vector<cplx>>& values,
    const std::vector<int>& exponents);

}  // namespace xxzsov

#endif
