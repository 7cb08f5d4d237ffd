// Precision-escalation ladder: re-evaluate a quantity at geometrically growing
// decimal precision until two successive rungs agree, so near-singular results
// are only trusted once they are stable against further precision increases.
#ifndef TACHYON_PRECISION_HPP
#define TACHYON_PRECISION_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tachyon/big_real.hpp"

namespace tachyon {

// Base for recoverable evaluation failures; the ladder retries these at the
// next rung instead of aborting.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when the ladder cannot produce any value at all.
class NonEvaluableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PrecisionPolicy {
    int start_digits = 50;
    double growth_factor = 2.0;
    double agreement_tol = 1e-10;
    int max_digits = 1600;

    void validate() const {
        if (start_digits < BigReal::min_digits)
            throw std::invalid_argument("PrecisionPolicy: start_digits must be >= 15");
        if (max_digits < start_digits)
            throw std::invalid_argument("PrecisionPolicy: max_digits must be >= start_digits");
        if (!(growth_factor > 1.0))
            throw std::invalid_argument("PrecisionPolicy: growth_factor must be > 1");
        if (!(agreement_tol > 0.0 && agreement_tol < 1.0))
            throw std::invalid_argument("PrecisionPolicy: agreement_tol must be in (0,1)");
    }

    int next_rung(int digits) const {
        int n = static_cast<int>(std::ceil(digits * growth_factor));
        if (n <= digits) n = digits + 1;
        return std::min(n, max_digits);
    }
};

// Agreement test: relative when the reference is not absurdly small, absolute
// below 10^-300 to avoid division blow-ups at near-zero values.
inline bool values_agree(const BigReal& a, const BigReal& b, double tol) {
    const BigReal t = BigReal::from_double(tol, BigReal::min_digits);
    const BigReal tiny = BigReal::pow10(-300);
    const BigReal diff = abs(a - b);
    const BigReal mag = abs(b);
    if (mag > tiny) return diff <= t * mag;
    return diff <= t;
}

template <typename T>
struct Escalated {
    T value;
    bool converged = false;
    int digits_used = 0;
};

// Generic ladder over any value type given an agreement predicate.
// Returns the first rung whose value agrees with the next rung's.
template <typename T, typename Eval, typename Agree>
Escalated<T> escalate_with(Eval&& eval, const PrecisionPolicy& policy, Agree&& agree) {
    policy.validate();
    std::optional<T> prev;
    int prev_digits = 0;
    std::optional<T> last_good;
    int last_good_digits = 0;
    std::exception_ptr last_error;

    int d = policy.start_digits;
    while (true) {
        std::optional<T> cur;
        try {
            cur = eval(d);
        } catch (const EvaluationError&) {
            last_error = std::current_exception();
        } catch (const std::domain_error&) {
            last_error = std::current_exception();
        }
        if (cur) {
            if (prev && agree(*prev, *cur)) {
                return {std::move(*prev), true, prev_digits};
            }
            prev = cur;
            prev_digits = d;
            last_good = std::move(cur);
            last_good_digits = d;
        } else {
            prev.reset();  // a failed rung breaks the agreement chain
        }
        if (d >= policy.max_digits) break;
        d = policy.next_rung(d);
    }
    if (!last_good) {
        if (last_error) std::rethrow_exception(last_error);
        throw NonEvaluableError("escalate: evaluation failed at every rung");
    }
    return {std::move(*last_good), false, last_good_digits};
}

// Scalar ladder per the module contract.
inline Escalated<BigReal> escalate(const std::function<BigReal(int)>& eval,
                                   const PrecisionPolicy& policy) {
    return escalate_with<BigReal>(eval, policy, [&](const BigReal& a, const BigReal& b) {
        return values_agree(a, b, policy.agreement_tol);
    });
}

// Ladder over a small vector of scalars; agreement must hold component-wise.
inline Escalated<std::vector<BigReal>> escalate_many(
    const std::function<std::vector<BigReal>(int)>& eval, const PrecisionPolicy& policy) {
    return escalate_with<std::vector<BigReal>>(
        eval, policy, [&](const std::vector<BigReal>& a, const std::vector<BigReal>& b) {
            if (a.size() != b.size()) return false;
            for (size_t i = 0; i < a.size(); ++i)
                if (!values_agree(a[i], b[i], policy.agreement_tol)) return false;
            return true;
        });
}

}  // namespace tachyon

#endif
