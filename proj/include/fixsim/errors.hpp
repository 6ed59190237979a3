#pragma once

#include <stdexcept>
#include <string>

namespace fixsim {

// Domain errors: the request is outside the regime where the quantity is
// defined (CLI exit code 3).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// The dominance conditions fail; names the first inequality that failed.
struct DominanceViolated : DomainError {
    explicit DominanceViolated(const std::string& msg) : DomainError(msg) {}
};

// A bound or coupling was requested at N below the certified threshold N0.
struct BelowN0 : DomainError {
    explicit BelowN0(const std::string& msg) : DomainError(msg) {}
};

// Branching-process quantities need mean offspring lambda > 1.
struct Subcritical : DomainError {
    explicit Subcritical(const std::string& msg) : DomainError(msg) {}
};

// The payoff ordering b > d > a > c required by the tightness classifier fails.
struct NotPD : DomainError {
    explicit NotPD(const std::string& msg) : DomainError(msg) {}
};

// Exact solver refuses N above its cap.
struct CapExceeded : DomainError {
    explicit CapExceeded(const std::string& msg) : DomainError(msg) {}
};

// A finite-difference perturbation left the domain where the derivative
// signs are guaranteed.
struct DomainExit : DomainError {
    explicit DomainExit(const std::string& msg) : DomainError(msg) {}
};

// Least-squares fit got inputs that cannot identify the parameter.
struct DegenerateInput : DomainError {
    explicit DegenerateInput(const std::string& msg) : DomainError(msg) {}
};

// Numerical failures: the algorithm itself broke down (CLI exit code 4).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularSystem : NumericalError {
    explicit SingularSystem(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace fixsim
