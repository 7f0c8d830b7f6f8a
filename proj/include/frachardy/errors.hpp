#pragma once

#include <stdexcept>
#include <string>

namespace frachardy {

/// Thrown when an adaptive rule exhausts its subdivision budget without
/// meeting the requested tolerance. Carries the partial estimate.
class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(const std::string& what, double partial, double err_est)
        : std::runtime_error(what), partial(partial), err_est(err_est) {}
    double partial;
    double err_est;
};

/// Declared endpoint exponent <= -1: the integral does not exist.
class NonIntegrableEndpoint : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exponent outside the admissible range of the operation (e.g. beta outside
/// (-1/(p-1), sp/(p-1)) for lambda(beta)).
class InadmissibleExponent : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The declared growth/decay exponents force a divergent Gagliardo seminorm
/// (e.g. a jump profile with sp >= 1).
class InfiniteSeminorm : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pointwise evaluation requested at a point where the object is singular
/// (e.g. H(t) at t = 1/2, or a PV at a kink).
class SingularPoint : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace frachardy
