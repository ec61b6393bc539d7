#pragma once

#include <stdexcept>
#include <string>

namespace ris {

// A Gamma-function argument landed on a non-positive integer.
class pole_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The Mellin-Barnes contour cannot be placed: pole families coincide or a
// pole sits on the requested line.
class pole_collision_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Contour quadrature did not converge within the requested tolerances.
class contour_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Closed-form SOP expressions divide by (Theta - 1); Theta == 1 must be
// routed to the semi-analytic path.
class theta_degenerate_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An adaptive quadrature error estimate exceeded its tolerance.
class integration_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent experiment configuration.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ris
