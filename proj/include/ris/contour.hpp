#pragma once

#include <cmath>

namespace ris::sf {

// Numerical realization of a Mellin-Barnes integration path.  The paper-side
// definition only says "from c - j inf to c + j inf"; everything here is
// artifact policy: vertical lines, trapezoidal sampling, geometric truncation
// doubling until two successive truncations agree.
struct ContourSettings {
    // Real-axis crossings of the (up to two) contours.  NaN selects the
    // automatic pole scan: midway between the rightmost left-family pole and
    // the leftmost right-family pole.
    double c_offsets[2] = {NAN, NAN};

    // Half-length of the imaginary-axis integration, in units of the kernel's
    // exponential decay scale (so the initial tail bound is ~exp(-truncation)).
    double truncation = 40.0;

    // Initial quadrature points per contour; refinement doubles this.
    int nodes = 512;

    double rel_tol = 1e-8;
    double abs_tol = 1e-12;

    void validate() const; // truncation > 0, nodes >= 64, tolerances > 0
};

// Value plus convergence diagnostics of a contour integral.
struct MellinBarnesResult {
    double value = 0.0;
    double imag_residual = 0.0;   // |Im| of the contour integral (should be ~0)
    double est_error = 0.0;       // truncation + step-refinement disagreement
    double truncation_used = 0.0; // final half-length actually integrated
    long evaluations = 0;         // kernel evaluations spent
};

} // namespace ris::sf
