#pragma once

#include <stdexcept>
#include <string>

namespace nhosc {

/// Base class for every error this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input or intermediate value contains NaN/Inf.
struct NonFinite : Error {
    using Error::Error;
};

/// Matrix inverse requested with |det| below threshold.
struct Singular : Error {
    using Error::Error;
};

/// Physical parameter set violates its invariants (e.g. E <= 0).
struct InvalidParams : Error {
    using Error::Error;
};

/// Closed form is only derived for chi = 0; use the matrix path instead.
struct UnsupportedChi : Error {
    using Error::Error;
};

/// Operation requires the PT-symmetric parameter subspace (theta = pi/4, chi = 0).
struct NotPTSymmetric : Error {
    using Error::Error;
};

/// Frame or closed form requested outside its regime of validity.
struct WrongRegime : Error {
    using Error::Error;
};

/// G-norm of a state underflowed; the generalized probability is undefined.
struct DegenerateNorm : Error {
    using Error::Error;
};

/// sech z = 0 (sigma + dm2*sin2theta = 0): the z-parameterization degenerates.
struct DegenerateSech : Error {
    using Error::Error;
};

/// Trace of the evolved density-matrix numerator underflowed.
struct VanishingNorm : Error {
    using Error::Error;
};

}  // namespace nhosc
