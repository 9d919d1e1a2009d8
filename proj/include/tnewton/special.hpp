#pragma once

namespace tnewton {

/// Error function, accurate to 1e-12 absolute.
double erf(double x);

}  // namespace tnewton
