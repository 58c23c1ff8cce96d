#pragma once

#include <complex>

namespace ellcon {

using cplx = std::complex<double>;

}  // namespace ellcon
