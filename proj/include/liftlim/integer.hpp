#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace liftlim {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

inline std::string to_string(const Integer& x) { return x.get_str(); }

}  // namespace liftlim
