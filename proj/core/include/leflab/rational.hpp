// Exact rational scalar type used by the simplicial (exact) route.
#pragma once

#include <gmpxx.h>
#include <string>

namespace leflab {

using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline double to_double(const Rat& r) { return r.get_d(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline std::string to_string(const Rat& r) { return r.get_str(); }

}  // namespace leflab
