// Exact rational scalars and their text form ("p" or "p/q", q > 0).
#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace secat {

using Rat = mpq_class;

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

// Accepts "p" and "p/q" with optional sign; rejects q = 0 and garbage.
inline std::optional<Rat> rat_from_string(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    bool seen_slash = false;
    for (std::size_t k = i; k < s.size(); ++k) {
        char c = s[k];
        if (c == '/') {
            if (seen_slash || k == i || k + 1 == s.size()) return std::nullopt;
            seen_slash = true;
            continue;
        }
        if (c < '0' || c > '9') return std::nullopt;
    }
    Rat r;
    if (r.set_str(s, 10) != 0) return std::nullopt;
    if (seen_slash && mpz_sgn(r.get_den().get_mpz_t()) == 0) return std::nullopt;
    r.canonicalize();
    return r;
}

}  // namespace secat
