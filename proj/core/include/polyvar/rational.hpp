#ifndef POLYVAR_RATIONAL_HPP
#define POLYVAR_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

#include "polyvar/errors.hpp"

namespace polyvar {

/// Exact rational scalar. GMP keeps it canonical (reduced, positive
/// denominator); every arithmetic operation in the library is exact.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/// Exact conversion: every finite double is a dyadic rational.
inline Rat rat_of_double(double x) { return Rat(x); }

inline double to_double(const Rat& q) { return q.get_d(); }

inline int sign(const Rat& q) { return sgn(q); }

inline Rat rat_abs(const Rat& q) { return abs(q); }

// std::min/std::max cannot deduce through GMP expression templates
inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// Parses "p/q", "p", or a decimal like "-0.25".
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw DomainError("empty rational literal");
    if (s.find('.') != std::string::npos) {
        // decimal: scale by a power of ten
        std::string t = s;
        const auto dot = t.find('.');
        const std::string frac = t.substr(dot + 1);
        t.erase(dot, 1);
        for (char c : frac)
            if (c < '0' || c > '9') throw DomainError("bad rational literal: " + s);
        Rat q;
        try {
            q = Rat(mpz_class(t), mpz_class(1));
        } catch (const std::invalid_argument&) {
            throw DomainError("bad rational literal: " + s);
        }
        mpz_class p10 = 1;
        for (size_t i = 0; i < frac.size(); ++i) p10 *= 10;
        q /= Rat(p10);
        q.canonicalize();
        return q;
    }
    Rat q;
    if (q.set_str(s, 10) != 0) throw DomainError("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

/// "p" when the denominator is 1, "p/q" otherwise. Lossless.
inline std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Extended scalar: a finite rational or +infinity. Polyhedral functions
/// never take the value -infinity (they are proper by construction).
struct ExtRat {
    std::optional<Rat> finite;  // nullopt encodes +infinity

    static ExtRat infinity() { return ExtRat{std::nullopt}; }
    static ExtRat of(Rat v) { return ExtRat{std::move(v)}; }
    bool is_infinite() const { return !finite.has_value(); }
    const Rat& value() const {
        if (!finite) throw DomainError("value() on +infinity");
        return *finite;
    }
    bool operator==(const ExtRat& o) const {
        if (is_infinite() || o.is_infinite()) return is_infinite() == o.is_infinite();
        return *finite == *o.finite;
    }
};

inline std::string to_string(const ExtRat& v) {
    return v.is_infinite() ? "inf" : rat_str(v.value());
}

}  // namespace polyvar

#endif
