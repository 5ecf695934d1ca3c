#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace csg {

/// Parses the complex literal grammar used throughout the JSON and CLI
/// surfaces: "a", "bi", "a+bi", "a-bi" with decimal a, b ("i" and "-i"
/// are accepted for unit imaginary parts). Throws ConfigError with a
/// one-line message on malformed input.
std::complex<double> parse_complex(std::string_view text);

/// Formats a complex number back into the literal grammar using
/// shortest round-trip decimal digits, so parse(format(z)) == z.
std::string format_complex(std::complex<double> z);

/// Shortest round-trip decimal formatting for a double. All
/// machine-readable outputs use this, which keeps byte-identical runs
/// byte-identical regardless of thread count or locale.
std::string format_double(double x);

} // namespace csg
