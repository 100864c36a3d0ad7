#pragma once

#include "powermix/distribution.hpp"
#include "powermix/mixture.hpp"

#include <string>
#include <string_view>
#include <variant>

namespace powermix {

/// Textual specs:
///   distribution  name(p1, p2, ...)             e.g. uniform(0,1), beta(0.5,0.5)
///   mixture       tsp(n=2, x1=..., x2=...)      directed(n=2, x1=..., x2=...)
///                 tsp(w=beta(3,1), x1=..., x2=...)
/// Named arguments may come in any order. Whitespace is ignored between tokens.
/// Errors throw ParseError with the byte offset and the expected token.
Distribution parse_distribution(std::string_view text);
MixtureSpec parse_mixture(std::string_view text);

using AnySpec = std::variant<Distribution, MixtureSpec>;
AnySpec parse_spec(std::string_view text);

/// Canonical form; parse_* of it gives back an equal value.
std::string print(const Distribution& d);
std::string print(const MixtureSpec& m);
std::string print(const AnySpec& s);

}  // namespace powermix
