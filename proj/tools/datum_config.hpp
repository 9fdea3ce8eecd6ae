#pragma once

// Line-oriented Satake datum configs:
//
//   rank 3
//   cartan
//     2 -1  0
//    -1  2 -2
//     0 -1  2
//   epsilon 2 2 1
//   bullet 3
//   tau 1 2 3
//
// Indices are 1-based. `#` starts a comment. The matrix rows may also be
// given on the `cartan` line separated by `;`.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "iserre/cartan.hpp"

namespace iserre::cli {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(int line, int column, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

/// Syntax only: builds the datum without checking admissibility. Throws
/// ConfigError, or InvalidDatum when (cartan, epsilon) is not a datum.
SatakeDatum parse_datum(const std::string& text);
SatakeDatum load_datum(const std::string& path);

/// Inverse of parse_datum.
std::string format_datum(const SatakeDatum& d);

/// Stable 64-bit digest of the Cartan part (matrix and epsilon).
std::uint64_t cartan_digest(const CartanDatum& c);
std::string hex_digest(std::uint64_t h);

}  // namespace iserre::cli
