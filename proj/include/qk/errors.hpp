#pragma once

#include <stdexcept>
#include <string>

namespace qk {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Block sizes of an operator and a vector (or two operators) disagree.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Malformed input file (Matrix Market or gauge configuration).
class ParseError : public Error {
public:
  using Error::Error;
};

/// A loaded matrix is not square.
class NonSquare : public Error {
public:
  using Error::Error;
};

/// Requested block split does not satisfy 1 <= n1 < n.
class BadSplit : public Error {
public:
  using Error::Error;
};

/// gap_estimate called on an empty sample.
class EmptySample : public Error {
public:
  using Error::Error;
};

/// Eigenvector has a (numerically) vanishing block component, the
/// 2x2 witness construction is not applicable.
class DegenerateBlock : public Error {
public:
  using Error::Error;
};

/// Krylov process started with b = 0.
class ZeroRightHandSide : public Error {
public:
  using Error::Error;
};

/// Grid levels passed to a transfer operator are not related by
/// coarsening (N_fine + 1 = 2 (N_coarse + 1)).
class BadLevels : public Error {
public:
  using Error::Error;
};

/// Invalid dimensions for a generated problem.
class BadDimensions : public Error {
public:
  using Error::Error;
};

/// No zero-free strip exists for the given mesh width (alpha_min(h) <= 2).
class NoStrip : public Error {
public:
  using Error::Error;
};

/// Invalid experiment or CLI configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace qk
