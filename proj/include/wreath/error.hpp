#ifndef WREATH_ERROR_HPP
#define WREATH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wreath {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two permutations (or coordinate actions) live on different carriers.
class CarrierMismatch : public Error {
 public:
  explicit CarrierMismatch(std::string const& what = "carrier mismatch")
      : Error(what) {}
};

/// An approximation was evaluated outside its declared window.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// An input approximation failed the (F, eps) certificate it was required to
/// carry.
class CertificateError : public Error {
 public:
  using Error::Error;
};

/// expand_explicit was asked for a carrier larger than the cap.
class ExpansionTooLarge : public Error {
 public:
  explicit ExpansionTooLarge(std::string const& what =
                                 "carrier too large for expansion")
      : Error(what) {}
};

/// Malformed serialized input or invalid parameters.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace wreath

#endif  // WREATH_ERROR_HPP
