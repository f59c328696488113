#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pintersect {

/// Base class for every domain failure raised by the library. Precondition
/// violations use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coefficient division that the theory says must be exact was not.
class InexactDivision : public Error {
 public:
  using Error::Error;
};

/// Some prime admits no p-adic root coprime to p.
class NoCoprimeRoot : public Error {
 public:
  explicit NoCoprimeRoot(std::uint64_t prime)
      : Error("no root coprime to p exists for p = " + std::to_string(prime)), prime_(prime) {}
  std::uint64_t prime() const noexcept { return prime_; }

 private:
  std::uint64_t prime_;
};

/// The prime table does not reach far enough for the requested query.
class TableTooSmall : public Error {
 public:
  TableTooSmall(std::uint64_t needed, std::uint64_t limit)
      : Error("prime table limit " + std::to_string(limit) + " is below required " +
              std::to_string(needed)),
        needed_(needed) {}
  std::uint64_t needed() const noexcept { return needed_; }

 private:
  std::uint64_t needed_;
};

/// The concentration step found no progression denser than the input set.
class NoIncrement : public Error {
 public:
  using Error::Error;
};

/// The major-arc system would hold more arcs than the configured cap.
class ArcSystemTooLarge : public Error {
 public:
  using Error::Error;
};

/// The weighted prime count Ψ_d is zero, so normalized quantities are undefined.
class PsiVanishes : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace pintersect
