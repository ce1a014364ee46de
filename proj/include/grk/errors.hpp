#pragma once
/** @file errors.hpp
 *  @brief Exception types shared by all grk modules.
 */

#include <stdexcept>
#include <string>

namespace grk {

/** Base class; every library error derives from it. */
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error { using Error::Error; };
struct SpaceMismatch : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct DegreeMismatch : Error { using Error::Error; };
struct NotInSupport : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct DanglingEndpoint : Error { using Error::Error; };

struct NotAProjection : Error { using Error::Error; };
struct NegativeCoefficient : Error { using Error::Error; };
struct NotOrderPreserving : Error { using Error::Error; };
struct NotContractive : Error { using Error::Error; };
struct SpecCorrupt : Error { using Error::Error; };

struct ClassMismatch : Error { using Error::Error; };
struct ComplementClassMismatch : Error { using Error::Error; };
struct NonMonomial : Error { using Error::Error; };
struct KHomMismatch : Error { using Error::Error; };

struct BudgetExhausted : Error { using Error::Error; };
struct KHomInconsistent : Error { using Error::Error; };

struct NotInClass : Error { using Error::Error; };
struct UnsupportedGroup : Error { using Error::Error; };

}  // namespace grk
