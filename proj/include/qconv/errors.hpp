#pragma once

#include <stdexcept>
#include <string>

namespace qconv {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// asymptotics
struct DegenerateSamples : Error { using Error::Error; };
struct InconclusiveGerm : Error { using Error::Error; };

// lattice
struct NotASubgroup : Error { using Error::Error; };
struct NotInSubgroup : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };

// charge
struct EvalDomain : Error { using Error::Error; };
struct SpreadTooLarge : Error { using Error::Error; };
struct ZeroCharge : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };

// hn / preorder
struct PhaseOverlap : Error { using Error::Error; };
struct NonTransitive : Error { using Error::Error; };

// decompose
struct EmptyClass : Error { using Error::Error; };

// gluing
struct NotGluable : Error { using Error::Error; };
struct NotInGluedLocus : Error { using Error::Error; };
struct BadTwistDirections : Error { using Error::Error; };

// models / scenario
struct BadKappa : Error { using Error::Error; };
struct ScenarioError : Error { using Error::Error; };      // inconsistent scenario data (exit 3)
struct ScenarioParseError : Error { using Error::Error; }; // malformed input (exit 2)

}  // namespace qconv
