#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geoctx {

enum class ErrorCode {
  // category construction
  UnknownObject,
  UnknownArrow,
  MissingComposite,
  IllTypedComposite,
  NonAssociative,
  IdentityLawBroken,
  ResourceBound,
  // presheaves
  NotAPresheaf,
  NotNatural,
  ElementNotInValueSet,
  AnchorMismatch,
  MixedTargets,
  ParentMismatch,
  // sheaves and geometry
  NotASheaf,
  NotAnEquivalenceRelation,
  NotATopology,
  PreconditionViolated,
  SearchBudgetExceeded,
  PullbacksMissingInC,
  GluingConditionViolated,
  NotAnOpenAtlas,
  InternalRouteDisagreement,
  Internal,
  // text format
  SyntaxError,
  UnknownIdentifier,
  DuplicateId,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the engine. The message names the offending
// objects, arrows or sections by their declared identifiers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geoctx
