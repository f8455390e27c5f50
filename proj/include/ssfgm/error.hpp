#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssfgm {

enum class ErrorCode {
  // input data
  MalformedRow,
  UnknownNodeInEdge,
  DuplicateEdge,
  SelfLoop,
  DuplicateNode,
  NonFiniteFeature,
  InconsistentFeatureArity,
  AllLabelsRemoved,
  EmptyLabelSet,
  NoTrainingLabels,
  EmptyCorpus,
  SchemaMismatch,
  Io,
  // model / algorithm
  DimensionMismatch,
  InstanceTooLarge,
  NoProposableSite,
  InvalidArgument,
  NumericFailure,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code; the
/// CLI maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ssfgm
