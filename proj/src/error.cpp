#include "ssfgm/error.hpp"

namespace ssfgm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownNodeInEdge: return "UnknownNodeInEdge";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::InconsistentFeatureArity: return "InconsistentFeatureArity";
    case ErrorCode::AllLabelsRemoved: return "AllLabelsRemoved";
    case ErrorCode::EmptyLabelSet: return "EmptyLabelSet";
    case ErrorCode::NoTrainingLabels: return "NoTrainingLabels";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::NoProposableSite: return "NoProposableSite";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

}  // namespace ssfgm
