#include "pivotheso/errors.hpp"

namespace pivotheso {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownScheme: return "UnknownScheme";
        case ErrorCode::UnknownConcept: return "UnknownConcept";
        case ErrorCode::InvalidLabel: return "InvalidLabel";
        case ErrorCode::DuplicatePrefLabel: return "DuplicatePrefLabel";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::CrossScheme: return "CrossScheme";
        case ErrorCode::SelfRelation: return "SelfRelation";
        case ErrorCode::HierarchicallyLinked: return "HierarchicallyLinked";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::GraphError: return "GraphError";
        case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
        case ErrorCode::CorruptStore: return "CorruptStore";
        case ErrorCode::UnknownRule: return "UnknownRule";
        case ErrorCode::SameScheme: return "SameScheme";
        case ErrorCode::DuplicateAccepted: return "DuplicateAccepted";
        case ErrorCode::ConflictingType: return "ConflictingType";
        case ErrorCode::UnknownMember: return "UnknownMember";
        case ErrorCode::UnknownMapping: return "UnknownMapping";
        case ErrorCode::AlreadyDecided: return "AlreadyDecided";
        case ErrorCode::UnknownReferential: return "UnknownReferential";
        case ErrorCode::DuplicateReferential: return "DuplicateReferential";
        case ErrorCode::InvalidMillesime: return "InvalidMillesime";
        case ErrorCode::AlreadyFrozen: return "AlreadyFrozen";
        case ErrorCode::FrozenReferential: return "FrozenReferential";
        case ErrorCode::NotInReferential: return "NotInReferential";
        case ErrorCode::IncompatibleTypeCategory: return "IncompatibleTypeCategory";
        case ErrorCode::FormTypeMismatch: return "FormTypeMismatch";
        case ErrorCode::DanglingConcept: return "DanglingConcept";
        case ErrorCode::MalformedCsv: return "MalformedCsv";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorCode::SyntaxError,
            "syntax error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

}  // namespace pivotheso
