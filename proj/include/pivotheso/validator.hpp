#pragma once

#include "pivotheso/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace pivotheso {

enum class Severity { Error, Warning };

std::string_view to_string(Severity s);

struct Diagnostic {
    std::string rule;  // "R1".."R8" for schemes, "M1".."M4" for mappings
    Severity severity = Severity::Error;
    std::vector<ConceptId> subjects;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

// Sorts by (rule, first subject, remaining subjects, message).
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

std::string render_text(const Diagnostic& d);
// {"rule","severity","subjects","message"} on one line.
std::string render_json_line(const Diagnostic& d);

namespace validator {

// Checks one scheme:
//   R1 duplicate normalized pref label per language          Error
//   R2 alt label equal to another concept's pref label       Warning
//   R3 cycle in the broader relation                         Error
//   R4 associative relation without its reciprocal           Error
//   R5 associative link between ancestor and descendant      Error
//   R6 missing or unsourced definition                       Error (research) / Warning (documentary)
//   R7 concept unreachable from every top concept            Warning
//   R8 broader/narrower asymmetry                            Error
// Grouping terms ("[…]") are exempt from R6.
std::vector<Diagnostic> validate(const Store& store, const SchemeId& scheme);

// Same, with the scheme's profile replaced by `profile`.
std::vector<Diagnostic> validate(const Store& store, const SchemeId& scheme, Profile profile);

std::string explain(std::string_view rule_code);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace validator
}  // namespace pivotheso
