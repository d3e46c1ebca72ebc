#pragma once

// Label normalization, tokenization and digests shared by the matching,
// uniqueness and diff code paths.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pivotheso::text {

bool is_valid_utf8(std::string_view s);

// Unicode NFC composition.
std::string nfc(std::string_view s);

// Trims Unicode white space at both ends.
std::string trim(std::string_view s);

// NFC, case fold, diacritics removed, internal white space collapsed to one
// U+0020 and trimmed. Used for every label equality test.
std::string normalize_label(std::string_view s);

// Removes a trailing " (…)" citation when the parenthesized part holds a
// 4-digit year, e.g. "assiette (BARRIER, LUGINBÜHL 2021)" -> "assiette".
std::string strip_source_suffix(std::string_view label);

// "[céramique à pâte grise]" -> "céramique à pâte grise"; other labels unchanged.
std::string strip_grouping_brackets(std::string_view label);

bool is_grouping_label(std::string_view label);

// normalize_label(strip_grouping_brackets(strip_source_suffix(label)))
std::string stripped_key(std::string_view label);

// Content tokens: NFC + case fold, split on white space and punctuation,
// French stopwords dropped (compared with their accents), then diacritics
// removed from the remaining tokens. Sorted and deduplicated.
std::vector<std::string> content_tokens(std::string_view s);

// 64-bit FNV-1a over the given bytes.
std::uint64_t fnv1a64(std::string_view bytes);

// FNV-1a digest of the NFC form, rendered as 16 lowercase hex digits.
std::string definition_digest(std::string_view definition_text);

}  // namespace pivotheso::text
