#include "pivotheso/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace pivotheso::text {
namespace {

const icu::Normalizer2& nfc_instance() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
        throw std::runtime_error("ICU NFC normalizer unavailable");
    }
    return *n;
}

const icu::Normalizer2& nfd_instance() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
        throw std::runtime_error("ICU NFD normalizer unavailable");
    }
    return *n;
}

icu::UnicodeString to_unicode(std::string_view s) {
    return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

std::string to_utf8(const icu::UnicodeString& u) {
    std::string out;
    u.toUTF8String(out);
    return out;
}

icu::UnicodeString normalize_with(const icu::Normalizer2& n, const icu::UnicodeString& u) {
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString out = n.normalize(u, status);
    if (U_FAILURE(status)) {
        return u;
    }
    return out;
}

icu::UnicodeString strip_marks(const icu::UnicodeString& u) {
    icu::UnicodeString decomposed = normalize_with(nfd_instance(), u);
    icu::UnicodeString out;
    for (int32_t i = 0; i < decomposed.length();) {
        UChar32 c = decomposed.char32At(i);
        if (u_charType(c) != U_NON_SPACING_MARK) {
            out.append(c);
        }
        i += U16_LENGTH(c);
    }
    return normalize_with(nfc_instance(), out);
}

icu::UnicodeString folded_nfc(std::string_view s) {
    icu::UnicodeString u = normalize_with(nfc_instance(), to_unicode(s));
    u.foldCase();
    return normalize_with(nfc_instance(), u);
}

bool is_token_char(UChar32 c) {
    if (u_isalnum(c)) {
        return true;
    }
    const int8_t type = u_charType(c);
    return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK;
}

const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = [] {
        std::set<std::string> w;
        for (const char* s : {"à", "de", "des", "du", "la", "le", "les", "et", "en", "sur"}) {
            w.insert(to_utf8(folded_nfc(s)));
        }
        return w;
    }();
    return words;
}

bool has_four_digit_year(std::string_view s) {
    std::size_t run = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        const bool digit = i < s.size() && s[i] >= '0' && s[i] <= '9';
        if (digit) {
            ++run;
        } else {
            if (run == 4) {
                return true;
            }
            run = 0;
        }
    }
    return false;
}

}  // namespace

bool is_valid_utf8(std::string_view s) {
    int32_t i = 0;
    const auto length = static_cast<int32_t>(s.size());
    const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
    while (i < length) {
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) {
            return false;
        }
    }
    return true;
}

std::string nfc(std::string_view s) {
    return to_utf8(normalize_with(nfc_instance(), to_unicode(s)));
}

std::string trim(std::string_view s) {
    icu::UnicodeString u = to_unicode(s);
    int32_t begin = 0;
    int32_t end = u.length();
    while (begin < end) {
        UChar32 c = u.char32At(begin);
        if (!u_isUWhiteSpace(c)) {
            break;
        }
        begin += U16_LENGTH(c);
    }
    while (end > begin) {
        UChar32 c = u.char32At(end - 1);
        if (!u_isUWhiteSpace(c)) {
            break;
        }
        end -= U16_LENGTH(c);
    }
    return to_utf8(u.tempSubStringBetween(begin, end));
}

std::string normalize_label(std::string_view s) {
    icu::UnicodeString stripped = strip_marks(folded_nfc(s));
    icu::UnicodeString out;
    bool pending_space = false;
    for (int32_t i = 0; i < stripped.length();) {
        UChar32 c = stripped.char32At(i);
        i += U16_LENGTH(c);
        if (u_isUWhiteSpace(c)) {
            pending_space = !out.isEmpty();
            continue;
        }
        if (pending_space) {
            out.append(static_cast<UChar>(0x20));
            pending_space = false;
        }
        out.append(c);
    }
    return to_utf8(out);
}

std::string strip_source_suffix(std::string_view label) {
    std::string trimmed = trim(label);
    if (trimmed.empty() || trimmed.back() != ')') {
        return trimmed;
    }
    const std::size_t open = trimmed.rfind('(');
    if (open == std::string::npos || open < 2 || trimmed[open - 1] != ' ') {
        return trimmed;
    }
    std::string_view inner(trimmed.data() + open + 1, trimmed.size() - open - 2);
    if (inner.find(')') != std::string_view::npos || !has_four_digit_year(inner)) {
        return trimmed;
    }
    return trim(std::string_view(trimmed.data(), open));
}

bool is_grouping_label(std::string_view label) {
    return label.size() >= 2 && label.front() == '[' && label.back() == ']';
}

std::string strip_grouping_brackets(std::string_view label) {
    std::string trimmed = trim(label);
    if (is_grouping_label(trimmed)) {
        return trim(std::string_view(trimmed).substr(1, trimmed.size() - 2));
    }
    return trimmed;
}

std::string stripped_key(std::string_view label) {
    return normalize_label(strip_grouping_brackets(strip_source_suffix(label)));
}

std::vector<std::string> content_tokens(std::string_view s) {
    icu::UnicodeString folded = folded_nfc(s);
    std::vector<std::string> tokens;
    icu::UnicodeString current;
    auto flush = [&] {
        if (current.isEmpty()) {
            return;
        }
        std::string word = to_utf8(normalize_with(nfc_instance(), current));
        if (!stopwords().contains(word)) {
            tokens.push_back(to_utf8(strip_marks(current)));
        }
        current.remove();
    };
    for (int32_t i = 0; i < folded.length();) {
        UChar32 c = folded.char32At(i);
        i += U16_LENGTH(c);
        if (is_token_char(c)) {
            current.append(c);
        } else {
            flush();
        }
    }
    flush();
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string definition_digest(std::string_view definition_text) {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(nfc(definition_text))));
    return std::string(buf.data(), 16);
}

}  // namespace pivotheso::text
