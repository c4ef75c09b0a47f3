#include "evir/detail/utf8.hpp"

namespace evir::detail {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool is_continuation(unsigned char byte) {
    return (byte & 0xC0) == 0x80;
}

}  // namespace

char32_t decode_utf8(std::string_view text, std::size_t& pos) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    unsigned char lead = bytes[pos];

    if (lead < 0x80) {
        pos += 1;
        return lead;
    }
    if ((lead & 0xE0) == 0xC0) {
        if (pos + 1 < n && is_continuation(bytes[pos + 1])) {
            char32_t cp = (char32_t(lead & 0x1F) << 6) | (bytes[pos + 1] & 0x3F);
            pos += 2;
            return cp < 0x80 ? kReplacement : cp;  // reject overlong forms
        }
    } else if ((lead & 0xF0) == 0xE0) {
        if (pos + 2 < n && is_continuation(bytes[pos + 1]) && is_continuation(bytes[pos + 2])) {
            char32_t cp = (char32_t(lead & 0x0F) << 12) | (char32_t(bytes[pos + 1] & 0x3F) << 6) |
                          (bytes[pos + 2] & 0x3F);
            pos += 3;
            if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) return kReplacement;
            return cp;
        }
    } else if ((lead & 0xF8) == 0xF0) {
        if (pos + 3 < n && is_continuation(bytes[pos + 1]) && is_continuation(bytes[pos + 2]) &&
            is_continuation(bytes[pos + 3])) {
            char32_t cp = (char32_t(lead & 0x07) << 18) | (char32_t(bytes[pos + 1] & 0x3F) << 12) |
                          (char32_t(bytes[pos + 2] & 0x3F) << 6) | (bytes[pos + 3] & 0x3F);
            pos += 4;
            if (cp < 0x10000 || cp > 0x10FFFF) return kReplacement;
            return cp;
        }
    }
    pos += 1;
    return kReplacement;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_word_cp(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    // C1 controls and Latin-1 punctuation block.
    if (cp <= 0xBF) return false;
    if (cp == 0xD7 || cp == 0xF7) return false;  // multiplication/division signs
    if (cp == kReplacement) return false;
    if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation
    if (cp >= 0x2070 && cp <= 0x2BFF) return false;  // super/subscripts, symbols, arrows
    if (cp >= 0x2E00 && cp <= 0x2E7F) return false;  // supplemental punctuation
    if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK symbols and punctuation
    if (cp >= 0xFE30 && cp <= 0xFE4F) return false;  // CJK compatibility forms
    if (cp >= 0xFF01 && cp <= 0xFF0F) return false;  // fullwidth punctuation
    if (cp >= 0xFF1A && cp <= 0xFF20) return false;
    if (cp >= 0xFF3B && cp <= 0xFF40) return false;
    if (cp >= 0xFF5B && cp <= 0xFF65) return false;
    return true;
}

char32_t to_lower_cp(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp < 0x80) return cp;
    // Latin-1 Supplement.
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    // Latin Extended-A: mostly interleaved upper/lower pairs.
    if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
        return (cp % 2 == 0) ? cp + 1 : cp;
    }
    if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
        return (cp % 2 == 1) ? cp + 1 : cp;
    }
    if (cp == 0x178) return 0xFF;  // Y with diaeresis
    // Greek.
    if (cp == 0x386) return 0x3AC;
    if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
    if (cp == 0x38C) return 0x3CC;
    if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
    if ((cp >= 0x391 && cp <= 0x3A1) || (cp >= 0x3A3 && cp <= 0x3AB)) return cp + 0x20;
    // Cyrillic.
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    return cp;
}

}  // namespace evir::detail
