#include "scribe/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace scribe::text {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const auto* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  return *n;
}

const icu::Normalizer2& nfd() {
  UErrorCode status = U_ZERO_ERROR;
  const auto* n = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFD normalizer unavailable");
  return *n;
}

template <typename Fn>
std::string mapFirst(std::string_view utf8, Fn fn) {
  if (utf8.empty()) return {};
  auto s = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UChar32 first = s.char32At(0);
  UChar32 mapped = fn(first);
  if (mapped == first) return std::string(utf8);
  icu::UnicodeString out;
  out.append(mapped);
  out.append(s, U16_LENGTH(first), s.length() - U16_LENGTH(first));
  std::string result;
  out.toUTF8String(result);
  return result;
}

}  // namespace

std::size_t codePoints(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::string toNfc(std::string_view utf8) {
  auto s = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  auto normalized = nfc().normalize(s, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool isNfc(std::string_view utf8) {
  auto s = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  bool ok = nfc().isNormalized(s, status);
  return U_SUCCESS(status) && ok;
}

std::string capitalizeFirst(std::string_view utf8) {
  return mapFirst(utf8, [](UChar32 c) { return u_totitle(c); });
}

std::string lowercaseFirst(std::string_view utf8) {
  return mapFirst(utf8, [](UChar32 c) { return u_tolower(c); });
}

bool startsWithVowel(std::string_view utf8) {
  if (utf8.empty()) return false;
  auto s = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  auto decomposed = nfd().normalize(s.tempSubString(0, U16_LENGTH(s.char32At(0))), status);
  if (U_FAILURE(status) || decomposed.isEmpty()) return false;
  UChar32 base = u_tolower(decomposed.char32At(0));
  switch (base) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
    case 0x03B1: case 0x03B5: case 0x03B7: case 0x03B9: case 0x03BF: case 0x03C5: case 0x03C9:
      return true;
    default:
      return false;
  }
}

}  // namespace scribe::text
