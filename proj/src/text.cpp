#include "gridloc/text.hpp"

#include "gridloc/error.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

namespace gridloc {

std::string normalize_name(std::string_view name) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");

    icu::UnicodeString src = icu::UnicodeString::fromUTF8(
        icu::StringPiece(name.data(), static_cast<int32_t>(name.size())));
    if (src.indexOf(static_cast<UChar>(0xFFFD)) >= 0 &&
        name.find("\xEF\xBF\xBD") == std::string_view::npos)
        throw Error("region name is not valid UTF-8");

    icu::UnicodeString out = nfc->normalize(src, status);
    if (U_FAILURE(status)) throw Error("NFC normalization failed");
    out.trim();

    std::string utf8;
    out.toUTF8String(utf8);
    return utf8;
}

}  // namespace gridloc
