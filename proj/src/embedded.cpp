#include "unlearn_eval/embedded_data.hpp"

#include <stdexcept>

namespace uleval::embedded {

namespace {
#include "generated/embedded_blobs.inc"
}  // namespace

std::string_view langid_profile_json(LanguageTag lang) {
    switch (lang) {
        case LanguageTag::en: return kLangidProfileEn;
        case LanguageTag::de: return kLangidProfileDe;
        case LanguageTag::es: return kLangidProfileEs;
        default:
            throw std::invalid_argument(
                "no bundled frequency profile for non-Latin language '" +
                std::string(to_string(lang)) + "'");
    }
}

std::string_view default_tables_json() { return kDefaultTablesJson; }

std::string_view name_pool_json() { return kNamePoolJson; }

}  // namespace uleval::embedded
