#pragma once

#include <string_view>

#include "unlearn_eval/lang.hpp"

namespace uleval::embedded {

// Raw contents of the repo data files, baked in at build time so the
// library works from any working directory. data/ stays the source of
// truth; these accessors mirror it byte for byte.

std::string_view langid_profile_json(LanguageTag lang);  // en, de, es only
std::string_view default_tables_json();
std::string_view name_pool_json();

}  // namespace uleval::embedded
