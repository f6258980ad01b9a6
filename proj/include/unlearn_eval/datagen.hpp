#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "unlearn_eval/records.hpp"

namespace uleval {

// Values for one attribute. Categorical pools are index-aligned across
// languages (entry i is the translation of English entry i); the birthday
// pool is a date range and carries no value lists.
struct AttributePool {
    std::string attribute;
    bool date_range = false;
    std::map<LanguageTag, std::vector<std::string>> values;
};

struct QATemplate {
    std::string attribute;
    LanguageTag language = LanguageTag::en;
    std::string question_template;  // contains {name} exactly once
    std::string answer_template;    // contains {name} and {value} exactly once
};

struct TranslationTables {
    std::map<std::string, AttributePool> pools;
    std::map<std::string, std::map<LanguageTag, QATemplate>> templates;
};

struct GenSpec {
    std::uint64_t seed = 7;
    int n_profiles = 40;
    std::vector<LanguageTag> languages = {LanguageTag::en, LanguageTag::de,
                                          LanguageTag::zh, LanguageTag::ru,
                                          LanguageTag::ko};
    int forget_profiles = 2;
    std::vector<std::string> name_pool;  // empty = bundled pool
};

// Tables compiled into the library (identical content to
// data/tables/default_tables.json); cover all eight languages.
const TranslationTables& bundled_tables();

const std::vector<std::string>& bundled_name_pool();

// Parses the documented JSON table format and overlays it on the bundled
// defaults, so a file only has to carry the cells it changes. Throws
// SchemaError with the offending key path; length mismatches against the
// English pool are reported by validate_tables.
TranslationTables load_translation_tables(const std::string& path);

// Writes the English pools and templates as a translation worksheet.
void export_english_defaults(const std::string& path);

// Checks coverage for the requested languages: every categorical pool
// index-aligned with English, every (attribute, language) template present
// with its placeholders appearing exactly once. Throws SchemaError naming
// the first broken cell.
void validate_tables(const TranslationTables& tables,
                     const std::vector<LanguageTag>& languages);

// Deterministic synthesis: names drawn without replacement, categorical
// attributes uniform, birthdays uniform over [1950-01-01, 2010-12-31],
// full attribute tuples unique (bounded resampling). Pure function of
// (spec, tables).
std::vector<Profile> generate_profiles(const GenSpec& spec,
                                       const TranslationTables& tables);

// |result| = n_profiles * 7 * |languages|; answers substitute the
// language-matched pool entry and the verbatim English name.
std::vector<QAPair> render_qa(const std::vector<Profile>& profiles,
                              const TranslationTables& tables,
                              const GenSpec& spec);

// Marks the first spec.forget_profiles profiles under a seeded shuffle as
// forget, all their pairs in every language; the rest retain.
void assign_split(std::vector<QAPair>& pairs, const GenSpec& spec);

}  // namespace uleval
