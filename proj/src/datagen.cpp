#include "unlearn_eval/datagen.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "unlearn_eval/embedded_data.hpp"
#include "unlearn_eval/errors.hpp"
#include "unlearn_eval/hash.hpp"

namespace uleval {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// mt19937_64 is pinned by the standard; bounded draws go through rejection
// sampling so results are identical on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below(0)");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t value;
        do {
            value = engine_();
        } while (value >= limit);
        return value % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[below(i)]);
    }

  private:
    std::mt19937_64 engine_;
};

std::uint64_t salted_seed(std::uint64_t seed, std::string_view salt) {
    return seed ^ fnv1a64(salt);
}

// Howard Hinnant's civil-from-days; only needed over 1950..2010.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe =
        (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    y = static_cast<int>(yr + (m <= 2));
}

std::string random_birthday(Rng& rng) {
    static const std::int64_t first = days_from_civil(1950, 1, 1);
    static const std::int64_t last = days_from_civil(2010, 12, 31);
    std::int64_t day = first + static_cast<std::int64_t>(
                                   rng.below(static_cast<std::uint64_t>(
                                       last - first + 1)));
    int y, m, d;
    civil_from_days(day, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

int count_placeholder(std::string_view text, std::string_view placeholder) {
    int count = 0;
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string_view::npos) {
        ++count;
        pos += placeholder.size();
    }
    return count;
}

std::string substitute_once(std::string text, std::string_view placeholder,
                            std::string_view value) {
    std::size_t pos = text.find(placeholder);
    if (pos != std::string::npos)
        text.replace(pos, placeholder.size(), value);
    return text;
}

TranslationTables parse_tables_json(const json& doc,
                                    const std::string& origin) {
    TranslationTables tables;
    if (!doc.is_object())
        throw SchemaError(origin + ": top level must be an object");

    if (doc.contains("pools")) {
        if (!doc["pools"].is_object())
            throw SchemaError(origin + ": 'pools' must be an object");
        for (auto& [attr, langs] : doc["pools"].items()) {
            if (!is_attribute_key(attr))
                throw SchemaError(origin + ": pools." + attr +
                                  " is not a known attribute");
            AttributePool& pool = tables.pools[attr];
            pool.attribute = attr;
            pool.date_range = attr == "birthday";
            if (pool.date_range) continue;  // no value lists for birthday
            if (!langs.is_object())
                throw SchemaError(origin + ": pools." + attr +
                                  " must map languages to value arrays");
            for (auto& [code, values] : langs.items()) {
                auto lang = parse_language(code);
                if (!lang)
                    throw SchemaError(origin + ": pools." + attr + "." + code +
                                      ": unsupported language");
                if (!values.is_array())
                    throw SchemaError(origin + ": pools." + attr + "." + code +
                                      " must be an array");
                std::vector<std::string> list;
                for (std::size_t i = 0; i < values.size(); ++i) {
                    if (!values[i].is_string())
                        throw SchemaError(origin + ": pools." + attr + "." +
                                          code + "[" + std::to_string(i) +
                                          "] must be a string");
                    list.push_back(values[i].get<std::string>());
                }
                pool.values[*lang] = std::move(list);
            }
        }
    }

    if (doc.contains("templates")) {
        if (!doc["templates"].is_object())
            throw SchemaError(origin + ": 'templates' must be an object");
        for (auto& [attr, langs] : doc["templates"].items()) {
            if (!is_attribute_key(attr))
                throw SchemaError(origin + ": templates." + attr +
                                  " is not a known attribute");
            if (!langs.is_object())
                throw SchemaError(origin + ": templates." + attr +
                                  " must map languages to {q, a}");
            for (auto& [code, cell] : langs.items()) {
                auto lang = parse_language(code);
                if (!lang)
                    throw SchemaError(origin + ": templates." + attr + "." +
                                      code + ": unsupported language");
                if (!cell.is_object() || !cell.contains("q") ||
                    !cell.contains("a") || !cell["q"].is_string() ||
                    !cell["a"].is_string())
                    throw SchemaError(origin + ": templates." + attr + "." +
                                      code + " must be {\"q\": ..., \"a\": ...}");
                QATemplate tmpl;
                tmpl.attribute = attr;
                tmpl.language = *lang;
                tmpl.question_template = cell["q"].get<std::string>();
                tmpl.answer_template = cell["a"].get<std::string>();
                tables.templates[attr][*lang] = std::move(tmpl);
            }
        }
    }
    return tables;
}

void overlay(TranslationTables& base, const TranslationTables& patch) {
    for (const auto& [attr, pool] : patch.pools) {
        AttributePool& target = base.pools[attr];
        target.attribute = attr;
        target.date_range = pool.date_range;
        for (const auto& [lang, values] : pool.values)
            target.values[lang] = values;
    }
    for (const auto& [attr, langs] : patch.templates) {
        for (const auto& [lang, tmpl] : langs)
            base.templates[attr][lang] = tmpl;
    }
}

}  // namespace

const TranslationTables& bundled_tables() {
    static const TranslationTables tables = [] {
        json doc = json::parse(embedded::default_tables_json());
        TranslationTables t = parse_tables_json(doc, "bundled tables");
        // Birthday pool always exists as a date range.
        AttributePool& birthday = t.pools["birthday"];
        birthday.attribute = "birthday";
        birthday.date_range = true;
        return t;
    }();
    return tables;
}

const std::vector<std::string>& bundled_name_pool() {
    static const std::vector<std::string> names = [] {
        json doc = json::parse(embedded::name_pool_json());
        std::vector<std::string> out;
        for (const auto& entry : doc) out.push_back(entry.get<std::string>());
        return out;
    }();
    return names;
}

TranslationTables load_translation_tables(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open translation tables: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SchemaError(path + ": malformed JSON: " + e.what());
    }
    TranslationTables merged = bundled_tables();
    overlay(merged, parse_tables_json(doc, path));
    return merged;
}

void export_english_defaults(const std::string& path) {
    const TranslationTables& tables = bundled_tables();
    ordered_json doc;
    ordered_json pools = ordered_json::object();
    ordered_json templates = ordered_json::object();
    for (std::string_view key : kAttributeKeys) {
        std::string attr(key);
        auto pool = tables.pools.find(attr);
        if (pool != tables.pools.end() && !pool->second.date_range) {
            auto en = pool->second.values.find(LanguageTag::en);
            if (en != pool->second.values.end())
                pools[attr]["en"] = en->second;
        }
        auto tmpl_langs = tables.templates.find(attr);
        if (tmpl_langs != tables.templates.end()) {
            auto en = tmpl_langs->second.find(LanguageTag::en);
            if (en != tmpl_langs->second.end()) {
                templates[attr]["en"] = {{"q", en->second.question_template},
                                         {"a", en->second.answer_template}};
            }
        }
    }
    doc["pools"] = std::move(pools);
    doc["templates"] = std::move(templates);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << doc.dump(2) << '\n';
}

void validate_tables(const TranslationTables& tables,
                     const std::vector<LanguageTag>& languages) {
    for (std::string_view key : kAttributeKeys) {
        std::string attr(key);
        auto pool_it = tables.pools.find(attr);
        if (pool_it == tables.pools.end())
            throw SchemaError("pools." + attr + ": missing attribute pool");
        const AttributePool& pool = pool_it->second;
        if (!pool.date_range) {
            auto en = pool.values.find(LanguageTag::en);
            if (en == pool.values.end() || en->second.empty())
                throw SchemaError("pools." + attr + ".en: missing English pool");
            for (LanguageTag lang : languages) {
                auto it = pool.values.find(lang);
                if (it == pool.values.end())
                    throw SchemaError("pools." + attr + "." +
                                      std::string(to_string(lang)) +
                                      ": missing language");
                if (it->second.size() != en->second.size())
                    throw SchemaError(
                        "pools." + attr + "." + std::string(to_string(lang)) +
                        ": " + std::to_string(it->second.size()) +
                        " values, English has " +
                        std::to_string(en->second.size()));
                for (std::size_t i = 0; i < it->second.size(); ++i) {
                    if (it->second[i].empty())
                        throw SchemaError("pools." + attr + "." +
                                          std::string(to_string(lang)) + "[" +
                                          std::to_string(i) + "]: empty value");
                }
            }
        }
        auto tmpl_it = tables.templates.find(attr);
        for (LanguageTag lang : languages) {
            std::string cell =
                "templates." + attr + "." + std::string(to_string(lang));
            if (tmpl_it == tables.templates.end() ||
                tmpl_it->second.find(lang) == tmpl_it->second.end())
                throw SchemaError(cell + ": missing template");
            const QATemplate& tmpl = tmpl_it->second.at(lang);
            if (count_placeholder(tmpl.question_template, "{name}") != 1)
                throw SchemaError(cell +
                                  ".q: must contain {name} exactly once");
            if (count_placeholder(tmpl.answer_template, "{name}") != 1 ||
                count_placeholder(tmpl.answer_template, "{value}") != 1)
                throw SchemaError(
                    cell + ".a: must contain {name} and {value} exactly once");
        }
    }
}

std::vector<Profile> generate_profiles(const GenSpec& spec,
                                       const TranslationTables& tables) {
    if (spec.n_profiles < 1)
        throw std::invalid_argument("n_profiles must be >= 1");
    if (spec.forget_profiles < 0 || spec.forget_profiles >= spec.n_profiles)
        throw std::invalid_argument(
            "forget_profiles must be in [0, n_profiles)");
    if (std::find(spec.languages.begin(), spec.languages.end(),
                  LanguageTag::en) == spec.languages.end())
        throw std::invalid_argument("languages must include en");
    validate_tables(tables, spec.languages);

    const std::vector<std::string>& pool_names =
        spec.name_pool.empty() ? bundled_name_pool() : spec.name_pool;
    if (pool_names.size() < static_cast<std::size_t>(spec.n_profiles))
        throw std::invalid_argument(
            "name pool has " + std::to_string(pool_names.size()) +
            " entries, need >= " + std::to_string(spec.n_profiles));

    Rng name_rng(salted_seed(spec.seed, "names"));
    std::vector<std::string> names = pool_names;
    name_rng.shuffle(names);
    names.resize(static_cast<std::size_t>(spec.n_profiles));

    // Categorical attributes in canonical order; birthday drawn in its slot.
    Rng attr_rng(salted_seed(spec.seed, "attributes"));
    std::set<std::vector<std::string>> seen_tuples;
    std::vector<Profile> profiles;
    profiles.reserve(static_cast<std::size_t>(spec.n_profiles));

    for (int id = 0; id < spec.n_profiles; ++id) {
        std::vector<std::string> tuple;  // English forms, for uniqueness
        std::map<std::string, std::size_t> picks;
        std::string birthday;
        int attempts = 0;
        do {
            if (++attempts > 1000)
                throw std::runtime_error(
                    "could not draw a unique attribute tuple after 1000 "
                    "attempts; pools are too small");
            tuple.clear();
            picks.clear();
            for (std::string_view key : kAttributeKeys) {
                std::string attr(key);
                const AttributePool& pool = tables.pools.at(attr);
                if (pool.date_range) {
                    birthday = random_birthday(attr_rng);
                    tuple.push_back(birthday);
                } else {
                    const auto& en_values = pool.values.at(LanguageTag::en);
                    std::size_t pick = attr_rng.below(en_values.size());
                    picks[attr] = pick;
                    tuple.push_back(en_values[pick]);
                }
            }
        } while (!seen_tuples.insert(tuple).second);

        Profile profile;
        profile.profile_id = id;
        profile.name = names[static_cast<std::size_t>(id)];
        for (std::string_view key : kAttributeKeys) {
            std::string attr(key);
            const AttributePool& pool = tables.pools.at(attr);
            for (LanguageTag lang : spec.languages) {
                profile.attributes[attr][lang] =
                    pool.date_range ? birthday
                                    : pool.values.at(lang)[picks.at(attr)];
            }
        }
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

std::vector<QAPair> render_qa(const std::vector<Profile>& profiles,
                              const TranslationTables& tables,
                              const GenSpec& spec) {
    validate_tables(tables, spec.languages);
    std::vector<QAPair> pairs;
    pairs.reserve(profiles.size() * kAttributeKeys.size() *
                  spec.languages.size());
    for (const Profile& profile : profiles) {
        for (std::string_view key : kAttributeKeys) {
            std::string attr(key);
            for (LanguageTag lang : spec.languages) {
                const QATemplate& tmpl = tables.templates.at(attr).at(lang);
                const std::string& value = profile.attributes.at(attr).at(lang);
                QAPair pair;
                pair.pair_id = std::to_string(profile.profile_id) + "-" + attr +
                               "-" + std::string(to_string(lang));
                pair.profile_id = profile.profile_id;
                pair.attribute = attr;
                pair.language = lang;
                pair.question = substitute_once(tmpl.question_template,
                                                "{name}", profile.name);
                pair.answer = substitute_once(
                    substitute_once(tmpl.answer_template, "{name}",
                                    profile.name),
                    "{value}", value);
                pair.split = SplitLabel::retain;
                pairs.push_back(std::move(pair));
            }
        }
    }
    return pairs;
}

void assign_split(std::vector<QAPair>& pairs, const GenSpec& spec) {
    std::set<std::int64_t> id_set;
    for (const QAPair& p : pairs) id_set.insert(p.profile_id);
    std::vector<std::int64_t> ids(id_set.begin(), id_set.end());

    Rng rng(salted_seed(spec.seed, "split"));
    rng.shuffle(ids);

    std::set<std::int64_t> forget_ids;
    for (std::size_t i = 0;
         i < ids.size() && i < static_cast<std::size_t>(spec.forget_profiles);
         ++i)
        forget_ids.insert(ids[i]);

    for (QAPair& p : pairs)
        p.split = forget_ids.count(p.profile_id) ? SplitLabel::forget
                                                 : SplitLabel::retain;
}

}  // namespace uleval
