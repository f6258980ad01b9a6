#include "unlearn_eval/jsonl.hpp"

#include <fstream>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

#include "unlearn_eval/errors.hpp"
#include "unlearn_eval/unicode.hpp"

namespace uleval {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void schema_fail(const std::string& path, std::size_t line,
                              const std::string& what) {
    throw SchemaError(path + ":" + std::to_string(line) + ": " + what);
}

std::string get_string(const ordered_json& obj, const char* field,
                       const std::string& path, std::size_t line) {
    auto it = obj.find(field);
    if (it == obj.end())
        schema_fail(path, line, std::string("missing required field '") +
                                    field + "'");
    if (!it->is_string())
        schema_fail(path, line, std::string("field '") + field +
                                    "' must be a string");
    return nfc(it->get<std::string>());
}

std::int64_t get_int(const ordered_json& obj, const char* field,
                     const std::string& path, std::size_t line) {
    auto it = obj.find(field);
    if (it == obj.end())
        schema_fail(path, line, std::string("missing required field '") +
                                    field + "'");
    if (!it->is_number_integer())
        schema_fail(path, line, std::string("field '") + field +
                                    "' must be an integer");
    return it->get<std::int64_t>();
}

double get_number(const ordered_json& obj, const char* field,
                  const std::string& path, std::size_t line) {
    auto it = obj.find(field);
    if (it == obj.end())
        schema_fail(path, line, std::string("missing required field '") +
                                    field + "'");
    if (!it->is_number())
        schema_fail(path, line,
                    std::string("field '") + field + "' must be a number");
    return it->get<double>();
}

LanguageTag get_language(const ordered_json& obj, const char* field,
                         const std::string& path, std::size_t line) {
    std::string code = get_string(obj, field, path, line);
    auto lang = parse_language(code);
    if (!lang)
        schema_fail(path, line, std::string("field '") + field +
                                    "' holds unsupported language tag '" +
                                    code + "'");
    return *lang;
}

SplitLabel get_split(const ordered_json& obj, const char* field,
                     const std::string& path, std::size_t line) {
    std::string value = get_string(obj, field, path, line);
    auto split = parse_split(value);
    if (!split)
        schema_fail(path, line, std::string("field '") + field +
                                    "' must be \"forget\" or \"retain\"");
    return *split;
}

std::string collect_extras(const ordered_json& obj,
                           const std::set<std::string>& known) {
    ordered_json extras = ordered_json::object();
    for (auto& [key, value] : obj.items()) {
        if (known.find(key) == known.end()) extras[key] = value;
    }
    return extras.empty() ? std::string() : extras.dump();
}

bool valid_birthday(const std::string& value) {
    // YYYY-MM-DD with year in [1950, 2010]; month/day validity is checked
    // coarsely (the generator never emits impossible dates).
    if (value.size() != 10 || value[4] != '-' || value[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (value[i] < '0' || value[i] > '9') return false;
    }
    int year = std::stoi(value.substr(0, 4));
    int month = std::stoi(value.substr(5, 2));
    int day = std::stoi(value.substr(8, 2));
    return year >= 1950 && year <= 2010 && month >= 1 && month <= 12 &&
           day >= 1 && day <= 31;
}

template <typename Record>
std::vector<Record> read_lines(
    const std::string& path,
    const std::function<Record(const ordered_json&, std::size_t)>& parse) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<Record> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim_ascii(line).empty()) continue;
        ordered_json obj;
        try {
            obj = ordered_json::parse(line);
        } catch (const ordered_json::exception& e) {
            schema_fail(path, line_no, std::string("malformed JSON: ") +
                                           e.what());
        }
        if (!obj.is_object())
            schema_fail(path, line_no, "record must be a JSON object");
        out.push_back(parse(obj, line_no));
    }
    return out;
}

void write_lines(const std::string& path,
                 const std::vector<ordered_json>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (const ordered_json& row : rows) out << row.dump() << '\n';
    if (!out) throw IoError("write failed: " + path);
}

ordered_json with_extras(ordered_json obj, const std::string& extra_json) {
    if (!extra_json.empty()) {
        ordered_json extras = ordered_json::parse(extra_json);
        for (auto& [key, value] : extras.items()) {
            if (obj.find(key) == obj.end()) obj[key] = value;
        }
    }
    return obj;
}

}  // namespace

std::optional<SplitLabel> parse_split(std::string_view text) {
    if (text == "forget") return SplitLabel::forget;
    if (text == "retain") return SplitLabel::retain;
    return std::nullopt;
}

bool is_attribute_key(std::string_view key) {
    for (std::string_view k : kAttributeKeys) {
        if (k == key) return true;
    }
    return false;
}

std::vector<Profile> read_profiles(const std::string& path) {
    return read_lines<Profile>(path, [&](const ordered_json& obj,
                                         std::size_t line) {
        Profile p;
        p.profile_id = get_int(obj, "profile_id", path, line);
        if (p.profile_id < 0)
            schema_fail(path, line, "field 'profile_id' must be >= 0");
        p.name = get_string(obj, "name", path, line);
        auto attrs = obj.find("attributes");
        if (attrs == obj.end())
            schema_fail(path, line, "missing required field 'attributes'");
        if (!attrs->is_object())
            schema_fail(path, line, "field 'attributes' must be an object");
        for (auto& [attr, values] : attrs->items()) {
            if (!is_attribute_key(attr))
                schema_fail(path, line, "unknown attribute '" + attr + "'");
            if (!values.is_object())
                schema_fail(path, line, "attribute '" + attr +
                                            "' must map languages to strings");
            for (auto& [code, value] : values.items()) {
                auto lang = parse_language(code);
                if (!lang)
                    schema_fail(path, line, "attribute '" + attr +
                                                "' uses unsupported language '" +
                                                code + "'");
                if (!value.is_string())
                    schema_fail(path, line, "attribute '" + attr + "." + code +
                                                "' must be a string");
                std::string text = nfc(value.get<std::string>());
                if (attr == "birthday" && !valid_birthday(text))
                    schema_fail(path, line,
                                "field 'birthday." + code +
                                    "' must be YYYY-MM-DD with year in "
                                    "[1950, 2010], got '" +
                                    text + "'");
                p.attributes[attr][*lang] = std::move(text);
            }
        }
        p.extra_json = collect_extras(obj, {"profile_id", "name", "attributes"});
        return p;
    });
}

std::vector<QAPair> read_qa(const std::string& path) {
    return read_lines<QAPair>(path, [&](const ordered_json& obj,
                                        std::size_t line) {
        QAPair q;
        q.pair_id = get_string(obj, "pair_id", path, line);
        q.profile_id = get_int(obj, "profile_id", path, line);
        q.attribute = get_string(obj, "attribute", path, line);
        if (!is_attribute_key(q.attribute))
            schema_fail(path, line, "unknown attribute '" + q.attribute + "'");
        q.language = get_language(obj, "language", path, line);
        q.question = get_string(obj, "question", path, line);
        q.answer = get_string(obj, "answer", path, line);
        q.split = get_split(obj, "split", path, line);
        q.extra_json = collect_extras(
            obj, {"pair_id", "profile_id", "attribute", "language", "question",
                  "answer", "split"});
        return q;
    });
}

std::vector<GenerationRecord> read_generations(const std::string& path) {
    return read_lines<GenerationRecord>(path, [&](const ordered_json& obj,
                                                  std::size_t line) {
        GenerationRecord g;
        g.pair_id = get_string(obj, "pair_id", path, line);
        g.query_language = get_language(obj, "query_language", path, line);
        g.question = get_string(obj, "question", path, line);
        g.reference = get_string(obj, "reference", path, line);
        g.output = get_string(obj, "output", path, line);
        g.model_id = get_string(obj, "model_id", path, line);
        g.split = get_split(obj, "split", path, line);
        g.extra_json = collect_extras(
            obj, {"pair_id", "query_language", "question", "reference",
                  "output", "model_id", "split"});
        return g;
    });
}

std::vector<LogProbRecord> read_logprobs(const std::string& path) {
    return read_lines<LogProbRecord>(path, [&](const ordered_json& obj,
                                               std::size_t line) {
        LogProbRecord r;
        r.pair_id = get_string(obj, "pair_id", path, line);
        r.split = get_split(obj, "split", path, line);
        r.log_likelihood = get_number(obj, "log_likelihood", path, line);
        r.extra_json =
            collect_extras(obj, {"pair_id", "split", "log_likelihood"});
        return r;
    });
}

void write_profiles(const std::string& path, const std::vector<Profile>& rows) {
    std::vector<ordered_json> lines;
    lines.reserve(rows.size());
    for (const Profile& p : rows) {
        ordered_json obj;
        obj["profile_id"] = p.profile_id;
        obj["name"] = p.name;
        ordered_json attrs = ordered_json::object();
        // Canonical attribute order keeps generated files byte-stable.
        for (std::string_view key : kAttributeKeys) {
            auto it = p.attributes.find(std::string(key));
            if (it == p.attributes.end()) continue;
            ordered_json values = ordered_json::object();
            for (const auto& [lang, value] : it->second)
                values[std::string(to_string(lang))] = value;
            attrs[std::string(key)] = std::move(values);
        }
        obj["attributes"] = std::move(attrs);
        lines.push_back(with_extras(std::move(obj), p.extra_json));
    }
    write_lines(path, lines);
}

void write_qa(const std::string& path, const std::vector<QAPair>& rows) {
    std::vector<ordered_json> lines;
    lines.reserve(rows.size());
    for (const QAPair& q : rows) {
        ordered_json obj;
        obj["pair_id"] = q.pair_id;
        obj["profile_id"] = q.profile_id;
        obj["attribute"] = q.attribute;
        obj["language"] = std::string(to_string(q.language));
        obj["question"] = q.question;
        obj["answer"] = q.answer;
        obj["split"] = std::string(to_string(q.split));
        lines.push_back(with_extras(std::move(obj), q.extra_json));
    }
    write_lines(path, lines);
}

void write_generations(const std::string& path,
                       const std::vector<GenerationRecord>& rows) {
    std::vector<ordered_json> lines;
    lines.reserve(rows.size());
    for (const GenerationRecord& g : rows) {
        ordered_json obj;
        obj["pair_id"] = g.pair_id;
        obj["query_language"] = std::string(to_string(g.query_language));
        obj["question"] = g.question;
        obj["reference"] = g.reference;
        obj["output"] = g.output;
        obj["model_id"] = g.model_id;
        obj["split"] = std::string(to_string(g.split));
        lines.push_back(with_extras(std::move(obj), g.extra_json));
    }
    write_lines(path, lines);
}

void write_logprobs(const std::string& path,
                    const std::vector<LogProbRecord>& rows) {
    std::vector<ordered_json> lines;
    lines.reserve(rows.size());
    for (const LogProbRecord& r : rows) {
        ordered_json obj;
        obj["pair_id"] = r.pair_id;
        obj["split"] = std::string(to_string(r.split));
        obj["log_likelihood"] = r.log_likelihood;
        lines.push_back(with_extras(std::move(obj), r.extra_json));
    }
    write_lines(path, lines);
}

}  // namespace uleval
