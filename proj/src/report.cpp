#include "unlearn_eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "unlearn_eval/errors.hpp"

namespace uleval {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_escape(const std::string& field) {
    bool quote = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!quote) return field;
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

MetricRow& row_for(MetricReport& report, const GroupKey& key) {
    for (MetricRow& row : report.rows) {
        if (row.model_id == key.model_id &&
            row.query_language == key.query_language && row.split == key.split)
            return row;
    }
    MetricRow row;
    row.model_id = key.model_id;
    row.query_language = key.query_language;
    row.split = key.split;
    report.rows.push_back(std::move(row));
    return report.rows.back();
}

void sort_rows(MetricReport& report) {
    std::sort(report.rows.begin(), report.rows.end(),
              [](const MetricRow& a, const MetricRow& b) {
                  if (a.model_id != b.model_id) return a.model_id < b.model_id;
                  if (a.query_language != b.query_language)
                      return a.query_language < b.query_language;
                  return a.split < b.split;
              });
}

std::string opt_ratio(const std::optional<double>& value) {
    return value ? format_ratio(*value) : std::string();
}

std::string opt_nmix(const std::optional<double>& value) {
    return value ? format_nmix(*value) : std::string();
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    if (text == "md") return OutputFormat::md;
    throw std::invalid_argument("unknown format '" + std::string(text) +
                                "' (expected csv, json or md)");
}

std::string format_ratio(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

std::string format_nmix(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

void merge_scores(MetricReport& report,
                  const std::map<GroupKey, RefGroupStats>& scores) {
    for (const auto& [key, stats] : scores) {
        MetricRow& row = row_for(report, key);
        row.em = stats.em_mean;
        row.km = stats.km_mean;
        row.n_records = std::max(row.n_records, stats.n_records);
    }
    sort_rows(report);
}

void merge_nmix(MetricReport& report,
                const std::map<GroupKey, NMixGroupStats>& stats) {
    for (const auto& [key, s] : stats) {
        MetricRow& row = row_for(report, key);
        row.nmix_avg = s.mean;
        row.n_records = std::max(row.n_records, s.n_scored + s.n_skipped);
    }
    sort_rows(report);
}

void merge_judge(MetricReport& report,
                 const std::map<GroupKey, JudgeGroupStats>& stats) {
    for (const auto& [key, s] : stats) {
        MetricRow& row = row_for(report, key);
        row.judge_ratio = s.yes_ratio;
        row.n_records =
            std::max(row.n_records, s.n_yes + s.n_no + s.n_ambiguous);
    }
    sort_rows(report);
}

std::string render_report(const MetricReport& report, OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::ostringstream out;
        out << "model_id,query_language,split,em,km,nmix_avg,judge_ratio,"
               "n_records\n";
        for (const MetricRow& row : report.rows) {
            out << csv_escape(row.model_id) << ','
                << to_string(row.query_language) << ',' << to_string(row.split)
                << ',' << opt_ratio(row.em) << ',' << opt_ratio(row.km) << ','
                << opt_nmix(row.nmix_avg) << ',' << opt_ratio(row.judge_ratio)
                << ',' << row.n_records << '\n';
        }
        return out.str();
    }
    if (format == OutputFormat::json) {
        ordered_json rows = ordered_json::array();
        for (const MetricRow& row : report.rows) {
            ordered_json obj;
            obj["model_id"] = row.model_id;
            obj["query_language"] = std::string(to_string(row.query_language));
            obj["split"] = std::string(to_string(row.split));
            if (row.em) obj["em"] = *row.em;
            if (row.km) obj["km"] = *row.km;
            if (row.nmix_avg) obj["nmix_avg"] = *row.nmix_avg;
            if (row.judge_ratio) obj["judge_ratio"] = *row.judge_ratio;
            obj["n_records"] = row.n_records;
            rows.push_back(std::move(obj));
        }
        return rows.dump(2) + "\n";
    }

    // Markdown: one table per model, language rows, forget/retain column
    // groups in the layout of the per-language result tables.
    std::ostringstream out;
    std::vector<std::string> models;
    for (const MetricRow& row : report.rows) {
        if (std::find(models.begin(), models.end(), row.model_id) ==
            models.end())
            models.push_back(row.model_id);
    }
    for (const std::string& model : models) {
        const MetricRow* sample = nullptr;
        std::vector<LanguageTag> languages;
        for (const MetricRow& row : report.rows) {
            if (row.model_id != model) continue;
            if (!sample) sample = &row;
            if (std::find(languages.begin(), languages.end(),
                          row.query_language) == languages.end())
                languages.push_back(row.query_language);
        }
        auto find_row = [&](LanguageTag lang,
                            SplitLabel split) -> const MetricRow* {
            for (const MetricRow& row : report.rows) {
                if (row.model_id == model && row.query_language == lang &&
                    row.split == split)
                    return &row;
            }
            return nullptr;
        };

        out << "## " << model << "\n\n";
        out << "| Language | EM (forget) | KM (forget) | N-Mix (forget) | "
               "Judge (forget) | EM (retain) | KM (retain) | N-Mix (retain) "
               "| Judge (retain) |\n";
        out << "|---|---|---|---|---|---|---|---|---|\n";
        for (LanguageTag lang : languages) {
            out << "| " << to_string(lang) << " |";
            for (SplitLabel split : {SplitLabel::forget, SplitLabel::retain}) {
                const MetricRow* row = find_row(lang, split);
                out << ' ' << (row && row->em ? format_ratio(*row->em) : "-")
                    << " |";
                out << ' ' << (row && row->km ? format_ratio(*row->km) : "-")
                    << " |";
                out << ' '
                    << (row && row->nmix_avg ? format_nmix(*row->nmix_avg)
                                             : "-")
                    << " |";
                out << ' '
                    << (row && row->judge_ratio ? format_ratio(*row->judge_ratio)
                                                : "-")
                    << " |";
            }
            out << '\n';
        }
        out << '\n';
    }
    return out.str();
}

std::string render_score_csv(const std::map<GroupKey, RefGroupStats>& scores,
                             bool with_em, bool with_km) {
    std::ostringstream out;
    out << "model_id,query_language,split";
    if (with_em) out << ",em";
    if (with_km) out << ",km";
    out << ",n_records\n";
    for (const auto& [key, stats] : scores) {
        out << csv_escape(key.model_id) << ',' << to_string(key.query_language)
            << ',' << to_string(key.split);
        if (with_em) out << ',' << format_ratio(stats.em_mean);
        if (with_km) out << ',' << format_ratio(stats.km_mean);
        out << ',' << stats.n_records << '\n';
    }
    return out.str();
}

std::string render_nmix_csv(const std::map<GroupKey, NMixGroupStats>& stats) {
    std::ostringstream out;
    out << "model_id,query_language,split,nmix_avg,n_records,n_skipped\n";
    for (const auto& [key, s] : stats) {
        out << csv_escape(key.model_id) << ',' << to_string(key.query_language)
            << ',' << to_string(key.split) << ','
            << (s.mean ? format_nmix(*s.mean) : std::string()) << ','
            << s.n_scored + s.n_skipped << ',' << s.n_skipped << '\n';
    }
    return out.str();
}

std::string render_judge_csv(const std::map<GroupKey, JudgeGroupStats>& stats) {
    std::ostringstream out;
    out << "model_id,query_language,split,judge_ratio,n_yes,n_no,"
           "n_ambiguous\n";
    for (const auto& [key, s] : stats) {
        out << csv_escape(key.model_id) << ',' << to_string(key.query_language)
            << ',' << to_string(key.split) << ',' << format_ratio(s.yes_ratio)
            << ',' << s.n_yes << ',' << s.n_no << ',' << s.n_ambiguous << '\n';
    }
    return out.str();
}

std::string render_judge_matrix_csv(const JudgeMatrix& matrix) {
    std::ostringstream out;
    out << "answer_language";
    for (LanguageTag lang : matrix.languages) out << ',' << to_string(lang);
    out << '\n';
    for (std::size_t a = 0; a < matrix.languages.size(); ++a) {
        out << to_string(matrix.languages[a]);
        for (std::size_t b = 0; b < matrix.languages.size(); ++b)
            out << ',' << format_ratio(matrix.non_equivalence[a][b]);
        out << '\n';
    }
    return out.str();
}

void merge_metric_csv(MetricReport& report, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open metric CSV: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw SchemaError(path + ": empty file, expected a CSV header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = csv_split(line);

    auto column = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return static_cast<int>(i);
        }
        return -1;
    };
    int c_model = column("model_id");
    int c_lang = column("query_language");
    int c_split = column("split");
    if (c_model < 0 || c_lang < 0 || c_split < 0)
        throw SchemaError(path +
                          ": header lacks model_id/query_language/split");
    int c_em = column("em");
    int c_km = column("km");
    int c_nmix = column("nmix_avg");
    int c_judge = column("judge_ratio");
    int c_n = column("n_records");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = csv_split(line);
        auto field = [&](int idx) -> std::string {
            return idx >= 0 && idx < static_cast<int>(fields.size())
                       ? fields[static_cast<std::size_t>(idx)]
                       : std::string();
        };
        auto lang = parse_language(field(c_lang));
        auto split = parse_split(field(c_split));
        if (!lang || !split)
            throw SchemaError(path + ":" + std::to_string(line_no) +
                              ": bad language or split value");
        GroupKey key{field(c_model), *lang, *split};
        MetricRow& row = row_for(report, key);
        auto set_opt = [&](int idx, std::optional<double>& target) {
            std::string value = field(idx);
            if (!value.empty()) target = std::stod(value);
        };
        set_opt(c_em, row.em);
        set_opt(c_km, row.km);
        set_opt(c_nmix, row.nmix_avg);
        set_opt(c_judge, row.judge_ratio);
        std::string n = field(c_n);
        if (!n.empty())
            row.n_records = std::max<std::int64_t>(row.n_records,
                                                   std::stoll(n));
    }
    sort_rows(report);
}

void write_manifest(const std::string& path, const Manifest& manifest) {
    ordered_json doc;
    doc["tool"] = std::string(kToolName);
    doc["version"] = std::string(kToolVersion);
    doc["command"] = manifest.command;
    ordered_json config = ordered_json::object();
    for (const auto& [key, value] : manifest.config) config[key] = value;
    doc["config"] = std::move(config);
    ordered_json inputs = ordered_json::object();
    for (const auto& [file, hash] : manifest.input_hashes) inputs[file] = hash;
    doc["inputs"] = std::move(inputs);
    doc["outputs"] = manifest.outputs;
    if (!manifest.prompt_hash.empty())
        doc["judge_prompt_hash"] = manifest.prompt_hash;
    write_text_file(path, doc.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace uleval
