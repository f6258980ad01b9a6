#include "unlearn_eval/cka.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "unlearn_eval/errors.hpp"

namespace uleval {

double linear_cka(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.rows() != y.rows())
        throw std::invalid_argument(
            "linear_cka: row mismatch (" + std::to_string(x.rows()) + " vs " +
            std::to_string(y.rows()) + ")");
    if (x.rows() < 2)
        throw std::invalid_argument("linear_cka: need at least 2 rows");

    Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
    Eigen::MatrixXd yc = y.rowwise() - y.colwise().mean();

    double x_norm = (xc.transpose() * xc).norm();
    double y_norm = (yc.transpose() * yc).norm();
    if (x_norm == 0.0 || y_norm == 0.0)
        throw std::invalid_argument(
            "linear_cka: degenerate input (all-zero after centering)");

    double cross = (yc.transpose() * xc).squaredNorm();
    return cross / (x_norm * y_norm);
}

EmbeddingMatrix read_embedding_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open embedding matrix: " + path);

    auto next_line = [&](std::string& line) -> bool {
        while (std::getline(in, line)) {
            for (char& c : line) {
                if (c == ',') c = ' ';
            }
            std::istringstream probe(line);
            std::string token;
            if (probe >> token) return true;  // skip blank lines
        }
        return false;
    };

    std::string line;
    if (!next_line(line))
        throw SchemaError(path + ": missing 'n d' header line");
    std::istringstream header(line);
    long n = 0, d = 0;
    if (!(header >> n >> d) || n < 1 || d < 1)
        throw SchemaError(path + ": header must be 'n d' with positive counts");

    EmbeddingMatrix matrix;
    matrix.label = std::filesystem::path(path).stem().string();
    matrix.values.resize(n, d);
    for (long i = 0; i < n; ++i) {
        if (!next_line(line))
            throw SchemaError(path + ": expected " + std::to_string(n) +
                              " rows, got " + std::to_string(i));
        std::istringstream row(line);
        for (long j = 0; j < d; ++j) {
            double value;
            if (!(row >> value))
                throw SchemaError(path + ": row " + std::to_string(i + 1) +
                                  " has fewer than " + std::to_string(d) +
                                  " values");
            if (!std::isfinite(value))
                throw SchemaError(path + ": non-finite value at row " +
                                  std::to_string(i + 1));
            matrix.values(i, j) = value;
        }
    }
    return matrix;
}

CkaTable cka_table(const std::string& dir, LanguageTag base) {
    auto find_matrix_file = [&](LanguageTag lang) -> std::string {
        for (const char* ext : {".txt", ".csv", ".dat", ".mat"}) {
            std::filesystem::path candidate =
                std::filesystem::path(dir) /
                (std::string(to_string(lang)) + ext);
            if (std::filesystem::exists(candidate)) return candidate.string();
        }
        return {};
    };

    std::string base_path = find_matrix_file(base);
    if (base_path.empty())
        throw IoError("no matrix file for base language '" +
                      std::string(to_string(base)) + "' in " + dir);
    EmbeddingMatrix base_matrix = read_embedding_matrix(base_path);

    CkaTable table;
    table.base = base;
    double sum = 0.0;
    for (LanguageTag lang : kAllLanguages) {
        if (lang == base) continue;
        std::string path = find_matrix_file(lang);
        if (path.empty()) continue;
        EmbeddingMatrix other = read_embedding_matrix(path);
        table.cells.push_back(
            {lang, linear_cka(base_matrix.values, other.values)});
        sum += table.cells.back().value;
    }
    if (table.cells.empty())
        throw IoError("no non-base matrix files found in " + dir);
    table.average = sum / static_cast<double>(table.cells.size());
    return table;
}

}  // namespace uleval
