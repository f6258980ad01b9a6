#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "unlearn_eval/lang.hpp"

namespace uleval {

// Row-aligned sentence embeddings: n rows (sentences, aligned across files
// by pair ordering) by d columns.
struct EmbeddingMatrix {
    Eigen::MatrixXd values;
    std::string label;
};

// Linear CKA between two matrices with equal row counts:
//   ||Yc' Xc||_F^2 / (||Xc' Xc||_F * ||Yc' Yc||_F)
// after column centering, computed in the d x d Gram form. Symmetric,
// invariant to orthogonal transforms and isotropic scaling, in [0, 1] up to
// roundoff. Throws std::invalid_argument on row mismatch, n < 2, or a
// matrix that centers to all zeros.
double linear_cka(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

// File format: header line "n d", then n rows of d decimals, whitespace- or
// comma-separated. Throws IoError / SchemaError.
EmbeddingMatrix read_embedding_matrix(const std::string& path);

struct CkaCell {
    LanguageTag language;
    double value;
};

struct CkaTable {
    LanguageTag base;
    std::vector<CkaCell> cells;  // one per non-base language, sorted
    double average = 0.0;
};

// Looks for <dir>/<lang>.<ext> (ext in txt|csv|dat|mat) per supported
// language and scores each against the base language's matrix.
CkaTable cka_table(const std::string& dir, LanguageTag base);

}  // namespace uleval
