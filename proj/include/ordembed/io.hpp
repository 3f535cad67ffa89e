/// @file  io.hpp
/// @brief Dataset, matrix, and result-table file formats.
///
/// Triplet files are comma-separated text with header `i,j,k,y`, 0-based
/// indices, y in {-1, 1}, one observation per line, canonical rows (j < k).
/// Matrices are JSON objects {"n", "d", "kind": "gram"|"points", "data":
/// row-major}. Result tables are CSV with header
/// `solver,samples,trial,seed,pred_err,frob_err,rel_frob_err,wall_time_s,status`.

#pragma once

#include <ordembed/edm.hpp>
#include <ordembed/experiment.hpp>
#include <ordembed/risk.hpp>

#include <string>
#include <vector>

namespace ordembed::io {

/// Parses a triplet file. When n > 0 every index must be below n; otherwise
/// n is inferred as one past the largest index seen. Malformed lines,
/// out-of-range indices, non-canonical rows (j >= k), and labels outside
/// {-1, 1} raise std::runtime_error naming the line number.
Dataset load_triplets(const std::string& path, int n = 0);

void save_triplets(const std::string& path, const Dataset& data);

/// kind must be "points" (data is n x d) or "gram" (data is n x n; d records
/// the ambient dimension as metadata).
void save_matrix(const std::string& path, const Eigen::MatrixXd& matrix,
                 const std::string& kind, int d);

struct MatrixFile {
    Eigen::MatrixXd matrix;
    std::string kind;
    int n = 0;
    int d = 0;
};

MatrixFile load_matrix(const std::string& path);

void save_results(const std::string& path, const std::vector<TrialResult>& rows);

void save_summary(const std::string& path, const std::vector<SweepSummaryRow>& rows);

} // namespace ordembed::io
