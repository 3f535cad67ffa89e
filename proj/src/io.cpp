/// @file  io.cpp

#include <ordembed/io.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ordembed::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, std::size_t line,
                       const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

} // namespace

Dataset load_triplets(const std::string& path, int n) {
    std::ifstream in = open_in(path);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) fail(path, 1, "missing header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "i,j,k,y") fail(path, line_no, "expected header 'i,j,k,y'");

    Dataset data;
    data.n = n;
    int max_index = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        long long i = 0, j = 0, k = 0, y = 0;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(fields >> i >> c1 >> j >> c2 >> k >> c3 >> y) || c1 != ',' ||
            c2 != ',' || c3 != ',' || !(fields >> std::ws).eof()) {
            fail(path, line_no, "malformed row '" + line + "'");
        }
        if (i < 0 || j < 0 || k < 0) fail(path, line_no, "negative index");
        if (n > 0 && (i >= n || j >= n || k >= n)) {
            fail(path, line_no, "index exceeds n = " + std::to_string(n));
        }
        if (i == j || i == k || j == k) fail(path, line_no, "indices must be distinct");
        if (j >= k) fail(path, line_no, "non-canonical row: requires j < k");
        if (y != -1 && y != 1) fail(path, line_no, "label must be -1 or 1");
        data.observations.emplace_back(
            Triplet(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)),
            static_cast<int>(y));
        max_index = std::max(max_index, static_cast<int>(std::max({i, j, k})));
    }
    if (n == 0) data.n = max_index + 1;
    return data;
}

void save_triplets(const std::string& path, const Dataset& data) {
    std::ofstream out = open_out(path);
    out << "i,j,k,y\n";
    for (const auto& obs : data.observations) {
        out << obs.triplet.i << ',' << obs.triplet.j << ',' << obs.triplet.k << ','
            << obs.y << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

void save_matrix(const std::string& path, const Eigen::MatrixXd& matrix,
                 const std::string& kind, int d) {
    if (kind != "gram" && kind != "points") {
        throw std::invalid_argument("matrix kind must be 'gram' or 'points'");
    }
    json doc;
    doc["n"] = matrix.rows();
    doc["d"] = d;
    doc["kind"] = kind;
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(matrix.size()));
    for (Eigen::Index r = 0; r < matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < matrix.cols(); ++c) data.push_back(matrix(r, c));
    doc["data"] = std::move(data);
    std::ofstream out = open_out(path);
    out << doc.dump() << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

MatrixFile load_matrix(const std::string& path) {
    std::ifstream in = open_in(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& err) {
        throw std::runtime_error(path + ": " + err.what());
    }
    MatrixFile file;
    try {
        file.n = doc.at("n").get<int>();
        file.d = doc.at("d").get<int>();
        file.kind = doc.at("kind").get<std::string>();
        auto data = doc.at("data").get<std::vector<double>>();
        Eigen::Index cols = file.kind == "points" ? file.d : file.n;
        if (file.kind != "points" && file.kind != "gram") {
            throw std::runtime_error(path + ": unknown matrix kind '" + file.kind + "'");
        }
        if (file.n < 1 || cols < 1 ||
            data.size() != static_cast<std::size_t>(file.n) * static_cast<std::size_t>(cols)) {
            throw std::runtime_error(path + ": data length does not match n, d, kind");
        }
        file.matrix.resize(file.n, cols);
        std::size_t idx = 0;
        for (Eigen::Index r = 0; r < file.n; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) file.matrix(r, c) = data[idx++];
    } catch (const json::exception& err) {
        throw std::runtime_error(path + ": " + err.what());
    }
    return file;
}

void save_results(const std::string& path, const std::vector<TrialResult>& rows) {
    std::ofstream out = open_out(path);
    out.precision(17);
    out << "solver,samples,trial,seed,pred_err,frob_err,rel_frob_err,wall_time_s,status\n";
    for (const auto& row : rows) {
        std::string status = row.status; // keep the CSV one value per field
        std::replace_if(
            status.begin(), status.end(),
            [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ';');
        out << row.solver << ',' << row.sample_count << ',' << row.trial << ','
            << row.seed << ',' << row.prediction_error << ','
            << row.gram_frobenius_error << ',' << row.relative_gram_error << ','
            << row.wall_time_s << ',' << status << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

void save_summary(const std::string& path, const std::vector<SweepSummaryRow>& rows) {
    std::ofstream out = open_out(path);
    out.precision(17);
    out << "solver,samples,trials,failures,"
           "pred_err_q1,pred_err_median,pred_err_q3,"
           "frob_err_q1,frob_err_median,frob_err_q3,"
           "rel_err_q1,rel_err_median,rel_err_q3\n";
    for (const auto& row : rows) {
        out << row.solver << ',' << row.sample_count << ',' << row.trials << ','
            << row.failures << ',' << row.pred_err_q1 << ',' << row.pred_err_median
            << ',' << row.pred_err_q3 << ',' << row.frob_err_q1 << ','
            << row.frob_err_median << ',' << row.frob_err_q3 << ',' << row.rel_err_q1
            << ',' << row.rel_err_median << ',' << row.rel_err_q3 << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

} // namespace ordembed::io
