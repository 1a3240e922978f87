#include "aeelm/elm.hpp"

#include "aeelm/core/errors.hpp"
#include "aeelm/core/math.hpp"
#include "aeelm/core/rng.hpp"
#include "aeelm/linalg.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace aeelm {

Vec hidden_map(const ElmModel& model, std::span<const double> z) {
    if (z.size() != model.feature_dim)
        throw std::invalid_argument("hidden_map: feature dimension mismatch");
    Vec h(model.k);
    for (std::size_t i = 0; i < model.k; ++i)
        h[i] = sigmoid(kern::dot(model.w.row(i), z.data(), model.feature_dim) + model.b[i]);
    return h;
}

ElmModel train_elm(const Matrix& z, const Vec& y, std::size_t k, std::uint64_t seed,
                   double ridge_lambda) {
    if (z.rows() == 0 || k == 0) throw std::invalid_argument("train_elm: N and K must be positive");
    if (y.size() != z.rows()) throw std::invalid_argument("train_elm: target length mismatch");
    for (double v : z.data())
        if (!std::isfinite(v)) throw DataError("train_elm: non-finite feature value");
    for (double v : y)
        if (!std::isfinite(v)) throw DataError("train_elm: non-finite target value");

    ElmModel model;
    model.k = k;
    model.feature_dim = z.cols();
    model.ridge_lambda = ridge_lambda;
    model.seed = seed;
    model.w = Matrix(k, z.cols());
    model.b.resize(k);
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < z.cols(); ++j) model.w(i, j) = rng.uniform(-1.0, 1.0);
        model.b[i] = rng.uniform(-1.0, 1.0);
    }

    Matrix h(z.rows(), k);
    for (std::size_t r = 0; r < z.rows(); ++r) {
        const Vec hr = hidden_map(model, z.row_span(r));
        for (std::size_t i = 0; i < k; ++i) h(r, i) = hr[i];
    }

    model.beta = ridge_lambda > 0.0 ? lstsq_ridge(h, y, ridge_lambda) : lstsq_min_norm(h, y);
    return model;
}

Vec elm_predict(const ElmModel& model, const Matrix& z) {
    Vec out(z.rows());
    for (std::size_t r = 0; r < z.rows(); ++r) {
        const Vec h = hidden_map(model, z.row_span(r));
        out[r] = kern::dot(h.data(), model.beta.data(), model.k);
    }
    return out;
}

namespace {

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const nlohmann::json& rows, std::size_t expect_rows,
                        std::size_t expect_cols, const char* what) {
    if (rows.size() != expect_rows) throw DataError(std::string(what) + ": row count mismatch");
    Matrix m(expect_rows, expect_cols);
    for (std::size_t r = 0; r < expect_rows; ++r) {
        if (rows[r].size() != expect_cols)
            throw DataError(std::string(what) + ": column count mismatch");
        for (std::size_t c = 0; c < expect_cols; ++c) m(r, c) = rows[r][c].get<double>();
    }
    return m;
}

} // namespace

void save_elm_json(const ElmModel& model, const std::string& path) {
    nlohmann::ordered_json j;
    j["K"] = model.k;
    j["feature_dim"] = model.feature_dim;
    j["W"] = matrix_to_json(model.w);
    j["b"] = model.b;
    j["beta"] = model.beta;
    j["ridge_lambda"] = model.ridge_lambda;
    j["seed"] = model.seed;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << j.dump(2) << '\n';
}

ElmModel load_elm_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    ElmModel model;
    model.k = j.at("K").get<std::size_t>();
    model.feature_dim = j.at("feature_dim").get<std::size_t>();
    model.w = matrix_from_json(j.at("W"), model.k, model.feature_dim, "elm W");
    model.b = j.at("b").get<Vec>();
    model.beta = j.at("beta").get<Vec>();
    model.ridge_lambda = j.at("ridge_lambda").get<double>();
    model.seed = j.at("seed").get<std::uint64_t>();
    if (model.b.size() != model.k || model.beta.size() != model.k)
        throw DataError("elm model: vector length mismatch");
    return model;
}

} // namespace aeelm
