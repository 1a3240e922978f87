#include "aeelm/autoencoder.hpp"

#include "aeelm/core/csv.hpp"
#include "aeelm/core/errors.hpp"
#include "aeelm/core/math.hpp"
#include "aeelm/core/optim.hpp"
#include "aeelm/core/rng.hpp"
#include "aeelm/metrics.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>

namespace aeelm {

namespace {

// One pass over the batch producing loss and, when grads != nullptr, the
// exact gradient. Row order and per-row accumulation order are fixed, so
// identical batches give bitwise-identical results.
double forward_backward(const AutoencoderModel& m, const Matrix& x, AeGradient* grads) {
    const std::size_t n = x.rows();
    const std::size_t in = m.input_dim;
    const std::size_t hid = m.hidden_dim;
    const double scale = 2.0 / static_cast<double>(n);

    if (grads) {
        grads->w1 = Matrix(hid, in, 0.0);
        grads->w2 = Matrix(in, hid, 0.0);
        grads->b1.assign(hid, 0.0);
        grads->b2.assign(in, 0.0);
    }

    Vec h(hid), z(in), delta2(in), delta1(hid);
    double loss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double* xr = x.row(r);
        for (std::size_t i = 0; i < hid; ++i)
            h[i] = sigmoid(kern::dot(m.w1.row(i), xr, in) + m.b1[i]);
        for (std::size_t i = 0; i < in; ++i)
            z[i] = sigmoid(kern::dot(m.w2.row(i), h.data(), hid) + m.b2[i]);

        double row_err = 0.0;
        for (std::size_t i = 0; i < in; ++i) {
            const double d = z[i] - xr[i];
            row_err += d * d;
            if (grads) delta2[i] = scale * d * z[i] * (1.0 - z[i]);
        }
        loss += row_err;
        if (!grads) continue;

        // gW2 += delta2 h^T ; gb2 += delta2
        for (std::size_t i = 0; i < in; ++i) {
            kern::axpy(delta2[i], h.data(), grads->w2.row(i), hid);
            grads->b2[i] += delta2[i];
        }
        // delta1 = (W2^T delta2) .* h .* (1-h)
        delta1.assign(hid, 0.0);
        for (std::size_t i = 0; i < in; ++i)
            kern::axpy(delta2[i], m.w2.row(i), delta1.data(), hid);
        for (std::size_t j = 0; j < hid; ++j) delta1[j] *= h[j] * (1.0 - h[j]);
        // gW1 += delta1 x^T ; gb1 += delta1
        for (std::size_t j = 0; j < hid; ++j) {
            kern::axpy(delta1[j], xr, grads->w1.row(j), in);
            grads->b1[j] += delta1[j];
        }
    }
    return loss / static_cast<double>(n);
}

} // namespace

AutoencoderModel ae_init(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed) {
    if (hidden_dim < 1 || hidden_dim >= input_dim)
        throw ConfigError("autoencoder must be undercomplete: need 1 <= hidden_dim < input_dim");
    AutoencoderModel m;
    m.input_dim = input_dim;
    m.hidden_dim = hidden_dim;
    m.w1 = Matrix(hidden_dim, input_dim);
    m.w2 = Matrix(input_dim, hidden_dim);
    m.b1.assign(hidden_dim, 0.0);
    m.b2.assign(input_dim, 0.0);

    const double bound = std::sqrt(6.0 / static_cast<double>(input_dim + hidden_dim));
    Rng rng(seed);
    for (std::size_t i = 0; i < hidden_dim; ++i)
        for (std::size_t j = 0; j < input_dim; ++j) m.w1(i, j) = rng.uniform(-bound, bound);
    for (std::size_t i = 0; i < input_dim; ++i)
        for (std::size_t j = 0; j < hidden_dim; ++j) m.w2(i, j) = rng.uniform(-bound, bound);
    return m;
}

Vec encode(const AutoencoderModel& m, std::span<const double> x) {
    if (x.size() != m.input_dim) throw std::invalid_argument("encode: dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw DataError("encode: non-finite input");
    Vec h(m.hidden_dim);
    for (std::size_t i = 0; i < m.hidden_dim; ++i)
        h[i] = sigmoid(kern::dot(m.w1.row(i), x.data(), m.input_dim) + m.b1[i]);
    return h;
}

Matrix encode(const AutoencoderModel& m, const Matrix& x) {
    if (x.cols() != m.input_dim) throw std::invalid_argument("encode: dimension mismatch");
    Matrix out(x.rows(), m.hidden_dim);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const Vec h = encode(m, x.row_span(r));
        for (std::size_t i = 0; i < m.hidden_dim; ++i) out(r, i) = h[i];
    }
    return out;
}

Vec decode(const AutoencoderModel& m, std::span<const double> h) {
    if (h.size() != m.hidden_dim) throw std::invalid_argument("decode: dimension mismatch");
    Vec z(m.input_dim);
    for (std::size_t i = 0; i < m.input_dim; ++i)
        z[i] = sigmoid(kern::dot(m.w2.row(i), h.data(), m.hidden_dim) + m.b2[i]);
    return z;
}

double ae_loss(const AutoencoderModel& m, const Matrix& x) {
    if (x.cols() != m.input_dim) throw std::invalid_argument("ae_loss: dimension mismatch");
    if (x.rows() == 0) throw std::invalid_argument("ae_loss: empty batch");
    return forward_backward(m, x, nullptr);
}

AeGradient ae_gradient(const AutoencoderModel& m, const Matrix& x) {
    if (x.cols() != m.input_dim) throw std::invalid_argument("ae_gradient: dimension mismatch");
    if (x.rows() == 0) throw std::invalid_argument("ae_gradient: empty batch");
    AeGradient g;
    forward_backward(m, x, &g);
    return g;
}

std::pair<AutoencoderModel, TrainingHistory> ae_train(const AutoencoderModel& model,
                                                      const Matrix& x, const AeHyper& hyper) {
    if (x.rows() == 0) throw std::invalid_argument("ae_train: empty batch");
    if (x.cols() != model.input_dim) throw std::invalid_argument("ae_train: dimension mismatch");

    AutoencoderModel m = model;
    TrainingHistory hist;
    AutoencoderModel best = m;
    double best_loss = std::numeric_limits<double>::infinity();

    ParamRefs params{{&m.w1, &m.w2}, {&m.b1, &m.b2}};
    MomentumState momentum(params);
    AeGradient g;
    double prev_loss = 0.0;
    std::size_t stall = 0;

    for (std::size_t epoch = 0; epoch < hyper.max_epochs; ++epoch) {
        const double loss = forward_backward(m, x, &g);
        if (!std::isfinite(loss))
            throw NumericError("autoencoder training diverged at epoch " + std::to_string(epoch) +
                               "; reduce the learning rate");
        hist.losses.push_back(loss);
        if (loss < best_loss) {
            best_loss = loss;
            best = m;
        }
        if (epoch > 0 && std::abs(loss - prev_loss) < hyper.tol) {
            if (++stall >= 10) break;
        } else {
            stall = 0;
        }
        prev_loss = loss;

        const GradRefs grads{{&g.w1, &g.w2}, {&g.b1, &g.b2}};
        momentum.step(params, grads, hyper.learning_rate, hyper.momentum);
    }
    hist.epochs_run = hist.losses.size();

    const double end_loss = forward_backward(m, x, nullptr);
    if (std::isfinite(end_loss) && end_loss < best_loss) {
        best_loss = end_loss;
        best = m;
    }
    hist.final_loss = hist.epochs_run == 0 ? end_loss : best_loss;
    return {std::move(best), std::move(hist)};
}

HiddenSearchResult search_hidden_size(const Matrix& x, const Vec& y,
                                      const std::vector<std::size_t>& candidates,
                                      const ElmConfig& elm_cfg, const AeHyper& hyper,
                                      std::uint64_t seed) {
    if (candidates.empty()) throw ConfigError("hidden-size search: empty candidate list");
    for (std::size_t c : candidates)
        if (c < 1 || c >= x.cols())
            throw ConfigError("hidden-size candidate " + std::to_string(c) +
                              " not in [1, input_dim)");
    const std::size_t n = x.rows();
    const std::size_t n_fit = n * 4 / 5;
    if (n_fit < 2 || n_fit >= n)
        throw DataError("hidden-size search: too few rows for an 80/20 sub-split");

    Matrix x_fit(n_fit, x.cols()), x_val(n - n_fit, x.cols());
    Vec y_fit(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n_fit));
    Vec y_val(y.begin() + static_cast<std::ptrdiff_t>(n_fit), y.end());
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < x.cols(); ++c)
            (r < n_fit ? x_fit(r, c) : x_val(r - n_fit, c)) = x(r, c);

    HiddenSearchResult result;
    double best_mape = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
        const std::size_t hidden = candidates[idx];
        const auto [ae, hist] =
            ae_train(ae_init(x.cols(), hidden, derive_seed(seed, idx)), x_fit, hyper);
        const Matrix z_fit = encode(ae, x_fit);
        const Matrix z_val = encode(ae, x_val);
        double score;
        try {
            const ElmModel elm =
                train_elm(z_fit, y_fit, elm_cfg.k, derive_seed(seed, 1000 + idx), elm_cfg.ridge_lambda);
            score = mape(y_val, elm_predict(elm, z_val));
        } catch (const NumericError&) {
            score = std::numeric_limits<double>::infinity(); // candidate predicted through zero
        }
        result.mape_per_candidate.emplace_back(hidden, score);
        if (score < best_mape) {
            best_mape = score;
            result.best_hidden = hidden;
        }
    }
    if (!std::isfinite(best_mape))
        throw NumericError("hidden-size search: every candidate failed validation scoring");
    return result;
}

void save_autoencoder_json(const AutoencoderModel& m, const std::string& path) {
    nlohmann::ordered_json j;
    j["input_dim"] = m.input_dim;
    j["hidden_dim"] = m.hidden_dim;
    auto mat = [](const Matrix& w) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < w.rows(); ++r) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (std::size_t c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["W1"] = mat(m.w1);
    j["b1"] = m.b1;
    j["W2"] = mat(m.w2);
    j["b2"] = m.b2;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << j.dump(2) << '\n';
}

AutoencoderModel load_autoencoder_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    AutoencoderModel m;
    m.input_dim = j.at("input_dim").get<std::size_t>();
    m.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    auto mat = [](const nlohmann::json& rows, std::size_t nr, std::size_t nc, const char* what) {
        if (rows.size() != nr) throw DataError(std::string(what) + ": row count mismatch");
        Matrix w(nr, nc);
        for (std::size_t r = 0; r < nr; ++r) {
            if (rows[r].size() != nc) throw DataError(std::string(what) + ": column count mismatch");
            for (std::size_t c = 0; c < nc; ++c) w(r, c) = rows[r][c].get<double>();
        }
        return w;
    };
    m.w1 = mat(j.at("W1"), m.hidden_dim, m.input_dim, "ae W1");
    m.w2 = mat(j.at("W2"), m.input_dim, m.hidden_dim, "ae W2");
    m.b1 = j.at("b1").get<Vec>();
    m.b2 = j.at("b2").get<Vec>();
    if (m.b1.size() != m.hidden_dim || m.b2.size() != m.input_dim)
        throw DataError("ae model: bias length mismatch");
    return m;
}

void write_history_csv(const TrainingHistory& hist, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(hist.losses.size());
    for (std::size_t e = 0; e < hist.losses.size(); ++e)
        rows.push_back({std::to_string(e), csv::format_double(hist.losses[e])});
    csv::write_file(path, {"epoch", "loss"}, rows);
}

} // namespace aeelm
