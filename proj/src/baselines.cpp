#include "aeelm/baselines.hpp"

#include "aeelm/core/errors.hpp"
#include "aeelm/core/math.hpp"
#include "aeelm/core/optim.hpp"
#include "aeelm/core/rng.hpp"
#include "aeelm/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace aeelm {

// ---------------------------------------------------------------- MLR

MlrModel train_mlr(const Matrix& z, const Vec& y) {
    if (y.size() != z.rows()) throw std::invalid_argument("train_mlr: target length mismatch");
    if (z.rows() <= z.cols())
        throw DataError("train_mlr: need more samples than features (N=" + std::to_string(z.rows()) +
                        ", p=" + std::to_string(z.cols()) + ")");
    Matrix design(z.rows(), z.cols() + 1);
    for (std::size_t r = 0; r < z.rows(); ++r) {
        for (std::size_t c = 0; c < z.cols(); ++c) design(r, c) = z(r, c);
        design(r, z.cols()) = 1.0;
    }
    const Vec sol = lstsq_min_norm(design, y);
    MlrModel m;
    m.coefficients.assign(sol.begin(), sol.end() - 1);
    m.intercept = sol.back();
    return m;
}

Vec mlr_predict(const MlrModel& m, const Matrix& z) {
    if (z.cols() != m.coefficients.size())
        throw std::invalid_argument("mlr_predict: dimension mismatch");
    Vec out(z.rows());
    for (std::size_t r = 0; r < z.rows(); ++r)
        out[r] = kern::dot(z.row(r), m.coefficients.data(), z.cols()) + m.intercept;
    return out;
}

// ---------------------------------------------------------------- BP

namespace {

double bp_forward_backward(const BpModel& m, const Matrix& z, const Vec& t, BpGradient* grads) {
    const std::size_t n = z.rows();
    const std::size_t in = m.input_dim;
    const std::size_t hid = m.hidden_dim;
    const double scale = 2.0 / static_cast<double>(n);

    if (grads) {
        grads->w1 = Matrix(hid, in, 0.0);
        grads->b1.assign(hid, 0.0);
        grads->w2.assign(hid, 0.0);
        grads->b2 = 0.0;
    }

    Vec h(hid), delta1(hid);
    double loss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double* zr = z.row(r);
        for (std::size_t j = 0; j < hid; ++j)
            h[j] = sigmoid(kern::dot(m.w1.row(j), zr, in) + m.b1[j]);
        const double out = kern::dot(m.w2.data(), h.data(), hid) + m.b2;
        const double err = out - t[r];
        loss += err * err;
        if (!grads) continue;

        const double d2 = scale * err;
        kern::axpy(d2, h.data(), grads->w2.data(), hid);
        grads->b2 += d2;
        for (std::size_t j = 0; j < hid; ++j) delta1[j] = d2 * m.w2[j] * h[j] * (1.0 - h[j]);
        for (std::size_t j = 0; j < hid; ++j) {
            kern::axpy(delta1[j], zr, grads->w1.row(j), in);
            grads->b1[j] += delta1[j];
        }
    }
    return loss / static_cast<double>(n);
}

} // namespace

double bp_loss(const BpModel& m, const Matrix& z, const Vec& y_std_units) {
    return bp_forward_backward(m, z, y_std_units, nullptr);
}

BpGradient bp_gradient(const BpModel& m, const Matrix& z, const Vec& y_std_units) {
    BpGradient g;
    bp_forward_backward(m, z, y_std_units, &g);
    return g;
}

BpModel train_bp(const Matrix& z, const Vec& y, std::size_t hidden, const AeHyper& hyper,
                 std::uint64_t seed) {
    if (y.size() != z.rows()) throw std::invalid_argument("train_bp: target length mismatch");
    if (z.rows() == 0 || hidden == 0) throw std::invalid_argument("train_bp: empty input");

    BpModel m;
    m.input_dim = z.cols();
    m.hidden_dim = hidden;
    m.w1 = Matrix(hidden, z.cols());
    m.b1.assign(hidden, 0.0);
    m.w2.assign(hidden, 0.0);
    m.y_mean = mean_of(y);
    m.y_std = stddev_of(y);
    if (m.y_std == 0.0) m.y_std = 1.0;

    const double bound1 = std::sqrt(6.0 / static_cast<double>(z.cols() + hidden));
    const double bound2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
    Rng rng(seed);
    for (std::size_t j = 0; j < hidden; ++j)
        for (std::size_t c = 0; c < z.cols(); ++c) m.w1(j, c) = rng.uniform(-bound1, bound1);
    for (std::size_t j = 0; j < hidden; ++j) m.w2[j] = rng.uniform(-bound2, bound2);

    Vec t(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) t[i] = (y[i] - m.y_mean) / m.y_std;

    ParamRefs params{{&m.w1}, {&m.b1, &m.w2}};
    MomentumState momentum(params);
    BpGradient g;
    BpModel best = m;
    double best_loss = std::numeric_limits<double>::infinity();
    double prev_loss = 0.0;
    std::size_t stall = 0;
    // the scalar head bias rides along outside the generic pack
    double vb2 = 0.0;

    for (std::size_t epoch = 0; epoch < hyper.max_epochs; ++epoch) {
        const double loss = bp_forward_backward(m, z, t, &g);
        if (!std::isfinite(loss))
            throw NumericError("bp training diverged at epoch " + std::to_string(epoch) +
                               "; reduce the learning rate");
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

        const GradRefs grads{{&g.w1}, {&g.b1, &g.w2}};
        momentum.step(params, grads, hyper.learning_rate, hyper.momentum);
        vb2 = hyper.momentum * vb2 - hyper.learning_rate * g.b2;
        m.b2 += vb2;
    }
    const double end_loss = bp_forward_backward(m, z, t, nullptr);
    if (std::isfinite(end_loss) && end_loss < best_loss) best = m;
    return best;
}

Vec bp_predict(const BpModel& m, const Matrix& z) {
    if (z.cols() != m.input_dim) throw std::invalid_argument("bp_predict: dimension mismatch");
    Vec h(m.hidden_dim);
    Vec out(z.rows());
    for (std::size_t r = 0; r < z.rows(); ++r) {
        for (std::size_t j = 0; j < m.hidden_dim; ++j)
            h[j] = sigmoid(kern::dot(m.w1.row(j), z.row(r), m.input_dim) + m.b1[j]);
        out[r] = (kern::dot(m.w2.data(), h.data(), m.hidden_dim) + m.b2) * m.y_std + m.y_mean;
    }
    return out;
}

// ---------------------------------------------------------------- RBF

namespace {

double sq_dist(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace

RbfModel train_rbf(const Matrix& z, const Vec& y, std::size_t centers, std::uint64_t seed) {
    if (y.size() != z.rows()) throw std::invalid_argument("train_rbf: target length mismatch");
    if (centers == 0 || centers > z.rows())
        throw DataError("train_rbf: centers must lie in [1, N]");

    const std::size_t n = z.rows();
    const std::size_t p = z.cols();

    // distinct rows (exact equality), preserving first-occurrence order
    std::vector<std::size_t> distinct;
    for (std::size_t r = 0; r < n; ++r) {
        bool dup = false;
        for (std::size_t d : distinct)
            if (sq_dist(z.row(r), z.row(d), p) == 0.0) {
                dup = true;
                break;
            }
        if (!dup) distinct.push_back(r);
    }
    if (distinct.size() < centers)
        throw DataError("train_rbf: only " + std::to_string(distinct.size()) +
                        " distinct rows for " + std::to_string(centers) + " centers");

    Rng rng(seed);
    for (std::size_t i = distinct.size(); i > 1; --i)
        std::swap(distinct[i - 1], distinct[rng.index(i)]);

    RbfModel m;
    m.centers = Matrix(centers, p);
    for (std::size_t c = 0; c < centers; ++c)
        for (std::size_t j = 0; j < p; ++j) m.centers(c, j) = z(distinct[c], j);

    std::vector<std::size_t> assign(n, 0), prev_assign(n, centers);
    for (int iter = 0; iter < 100; ++iter) {
        double objective = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centers; ++c) {
                const double d = sq_dist(z.row(r), m.centers.row(c), p);
                if (d < best) {
                    best = d;
                    assign[r] = c;
                }
            }
            objective += best;
        }
        m.kmeans_objective.push_back(objective);
        if (assign == prev_assign) break;
        prev_assign = assign;

        Matrix sums(centers, p, 0.0);
        std::vector<std::size_t> counts(centers, 0);
        for (std::size_t r = 0; r < n; ++r) {
            kern::axpy(1.0, z.row(r), sums.row(assign[r]), p);
            ++counts[assign[r]];
        }
        for (std::size_t c = 0; c < centers; ++c) {
            if (counts[c] == 0) continue; // keep the previous center
            const double inv = 1.0 / static_cast<double>(counts[c]);
            for (std::size_t j = 0; j < p; ++j) m.centers(c, j) = sums(c, j) * inv;
        }
    }

    if (centers == 1) {
        m.sigma = 1e-3;
    } else {
        std::vector<double> dists;
        dists.reserve(centers * (centers - 1) / 2);
        for (std::size_t a = 0; a < centers; ++a)
            for (std::size_t b = a + 1; b < centers; ++b)
                dists.push_back(std::sqrt(sq_dist(m.centers.row(a), m.centers.row(b), p)));
        m.sigma = std::max(quantile(std::move(dists), 0.5), 1e-3);
    }

    Matrix design(n, centers + 1);
    const double inv2s2 = 1.0 / (2.0 * m.sigma * m.sigma);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < centers; ++c)
            design(r, c) = std::exp(-sq_dist(z.row(r), m.centers.row(c), p) * inv2s2);
        design(r, centers) = 1.0;
    }
    const Vec sol = lstsq_min_norm(design, y);
    m.weights.assign(sol.begin(), sol.end() - 1);
    m.intercept = sol.back();
    return m;
}

Vec rbf_predict(const RbfModel& m, const Matrix& z) {
    if (z.cols() != m.centers.cols()) throw std::invalid_argument("rbf_predict: dimension mismatch");
    const double inv2s2 = 1.0 / (2.0 * m.sigma * m.sigma);
    Vec out(z.rows());
    for (std::size_t r = 0; r < z.rows(); ++r) {
        double s = m.intercept;
        for (std::size_t c = 0; c < m.centers.rows(); ++c)
            s += m.weights[c] * std::exp(-sq_dist(z.row(r), m.centers.row(c), z.cols()) * inv2s2);
        out[r] = s;
    }
    return out;
}

// ---------------------------------------------------------------- persistence

namespace {

nlohmann::ordered_json matrix_rows(const Matrix& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_rows_from(const nlohmann::json& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (rows[r].size() != m.cols()) throw DataError("model matrix: ragged rows");
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c].get<double>();
    }
    return m;
}

void dump_to(const nlohmann::ordered_json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << j.dump(2) << '\n';
}

nlohmann::json parse_typed(const std::string& path, const char* expect) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("model_type") != expect)
        throw DataError(std::string("expected model_type '") + expect + "' in " + path);
    return j;
}

} // namespace

void save_mlr_json(const MlrModel& m, const std::string& path) {
    nlohmann::ordered_json j;
    j["model_type"] = "mlr";
    j["coefficients"] = m.coefficients;
    j["intercept"] = m.intercept;
    dump_to(j, path);
}

MlrModel load_mlr_json(const std::string& path) {
    const nlohmann::json j = parse_typed(path, "mlr");
    MlrModel m;
    m.coefficients = j.at("coefficients").get<Vec>();
    m.intercept = j.at("intercept").get<double>();
    return m;
}

void save_bp_json(const BpModel& m, const std::string& path) {
    nlohmann::ordered_json j;
    j["model_type"] = "bp";
    j["input_dim"] = m.input_dim;
    j["hidden_dim"] = m.hidden_dim;
    j["W1"] = matrix_rows(m.w1);
    j["b1"] = m.b1;
    j["w2"] = m.w2;
    j["b2"] = m.b2;
    j["y_mean"] = m.y_mean;
    j["y_std"] = m.y_std;
    dump_to(j, path);
}

BpModel load_bp_json(const std::string& path) {
    const nlohmann::json j = parse_typed(path, "bp");
    BpModel m;
    m.input_dim = j.at("input_dim").get<std::size_t>();
    m.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    m.w1 = matrix_rows_from(j.at("W1"));
    m.b1 = j.at("b1").get<Vec>();
    m.w2 = j.at("w2").get<Vec>();
    m.b2 = j.at("b2").get<double>();
    m.y_mean = j.at("y_mean").get<double>();
    m.y_std = j.at("y_std").get<double>();
    return m;
}

void save_rbf_json(const RbfModel& m, const std::string& path) {
    nlohmann::ordered_json j;
    j["model_type"] = "rbf";
    j["centers"] = matrix_rows(m.centers);
    j["sigma"] = m.sigma;
    j["weights"] = m.weights;
    j["intercept"] = m.intercept;
    dump_to(j, path);
}

RbfModel load_rbf_json(const std::string& path) {
    const nlohmann::json j = parse_typed(path, "rbf");
    RbfModel m;
    m.centers = matrix_rows_from(j.at("centers"));
    m.sigma = j.at("sigma").get<double>();
    m.weights = j.at("weights").get<Vec>();
    m.intercept = j.at("intercept").get<double>();
    return m;
}

} // namespace aeelm
