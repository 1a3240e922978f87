#pragma once

#include "aeelm/core/matrix.hpp"

#include <cstddef>
#include <vector>

namespace aeelm {

// Classical momentum step over a heterogeneous parameter pack. Shared by the
// autoencoder and the backprop baseline so both trainers update identically.
struct ParamRefs {
    std::vector<Matrix*> mats;
    std::vector<Vec*> vecs;
};

struct GradRefs {
    std::vector<const Matrix*> mats;
    std::vector<const Vec*> vecs;
};

class MomentumState {
public:
    explicit MomentumState(const ParamRefs& params) {
        for (const Matrix* m : params.mats) vm_.emplace_back(m->rows(), m->cols(), 0.0);
        for (const Vec* v : params.vecs) vv_.emplace_back(v->size(), 0.0);
    }

    // v = mu*v - lr*g; p += v
    void step(ParamRefs& params, const GradRefs& grads, double lr, double mu) {
        for (std::size_t k = 0; k < params.mats.size(); ++k) {
            Vec& v = vm_[k].data();
            Vec& p = params.mats[k]->data();
            const Vec& g = grads.mats[k]->data();
            for (std::size_t i = 0; i < v.size(); ++i) {
                v[i] = mu * v[i] - lr * g[i];
                p[i] += v[i];
            }
        }
        for (std::size_t k = 0; k < params.vecs.size(); ++k) {
            Vec& v = vv_[k];
            Vec& p = *params.vecs[k];
            const Vec& g = *grads.vecs[k];
            for (std::size_t i = 0; i < v.size(); ++i) {
                v[i] = mu * v[i] - lr * g[i];
                p[i] += v[i];
            }
        }
    }

private:
    std::vector<Matrix> vm_;
    std::vector<Vec> vv_;
};

} // namespace aeelm
