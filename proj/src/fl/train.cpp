#define EIGEN_DONT_PARALLELIZE
#include "zkpot/fl/train.hpp"

#include <Eigen/Core>

#include <cmath>

#include "zkpot/common/serial.hpp"
#include "zkpot/zk/statement.hpp"

namespace zkpot::fl {

using quant::Index;
using quant::RealTensor;

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<Mat>;
using ConstMatMap = Eigen::Map<const Mat>;
using Vec = Eigen::VectorXd;

std::vector<Index> FloatModel::dims() const {
    std::vector<Index> d;
    if (weights.empty()) return d;
    d.push_back(weights.front().cols);
    for (const auto& w : weights) d.push_back(w.rows);
    return d;
}

bool FloatModel::same_shape(const FloatModel& o) const { return dims() == o.dims(); }

FloatModel init_model(std::span<const Index> dims, std::uint64_t seed) {
    if (dims.size() < 2) throw ShapeError("init_model: need at least two dims");
    Rng rng(seed);
    FloatModel m;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Index in = dims[l], out = dims[l + 1];
        double bound = 1.0 / std::sqrt(static_cast<double>(in));
        RealTensor w = RealTensor::zeros(out, in);
        for (auto& v : w.data) v = (2.0 * rng.unit() - 1.0) * bound;
        RealTensor b = RealTensor::zeros(out, 1);
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    return m;
}

namespace {

struct Forward {
    std::vector<Mat> activations;  // per layer outputs (post-ReLU except last)
    Mat logits;
};

Forward forward_batch(const FloatModel& m, const ConstMatMap& x) {
    Forward f;
    Mat cur = x;
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        ConstMatMap w(m.weights[l].data.data(), m.weights[l].rows, m.weights[l].cols);
        ConstMatMap b(m.biases[l].data.data(), m.biases[l].rows, 1);
        Mat z = cur * w.transpose();
        z.rowwise() += b.col(0).transpose();
        if (l + 1 < m.weights.size()) {
            z = z.cwiseMax(0.0);
            f.activations.push_back(z);
            cur = std::move(z);
        } else {
            f.logits = std::move(z);
        }
    }
    return f;
}

// softmax cross-entropy loss and dlogits in place
double softmax_loss(Mat& logits, std::span<const std::int32_t> labels) {
    double loss = 0;
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        auto row = logits.row(i);
        double mx = row.maxCoeff();
        Eigen::ArrayXd e = (row.array() - mx).exp();
        double denom = e.sum();
        loss -= std::log(e[labels[static_cast<std::size_t>(i)]] / denom);
        row = (e / denom).matrix();
        row[labels[static_cast<std::size_t>(i)]] -= 1.0;
    }
    return loss / static_cast<double>(logits.rows());
}

}  // namespace

FloatModel local_train(const FloatModel& global, const Dataset& data, const TrainConfig& cfg,
                       std::uint64_t shuffle_seed) {
    if (global.weights.empty() || data.features() != global.weights.front().cols)
        throw ShapeError("local_train: model/data shape mismatch");
    FloatModel m = global;
    if (cfg.local_epochs == 0 || data.size() == 0) return m;

    Rng rng(shuffle_seed);
    std::vector<Index> order(static_cast<std::size_t>(data.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);

    const std::size_t batch = std::max<std::size_t>(1, cfg.batch_size);
    Mat xbuf;
    std::vector<std::int32_t> ybuf;

    for (unsigned epoch = 0; epoch < cfg.local_epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        for (std::size_t start = 0; start < order.size(); start += batch) {
            std::size_t bsz = std::min(batch, order.size() - start);
            xbuf.resize(static_cast<Eigen::Index>(bsz), data.features());
            ybuf.resize(bsz);
            for (std::size_t k = 0; k < bsz; ++k) {
                auto row = data.row(order[start + k]);
                for (Index j = 0; j < data.features(); ++j)
                    xbuf(static_cast<Eigen::Index>(k), j) = row[static_cast<std::size_t>(j)];
                ybuf[k] = data.labels[static_cast<std::size_t>(order[start + k])];
            }
            ConstMatMap x(xbuf.data(), xbuf.rows(), xbuf.cols());
            Forward f = forward_batch(m, x);
            double loss = softmax_loss(f.logits, ybuf);
            // cross-entropy this far above ln(classes) means the run has blown
            // up even when saturated ReLUs keep the numbers technically finite
            if (!std::isfinite(loss) || loss > 100.0)
                throw TrainingDiverged("local_train: loss diverged");

            // backprop through the ReLU MLP
            Mat delta = f.logits / static_cast<double>(bsz);
            for (std::size_t l = m.weights.size(); l-- > 0;) {
                const Mat& input =
                    l == 0 ? Mat(x) : f.activations[l - 1];
                MatMap w(m.weights[l].data.data(), m.weights[l].rows, m.weights[l].cols);
                MatMap b(m.biases[l].data.data(), m.biases[l].rows, 1);
                Mat grad_w = delta.transpose() * input;
                Vec grad_b = delta.colwise().sum();
                if (l > 0) {
                    Mat next = delta * w;
                    next.array() *= (f.activations[l - 1].array() > 0.0).cast<double>();
                    delta = std::move(next);
                }
                w.noalias() -= cfg.learning_rate * grad_w;
                b.col(0) -= cfg.learning_rate * grad_b;
            }
            for (const auto& wt : m.weights)
                for (double v : wt.data)
                    if (!std::isfinite(v)) throw TrainingDiverged("local_train: weights diverged");
        }
    }
    return m;
}

FloatModel fedavg(std::span<const FloatModel> models, std::span<const std::size_t> sizes) {
    if (models.empty() || models.size() != sizes.size())
        throw ShapeError("fedavg: need matching non-empty model/size lists");
    double total = 0;
    for (auto s : sizes) {
        if (s == 0) throw ShapeError("fedavg: zero-size shard");
        total += static_cast<double>(s);
    }
    FloatModel out = models.front();
    for (auto& w : out.weights) std::fill(w.data.begin(), w.data.end(), 0.0);
    for (auto& b : out.biases) std::fill(b.data.begin(), b.data.end(), 0.0);
    for (std::size_t k = 0; k < models.size(); ++k) {
        if (!models[k].same_shape(out)) throw ShapeError("fedavg: model shape mismatch");
        double wgt = static_cast<double>(sizes[k]) / total;
        for (std::size_t l = 0; l < out.weights.size(); ++l) {
            for (std::size_t i = 0; i < out.weights[l].data.size(); ++i)
                out.weights[l].data[i] += wgt * models[k].weights[l].data[i];
            for (std::size_t i = 0; i < out.biases[l].data.size(); ++i)
                out.biases[l].data[i] += wgt * models[k].biases[l].data[i];
        }
    }
    return out;
}

std::vector<std::int32_t> float_predictions(const FloatModel& model, const Dataset& data) {
    ConstMatMap x(data.samples.data.data(), data.samples.rows, data.samples.cols);
    Forward f = forward_batch(model, x);
    std::vector<std::int32_t> out(static_cast<std::size_t>(data.size()));
    for (Eigen::Index i = 0; i < f.logits.rows(); ++i) {
        int best = 0;
        for (int j = 1; j < f.logits.cols(); ++j)
            if (f.logits(i, j) > f.logits(i, best)) best = j;
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

double evaluate(const FloatModel& model, const Dataset& test) {
    if (test.size() == 0) return 0.0;
    auto preds = float_predictions(model, test);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (preds[i] == test.labels[i]) ++ok;
    return static_cast<double>(ok) / static_cast<double>(preds.size());
}

double mean_loss(const FloatModel& model, const Dataset& data) {
    ConstMatMap x(data.samples.data.data(), data.samples.rows, data.samples.cols);
    Forward f = forward_batch(model, x);
    Mat logits = f.logits;
    return softmax_loss(logits, data.labels);
}

quant::QuantizedModel quantize_float_model(const FloatModel& model) {
    return quant::build_quantized_model(model.weights, model.biases, zk::kCanonicalInputParams);
}

FloatModel dequantize_model(const quant::QuantizedModel& model) {
    FloatModel out;
    quant::QuantParams in = model.input_params;
    for (const auto& layer : model.layers) {
        if (layer.kind != quant::LayerKind::FullyConnected) {
            in = layer.out_params;
            continue;
        }
        out.weights.push_back(quant::dequantize(layer.weights));
        double bias_scale = layer.weights.params.scale * in.scale;
        RealTensor b = RealTensor::zeros(layer.weights.rows, 1);
        for (Index i = 0; i < layer.weights.rows; ++i)
            b.data[static_cast<std::size_t>(i)] =
                bias_scale * static_cast<double>(layer.bias[static_cast<std::size_t>(i)]);
        out.biases.push_back(std::move(b));
        in = layer.out_params;
    }
    return out;
}

Bytes serialize_float_model(const FloatModel& model) {
    ByteWriter w;
    w.raw(to_bytes("ZKPF"));
    w.u16(1);
    w.u32(static_cast<std::uint32_t>(model.weights.size()));
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        w.u32(static_cast<std::uint32_t>(model.weights[l].rows));
        w.u32(static_cast<std::uint32_t>(model.weights[l].cols));
        for (double v : model.weights[l].data) w.f64(v);
        for (double v : model.biases[l].data) w.f64(v);
    }
    return w.take();
}

FloatModel deserialize_float_model(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    if (r.raw(4) != to_bytes("ZKPF")) throw DeserializeError("bad checkpoint magic");
    if (r.u16() != 1) throw DeserializeError("unsupported checkpoint version");
    std::uint32_t layers = r.u32();
    if (layers == 0 || layers > 64) throw DeserializeError("implausible layer count");
    FloatModel m;
    for (std::uint32_t l = 0; l < layers; ++l) {
        std::uint32_t rows = r.u32();
        std::uint32_t cols = r.u32();
        if (rows == 0 || cols == 0 || static_cast<std::uint64_t>(rows) * cols > (1u << 26))
            throw DeserializeError("implausible layer dims");
        RealTensor w = RealTensor::zeros(rows, cols);
        for (auto& v : w.data) v = r.f64();
        RealTensor b = RealTensor::zeros(rows, 1);
        for (auto& v : b.data) v = r.f64();
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    r.expect_done();
    return m;
}

}  // namespace zkpot::fl
