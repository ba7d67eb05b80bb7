#include "zkpot/quant/model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "zkpot/common/serial.hpp"

namespace zkpot::quant {

namespace {

const Layer& fc_layer(const QuantizedModel& model, std::size_t fc_index) {
    std::size_t seen = 0;
    for (const auto& l : model.layers) {
        if (l.kind == LayerKind::FullyConnected) {
            if (seen == fc_index) return l;
            ++seen;
        }
    }
    throw ShapeError("fc layer index out of range");
}

QuantParams input_params_of_fc(const QuantizedModel& model, std::size_t fc_index) {
    QuantParams cur = model.input_params;
    std::size_t seen = 0;
    for (const auto& l : model.layers) {
        if (l.kind == LayerKind::FullyConnected) {
            if (seen == fc_index) return cur;
            ++seen;
        }
        cur = l.out_params;
    }
    throw ShapeError("fc layer index out of range");
}

// Exact integer range of sum_j (qw_ij - z_w)(qx_j - z_x) + qb_i over all
// admissible inputs qx in [0, qmax_in].
struct LayerRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

LayerRange bracket_range(const QuantizedTensor& qw, std::span<const std::int64_t> bias,
                         const QuantParams& in_params) {
    const std::int64_t z_w = qw.params.zero_point;
    const std::int64_t z_x = in_params.zero_point;
    const std::int64_t qmax_in = in_params.qmax();
    __int128 lo_all = 0, hi_all = 0;
    bool first = true;
    for (Index i = 0; i < qw.rows; ++i) {
        __int128 lo = bias.empty() ? 0 : bias[static_cast<std::size_t>(i)];
        __int128 hi = lo;
        for (Index j = 0; j < qw.cols; ++j) {
            std::int64_t c = qw.at(i, j) - z_w;
            __int128 a = static_cast<__int128>(c) * (0 - z_x);
            __int128 b = static_cast<__int128>(c) * (qmax_in - z_x);
            lo += std::min(a, b);
            hi += std::max(a, b);
        }
        if (first || lo < lo_all) lo_all = lo;
        if (first || hi > hi_all) hi_all = hi;
        first = false;
    }
    auto clamp_budget = [](__int128 v) -> std::int64_t {
        if (v > kIntegerBudget || v < -static_cast<__int128>(kIntegerBudget))
            throw OverflowError("layer range exceeds integer budget");
        return static_cast<std::int64_t>(v);
    };
    return {clamp_budget(lo_all), clamp_budget(hi_all)};
}

// 16-bit activation params covering [lo, hi] exactly (verified in integer
// arithmetic, widening on rounding wobble).
struct ChosenParams {
    QuantParams params;
    FixedMultiplier mult;
    std::int64_t mprime;
};

ChosenParams choose_out_params(const LayerRange& range, double s_w, double s_x, unsigned shift) {
    const std::int64_t qmax_out = (std::int64_t(1) << 16) - 1;
    std::int64_t margin = std::max<std::int64_t>(16, (range.hi - range.lo) / 64);
    for (int attempt = 0; attempt < 48; ++attempt, margin *= 2) {
        std::int64_t lo = range.lo - margin;
        std::int64_t hi = range.hi + margin;
        QuantParams out;
        out.bit_width = 16;
        out.scale = s_w * s_x * static_cast<double>(hi - lo) / static_cast<double>(qmax_out);
        out.zero_point = std::clamp<std::int64_t>(
            std::llround(static_cast<double>(-lo) * qmax_out / static_cast<double>(hi - lo)), 0,
            qmax_out);
        FixedMultiplier mult;
        try {
            mult = fixed_multiplier(s_w, s_x, out.scale, shift);
        } catch (const MultiplierOverflow&) {
            continue;
        }
        __int128 zy2k = static_cast<__int128>(out.zero_point) << shift;
        std::int64_t mprime = static_cast<std::int64_t>((zy2k + mult.m - 1) / mult.m);
        // exact saturation check over the true (unwidened) bracket range
        __int128 bmin = static_cast<__int128>(range.lo) + mprime;
        __int128 bmax = static_cast<__int128>(range.hi) + mprime;
        if (bmin < 0) continue;
        __int128 top = bmax * mult.m;
        if (top > kIntegerBudget) throw OverflowError("scaled bracket exceeds integer budget");
        if ((top >> shift) > qmax_out) continue;
        return {out, mult, mprime};
    }
    throw OverflowError("no valid activation quantization for layer range");
}

}  // namespace

Index QuantizedModel::input_size() const {
    for (const auto& l : layers)
        if (l.kind == LayerKind::FullyConnected) return l.weights.cols;
    return 0;
}

Index QuantizedModel::output_size() const {
    for (auto it = layers.rbegin(); it != layers.rend(); ++it)
        if (it->kind == LayerKind::FullyConnected) return it->weights.rows;
    return 0;
}

std::vector<Index> QuantizedModel::fc_dims() const {
    std::vector<Index> dims;
    for (const auto& l : layers) {
        if (l.kind != LayerKind::FullyConnected) continue;
        if (dims.empty()) dims.push_back(l.weights.cols);
        dims.push_back(l.weights.rows);
    }
    return dims;
}

FixedMultiplier layer_multiplier(const QuantizedModel& model, std::size_t fc_index,
                                 unsigned shift) {
    const Layer& l = fc_layer(model, fc_index);
    QuantParams in = input_params_of_fc(model, fc_index);
    return fixed_multiplier(l.weights.params.scale, in.scale, l.out_params.scale, shift);
}

QuantizedTensor quantize_input(const QuantParams& input_params, std::span<const double> sample) {
    QuantizedTensor qx;
    qx.rows = static_cast<Index>(sample.size());
    qx.cols = 1;
    qx.params = input_params;
    qx.q.resize(sample.size());
    const std::int64_t qmax = input_params.qmax();
    for (std::size_t i = 0; i < sample.size(); ++i) {
        qx.q[i] = std::clamp<std::int64_t>(
            std::llround(sample[i] / input_params.scale) + input_params.zero_point, 0, qmax);
    }
    return qx;
}

std::pair<std::vector<std::int64_t>, InferenceTrace> quantized_forward(
    const QuantizedModel& model, const QuantizedTensor& input) {
    if (model.layers.empty()) throw ShapeError("quantized_forward: model has no layers");
    if (input.cols != 1 || input.rows != model.input_size())
        throw ShapeError("quantized_forward: input shape mismatch");

    InferenceTrace trace;
    QuantizedTensor cur = input;
    std::size_t fc_index = 0;
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        const Layer& layer = model.layers[li];
        if (layer.kind == LayerKind::FullyConnected) {
            FixedMultiplier mult = layer_multiplier(model, fc_index);
            QmatmulResult res = qmatmul(layer.weights, cur, mult, layer.out_params, layer.bias);
            LayerTrace lt;
            lt.layer_index = li;
            lt.qx = cur;
            lt.qy = res.qy;
            lt.remainder = std::move(res.remainder);
            lt.aux = std::move(res.aux);
            lt.multiplier = mult;
            lt.z_w = layer.weights.params.zero_point;
            lt.z_x = cur.params.zero_point;
            lt.z_y = layer.out_params.zero_point;
            cur = lt.qy;
            trace.layers.push_back(std::move(lt));
            ++fc_index;
        } else {
            const std::int64_t zp = layer.out_params.zero_point;
            for (auto& v : cur.q) v = std::max(v, zp);
            cur.params = layer.out_params;
        }
    }
    trace.logits = cur.q;
    return {cur.q, std::move(trace)};
}

bool validate_trace(const QuantizedModel& model, const InferenceTrace& trace) {
    std::size_t fc_count = 0;
    for (const auto& l : model.layers)
        if (l.kind == LayerKind::FullyConnected) ++fc_count;
    if (trace.layers.size() != fc_count) return false;
    const std::int64_t two_k_bound = std::int64_t(1) << kDefaultShift;
    for (const auto& lt : trace.layers) {
        if (lt.layer_index >= model.layers.size()) return false;
        const Layer& layer = model.layers[lt.layer_index];
        QmatmulResult res;
        res.qy = lt.qy;
        res.remainder = lt.remainder;
        res.aux = lt.aux;
        for (auto r : lt.remainder)
            if (r < 0 || r >= two_k_bound) return false;
        if (!check_remainder_identity(res, layer.weights, lt.qx, lt.multiplier)) return false;
    }
    return true;
}

int argmax_lowest(std::span<const std::int64_t> v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

template <bool Parallel, bool WithTraces>
static std::int64_t accuracy_impl(const QuantizedModel& model, const RealTensor& samples,
                                  std::span<const std::int32_t> labels,
                                  std::vector<InferenceTrace>* traces) {
    if (samples.rows == 0 || static_cast<std::size_t>(samples.rows) != labels.size())
        throw InvalidDataset("accuracy: |D| must equal |T| and be positive");
    if (traces) traces->assign(static_cast<std::size_t>(samples.rows), InferenceTrace{});

    std::atomic<std::int64_t> correct{0};
    std::exception_ptr err = nullptr;
    std::atomic<bool> failed{false};

    const auto body = [&](Index s) {
        std::span<const double> row(samples.data.data() + s * samples.cols,
                                    static_cast<std::size_t>(samples.cols));
        QuantizedTensor qx = quantize_input(model.input_params, row);
        auto [logits, trace] = quantized_forward(model, qx);
        if (argmax_lowest(logits) == labels[static_cast<std::size_t>(s)])
            correct.fetch_add(1, std::memory_order_relaxed);
        if (traces) (*traces)[static_cast<std::size_t>(s)] = std::move(trace);
    };

    if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
        for (Index s = 0; s < samples.rows; ++s) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                body(s);
            } catch (...) {
#pragma omp critical
                {
                    if (!err) err = std::current_exception();
                }
                failed.store(true, std::memory_order_relaxed);
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (Index s = 0; s < samples.rows; ++s) body(s);
    }
    return correct.load();
}

std::int64_t accuracy(const QuantizedModel& model, const RealTensor& samples,
                      std::span<const std::int32_t> labels) {
    return accuracy_impl<true, false>(model, samples, labels, nullptr);
}

std::int64_t accuracy_with_traces(const QuantizedModel& model, const RealTensor& samples,
                                  std::span<const std::int32_t> labels,
                                  std::vector<InferenceTrace>& traces) {
    return accuracy_impl<true, true>(model, samples, labels, &traces);
}

std::int64_t accuracy_serial(const QuantizedModel& model, const RealTensor& samples,
                             std::span<const std::int32_t> labels) {
    return accuracy_impl<false, false>(model, samples, labels, nullptr);
}

QuantizedModel build_quantized_model(std::span<const RealTensor> weights,
                                     std::span<const RealTensor> biases,
                                     const QuantParams& input_params, unsigned shift) {
    if (weights.empty() || weights.size() != biases.size())
        throw ShapeError("build_quantized_model: need matching weight/bias lists");

    QuantizedModel model;
    model.input_params = input_params;
    QuantParams in = input_params;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const RealTensor& w = weights[l];
        const RealTensor& b = biases[l];
        if (b.size() != w.rows) throw ShapeError("build_quantized_model: bias length mismatch");
        if (l > 0 && w.cols != weights[l - 1].rows)
            throw ShapeError("build_quantized_model: adjacent layer dims incompatible");

        Layer fc;
        fc.kind = LayerKind::FullyConnected;
        fc.weights = quantize(w, 8);
        const double bias_scale = fc.weights.params.scale * in.scale;
        fc.bias.resize(static_cast<std::size_t>(w.rows));
        for (Index i = 0; i < w.rows; ++i) {
            double qb = b.data[static_cast<std::size_t>(i)] / bias_scale;
            if (!std::isfinite(qb) || std::abs(qb) > static_cast<double>(kIntegerBudget))
                throw OverflowError("bias exceeds integer budget");
            fc.bias[static_cast<std::size_t>(i)] = std::llround(qb);
        }
        LayerRange range = bracket_range(fc.weights, fc.bias, in);
        ChosenParams chosen =
            choose_out_params(range, fc.weights.params.scale, in.scale, shift);
        fc.out_params = chosen.params;
        model.layers.push_back(std::move(fc));
        in = chosen.params;

        if (l + 1 < weights.size()) {
            Layer relu;
            relu.kind = LayerKind::Relu;
            relu.out_params = in;
            model.layers.push_back(std::move(relu));
        }
    }
    validate_model_budget(model, shift);
    return model;
}

std::pair<QuantParams, FixedMultiplier> choose_activation_params(
    const QuantizedTensor& qw, std::span<const std::int64_t> bias, const QuantParams& in_params,
    unsigned shift) {
    ChosenParams chosen =
        choose_out_params(bracket_range(qw, bias, in_params), qw.params.scale, in_params.scale,
                          shift);
    return {chosen.params, chosen.mult};
}

void validate_model_budget(const QuantizedModel& model, unsigned shift) {
    QuantParams in = model.input_params;
    std::size_t fc_index = 0;
    for (const auto& layer : model.layers) {
        if (layer.kind != LayerKind::FullyConnected) {
            in = layer.out_params;
            continue;
        }
        LayerRange range = bracket_range(layer.weights, layer.bias, in);
        FixedMultiplier mult = layer_multiplier(model, fc_index, shift);
        __int128 zy2k = static_cast<__int128>(layer.out_params.zero_point) << shift;
        std::int64_t mprime = static_cast<std::int64_t>((zy2k + mult.m - 1) / mult.m);
        __int128 worst = (static_cast<__int128>(range.hi) + mprime) * mult.m;
        if (worst > kIntegerBudget)
            throw OverflowError("model rejected: worst-case intermediate exceeds 2^62");
        if (static_cast<__int128>(range.lo) + mprime < 0)
            throw OverflowError("model rejected: bracket can go negative");
        in = layer.out_params;
        ++fc_index;
    }
}

static void write_params(ByteWriter& w, const QuantParams& p) {
    w.f64(p.scale);
    w.i64(p.zero_point);
}

Bytes serialize_model(const QuantizedModel& model) {
    ByteWriter w;
    w.raw(to_bytes("ZKPQ"));
    w.u16(1);  // format version
    write_params(w, model.input_params);
    w.u32(static_cast<std::uint32_t>(model.layers.size()));
    for (const auto& layer : model.layers) {
        w.u8(static_cast<std::uint8_t>(layer.kind));
        if (layer.kind == LayerKind::FullyConnected) {
            w.u32(static_cast<std::uint32_t>(layer.weights.rows));
            w.u32(static_cast<std::uint32_t>(layer.weights.cols));
            for (auto v : layer.weights.q) w.i64(v);
            for (auto v : layer.bias) w.i64(v);
            write_params(w, layer.weights.params);
        }
        write_params(w, layer.out_params);
    }
    return w.take();
}

QuantizedModel deserialize_model(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    auto magic = r.raw(4);
    if (magic != to_bytes("ZKPQ")) throw DeserializeError("bad model magic");
    if (r.u16() != 1) throw DeserializeError("unsupported model version");

    // v1 convention: 8-bit input and weights, 16-bit activations.
    auto read_params = [&](unsigned bw) {
        QuantParams p;
        p.scale = r.f64();
        p.zero_point = r.i64();
        p.bit_width = bw;
        if (!(p.scale > 0.0) || !std::isfinite(p.scale)) throw DeserializeError("bad scale");
        if (p.zero_point < 0 || p.zero_point > p.qmax()) throw DeserializeError("bad zero point");
        return p;
    };

    QuantizedModel model;
    model.input_params = read_params(8);
    std::uint32_t layer_count = r.u32();
    for (std::uint32_t i = 0; i < layer_count; ++i) {
        Layer layer;
        layer.kind = static_cast<LayerKind>(r.u8());
        if (layer.kind == LayerKind::FullyConnected) {
            std::uint32_t rows = r.u32();
            std::uint32_t cols = r.u32();
            if (rows == 0 || cols == 0 || static_cast<std::uint64_t>(rows) * cols > (1u << 26))
                throw DeserializeError("implausible layer dims");
            layer.weights.rows = rows;
            layer.weights.cols = cols;
            layer.weights.q.resize(static_cast<std::size_t>(rows) * cols);
            for (auto& v : layer.weights.q) v = r.i64();
            layer.bias.resize(rows);
            for (auto& v : layer.bias) v = r.i64();
            layer.weights.params = read_params(8);
            for (auto v : layer.weights.q)
                if (v < 0 || v > layer.weights.params.qmax())
                    throw DeserializeError("weight out of quantized range");
            layer.out_params = read_params(16);
        } else if (layer.kind == LayerKind::Relu) {
            layer.out_params = read_params(16);
        } else {
            throw DeserializeError("unknown layer kind");
        }
        model.layers.push_back(std::move(layer));
    }
    r.expect_done();
    return model;
}

}  // namespace zkpot::quant
