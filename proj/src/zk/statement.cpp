#include "zkpot/zk/statement.hpp"

#include "zkpot/common/serial.hpp"
#include "zkpot/common/sha256.hpp"

namespace zkpot::zk {

using ec::Fr;
using quant::Index;
using quant::LayerKind;
using quant::QuantizedModel;

ModelShape shape_of(const QuantizedModel& model) { return ModelShape{model.fc_dims()}; }

std::vector<Fr> model_circuit_view(const QuantizedModel& model, unsigned shift) {
    std::vector<Fr> seq;
    std::vector<const quant::Layer*> fc;
    for (const auto& l : model.layers)
        if (l.kind == LayerKind::FullyConnected) fc.push_back(&l);
    seq.push_back(Fr::from_u64(fc.size()));

    quant::QuantParams in = model.input_params;
    std::size_t fc_index = 0;
    std::vector<std::int64_t> all_weights;
    for (const auto& layer : model.layers) {
        if (layer.kind != LayerKind::FullyConnected) {
            in = layer.out_params;
            continue;
        }
        quant::FixedMultiplier mult = quant::layer_multiplier(model, fc_index, shift);
        __int128 zy2k = static_cast<__int128>(layer.out_params.zero_point) << shift;
        std::int64_t mprime = static_cast<std::int64_t>((zy2k + mult.m - 1) / mult.m);

        seq.push_back(Fr::from_u64(static_cast<std::uint64_t>(layer.weights.cols)));
        seq.push_back(Fr::from_u64(static_cast<std::uint64_t>(layer.weights.rows)));
        seq.push_back(Fr::from_i64(layer.weights.params.zero_point));
        seq.push_back(Fr::from_i64(in.zero_point));
        seq.push_back(Fr::from_i64(layer.out_params.zero_point));
        seq.push_back(Fr::from_i64(mult.m));
        seq.push_back(Fr::from_i64(mprime));
        for (auto b : layer.bias) seq.push_back(Fr::from_i64(b));
        all_weights.insert(all_weights.end(), layer.weights.q.begin(), layer.weights.q.end());

        in = layer.out_params;
        ++fc_index;
    }
    for (const Fr& packed : pack_bytes_to_elements(all_weights)) seq.push_back(packed);
    return seq;
}

Fr model_digest(const QuantizedModel& model, unsigned shift) {
    auto seq = model_circuit_view(model, shift);
    return mimc_hash_elements(seq);
}

Bytes serialize_dataset(const quant::RealTensor& samples) {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(samples.rows));
    w.u32(static_cast<std::uint32_t>(samples.cols));
    for (double v : samples.data) w.f64(v);
    return w.take();
}

Bytes serialize_labels(std::span<const std::int32_t> labels) {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(labels.size()));
    for (auto l : labels) w.u32(static_cast<std::uint32_t>(l));
    return w.take();
}

ec::Fr dataset_algebraic_digest(const quant::RealTensor& samples) {
    std::vector<std::int64_t> pixels;
    pixels.reserve(samples.data.size());
    for (Index s = 0; s < samples.rows; ++s) {
        std::span<const double> row(samples.data.data() + s * samples.cols,
                                    static_cast<std::size_t>(samples.cols));
        auto qx = quant::quantize_input(kCanonicalInputParams, row);
        pixels.insert(pixels.end(), qx.q.begin(), qx.q.end());
    }
    std::vector<Fr> seq;
    seq.push_back(Fr::from_u64(static_cast<std::uint64_t>(samples.rows)));
    seq.push_back(Fr::from_u64(static_cast<std::uint64_t>(samples.cols)));
    for (const Fr& p : pack_bytes_to_elements(pixels)) seq.push_back(p);
    return mimc_hash_elements(seq);
}

ec::Fr labels_algebraic_digest(std::span<const std::int32_t> labels) {
    std::vector<std::int64_t> vals(labels.begin(), labels.end());
    std::vector<Fr> seq;
    seq.push_back(Fr::from_u64(labels.size()));
    for (const Fr& p : pack_bytes_to_elements(vals)) seq.push_back(p);
    return mimc_hash_elements(seq);
}

Statement make_statement(Bytes commitment_bytes, const Fr& model_dig,
                         const quant::RealTensor& samples, std::span<const std::int32_t> labels,
                         std::uint32_t claimed_acc, const ModelShape& shape) {
    Statement st;
    st.commitment = std::move(commitment_bytes);
    st.model_digest = model_dig;
    Bytes ds = serialize_dataset(samples);
    Bytes lb = serialize_labels(labels);
    st.dataset_sha = sha256(ds);
    st.labels_sha = sha256(lb);
    st.dataset_digest = dataset_algebraic_digest(samples);
    st.labels_digest = labels_algebraic_digest(labels);
    st.claimed_acc = claimed_acc;
    st.shape = shape;
    st.n_samples = static_cast<std::uint32_t>(labels.size());
    return st;
}

Witness build_witness(QuantizedModel model, const Fr& opening_r,
                      const quant::RealTensor& samples, std::span<const std::int32_t> labels) {
    Witness w;
    w.opening_r = opening_r;
    w.labels.assign(labels.begin(), labels.end());
    std::vector<quant::InferenceTrace> traces;
    quant::accuracy_with_traces(model, samples, labels, traces);
    w.correct_bits.resize(traces.size());
    for (std::size_t s = 0; s < traces.size(); ++s) {
        w.correct_bits[s] =
            quant::argmax_lowest(traces[s].logits) == labels[s] ? 1 : 0;
    }
    w.traces = std::move(traces);
    w.model = std::move(model);
    return w;
}

}  // namespace zkpot::zk
