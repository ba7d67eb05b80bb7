#include "doctest.h"

#include <cmath>

#include "zkpot/common/rng.hpp"
#include "zkpot/common/serial.hpp"
#include "zkpot/quant/model.hpp"

using namespace zkpot;
using namespace zkpot::quant;

namespace {

RealTensor random_tensor(Rng& rng, Index r, Index c, double lo, double hi) {
    RealTensor t = RealTensor::zeros(r, c);
    for (auto& v : t.data) v = lo + (hi - lo) * rng.unit();
    return t;
}

QuantParams unit_params(unsigned bw) { return {1.0, 0, bw}; }

// Independent re-evaluation of the remainder identity, written out from the
// zero points and returned aux values only.
bool identity_by_recompute(const QmatmulResult& res, const QuantizedTensor& qw,
                           const QuantizedTensor& qx, const FixedMultiplier& mult) {
    const Index m = res.qy.rows, p = res.qy.cols, n = qw.cols;
    for (Index i = 0; i < m; ++i) {
        for (Index c = 0; c < p; ++c) {
            std::size_t idx = static_cast<std::size_t>(i * p + c);
            __int128 bracket = static_cast<__int128>(res.aux.g1[idx]) +
                               res.aux.bias[static_cast<std::size_t>(i)] +
                               static_cast<__int128>(n) * qw.params.zero_point *
                                   qx.params.zero_point +
                               res.aux.mprime - res.aux.g2[static_cast<std::size_t>(i)] -
                               res.aux.g3[static_cast<std::size_t>(c)];
            if (bracket < 0) return false;
            __int128 rhs = bracket * mult.m;
            __int128 lhs = (static_cast<__int128>(res.qy.q[idx]) << mult.shift) +
                           res.remainder[idx];
            if (lhs != rhs) return false;
            if (res.remainder[idx] < 0 || res.remainder[idx] >= (std::int64_t(1) << mult.shift))
                return false;
        }
    }
    return true;
}

QuantizedModel tiny_identity_model(Index n) {
    QuantizedModel model;
    model.input_params = unit_params(8);
    Layer fc;
    fc.kind = LayerKind::FullyConnected;
    fc.weights.rows = n;
    fc.weights.cols = n;
    fc.weights.params = unit_params(8);
    fc.weights.q.assign(static_cast<std::size_t>(n * n), 0);
    for (Index i = 0; i < n; ++i) fc.weights.q[static_cast<std::size_t>(i * n + i)] = 1;
    fc.bias.assign(static_cast<std::size_t>(n), 0);
    fc.out_params = unit_params(16);
    model.layers.push_back(fc);
    return model;
}

}  // namespace

TEST_CASE("quantize: all-zero tensor maps onto the zero point") {
    RealTensor t = RealTensor::zeros(2, 2);
    QuantizedTensor qt = quantize(t, 8);
    for (auto q : qt.q) CHECK(q == qt.params.zero_point);
    RealTensor back = dequantize(qt);
    for (auto v : back.data) CHECK(v == 0.0);
}

TEST_CASE("quantize: symmetric [-1,1] range pins scale and zero point") {
    RealTensor t = RealTensor::zeros(1, 3);
    t.data = {-1.0, 0.25, 1.0};
    QuantizedTensor qt = quantize(t, 8);
    CHECK(qt.params.scale == doctest::Approx(2.0 / 255.0).epsilon(1e-12));
    CHECK(qt.params.zero_point == 128);  // round-half-away-from-zero of 127.5
    RealTensor back = dequantize(qt);
    CHECK(std::abs(back.data[1] - 0.25) <= qt.params.scale / 2);
    // quantized zero dequantizes within scale of true zero
    RealTensor z = RealTensor::zeros(1, 1);
    z.data = {0.0};
    // embed zero in the same params by quantizing manually
    std::int64_t q0 = qt.params.zero_point;
    CHECK(std::abs(qt.params.scale * double(q0 - qt.params.zero_point)) <= 2.0 / 255.0);
}

TEST_CASE("quantize: round trip error bounded by scale/2") {
    Rng rng(11);
    RealTensor t = random_tensor(rng, 10, 10, -3.0, 5.0);
    for (unsigned bw : {8u, 16u}) {
        QuantizedTensor qt = quantize(t, bw);
        RealTensor back = dequantize(qt);
        for (std::size_t i = 0; i < t.data.size(); ++i) {
            CHECK(std::abs(back.data[i] - t.data[i]) <= qt.params.scale / 2 + 1e-12);
        }
    }
}

TEST_CASE("quantize: rejects bad input") {
    RealTensor t = RealTensor::zeros(1, 1);
    t.data[0] = std::nan("");
    CHECK_THROWS_AS(quantize(t, 8), InvalidTensor);
    RealTensor empty;
    CHECK_THROWS_AS(quantize(empty, 8), InvalidTensor);
    RealTensor ok = RealTensor::zeros(1, 1);
    CHECK_THROWS_AS(quantize(ok, 12), InvalidTensor);
}

TEST_CASE("dequantize: identity scale") {
    QuantizedTensor qt{1, 2, {3, -2}, unit_params(8)};
    RealTensor r = dequantize(qt);
    CHECK(r.data[0] == 3.0);
    CHECK(r.data[1] == -2.0);
}

TEST_CASE("fixed_multiplier examples") {
    CHECK(fixed_multiplier(1, 1, 1, 8).m == 256);
    CHECK(fixed_multiplier(0.5, 0.5, 0.25, 4).m == 16);
    CHECK_THROWS_AS(fixed_multiplier(1, 1, 1e-300, 24), MultiplierOverflow);
    CHECK_THROWS_AS(fixed_multiplier(1, 1, 0.0, 24), MultiplierOverflow);
    CHECK_THROWS_AS(fixed_multiplier(1e-300, 1e-300, 1.0, 4), MultiplierOverflow);
}

TEST_CASE("qmatmul: trivial configuration is plain integer matmul") {
    QuantizedTensor qw{2, 3, {1, 2, 3, 4, 5, 6}, unit_params(8)};
    QuantizedTensor qx{3, 2, {7, 8, 9, 10, 11, 12}, unit_params(8)};
    FixedMultiplier mult{1, 0};
    QmatmulResult res = qmatmul(qw, qx, mult, unit_params(16));
    CHECK(res.qy.q == std::vector<std::int64_t>{58, 64, 139, 154});
    for (auto r : res.remainder) CHECK(r == 0);
    CHECK(check_remainder_identity(res, qw, qx, mult));
}

TEST_CASE("qmatmul: random 4x4 tracks the float product") {
    Rng rng(12);
    RealTensor w = random_tensor(rng, 4, 4, -1.0, 1.0);
    RealTensor x = random_tensor(rng, 4, 4, -1.0, 1.0);
    QuantizedTensor qw = quantize(w, 8);
    QuantizedTensor qx = quantize(x, 8);

    // float oracle
    RealTensor y = RealTensor::zeros(4, 4);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) {
            double acc = 0;
            for (Index k = 0; k < 4; ++k) acc += w.at(i, k) * x.at(k, j);
            y.at(i, j) = acc;
        }

    // 8-bit output params from the observed range, padded for rounding wobble
    double lo = y.data[0], hi = y.data[0];
    for (double v : y.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double pad = 0.05 * (hi - lo) + 1e-6;
    QuantParams out;
    out.bit_width = 8;
    out.scale = (hi - lo + 2 * pad) / 255.0;
    out.zero_point = std::llround(-(lo - pad) / out.scale);
    FixedMultiplier mult =
        fixed_multiplier(qw.params.scale, qx.params.scale, out.scale, kDefaultShift);

    QmatmulResult res = qmatmul(qw, qx, mult, out);
    RealTensor dq = dequantize(res.qy);
    for (std::size_t i = 0; i < dq.data.size(); ++i) {
        CHECK(std::abs(dq.data[i] - y.data[i]) <= 3 * out.scale);
    }
    CHECK(identity_by_recompute(res, qw, qx, mult));
}

TEST_CASE("qmatmul: remainder identity holds over random shapes (property)") {
    Rng rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        Index m = 1 + static_cast<Index>(rng.below(6));
        Index n = 1 + static_cast<Index>(rng.below(8));
        Index p = 1 + static_cast<Index>(rng.below(4));
        RealTensor w = random_tensor(rng, m, n, -2.0, 2.0);
        RealTensor x = random_tensor(rng, n, p, -1.0, 1.0);
        QuantizedTensor qw = quantize(w, 8);
        QuantizedTensor qx = quantize(x, 8);
        std::vector<std::int64_t> bias(static_cast<std::size_t>(m));
        for (auto& b : bias) b = static_cast<std::int64_t>(rng.below(2001)) - 1000;
        auto [out, mult] = choose_activation_params(qw, bias, qx.params);
        QmatmulResult res = qmatmul(qw, qx, mult, out, bias);
        CHECK(identity_by_recompute(res, qw, qx, mult));
        // positivity of the grouped terms
        for (auto g : res.aux.g1) CHECK(g >= 0);
        for (auto g : res.aux.g2) CHECK(g >= 0);
        for (auto g : res.aux.g3) CHECK(g >= 0);
        CHECK(res.aux.mprime >= 0);
        // parallel kernel is bit-identical to the serial reference
        QmatmulResult ref = qmatmul_reference(qw, qx, mult, out, bias);
        CHECK(res.qy.q == ref.qy.q);
        CHECK(res.remainder == ref.remainder);
    }
}

TEST_CASE("qmatmul: shape errors") {
    QuantizedTensor qw{2, 3, {1, 2, 3, 4, 5, 6}, unit_params(8)};
    QuantizedTensor qx{2, 2, {1, 2, 3, 4}, unit_params(8)};
    CHECK_THROWS_AS(qmatmul(qw, qx, FixedMultiplier{1, 0}, unit_params(16)), ShapeError);
}

TEST_CASE("qmatmul: saturation of the quantized range is rejected") {
    QuantizedTensor qw{1, 1, {255}, unit_params(8)};
    QuantizedTensor qx{1, 1, {255}, unit_params(8)};
    // 255*255 > 255 with identity scaling: must throw rather than clamp
    CHECK_THROWS_AS(qmatmul(qw, qx, FixedMultiplier{1, 0}, unit_params(8)), OverflowError);
}

TEST_CASE("quantized_forward: identity layer returns its input") {
    QuantizedModel model = tiny_identity_model(4);
    QuantizedTensor input{4, 1, {5, 0, 255, 17}, unit_params(8)};
    auto [logits, trace] = quantized_forward(model, input);
    CHECK(logits == std::vector<std::int64_t>{5, 0, 255, 17});
    CHECK(validate_trace(model, trace));
}

TEST_CASE("quantized_forward: empty model and shape mismatch") {
    QuantizedModel empty;
    QuantizedTensor input{4, 1, {0, 0, 0, 0}, unit_params(8)};
    CHECK_THROWS_AS(quantized_forward(empty, input), ShapeError);
    QuantizedModel model = tiny_identity_model(3);
    CHECK_THROWS_AS(quantized_forward(model, input), ShapeError);
}

TEST_CASE("build_quantized_model + forward agree with float model on argmax") {
    Rng rng(14);
    // two-layer net on synthetic data; fidelity at small scale
    const Index d_in = 16, d_h = 12, d_out = 4;
    RealTensor w1 = random_tensor(rng, d_h, d_in, -0.4, 0.4);
    RealTensor b1 = random_tensor(rng, d_h, 1, -0.1, 0.1);
    RealTensor w2 = random_tensor(rng, d_out, d_h, -0.5, 0.5);
    RealTensor b2 = random_tensor(rng, d_out, 1, -0.1, 0.1);
    QuantParams input_params{1.0 / 255.0, 0, 8};
    std::vector<RealTensor> ws{w1, w2}, bs{b1, b2};
    QuantizedModel model = build_quantized_model(ws, bs, input_params);

    int agree = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        RealTensor x = random_tensor(rng, d_in, 1, 0.0, 1.0);
        // float forward
        std::vector<double> h(static_cast<std::size_t>(d_h)), o(static_cast<std::size_t>(d_out));
        for (Index i = 0; i < d_h; ++i) {
            double acc = b1.data[static_cast<std::size_t>(i)];
            for (Index j = 0; j < d_in; ++j) acc += w1.at(i, j) * x.data[static_cast<std::size_t>(j)];
            h[static_cast<std::size_t>(i)] = std::max(acc, 0.0);
        }
        for (Index i = 0; i < d_out; ++i) {
            double acc = b2.data[static_cast<std::size_t>(i)];
            for (Index j = 0; j < d_h; ++j) acc += w2.at(i, j) * h[static_cast<std::size_t>(j)];
            o[static_cast<std::size_t>(i)] = acc;
        }
        int float_arg = 0;
        for (Index i = 1; i < d_out; ++i)
            if (o[static_cast<std::size_t>(i)] > o[static_cast<std::size_t>(float_arg)])
                float_arg = static_cast<int>(i);

        auto qx = quantize_input(model.input_params, x.data);
        auto [logits, trace] = quantized_forward(model, qx);
        if (argmax_lowest(logits) == float_arg) ++agree;
        if (t < 5) CHECK(validate_trace(model, trace));
    }
    CHECK(agree >= trials * 97 / 100);
}

TEST_CASE("accuracy: one-hot model and tie-break rule") {
    QuantizedModel model = tiny_identity_model(3);
    RealTensor samples = RealTensor::zeros(3, 3);
    samples.at(0, 0) = 200.0;
    samples.at(1, 1) = 200.0;
    samples.at(2, 2) = 200.0;
    std::vector<std::int32_t> labels{0, 1, 2};
    CHECK(accuracy(model, samples, labels) == 3);

    // constant-zero logits: ties resolve to index 0
    QuantizedModel zero_model = tiny_identity_model(3);
    zero_model.layers[0].weights.q.assign(9, 0);
    std::vector<std::int32_t> zeros{0, 0, 0};
    CHECK(accuracy(zero_model, samples, zeros) == 3);
    std::vector<std::int32_t> ones{1, 1, 1};
    CHECK(accuracy(zero_model, samples, ones) == 0);

    std::vector<std::int32_t> short_labels{0};
    CHECK_THROWS_AS(accuracy(model, samples, short_labels), InvalidDataset);

    CHECK(accuracy_serial(model, samples, labels) == 3);
}

TEST_CASE("model serialization round trips and validates") {
    Rng rng(15);
    RealTensor w1 = random_tensor(rng, 6, 8, -0.5, 0.5);
    RealTensor b1 = random_tensor(rng, 6, 1, -0.1, 0.1);
    RealTensor w2 = random_tensor(rng, 3, 6, -0.5, 0.5);
    RealTensor b2 = random_tensor(rng, 3, 1, -0.1, 0.1);
    std::vector<RealTensor> ws{w1, w2}, bs{b1, b2};
    QuantizedModel model = build_quantized_model(ws, bs, {1.0 / 255.0, 0, 8});

    Bytes blob = serialize_model(model);
    CHECK(blob[0] == 'Z');
    CHECK(blob[1] == 'K');
    CHECK(blob[2] == 'P');
    CHECK(blob[3] == 'Q');

    QuantizedModel back = deserialize_model(blob);
    CHECK(serialize_model(back) == blob);

    // identical behaviour
    RealTensor x = random_tensor(rng, 8, 1, 0.0, 1.0);
    auto qx = quantize_input(model.input_params, x.data);
    auto [l1, t1] = quantized_forward(model, qx);
    auto [l2, t2] = quantized_forward(back, qx);
    CHECK(l1 == l2);

    // structural tampering is caught
    Bytes bad = blob;
    bad[0] = 'X';
    CHECK_THROWS_AS(deserialize_model(bad), DeserializeError);
    Bytes truncated(blob.begin(), blob.begin() + blob.size() / 2);
    CHECK_THROWS_AS(deserialize_model(truncated), DeserializeError);
}

TEST_CASE("deterministic traces: identical runs produce identical bytes") {
    Rng rng(16);
    RealTensor w = random_tensor(rng, 10, 12, -0.5, 0.5);
    RealTensor b = random_tensor(rng, 10, 1, -0.05, 0.05);
    std::vector<RealTensor> ws{w}, bs{b};
    QuantizedModel model = build_quantized_model(ws, bs, {1.0 / 255.0, 0, 8});
    RealTensor samples = random_tensor(rng, 40, 12, 0.0, 1.0);
    std::vector<std::int32_t> labels(40, 0);

    std::vector<InferenceTrace> ta, tb;
    std::int64_t a1 = accuracy_with_traces(model, samples, labels, ta);
    std::int64_t a2 = accuracy_with_traces(model, samples, labels, tb);
    CHECK(a1 == a2);
    REQUIRE(ta.size() == tb.size());
    for (std::size_t i = 0; i < ta.size(); ++i) {
        REQUIRE(ta[i].layers.size() == tb[i].layers.size());
        CHECK(ta[i].logits == tb[i].logits);
        for (std::size_t l = 0; l < ta[i].layers.size(); ++l) {
            CHECK(ta[i].layers[l].qy.q == tb[i].layers[l].qy.q);
            CHECK(ta[i].layers[l].remainder == tb[i].layers[l].remainder);
            CHECK(ta[i].layers[l].aux.g1 == tb[i].layers[l].aux.g1);
        }
    }
}

TEST_CASE("budget validation rejects absurd configurations") {
    QuantizedModel model = tiny_identity_model(2);
    model.layers[0].bias.assign(2, std::int64_t(1) << 61);
    CHECK_THROWS_AS(validate_model_budget(model), OverflowError);
}
