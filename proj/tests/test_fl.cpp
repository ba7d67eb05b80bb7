#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "zkpot/common/serial.hpp"
#include "zkpot/fl/train.hpp"

using namespace zkpot;
using namespace zkpot::fl;
using quant::Index;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "zkpot_fl_test";
    fs::create_directories(dir);
    return dir;
}

void write_be32(std::ofstream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                 static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(b, 4);
}

void write_idx_fixture(const fs::path& images, const fs::path& labels, int n, bool truncate_images,
                       bool corrupt_magic) {
    {
        std::ofstream img(images, std::ios::binary);
        write_be32(img, corrupt_magic ? 0x00000999 : 0x00000803);
        write_be32(img, n);
        write_be32(img, 2);
        write_be32(img, 2);
        int pixels = truncate_images ? n * 4 - 3 : n * 4;
        for (int i = 0; i < pixels; ++i) img.put(static_cast<char>(i * 17));
    }
    {
        std::ofstream lab(labels, std::ios::binary);
        write_be32(lab, 0x00000801);
        write_be32(lab, n);
        for (int i = 0; i < n; ++i) lab.put(static_cast<char>(i % 10));
    }
}

Dataset separable_dataset(int n, int features, int classes, std::uint64_t seed) {
    // samples where feature (label) carries the signal: trivially separable
    Rng rng(seed);
    Dataset d;
    d.samples = quant::RealTensor::zeros(n, features);
    d.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        int c = static_cast<int>(rng.below(classes));
        d.labels[i] = c;
        for (int j = 0; j < features; ++j) d.samples.at(i, j) = 0.05 * rng.unit();
        d.samples.at(i, c) = 0.9 + 0.1 * rng.unit();
    }
    return d;
}

}  // namespace

TEST_CASE("idx loader round trips a fixture and rejects corruption") {
    fs::path dir = temp_dir();
    fs::path img = dir / "img", lab = dir / "lab";
    write_idx_fixture(img, lab, 3, false, false);
    Dataset d = load_idx(img, lab, Split::Train);
    CHECK(d.size() == 3);
    CHECK(d.features() == 4);
    CHECK(d.labels == std::vector<std::int32_t>{0, 1, 2});
    for (double v : d.samples.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    write_idx_fixture(img, lab, 3, true, false);
    CHECK_THROWS_AS(load_idx(img, lab, Split::Train), FormatError);
    write_idx_fixture(img, lab, 3, false, true);
    CHECK_THROWS_AS(load_idx(img, lab, Split::Train), FormatError);
    CHECK_THROWS_AS(load_idx(dir / "missing", lab, Split::Train), FormatError);
}

TEST_CASE("synthetic dataset is deterministic and learnable-shaped") {
    Dataset a = synthetic_dataset(5, 64, 16, 4, Split::Train);
    Dataset b = synthetic_dataset(5, 64, 16, 4, Split::Train);
    CHECK(a.samples.data == b.samples.data);
    CHECK(a.labels == b.labels);
    Dataset t = synthetic_dataset(5, 32, 16, 4, Split::Test);
    CHECK(t.samples.data != std::vector<double>(t.samples.data.size(), 0.0));
    Dataset c = synthetic_dataset(6, 64, 16, 4, Split::Train);
    CHECK(a.samples.data != c.samples.data);
}

TEST_CASE("iid partition deals evenly and disjointly") {
    Dataset train = synthetic_dataset(1, 1003, 8, 4, Split::Train);
    auto shards = partition(train, 10, IidScheme{}, 99);
    REQUIRE(shards.size() == 10);
    std::size_t total = 0;
    for (const auto& s : shards) {
        total += static_cast<std::size_t>(s.size());
        CHECK(s.size() >= 100);
        CHECK(s.size() <= 101);
    }
    CHECK(total == 1003);

    auto whole = partition(train, 1, IidScheme{}, 99);
    CHECK(whole[0].size() == train.size());

    CHECK_THROWS_AS(partition(train, 2000, IidScheme{}, 1), InvalidPartition);
}

TEST_CASE("dirichlet partition is deterministic and skews labels") {
    Dataset train = synthetic_dataset(2, 2000, 8, 10, Split::Train);
    auto a = partition(train, 8, DirichletScheme{0.3}, 7);
    auto b = partition(train, 8, DirichletScheme{0.3}, 7);
    REQUIRE(a.size() == b.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].labels == b[i].labels);
        total += static_cast<std::size_t>(a[i].size());
    }
    CHECK(total == 2000);

    // chi-square of client label histograms against the uniform expectation;
    // the dirichlet split must exceed the iid baseline
    auto chi = [&](const std::vector<Dataset>& shards) {
        double stat = 0;
        for (const auto& s : shards) {
            if (s.size() == 0) continue;
            auto h = label_histogram(s, 10);
            double expect = static_cast<double>(s.size()) / 10.0;
            for (auto c : h) stat += (c - expect) * (c - expect) / expect;
        }
        return stat;
    };
    auto iid = partition(train, 8, IidScheme{}, 7);
    CHECK(chi(a) > 2.0 * chi(iid));
}

TEST_CASE("local_train: zero epochs returns the model unchanged") {
    FloatModel m = init_model(std::array<Index, 3>{8, 6, 3}, 1);
    Dataset d = separable_dataset(50, 8, 3, 2);
    TrainConfig cfg;
    cfg.local_epochs = 0;
    FloatModel out = local_train(m, d, cfg, 3);
    CHECK(out.weights[0].data == m.weights[0].data);
    CHECK(out.biases[1].data == m.biases[1].data);
}

TEST_CASE("local_train learns a separable problem") {
    FloatModel m = init_model(std::array<Index, 3>{16, 12, 4}, 4);
    Dataset train = separable_dataset(600, 16, 4, 5);
    Dataset test = separable_dataset(200, 16, 4, 6);
    TrainConfig cfg;
    cfg.local_epochs = 5;
    cfg.learning_rate = 0.2;
    double before = mean_loss(m, train);
    FloatModel out = local_train(m, train, cfg, 7);
    double after = mean_loss(out, train);
    CHECK(after < before);
    CHECK(evaluate(out, test) > 0.7);
}

TEST_CASE("local_train: absurd learning rate diverges") {
    FloatModel m = init_model(std::array<Index, 3>{16, 12, 4}, 8);
    Dataset train = separable_dataset(200, 16, 4, 9);
    TrainConfig cfg;
    cfg.learning_rate = 1e3;
    CHECK_THROWS_AS(local_train(m, train, cfg, 1), TrainingDiverged);
}

TEST_CASE("fedavg: idempotence, mean, weighted oracle, permutation invariance") {
    FloatModel a = init_model(std::array<Index, 3>{6, 5, 3}, 11);
    FloatModel b = init_model(std::array<Index, 3>{6, 5, 3}, 12);
    FloatModel c = init_model(std::array<Index, 3>{6, 5, 3}, 13);

    // identical models map to themselves
    std::vector<FloatModel> same{a, a, a};
    std::vector<std::size_t> sizes{5, 7, 9};
    FloatModel avg_same = fedavg(same, sizes);
    for (std::size_t i = 0; i < a.weights[0].data.size(); ++i)
        CHECK(avg_same.weights[0].data[i] == doctest::Approx(a.weights[0].data[i]));

    // equal sizes -> arithmetic mean
    std::vector<FloatModel> two{a, b};
    std::vector<std::size_t> eq{4, 4};
    FloatModel mean = fedavg(two, eq);
    for (std::size_t i = 0; i < a.weights[0].data.size(); ++i)
        CHECK(mean.weights[0].data[i] ==
              doctest::Approx(0.5 * (a.weights[0].data[i] + b.weights[0].data[i])));

    // sizes (1,2,3): direct weighted-sum oracle
    std::vector<FloatModel> three{a, b, c};
    std::vector<std::size_t> s123{1, 2, 3};
    FloatModel w = fedavg(three, s123);
    for (std::size_t i = 0; i < a.weights[1].data.size(); ++i) {
        double expect = (1.0 * a.weights[1].data[i] + 2.0 * b.weights[1].data[i] +
                         3.0 * c.weights[1].data[i]) /
                        6.0;
        CHECK(w.weights[1].data[i] == doctest::Approx(expect));
    }

    // permutation invariance
    std::vector<FloatModel> permuted{c, a, b};
    std::vector<std::size_t> psizes{3, 1, 2};
    FloatModel w2 = fedavg(permuted, psizes);
    for (std::size_t i = 0; i < w.weights[0].data.size(); ++i)
        CHECK(w2.weights[0].data[i] == doctest::Approx(w.weights[0].data[i]));

    // single model -> identity
    std::vector<FloatModel> one{b};
    std::vector<std::size_t> onesz{10};
    FloatModel id = fedavg(one, onesz);
    CHECK(id.weights[0].data == b.weights[0].data);

    // shape mismatch
    FloatModel other = init_model(std::array<Index, 3>{6, 4, 3}, 14);
    std::vector<FloatModel> bad{a, other};
    CHECK_THROWS_AS(fedavg(bad, eq), ShapeError);
}

TEST_CASE("evaluate: perfect and constant models") {
    // identity-pattern model that reads the signal feature directly
    FloatModel m;
    m.weights.push_back(quant::RealTensor::zeros(3, 6));
    m.biases.push_back(quant::RealTensor::zeros(3, 1));
    for (int c = 0; c < 3; ++c) m.weights[0].at(c, c) = 10.0;
    Dataset d = separable_dataset(100, 6, 3, 20);
    CHECK(evaluate(m, d) == 1.0);

    FloatModel zero;
    zero.weights.push_back(quant::RealTensor::zeros(3, 6));
    zero.biases.push_back(quant::RealTensor::zeros(3, 1));
    Dataset zeros_labels = d;
    std::fill(zeros_labels.labels.begin(), zeros_labels.labels.end(), 0);
    CHECK(evaluate(zero, zeros_labels) == 1.0);  // ties resolve to index 0
}

TEST_CASE("float checkpoint round trips") {
    FloatModel m = init_model(std::array<Index, 3>{10, 8, 4}, 30);
    Bytes blob = serialize_float_model(m);
    CHECK(blob[0] == 'Z');
    CHECK(blob[3] == 'F');
    FloatModel back = deserialize_float_model(blob);
    CHECK(back.weights[0].data == m.weights[0].data);
    CHECK(back.biases[1].data == m.biases[1].data);
    Bytes truncated(blob.begin(), blob.end() - 4);
    CHECK_THROWS_AS(deserialize_float_model(truncated), DeserializeError);
}

TEST_CASE("quantize/dequantize round trip keeps behaviour close") {
    FloatModel m = init_model(std::array<Index, 3>{16, 12, 4}, 31);
    Dataset train = separable_dataset(400, 16, 4, 32);
    TrainConfig cfg;
    cfg.local_epochs = 3;
    cfg.learning_rate = 0.2;
    FloatModel trained = local_train(m, train, cfg, 33);

    quant::QuantizedModel qm = quantize_float_model(trained);
    Dataset test = separable_dataset(150, 16, 4, 34);
    auto float_preds = float_predictions(trained, test);
    std::int64_t agree = 0;
    for (Index i = 0; i < test.size(); ++i) {
        auto qx = quant::quantize_input(qm.input_params, test.row(i));
        auto [logits, trace] = quant::quantized_forward(qm, qx);
        if (quant::argmax_lowest(logits) == float_preds[static_cast<std::size_t>(i)]) ++agree;
    }
    CHECK(agree >= test.size() * 97 / 100);

    FloatModel back = dequantize_model(qm);
    CHECK(back.same_shape(trained));
    double drift = 0;
    for (std::size_t i = 0; i < back.weights[0].data.size(); ++i)
        drift = std::max(drift,
                         std::abs(back.weights[0].data[i] - trained.weights[0].data[i]));
    CHECK(drift <= qm.layers[0].weights.params.scale);
}
