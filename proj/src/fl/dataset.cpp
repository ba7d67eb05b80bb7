#include "zkpot/fl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace zkpot::fl {

using quant::Index;

Dataset Dataset::subset(std::span<const Index> indices) const {
    Dataset out;
    out.split = split;
    out.samples = quant::RealTensor::zeros(static_cast<Index>(indices.size()), samples.cols);
    out.labels.resize(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), out.samples.data.begin() + i * samples.cols);
        out.labels[i] = labels[static_cast<std::size_t>(indices[i])];
    }
    return out;
}

namespace {

std::uint32_t read_be32(std::istream& in) {
    std::uint8_t b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("idx: truncated header");
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
           b[3];
}

}  // namespace

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 Split split) {
    std::ifstream img(images, std::ios::binary);
    if (!img) throw FormatError("idx: cannot open " + images.string());
    if (read_be32(img) != 0x00000803) throw FormatError("idx: bad image magic");
    std::uint32_t n = read_be32(img);
    std::uint32_t rows = read_be32(img);
    std::uint32_t cols = read_be32(img);
    if (n == 0 || rows == 0 || cols == 0 || rows * cols > 4096)
        throw FormatError("idx: implausible image dimensions");

    std::ifstream lab(labels, std::ios::binary);
    if (!lab) throw FormatError("idx: cannot open " + labels.string());
    if (read_be32(lab) != 0x00000801) throw FormatError("idx: bad label magic");
    if (read_be32(lab) != n) throw FormatError("idx: image/label count mismatch");

    Dataset out;
    out.split = split;
    out.samples = quant::RealTensor::zeros(n, static_cast<Index>(rows * cols));
    out.labels.resize(n);
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(rows) * cols);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!img.read(reinterpret_cast<char*>(buf.data()), buf.size()))
            throw FormatError("idx: truncated image data");
        for (std::size_t j = 0; j < buf.size(); ++j)
            out.samples.data[i * buf.size() + j] = buf[j] / 255.0;
        char l;
        if (!lab.read(&l, 1)) throw FormatError("idx: truncated label data");
        out.labels[i] = static_cast<std::uint8_t>(l);
        if (out.labels[i] > 9) throw FormatError("idx: label out of range");
    }
    return out;
}

std::pair<Dataset, Dataset> load_mnist(const std::filesystem::path& dir) {
    Dataset train =
        load_idx(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte", Split::Train);
    Dataset test =
        load_idx(dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte", Split::Test);
    return {std::move(train), std::move(test)};
}

Dataset synthetic_dataset(std::uint64_t seed, Index n, Index features, int classes, Split split) {
    // class prototypes from one stream, per-sample noise from another, so the
    // train and test splits of one seed share prototypes
    std::vector<std::vector<double>> prototypes(static_cast<std::size_t>(classes));
    Rng pr = Rng(seed).derive(1);
    for (auto& p : prototypes) {
        p.resize(static_cast<std::size_t>(features));
        for (auto& v : p) v = 0.5 + 0.28 * pr.gaussian();
    }
    Rng noise = Rng(seed).derive(split == Split::Train ? 2 : 3);
    Dataset out;
    out.split = split;
    out.samples = quant::RealTensor::zeros(n, features);
    out.labels.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        int c = static_cast<int>(noise.below(static_cast<std::uint64_t>(classes)));
        out.labels[static_cast<std::size_t>(i)] = c;
        for (Index j = 0; j < features; ++j) {
            double v = prototypes[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] +
                       0.18 * noise.gaussian();
            v = std::clamp(v, 0.0, 1.0);
            // byte-quantized like the real pixel data
            out.samples.at(i, j) = std::round(v * 255.0) / 255.0;
        }
    }
    return out;
}

namespace {

double gamma_sample(Rng& rng, double alpha) {
    // Marsaglia-Tsang, with the alpha < 1 boost
    if (alpha < 1.0) {
        double u = rng.unit();
        while (u <= 0.0) u = rng.unit();
        return gamma_sample(rng, alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    double d = alpha - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rng.gaussian();
        double v = 1.0 + c * x;
        if (v <= 0) continue;
        v = v * v * v;
        double u = rng.unit();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

std::vector<Dataset> partition(const Dataset& train, std::size_t n_clients,
                               const PartitionScheme& scheme, std::uint64_t seed) {
    if (n_clients == 0 || static_cast<Index>(n_clients) > train.size())
        throw InvalidPartition("partition: client count out of range");
    Rng rng(seed);
    std::vector<std::vector<Index>> assign(n_clients);

    if (std::holds_alternative<IidScheme>(scheme)) {
        std::vector<Index> idx(static_cast<std::size_t>(train.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Index>(i);
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.below(i)]);
        for (std::size_t i = 0; i < idx.size(); ++i) assign[i % n_clients].push_back(idx[i]);
    } else {
        double alpha = std::get<DirichletScheme>(scheme).alpha;
        if (!(alpha > 0)) throw InvalidPartition("partition: dirichlet alpha must be positive");
        // group indices by class, split each class by Dirichlet(alpha) weights
        std::vector<std::vector<Index>> by_class;
        for (Index i = 0; i < train.size(); ++i) {
            auto c = static_cast<std::size_t>(train.labels[static_cast<std::size_t>(i)]);
            if (c >= by_class.size()) by_class.resize(c + 1);
            by_class[c].push_back(i);
        }
        for (auto& members : by_class) {
            if (members.empty()) continue;
            for (std::size_t i = members.size(); i > 1; --i)
                std::swap(members[i - 1], members[rng.below(i)]);
            std::vector<double> w(n_clients);
            double total = 0;
            for (auto& x : w) {
                x = gamma_sample(rng, alpha);
                total += x;
            }
            std::size_t assigned = 0;
            for (std::size_t c = 0; c < n_clients; ++c) {
                std::size_t take =
                    c + 1 == n_clients
                        ? members.size() - assigned
                        : std::min<std::size_t>(
                              members.size() - assigned,
                              static_cast<std::size_t>(std::floor(w[c] / total * members.size())));
                for (std::size_t k = 0; k < take; ++k)
                    assign[c].push_back(members[assigned + k]);
                assigned += take;
            }
        }
    }

    std::vector<Dataset> out;
    out.reserve(n_clients);
    for (auto& a : assign) {
        std::sort(a.begin(), a.end());
        out.push_back(train.subset(a));
    }
    return out;
}

std::vector<std::size_t> label_histogram(const Dataset& d, int classes) {
    std::vector<std::size_t> h(static_cast<std::size_t>(classes), 0);
    for (auto l : d.labels)
        if (l >= 0 && l < classes) ++h[static_cast<std::size_t>(l)];
    return h;
}

}  // namespace zkpot::fl
