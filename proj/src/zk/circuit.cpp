#include "zkpot/zk/circuit.hpp"

#include <cassert>

namespace zkpot::zk {

using ec::Fr;
using quant::Index;
using quant::LayerKind;

void validate_shape(const ModelShape& shape, const CircuitConfig& cfg) {
    if (shape.dims.size() < 2) throw UnsupportedCircuit("shape needs at least one FC layer");
    for (auto d : shape.dims)
        if (d <= 0 || d > (1 << 20)) throw UnsupportedCircuit("implausible layer dimension");
    if (shape.dims.back() < 2 || shape.dims.back() > 255)
        throw UnsupportedCircuit("class count must be in [2, 255]");
    if (cfg.n_samples == 0) throw UnsupportedCircuit("need at least one sample");
    if (cfg.shift == 0 || cfg.shift > 40) throw UnsupportedCircuit("shift out of range");
}

namespace {

LinComb lc_var(std::uint32_t v) { return {{v, Fr::one()}}; }
LinComb lc_const(const Fr& k) { return {{0, k}}; }

void lc_add_term(LinComb& lc, std::uint32_t var, const Fr& coeff) {
    lc.push_back({var, coeff});
}
void lc_extend(LinComb& lc, const LinComb& other, const Fr& scale) {
    for (const Term& t : other) lc.push_back({t.var, t.coeff * scale});
}

// Integer values that feed the allocation sites in witness mode.
struct LayerValues {
    std::int64_t z_w = 0, z_y = 0, m = 1, mprime = 0;
    std::vector<std::int64_t> weights;
    std::vector<std::int64_t> bias;
};

struct WitnessData {
    const Statement* statement = nullptr;
    const Witness* witness = nullptr;
    std::vector<LayerValues> layers;
    std::vector<std::int64_t> labels;
};

class Builder {
public:
    Builder(const ModelShape& shape, const CircuitConfig& cfg, const WitnessData* wd)
        : shape_(shape), cfg_(cfg), wd_(wd) {
        values_.push_back(Fr::one());
        if (wd_) {
            pub_hq_val_ = wd_->statement->model_digest;
            pub_dd_val_ = wd_->statement->dataset_digest;
            pub_td_val_ = wd_->statement->labels_digest;
            pub_acc_val_ = Fr::from_u64(wd_->statement->claimed_acc);
        }
    }

    void build() {
        pub_hq_ = alloc(pub_hq_val_);
        pub_dd_ = alloc(pub_dd_val_);
        pub_td_ = alloc(pub_td_val_);
        pub_acc_ = alloc(pub_acc_val_);
        cs_.num_public = kNumPublicInputs;

        build_model_binding();
        build_dataset_binding();
        build_label_vars();
        LinComb acc_sum;
        for (std::uint32_t s = 0; s < cfg_.n_samples; ++s) {
            std::uint32_t correct = build_sample(s);
            lc_add_term(acc_sum, correct, Fr::one());
        }
        // sum of per-sample correctness bits equals the public accuracy
        LinComb diff = acc_sum;
        lc_extend(diff, lc_var(pub_acc_), -Fr::one());
        constrain(diff, lc_var(0), {});
        build_labels_binding();
        cs_.num_vars = next_var_;
    }

    R1cs take_cs() { return std::move(cs_); }
    std::vector<Fr> take_assignment() { return std::move(values_); }

private:
    bool with_values() const { return wd_ != nullptr; }

    Fr eval(const LinComb& lc) const {
        Fr acc = Fr::zero();
        for (const Term& t : lc) acc += t.coeff * values_[t.var];
        return acc;
    }

    std::uint32_t alloc(const Fr& v) {
        if (with_values()) values_.push_back(v);
        return next_var_++;
    }

    void constrain(LinComb a, LinComb b, LinComb c) {
        cs_.constraints.push_back({std::move(a), std::move(b), std::move(c)});
    }

    std::uint32_t mul(const LinComb& a, const LinComb& b) {
        Fr v = with_values() ? eval(a) * eval(b) : Fr::zero();
        std::uint32_t out = alloc(v);
        constrain(a, b, lc_var(out));
        return out;
    }

    // Materializes an LC into a fresh variable (linear constraint).
    std::uint32_t materialize(const LinComb& lc) {
        Fr v = with_values() ? eval(lc) : Fr::zero();
        std::uint32_t out = alloc(v);
        LinComb diff = lc;
        lc_add_term(diff, out, -Fr::one());
        constrain(diff, lc_var(0), {});
        return out;
    }

    // Boolean-constrained bit variables plus the recomposition constraint.
    std::vector<std::uint32_t> decompose(const LinComb& v, unsigned bits) {
        std::uint64_t raw = 0;
        if (with_values()) raw = eval(v).to_raw()[0];
        std::vector<std::uint32_t> out(bits);
        LinComb recompose;
        for (unsigned b = 0; b < bits; ++b) {
            Fr bit = Fr::from_u64((raw >> b) & 1);
            std::uint32_t var = alloc(with_values() ? bit : Fr::zero());
            out[b] = var;
            LinComb minus_one = lc_var(var);
            lc_add_term(minus_one, 0, -Fr::one());
            constrain(lc_var(var), minus_one, {});
            lc_add_term(recompose, var, pow2(b));
        }
        lc_extend(recompose, v, -Fr::one());
        constrain(recompose, lc_var(0), {});
        return out;
    }

    static Fr pow2(unsigned b) {
        Fr acc = Fr::one();
        for (unsigned i = 0; i < b; ++i) acc = acc.dbl();
        return acc;
    }

    LinComb mimc_compress_gadget(const LinComb& chain, const LinComb& msg) {
        auto rc = mimc_round_constants();
        LinComb s = msg;
        for (unsigned i = 0; i < kMimcRounds; ++i) {
            LinComb t = s;
            lc_extend(t, chain, Fr::one());
            lc_add_term(t, 0, rc[i]);
            std::uint32_t t2 = mul(t, t);
            std::uint32_t t4 = mul(lc_var(t2), lc_var(t2));
            std::uint32_t s5 = mul(lc_var(t4), t);
            s = lc_var(s5);
        }
        // encrypt's final key addition plus the Miyaguchi-Preneel feed-forward
        LinComb out = s;
        lc_extend(out, chain, Fr::from_u64(2));
        lc_extend(out, msg, Fr::one());
        return out;
    }

    // Hash of a sequence of LCs; chains are materialized so combinations stay
    // short. Mirrors mimc_hash_elements exactly.
    LinComb mimc_hash_gadget(std::span<const LinComb> seq) {
        LinComb chain =
            mimc_compress_gadget(lc_const(Fr::zero()), lc_const(Fr::from_u64(seq.size())));
        for (const LinComb& msg : seq) {
            std::uint32_t cv = materialize(chain);
            chain = mimc_compress_gadget(lc_var(cv), msg);
        }
        return chain;
    }

    // Packs groups of 31 byte-range variables into field elements.
    std::vector<LinComb> pack_gadget(std::span<const std::uint32_t> vars) {
        std::vector<LinComb> out;
        for (std::size_t off = 0; off < vars.size(); off += 31) {
            LinComb lc;
            std::size_t n = std::min<std::size_t>(31, vars.size() - off);
            for (std::size_t i = 0; i < n; ++i) lc_add_term(lc, vars[off + i], pow2(8 * i));
            out.push_back(std::move(lc));
        }
        return out;
    }

    void build_model_binding() {
        const std::size_t L = shape_.dims.size() - 1;
        z_w_.resize(L);
        z_y_.resize(L);
        m_.resize(L);
        mp_.resize(L);
        bias_.resize(L);
        weights_.resize(L);

        std::vector<LinComb> seq;
        seq.push_back(lc_const(Fr::from_u64(L)));
        for (std::size_t l = 0; l < L; ++l) {
            const auto lv = [&]() -> const LayerValues* {
                return with_values() ? &wd_->layers[l] : nullptr;
            }();
            z_w_[l] = alloc(lv ? Fr::from_i64(lv->z_w) : Fr::zero());
            z_y_[l] = alloc(lv ? Fr::from_i64(lv->z_y) : Fr::zero());
            m_[l] = alloc(lv ? Fr::from_i64(lv->m) : Fr::zero());
            mp_[l] = alloc(lv ? Fr::from_i64(lv->mprime) : Fr::zero());

            seq.push_back(lc_const(Fr::from_u64(static_cast<std::uint64_t>(shape_.dims[l]))));
            seq.push_back(lc_const(Fr::from_u64(static_cast<std::uint64_t>(shape_.dims[l + 1]))));
            seq.push_back(lc_var(z_w_[l]));
            seq.push_back(l == 0 ? lc_const(Fr::zero()) : lc_var(z_y_[l - 1]));
            seq.push_back(lc_var(z_y_[l]));
            seq.push_back(lc_var(m_[l]));
            seq.push_back(lc_var(mp_[l]));

            const Index rows = shape_.dims[l + 1];
            bias_[l].resize(static_cast<std::size_t>(rows));
            for (Index i = 0; i < rows; ++i) {
                bias_[l][static_cast<std::size_t>(i)] =
                    alloc(lv ? Fr::from_i64(lv->bias[static_cast<std::size_t>(i)]) : Fr::zero());
                seq.push_back(lc_var(bias_[l][static_cast<std::size_t>(i)]));
            }
        }
        std::vector<std::uint32_t> all_weight_vars;
        for (std::size_t l = 0; l < L; ++l) {
            const Index rows = shape_.dims[l + 1];
            const Index cols = shape_.dims[l];
            weights_[l].resize(static_cast<std::size_t>(rows * cols));
            for (Index i = 0; i < rows * cols; ++i) {
                Fr v = with_values()
                           ? Fr::from_i64(wd_->layers[l].weights[static_cast<std::size_t>(i)])
                           : Fr::zero();
                std::uint32_t var = alloc(v);
                weights_[l][static_cast<std::size_t>(i)] = var;
                all_weight_vars.push_back(var);
                decompose(lc_var(var), 8);  // packing injectivity
            }
        }
        for (auto& packed : pack_gadget(all_weight_vars)) seq.push_back(std::move(packed));

        LinComb digest = mimc_hash_gadget(seq);
        lc_extend(digest, lc_var(pub_hq_), -Fr::one());
        constrain(digest, lc_var(0), {});
    }

    void build_dataset_binding() {
        const Index features = shape_.dims.front();
        pixels_.resize(cfg_.n_samples);
        std::vector<std::uint32_t> all_pixels;
        for (std::uint32_t s = 0; s < cfg_.n_samples; ++s) {
            pixels_[s].resize(static_cast<std::size_t>(features));
            for (Index j = 0; j < features; ++j) {
                Fr v = Fr::zero();
                if (with_values()) {
                    const auto& qx = wd_->witness->traces[s].layers.front().qx;
                    v = Fr::from_i64(qx.q[static_cast<std::size_t>(j)]);
                }
                std::uint32_t var = alloc(v);
                pixels_[s][static_cast<std::size_t>(j)] = var;
                all_pixels.push_back(var);
                decompose(lc_var(var), 8);
            }
        }
        std::vector<LinComb> seq;
        seq.push_back(lc_const(Fr::from_u64(cfg_.n_samples)));
        seq.push_back(lc_const(Fr::from_u64(static_cast<std::uint64_t>(features))));
        for (auto& packed : pack_gadget(all_pixels)) seq.push_back(std::move(packed));
        LinComb digest = mimc_hash_gadget(seq);
        lc_extend(digest, lc_var(pub_dd_), -Fr::one());
        constrain(digest, lc_var(0), {});
    }

    void build_label_vars() {
        labels_.resize(cfg_.n_samples);
        for (std::uint32_t s = 0; s < cfg_.n_samples; ++s) {
            Fr v = with_values() ? Fr::from_i64(label_value(s)) : Fr::zero();
            labels_[s] = alloc(v);
        }
    }

    std::int64_t label_value(std::uint32_t s) const { return wd_->labels[s]; }

    void build_labels_binding() {
        std::vector<LinComb> seq;
        seq.push_back(lc_const(Fr::from_u64(cfg_.n_samples)));
        for (auto& packed : pack_gadget(labels_)) seq.push_back(std::move(packed));
        LinComb digest = mimc_hash_gadget(seq);
        lc_extend(digest, lc_var(pub_td_), -Fr::one());
        constrain(digest, lc_var(0), {});
    }

    // Full inference plus the argmax-correctness bit for one sample.
    std::uint32_t build_sample(std::uint32_t s) {
        const std::size_t L = shape_.dims.size() - 1;
        const quant::InferenceTrace* trace =
            with_values() ? &wd_->witness->traces[s] : nullptr;

        std::vector<LinComb> cur;  // current activations
        for (std::uint32_t v : pixels_[s]) cur.push_back(lc_var(v));
        LinComb z_x_lc = lc_const(Fr::zero());  // canonical input zero point

        std::vector<std::uint32_t> logits;
        for (std::size_t l = 0; l < L; ++l) {
            const Index rows = shape_.dims[l + 1];
            const Index cols = shape_.dims[l];
            const quant::LayerTrace* lt = trace ? &trace->layers[l] : nullptr;

            // column sum of the input activations (single column)
            LinComb colsum;
            for (const LinComb& x : cur) lc_extend(colsum, x, Fr::one());
            std::uint32_t g3 = mul(lc_var(z_w_[l]), colsum);
            std::uint32_t zwzx = mul(lc_var(z_w_[l]), z_x_lc);

            std::vector<std::uint32_t> qy_vars(static_cast<std::size_t>(rows));
            for (Index i = 0; i < rows; ++i) {
                LinComb g1;
                LinComb rowsum;
                for (Index j = 0; j < cols; ++j) {
                    std::uint32_t w = weights_[l][static_cast<std::size_t>(i * cols + j)];
                    std::uint32_t t = mul(lc_var(w), cur[static_cast<std::size_t>(j)]);
                    lc_add_term(g1, t, Fr::one());
                    lc_add_term(rowsum, w, Fr::one());
                }
                std::uint32_t g2 = mul(z_x_lc, rowsum);

                LinComb bracket = g1;
                lc_add_term(bracket, bias_[l][static_cast<std::size_t>(i)], Fr::one());
                lc_add_term(bracket, zwzx, Fr::from_u64(static_cast<std::uint64_t>(cols)));
                lc_add_term(bracket, mp_[l], Fr::one());
                lc_add_term(bracket, g2, -Fr::one());
                lc_add_term(bracket, g3, -Fr::one());

                Fr qy_val = lt ? Fr::from_i64(lt->qy.q[static_cast<std::size_t>(i)]) : Fr::zero();
                Fr r_val =
                    lt ? Fr::from_i64(lt->remainder[static_cast<std::size_t>(i)]) : Fr::zero();
                std::uint32_t qy = alloc(qy_val);
                std::uint32_t rem = alloc(r_val);
                qy_vars[static_cast<std::size_t>(i)] = qy;

                LinComb rhs;
                lc_add_term(rhs, qy, pow2(cfg_.shift));
                lc_add_term(rhs, rem, Fr::one());
                constrain(lc_var(m_[l]), bracket, rhs);

                decompose(lc_var(qy), cfg_.activation_bits);
                decompose(lc_var(rem), cfg_.shift);
            }

            if (l + 1 < L) {
                // ReLU: out = z_y + sign(q - z_y) * (q - z_y)
                std::vector<LinComb> next;
                for (Index i = 0; i < rows; ++i) {
                    std::uint32_t qy = qy_vars[static_cast<std::size_t>(i)];
                    LinComb d = lc_var(qy);
                    lc_add_term(d, z_y_[l], -Fr::one());
                    LinComb shifted = d;
                    lc_add_term(shifted, 0, pow2(cfg_.activation_bits));
                    auto bits = decompose(shifted, cfg_.activation_bits + 1);
                    std::uint32_t nonneg = bits[cfg_.activation_bits];
                    std::uint32_t p = mul(lc_var(nonneg), d);
                    Fr relu_val = Fr::zero();
                    if (lt) {
                        const auto& next_qx = trace->layers[l + 1].qx;
                        relu_val = Fr::from_i64(next_qx.q[static_cast<std::size_t>(i)]);
                    }
                    std::uint32_t out = alloc(relu_val);
                    LinComb lin = lc_var(out);
                    lc_add_term(lin, z_y_[l], -Fr::one());
                    lc_add_term(lin, p, -Fr::one());
                    constrain(lin, lc_var(0), {});
                    next.push_back(lc_var(out));
                }
                cur = std::move(next);
                z_x_lc = lc_var(z_y_[l]);
            } else {
                logits = qy_vars;
            }
        }

        return build_argmax(s, logits);
    }

    // Correctness bit: the label is the argmax with ties to the lowest index.
    std::uint32_t build_argmax(std::uint32_t s, const std::vector<std::uint32_t>& logits) {
        const int classes = static_cast<int>(shape_.dims.back());
        std::int64_t label = with_values() ? label_value(s) : 0;

        // one-hot selector pinned to the label variable
        std::vector<std::uint32_t> sel(static_cast<std::size_t>(classes));
        LinComb sel_sum, sel_weighted;
        for (int j = 0; j < classes; ++j) {
            Fr v = with_values() && label == j ? Fr::one() : Fr::zero();
            sel[static_cast<std::size_t>(j)] = alloc(v);
            LinComb minus_one = lc_var(sel[static_cast<std::size_t>(j)]);
            lc_add_term(minus_one, 0, -Fr::one());
            constrain(lc_var(sel[static_cast<std::size_t>(j)]), minus_one, {});
            lc_add_term(sel_sum, sel[static_cast<std::size_t>(j)], Fr::one());
            lc_add_term(sel_weighted, sel[static_cast<std::size_t>(j)], Fr::from_u64(j));
        }
        lc_add_term(sel_sum, 0, -Fr::one());
        constrain(sel_sum, lc_var(0), {});
        lc_extend(sel_weighted, lc_var(labels_[s]), -Fr::one());
        constrain(sel_weighted, lc_var(0), {});

        // logit at the labelled class
        LinComb logit_sel;
        for (int j = 0; j < classes; ++j) {
            std::uint32_t pj =
                mul(lc_var(sel[static_cast<std::size_t>(j)]), lc_var(logits[static_cast<std::size_t>(j)]));
            lc_add_term(logit_sel, pj, Fr::one());
        }

        std::uint32_t correct = 0;
        bool first = true;
        for (int j = 0; j < classes; ++j) {
            // lt_j = [label > j], linear in the selector bits
            LinComb ltj;
            for (int t = j + 1; t < classes; ++t)
                lc_add_term(ltj, sel[static_cast<std::size_t>(t)], Fr::one());
            LinComb d = logit_sel;
            lc_extend(d, lc_var(logits[static_cast<std::size_t>(j)]), -Fr::one());
            lc_extend(d, ltj, -Fr::one());
            lc_add_term(d, 0, pow2(cfg_.compare_bits - 1));
            auto bits = decompose(d, cfg_.compare_bits);
            std::uint32_t ge = bits[cfg_.compare_bits - 1];
            if (first) {
                correct = ge;
                first = false;
            } else {
                correct = mul(lc_var(correct), lc_var(ge));
            }
        }
        return correct;
    }

    const ModelShape& shape_;
    const CircuitConfig& cfg_;
    const WitnessData* wd_;

    R1cs cs_;
    std::vector<Fr> values_;
    std::uint32_t next_var_ = 1;

    Fr pub_hq_val_, pub_dd_val_, pub_td_val_, pub_acc_val_;
    std::uint32_t pub_hq_ = 0, pub_dd_ = 0, pub_td_ = 0, pub_acc_ = 0;

    std::vector<std::uint32_t> z_w_, z_y_, m_, mp_;
    std::vector<std::vector<std::uint32_t>> bias_;
    std::vector<std::vector<std::uint32_t>> weights_;
    std::vector<std::vector<std::uint32_t>> pixels_;
    std::vector<std::uint32_t> labels_;
};

}  // namespace

R1cs synthesize_circuit(const ModelShape& shape, const CircuitConfig& cfg) {
    validate_shape(shape, cfg);
    Builder b(shape, cfg, nullptr);
    b.build();
    return b.take_cs();
}

std::vector<Fr> assign_witness(const ModelShape& shape, const CircuitConfig& cfg,
                               const Statement& statement, const Witness& witness) {
    validate_shape(shape, cfg);
    // assemble integer views
    WitnessData wd;
    wd.statement = &statement;
    wd.witness = &witness;
    const auto dims = witness.model.fc_dims();
    if (ModelShape{dims} != shape)
        throw UnsatisfiableWitness("witness model shape mismatch");
    if (witness.traces.size() != cfg.n_samples)
        throw UnsatisfiableWitness("witness sample count mismatch");

    std::size_t fc_index = 0;
    quant::QuantParams in = witness.model.input_params;
    for (const auto& layer : witness.model.layers) {
        if (layer.kind != LayerKind::FullyConnected) {
            in = layer.out_params;
            continue;
        }
        LayerValues lv;
        lv.z_w = layer.weights.params.zero_point;
        lv.z_y = layer.out_params.zero_point;
        quant::FixedMultiplier mult = quant::layer_multiplier(witness.model, fc_index, cfg.shift);
        lv.m = mult.m;
        __int128 zy2k = static_cast<__int128>(layer.out_params.zero_point) << cfg.shift;
        lv.mprime = static_cast<std::int64_t>((zy2k + mult.m - 1) / mult.m);
        lv.weights = layer.weights.q;
        lv.bias = layer.bias;
        wd.layers.push_back(std::move(lv));
        in = layer.out_params;
        ++fc_index;
    }
    if (witness.labels.size() != cfg.n_samples)
        throw UnsatisfiableWitness("witness labels missing");
    wd.labels.assign(witness.labels.begin(), witness.labels.end());

    Builder b(shape, cfg, &wd);
    b.build();
    return b.take_assignment();
}

SynthesizedSystem synthesize(const Statement& statement, const Witness& witness) {
    ModelShape shape = shape_of(witness.model);
    CircuitConfig cfg;
    cfg.n_samples = statement.n_samples;
    SynthesizedSystem out;
    out.cs = synthesize_circuit(shape, cfg);
    out.assignment = assign_witness(shape, cfg, statement, witness);
    return out;
}

}  // namespace zkpot::zk
