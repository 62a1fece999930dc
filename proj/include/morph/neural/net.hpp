#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "morph/features.hpp"
#include "morph/rng.hpp"
#include "morph/types.hpp"

namespace morph::neural {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// Mask-then-classify network: four convolutional mask modules produce a
// sigmoid gate multiplied into the input spectrogram; a strided convolution,
// a bidirectional gated recurrent layer and a dense head classify the result.
// Seven modules in total; parameter budget enforced at construction.
struct ModelSpec {
    int in_ch = 2;
    int f_bins = 64;
    int t_frames = 129;
    std::array<int, 3> mask_channels{8, 16, 16};
    int cls_channels = 32;
    int cls_stride = 2;
    int freq_pool = 2;   // frequency grouping between conv features and the GRU
    int gru_hidden = 128;
    int n_classes = 4;

    static constexpr long kParamBudget = 2'300'000;

    int conv_oh() const { return (f_bins - 1) / cls_stride + 1; }
    int conv_ow() const { return (t_frames - 1) / cls_stride + 1; }
    int gru_input() const { return cls_channels * (conv_oh() / freq_pool); }
    void validate() const;
    long param_count() const;
};

template <class T>
struct ParamRef {
    std::string name;
    Mat<T>* w;
    Mat<T>* g;
};

namespace detail {

template <class T>
void fill_uniform(Mat<T>& m, Rng& rng, double bound) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            m(i, j) = static_cast<T>(rng.uniform(-bound, bound));
}

} // namespace detail

// 3x3 convolution, zero padding 1. Activations are (channels, h*w) matrices.
template <class T>
struct Conv2d {
    int in_ch = 0, out_ch = 0, stride = 1;
    int ih = 0, iw = 0, oh = 0, ow = 0;
    Mat<T> w, b, gw, gb;
    Mat<T> col;  // cached im2col for backward

    void init(int in, int out, int stride_, Rng& rng) {
        in_ch = in;
        out_ch = out;
        stride = stride_;
        w.resize(out, in * 9);
        b = Mat<T>::Zero(out, 1);
        detail::fill_uniform(w, rng, std::sqrt(6.0 / (in * 9)));
        gw = Mat<T>::Zero(out, in * 9);
        gb = Mat<T>::Zero(out, 1);
    }

    void im2col(const Mat<T>& x) {
        col.resize(in_ch * 9, oh * ow);
        for (int c = 0; c < in_ch; ++c) {
            for (int ky = 0; ky < 3; ++ky) {
                for (int kx = 0; kx < 3; ++kx) {
                    const int row = (c * 3 + ky) * 3 + kx;
                    for (int oy = 0; oy < oh; ++oy) {
                        const int iy = oy * stride + ky - 1;
                        for (int ox = 0; ox < ow; ++ox) {
                            const int ix = ox * stride + kx - 1;
                            T v = 0;
                            if (iy >= 0 && iy < ih && ix >= 0 && ix < iw)
                                v = x(c, iy * iw + ix);
                            col(row, oy * ow + ox) = v;
                        }
                    }
                }
            }
        }
    }

    Mat<T> forward(const Mat<T>& x, int h, int wdt) {
        ih = h;
        iw = wdt;
        oh = (h - 1) / stride + 1;
        ow = (wdt - 1) / stride + 1;
        im2col(x);
        Mat<T> y = w * col;
        y.colwise() += b.col(0);
        return y;
    }

    Mat<T> backward(const Mat<T>& dy) {
        gw.noalias() += dy * col.transpose();
        gb.col(0) += dy.rowwise().sum();
        Mat<T> dcol = w.transpose() * dy;
        Mat<T> dx = Mat<T>::Zero(in_ch, ih * iw);
        for (int c = 0; c < in_ch; ++c) {
            for (int ky = 0; ky < 3; ++ky) {
                for (int kx = 0; kx < 3; ++kx) {
                    const int row = (c * 3 + ky) * 3 + kx;
                    for (int oy = 0; oy < oh; ++oy) {
                        const int iy = oy * stride + ky - 1;
                        if (iy < 0 || iy >= ih) continue;
                        for (int ox = 0; ox < ow; ++ox) {
                            const int ix = ox * stride + kx - 1;
                            if (ix < 0 || ix >= iw) continue;
                            dx(c, iy * iw + ix) += dcol(row, oy * ow + ox);
                        }
                    }
                }
            }
        }
        return dx;
    }
};

// Per-sample, per-channel normalization over the spatial extent (affine).
// Keeps samples independent so batch gradients stay additive.
template <class T>
struct InstanceNorm {
    Mat<T> gamma, beta, gg, gb;
    Mat<T> xhat;
    Mat<T> inv_std;  // (C,1)
    static constexpr double kEps = 1e-5;

    void init(int ch) {
        gamma = Mat<T>::Ones(ch, 1);
        beta = Mat<T>::Zero(ch, 1);
        gg = Mat<T>::Zero(ch, 1);
        gb = Mat<T>::Zero(ch, 1);
    }

    Mat<T> forward(const Mat<T>& x) {
        const Eigen::Index c = x.rows(), n = x.cols();
        xhat.resize(c, n);
        inv_std.resize(c, 1);
        Mat<T> y(c, n);
        for (Eigen::Index i = 0; i < c; ++i) {
            const T mean = x.row(i).mean();
            const T var = (x.row(i).array() - mean).square().mean();
            const T is = static_cast<T>(1.0 / std::sqrt(static_cast<double>(var) + kEps));
            inv_std(i, 0) = is;
            xhat.row(i) = (x.row(i).array() - mean) * is;
            y.row(i) = xhat.row(i).array() * gamma(i, 0) + beta(i, 0);
        }
        return y;
    }

    Mat<T> backward(const Mat<T>& dy) {
        const Eigen::Index c = dy.rows(), n = dy.cols();
        Mat<T> dx(c, n);
        for (Eigen::Index i = 0; i < c; ++i) {
            gg(i, 0) += (dy.row(i).array() * xhat.row(i).array()).sum();
            gb(i, 0) += dy.row(i).sum();
            const T gs = gamma(i, 0) * inv_std(i, 0);
            const T mean_dy = dy.row(i).mean();
            const T mean_dyxh = (dy.row(i).array() * xhat.row(i).array()).mean();
            dx.row(i) = gs * (dy.row(i).array() - mean_dy - xhat.row(i).array() * mean_dyxh);
        }
        (void)n;
        return dx;
    }
};

template <class T>
struct Relu {
    Mat<T> mask;
    Mat<T> forward(const Mat<T>& x) {
        mask = (x.array() > T(0)).template cast<T>();
        return x.cwiseProduct(mask);
    }
    Mat<T> backward(const Mat<T>& dy) { return dy.cwiseProduct(mask); }
};

template <class T>
struct Sigmoid {
    Mat<T> y;
    Mat<T> forward(const Mat<T>& x) {
        y = x.unaryExpr([](T v) { return static_cast<T>(1.0 / (1.0 + std::exp(-static_cast<double>(v)))); });
        return y;
    }
    Mat<T> backward(const Mat<T>& dy) {
        return dy.array() * y.array() * (T(1) - y.array());
    }
};

// Single-direction gated recurrent layer, gates ordered [r, z, n].
template <class T>
struct Gru {
    int in = 0, hid = 0;
    Mat<T> wx, wh, bx, bh, gwx, gwh, gbx, gbh;
    // caches
    Mat<T> xs, hs;          // inputs (in,T); hidden (hid, T+1), col 0 = h0 = 0
    Mat<T> r_, z_, n_, un_; // gate values per step (hid, T)

    void init(int input, int hidden, Rng& rng) {
        in = input;
        hid = hidden;
        const double bound = std::sqrt(1.0 / hidden);
        wx.resize(3 * hidden, input);
        wh.resize(3 * hidden, hidden);
        bx = Mat<T>::Zero(3 * hidden, 1);
        bh = Mat<T>::Zero(3 * hidden, 1);
        detail::fill_uniform(wx, rng, bound);
        detail::fill_uniform(wh, rng, bound);
        detail::fill_uniform(bx, rng, bound);
        detail::fill_uniform(bh, rng, bound);
        gwx = Mat<T>::Zero(3 * hidden, input);
        gwh = Mat<T>::Zero(3 * hidden, hidden);
        gbx = Mat<T>::Zero(3 * hidden, 1);
        gbh = Mat<T>::Zero(3 * hidden, 1);
    }

    static T sigm(T v) { return static_cast<T>(1.0 / (1.0 + std::exp(-static_cast<double>(v)))); }

    // x: (in, T) -> hidden states (hid, T)
    Mat<T> forward(const Mat<T>& x) {
        const Eigen::Index steps = x.cols();
        xs = x;
        hs = Mat<T>::Zero(hid, steps + 1);
        r_.resize(hid, steps);
        z_.resize(hid, steps);
        n_.resize(hid, steps);
        un_.resize(hid, steps);

        Mat<T> ax = wx * x;          // (3H, T), batched input projection
        ax.colwise() += bx.col(0);
        for (Eigen::Index t = 0; t < steps; ++t) {
            Mat<T> u = wh * hs.col(t);
            u.col(0) += bh.col(0);
            for (int i = 0; i < hid; ++i) {
                const T r = sigm(ax(i, t) + u(i, 0));
                const T z = sigm(ax(hid + i, t) + u(hid + i, 0));
                const T un = u(2 * hid + i, 0);
                const T n = static_cast<T>(std::tanh(static_cast<double>(ax(2 * hid + i, t) + r * un)));
                r_(i, t) = r;
                z_(i, t) = z;
                n_(i, t) = n;
                un_(i, t) = un;
                hs(i, t + 1) = (T(1) - z) * n + z * hs(i, t);
            }
        }
        return hs.rightCols(steps);
    }

    // dh: (hid, T) gradient w.r.t. every output state
    Mat<T> backward(const Mat<T>& dh) {
        const Eigen::Index steps = dh.cols();
        Mat<T> da(3 * hid, steps);  // grads of wx*x + bx rows
        Eigen::Matrix<T, Eigen::Dynamic, 1> carry = Eigen::Matrix<T, Eigen::Dynamic, 1>::Zero(hid);
        Eigen::Matrix<T, Eigen::Dynamic, 1> du(3 * hid);
        for (Eigen::Index t = steps - 1; t >= 0; --t) {
            for (int i = 0; i < hid; ++i) {
                const T d = dh(i, t) + carry(i);
                const T r = r_(i, t), z = z_(i, t), n = n_(i, t), un = un_(i, t);
                const T hprev = hs(i, t);
                const T dpz = d * (hprev - n) * z * (T(1) - z);
                const T dpn = d * (T(1) - z) * (T(1) - n * n);
                const T dpr = dpn * un * r * (T(1) - r);
                da(i, t) = dpr;
                da(hid + i, t) = dpz;
                da(2 * hid + i, t) = dpn;
                du(i) = dpr;
                du(hid + i) = dpz;
                du(2 * hid + i) = dpn * r;
                carry(i) = d * z;
            }
            gwh.noalias() += du * hs.col(t).transpose();
            gbh.col(0) += du;
            carry.noalias() += wh.transpose() * du;
        }
        gwx.noalias() += da * xs.transpose();
        gbx.col(0) += da.rowwise().sum();
        return wx.transpose() * da;
    }
};

struct TrialLogits {
    std::array<float, 8> v{};
};

template <class T>
struct Net {
    ModelSpec spec;
    Conv2d<T> mc1, mc2, mc3, mc4;
    InstanceNorm<T> in1, in2, in3;
    Relu<T> re1, re2, re3;
    Sigmoid<T> msig;
    Conv2d<T> cc;
    InstanceNorm<T> cin;
    Relu<T> crelu;
    Gru<T> gru_fwd, gru_bwd;
    Mat<T> fcw, fcb, gfcw, gfcb;

    // forward caches
    Mat<T> x_, mask_, xm_, seq_, hcat_;
    Mat<T> conv_act_;

    explicit Net(const ModelSpec& s, uint64_t seed = 1) : spec(s) {
        spec.validate();
        Rng rng(Rng::mix({seed, 0x6e657477ull}));
        mc1.init(spec.in_ch, spec.mask_channels[0], 1, rng);
        in1.init(spec.mask_channels[0]);
        mc2.init(spec.mask_channels[0], spec.mask_channels[1], 1, rng);
        in2.init(spec.mask_channels[1]);
        mc3.init(spec.mask_channels[1], spec.mask_channels[2], 1, rng);
        in3.init(spec.mask_channels[2]);
        mc4.init(spec.mask_channels[2], spec.in_ch, 1, rng);
        mc4.b.setConstant(T(2));  // start with an open mask
        cc.init(spec.in_ch, spec.cls_channels, spec.cls_stride, rng);
        cin.init(spec.cls_channels);
        gru_fwd.init(spec.gru_input(), spec.gru_hidden, rng);
        gru_bwd.init(spec.gru_input(), spec.gru_hidden, rng);
        fcw.resize(spec.n_classes, 2 * spec.gru_hidden);
        detail::fill_uniform(fcw, rng, std::sqrt(1.0 / (2 * spec.gru_hidden)));
        fcb = Mat<T>::Zero(spec.n_classes, 1);
        gfcw = Mat<T>::Zero(spec.n_classes, 2 * spec.gru_hidden);
        gfcb = Mat<T>::Zero(spec.n_classes, 1);

        if (param_count() > ModelSpec::kParamBudget)
            throw ConfigError("model exceeds the parameter budget");
    }

    std::vector<ParamRef<T>> params() {
        return {
            {"mask.conv1.w", &mc1.w, &mc1.gw}, {"mask.conv1.b", &mc1.b, &mc1.gb},
            {"mask.in1.gamma", &in1.gamma, &in1.gg}, {"mask.in1.beta", &in1.beta, &in1.gb},
            {"mask.conv2.w", &mc2.w, &mc2.gw}, {"mask.conv2.b", &mc2.b, &mc2.gb},
            {"mask.in2.gamma", &in2.gamma, &in2.gg}, {"mask.in2.beta", &in2.beta, &in2.gb},
            {"mask.conv3.w", &mc3.w, &mc3.gw}, {"mask.conv3.b", &mc3.b, &mc3.gb},
            {"mask.in3.gamma", &in3.gamma, &in3.gg}, {"mask.in3.beta", &in3.beta, &in3.gb},
            {"mask.conv4.w", &mc4.w, &mc4.gw}, {"mask.conv4.b", &mc4.b, &mc4.gb},
            {"cls.conv.w", &cc.w, &cc.gw}, {"cls.conv.b", &cc.b, &cc.gb},
            {"cls.in.gamma", &cin.gamma, &cin.gg}, {"cls.in.beta", &cin.beta, &cin.gb},
            {"gru.fwd.wx", &gru_fwd.wx, &gru_fwd.gwx}, {"gru.fwd.wh", &gru_fwd.wh, &gru_fwd.gwh},
            {"gru.fwd.bx", &gru_fwd.bx, &gru_fwd.gbx}, {"gru.fwd.bh", &gru_fwd.bh, &gru_fwd.gbh},
            {"gru.bwd.wx", &gru_bwd.wx, &gru_bwd.gwx}, {"gru.bwd.wh", &gru_bwd.wh, &gru_bwd.gwh},
            {"gru.bwd.bx", &gru_bwd.bx, &gru_bwd.gbx}, {"gru.bwd.bh", &gru_bwd.bh, &gru_bwd.gbh},
            {"fc.w", &fcw, &gfcw}, {"fc.b", &fcb, &gfcb},
        };
    }

    long param_count() {
        long total = 0;
        for (const auto& p : params()) total += static_cast<long>(p.w->size());
        return total;
    }

    void zero_grads() {
        for (auto& p : params()) p.g->setZero();
    }

    // input: (in_ch, F*T) -> logits (n_classes, 1)
    Mat<T> forward(const Mat<T>& x) {
        if (x.rows() != spec.in_ch ||
            x.cols() != static_cast<Eigen::Index>(spec.f_bins) * spec.t_frames)
            throw ShapeError("net: input shape mismatch");
        x_ = x;
        const int F = spec.f_bins, Tt = spec.t_frames;
        Mat<T> h = re1.forward(in1.forward(mc1.forward(x, F, Tt)));
        h = re2.forward(in2.forward(mc2.forward(h, F, Tt)));
        h = re3.forward(in3.forward(mc3.forward(h, F, Tt)));
        mask_ = msig.forward(mc4.forward(h, F, Tt));
        xm_ = x.cwiseProduct(mask_);
        conv_act_ = crelu.forward(cin.forward(cc.forward(xm_, F, Tt)));

        // regroup (ch, oh*ow) into a time-major sequence with frequency pooling
        const int oh = spec.conv_oh(), ow = spec.conv_ow();
        const int nf = oh / spec.freq_pool;
        seq_.resize(spec.gru_input(), ow);
        const T inv = static_cast<T>(1.0 / spec.freq_pool);
        for (int c = 0; c < spec.cls_channels; ++c) {
            for (int fp = 0; fp < nf; ++fp) {
                for (int t = 0; t < ow; ++t) {
                    T acc = 0;
                    for (int j = 0; j < spec.freq_pool; ++j)
                        acc += conv_act_(c, (fp * spec.freq_pool + j) * ow + t);
                    seq_(c * nf + fp, t) = acc * inv;
                }
            }
        }

        Mat<T> hf = gru_fwd.forward(seq_);
        Mat<T> rev = seq_.rowwise().reverse();
        Mat<T> hb = gru_bwd.forward(rev);

        hcat_.resize(2 * spec.gru_hidden, 1);
        hcat_.topRows(spec.gru_hidden) = hf.col(ow - 1);
        hcat_.bottomRows(spec.gru_hidden) = hb.col(ow - 1);

        Mat<T> logits = fcw * hcat_ + fcb;
        return logits;
    }

    void backward(const Mat<T>& dlogits) {
        gfcw.noalias() += dlogits * hcat_.transpose();
        gfcb += dlogits;
        Mat<T> dh = fcw.transpose() * dlogits;

        const int ow = spec.conv_ow();
        Mat<T> dhf = Mat<T>::Zero(spec.gru_hidden, ow);
        Mat<T> dhb = Mat<T>::Zero(spec.gru_hidden, ow);
        dhf.col(ow - 1) = dh.topRows(spec.gru_hidden);
        dhb.col(ow - 1) = dh.bottomRows(spec.gru_hidden);

        Mat<T> dseq = gru_fwd.backward(dhf);
        Mat<T> dseq_rev = gru_bwd.backward(dhb);
        dseq += dseq_rev.rowwise().reverse();

        // undo pooling/regrouping
        const int oh = spec.conv_oh();
        const int nf = oh / spec.freq_pool;
        Mat<T> dconv = Mat<T>::Zero(spec.cls_channels, oh * ow);
        const T inv = static_cast<T>(1.0 / spec.freq_pool);
        for (int c = 0; c < spec.cls_channels; ++c)
            for (int fp = 0; fp < nf; ++fp)
                for (int t = 0; t < ow; ++t) {
                    const T g = dseq(c * nf + fp, t) * inv;
                    for (int j = 0; j < spec.freq_pool; ++j)
                        dconv(c, (fp * spec.freq_pool + j) * ow + t) += g;
                }

        Mat<T> dxm = cc.backward(cin.backward(crelu.backward(dconv)));
        Mat<T> dmask = dxm.cwiseProduct(x_);
        Mat<T> dx_direct = dxm.cwiseProduct(mask_);
        (void)dx_direct;  // input needs no gradient

        Mat<T> dm = mc4.backward(msig.backward(dmask));
        dm = mc3.backward(in3.backward(re3.backward(dm)));
        dm = mc2.backward(in2.backward(re2.backward(dm)));
        mc1.backward(in1.backward(re1.backward(dm)));
    }
};

// softmax cross-entropy with sum reduction; returns loss, writes dlogits
template <class T>
double softmax_ce(const Mat<T>& logits, int label, Mat<T>& dlogits) {
    const Eigen::Index n = logits.rows();
    double mx = -1e30;
    for (Eigen::Index i = 0; i < n; ++i) mx = std::max(mx, static_cast<double>(logits(i, 0)));
    double denom = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) denom += std::exp(static_cast<double>(logits(i, 0)) - mx);
    const double logz = mx + std::log(denom);
    dlogits.resize(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double p = std::exp(static_cast<double>(logits(i, 0)) - logz);
        dlogits(i, 0) = static_cast<T>(p - (i == label ? 1.0 : 0.0));
    }
    return logz - static_cast<double>(logits(label, 0));
}

// argmax class for one spectrogram
int classify(Net<float>& net, const Spectrogram& sp);

// Copy a spectrogram into the (in_ch, F*T) activation layout.
template <class T>
Mat<T> to_input(const Spectrogram& sp) {
    Mat<T> x(2, static_cast<Eigen::Index>(sp.f_bins) * sp.t_frames);
    for (int ch = 0; ch < 2; ++ch)
        for (int f = 0; f < sp.f_bins; ++f)
            for (int t = 0; t < sp.t_frames; ++t)
                x(ch, static_cast<Eigen::Index>(f) * sp.t_frames + t) =
                    static_cast<T>(sp.at(ch, f, t));
    return x;
}

} // namespace morph::neural
