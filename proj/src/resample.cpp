#include "diffsr/resample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace diffsr {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

long long fold_index(long long i, long long n, EdgeMode mode) {
    switch (mode) {
        case EdgeMode::zero:
            return (i < 0 || i >= n) ? -1 : i;
        case EdgeMode::circular: {
            long long j = i % n;
            return j < 0 ? j + n : j;
        }
        case EdgeMode::reflect:
        default: {
            if (n == 1) return 0;
            const long long period = 2 * (n - 1);
            long long j = std::llabs(i) % period;
            if (j >= n) j = period - j;
            return j;
        }
    }
}

double normalized_sinc_times_cutoff(double omega_c, double tau) {
    // (omega_c/pi) * sin(omega_c tau)/(omega_c tau)
    const double x = omega_c * tau;
    if (std::abs(x) < 1e-12) return omega_c / kPi;
    return std::sin(x) / (kPi * tau);
}
}  // namespace

FilterSpec FilterSpec::sinc(int source_rate, int target_rate) {
    FilterSpec s;
    s.kind = FilterKind::sinc_kaiser;
    s.source_rate = source_rate;
    s.target_rate = target_rate;
    s.cutoff_hz = std::min(source_rate, target_rate) / 2.0;
    s.validate();
    return s;
}

FilterSpec FilterSpec::mask(int source_rate, int target_rate, StftConfig stft_cfg) {
    FilterSpec s;
    s.kind = FilterKind::stft_mask;
    s.source_rate = source_rate;
    s.target_rate = target_rate;
    s.cutoff_hz = std::min(source_rate, target_rate) / 2.0;
    s.stft = stft_cfg;
    s.validate();
    return s;
}

void FilterSpec::validate() const {
    if (source_rate <= 0 || target_rate <= 0)
        throw std::invalid_argument("FilterSpec: rates must be positive");
    if (cutoff_hz <= 0) throw std::invalid_argument("FilterSpec: cutoff must be positive");
    if (kind == FilterKind::stft_mask) {
        const int lo = std::min(source_rate, target_rate);
        const int hi = std::max(source_rate, target_rate);
        if (hi % lo != 0)
            throw std::invalid_argument("FilterSpec: stft_mask supports integer ratios only");
        if (!is_power_of_two(stft.frame_length))
            throw std::invalid_argument("FilterSpec: stft frame must be a power of two");
    }
    if (zero_crossings <= 0) throw std::invalid_argument("FilterSpec: zero_crossings must be positive");
}

std::string FilterSpec::kind_name() const {
    return kind == FilterKind::sinc_kaiser ? "sinc_kaiser" : "stft_mask";
}

SincResampler::SincResampler(int src_rate, int dst_rate, const FilterSpec& spec)
    : src_(src_rate), dst_(dst_rate) {
    if (src_ <= 0 || dst_ <= 0) throw std::invalid_argument("SincResampler: bad rates");
    const long long g = std::gcd(static_cast<long long>(src_), static_cast<long long>(dst_));
    num_ = src_ / g;
    den_ = dst_ / g;

    const double cutoff_hz = spec.rolloff * std::min(src_, dst_) / 2.0;
    const double omega_c = 2.0 * kPi * cutoff_hz / src_;  // rad per input sample
    const double hw = spec.zero_crossings * kPi / omega_c;
    half_width_ = static_cast<int>(std::ceil(hw));

    const double i0_beta = bessel_i0(spec.kaiser_beta);
    branches_.resize(static_cast<std::size_t>(den_));
    for (long long j = 0; j < den_; ++j) {
        const double frac = static_cast<double>((j * num_) % den_) / static_cast<double>(den_);
        const int lo = static_cast<int>(std::floor(frac - hw)) + 1;
        const int hi = static_cast<int>(std::ceil(frac + hw)) - 1;
        Branch b;
        b.lo = lo;
        b.taps.resize(hi - lo + 1);
        for (int nn = lo; nn <= hi; ++nn) {
            const double tau = nn - frac;
            const double r = tau / hw;
            const double w = bessel_i0(spec.kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
            b.taps[nn - lo] = normalized_sinc_times_cutoff(omega_c, tau) * w;
        }
        branches_[static_cast<std::size_t>(j)] = std::move(b);
    }
}

std::size_t SincResampler::output_length(std::size_t n) const {
    return static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * dst_ / static_cast<double>(src_)));
}

std::vector<double> SincResampler::apply(std::span<const double> x, EdgeMode edge) const {
    const long long n = static_cast<long long>(x.size());
    if (n == 0) return {};
    const std::size_t n_out = output_length(x.size());
    const long long pad = half_width_ + 2;
    std::vector<double> xp(static_cast<std::size_t>(n + 2 * pad), 0.0);
    for (long long i = -pad; i < n + pad; ++i) {
        const long long j = fold_index(i, n, edge);
        xp[static_cast<std::size_t>(i + pad)] = j < 0 ? 0.0 : x[static_cast<std::size_t>(j)];
    }
    std::vector<double> out(n_out);
    for (std::size_t m = 0; m < n_out; ++m) {
        const long long mm = static_cast<long long>(m);
        const long long ip = (mm * num_) / den_;
        const Branch& b = branches_[static_cast<std::size_t>(mm % den_)];
        const double* src = xp.data() + ip + b.lo + pad;
        double acc = 0.0;
        for (std::size_t t = 0; t < b.taps.size(); ++t) acc += b.taps[t] * src[t];
        out[m] = acc;
    }
    return out;
}

LowpassOperator::LowpassOperator(const FilterSpec& spec) : spec_(spec) {
    spec_.validate();
    if (spec_.kind == FilterKind::sinc_kaiser) {
        down_.emplace(spec_.source_rate, spec_.target_rate, spec_);
        up_.emplace(spec_.target_rate, spec_.source_rate, spec_);
    } else {
        mask_plan_.emplace(spec_.stft.frame_length);
        mask_window_ = make_window(spec_.stft.window, spec_.stft.frame_length,
                                   spec_.stft.kaiser_beta);
    }
}

int LowpassOperator::first_masked_bin() const {
    // smallest k with center frequency k*rate/frame >= cutoff
    const double exact = spec_.cutoff_hz * spec_.stft.frame_length / spec_.source_rate;
    int k = static_cast<int>(std::ceil(exact - 1e-9));
    return std::clamp(k, 0, spec_.stft.frame_length / 2 + 1);
}

std::vector<Spectrum> LowpassOperator::masked_frames(std::span<const double> x) const {
    if (spec_.kind != FilterKind::stft_mask)
        throw std::invalid_argument("masked_frames: stft_mask kind only");
    const int frame = spec_.stft.frame_length;
    const int hop = spec_.stft.hop;
    const long long n = static_cast<long long>(x.size());
    // Overlapped configs are center-padded; hop == frame tiles the signal
    // exactly so that a frame-sized signal is one untouched block.
    const long long lead = (hop == frame) ? 0 : frame / 2;
    const long long covered = n + lead;
    const long long nf = covered <= frame ? 1 : (covered - frame + hop - 1) / hop + 1;

    const auto& win = mask_window_;
    const RfftPlan& plan = *mask_plan_;
    const int k0 = first_masked_bin();
    std::vector<Spectrum> frames;
    frames.reserve(static_cast<std::size_t>(nf));
    std::vector<double> buf(frame);
    for (long long m = 0; m < nf; ++m) {
        const long long start = m * hop - lead;
        for (int i = 0; i < frame; ++i) {
            const long long j = start + i;
            buf[i] = (j >= 0 && j < n) ? x[static_cast<std::size_t>(j)] * win[i] : 0.0;
        }
        Spectrum s = plan.forward(buf);
        for (int k = k0; k < s.bin_count(); ++k) s.bins[k] = 0.0;
        frames.push_back(std::move(s));
    }
    return frames;
}

std::vector<double> LowpassOperator::apply_mask(std::span<const double> x) const {
    const int frame = spec_.stft.frame_length;
    const int hop = spec_.stft.hop;
    const long long n = static_cast<long long>(x.size());
    const long long lead = (hop == frame) ? 0 : frame / 2;
    const auto frames = masked_frames(x);
    const auto& win = mask_window_;
    const RfftPlan& plan = *mask_plan_;

    const long long padded = static_cast<long long>(frames.size() - 1) * hop + frame;
    std::vector<double> acc(static_cast<std::size_t>(padded), 0.0);
    std::vector<double> wsum(static_cast<std::size_t>(padded), 0.0);
    for (std::size_t m = 0; m < frames.size(); ++m) {
        const auto rec = plan.inverse(frames[m]);
        const std::size_t start = m * static_cast<std::size_t>(hop);
        for (int i = 0; i < frame; ++i) {
            acc[start + i] += rec[i] * win[i];
            wsum[start + i] += win[i] * win[i];
        }
    }
    std::vector<double> out(x.size(), 0.0);
    for (long long i = 0; i < n; ++i) {
        const long long j = i + lead;
        if (j < padded && wsum[static_cast<std::size_t>(j)] > 1e-12)
            out[static_cast<std::size_t>(i)] =
                acc[static_cast<std::size_t>(j)] / wsum[static_cast<std::size_t>(j)];
    }
    return out;
}

Waveform LowpassOperator::downsample(const Waveform& x) const {
    x.validate();
    if (x.sample_rate != spec_.source_rate)
        throw std::invalid_argument("downsample: input rate does not match spec source rate");
    if (spec_.target_rate > spec_.source_rate)
        throw std::invalid_argument("downsample: target rate above source rate (that is upsampling)");
    if (spec_.kind == FilterKind::sinc_kaiser) {
        return Waveform(down_->apply(x.samples, spec_.edge_mode), spec_.target_rate);
    }
    const auto filtered = apply_mask(x.samples);
    const long long r = spec_.source_rate / spec_.target_rate;
    const std::size_t n_out = static_cast<std::size_t>(
        std::llround(static_cast<double>(x.samples.size()) * spec_.target_rate / spec_.source_rate));
    std::vector<double> out(n_out);
    for (std::size_t i = 0; i < n_out; ++i) out[i] = filtered[i * r];
    return Waveform(std::move(out), spec_.target_rate);
}

Waveform LowpassOperator::upsample(const Waveform& y) const {
    y.validate();
    if (y.sample_rate != spec_.target_rate)
        throw std::invalid_argument("upsample: input rate does not match spec target rate");
    if (y.sample_rate > spec_.source_rate)
        throw std::invalid_argument("upsample: target rate below input rate");
    if (spec_.kind == FilterKind::sinc_kaiser) {
        return Waveform(up_->apply(y.samples, spec_.edge_mode), spec_.source_rate);
    }
    // zero-stuff, remove images with the mask at rate l, compensate gain
    const long long r = spec_.source_rate / spec_.target_rate;
    const std::size_t n_out = static_cast<std::size_t>(
        std::llround(static_cast<double>(y.samples.size()) * spec_.source_rate / spec_.target_rate));
    std::vector<double> stuffed(n_out, 0.0);
    for (std::size_t i = 0; i < y.samples.size(); ++i) {
        const std::size_t j = i * static_cast<std::size_t>(r);
        if (j < n_out) stuffed[j] = y.samples[i] * static_cast<double>(r);
    }
    return Waveform(apply_mask(stuffed), spec_.source_rate);
}

std::vector<double> LowpassOperator::compose(std::span<const double> x) const {
    Waveform w(std::vector<double>(x.begin(), x.end()), spec_.source_rate);
    return compose(w).samples;
}

Waveform LowpassOperator::compose(const Waveform& x) const {
    Waveform up_out = upsample(downsample(x));
    // length contract: same as input (rounding on both legs can differ by one)
    up_out.samples.resize(x.samples.size(), 0.0);
    return up_out;
}

Waveform downsample(const Waveform& x, const FilterSpec& spec) {
    return LowpassOperator(spec).downsample(x);
}

Waveform upsample(const Waveform& y, int target_rate, const FilterSpec& spec) {
    if (target_rate != spec.source_rate)
        throw std::invalid_argument("upsample: target_rate must equal the spec source rate");
    return LowpassOperator(spec).upsample(y);
}

Waveform lowpass_compose(const Waveform& x, const FilterSpec& spec) {
    return LowpassOperator(spec).compose(x);
}

std::vector<double> frequency_response(const FilterSpec& spec, int n_points) {
    if (n_points < 2) throw std::invalid_argument("frequency_response: n_points >= 2");
    std::vector<double> out(n_points);
    const double nyquist = spec.source_rate / 2.0;
    if (spec.kind == FilterKind::stft_mask) {
        for (int i = 0; i < n_points; ++i) {
            const double f = nyquist * i / (n_points - 1);
            out[i] = f < spec.cutoff_hz ? 1.0 : 0.0;
        }
        return out;
    }
    // measure the composite impulse response on a long zero-padded buffer
    LowpassOperator op(spec);
    FilterSpec probe = spec;
    probe.edge_mode = EdgeMode::zero;
    LowpassOperator zero_op(probe);
    const double hw_in = spec.zero_crossings * spec.source_rate /
                         (spec.rolloff * std::min(spec.source_rate, spec.target_rate));
    int len = 1;
    while (len < 8 * static_cast<int>(hw_in) + 64) len <<= 1;
    std::vector<double> imp(static_cast<std::size_t>(len), 0.0);
    imp[static_cast<std::size_t>(len / 2)] = 1.0;
    const auto h = zero_op.compose(imp);
    const auto H = rfft(h);
    const int nb = H.bin_count();
    for (int i = 0; i < n_points; ++i) {
        const double f = nyquist * i / (n_points - 1);
        const double pos = f / nyquist * (nb - 1);
        const int k = std::min(static_cast<int>(pos), nb - 2);
        const double fr = pos - k;
        const double mag = (1.0 - fr) * std::abs(H.bins[k]) + fr * std::abs(H.bins[k + 1]);
        out[i] = mag * std::sqrt(static_cast<double>(len));  // undo orthonormal scale
    }
    return out;
}

Waveform spline_upsample(const Waveform& y, int target_rate) {
    y.validate();
    if (target_rate < y.sample_rate)
        throw std::invalid_argument("spline_upsample: target rate below input rate");
    const std::size_t n = y.samples.size();
    const std::size_t n_out = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * target_rate / y.sample_rate));
    if (n == 1) return Waveform(std::vector<double>(n_out, y.samples[0]), target_rate);

    // natural cubic spline second derivatives (tridiagonal, unit spacing)
    std::vector<double> m(n, 0.0), diag(n, 0.0), rhs(n, 0.0);
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i)
        rhs[i] = 3.0 * (y.samples[i + 1] - 2.0 * y.samples[i] + y.samples[i - 1]);
    // Thomas algorithm on the interior
    if (n > 2) {
        std::vector<double> cp(n, 0.0), dp(n, 0.0);
        double b = 4.0;
        cp[1] = 1.0 / b;
        dp[1] = rhs[1] / b;
        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double mlt = 1.0 / (4.0 - cp[i - 1]);
            cp[i] = mlt;
            dp[i] = (rhs[i] - dp[i - 1]) * mlt;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            c[i] = dp[i] - cp[i] * c[i + 1];
            if (i == 1) break;
        }
    }
    const double step = static_cast<double>(y.sample_rate) / target_rate;
    std::vector<double> out(n_out);
    for (std::size_t k = 0; k < n_out; ++k) {
        const double pos = k * step;
        std::size_t i = std::min(static_cast<std::size_t>(pos), n - 2);
        const double t = pos - i;
        const double a0 = y.samples[i];
        const double a1 = y.samples[i + 1] - y.samples[i] - (2.0 * c[i] + c[i + 1]) / 3.0;
        const double a2 = c[i];
        const double a3 = (c[i + 1] - c[i]) / 3.0;
        out[k] = a0 + t * (a1 + t * (a2 + t * a3));
    }
    return Waveform(std::move(out), target_rate);
}

}  // namespace diffsr
