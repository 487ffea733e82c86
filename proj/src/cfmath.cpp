#include "harqsim/cfmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <vector>

namespace harqsim {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286060651209;

cplx ipow(cplx base, int e) {
    cplx r{1.0, 0.0};
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Bessel K_nu, complex argument, Re(z) > 0
// ---------------------------------------------------------------------------

// Power series about 0 for K_0 and K_1 (digamma form for integer order).
// Usable while the e^{|z|}-scale cancellation stays below ~1e-10, i.e. the
// |z| <= 2 band used here.
void bessel_k01_series(cplx z, cplx& k0, cplx& k1) {
    const cplx q = 0.25 * z * z;
    const cplx lg = std::log(0.5 * z) + kEulerGamma;  // ln(z/2) + gamma
    cplx i0{1.0, 0.0};        // sum q^k/(k!)^2
    cplx i1s{1.0, 0.0};       // sum q^k/(k!(k+1)!)
    cplx s0{0.0, 0.0};        // sum H_k q^k/(k!)^2
    cplx s1{1.0, 0.0};        // sum (H_k + H_{k+1}) q^k/(k!(k+1)!); k=0 term is 1
    cplx term0{1.0, 0.0}, term1{1.0, 0.0};
    double hk = 0.0, hk1 = 1.0;
    for (int k = 1; k <= 400; ++k) {
        term0 *= q / (static_cast<double>(k) * k);
        term1 *= q / (static_cast<double>(k) * (k + 1));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1);
        i0 += term0;
        i1s += term1;
        s0 += term0 * hk;
        s1 += term1 * (hk + hk1);
        if (std::abs(term0) * (hk + 2.0) < 1e-18 * (std::abs(i0) + std::abs(s0))) break;
    }
    const cplx i1 = 0.5 * z * i1s;
    k0 = -lg * i0 + s0;
    k1 = 1.0 / z + lg * i1 - 0.25 * z * s1;
}

// Large-argument expansion of e^z K_nu(z); the optimally truncated series
// carries an e^{-2 Re z} remainder, negligible in the |z| >= 20 band.
cplx bessel_k_asym_scaled(int nu, cplx z) {
    cplx s{1.0, 0.0}, a{1.0, 0.0};
    const double fournu2 = 4.0 * static_cast<double>(nu) * nu;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 60; ++k) {
        a *= (fournu2 - static_cast<double>(2 * k - 1) * (2 * k - 1)) /
             (8.0 * static_cast<double>(k)) / z;
        const double m = std::abs(a);
        if (m >= prev) break;
        s += a;
        if (m < 1e-17 * std::abs(s)) break;
        prev = m;
    }
    return std::sqrt(kPi / (2.0 * z)) * s;
}

// 15-point Gauss-Kronrod pair (QUADPACK dqk15 abscissae/weights).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
auto gk15(const F& f, double a, double b, double& err) {
    const double hl = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    using R = decltype(f(c));
    const R fc = f(c);
    R resk = kWgk[7] * fc;
    R resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double d = hl * kXgk[j];
        const R f1 = f(c - d), f2 = f(c + d);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    resk *= hl;
    resg *= hl;
    err = std::abs(resk - resg);
    return resk;
}

template <class F>
cplx adapt_cplx(const F& f, double a, double b, double tol, int depth) {
    double err;
    const cplx v = gk15(f, a, b, err);
    if (err <= tol || depth >= 26) return v;
    const double m = 0.5 * (a + b);
    return adapt_cplx(f, a, m, 0.5 * tol, depth + 1) + adapt_cplx(f, m, b, 0.5 * tol, depth + 1);
}

// cosh integral representation, exponentially scaled, for the band between
// the series and the asymptotic expansion.
cplx bessel_k_mid_scaled(int nu, cplx z) {
    const double rez = z.real();
    const double umax = std::acosh(1.0 + 50.0 / rez);
    const auto f = [&](double u) { return std::exp(-z * (std::cosh(u) - 1.0)) * std::cosh(nu * u); };
    const double scale = std::sqrt(kPi / (2.0 * std::abs(z))) + 1.0;
    return adapt_cplx(f, 0.0, umax, 1e-13 * scale, 0);
}

void bessel_k01_scaled(cplx z, cplx& k0, cplx& k1) {
    const double az = std::abs(z);
    if (az <= 2.0) {
        bessel_k01_series(z, k0, k1);
        const cplx e = std::exp(z);
        k0 *= e;
        k1 *= e;
    } else if (az < 20.0) {
        k0 = bessel_k_mid_scaled(0, z);
        k1 = bessel_k_mid_scaled(1, z);
    } else {
        k0 = bessel_k_asym_scaled(0, z);
        k1 = bessel_k_asym_scaled(1, z);
    }
}

void check_bessel_domain(int nu, cplx z) {
    if (nu < 0) throw std::domain_error("bessel_k: order must be >= 0");
    if (!(z.real() > 0.0)) throw std::domain_error("bessel_k: requires Re(z) > 0");
}

cplx recur_up(int nu, cplx z, cplx km1, cplx k) {
    // K_{v+1} = K_{v-1} + (2v/z) K_v, stable upward for K
    for (int v = 1; v < nu; ++v) {
        const cplx next = km1 + (2.0 * v / z) * k;
        km1 = k;
        k = next;
    }
    return nu == 0 ? km1 : k;
}

} // namespace

std::complex<double> bessel_k_scaled(int nu, std::complex<double> z) {
    check_bessel_domain(nu, z);
    cplx k0, k1;
    bessel_k01_scaled(z, k0, k1);
    const cplx r = recur_up(nu, z, k0, k1);
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        throw std::overflow_error("bessel_k_scaled: result not representable");
    return r;
}

std::complex<double> bessel_k(int nu, std::complex<double> z) {
    check_bessel_domain(nu, z);
    cplx k0, k1;
    if (std::abs(z) <= 2.0) {
        bessel_k01_series(z, k0, k1);
    } else {
        bessel_k01_scaled(z, k0, k1);
        const cplx e = std::exp(-z);  // underflows to 0 for Re z > ~745
        k0 *= e;
        k1 *= e;
    }
    const cplx r = recur_up(nu, z, k0, k1);
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        throw std::overflow_error("bessel_k: result not representable");
    return r;
}

// ---------------------------------------------------------------------------
// Characteristic functions
// ---------------------------------------------------------------------------

const char* to_string(ApproxKind k) { return k == ApproxKind::GA ? "ga" : "ipla"; }

void CfSpec::validate() const {
    if (!(desired_power > 0.0)) throw std::invalid_argument("cf: desired power must be > 0");
    if (!(scale > 0.0)) throw std::invalid_argument("cf: scale must be > 0");
    if (interferer_count < 1) throw std::invalid_argument("cf: interferer count must be >= 1");
    if (attempts < 0) throw std::invalid_argument("cf: attempts must be >= 0");
}

void QuadratureConfig::validate() const {
    if (!(t_min > 0.0) || !(t_min < t_max_cap))
        throw std::invalid_argument("quadrature: need 0 < t_min < t_max_cap");
    if (!(tail_epsilon > 0.0) || !(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("quadrature: tolerances must be > 0");
    if (max_subdivisions < 64) throw std::invalid_argument("quadrature: max_subdivisions too small");
}

std::complex<double> inv_gamma_cf_kernel(int shape, double v) {
    if (shape < 1) throw std::domain_error("cf kernel: shape must be >= 1");
    if (!(v >= 0.0)) throw std::domain_error("cf kernel: v must be >= 0");
    if (v == 0.0) return {1.0, 0.0};
    const cplx w = v * cplx{std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0};
    if (v <= 30.0) {
        const cplx k = bessel_k(shape, w);
        return 2.0 * std::pow(0.5 * v, shape) / std::tgamma(static_cast<double>(shape)) *
               std::polar(1.0, -kPi * shape / 4.0) * k;
    }
    // log-assembled tail so the e^{-v/sqrt2} decay cannot underflow piecewise
    const cplx ks = bessel_k_scaled(shape, w);
    const cplx lg = std::log(2.0) + static_cast<double>(shape) * std::log(0.5 * v) -
                    std::lgamma(static_cast<double>(shape)) + cplx{0.0, -kPi * shape / 4.0} - w +
                    std::log(ks);
    if (lg.real() < -745.0) return {0.0, 0.0};
    return std::exp(lg);
}

namespace {

// Interpolated scale-free CF kernel. log g is analytic and slowly varying on
// [2, 64], so a single Chebyshev fit gives uniform relative accuracy; below
// v = 2 the power-series Bessel path is already cheap and is used directly.
class CfKernelInterp {
public:
    explicit CfKernelInterp(int shape) : shape_(shape) {
        constexpr int N = kNodes;
        std::vector<cplx> fj(N);
        double prev_im = 0.0;
        for (int j = 0; j < N; ++j) {
            const double x = std::cos(kPi * j / (N - 1));
            const double v = 0.5 * (kHi + kLo) + 0.5 * (kHi - kLo) * x;
            cplx lgv = std::log(inv_gamma_cf_kernel(shape_, v));
            if (j > 0) {
                double im = lgv.imag();
                while (im - prev_im > kPi) im -= 2.0 * kPi;
                while (im - prev_im < -kPi) im += 2.0 * kPi;
                lgv = {lgv.real(), im};
            }
            prev_im = lgv.imag();
            fj[j] = lgv;
        }
        coef_.assign(N, cplx{0.0, 0.0});
        for (int k = 0; k < N; ++k) {
            cplx acc = 0.5 * (fj[0] + (k % 2 == 0 ? fj[N - 1] : -fj[N - 1]));
            for (int j = 1; j < N - 1; ++j) acc += fj[j] * std::cos(kPi * j * k / (N - 1));
            coef_[k] = acc * (2.0 / (N - 1));
        }
        coef_[N - 1] *= 0.5;
    }

    cplx eval(double v) const {
        if (v >= kHi) return {0.0, 0.0};
        if (v < kLo) return inv_gamma_cf_kernel(shape_, v);
        const double x = (2.0 * v - (kHi + kLo)) / (kHi - kLo);
        // Clenshaw
        cplx b1{0.0, 0.0}, b2{0.0, 0.0};
        for (int k = kNodes - 1; k >= 1; --k) {
            const cplx b0 = 2.0 * x * b1 - b2 + coef_[k];
            b2 = b1;
            b1 = b0;
        }
        const cplx lg = x * b1 - b2 + 0.5 * coef_[0];
        return std::exp(lg);
    }

private:
    static constexpr int kNodes = 193;
    static constexpr double kLo = 2.0, kHi = 64.0;
    int shape_;
    std::vector<cplx> coef_;
};

const CfKernelInterp& kernel_cache(int shape) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<CfKernelInterp>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(shape);
    if (it == cache.end())
        it = cache.emplace(shape, std::make_unique<CfKernelInterp>(shape)).first;
    return *it->second;
}

struct CfEval {
    int shape;
    double b4;  // 4 s / scale
    const CfKernelInterp* interp;  // nullptr -> direct

    cplx operator()(double t) const {
        const double v = std::sqrt(b4 * t);
        return interp ? interp->eval(v) : inv_gamma_cf_kernel(shape, v);
    }
};

CfEval make_eval(const CfSpec& spec, bool use_cache) {
    return CfEval{spec.shape(), 4.0 * spec.rate_scale(),
                  use_cache ? &kernel_cache(spec.shape()) : nullptr};
}

} // namespace

std::complex<double> cf_single_attempt(const CfSpec& spec, double t) {
    spec.validate();
    if (!(t > 0.0)) throw std::domain_error("cf_single_attempt: t must be > 0");
    return inv_gamma_cf_kernel(spec.shape(), std::sqrt(4.0 * spec.rate_scale() * t));
}

std::complex<double> cf_effective(const CfSpec& spec, double t) {
    spec.validate();
    if (spec.attempts == 0) return {1.0, 0.0};
    return ipow(cf_single_attempt(spec, t), spec.attempts);
}

// ---------------------------------------------------------------------------
// Oscillatory quadrature on [t_lo, t_hi]
// ---------------------------------------------------------------------------

namespace {

struct Panel {
    double a, b, val, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

struct OscIntegral {
    double value = 0.0;
    double err = 0.0;
    std::size_t panels = 0;
    bool budget_exhausted = false;
};

// Adaptive panels seeded geometrically from t_lo with at most ~one e^{-jtx}
// oscillation period per seed panel, then worst-error refinement.
template <class F>
OscIntegral oscillatory_integral(const F& f, double t_lo, double t_hi, double osc_rate,
                                 double target_abs, std::size_t max_panels) {
    OscIntegral out;
    if (!(t_hi > t_lo)) return out;
    const double period = osc_rate > 0.0 ? 2.0 * kPi / osc_rate : std::numeric_limits<double>::infinity();

    std::priority_queue<Panel> heap;
    double total = 0.0, toterr = 0.0;
    std::size_t count = 0;

    auto push_panel = [&](double a, double b) {
        Panel p{a, b, 0.0, 0.0};
        p.val = gk15(f, a, b, p.err);
        total += p.val;
        toterr += p.err;
        ++count;
        heap.push(p);
    };

    double a = t_lo;
    while (a < t_hi) {
        double b = std::min(2.0 * a, t_hi);
        const std::size_t subs_wanted =
            std::isfinite(period) ? static_cast<std::size_t>(std::ceil((b - a) / period)) : 1;
        const std::size_t room = max_panels > count + 64 ? max_panels - count - 64 : 1;
        const std::size_t subs = std::clamp<std::size_t>(subs_wanted, 1, room);
        const double w = (b - a) / static_cast<double>(subs);
        for (std::size_t i = 0; i < subs; ++i)
            push_panel(a + w * static_cast<double>(i), i + 1 == subs ? b : a + w * (i + 1.0));
        a = b;
    }

    while (toterr > target_abs && count < max_panels && !heap.empty()) {
        const Panel worst = heap.top();
        heap.pop();
        total -= worst.val;
        toterr -= worst.err;
        const double m = 0.5 * (worst.a + worst.b);
        push_panel(worst.a, m);
        push_panel(m, worst.b);
    }

    out.value = total;
    out.err = toterr;
    out.panels = count;
    out.budget_exhausted = toterr > target_abs;
    return out;
}

// First dyadic t with |phi(t)|^n / t below the tail threshold.
double tail_cutoff(const CfEval& phi, int n, const QuadratureConfig& q, bool& capped) {
    double t = 0x1.0p-30;
    while (t < q.t_max_cap) {
        if (std::pow(std::abs(phi(t)), n) / t < q.tail_epsilon) {
            capped = false;
            return t;
        }
        t *= 2.0;
    }
    capped = true;
    return q.t_max_cap;
}

} // namespace

GilPelaezResult gil_pelaez_cdf_ex(const CfSpec& spec, double x, const QuadratureConfig& q) {
    spec.validate();
    q.validate();
    if (!(x > 0.0)) throw std::domain_error("gil_pelaez_cdf: x must be > 0");
    if (spec.attempts < 1) throw std::domain_error("gil_pelaez_cdf: needs attempts >= 1");

    const CfEval phi = make_eval(spec, q.use_cf_cache);
    const int n = spec.attempts;

    bool capped = false;
    const double t_hi = tail_cutoff(phi, n, q, capped);

    const auto integrand = [&](double t) {
        const cplx ph = ipow(phi(t), n);
        return (std::sin(-t * x) * ph.real() + std::cos(t * x) * ph.imag()) / t;
        // == Im(e^{-jtx} phi^n(t)) / t
    };

    const OscIntegral I = oscillatory_integral(integrand, q.t_min, t_hi, x, q.abs_tol,
                                               q.max_subdivisions);

    GilPelaezResult r;
    r.cdf_raw = 0.5 - I.value / kPi;
    r.cdf = std::clamp(r.cdf_raw, 0.0, 1.0);
    const double tail_est = q.tail_epsilon * t_hi + (capped ? std::abs(phi(t_hi)) : 0.0);
    r.abs_error = I.err / kPi + tail_est;
    r.converged = !I.budget_exhausted && !capped;
    r.panels = I.panels;
    r.t_upper = t_hi;
    return r;
}

double gil_pelaez_cdf(const CfSpec& spec, double x, const QuadratureConfig& q) {
    const GilPelaezResult r = gil_pelaez_cdf_ex(spec, x, q);
    if (!r.converged)
        throw NumericError("gil_pelaez_cdf: quadrature did not converge (err estimate " +
                               std::to_string(r.abs_error) + ")",
                           r.abs_error);
    return r.cdf;
}

double cf_difference_integral(const CfSpec& spec, int n, double x, const QuadratureConfig& q) {
    spec.validate();
    q.validate();
    if (n < 1) throw std::domain_error("cf_difference_integral: n must be >= 1");
    if (!(x > 0.0)) throw std::domain_error("cf_difference_integral: x must be > 0");

    const CfEval phi = make_eval(spec, q.use_cf_cache);

    bool capped = false;
    double t_hi = tail_cutoff(phi, std::max(n - 1, 1), q, capped);

    const auto integrand = [&](double t) {
        const cplx p = phi(t);
        const cplx diff = ipow(p, n - 1) * (p - 1.0);
        return (std::sin(-t * x) * diff.real() + std::cos(t * x) * diff.imag()) / t;
    };

    double tail = 0.0;
    if (n == 1) {
        // phi -> 0 but (phi - 1)/t keeps oscillating; finish sin(tx)/t by the
        // asymptotic sine integral once |phi| is below threshold.
        t_hi = std::max(t_hi, 150.0 / x);
        const double w = x * t_hi;
        const double w2 = w * w;
        const double fw = (1.0 - 2.0 / w2 + 24.0 / (w2 * w2) - 720.0 / (w2 * w2 * w2)) / w;
        const double gw = (1.0 - 6.0 / w2 + 120.0 / (w2 * w2) - 5040.0 / (w2 * w2 * w2)) / w2;
        tail = fw * std::cos(w) + gw * std::sin(w);  // = int_{t_hi}^inf sin(tx)/t dt
    }

    const OscIntegral I =
        oscillatory_integral(integrand, q.t_min, t_hi, x, q.abs_tol, q.max_subdivisions);
    if (I.budget_exhausted)
        throw NumericError("cf_difference_integral: quadrature did not converge", I.err);
    return I.value + tail;
}

} // namespace harqsim
