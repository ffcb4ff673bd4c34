#include "tailwalk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "tailwalk/errors.hpp"

namespace tailwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRadialTableSize = 4096;
constexpr double kTableQuantileTail = 1e-12;

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double norm(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

/// Fraction of an interval's mass below offset delta when the density is
/// modelled as linear between the end values f0, f1 over width w.
double linear_model_fraction(double f0, double f1, double w, double delta) {
    const double total = 0.5 * (f0 + f1) * w;
    if (total <= 0.0) return delta / w;
    return (f0 * delta + 0.5 * (f1 - f0) * delta * delta / w) / total;
}

/// Inverse of linear_model_fraction.
double linear_model_offset(double f0, double f1, double w, double phi) {
    const double a = 0.5 * (f1 - f0) / w;
    const double b = f0;
    const double c = phi * 0.5 * (f0 + f1) * w;
    if (c <= 0.0) return 0.0;
    const double disc = b * b + 4.0 * a * c;
    const double denom = b + std::sqrt(std::max(disc, 0.0));
    if (denom <= 0.0) return phi * w;
    return std::clamp(2.0 * c / denom, 0.0, w);
}

}  // namespace

struct JumpKernel::Impl {
    Family family = Family::Cauchy2_1D;
    Support support = Support::Continuum;
    int d = 1;
    double alpha = 3.0;
    double c0 = 0.0;
    double sigma2 = 1.0;
    double scale = 1.0;
    double norm_const = 1.0;
    double sup = 0.0;
    std::string id;

    // Continuum radial inverse-CDF table: nodes r_i, radial density f_i,
    // forward cumulative F_i and complementary Q_i = P(R > r_i).
    std::vector<double> r_nodes, f_nodes, cdf, ccdf;
    double r_max = 0.0;
    double q_max = 0.0;

    // Lattice: jumps sorted by radius, cumulative weights, suffix masses.
    std::vector<LatticeJump> jumps;
    std::vector<double> jump_radius, jump_cdf, jump_suffix;
    double residual = 0.0;
    double residual_radius = 0.0;
    double table_radius = 0.0;

    double radial(double r) const;
    double radial_pdf(double r) const { return unit_sphere_area(d) * std::pow(r, d - 1) * radial(r); }
};

double JumpKernel::Impl::radial(double r) const {
    switch (family) {
        case Family::Cauchy2_1D:
        case Family::GenCauchy: {
            const double u = r / scale;
            return norm_const * std::pow(1.0 + u * u, -0.5 * (d + alpha));
        }
        case Family::Gaussian:
            return norm_const * std::exp(-0.5 * r * r);
        case Family::LatticeZipf:
            return r < 0.5 ? 0.0 : norm_const * std::pow(1.0 + r, -(d + alpha));
        case Family::LatticeTable:
            return 0.0;
    }
    return 0.0;
}

double unit_sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double sphere_coordinate_moment(int d, double p) {
    if (d == 1) return 1.0;
    return std::tgamma(0.5 * d) * std::tgamma(0.5 * (p + 1.0)) /
           (std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (d + p)));
}

std::string to_string(Family family) {
    switch (family) {
        case Family::Cauchy2_1D: return "Cauchy2_1D";
        case Family::GenCauchy: return "GenCauchy";
        case Family::LatticeZipf: return "LatticeZipf";
        case Family::LatticeTable: return "LatticeTable";
        case Family::Gaussian: return "Gaussian";
    }
    return "unknown";
}

Family family_from_string(const std::string& name) {
    for (Family f : {Family::Cauchy2_1D, Family::GenCauchy, Family::LatticeZipf,
                     Family::LatticeTable, Family::Gaussian}) {
        if (to_string(f) == name) return f;
    }
    throw InvalidKernel("unknown kernel family '" + name + "'");
}

namespace {

void build_radial_table(JumpKernel::Impl& k) {
    const double area = unit_sphere_area(k.d);
    if (k.family == Family::Gaussian) {
        k.r_max = 12.0 + 2.0 * k.d;
    } else {
        // Far tail of S r^{d-1} a(r) is S c0 r^{-1-alpha}.
        k.r_max = std::pow(area * k.c0 / (k.alpha * kTableQuantileTail), 1.0 / k.alpha);
    }
    const double r_lo = 1e-6 * k.scale;
    k.r_nodes.resize(kRadialTableSize + 1);
    k.r_nodes[0] = 0.0;
    const double ratio = std::log(k.r_max / r_lo) / (kRadialTableSize - 1);
    for (int i = 1; i <= kRadialTableSize; ++i) k.r_nodes[i] = r_lo * std::exp(ratio * (i - 1));
    k.r_nodes.back() = k.r_max;

    k.f_nodes.resize(k.r_nodes.size());
    for (std::size_t i = 0; i < k.r_nodes.size(); ++i) k.f_nodes[i] = k.radial_pdf(k.r_nodes[i]);

    std::vector<double> mass(kRadialTableSize);
    auto pdf = [&k](double r) { return k.radial_pdf(r); };
    for (int i = 0; i < kRadialTableSize; ++i) {
        mass[i] = boost::math::quadrature::gauss<double, 15>::integrate(pdf, k.r_nodes[i], k.r_nodes[i + 1]);
    }
    double tail = 0.0;
    if (k.family != Family::Gaussian) {
        boost::math::quadrature::exp_sinh<double> integrator;
        tail = integrator.integrate([&](double r) { return k.radial_pdf(r); }, k.r_max, kInf);
    }
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0) + tail;
    if (!(std::abs(total - 1.0) < 1e-9)) {
        throw InvalidKernel("radial density of " + k.id + " integrates to " + format_number(total));
    }
    k.cdf.assign(k.r_nodes.size(), 0.0);
    k.ccdf.assign(k.r_nodes.size(), 0.0);
    for (int i = 0; i < kRadialTableSize; ++i) k.cdf[i + 1] = k.cdf[i] + mass[i] / total;
    k.q_max = tail / total;
    k.ccdf.back() = k.q_max;
    for (int i = kRadialTableSize - 1; i >= 0; --i) k.ccdf[i] = k.ccdf[i + 1] + mass[i] / total;
}

void finish_lattice_table(JumpKernel::Impl& k) {
    std::stable_sort(k.jumps.begin(), k.jumps.end(), [](const LatticeJump& a, const LatticeJump& b) {
        long na = 0, nb = 0;
        for (long v : a.site) na += v * v;
        for (long v : b.site) nb += v * v;
        return na < nb;
    });
    const std::size_t n = k.jumps.size();
    k.jump_radius.resize(n);
    k.jump_cdf.resize(n);
    k.jump_suffix.assign(n + 1, k.residual);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r2 = 0.0;
        for (long v : k.jumps[i].site) r2 += double(v) * double(v);
        k.jump_radius[i] = std::sqrt(r2);
        acc += k.jumps[i].weight;
        k.jump_cdf[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) k.jump_suffix[i] = k.jump_suffix[i + 1] + k.jumps[i].weight;
    k.table_radius = n ? k.jump_radius.back() : 0.0;
}

/// Integral over |z| > r0 of |z|^m (1 + |z|)^-(d+alpha), radially.
double zipf_tail_integral(int d, double alpha, double r0, double m) {
    boost::math::quadrature::exp_sinh<double> integrator;
    const double area = unit_sphere_area(d);
    return area * integrator.integrate(
                      [&](double r) {
                          if (!std::isfinite(r)) return 0.0;
                          return std::pow(r / (1.0 + r), d - 1 + m) * std::pow(1.0 + r, m - 1.0 - alpha);
                      },
                      r0, kInf);
}

void build_lattice_zipf(JumpKernel::Impl& k) {
    const int d = k.d;
    const double s = d + k.alpha;
    if (d == 1) {
        constexpr long n_tab = 65536;
        k.norm_const = 1.0 / (2.0 * (std::riemann_zeta(s) - 1.0));
        for (long n = 1; n <= n_tab; ++n) {
            const double w = k.norm_const * std::pow(1.0 + n, -s);
            k.jumps.push_back({{n}, w});
            k.jumps.push_back({{-n}, w});
        }
        // Midpoint rule for sum_{m >= n_tab + 2} m^-s.
        k.residual = 2.0 * k.norm_const * std::pow(n_tab + 1.5, 1.0 - s) / (s - 1.0);
        const double residual_m2 = 2.0 * k.norm_const * std::pow(n_tab + 1.5, 3.0 - s) / (s - 3.0);
        k.residual_radius = std::sqrt(residual_m2 / k.residual);
        const double z = std::riemann_zeta(s) - 1.0;
        const double z1 = std::riemann_zeta(s - 1.0) - 1.0;
        const double z2 = std::riemann_zeta(s - 2.0) - 1.0;
        k.sigma2 = 2.0 * k.norm_const * (z2 - 2.0 * z1 + z);
    } else {
        const long radius = d == 2 ? 256 : 40;
        const long r2max = radius * radius;
        std::vector<long> site(d, -radius);
        double weight_sum = 0.0, second = 0.0;
        long count = 0;
        std::vector<LatticeJump> raw;
        for (;;) {
            long r2 = 0;
            for (long v : site) r2 += v * v;
            if (r2 <= r2max) {
                ++count;
                if (r2 > 0) {
                    const double w = std::pow(1.0 + std::sqrt(double(r2)), -s);
                    raw.push_back({site, w});
                    weight_sum += w;
                    second += w * double(r2);
                }
            }
            int axis = 0;
            while (axis < d && ++site[axis] > radius) site[axis++] = -radius;
            if (axis == d) break;
        }
        const double omega = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
        const double r_eff = std::pow(double(count) / omega, 1.0 / d);
        const double tail0 = zipf_tail_integral(d, k.alpha, r_eff, 0.0);
        const double tail2 = zipf_tail_integral(d, k.alpha, r_eff, 2.0);
        k.norm_const = 1.0 / (weight_sum + tail0);
        for (auto& j : raw) j.weight *= k.norm_const;
        k.jumps = std::move(raw);
        k.residual = k.norm_const * tail0;
        k.residual_radius = std::sqrt(tail2 / tail0);
        k.sigma2 = k.norm_const * (second + tail2) / d;
    }
    // Absorb the rounding of the table sum so table + residual is exactly 1.
    long double table = 0.0L;
    for (const auto& j : k.jumps) table += j.weight;
    const double fix = static_cast<double>((1.0L - k.residual) / table);
    for (auto& j : k.jumps) j.weight *= fix;
    k.c0 = k.norm_const;
    k.sup = k.norm_const * std::pow(2.0, -s);
    finish_lattice_table(k);
}

void build_lattice_table(JumpKernel::Impl& k, const std::vector<LatticeJump>& table) {
    if (table.empty()) throw InvalidKernel("empty lattice jump table");
    double total = 0.0, second = 0.0;
    for (const auto& j : table) {
        if (static_cast<int>(j.site.size()) != k.d) throw InvalidKernel("lattice jump of wrong dimension");
        if (!(j.weight >= 0.0)) throw InvalidKernel("negative lattice jump weight");
        total += j.weight;
        for (long v : j.site) second += j.weight * double(v) * double(v);
        std::vector<long> mirror(j.site);
        for (long& v : mirror) v = -v;
        const auto it = std::find_if(table.begin(), table.end(), [&](const LatticeJump& o) { return o.site == mirror; });
        if (it == table.end() || std::abs(it->weight - j.weight) > 1e-15) {
            throw InvalidKernel("lattice jump table is not symmetric");
        }
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidKernel("lattice jump table does not sum to 1");
    k.jumps = table;
    k.residual = 0.0;
    k.sigma2 = second / k.d;
    if (!(k.sigma2 > 0.0)) throw InvalidKernel("lattice jump table has zero variance");
    k.sup = 0.0;
    for (const auto& j : table) k.sup = std::max(k.sup, j.weight);
    finish_lattice_table(k);
}

}  // namespace

JumpKernel::JumpKernel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

JumpKernel make_kernel(const KernelSpec& spec) {
    auto k = std::make_shared<JumpKernel::Impl>();
    k->family = spec.family;
    k->d = spec.dimension;
    if (spec.dimension < 1) throw InvalidKernel("dimension must be >= 1");
    const bool power_tail = spec.family == Family::Cauchy2_1D || spec.family == Family::GenCauchy ||
                            spec.family == Family::LatticeZipf;
    if (power_tail) {
        if (!std::isfinite(spec.alpha)) throw InvalidKernel("tail exponent must be finite");
        if (spec.alpha <= 2.0) throw TailTooHeavy("tail exponent alpha = " + format_number(spec.alpha) + " <= 2");
    }
    switch (spec.family) {
        case Family::Cauchy2_1D:
        case Family::GenCauchy: {
            if (spec.family == Family::Cauchy2_1D && (spec.dimension != 1 || spec.alpha != 3.0)) {
                throw InvalidKernel("Cauchy2_1D is fixed to d = 1, alpha = 3");
            }
            const int d = spec.dimension;
            const double alpha = spec.alpha;
            k->support = Support::Continuum;
            k->alpha = alpha;
            k->scale = std::sqrt(alpha - 2.0);
            k->norm_const = std::tgamma(0.5 * (alpha + d)) /
                            (std::tgamma(0.5 * alpha) * std::pow(std::numbers::pi, 0.5 * d) * std::pow(k->scale, d));
            k->c0 = k->norm_const * std::pow(k->scale, d + alpha);
            k->sigma2 = 1.0;
            k->sup = k->norm_const;
            k->id = spec.family == Family::Cauchy2_1D
                        ? "Cauchy2_1D"
                        : "GenCauchy(d=" + std::to_string(d) + ",alpha=" + format_number(alpha) + ")";
            build_radial_table(*k);
            break;
        }
        case Family::Gaussian:
            k->support = Support::Continuum;
            k->alpha = kInf;
            k->norm_const = std::pow(2.0 * std::numbers::pi, -0.5 * k->d);
            k->sup = k->norm_const;
            k->id = "Gaussian(d=" + std::to_string(k->d) + ")";
            build_radial_table(*k);
            break;
        case Family::LatticeZipf:
            if (spec.dimension > 3) throw InvalidKernel("LatticeZipf supports d <= 3");
            k->support = Support::Lattice;
            k->alpha = spec.alpha;
            k->id = "LatticeZipf(d=" + std::to_string(k->d) + ",alpha=" + format_number(spec.alpha) + ")";
            build_lattice_zipf(*k);
            break;
        case Family::LatticeTable:
            k->support = Support::Lattice;
            k->alpha = kInf;
            k->id = "LatticeTable(d=" + std::to_string(k->d) + ",n=" + std::to_string(spec.table.size()) + ")";
            build_lattice_table(*k, spec.table);
            break;
    }
    if (!(k->sigma2 > 0.0) || !std::isfinite(k->sigma2)) throw InvalidKernel("non-finite covariance for " + k->id);
    return JumpKernel(std::move(k));
}

Family JumpKernel::family() const { return impl_->family; }
Support JumpKernel::support() const { return impl_->support; }
int JumpKernel::dimension() const { return impl_->d; }
bool JumpKernel::isotropic() const { return impl_->family != Family::LatticeTable; }
bool JumpKernel::has_power_tail() const { return std::isfinite(impl_->alpha); }
double JumpKernel::alpha() const { return impl_->alpha; }
double JumpKernel::c0() const { return impl_->c0; }
double JumpKernel::c0(std::span<const double>) const { return impl_->c0; }
double JumpKernel::sigma2() const { return impl_->sigma2; }
double JumpKernel::scale() const { return impl_->scale; }
std::string JumpKernel::id() const { return impl_->id; }
double JumpKernel::sup_density() const { return impl_->sup; }
const std::vector<LatticeJump>& JumpKernel::lattice_jumps() const { return impl_->jumps; }
double JumpKernel::lattice_residual_mass() const { return impl_->residual; }
double JumpKernel::lattice_residual_radius() const { return impl_->residual_radius; }

double JumpKernel::radial_density(double r) const { return impl_->radial(std::abs(r)); }

double JumpKernel::density(std::span<const double> z) const {
    const auto& k = *impl_;
    if (k.support == Support::Continuum) return k.radial(norm(z));
    std::vector<long> site(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) site[i] = std::lround(z[i]);
    if (k.family == Family::LatticeZipf) {
        double r2 = 0.0;
        for (long v : site) r2 += double(v) * double(v);
        return r2 == 0.0 ? 0.0 : k.norm_const * std::pow(1.0 + std::sqrt(r2), -(k.d + k.alpha));
    }
    for (const auto& j : k.jumps) {
        if (j.site == site) return j.weight;
    }
    return 0.0;
}

double JumpKernel::radial_tail(double r) const {
    const auto& k = *impl_;
    if (r <= 0.0) return 1.0;
    if (k.support == Support::Lattice) {
        const auto it = std::upper_bound(k.jump_radius.begin(), k.jump_radius.end(), r);
        const std::size_t i = static_cast<std::size_t>(it - k.jump_radius.begin());
        if (i == k.jumps.size() && k.residual > 0.0 && r > k.table_radius) {
            return k.residual * std::pow((k.table_radius + 0.5) / (r + 0.5), k.alpha);
        }
        return k.jump_suffix[i];
    }
    if (r >= k.r_max) return has_power_tail() ? k.q_max * std::pow(k.r_max / r, k.alpha) : 0.0;
    const auto it = std::upper_bound(k.r_nodes.begin(), k.r_nodes.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - k.r_nodes.begin()) - 1;
    const double w = k.r_nodes[i + 1] - k.r_nodes[i];
    const double mass = k.ccdf[i] - k.ccdf[i + 1];
    return k.ccdf[i] - mass * linear_model_fraction(k.f_nodes[i], k.f_nodes[i + 1], w, r - k.r_nodes[i]);
}

std::optional<double> JumpKernel::closed_char_fn(double knorm) const {
    const auto& k = *impl_;
    const double q = std::abs(knorm);
    switch (k.family) {
        case Family::Cauchy2_1D:
            return (1.0 + q) * std::exp(-q);
        case Family::GenCauchy: {
            const double x = k.scale * q;
            if (x == 0.0) return 1.0;
            if (x > 700.0) return 0.0;
            const double nu = 0.5 * k.alpha;
            return std::pow(x, nu) * std::cyl_bessel_k(nu, x) / (std::pow(2.0, nu - 1.0) * std::tgamma(nu));
        }
        case Family::Gaussian:
            return std::exp(-0.5 * q * q);
        default:
            return std::nullopt;
    }
}

std::optional<double> JumpKernel::closed_one_minus_char_fn(double knorm) const {
    const auto& k = *impl_;
    const double q = std::abs(knorm);
    switch (k.family) {
        case Family::Cauchy2_1D: {
            if (q < 0.5) {
                // 1 - (1+q)e^{-q} = sum_{n>=2} (-1)^n (n-1) q^n / n!
                double term = q * q / 2.0, sum = 0.0;
                for (int n = 2; n < 40; ++n) {
                    sum += (n - 1) * term;
                    term *= -q / (n + 1);
                }
                return sum;
            }
            return 1.0 - (1.0 + q) * std::exp(-q);
        }
        case Family::Gaussian:
            return -std::expm1(-0.5 * q * q);
        case Family::GenCauchy: {
            const auto v = closed_char_fn(q);
            return 1.0 - *v;
        }
        default:
            return std::nullopt;
    }
}

std::vector<DirectionalTail> JumpKernel::direction_table() const {
    const auto& k = *impl_;
    std::vector<DirectionalTail> out;
    if (k.family != Family::LatticeZipf) return out;
    const double s = k.d + k.alpha;
    const long radius = std::lround(std::floor(k.table_radius));
    for (int axis = 0; axis < k.d; ++axis) {
        std::vector<double> dir(k.d, 0.0);
        dir[axis] = 1.0;
        const double r = double(radius);
        out.push_back({dir, r, std::pow(r, s) * k.norm_const * std::pow(1.0 + r, -s)});
    }
    if (k.d > 1) {
        const long n = std::lround(std::floor(k.table_radius / std::sqrt(double(k.d))));
        const double r = n * std::sqrt(double(k.d));
        std::vector<double> dir(k.d, 1.0 / std::sqrt(double(k.d)));
        out.push_back({dir, r, std::pow(r, s) * k.norm_const * std::pow(1.0 + r, -s)});
    }
    return out;
}

void JumpKernel::sample(Rng& rng, std::span<double> out) const {
    const auto& k = *impl_;
    const double u = uniform_open(rng);
    if (k.support == Support::Lattice) {
        const auto it = std::upper_bound(k.jump_cdf.begin(), k.jump_cdf.end(), u);
        if (it != k.jump_cdf.end()) {
            const auto& site = k.jumps[static_cast<std::size_t>(it - k.jump_cdf.begin())].site;
            for (int i = 0; i < k.d; ++i) out[i] = double(site[i]);
            return;
        }
        // Beyond the table: Pareto radius, uniform direction, rounded to a site.
        const double q = std::max(1.0 - u, 1e-300);
        const double r = (k.table_radius + 0.5) * std::pow(std::min(1.0, q / k.residual), -1.0 / k.alpha);
        if (k.d == 1) {
            out[0] = std::round((rng() & 1U) ? r : -r);
            return;
        }
        double n2 = 0.0;
        for (int i = 0; i < k.d; ++i) {
            out[i] = standard_normal(rng);
            n2 += out[i] * out[i];
        }
        const double f = r / std::sqrt(n2);
        for (int i = 0; i < k.d; ++i) out[i] = std::round(out[i] * f);
        return;
    }

    double r;
    const double f_last = k.cdf.back();
    if (u < f_last) {
        const auto it = std::upper_bound(k.cdf.begin(), k.cdf.end(), u);
        const std::size_t i = static_cast<std::size_t>(it - k.cdf.begin()) - 1;
        const double phi = (u - k.cdf[i]) / (k.cdf[i + 1] - k.cdf[i]);
        const double w = k.r_nodes[i + 1] - k.r_nodes[i];
        r = k.r_nodes[i] + linear_model_offset(k.f_nodes[i], k.f_nodes[i + 1], w, phi);
    } else if (has_power_tail()) {
        const double q = 1.0 - u;
        r = k.r_max * std::pow(k.q_max / q, 1.0 / k.alpha);
    } else {
        r = k.r_max;
    }
    if (k.d == 1) {
        out[0] = (rng() & 1U) ? r : -r;
        return;
    }
    double n2 = 0.0;
    for (int i = 0; i < k.d; ++i) {
        out[i] = standard_normal(rng);
        n2 += out[i] * out[i];
    }
    const double f = r / std::sqrt(n2);
    for (int i = 0; i < k.d; ++i) out[i] *= f;
}

std::vector<double> sample_jump(const JumpKernel& kernel, Rng& rng) {
    std::vector<double> z(kernel.dimension());
    kernel.sample(rng, z);
    return z;
}

double moment(const JumpKernel& kernel, int order) {
    if (order < 0) throw DomainError("moment order must be >= 0");
    if (double(order) >= kernel.alpha()) {
        throw MomentDiverges("moment of order " + std::to_string(order) + " diverges for alpha = " +
                             format_number(kernel.alpha()));
    }
    if (order == 0) return 1.0;
    if (order % 2 == 1) return 0.0;
    const auto& k = kernel.impl();
    const int d = k.d;
    switch (k.family) {
        case Family::Gaussian: {
            double m = 1.0;
            for (int j = order - 1; j > 0; j -= 2) m *= j;
            return m;
        }
        case Family::Cauchy2_1D:
        case Family::GenCauchy: {
            // E|Z|^n over r = s u / (1 - u), u in (0, 1).
            boost::math::quadrature::tanh_sinh<double> integrator;
            const double s = k.scale;
            const double radial_moment = integrator.integrate(
                [&](double u) {
                    if (u >= 1.0) return 0.0;
                    const double r = s * u / (1.0 - u);
                    const double jac = s / ((1.0 - u) * (1.0 - u));
                    return std::pow(r, order) * k.radial_pdf(r) * jac;
                },
                0.0, 1.0, 1e-14);
            return radial_moment * sphere_coordinate_moment(d, order);
        }
        case Family::LatticeZipf: {
            const double s = d + k.alpha;
            if (d == 1) {
                // 2C sum_{m>=2} (m-1)^n m^-s via binomial expansion in zeta values.
                double acc = 0.0, binom = 1.0;
                for (int j = 0; j <= order; ++j) {
                    const double sign = ((order - j) % 2 == 0) ? 1.0 : -1.0;
                    acc += sign * binom * (std::riemann_zeta(s - j) - 1.0);
                    binom = binom * (order - j) / (j + 1);
                }
                return 2.0 * k.norm_const * acc;
            }
            double acc = 0.0;
            long count = 1;
            for (const auto& j : k.jumps) {
                acc += j.weight * std::pow(double(j.site[0]), order);
                ++count;
            }
            const double omega = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
            const double r_eff = std::pow(double(count) / omega, 1.0 / d);
            acc += k.norm_const * sphere_coordinate_moment(d, order) *
                   zipf_tail_integral(d, k.alpha, r_eff, double(order));
            return acc;
        }
        case Family::LatticeTable: {
            double acc = 0.0;
            for (const auto& j : k.jumps) {
                double m = 0.0;
                for (long v : j.site) m += std::pow(double(v), order);
                acc += j.weight * m / d;
            }
            return acc;
        }
    }
    return 0.0;
}

}  // namespace tailwalk
