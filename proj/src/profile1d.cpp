#include "altphillips/profile1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "altphillips/quadrature.hpp"

namespace ap {

double exact_phi(const PotentialParams& p, double t) {
    if (t <= 0.0) return 0.0;
    return p.c_star * std::pow(t, p.alpha);
}

double exact_phi_prime(const PotentialParams& p, double t) {
    if (t <= 0.0) return 0.0;
    return p.c_star * p.alpha * std::pow(t, p.alpha - 1.0);
}

double phi_inverse(const PotentialParams& p, double s) {
    if (s <= 0.0) return 0.0;
    return std::pow(s / p.c_star, 1.0 / p.alpha);
}

double profile_weight(const PotentialParams& p, double t) {
    if (t <= 0.0) throw std::domain_error("profile_weight: t must be positive");
    // phi' = sqrt(W(phi)), so the density is 2 W(phi(t))
    return 2.0 * eval_W(p, exact_phi(p, t));
}

double profile_weight_mass(const PotentialParams& p, double T) {
    if (T <= 0.0) return 0.0;
    return phase_transform(p, exact_phi(p, T));
}

GeneratorG GeneratorG::from_function(std::function<double(double)> g, double s_max,
                                     std::size_t n_samples, std::string tag) {
    GeneratorG gen;
    gen.g = std::move(g);
    gen.s_max = s_max;
    gen.closed_form = std::move(tag);
    gen.s_grid.resize(n_samples + 1);
    gen.g_vals.resize(n_samples + 1);
    for (std::size_t i = 0; i <= n_samples; ++i) {
        // graded toward 0 where the profile is steep in s
        const double x = static_cast<double>(i) / static_cast<double>(n_samples);
        gen.s_grid[i] = s_max * x * x;
        gen.g_vals[i] = i == 0 ? 0.0 : gen.g(gen.s_grid[i]);
    }
    return gen;
}

GeneratorG GeneratorG::from_table(std::vector<double> s, std::vector<double> g) {
    if (s.size() != g.size() || s.size() < 2)
        throw std::invalid_argument("GeneratorG::from_table: need matching grids, length >= 2");
    GeneratorG gen;
    gen.s_grid = std::move(s);
    gen.g_vals = std::move(g);
    gen.s_max = gen.s_grid.back();
    auto sg = gen.s_grid;
    auto gv = gen.g_vals;
    gen.g = [sg = std::move(sg), gv = std::move(gv)](double x) {
        auto it = std::upper_bound(sg.begin(), sg.end(), x);
        std::size_t k = it == sg.begin() ? 0 : static_cast<std::size_t>(it - sg.begin()) - 1;
        if (k + 1 >= sg.size()) k = sg.size() - 2;
        const double w = (x - sg[k]) / (sg[k + 1] - sg[k]);
        return gv[k] * (1.0 - w) + gv[k + 1] * w;
    };
    return gen;
}

Profile1D psi_from_g(const GeneratorG& gen, const PotentialParams& p, double t_step) {
    const auto& sg = gen.s_grid;
    const std::size_t n = sg.size();
    if (n < 2) throw std::invalid_argument("psi_from_g: degenerate grid");
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (!(gen.g(sg[i]) > 0.0))
            throw std::runtime_error("psi_from_g: g <= 0 inside the grid, profile stalls");

    const auto inv_sqrt_g = [&](double s) { return 1.0 / std::sqrt(gen.g(s)); };

    // cumulative G over the tabulated grid; the [0, s_1] cell never
    // evaluates at 0 (g vanishes there when g ~ W); the omitted
    // [0, 1e-12] sliver is below rounding for admissible generators
    std::vector<double> G(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double a = sg[i - 1], b = sg[i];
        if (i == 1 && a <= 0.0) a = std::min(1e-12, 0.5 * b);
        G[i] = G[i - 1] + integrate(inv_sqrt_g, a, b, 1e-14);
    }
    const double t_max = G.back();

    const std::size_t nt = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(t_max / t_step)) + 1);
    Profile1D prof;
    prof.params = p;
    prof.ts.resize(nt);
    prof.vals.resize(nt);
    prof.derivs.resize(nt);
    prof.margins.assign(nt, 0.0);

    for (std::size_t j = 0; j < nt; ++j) {
        const double t = t_max * static_cast<double>(j) / static_cast<double>(nt - 1);
        prof.ts[j] = t;
        if (j == 0) {
            prof.vals[j] = sg.front() > 0.0 ? sg.front() : 0.0;
            prof.derivs[j] = 0.0;
            continue;
        }
        auto it = std::upper_bound(G.begin(), G.end(), t);
        std::size_t k = it == G.begin() ? 0 : static_cast<std::size_t>(it - G.begin()) - 1;
        if (k + 1 >= n) k = n - 2;
        const double w = (t - G[k]) / std::max(G[k + 1] - G[k], 1e-300);
        double s = sg[k] + w * (sg[k + 1] - sg[k]);
        // Newton polish on G(s) = t using G' = 1/sqrt(g)
        for (int it2 = 0; it2 < 4; ++it2) {
            double lo = sg[k] > 0.0 ? sg[k] : std::min(1e-12, 0.5 * sg[k + 1]);
            s = std::clamp(s, lo, sg[k + 1]);
            const double Gs = G[k] + integrate(inv_sqrt_g, lo, s, 1e-15);
            s += (t - Gs) * std::sqrt(gen.g(s));
        }
        s = std::clamp(s, sg.front(), sg.back());
        prof.vals[j] = s;
        prof.derivs[j] = std::sqrt(std::max(gen.g(s), 0.0));
    }
    // round-trip residual (psi'_fd)^2 - g(psi) as the reported margin
    for (std::size_t j = 1; j + 1 < nt; ++j) {
        const double fd = (prof.vals[j + 1] - prof.vals[j - 1]) / (prof.ts[j + 1] - prof.ts[j - 1]);
        prof.margins[j] = fd * fd - gen.g(prof.vals[j]);
    }
    return prof;
}

namespace {

void finish_certification(Profile1D& prof) {
    prof.certified = true;
    prof.first_violation = -1;
    for (std::size_t i = 0; i < prof.margins.size(); ++i) {
        if (prof.margins[i] < 0.0) {
            prof.certified = false;
            prof.first_violation = static_cast<std::ptrdiff_t>(i);
            break;
        }
    }
}

}  // namespace

namespace {

// shared machinery of the lemma-3.2 barrier: g, the cancellation-free
// G(s) = phi_inverse(s) - int_0^s (W^-1/2 - g^-1/2), and its inversion
struct Lemma1 {
    const PotentialParams& p;
    double C1, eps_bar, s0;

    Lemma1(const PotentialParams& pp, int n, double eb) : p(pp), C1(8.0 * n), eps_bar(eb) {
        // crossing C1 s^(1-gamma/2) = c_gamma s^-gamma
        s0 = std::pow(p.c_gamma / C1, 1.0 / (1.0 + 0.5 * p.gamma));
        if (!(s0 > 0.0 && s0 < 1.0))
            throw std::domain_error("barrier_lemma1: s0 outside (0,1), gamma not in range");
    }
    double g(double s) const {
        return eval_W(p, s) + eps_bar + C1 * std::pow(s, 1.0 - 0.5 * p.gamma);
    }
    double G(double s) const {
        const auto dG = [&](double x) {
            const double W = eval_W(p, x);
            const double e = (eps_bar + C1 * std::pow(x, 1.0 - 0.5 * p.gamma)) / W;
            const double r = std::sqrt(1.0 + e);
            return (1.0 / std::sqrt(W)) * e / (r * (r + 1.0));
        };
        return phi_inverse(p, s) - integrate(dG, 1e-14, s, 1e-16);
    }
    double invert(double t) const {
        double s = exact_phi(p, t);  // psi >= phi, good starting bracket
        for (int it = 0; it < 40; ++it) {
            const double step = (t - G(s)) * std::sqrt(g(s));
            s += step;
            if (std::fabs(step) < 1e-16 * (s + 1e-30)) break;
        }
        return s;
    }
};

}  // namespace

double barrier_lemma1_value(const PotentialParams& p, int n, double eps_bar, double t) {
    if (n < 1) throw std::domain_error("barrier_lemma1: dimension must be >= 1");
    if (!(eps_bar > 0.0)) throw std::domain_error("barrier_lemma1: eps_bar must be positive");
    if (t <= 0.0) return 0.0;
    return Lemma1(p, n, eps_bar).invert(t);
}

Profile1D barrier_lemma1(const PotentialParams& p, int n, double eps_bar, double t_step) {
    if (n < 1) throw std::domain_error("barrier_lemma1: dimension must be >= 1");
    if (!(eps_bar > 0.0)) throw std::domain_error("barrier_lemma1: eps_bar must be positive");
    const Lemma1 lem(p, n, eps_bar);
    const double C1 = lem.C1;
    const double s0 = lem.s0;
    const auto g = [&](double s) { return lem.g(s); };
    const double t0 = lem.G(s0);

    const std::size_t nt = std::max<std::size_t>(3, static_cast<std::size_t>(std::llround(t0 / t_step)) + 1);
    Profile1D prof;
    prof.params = p;
    prof.ts.resize(nt);
    prof.vals.resize(nt);
    prof.derivs.resize(nt);
    prof.margins.assign(nt, 0.0);
    for (std::size_t j = 0; j < nt; ++j) {
        const double t = t0 * static_cast<double>(j) / static_cast<double>(nt - 1);
        prof.ts[j] = t;
        if (j == 0) continue;
        const double s = lem.invert(t);
        prof.vals[j] = s;
        prof.derivs[j] = std::sqrt(g(s));
        // 2 psi'' - 4n psi' - W'(psi) = g'(s) - 4n sqrt(g) - W'(s)
        prof.margins[j] =
            C1 * (1.0 - 0.5 * p.gamma) * std::pow(s, -0.5 * p.gamma) - 4.0 * n * std::sqrt(g(s));
    }
    prof.margins[0] = prof.margins[1];  // margin diverges to +inf at the endpoint
    prof.t_knots["t0"] = t0;
    prof.s_knots["s0"] = s0;
    prof.s_knots["C0"] = std::sqrt(3.0 * C1);
    finish_certification(prof);
    if (prof.vals.back() > 1.0 || prof.derivs.back() > std::sqrt(3.0 * C1)) {
        prof.certified = false;
        if (prof.first_violation < 0)
            prof.first_violation = static_cast<std::ptrdiff_t>(nt - 1);
    }
    return prof;
}

Profile1D barrier_lemma2(const PotentialParams& p, int n, double K, double t_step) {
    if (n < 1) throw std::domain_error("barrier_lemma2: dimension must be >= 1");
    const double s0 = std::pow(p.c_gamma, 1.0 / p.gamma);  // W(s0) = 1
    const double t0 = phi_inverse(p, s0);
    const double C0 = std::sqrt(24.0 * n);  // sqrt(3 * 8n), growth constant of lemma1

    // q'' + 2n q' = -1, q(t0) = 0, q'(1) = 0, q increasing on [t0, 1]
    const double A = std::exp(2.0 * n * (1.0 - t0)) / (2.0 * n);
    const auto qp = [&](double t) { return A * std::exp(-2.0 * n * (t - t0)) - 1.0 / (2.0 * n); };
    const auto q = [&](double t) {
        return (A / (2.0 * n)) * (1.0 - std::exp(-2.0 * n * (t - t0))) - (t - t0) / (2.0 * n);
    };

    const auto build = [&](double Kv) {
        const std::size_t nt =
            std::max<std::size_t>(3, static_cast<std::size_t>(std::llround(1.0 / t_step)) + 1);
        Profile1D prof;
        prof.params = p;
        prof.ts.resize(nt);
        prof.vals.resize(nt);
        prof.derivs.resize(nt);
        prof.margins.assign(nt, 0.0);
        for (std::size_t j = 0; j < nt; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(nt - 1);
            prof.ts[j] = t;
            const double phi = exact_phi(p, t);
            if (t <= t0) {
                prof.vals[j] = phi;
                prof.derivs[j] = exact_phi_prime(p, t);
                prof.margins[j] = 0.0;  // inequality applies on (t0, 1]
            } else {
                const double psi = phi + Kv * q(t);
                prof.vals[j] = psi;
                prof.derivs[j] = exact_phi_prime(p, t) + Kv * qp(t);
                // W'(psi) - (2 psi'' + 4n psi')
                //   = [W'(psi) - W'(phi)] - 4n phi' + 2K
                prof.margins[j] = eval_Wprime(p, psi) - eval_Wprime(p, phi) -
                                  4.0 * n * exact_phi_prime(p, t) + 2.0 * Kv;
            }
        }
        prof.t_knots["t0"] = t0;
        prof.s_knots["s0"] = s0;
        prof.s_knots["psi_end_target"] = 2.0 * C0;
        finish_certification(prof);
        if (prof.vals.back() < 2.0 * C0) {
            prof.certified = false;
            if (prof.first_violation < 0)
                prof.first_violation = static_cast<std::ptrdiff_t>(nt - 1);
        }
        return prof;
    };

    if (K > 0.0) return build(K);
    for (double Kv = 1.0; Kv <= (1 << 20); Kv *= 2.0) {
        Profile1D prof = build(Kv);
        if (prof.certified) {
            prof.s_knots["K"] = Kv;
            return prof;
        }
    }
    throw std::runtime_error("barrier_lemma2: no power-of-two K certifies the profile");
}

Profile1D barrier_lemma4(const PotentialParams& p, int n, double M, double t_step) {
    if (n < 1) throw std::domain_error("barrier_lemma4: dimension must be >= 1");
    if (!(M > 1.0)) throw std::domain_error("barrier_lemma4: need M > 1");
    const double Cn = 8.0 * n;
    const double s0 = std::pow(p.c_gamma, 1.0 / p.gamma);        // W(s0) = 1
    const double s1 = std::pow(p.c_gamma / M, 1.0 / p.gamma);    // W(s1) = M
    const double s2 = std::pow(4.0 * p.c_gamma, 1.0 / p.gamma);  // W(s2) = 1/4
    const double e = 1.0 - 0.5 * p.gamma;
    if (std::pow(s1, e) < 0.8)
        throw std::domain_error("barrier_lemma4: s1^(1-gamma/2) not near 1, gamma not in range");

    const double shift = std::pow(s1, e);
    const auto g = [&](double s) {
        double v = eval_W(p, s);
        if (s >= s1) v += -0.5 + Cn * (std::pow(s, e) - shift);
        return v;
    };
    if (!(g(s2) < 0.0))
        throw std::runtime_error("barrier_lemma4: g has no zero crossing in [s0, s2]");
    double lo = s0, hi = s2;  // g(s0) >= 1/2 > 0 > g(s2)
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    const double sigma = 0.5 * (lo + hi);

    const double t1 = phi_inverse(p, s1);
    // rising arc above s1, with the sqrt singularity at sigma removed by
    // s = sigma - w^2; near w = 0 the quotient degenerates to 0/0 at
    // rounding level, so switch to the factored limit 2/sqrt(-g'(sigma))
    const double gps = eval_Wprime(p, sigma) + Cn * e * std::pow(sigma, e - 1.0);
    const double gpp = p.gamma * (p.gamma + 1.0) * p.c_gamma * std::pow(sigma, -p.gamma - 2.0) +
                       Cn * e * (e - 1.0) * std::pow(sigma, e - 2.0);
    const double w1 = std::sqrt(sigma - s1);
    const auto warc = [&](double w) {
        // direct evaluation of g(sigma - w^2) cancels to rounding noise
        // near the crossing; the Taylor form there is exact to O(w^4)
        if (w < 1e-3 * w1) return 2.0 / std::sqrt(-gps + 0.5 * gpp * w * w);
        double v = g(sigma - w * w);
        if (v <= 0.0) v = -gps * w * w;
        return 2.0 * w / std::sqrt(v);
    };

    // cumulative arc time from s1, tabulated in w (w = w1 is s1, w = 0 is sigma)
    const std::size_t narc = 2048;
    std::vector<double> wt(narc + 1), at(narc + 1, 0.0);
    for (std::size_t j = 0; j <= narc; ++j)
        wt[j] = w1 * static_cast<double>(narc - j) / static_cast<double>(narc);
    for (std::size_t j = 1; j <= narc; ++j)
        at[j] = at[j - 1] + integrate(warc, wt[j], wt[j - 1], 1e-15);
    const double t_sigma = t1 + at[narc];

    const std::size_t nt =
        std::max<std::size_t>(3, static_cast<std::size_t>(std::llround(1.0 / t_step)) + 1);
    Profile1D prof;
    prof.params = p;
    prof.ts.resize(nt);
    prof.vals.resize(nt);
    prof.derivs.resize(nt);
    prof.margins.assign(nt, 0.0);

    // margin: min over the properties that apply at the sampled value
    const auto margin_at = [&](double s) {
        double m = 1e300;
        if (s > s1 && s < sigma) {
            const double m2 = Cn * e * std::pow(s, -0.5 * p.gamma) - 8.0 * n * std::sqrt(g(s));
            m = std::min(m, m2);
        }
        if (s > 0.0 && s <= s0) {
            const double W = eval_W(p, s);
            m = std::min(m, std::min(g(s) - 0.5 * W, W - g(s)));
        }
        return m == 1e300 ? 0.0 : m;
    };

    for (std::size_t j = 0; j < nt; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(nt - 1);
        prof.ts[j] = t;
        double s;
        if (t <= t1) {
            s = exact_phi(p, t);
            prof.derivs[j] = exact_phi_prime(p, t);
        } else if (t >= t_sigma) {
            s = sigma;
            prof.derivs[j] = 0.0;
        } else {
            // locate the arc cell, then bisect within it
            const double ta = t - t1;
            auto it = std::upper_bound(at.begin(), at.end(), ta);
            std::size_t k = it == at.begin() ? 0 : static_cast<std::size_t>(it - at.begin()) - 1;
            if (k >= narc) k = narc - 1;
            const double frac = (ta - at[k]) / std::max(at[k + 1] - at[k], 1e-300);
            double w = wt[k] + frac * (wt[k + 1] - wt[k]);
            // Newton on the cumulative arc time, d(arc)/dw = -warc
            for (int nw = 0; nw < 4; ++nw) {
                w = std::clamp(w, wt[k + 1], wt[k]);
                const double tm = at[k] + integrate(warc, w, wt[k], 1e-16);
                if (warc(w) > 0.0) w += (tm - ta) / warc(w);
            }
            w = std::clamp(w, 0.0, w1);
            s = sigma - w * w;
            prof.derivs[j] = std::sqrt(std::max(g(s), 0.0));
        }
        prof.vals[j] = s;
        prof.margins[j] = j == 0 ? 0.0 : margin_at(s);
    }
    prof.t_knots["t1"] = t1;
    prof.t_knots["t_sigma"] = t_sigma;
    prof.s_knots["s0"] = s0;
    prof.s_knots["s1"] = s1;
    prof.s_knots["s2"] = s2;
    prof.s_knots["sigma"] = sigma;
    prof.s_knots["arc_length"] = t_sigma;
    finish_certification(prof);
    if (t_sigma > 0.25) {  // psi must be constant outside an interval of length 1/4
        prof.certified = false;
        if (prof.first_violation < 0) prof.first_violation = 0;
    }
    return prof;
}

}  // namespace ap
