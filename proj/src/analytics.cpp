#include "vstream/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace vstream
{

namespace
{

// E[X^2 | X <= R] for X ~ Exp(rate).
double truncated_exponential_second(double rate, double cap)
{
    const double x = rate * cap;
    if (x < 1e-3)
        return cap * cap * (1.0 / 3.0 - x / 12.0 + x * x / 360.0 + x * x * x / 720.0);
    const double p = std::exp(-x);
    const double inv = 1.0 / rate;
    return (2.0 * inv * inv - p * (cap * cap + 2.0 * cap * inv + 2.0 * inv * inv)) / (-std::expm1(-x));
}

} // namespace

double expected_interarrival(const ScenarioConfig& cfg)
{
    return 1.0 / (cfg.rho2 * (cfg.v1 + cfg.v2));
}

CarrierCountEstimate expected_carrier_count(const ScenarioConfig& cfg, double effective_length)
{
    const double inter = expected_interarrival(cfg);
    CarrierCountEstimate e;
    e.expected = std::max(0.0, effective_length) / (cfg.v1 * inter);
    e.approximation_valid = effective_length / cfg.v1 >= 10.0 * inter;
    return e;
}

double truncated_exponential_mean(double rate, double cap)
{
    if (cap <= 0.0)
        return 0.0;
    const double x = rate * cap;
    if (x < 1e-3)
        return cap * (0.5 - x / 12.0 + x * x * x / 720.0);
    return 1.0 / rate - cap * std::exp(-x) / (-std::expm1(-x));
}

double expected_min_exponential(double rate, double cap)
{
    if (cap <= 0.0)
        return 0.0;
    const double below = -std::expm1(-rate * cap); // Pr{l < cap}
    const double above = std::exp(-rate * cap);    // Pr{l >= cap}
    return below * truncated_exponential_mean(rate, cap) + above * cap;
}

double expected_contact_data_onehop(const ScenarioConfig& cfg)
{
    return expected_min_exponential(cfg.rho2, 2.0 * cfg.R_v) * cfg.r_v / (cfg.v1 + cfg.v2);
}

double ThroughputReport::total_mass() const
{
    double m = 0.0;
    for (const auto& c : cases)
        m += c.mass;
    return m;
}

void ThroughputReport::attach_simulation(double mean, double ci_half_width)
{
    sim_mean = mean;
    sim_ci = ci_half_width;
    relative_error = analytic > 0.0 ? std::abs(mean - analytic) / analytic : std::numeric_limits<double>::quiet_NaN();
}

ThroughputReport throughput_onehop(const ScenarioConfig& cfg)
{
    const double T = cfg.period();
    const double from_rsu = 2.0 * cfg.R_u * cfg.r_u / cfg.v1;
    const auto count = expected_carrier_count(cfg, cfg.d - 2.0 * cfg.R_u);

    ThroughputReport r;
    r.analytic = (from_rsu + count.expected * expected_contact_data_onehop(cfg)) / T;
    r.cases.push_back({"one-hop", r.analytic, 1.0});
    if (!count.approximation_valid)
        r.warnings.emplace_back("V2V phase shorter than 10 mean carrier inter-arrivals; E[N] approximation is loose");
    return r;
}

ThroughputReport throughput_relay_aided(const ScenarioConfig& cfg)
{
    ThroughputReport r;
    r.analytic = 2.0 * cfg.R_u * cfg.r_u / cfg.d;
    r.cases.push_back({"relay-aided", r.analytic, 1.0});
    return r;
}

ClusterMoments cluster_size_moments(double rho1, double R_v)
{
    if (!(R_v > 0.0))
        return {};
    const double x = rho1 * R_v;
    // Per side: K accepted gaps, Pr{K = k} = (1 - p)^k p with p = e^(-x).
    const double mean_count = std::expm1(x);
    const double var_count = std::expm1(x) * std::exp(x);
    const double gap_mean = truncated_exponential_mean(rho1, R_v);
    const double gap_var = truncated_exponential_second(rho1, R_v) - gap_mean * gap_mean;

    const double side_mean = mean_count * gap_mean;
    const double side_var = mean_count * gap_var + var_count * gap_mean * gap_mean;
    const double mean = 2.0 * side_mean;
    return {mean, 2.0 * side_var + mean * mean};
}

ClusterSizeModel ClusterSizeModel::from_moments(const ClusterMoments& m)
{
    ClusterSizeModel model;
    model.mean = m.mean;
    model.second_moment = m.second;
    const double var = m.second - m.mean * m.mean;
    if (var > 0.0 && m.mean > 0.0)
    {
        model.shape = m.mean * m.mean / var;
        model.scale = var / m.mean;
    }
    return model;
}

double cluster_size_pdf(double x, const ClusterSizeModel& model)
{
    const double k = model.shape;
    const double theta = model.scale;
    if (!(x > 0.0))
    {
        if (k < 1.0)
            return std::numeric_limits<double>::infinity();
        return k == 1.0 ? 1.0 / theta : 0.0;
    }
    const double log_pdf = (k - 1.0) * std::log(x) - x / theta - k * std::log(theta) - boost::math::lgamma(k);
    return std::exp(log_pdf);
}

double cluster_size_survival(double x, const ClusterSizeModel& model)
{
    if (!(x > 0.0))
        return 1.0;
    return boost::math::gamma_q(model.shape, x / model.scale);
}

double cluster_size_truncation(const ClusterSizeModel& model, double tail)
{
    return model.scale * boost::math::gamma_q_inv(model.shape, tail);
}

Thresholds cs_thresholds(const ScenarioConfig& cfg)
{
    Thresholds t;
    t.cs1 = 2.0 * cfg.R_u * cfg.r_u / (cfg.v2 * cfg.r_v) * (cfg.v1 + cfg.v2) - 2.0 * cfg.R_v;
    t.cs2 = (cfg.d - 2.0 * cfg.R_u) / cfg.r_u * cfg.r_v;
    return t;
}

std::string cluster_case(double cluster_size, const ScenarioConfig& cfg)
{
    const auto th = cs_thresholds(cfg);
    if (th.cs1 <= th.cs2)
    {
        if (cluster_size <= th.cs1)
            return "1.1";
        return cluster_size <= th.cs2 ? "1.2" : "1.3";
    }
    return cluster_size <= th.cs2 ? "2.1" : "2.2";
}

double throughput_cluster_conditional(double cluster_size, const ScenarioConfig& cfg)
{
    const auto th = cs_thresholds(cfg);
    const double T = cfg.period();
    const double vrel = cfg.v1 + cfg.v2;

    if (cluster_size > th.cs2)
    {
        // Relays alone keep the target busy until RSU2.
        const double from_rsu = 2.0 * cfg.R_u / cfg.v1 * cfg.r_u + (cfg.d - 2.0 * cfg.R_u) / cfg.v1 * cfg.r_v;
        return from_rsu / T;
    }

    const double from_rsu = (2.0 * cfg.R_u + cluster_size) / cfg.v1 * cfg.r_u;
    const double v2v_length = cfg.d - 2.0 * cfg.R_u - cluster_size * cfg.r_u / cfg.r_v;
    const double carriers = expected_carrier_count(cfg, v2v_length).expected;

    double per_carrier;
    if (cluster_size > th.cs1)
    {
        // The carrier's RSU2 download caps the contact.
        const double c1 = 2.0 * cfg.R_u * cfg.r_u * vrel / (cfg.r_v * cfg.v2);
        const double below = -std::expm1(-cfg.rho2 * c1);
        const double above = std::exp(-cfg.rho2 * c1);
        per_carrier = below * truncated_exponential_mean(cfg.rho2, c1) * cfg.r_v / vrel +
                      above * 2.0 * cfg.R_u / cfg.v2 * cfg.r_u;
    }
    else
    {
        per_carrier = expected_min_exponential(cfg.rho2, cluster_size + 2.0 * cfg.R_v) * cfg.r_v / vrel;
    }
    return (from_rsu + carriers * per_carrier) / T;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol)
{
    QuadratureResult r;
    if (!(b > a))
        return r;
    boost::math::quadrature::tanh_sinh<double> integrator;
    double l1 = 0.0;
    std::size_t levels = 0;
    r.value = integrator.integrate(f, a, b, rel_tol, &r.error, &l1, &levels);
    r.converged = r.error <= std::max(rel_tol * l1, 1e-300) * 10.0;
    return r;
}

ThroughputReport throughput_cluster(const ScenarioConfig& cfg)
{
    return throughput_cluster(cfg, ClusterSizeModel::from_moments(cluster_size_moments(cfg.rho1, cfg.R_v)));
}

ThroughputReport throughput_cluster(const ScenarioConfig& cfg, const ClusterSizeModel& model)
{
    ThroughputReport r;
    if (model.degenerate())
    {
        r.analytic = throughput_cluster_conditional(model.mean, cfg);
        r.cases.push_back({cluster_case(model.mean, cfg), r.analytic, 1.0});
        return r;
    }

    const auto th = cs_thresholds(cfg);
    const double inf = std::numeric_limits<double>::infinity();
    struct Piece
    {
        const char* label;
        double lo, hi;
    };
    std::vector<Piece> pieces;
    if (th.cs1 <= th.cs2)
        pieces = {{"1.1", 0.0, th.cs1}, {"1.2", th.cs1, th.cs2}, {"1.3", th.cs2, inf}};
    else
        pieces = {{"2.1", 0.0, th.cs2}, {"2.2", th.cs2, inf}};

    const double upper = cluster_size_truncation(model);
    auto pdf = [&](double x) { return cluster_size_pdf(x, model); };

    for (const auto& p : pieces)
    {
        const double lo = std::max(0.0, p.lo);
        const double hi = std::min(p.hi, upper);
        CaseTerm term{p.label, 0.0, 0.0};
        if (hi > lo)
        {
            auto mass = integrate(pdf, lo, hi);
            auto weighted = integrate([&](double x) { return throughput_cluster_conditional(x, cfg) * pdf(x); }, lo, hi);
            term.mass = mass.value;
            term.conditional = mass.value > 0.0 ? weighted.value / mass.value : 0.0;
            r.analytic += weighted.value;
            r.quadrature_error += weighted.error;
            r.converged = r.converged && mass.converged && weighted.converged;
        }
        r.cases.push_back(term);
    }
    if (!r.converged)
        r.warnings.push_back("quadrature did not reach tolerance; achieved absolute error " +
                             std::to_string(r.quadrature_error));
    return r;
}

} // namespace vstream
