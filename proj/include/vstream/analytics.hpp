#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vstream/config.hpp"

// Closed-form throughput for one-hop and cluster-based cooperation, plus the
// gamma cluster-size model and the numerics they rely on.
namespace vstream
{

/// E[t_inter] = 1 / (rho2 (v1 + v2)).
double expected_interarrival(const ScenarioConfig& cfg);

struct CarrierCountEstimate
{
    double expected = 0.0;
    /// False when effective_length / v1 < 10 E[t_inter]; the renewal
    /// approximation is then outside its regime.
    bool approximation_valid = true;
};

/// E[N] ~ effective_length / (v1 E[t_inter]). One-hop uses d - 2 R_u.
CarrierCountEstimate expected_carrier_count(const ScenarioConfig& cfg, double effective_length);

/// E[l | l < cap] for l ~ Exp(rate); stable as rate * cap -> 0.
double truncated_exponential_mean(double rate, double cap);

/// E[min(l, cap)] written as Pr{l < cap} E[l | l < cap] + Pr{l >= cap} cap.
double expected_min_exponential(double rate, double cap);

/// Expected bits a one-hop carrier delivers to the target.
double expected_contact_data_onehop(const ScenarioConfig& cfg);

struct CaseTerm
{
    std::string label;
    double conditional = 0.0; // mass-weighted mean throughput inside the case (bit/s)
    double mass = 0.0;        // probability of the case
};

struct ThroughputReport
{
    double analytic = 0.0; // bit/s
    std::vector<CaseTerm> cases;
    double quadrature_error = 0.0;
    bool converged = true;
    std::vector<std::string> warnings;

    std::optional<double> sim_mean;
    std::optional<double> sim_ci; // 95% half-width
    std::optional<double> relative_error;

    double total_mass() const;
    void attach_simulation(double mean, double ci_half_width);
};

ThroughputReport throughput_onehop(const ScenarioConfig& cfg);

/// Relay baseline: only the RSU1 download, 2 R_u r_u / d.
ThroughputReport throughput_relay_aided(const ScenarioConfig& cfg);

struct ClusterMoments
{
    double mean = 0.0;   // E{C_s}
    double second = 0.0; // E{C_s^2}
};

/// Moments of the cluster length around a random vehicle: on each side the
/// number of accepted gaps is geometric with stop probability e^(-rho1 R_v)
/// and each accepted gap is Exp(rho1) truncated to (0, R_v].
ClusterMoments cluster_size_moments(double rho1, double R_v);

/// Gamma fit of the cluster length by moment matching.
struct ClusterSizeModel
{
    double mean = 0.0;
    double second_moment = 0.0;
    double shape = 0.0; // k
    double scale = 0.0; // theta

    static ClusterSizeModel from_moments(const ClusterMoments& m);
    /// Zero variance: all probability mass at `mean`.
    bool degenerate() const { return !(shape > 0.0 && scale > 0.0); }
};

/// x^(k-1) e^(-x/theta) / (theta^k Gamma(k)), evaluated in log space.
double cluster_size_pdf(double x, const ClusterSizeModel& model);

/// Pr{C_s > x} from the regularized upper incomplete gamma function.
double cluster_size_survival(double x, const ClusterSizeModel& model);

/// Point beyond which the gamma survival falls below `tail`.
double cluster_size_truncation(const ClusterSizeModel& model, double tail = 1e-10);

struct Thresholds
{
    double cs1 = 0.0; // supply cap starts binding
    double cs2 = 0.0; // V2V phase vanishes
};

Thresholds cs_thresholds(const ScenarioConfig& cfg);

/// Per-period throughput for a given cluster length, dispatched over the
/// supply-cap and relay-only regimes.
double throughput_cluster_conditional(double cluster_size, const ScenarioConfig& cfg);

/// Label of the regime a cluster length falls into ("1.1" ... "2.2").
std::string cluster_case(double cluster_size, const ScenarioConfig& cfg);

ThroughputReport throughput_cluster(const ScenarioConfig& cfg);
ThroughputReport throughput_cluster(const ScenarioConfig& cfg, const ClusterSizeModel& model);

struct QuadratureResult
{
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/// Adaptive double-exponential quadrature on a finite interval; copes with
/// integrable endpoint singularities such as the gamma pdf at 0 for k < 1.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

} // namespace vstream
