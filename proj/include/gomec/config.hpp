#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

/**
 * @file
 * Scenario configuration for the goal-oriented edge inference simulator.
 *
 * Every quantity is stored in SI units (W, Hz, s, J, bits, cycles). The JSON
 * reader also accepts human units through suffixed keys (p_max_dbm,
 * bandwidth_mhz, rtt_ms, ...) and converts them once at parse time. The
 * writer always emits the SI keys.
 */

namespace gomec
{

/// Saturating stand-in for an unbounded delay or energy.
inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

inline bool
IsInfinite(double v)
{
    return v == kInfinite;
}

double DbmToWatt(double dbm);
double WattToDbm(double watt);

/// Generic log-distance law: a + b*log10(d/1 m) + c*log10(f/1 GHz), in dB.
struct PathLossModel
{
    double a_db = 32.4;
    double b_db = 21.0;
    double c_db = 20.0;
};

enum class FadingModel
{
    Rayleigh,
    None
};

struct RadioConfig
{
    double carrier_freq = 3.5e9; ///< Hz
    double bandwidth = 10e6;     ///< Hz, total uplink band of the AP
    double noise_psd = 0.0;      ///< W/Hz, set from -174 dBm/Hz by DefaultScenario()
    double p_max = 0.1;          ///< W
    double n_bits = 24576;       ///< one raw 32x32x3 8-bit image
    double ber_target = 1e-3;
    double cell_radius = 150.0; ///< m
    double min_distance = 10.0; ///< m
    PathLossModel pathloss;
    FadingModel fading = FadingModel::Rayleigh;
    std::optional<double> fixed_distance; ///< m; replaces the disk-uniform drop
    double shadowing_std_db = 0.0;
};

struct MehConfig
{
    double f_max = 4.5e9; ///< cycles/s
    double kappa = 1e-27; ///< J s^2 / cycles^3
    double alpha = 1.0;
    double beta_max = 1.0;
    bool beta_deterministic = false;
    double workload_cycles = 2e8;
};

struct BackhaulConfig
{
    double rtt = 0.0; ///< s
    bool helper_present = true;
};

struct GoalSpec
{
    double d_max = 0.1; ///< s
};

enum class InferenceMode
{
    Standalone,
    Ensemble
};

enum class OracleKind
{
    Perfect,
    Synthetic,
    Empirical
};

struct SyntheticOracleParams
{
    double a_p_clean = 0.88;
    double a_h_clean = 0.88;
    double joint_clean = 0.82;
    double tie_gain = 0.5;
    double ber_knee = 1e-3;
    double ber_floor = 1e-1;
    double chance_level = 0.1;
};

struct OracleConfig
{
    OracleKind kind = OracleKind::Synthetic;
    SyntheticOracleParams synthetic;
    std::string manifest; ///< score-table manifest path (empirical only)
};

enum class CiMethod
{
    Normal,
    ClopperPearson
};

struct ScenarioConfig
{
    InferenceMode mode = InferenceMode::Standalone;
    RadioConfig radio;
    MehConfig primary;
    std::optional<MehConfig> helper;
    BackhaulConfig backhaul;
    GoalSpec goal;
    OracleConfig oracle;
    int num_devices = 1;
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    CiMethod ci_method = CiMethod::Normal;
};

/// Parameters of the reference evaluation scenario: 150 m cell at 3.5 GHz,
/// 10 MHz, -174 dBm/Hz, 20 dBm device, two 4.5 GHz MEHs, 100 ms deadline.
ScenarioConfig DefaultScenario();

/// Per-device share of a multi-device scenario (bandwidth / K, alpha / K).
RadioConfig DeviceRadio(const ScenarioConfig& cfg);
MehConfig DeviceMeh(const MehConfig& meh, int num_devices);

struct Violation
{
    std::string path;
    std::string message;

    bool operator==(const Violation&) const = default;
};

std::vector<Violation> Validate(const ScenarioConfig& cfg);

/// Thrown for input that cannot be turned into a config at all (syntax,
/// missing file) and by callers that refuse an invalid config.
class ConfigError : public std::runtime_error
{
  public:
    explicit ConfigError(const std::string& what,
                         std::vector<Violation> violations = {})
        : std::runtime_error(what),
          m_violations(std::move(violations))
    {
    }

    const std::vector<Violation>& Violations() const
    {
        return m_violations;
    }

  private:
    std::vector<Violation> m_violations;
};

/**
 * Read a config from JSON. Keys absent from the document keep their
 * DefaultScenario() value. Unknown keys, wrong types and conflicting unit
 * variants (p_max_w together with p_max_dbm) are appended to @p violations;
 * the returned config is only meaningful when no violation was added.
 */
ScenarioConfig ConfigFromJson(const nlohmann::json& doc, std::vector<Violation>& violations);

/// Serialise with SI keys only. Doubles are written shortest-round-trip.
nlohmann::json ConfigToJson(const ScenarioConfig& cfg);

/// Load, parse and validate. Throws ConfigError carrying all violations.
ScenarioConfig LoadConfig(const std::string& path);

std::string ToString(InferenceMode mode);
std::optional<InferenceMode> ParseInferenceMode(const std::string& s);

} // namespace gomec
