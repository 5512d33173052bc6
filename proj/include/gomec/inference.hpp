#pragma once

#include "gomec/config.hpp"
#include "gomec/rng.hpp"

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gomec
{

/// Which MEHs execute a request.
enum class ExecutionMode
{
    StandalonePrimary,
    StandaloneHelper,
    Cooperative
};

std::string ToString(ExecutionMode mode);

/// Per-request inference values. theta_agg is the value that counts for the
/// goal: the aggregate when cooperative, otherwise the executing MEH's.
struct InferenceOutcome
{
    bool theta_p = false;
    std::optional<bool> theta_h;
    bool theta_agg = false;
    bool joint_clamped = false;
};

/// Accuracy after BER degradation: flat up to the knee, linear in log10(ber)
/// down to chance_level at the floor, flat beyond. knee == floor disables
/// the coupling entirely.
double DegradeAccuracy(double a_clean, double ber, const SyntheticOracleParams& params);

/// Cell probabilities of the (theta_p, theta_h) 2x2 table at a given BER.
struct JointTable
{
    double both;         ///< P(1, 1)
    double primary_only; ///< P(1, 0)
    double helper_only;  ///< P(0, 1)
    double neither;      ///< P(0, 0)
    bool clamped;        ///< joint had to be moved into the Frechet interval
};

JointTable SyntheticJoint(const SyntheticOracleParams& params, double ber);

/// Closed-form P(theta_agg = 1) of the synthetic oracle for a given mode.
double SyntheticSuccessProbability(const SyntheticOracleParams& params, double ber, ExecutionMode mode);

/// Draws exactly two uniforms per call so stream alignment does not depend
/// on the outcome.
InferenceOutcome SyntheticSample(RngStream& rng, const SyntheticOracleParams& params, double ber, ExecutionMode mode);

/// Raised while loading score files; the simulator never starts on a bad set.
class ScoreTableError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Scores of one classifier at one BER grid point, row-major
/// n_samples x n_classes.
struct ScoreTable
{
    std::string classifier_id;
    std::vector<double> scores;
};

struct ScoreGridPoint
{
    double ber;
    bool clean;
    ScoreTable primary;
    ScoreTable helper;
};

/**
 * Both classifiers' scores for the same corrupted realization of every test
 * sample, at each BER grid point.
 *
 * Manifest layout (paths relative to the manifest):
 *
 *     {
 *       "n_classes": 10,
 *       "classifiers": ["cnn_a", "cnn_b"],          // primary, helper
 *       "grid": [
 *         {"ber": 0.0, "clean": true,
 *          "files": {"cnn_a": "cnn_a_clean.csv", "cnn_b": "cnn_b_clean.csv"}},
 *         {"ber": 0.001, "files": {...}}
 *       ]
 *     }
 *
 * Each CSV has header sample_id,true_label,s0,...,s{C-1}, rows sorted by
 * sample_id, and every file carries the same sample ids and labels.
 */
class ScoreTableSet
{
  public:
    static ScoreTableSet Load(const std::string& manifest_path);

    std::size_t NumClasses() const
    {
        return m_num_classes;
    }

    std::size_t NumSamples() const
    {
        return m_labels.size();
    }

    const std::vector<ScoreGridPoint>& Grid() const
    {
        return m_grid;
    }

    std::span<const int> Labels() const
    {
        return m_labels;
    }

    /// Grid point closest to @p ber in log10 distance. The clean entry sits
    /// at log10(0) = -inf and is only chosen when no positive entry exists.
    std::size_t NearestGridIndex(double ber) const;

    std::span<const double> Row(const ScoreTable& table, std::size_t sample) const;

    /// Fraction of samples a classifier (or the score-sum ensemble) gets right
    /// at one grid point, by enumeration.
    double Accuracy(std::size_t grid_index, ExecutionMode mode) const;

    /// Build from in-memory data; validates like Load().
    ScoreTableSet(std::size_t num_classes,
                  std::vector<std::int64_t> sample_ids,
                  std::vector<int> labels,
                  std::vector<ScoreGridPoint> grid);

  private:
    void Check() const;

    std::size_t m_num_classes;
    std::vector<std::int64_t> m_sample_ids;
    std::vector<int> m_labels;
    std::vector<ScoreGridPoint> m_grid;
};

/// Index of the largest element; ties go to the lowest index.
std::size_t Argmax(std::span<const double> row);

/// Argmax of the elementwise sum of two score rows.
std::size_t ScoreSumArgmax(std::span<const double> a, std::span<const double> b);

InferenceOutcome EmpiricalSample(RngStream& rng, const ScoreTableSet& tables, double ber, ExecutionMode mode);

/// Source of per-trial inference values.
class InferenceOracle
{
  public:
    virtual ~InferenceOracle() = default;
    virtual InferenceOutcome Sample(RngStream& rng, double ber, ExecutionMode mode) const = 0;
};

/// Always correct. Isolates the delay side of the goal.
class PerfectOracle : public InferenceOracle
{
  public:
    InferenceOutcome Sample(RngStream& rng, double ber, ExecutionMode mode) const override;
};

class SyntheticOracle : public InferenceOracle
{
  public:
    explicit SyntheticOracle(SyntheticOracleParams params)
        : m_params(params)
    {
    }

    InferenceOutcome Sample(RngStream& rng, double ber, ExecutionMode mode) const override;

  private:
    SyntheticOracleParams m_params;
};

class EmpiricalOracle : public InferenceOracle
{
  public:
    explicit EmpiricalOracle(ScoreTableSet tables)
        : m_tables(std::move(tables))
    {
    }

    InferenceOutcome Sample(RngStream& rng, double ber, ExecutionMode mode) const override;

    const ScoreTableSet& Tables() const
    {
        return m_tables;
    }

  private:
    ScoreTableSet m_tables;
};

/// Builds the oracle named by the config; loads score tables for the
/// empirical kind (throws ScoreTableError on malformed files).
std::shared_ptr<const InferenceOracle> MakeOracle(const OracleConfig& cfg);

} // namespace gomec
