#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swarmsim/error_models.hpp"
#include "swarmsim/geometry.hpp"
#include "swarmsim/random.hpp"
#include "swarmsim/robot.hpp"

namespace swarmsim {

/// Marks the computing robot itself in ComputeOutput::leader_choice.
inline constexpr std::size_t kSelf = std::numeric_limits<std::size_t>::max();

struct ComputeOutput {
    Point2 target;  // local frame, observer at origin
    std::optional<Color> new_color;
    std::optional<std::size_t> leader_choice;  // snapshot index or kSelf
    bool wants_random_move = false;
};

/// Everything a COMPUTE may read. Deliberately excludes names and global
/// coordinates.
struct ComputeInput {
    std::optional<Color> my_color;
    std::span<const PerceivedRobot> snapshot;
    double north = 0.0;  // compass heading in the local frame, error included
};

/// Canonical byte string of the algorithm-relevant inputs.
struct InputSetKey {
    std::string bytes;
    friend bool operator==(const InputSetKey&, const InputSetKey&) = default;
};

enum class Problem { Gathering, Convergence, Election };

std::string_view to_string(Problem p);

// ---------------------------------------------------------------------------
// Compute functions

/// Rendezvous by halving: target the perceived robot's midpoint.
ComputeOutput compute_midpoint(std::span<const PerceivedRobot> snapshot);

/// Midpoint rendezvous with weak local multiplicity detection.
ComputeOutput compute_midpoint_multiplicity(std::span<const PerceivedRobot> snapshot, bool gathered);

/// Centre of gravity of the perceived robots plus the observer.
ComputeOutput compute_cog(std::span<const PerceivedRobot> snapshot);

ComputeOutput compute_geometric_median_target(std::span<const PerceivedRobot> snapshot,
                                              double tolerance);

/// Fuel-efficient convergence for two luminous robots (WHITE / BLACK).
///
///   WHITE sees WHITE -> BLACK, go to the midpoint
///   WHITE sees BLACK -> BLACK, stay
///   BLACK sees BLACK -> WHITE, stay
///   BLACK sees WHITE -> BLACK, stay
///
/// Only the {WHITE, WHITE} view produces a move and it turns the mover
/// BLACK, so a robot is never targeted while it moves and every target lies
/// on the segment between the two robots.
ComputeOutput compute_fec(Color my_color, const PerceivedRobot& other);

struct ElectionParams {
    // Perpendicular escape length for the 3-robot equilateral case; unset
    // means 0.1 x the shortest side.
    std::optional<double> symmetry_break_step;
    // Angle / distance ties: exact equality when 0, banded otherwise.
    double epsilon = 0.0;
};

/// Leader of a 3-robot configuration as every robot would compute it:
/// the vertex with the strictly smallest interior angle, otherwise the
/// vertex opposite two equal smallest angles; none when all three match.
std::optional<std::size_t> geoleader_3(std::span<const Point2> positions, double epsilon = 0.0);

/// Leader of an n >= 4 configuration: strictly closest robot to the centre
/// of the smallest enclosing circle; none on ties.
std::optional<std::size_t> geoleader_n(std::span<const Point2> positions, double epsilon = 0.0);

/// Dispatches on size (3 -> angles, >= 4 -> enclosing circle).
std::optional<std::size_t> geoleader(std::span<const Point2> positions, double epsilon = 0.0);

/// One activation of the 3-robot election for robot `self_index`.
/// leader_choice indexes `positions`. Throws DegenerateConfiguration on
/// collinear or coincident robots.
ComputeOutput elect_leader_3(std::span<const Point2> positions, std::size_t self_index,
                             RandomStream& rng, const ElectionParams& params = {});

/// One activation of the n >= 4 election for robot `self_index`.
ComputeOutput elect_leader_n(std::span<const Point2> positions, std::size_t self_index,
                             RandomStream& rng, const ElectionParams& params = {});

struct ReliableElectionParams {
    ElectionParams election;
    VisionErrorSpec vision;  // the error model the robots know about
    int nb_tries = 0;
    // Upper bound of the scramble move length; unset means 10 x the error
    // magnitude (err, or err_dist for the relative models).
    std::optional<double> scramble_radius;
};

/// Error-aware election. `my_network[0]` is the computing robot (at the
/// local origin), the rest its snapshot. Re-runs the election nb_tries
/// times per robot on re-perturbed copies of the network; any disagreement
/// with the unperturbed result triggers a random scramble move.
/// leader_choice indexes my_network.
ComputeOutput reliable_election(std::span<const Point2> my_network,
                                const ReliableElectionParams& params, RandomStream& rng);

// ---------------------------------------------------------------------------
// Algorithm registry

struct AlgorithmConfig {
    std::string id = "midpoint";
    double median_tolerance = 1e-12;
    double cycle_quantum = 1e-12;
    ReliableElectionParams election;  // used by "election" and "reliable_election"
    Color fec_initial_color = kWhite;
    // "luminous" extension point: rows of (my color, seen color) -> (new
    // color, target rule) for two-robot transition tables.
    struct LuminousRow {
        std::uint8_t mine = 0;
        std::uint8_t seen = 0;
        std::uint8_t next = 0;
        enum class Target { Self, Midpoint, Other } target = Target::Self;
    };
    int palette = 0;
    std::vector<LuminousRow> luminous_table;
    Problem luminous_problem = Problem::Gathering;
};

/// Uniform interface the scheduler drives. Implementations must be pure
/// given the explicit random stream.
class Algorithm {
public:
    virtual ~Algorithm() = default;

    virtual std::string_view id() const = 0;
    virtual Problem problem() const = 0;
    /// Number of colours, 0 for oblivious algorithms.
    virtual int palette() const { return 0; }
    /// True when input sets range over a finite set.
    virtual bool finite_key_space() const = 0;
    /// Throws ConfigError when the network size is unsupported.
    virtual void validate_network_size(std::size_t n) const { (void)n; }
    virtual std::optional<Color> initial_color() const { return std::nullopt; }

    virtual ComputeOutput compute(const ComputeInput& in, RandomStream& rng) const = 0;
    virtual InputSetKey input_set(const ComputeInput& in) const = 0;
};

std::unique_ptr<Algorithm> make_algorithm(const AlgorithmConfig& config);

/// Ids accepted by make_algorithm.
std::vector<std::string> registered_algorithms();

/// Convenience wrapper over Algorithm::input_set. Throws RegistryError for
/// unknown ids.
InputSetKey input_set_of(const AlgorithmConfig& config, const ComputeInput& in);

/// True when every perceived robot coincides with the observer.
bool perceives_gathered(std::span<const PerceivedRobot> snapshot);

}  // namespace swarmsim

template <>
struct std::hash<swarmsim::InputSetKey> {
    std::size_t operator()(const swarmsim::InputSetKey& k) const noexcept {
        return std::hash<std::string>{}(k.bytes);
    }
};
