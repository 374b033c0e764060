#ifndef MOPROX_IO_HPP
#define MOPROX_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "moprox/problem.hpp"
#include "moprox/realset.hpp"

namespace moprox {

using nlohmann::json;

inline constexpr const char* kToolVersion = "moprox 0.1.0";
inline constexpr const char* kSchemaVersion = "1";

/// Parse/validation failure of a problem file or report. Maps to exit code 1.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json expr_to_json(const Expr& e);
ExprPtr expr_from_json(const json& j, int dim);

json function_to_json(const PiecewiseFunction& f);
PiecewiseFunction function_from_json(const json& j, int dim);

json constraint_to_json(const ConstraintSet& c);
ConstraintSet constraint_from_json(const json& j, int dim);

json realset_to_json(const RealSet1D& s);

struct Regularization {
    Vec center;
    double lambda = 1.0;
    Vec upsilon;
};

/// Versioned problem file: objectives, constraint set, optional
/// regularization block, optional expected-results block with provenance.
struct ProblemFile {
    std::string version = kSchemaVersion;
    std::string name;
    int dimension = 1;
    VectorFunction F;
    ConstraintSet omega = ConstraintSet::whole_space(1);
    std::optional<Regularization> regularization;
    json expected;  // carried through untouched

    MOProblem problem() const { return MOProblem{F, omega, name}; }
    RegularizedProblem regularized() const;
};

ProblemFile problem_from_json(const json& j);
json problem_to_json(const ProblemFile& p);
ProblemFile load_problem(const std::string& path);

struct RunReport {
    std::string command;
    std::string inputs_digest;
    json outputs;
    double wall_time_s = 0.0;
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;

    json to_json() const;
    static RunReport from_json(const json& j);
    bool operator==(const RunReport& o) const = default;
};

/// FNV-1a digest of the canonical input bytes.
std::string digest_hex(const std::string& bytes);

/// Write-then-rename so report files appear atomically.
void atomic_write(const std::string& path, const std::string& contents);

}  // namespace moprox

#endif
