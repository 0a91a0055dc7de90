#ifndef MIXEDSCORE_IO_HPP
#define MIXEDSCORE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "mixedscore/dcmm.hpp"
#include "mixedscore/detect.hpp"
#include "mixedscore/membership.hpp"

namespace mixedscore {

/// %.10g, the precision used for every float written by this library.
std::string format_real(double v);

/// CSV "node,pi_1,...,pi_K,label" with original node labels and one-based
/// argmax labels.
void write_membership_csv(std::ostream& out, const MembershipMatrix<double>& m,
                          const std::vector<std::int64_t>& node_labels);

nlohmann::ordered_json membership_json(const MembershipMatrix<double>& m,
                                       const std::vector<std::int64_t>& node_labels);

nlohmann::ordered_json diagnostics_json(const Diagnostics& d);

/// A membership or label file keyed by node id. Either column set may be absent.
struct MembershipTable {
    std::vector<std::int64_t> nodes;
    std::optional<Eigen::MatrixXd> pi;
    std::optional<LabelVector> labels;
};

/// Reads "node,pi_1,...,pi_K[,label]" or "node,label". The header is
/// optional; without one, two columns mean node,label and more mean
/// node,pi_1,...,pi_K.
MembershipTable read_membership_table(std::istream& in);
MembershipTable read_membership_table(const std::filesystem::path& path);

/// Reorders `table` so its nodes follow `order`. Throws ValidationError when
/// the node sets differ.
MembershipTable align_nodes(const MembershipTable& table, const std::vector<std::int64_t>& order);

/// CSV "experiment,grid_param,grid_value,method,mean_error,sd_error,repetitions,seed".
void write_results_csv(std::ostream& out, const std::vector<GridResult>& results);

nlohmann::ordered_json results_json(const std::vector<GridResult>& results);

/// Writes to a sibling temporary file and renames it over `path`, so a
/// failed run never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace mixedscore

#endif  // MIXEDSCORE_IO_HPP
