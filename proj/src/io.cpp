#include "mixedscore/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "mixedscore/errors.hpp"

namespace mixedscore {

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_membership_csv(std::ostream& out, const MembershipMatrix<double>& m,
                          const std::vector<std::int64_t>& node_labels) {
    if (node_labels.size() != static_cast<std::size_t>(m.size()))
        throw ValidationError("node label count does not match membership rows");
    out << "node";
    for (Eigen::Index k = 1; k <= m.K(); ++k) out << ",pi_" << k;
    out << ",label\n";
    const auto labels = hard_labels(m);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        out << node_labels[i];
        for (Eigen::Index k = 0; k < m.K(); ++k) out << ',' << format_real(m.pi(i, k));
        out << ',' << labels[i] << '\n';
    }
}

nlohmann::ordered_json membership_json(const MembershipMatrix<double>& m,
                                       const std::vector<std::int64_t>& node_labels) {
    const auto labels = hard_labels(m);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        std::vector<double> pi;
        for (Eigen::Index k = 0; k < m.K(); ++k) pi.push_back(m.pi(i, k));
        rows.push_back({{"node", node_labels[i]}, {"pi", pi}, {"label", labels[i]}});
    }
    return {{"K", m.K()}, {"nodes", rows}};
}

nlohmann::ordered_json diagnostics_json(const Diagnostics& d) {
    std::vector<double> eig(d.eigenvalues.data(), d.eigenvalues.data() + d.eigenvalues.size());
    return {{"tau", d.tau},
            {"T_n", d.T_n},
            {"M", d.M},
            {"eigenvalues", eig},
            {"signal_weakness", d.signal_weakness},
            {"vh_objective", d.vh_objective},
            {"vh_iterations", d.vh_iterations},
            {"flipped_rows", d.flipped_rows},
            {"fallback_rows", d.fallback_rows}};
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

template <typename T>
bool parse(std::string_view s, T& value) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size();
}

enum class Column { Node, Pi, Label };

}  // namespace

MembershipTable read_membership_table(std::istream& in) {
    MembershipTable t;
    std::vector<Column> layout;
    std::vector<std::vector<double>> pi_rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_csv(text);

        if (layout.empty()) {
            std::int64_t probe;
            if (!parse(fields[0], probe)) {
                // Header row.
                for (std::size_t c = 0; c < fields.size(); ++c) {
                    const auto f = fields[c];
                    if (c == 0 && f == "node") layout.push_back(Column::Node);
                    else if (c > 0 && f.substr(0, 3) == "pi_") layout.push_back(Column::Pi);
                    else if (c > 0 && f == "label") layout.push_back(Column::Label);
                    else throw ParseError("unrecognized column '" + std::string(f) + "'", line_no);
                }
                continue;
            }
            layout.push_back(Column::Node);
            const Column rest = fields.size() == 2 ? Column::Label : Column::Pi;
            for (std::size_t c = 1; c < fields.size(); ++c) layout.push_back(rest);
        }
        if (fields.size() != layout.size())
            throw ParseError("expected " + std::to_string(layout.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);

        std::vector<double> pi;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            switch (layout[c]) {
                case Column::Node: {
                    std::int64_t node;
                    if (!parse(fields[c], node)) throw ParseError("bad node id '" + std::string(fields[c]) + "'", line_no);
                    t.nodes.push_back(node);
                    break;
                }
                case Column::Pi: {
                    double v;
                    if (!parse(fields[c], v)) throw ParseError("bad membership weight '" + std::string(fields[c]) + "'", line_no);
                    pi.push_back(v);
                    break;
                }
                case Column::Label: {
                    int label;
                    if (!parse(fields[c], label)) throw ParseError("bad label '" + std::string(fields[c]) + "'", line_no);
                    if (!t.labels) t.labels.emplace();
                    t.labels->push_back(label);
                    break;
                }
            }
        }
        if (!pi.empty()) pi_rows.push_back(std::move(pi));
    }
    if (t.nodes.empty()) throw ValidationError("membership file contains no rows");
    if (!pi_rows.empty()) {
        const auto K = static_cast<Eigen::Index>(pi_rows.front().size());
        Eigen::MatrixXd pi(pi_rows.size(), K);
        for (std::size_t i = 0; i < pi_rows.size(); ++i)
            for (Eigen::Index k = 0; k < K; ++k) pi(i, k) = pi_rows[i][k];
        t.pi = std::move(pi);
    }
    return t;
}

MembershipTable read_membership_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    return read_membership_table(in);
}

MembershipTable align_nodes(const MembershipTable& table, const std::vector<std::int64_t>& order) {
    if (table.nodes.size() != order.size())
        throw ValidationError("node counts differ: " + std::to_string(table.nodes.size()) + " vs " +
                              std::to_string(order.size()));
    std::map<std::int64_t, std::size_t> index;
    for (std::size_t i = 0; i < table.nodes.size(); ++i)
        if (!index.emplace(table.nodes[i], i).second)
            throw ValidationError("duplicate node id " + std::to_string(table.nodes[i]));
    MembershipTable out;
    out.nodes = order;
    if (table.pi) out.pi.emplace(order.size(), table.pi->cols());
    if (table.labels) out.labels.emplace(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto it = index.find(order[i]);
        if (it == index.end()) throw ValidationError("node " + std::to_string(order[i]) + " missing from file");
        if (table.pi) out.pi->row(i) = table.pi->row(it->second);
        if (table.labels) (*out.labels)[i] = (*table.labels)[it->second];
    }
    return out;
}

void write_results_csv(std::ostream& out, const std::vector<GridResult>& results) {
    out << "experiment,grid_param,grid_value,method,mean_error,sd_error,repetitions,seed\n";
    for (const auto& r : results)
        out << r.experiment << ',' << r.grid_param << ',' << format_real(r.grid_value) << ',' << r.method << ','
            << format_real(r.mean_error) << ',' << format_real(r.sd_error) << ',' << r.repetitions << ',' << r.seed
            << '\n';
}

nlohmann::ordered_json results_json(const std::vector<GridResult>& results) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json row = {{"experiment", r.experiment},
                                      {"grid_param", r.grid_param},
                                      {"grid_value", r.grid_value},
                                      {"method", r.method},
                                      {"mean_error", r.valid ? nlohmann::ordered_json(r.mean_error) : nullptr},
                                      {"sd_error", r.valid ? nlohmann::ordered_json(r.sd_error) : nullptr},
                                      {"repetitions", r.repetitions},
                                      {"seed", r.seed},
                                      {"errors", r.errors}};
        if (r.clipped_entries) row["clipped_entries"] = r.clipped_entries;
        if (!r.note.empty()) row["note"] = r.note;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw ValidationError("failed writing '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace mixedscore
