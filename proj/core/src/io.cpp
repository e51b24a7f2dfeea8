#include "sticky_pep/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sticky_pep {

namespace {

std::vector<double> parse_csv_row(const std::string& line, std::size_t row_number) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    std::size_t column = 0;
    while (std::getline(ss, cell, ',')) {
        ++column;
        const auto begin = cell.find_first_not_of(" \t\r");
        if (begin == std::string::npos) {
            std::ostringstream msg;
            msg << "state csv: empty cell at row " << row_number << ", column " << column;
            throw std::invalid_argument(msg.str());
        }
        const auto end = cell.find_last_not_of(" \t\r");
        const std::string trimmed = cell.substr(begin, end - begin + 1);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(trimmed, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != trimmed.size()) {
            std::ostringstream msg;
            msg << "state csv: cannot parse '" << trimmed << "' at row " << row_number << ", column "
                << column;
            throw std::invalid_argument(msg.str());
        }
        out.push_back(value);
    }
    return out;
}

// Rows past max_rows are cached data in this format and stay unparsed.
std::vector<std::vector<double>> parse_rows(std::istream& in, std::size_t max_rows) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t row_number = 0;
    while (rows.size() < max_rows && std::getline(in, line)) {
        ++row_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(parse_csv_row(line, row_number));
    }
    return rows;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path.string());
    return in;
}

nlohmann::json range_to_json(const IndexRange& range) {
    return {{"begin", range.begin}, {"end", range.end}};
}

}  // namespace

ParticleState parse_state_csv(std::istream& in) {
    auto rows = parse_rows(in, 3);
    if (rows.empty()) throw std::invalid_argument("state csv: missing masses row");
    if (rows.size() == 1) throw std::invalid_argument("state csv: missing positions row");
    if (rows.size() == 2) throw std::invalid_argument("state csv: missing velocity row");
    const auto& masses = rows[0];
    const auto& positions = rows[1];
    const auto& velocities = rows[2];
    if (masses.size() != positions.size() || masses.size() != velocities.size()) {
        throw std::invalid_argument("state csv: rows 1-3 must have equal length");
    }

    ParticleState state;
    state.particles.reserve(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i) {
        state.particles.push_back({masses[i], positions[i], velocities[i]});
    }
    require_valid(state);
    return state;
}

ParticleState load_state(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_state_csv(in);
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void write_state_csv(const ParticleState& state, std::ostream& out) {
    auto row = [&](auto field) {
        for (std::size_t i = 0; i < state.particles.size(); ++i) {
            if (i) out << ',';
            out << format_double(field(state.particles[i]));
        }
        out << '\n';
    };
    row([](const Particle& p) { return p.mass; });
    row([](const Particle& p) { return p.position; });
    row([](const Particle& p) { return p.velocity; });
}

void save_state(const ParticleState& state, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
    write_state_csv(state, out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::pair<std::vector<double>, std::vector<double>> parse_masses_positions(std::istream& in) {
    auto rows = parse_rows(in, 2);
    if (rows.empty()) throw std::invalid_argument("masses+positions csv: missing masses row");
    if (rows.size() == 1) throw std::invalid_argument("masses+positions csv: missing positions row");
    if (rows[0].size() != rows[1].size()) {
        throw std::invalid_argument("masses+positions csv: rows must have equal length");
    }
    return {rows[0], rows[1]};
}

std::pair<std::vector<double>, std::vector<double>> load_masses_positions(
    const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_masses_positions(in);
}

std::string outcome_to_string(const Outcome& outcome) {
    switch (outcome.kind) {
        case OutcomeKind::CollapsedAt: return "collapsed";
        case OutcomeKind::Diverges: return "diverges";
        case OutcomeKind::TruncatedAt: return "truncated";
    }
    return "unknown";
}

void write_event_log(const EventLog& log, std::ostream& out) {
    for (const auto& event : log.events) {
        nlohmann::json record;
        record["type"] = "event";
        record["t"] = event.time;
        record["h_before"] = event.hamiltonian_before;
        record["h_after"] = event.hamiltonian_after;
        auto& clusters = record["clusters"] = nlohmann::json::array();
        for (const auto& cluster : event.clusters) {
            nlohmann::json c = range_to_json(cluster.range);
            c["pre_velocities"] = cluster.pre_velocities;
            c["post_velocity"] = cluster.post_velocity;
            c["glancing"] = cluster.glancing;
            clusters.push_back(std::move(c));
        }
        out << record.dump() << '\n';
    }
    nlohmann::json summary;
    summary["type"] = "outcome";
    summary["outcome"] = outcome_to_string(log.outcome);
    if (!log.outcome.diverged()) summary["t"] = log.outcome.time;
    summary["events"] = log.events.size();
    summary["particles_left"] = log.final_state.size();
    out << summary.dump() << '\n';
}

}  // namespace sticky_pep
