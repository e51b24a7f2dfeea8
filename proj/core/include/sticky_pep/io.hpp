#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sticky_pep/dynamics.hpp"
#include "sticky_pep/state.hpp"

namespace sticky_pep {

/// State CSV format: row 1 masses, row 2 positions, row 3 velocities.
/// Rows beyond the third are cached data and are ignored.
ParticleState parse_state_csv(std::istream& in);
ParticleState load_state(const std::filesystem::path& path);

/// Serializes with 17 significant digits so load_state round-trips exactly.
void write_state_csv(const ParticleState& state, std::ostream& out);
void save_state(const ParticleState& state, const std::filesystem::path& path);

/// Masses + positions file for velocity synthesis: row 1 masses, row 2
/// positions; any further rows are ignored.
std::pair<std::vector<double>, std::vector<double>> parse_masses_positions(std::istream& in);
std::pair<std::vector<double>, std::vector<double>> load_masses_positions(
    const std::filesystem::path& path);

/// One self-describing JSON record per line: each event, then the outcome.
void write_event_log(const EventLog& log, std::ostream& out);

std::string outcome_to_string(const Outcome& outcome);

/// Decimal with 17 significant digits (shortest exact round trip).
std::string format_double(double value);

}  // namespace sticky_pep
