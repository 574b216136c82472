#pragma once

// Snapshot and history writers/readers.

#include <iosfwd>
#include <string>
#include <vector>

#include "cppm/config.hpp"
#include "cppm/simulation.hpp"
#include "cppm/snapshot.hpp"

namespace cppm {

/// CSV with a header row and one point per row, 17 significant digits.
void write_snapshot_csv(const Snapshot& s, const std::string& path);
/// Legacy ASCII VTK polydata point cloud carrying the same fields.
void write_snapshot_vtk(const Snapshot& s, const std::string& path);
/// Writes `<stem>.csv` and/or `<stem>.vtk` per format.
void write_snapshot(const Snapshot& s, const std::string& stem, OutputFormat format);

Snapshot read_snapshot_csv(const std::string& path);

/// Reads the POINT_DATA payload of a file written by write_snapshot_vtk.
Snapshot read_snapshot_vtk(const std::string& path);

const char* history_header();
void write_history_row(std::ostream& os, const HistoryRow& row);
std::vector<HistoryRow> read_history_csv(const std::string& path);

}  // namespace cppm
