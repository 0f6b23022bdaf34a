#pragma once

#include <string>

#include "pparab/diff_ops.hpp"
#include "pparab/grid.hpp"
#include "pparab/solver.hpp"

namespace pparab {

/// CSV layout: one header line `nx,ny,hx,hy,x0,y0`, then ny rows of nx
/// comma-separated values (row-major). Values are printed with shortest
/// round-trip formatting, so write -> read is lossless.
void write_field_csv(const std::string& path, const ScalarField& f, const Grid2D& g);
std::pair<ScalarField, Grid2D> read_field_csv(const std::string& path);

/// Flat binary layout: magic "PPF1", int32 nx, ny, doubles hx, hy, x0, y0,
/// then nx*ny doubles row-major.
void write_field_bin(const std::string& path, const ScalarField& f, const Grid2D& g);
std::pair<ScalarField, Grid2D> read_field_bin(const std::string& path);

/// Trajectory: magic "PPT1", the field header, int32 n_slices, doubles
/// t_first, dt_slice, then the slices back to back.
void write_trajectory(const std::string& path, const SpaceTimeField& traj);
SpaceTimeField read_trajectory(const std::string& path);

/// Multi-column CSV of the derived quantities: node coordinates first, then
/// one column per field, names fixed by the type definition.
void write_derived_csv(const std::string& path, const DerivedFields& d, const Grid2D& g);

/// Writes to `path` + ".tmp" then renames, so failures leave no partial file.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace pparab
