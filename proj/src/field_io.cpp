#include "pparab/field_io.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace pparab {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc()) throw std::runtime_error("field io: bad number '" + tok + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream is(line);
  while (std::getline(is, tok, ',')) out.push_back(tok);
  return out;
}

// all writers go through a temp file + rename so failures leave no partial file
void write_file_or_throw(const std::string& path, const std::string& content, bool binary) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("atomic rename failed for " + path + ": " + ec.message());
  }
}

}  // namespace

void write_field_csv(const std::string& path, const ScalarField& f, const Grid2D& g) {
  std::ostringstream os;
  os << g.nx << ',' << g.ny << ',' << format_double(g.hx) << ',' << format_double(g.hy) << ','
     << format_double(g.x0) << ',' << format_double(g.y0) << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) os << ',';
      os << format_double(f.at(i, j));
    }
    os << '\n';
  }
  write_file_or_throw(path, os.str(), false);
}

std::pair<ScalarField, Grid2D> read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty field file: " + path);
  const auto head = split_csv(line);
  if (head.size() != 6) throw std::runtime_error("bad field header: " + path);
  Grid2D g;
  g.nx = static_cast<int>(parse_double(head[0]));
  g.ny = static_cast<int>(parse_double(head[1]));
  g.hx = parse_double(head[2]);
  g.hy = parse_double(head[3]);
  g.x0 = parse_double(head[4]);
  g.y0 = parse_double(head[5]);
  g.validate();
  ScalarField f(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j) {
    if (!std::getline(is, line)) throw std::runtime_error("truncated field file: " + path);
    const auto toks = split_csv(line);
    if (static_cast<int>(toks.size()) != g.nx)
      throw std::runtime_error("bad row width in: " + path);
    for (int i = 0; i < g.nx; ++i) f.at(i, j) = parse_double(toks[i]);
  }
  return {std::move(f), g};
}

namespace {

void append_raw(std::string& buf, const void* data, size_t n) {
  buf.append(static_cast<const char*>(data), n);
}

template <class T>
T read_raw(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated binary field file");
  return v;
}

std::string grid_header_bin(const Grid2D& g) {
  std::string buf;
  const std::int32_t nx = g.nx, ny = g.ny;
  append_raw(buf, &nx, sizeof nx);
  append_raw(buf, &ny, sizeof ny);
  for (double v : {g.hx, g.hy, g.x0, g.y0}) append_raw(buf, &v, sizeof v);
  return buf;
}

Grid2D read_grid_header_bin(std::istream& is) {
  Grid2D g;
  g.nx = read_raw<std::int32_t>(is);
  g.ny = read_raw<std::int32_t>(is);
  g.hx = read_raw<double>(is);
  g.hy = read_raw<double>(is);
  g.x0 = read_raw<double>(is);
  g.y0 = read_raw<double>(is);
  return g;
}

}  // namespace

void write_field_bin(const std::string& path, const ScalarField& f, const Grid2D& g) {
  std::string buf = "PPF1";
  buf += grid_header_bin(g);
  append_raw(buf, f.v.data(), f.v.size() * sizeof(double));
  write_file_or_throw(path, buf, true);
}

std::pair<ScalarField, Grid2D> read_field_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "PPF1", 4) != 0)
    throw std::runtime_error("not a field file: " + path);
  Grid2D g = read_grid_header_bin(is);
  g.validate();
  ScalarField f(g.nx, g.ny);
  is.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!is) throw std::runtime_error("truncated field file: " + path);
  return {std::move(f), g};
}

void write_trajectory(const std::string& path, const SpaceTimeField& traj) {
  std::string buf = "PPT1";
  buf += grid_header_bin(traj.grid);
  const std::int32_t n = static_cast<std::int32_t>(traj.slices.size());
  append_raw(buf, &n, sizeof n);
  const double t_first = traj.times.empty() ? 0.0 : traj.times.front();
  append_raw(buf, &t_first, sizeof t_first);
  append_raw(buf, &traj.grid.dt, sizeof(double));
  const std::uint8_t ok = traj.max_principle_ok ? 1 : 0;
  append_raw(buf, &ok, sizeof ok);
  for (double v : {traj.data_min, traj.data_max, traj.max_principle_excess})
    append_raw(buf, &v, sizeof v);
  for (const auto& s : traj.slices) append_raw(buf, s.v.data(), s.v.size() * sizeof(double));
  write_file_or_throw(path, buf, true);
}

SpaceTimeField read_trajectory(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "PPT1", 4) != 0)
    throw std::runtime_error("not a trajectory file: " + path);
  SpaceTimeField traj;
  traj.grid = read_grid_header_bin(is);
  const std::int32_t n = read_raw<std::int32_t>(is);
  const double t_first = read_raw<double>(is);
  traj.grid.dt = read_raw<double>(is);
  traj.grid.nt = n;
  traj.max_principle_ok = read_raw<std::uint8_t>(is) != 0;
  traj.data_min = read_raw<double>(is);
  traj.data_max = read_raw<double>(is);
  traj.max_principle_excess = read_raw<double>(is);
  traj.grid.validate();
  for (int k = 0; k < n; ++k) {
    ScalarField f(traj.grid.nx, traj.grid.ny);
    is.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!is) throw std::runtime_error("truncated trajectory file: " + path);
    traj.slices.push_back(std::move(f));
    traj.times.push_back(t_first + k * traj.grid.dt);
  }
  return traj;
}

void write_derived_csv(const std::string& path, const DerivedFields& d, const Grid2D& g) {
  std::ostringstream os;
  os << "x,y,grad_x,grad_y,hess_xx,hess_xy,hess_yy,lap,inf_lap,grad_norm,"
        "norm_inf_lap_reg,grad_of_norm_sq_reg,norm_inf_lap,dT_norm_sq,lap_T,theta,kappa\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double cols[] = {g.x(i),
                             g.y(j),
                             d.grad.x.at(i, j),
                             d.grad.y.at(i, j),
                             d.hess.xx.at(i, j),
                             d.hess.xy.at(i, j),
                             d.hess.yy.at(i, j),
                             d.lap.at(i, j),
                             d.inf_lap.at(i, j),
                             d.grad_norm.at(i, j),
                             d.norm_inf_lap_reg.at(i, j),
                             d.grad_of_norm_sq_reg.at(i, j),
                             d.norm_inf_lap.at(i, j),
                             d.dT_norm_sq.at(i, j),
                             d.lap_T.at(i, j),
                             d.theta.at(i, j),
                             d.kappa.at(i, j)};
      for (size_t c = 0; c < sizeof(cols) / sizeof(cols[0]); ++c) {
        if (c) os << ',';
        os << format_double(cols[c]);
      }
      os << '\n';
    }
  write_file_or_throw(path, os.str(), false);
}

void atomic_write_text(const std::string& path, const std::string& content) {
  write_file_or_throw(path, content, true);
}

}  // namespace pparab
