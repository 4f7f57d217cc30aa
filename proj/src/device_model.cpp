#include "xbarmap/device_model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace xbarmap {

namespace {

void require(bool cond, const char *what)
{
    if (!cond)
    {
        throw std::invalid_argument(what);
    }
}

} // namespace

void DevicePhysicsParams::validate() const
{
    require(alpha_per_s > 0.0, "alpha_per_s must be > 0");
    require(t_melt_k > 0.0, "t_melt_k must be > 0");
    require(t_ambient_k > 0.0, "t_ambient_k must be > 0");
    require(t_melt_k > t_ambient_k, "t_melt_k must exceed t_ambient_k");
    require(k_heat_k_per_a2 > 0.0, "k_heat_k_per_a2 must be > 0");
    require(gamma_k > 0.0, "gamma_k must be > 0");
    require(vc_target > 0.0 && vc_target < 1.0, "vc_target must be in (0,1)");
}

void CrossbarGeometry::validate() const
{
    require(rows >= 1, "rows must be >= 1");
    require(cols >= 1, "cols must be >= 1");
    require(r_wire_ohm >= 0.0, "r_wire_ohm must be >= 0");
    require(r_cell_ohm > 0.0, "r_cell_ohm must be > 0");
    require(v_spike_v > 0.0, "v_spike_v must be > 0");
}

std::size_t path_length(const CrossbarGeometry &geom, CellCoordinate cell)
{
    if (cell.row >= geom.rows || cell.col >= geom.cols)
    {
        throw std::out_of_range("cell (" + std::to_string(cell.row) + "," +
                std::to_string(cell.col) + ") outside " +
                std::to_string(geom.rows) + "x" + std::to_string(geom.cols) +
                " crossbar");
    }
    return cell.col + (geom.rows - 1 - cell.row);
}

double programming_current(const CrossbarGeometry &geom, CellCoordinate cell)
{
    const double segments = static_cast<double>(path_length(geom, cell));
    return geom.v_spike_v / (geom.r_cell_ohm + segments * geom.r_wire_ohm);
}

double self_heating_temperature(
        double i_prog_a, const DevicePhysicsParams &phys)
{
    return phys.k_heat_k_per_a2 * i_prog_a * i_prog_a;
}

double crystalline_fraction(
        double t_sh_k, double elapsed_s, const DevicePhysicsParams &phys)
{
    if (t_sh_k <= phys.t_ambient_k)
    {
        return 1.0;
    }
    const double rate =
            phys.alpha_per_s * (t_sh_k - phys.t_ambient_k) / phys.t_melt_k;
    return std::exp(-rate * elapsed_s);
}

double programming_latency(double t_sh_k, const DevicePhysicsParams &phys)
{
    if (t_sh_k <= phys.t_ambient_k)
    {
        throw UnprogrammableCellError(
                "unprogrammable cell: self-heating temperature " +
                std::to_string(t_sh_k) + " K does not exceed ambient " +
                std::to_string(phys.t_ambient_k) + " K");
    }
    return -std::log(phys.vc_target) * phys.t_melt_k /
            (phys.alpha_per_s * (t_sh_k - phys.t_ambient_k));
}

double cell_endurance(double t_sh_k, const DevicePhysicsParams &phys)
{
    return std::exp(phys.gamma_k / t_sh_k);
}

CellProfile cell_profile(const CrossbarGeometry &geom,
        const DevicePhysicsParams &phys, CellCoordinate cell)
{
    CellProfile p;
    p.i_prog_a = programming_current(geom, cell);
    p.t_sh_k = self_heating_temperature(p.i_prog_a, phys);
    p.prog_latency_s = programming_latency(p.t_sh_k, phys);
    p.endurance_cycles = cell_endurance(p.t_sh_k, phys);
    return p;
}

std::vector<double> current_map(const CrossbarGeometry &geom)
{
    geom.validate();
    std::vector<double> map(geom.rows * geom.cols);
    for (std::size_t r = 0; r < geom.rows; ++r)
    {
        for (std::size_t c = 0; c < geom.cols; ++c)
        {
            map[r * geom.cols + c] = programming_current(geom, {r, c});
        }
    }
    return map;
}

void write_current_map_csv(std::ostream &out, const CrossbarGeometry &geom)
{
    const std::vector<double> map = current_map(geom);
    char buf[32];
    for (std::size_t r = 0; r < geom.rows; ++r)
    {
        for (std::size_t c = 0; c < geom.cols; ++c)
        {
            std::snprintf(buf, sizeof buf, "%.17g", map[r * geom.cols + c]);
            out << buf;
            out << (c + 1 == geom.cols ? '\n' : ',');
        }
    }
}

CrossbarProfile::CrossbarProfile(
        const CrossbarGeometry &geom, const DevicePhysicsParams &phys)
        : geom_(geom)
{
    geom_.validate();
    phys.validate();
    by_path_.resize(geom.rows + geom.cols - 1);
    for (std::size_t path = 0; path < by_path_.size(); ++path)
    {
        CellProfile p;
        p.i_prog_a = geom.v_spike_v /
                (geom.r_cell_ohm + static_cast<double>(path) * geom.r_wire_ohm);
        p.t_sh_k = self_heating_temperature(p.i_prog_a, phys);
        p.prog_latency_s = programming_latency(p.t_sh_k, phys);
        p.endurance_cycles = cell_endurance(p.t_sh_k, phys);
        by_path_[path] = p;
    }
}

const CellProfile &CrossbarProfile::at(CellCoordinate cell) const
{
    return by_path_[path_length(geom_, cell)];
}

} // namespace xbarmap
