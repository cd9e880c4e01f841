#include "cascade/econ.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include "cascade/errors.hpp"
#include "cascade/format.hpp"

namespace cascade::econ {

namespace {

void require_positive(const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string(name) + " must be a finite positive number, got " + fmt::precise(v));
}

void require_fraction(const char* name, double v) {
    require_positive(name, v);
    if (v > 1.0) throw ValidationError(std::string(name) + " must be at most 1, got " + fmt::precise(v));
}

constexpr std::pair<const char*, double HardwareBill::*> kBillRows[] = {
    {"devices", &HardwareBill::devices},
    {"wafers", &HardwareBill::wafers},
    {"gw_plants", &HardwareBill::gw_plants},
};

}  // namespace

void validate_device(const DeviceSpec& spec) {
    require_positive("useful_flops", spec.useful_flops);
    require_positive("power_draw", spec.power_draw);
    if (spec.price_per_hour) require_positive("price_per_hour", *spec.price_per_hour);
    if (spec.devices_per_wafer <= 0) throw ValidationError("devices_per_wafer must be a positive integer");
}

void validate_workload(const WorkloadSpec& spec) {
    require_positive("training_ops", spec.training_ops);
    require_positive("inference_flops_per_agi", spec.inference_flops_per_agi);
    require_positive("labor_hours_per_year", spec.labor_hours_per_year);
    require_fraction("utilization", spec.utilization);
    require_positive("build_years", spec.build_years);
}

double flops_per_dollar_hour(double device_flops, double price_per_hour) {
    require_positive("device_flops", device_flops);
    require_positive("price_per_hour", price_per_hour);
    return device_flops / price_per_hour;
}

double ops_per_dollar(double device_flops, double price_per_hour) {
    require_positive("device_flops", device_flops);
    require_positive("price_per_hour", price_per_hour);
    return device_flops * 3600.0 / price_per_hour;
}

double inference_cost_per_hour(double flops_needed, double efficiency) {
    require_positive("flops_needed", flops_needed);
    require_positive("efficiency", efficiency);
    return flops_needed / efficiency;
}

double training_cost(double total_ops, double ops_per_dollar_rate) {
    require_positive("total_ops", total_ops);
    require_positive("ops_per_dollar", ops_per_dollar_rate);
    return total_ops / ops_per_dollar_rate;
}

double concurrent_devices(double labor_hours_per_year, double utilization) {
    require_positive("labor_hours_per_year", labor_hours_per_year);
    require_fraction("utilization", utilization);
    return labor_hours_per_year / (kHoursPerYear * utilization);
}

double devices_for_training(double total_ops, double device_flops, double build_years) {
    require_positive("total_ops", total_ops);
    require_positive("device_flops", device_flops);
    require_positive("build_years", build_years);
    return total_ops / (device_flops * kSecondsPerYear * build_years);
}

HardwareBill hardware_bill(double devices, const DeviceSpec& spec) {
    require_positive("devices", devices);
    validate_device(spec);
    return {devices, devices / static_cast<double>(spec.devices_per_wafer),
            devices * spec.power_draw / kWattsPerPlant};
}

double implied_cagr(double target_rate, double base_rate, double years) {
    require_positive("target_rate", target_rate);
    require_positive("base_rate", base_rate);
    require_positive("years", years);
    return std::pow(target_rate / base_rate, 1.0 / years) - 1.0;
}

double project_growth(double base, double rate, double years) {
    require_positive("base", base);
    if (!(rate > -1.0) || !std::isfinite(rate))
        throw ValidationError("growth rate must be greater than -1, got " + fmt::precise(rate));
    if (!(years >= 0.0) || !std::isfinite(years))
        throw ValidationError("years must be a finite non-negative number");
    return base * std::pow(1.0 + rate, years);
}

double euv_wafer_throughput(double wafers_per_hour, double euv_steps, double uptime,
                            double hours_per_year) {
    require_positive("wafers_per_hour", wafers_per_hour);
    require_positive("euv_steps", euv_steps);
    require_fraction("uptime", uptime);
    require_positive("hours_per_year", hours_per_year);
    return wafers_per_hour / euv_steps * uptime * hours_per_year;
}

double robot_amortized_cost(double price, double lifetime_hours) {
    require_positive("price", price);
    require_positive("lifetime_hours", lifetime_hours);
    return price / lifetime_hours;
}

double robots_per_year(double labor_hours_per_year, double lifetime_hours) {
    require_positive("labor_hours_per_year", labor_hours_per_year);
    require_positive("lifetime_hours", lifetime_hours);
    return labor_hours_per_year / lifetime_hours;
}

double training_flops_needed(const WorkloadSpec& w) {
    validate_workload(w);
    return w.training_ops / (kSecondsPerYear * w.build_years);
}

double inference_flops_needed(const WorkloadSpec& w) {
    validate_workload(w);
    return w.inference_flops_per_agi * concurrent_devices(w.labor_hours_per_year, w.utilization);
}

const BomCell& BillOfMaterials::at(const std::string& device, const std::string& column) const {
    for (const auto& c : cells)
        if (c.device == device && c.column == column) return c;
    throw NotFoundError("no bill-of-materials cell for device '" + device + "' column '" + column + "'");
}

BillOfMaterials bill_of_materials(const std::vector<WorkloadSpec>& workloads,
                                  const std::vector<DeviceSpec>& devices) {
    if (workloads.empty() || devices.empty())
        throw ValidationError("bill of materials needs at least one workload and one device");

    BillOfMaterials bom;
    std::vector<double> demand;
    for (const auto& w : workloads) {
        bom.columns.push_back("training " + w.name);
        demand.push_back(training_flops_needed(w));
    }
    for (const auto& w : workloads) {
        bom.columns.push_back("inference " + w.name);
        demand.push_back(inference_flops_needed(w));
    }
    for (const auto& d : devices) {
        validate_device(d);
        bom.devices.push_back(d.name);
        for (std::size_t c = 0; c < demand.size(); ++c) {
            bom.cells.push_back({bom.columns[c], d.name, demand[c], hardware_bill(demand[c] / d.useful_flops, d)});
        }
    }
    return bom;
}

std::string bom_to_csv(const BillOfMaterials& bom) {
    std::ostringstream out;
    out << "device,quantity";
    for (const auto& c : bom.columns) out << ',' << fmt::csv_field(c);
    out << "\n,flops_needed";
    for (const auto& c : bom.columns) out << ',' << fmt::precise(bom.at(bom.devices.front(), c).flops_needed);
    out << '\n';
    for (const auto& d : bom.devices) {
        for (const auto& [name, member] : kBillRows) {
            out << fmt::csv_field(d) << ',' << name;
            for (const auto& c : bom.columns) out << ',' << fmt::precise(bom.at(d, c).bill.*member);
            out << '\n';
        }
    }
    return out.str();
}

std::string bom_to_text(const BillOfMaterials& bom) {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-28s", "");
    out << buf;
    for (const auto& c : bom.columns) {
        std::snprintf(buf, sizeof buf, " %18s", c.c_str());
        out << buf;
    }
    out << '\n';
    std::snprintf(buf, sizeof buf, "%-28s", "FLOPS needed");
    out << buf;
    for (const auto& c : bom.columns) {
        std::snprintf(buf, sizeof buf, " %18s", fmt::sci(bom.at(bom.devices.front(), c).flops_needed).c_str());
        out << buf;
    }
    out << '\n';
    for (const auto& d : bom.devices) {
        for (const auto& [name, member] : kBillRows) {
            std::snprintf(buf, sizeof buf, "%-28s", (d + " " + name).c_str());
            out << buf;
            for (const auto& c : bom.columns) {
                std::snprintf(buf, sizeof buf, " %18s", fmt::sci(bom.at(d, c).bill.*member).c_str());
                out << buf;
            }
            out << '\n';
        }
    }
    return out.str();
}

}  // namespace cascade::econ
