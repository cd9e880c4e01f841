#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cascade::econ {

//! 365.25 days of 24 hours.
inline constexpr double kHoursPerYear = 8766.0;
inline constexpr double kSecondsPerYear = 3.156e7;
inline constexpr double kWattsPerPlant = 1e9;

struct DeviceSpec {
    std::string name;
    double useful_flops = 0.0;  // sustained, FLOPS
    double power_draw = 0.0;    // watts including cooling and ancillaries
    std::optional<double> price_per_hour;
    long devices_per_wafer = 1;

    friend bool operator==(const DeviceSpec&, const DeviceSpec&) = default;
};

void validate_device(const DeviceSpec& spec);

struct WorkloadSpec {
    std::string name;
    double training_ops = 0.0;             // total operations
    double inference_flops_per_agi = 0.0;  // FLOPS per running AGI
    double labor_hours_per_year = 0.0;
    double utilization = 1.0;  // (0, 1]
    double build_years = 1.0;

    friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

void validate_workload(const WorkloadSpec& spec);

struct HardwareBill {
    double devices = 0.0;
    double wafers = 0.0;
    double gw_plants = 0.0;
};

double flops_per_dollar_hour(double device_flops, double price_per_hour);
double ops_per_dollar(double device_flops, double price_per_hour);
double inference_cost_per_hour(double flops_needed, double flops_per_dollar_hour);
double training_cost(double total_ops, double ops_per_dollar);
double concurrent_devices(double labor_hours_per_year, double utilization);
double devices_for_training(double total_ops, double device_flops, double build_years);
HardwareBill hardware_bill(double devices, const DeviceSpec& spec);
double implied_cagr(double target_rate, double base_rate, double years);
double project_growth(double base, double rate, double years);
double euv_wafer_throughput(double wafers_per_hour, double euv_steps, double uptime,
                            double hours_per_year);
double robot_amortized_cost(double price, double lifetime_hours);
double robots_per_year(double labor_hours_per_year, double lifetime_hours);

//! Sustained FLOPS a workload needs for training within its build window.
double training_flops_needed(const WorkloadSpec& w);
//! Sustained FLOPS to run enough AGIs for the workload's labor hours.
double inference_flops_needed(const WorkloadSpec& w);

//! One cell group of the bill-of-materials table: a demand column
//! (e.g. "training, lower") costed on one device generation.
struct BomCell {
    std::string column;
    std::string device;
    double flops_needed = 0.0;
    HardwareBill bill;
};

struct BillOfMaterials {
    std::vector<std::string> columns;
    std::vector<std::string> devices;
    std::vector<BomCell> cells;  // row-major: device, then column

    const BomCell& at(const std::string& device, const std::string& column) const;
};

//! Training and inference demand for each workload, costed on each device.
BillOfMaterials bill_of_materials(const std::vector<WorkloadSpec>& workloads,
                                  const std::vector<DeviceSpec>& devices);

std::string bom_to_csv(const BillOfMaterials& bom);
std::string bom_to_text(const BillOfMaterials& bom);

}  // namespace cascade::econ
