#pragma once

#include <string>

#include "fanostat/config.hpp"
#include "fanostat/fitting.hpp"
#include "fanostat/series_io.hpp"

namespace fanostat {

FitOptions fit_options_from(const Config& config);
MeasurementSources measurement_sources_from(const Config& config);

struct FitReportContext {
    const MeasurementSet* data = nullptr;
    const FitOptions* options = nullptr;
    const LoadReport* load = nullptr;
    const MultistartResult* multistart = nullptr;
    units::FrequencyConvention convention = units::FrequencyConvention::kOrdinary;
};

/// JSON document: parameters in dimensional and reduced form, standard errors,
/// residual table, diagnostics and the conventions the numbers depend on.
std::string fit_report_json(const FitResult& result, const FitReportContext& context);
/// One row per data point.
Series residual_table(const FitResult& result);

}  // namespace fanostat
