#pragma once

#include <string>
#include <vector>

#include "wigflow/flow.hpp"
#include "wigflow/grid.hpp"
#include "wigflow/verify.hpp"

namespace wigflow {

/// Binary field file: one JSON header line
/// {"dp","dx","hbar","name","np","nx","p_min","x_min"} terminated by '\n', then
/// nx*np little-endian float64 values, row-major in x.
void write_field_binary(const std::string& path, const ScalarField& f,
                        const std::string& name);
ScalarField read_field_binary(const std::string& path, std::string* name = nullptr);

/// CSV alternative for small grids: header "x,p,value", one row per sample.
void write_field_csv(const std::string& path, const ScalarField& f);

/// Mask exported through the field format as 0/1 values.
void write_mask_binary(const std::string& path, const ScalarField& shape,
                       const std::vector<std::uint8_t>& mask, const std::string& name);

/// Stagnation records: CSV with x,p,omega,residual plus diagnostics.
void write_stagnation_csv(const std::string& path,
                          const std::vector<StagnationPoint>& points);

/// Polylines: CSV with id,step,x,p; termination reasons in a companion summary CSV.
void write_fieldlines_csv(const std::string& path, const std::string& summary_path,
                          const std::vector<Fieldline>& lines);

/// One JSON object per line, keys sorted, deterministic ordering by check name.
void write_reports_jsonl(const std::string& path, std::vector<CheckReport> reports);

}  // namespace wigflow
