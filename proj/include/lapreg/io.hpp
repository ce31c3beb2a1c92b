#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lapreg/regression.hpp"
#include "lapreg/simulation.hpp"

namespace lapreg {

/// Validates one response matrix against the constraints of its space;
/// used by the loaders so violations can name the offending file line.
void validate_response_matrix(const Matrix& response, double bound, ResponseSpace space);

/// JSON Lines dataset: an optional header {"m", "p", "W", "space"} followed
/// by one {"x": [...], "L": [[...]]} object per observation. Scalar "x"
/// values are accepted as one-dimensional predictors. Without a header W
/// defaults to the largest off-diagonal magnitude in the file.
Dataset read_dataset(std::istream& in, const std::string& origin);
Dataset load_dataset(const std::string& path);
std::string dataset_to_jsonl(const Dataset& data);
void save_dataset(const Dataset& data, const std::string& path);

/// Model file: fitting choices plus the full training dataset (both
/// estimators need it at prediction time). Reloading reproduces the
/// fitted model exactly.
std::string model_to_json(const FittedModel& model);
FittedModel model_from_json(const std::string& text, const std::string& origin);
void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);

/// Query file: one {"x": ...} object per line.
std::vector<std::vector<double>> read_queries(std::istream& in, const std::string& origin);
std::vector<std::vector<double>> load_queries(const std::string& path);

std::string report_to_json(const MonteCarloReport& report, const FitSpec& fit_spec);

/// Canonical number formatting (shortest round-trip decimal), shared by
/// every writer so identical values always serialize identically.
std::string format_double(double value);

std::string matrix_to_csv(const Matrix& mat);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

const char* fit_mode_name(RegressionMode mode);
RegressionMode fit_mode_from_string(const std::string& name);
const char* kernel_family_name(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

}  // namespace lapreg
