#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "specgame/analysis.hpp"
#include "specgame/market.hpp"

namespace specgame::io {

// Parse failure with a 1-based line number baked into the message.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + " line " + std::to_string(line) + ": " + what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline constexpr const char* kStepCsvHeader = "t,price,dp,imbalance,perturbation,h,volume";

// %.17g: round-trips doubles exactly and keeps reruns byte-identical.
std::string format_double(double value);

void write_steps_csv(const std::string& path, const RunResult& run);
void write_steps_jsonl(const std::string& path, const RunResult& run);
void write_run_metadata(const std::string& path, const RunResult& run,
                        const std::string& data_path, const std::string& format);

struct ParsedRun {
    PriceSeries prices;  // leading p(0) reconstructed from the first row
    std::size_t rows = 0;
};

ParsedRun read_steps_csv(const std::string& path);

void write_sigma_csv(const std::string& path, const std::vector<std::size_t>& taus,
                     const std::vector<double>& sigmas);
void write_fit_csv(const std::string& path, const analysis::HurstFit& fit);
void write_fitted_sigma_csv(const std::string& path, const analysis::HurstFit& fit);
void write_acf_csv(const std::string& path, const analysis::AcfResult& acf);
void write_kurtosis_csv(const std::string& path,
                        const std::vector<std::pair<std::size_t, double>>& profile);
void write_histogram_csv(const std::string& path, const analysis::TailStats& stats);
void write_price_csv(const std::string& path, const PriceSeries& prices);

void write_text_file(const std::string& path, const std::string& text);

} // namespace specgame::io
