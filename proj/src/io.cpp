#include "specgame/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "specgame/version.hpp"

namespace specgame::io {

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double_field(const std::string& path, std::size_t line_no,
                          std::string_view field, const char* column) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(path, line_no,
                         std::string("cannot parse ") + column + " value '" +
                             std::string(field) + "'");
    return value;
}

} // namespace

void write_steps_csv(const std::string& path, const RunResult& run) {
    auto out = open_for_write(path);
    out << kStepCsvHeader << '\n';
    for (const auto& r : run.records) {
        out << r.t << ',' << format_double(r.price) << ',' << format_double(r.dp) << ','
            << format_double(r.imbalance) << ',' << format_double(r.perturbation) << ','
            << static_cast<int>(r.h) << ',' << r.volume << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_steps_jsonl(const std::string& path, const RunResult& run) {
    auto out = open_for_write(path);
    for (const auto& r : run.records) {
        nlohmann::json j{{"t", r.t},
                         {"price", r.price},
                         {"dp", r.dp},
                         {"imbalance", r.imbalance},
                         {"perturbation", r.perturbation},
                         {"h", static_cast<int>(r.h)},
                         {"volume", r.volume}};
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_run_metadata(const std::string& path, const RunResult& run,
                        const std::string& data_path, const std::string& format) {
    nlohmann::json meta{{"version", SPECGAME_VERSION},
                        {"seed", run.config.rng_seed},
                        {"config", nlohmann::json::parse(run.config.to_json(0))},
                        {"config_hash", run.config.hash_hex()},
                        {"output", data_path},
                        {"format", format},
                        {"rows", run.records.size()}};
    auto out = open_for_write(path);
    out << meta.dump(2) << '\n';
}

ParsedRun read_steps_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(path, 1, "empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kStepCsvHeader)
        throw ParseError(path, 1,
                         std::string("expected header '") + kStepCsvHeader + "', got '" +
                             line + "'");

    ParsedRun parsed;
    std::vector<double> step_prices;
    double first_dp = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 7)
            throw ParseError(path, line_no,
                             "expected 7 fields, got " + std::to_string(fields.size()));
        const double price = parse_double_field(path, line_no, fields[1], "price");
        const double dp = parse_double_field(path, line_no, fields[2], "dp");
        if (step_prices.empty()) first_dp = dp;
        step_prices.push_back(price);
    }
    if (step_prices.empty()) throw ParseError(path, line_no, "no data rows");

    parsed.rows = step_prices.size();
    parsed.prices.reserve(step_prices.size() + 1);
    parsed.prices.push_back(step_prices.front() - first_dp);
    parsed.prices.insert(parsed.prices.end(), step_prices.begin(), step_prices.end());
    return parsed;
}

void write_sigma_csv(const std::string& path, const std::vector<std::size_t>& taus,
                     const std::vector<double>& sigmas) {
    auto out = open_for_write(path);
    out << "tau,sigma\n";
    for (std::size_t i = 0; i < taus.size(); ++i)
        out << taus[i] << ',' << format_double(sigmas[i]) << '\n';
}

void write_fit_csv(const std::string& path, const analysis::HurstFit& fit) {
    auto out = open_for_write(path);
    out << "hurst,intercept,r_squared\n";
    out << format_double(fit.hurst) << ',' << format_double(fit.intercept) << ','
        << format_double(fit.r_squared) << '\n';
}

void write_fitted_sigma_csv(const std::string& path, const analysis::HurstFit& fit) {
    auto out = open_for_write(path);
    out << "tau,sigma,fit\n";
    for (std::size_t i = 0; i < fit.taus.size(); ++i) {
        const double fitted =
            std::exp(fit.intercept + fit.hurst * std::log(static_cast<double>(fit.taus[i])));
        out << fit.taus[i] << ',' << format_double(fit.sigmas[i]) << ','
            << format_double(fitted) << '\n';
    }
}

void write_acf_csv(const std::string& path, const analysis::AcfResult& acf) {
    auto out = open_for_write(path);
    out << "lag,acf\n";
    for (std::size_t i = 0; i < acf.lags.size(); ++i)
        out << acf.lags[i] << ',' << format_double(acf.values[i]) << '\n';
}

void write_kurtosis_csv(const std::string& path,
                        const std::vector<std::pair<std::size_t, double>>& profile) {
    auto out = open_for_write(path);
    out << "horizon,excess_kurtosis\n";
    for (const auto& [horizon, kurt] : profile)
        out << horizon << ',' << format_double(kurt) << '\n';
}

void write_histogram_csv(const std::string& path, const analysis::TailStats& stats) {
    auto out = open_for_write(path);
    out << "bin_center,density\n";
    for (std::size_t i = 0; i < stats.bin_centers.size(); ++i)
        out << format_double(stats.bin_centers[i]) << ',' << format_double(stats.densities[i])
            << '\n';
}

void write_price_csv(const std::string& path, const PriceSeries& prices) {
    auto out = open_for_write(path);
    out << "t,price\n";
    for (std::size_t t = 0; t < prices.size(); ++t)
        out << t << ',' << format_double(prices[t]) << '\n';
}

void write_text_file(const std::string& path, const std::string& text) {
    auto out = open_for_write(path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace specgame::io
