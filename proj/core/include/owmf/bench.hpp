#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "owmf/filter.hpp"
#include "owmf/noise.hpp"
#include "owmf/trilateral.hpp"

namespace owmf {

enum class Method { owmf, owf, trif, noisy_baseline };

std::string method_name(Method method);
Method parse_method(const std::string& name);

/// One benchmark measurement. psnr_db is +infinity only if the restoration
/// is exact; serializers emit null (JSON) or "inf" (CSV) for that case.
struct BenchRow {
    std::string image_id;
    int width = 0;
    int height = 0;
    NoiseSpec noise;
    std::string method;
    std::string params_digest;
    double psnr_db = 0.0;
    double mse = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

struct BenchReport {
    int schema = 1;
    std::vector<BenchRow> rows;
};

/// One requested (image, noise, method) cell with fully resolved parameters.
struct CellRun {
    std::string image_id;
    NoiseSpec noise;
    Method method = Method::owmf;
    double p_hint = 0.0; // feeds the OWMF H1/H2 formulas
    OwmfParams owmf;
    TrifParams trif;
    bool trif_sweep = false;
};

struct BenchConfig {
    std::string corpus_dir;
    std::vector<CellRun> cells;
    int threads = 0;
};

/// Executes every cell; cells whose corpus image is missing are reported to
/// `log` and skipped. Throws IoError when no cell could run at all.
BenchReport run_bench(const BenchConfig& config, std::ostream& log);

/// The documented trilateral parameter grid swept by `trif_sweep` cells:
/// starting values follow the baseline's conventions (sigma_s = 0.5, 5x5
/// window, d=1/K=4 detection), with the radiometric/impulse/joint sigmas
/// varied around them.
std::vector<TrifParams> trif_sweep_grid(double noise_sigma);

/// Short stable digest of the parameters that produced a row.
std::string owmf_params_digest(const OwmfParams& params, double p_hint);
std::string trif_params_digest(const TrifParams& params);

std::string report_to_json(const BenchReport& report);
std::string report_to_csv(const BenchReport& report);
BenchReport report_from_json(const std::string& text);

/// Plain-text pivot of mean PSNR by (sigma, image, method) rows and p
/// columns, in the spirit of the published comparison tables.
std::string format_table(const BenchReport& report);

std::string noise_spec_to_json(const NoiseSpec& spec);
NoiseSpec noise_spec_from_json(const std::string& text);

} // namespace owmf
