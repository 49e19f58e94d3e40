#include "owmf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "owmf/io.hpp"
#include "owmf/metrics.hpp"

namespace owmf {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string digest_of(const std::string& canonical) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canonical);
    return out.str();
}

std::string kernel_name(PatchKernel k) {
    switch (k) {
    case PatchKernel::kappa0:
        return "kappa0";
    case PatchKernel::gaussian:
        return "gaussian";
    case PatchKernel::uniform:
        return "uniform";
    }
    return "?";
}

json row_to_json(const BenchRow& row) {
    json noise{{"sigma", row.noise.sigma},
               {"p", row.noise.p},
               {"impulse_lo", row.noise.impulse_lo},
               {"impulse_hi", row.noise.impulse_hi},
               {"seed", row.noise.seed}};
    json j{{"image_id", row.image_id},
           {"width", row.width},
           {"height", row.height},
           {"noise", noise},
           {"method", row.method},
           {"params_digest", row.params_digest},
           {"mse", row.mse},
           {"wall_seconds", row.wall_seconds},
           {"seed", row.seed}};
    if (std::isinf(row.psnr_db)) {
        j["psnr_db"] = nullptr;
    } else {
        j["psnr_db"] = row.psnr_db;
    }
    return j;
}

BenchRow row_from_json(const json& j) {
    BenchRow row;
    row.image_id = j.at("image_id").get<std::string>();
    row.width = j.at("width").get<int>();
    row.height = j.at("height").get<int>();
    const json& n = j.at("noise");
    row.noise.sigma = n.at("sigma").get<double>();
    row.noise.p = n.at("p").get<double>();
    row.noise.impulse_lo = n.at("impulse_lo").get<double>();
    row.noise.impulse_hi = n.at("impulse_hi").get<double>();
    row.noise.seed = n.at("seed").get<std::uint64_t>();
    row.method = j.at("method").get<std::string>();
    row.params_digest = j.at("params_digest").get<std::string>();
    row.psnr_db = j.at("psnr_db").is_null() ? std::numeric_limits<double>::infinity()
                                            : j.at("psnr_db").get<double>();
    row.mse = j.at("mse").get<double>();
    row.wall_seconds = j.at("wall_seconds").get<double>();
    row.seed = j.at("seed").get<std::uint64_t>();
    return row;
}

} // namespace

std::string method_name(Method method) {
    switch (method) {
    case Method::owmf:
        return "owmf";
    case Method::owf:
        return "owf";
    case Method::trif:
        return "trif";
    case Method::noisy_baseline:
        return "noisy-baseline";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "owmf") return Method::owmf;
    if (name == "owf") return Method::owf;
    if (name == "trif") return Method::trif;
    if (name == "noisy-baseline" || name == "noisy") return Method::noisy_baseline;
    throw ValidationError("unknown method '" + name +
                          "' (expected owmf, owf, trif or noisy-baseline)");
}

std::string owmf_params_digest(const OwmfParams& params, double p_hint) {
    std::ostringstream s;
    s.precision(17);
    s << "owmf;h=" << params.window.search_radius << ";eta=" << params.window.patch_radius
      << ";d=" << params.detect.d << ";K=" << params.detect.K << ";p=" << p_hint << ";H1=";
    if (params.H1) {
        s << *params.H1;
    } else {
        s << "auto";
    }
    s << ";H2=";
    if (params.H2) {
        s << *params.H2;
    } else {
        s << "auto";
    }
    s << ";kernel=" << kernel_name(params.patch_kernel);
    if (params.patch_kernel == PatchKernel::gaussian) {
        s << ";hg=" << params.gauss_bandwidth;
    }
    s << ";it=" << params.iterations << ";jnorm=" << (params.j_weighted_normalizer ? 1 : 0);
    return digest_of(s.str());
}

std::string trif_params_digest(const TrifParams& params) {
    std::ostringstream s;
    s.precision(17);
    s << "trif;ss=" << params.sigma_s << ";sr=" << params.sigma_r << ";si=" << params.sigma_i
      << ";sj=" << params.sigma_j << ";h=" << params.search_radius << ";d=" << params.detect.d
      << ";K=" << params.detect.K << ";it=" << params.iterations;
    return digest_of(s.str());
}

std::vector<TrifParams> trif_sweep_grid(double noise_sigma) {
    // Radiometric sigma scales with the Gaussian level; the impulse and
    // joint sigmas live on the ROAD scale (hundreds at true impulses).
    const double base_r = noise_sigma > 0.0 ? 2.0 * noise_sigma : 30.0;
    std::vector<TrifParams> grid;
    for (double fr : {0.75, 1.5, 3.0}) {
        for (double si : {30.0, 50.0, 80.0}) {
            for (double sj : {40.0, 60.0}) {
                TrifParams p;
                p.sigma_s = 0.5;
                p.sigma_r = base_r * fr;
                p.sigma_i = si;
                p.sigma_j = sj;
                grid.push_back(p);
            }
        }
    }
    return grid;
}

BenchReport run_bench(const BenchConfig& config, std::ostream& log) {
    namespace fs = std::filesystem;
    BenchReport report;
    std::size_t failures = 0;

    // Avoid re-reading and re-noising for consecutive cells on the same
    // (image, noise) pair.
    std::string cached_image_id;
    Image clean;
    NoiseSpec cached_noise;
    bool have_noisy = false;
    Image noisy;

    for (const CellRun& cell : config.cells) {
        const fs::path path = fs::path(config.corpus_dir) / (cell.image_id + ".pgm");
        try {
            if (cell.image_id != cached_image_id) {
                clean = load_image(path.string());
                cached_image_id = cell.image_id;
                have_noisy = false;
            }
            if (!have_noisy ||
                cached_noise.sigma != cell.noise.sigma || cached_noise.p != cell.noise.p ||
                cached_noise.impulse_lo != cell.noise.impulse_lo ||
                cached_noise.impulse_hi != cell.noise.impulse_hi ||
                cached_noise.seed != cell.noise.seed) {
                noisy = add_mixed(clean, cell.noise).image;
                cached_noise = cell.noise;
                have_noisy = true;
            }

            BenchRow row;
            row.image_id = cell.image_id;
            row.width = clean.width();
            row.height = clean.height();
            row.noise = cell.noise;
            row.method = method_name(cell.method);
            row.seed = cell.noise.seed;

            const auto t0 = std::chrono::steady_clock::now();
            Image restored;
            switch (cell.method) {
            case Method::noisy_baseline:
                restored = noisy;
                row.params_digest = digest_of("noisy-baseline");
                break;
            case Method::owf:
                restored = owf_denoise(noisy, cell.noise.sigma, cell.owmf.window,
                                       config.threads);
                row.params_digest = digest_of(
                    "owf;h=" + std::to_string(cell.owmf.window.search_radius) +
                    ";eta=" + std::to_string(cell.owmf.window.patch_radius));
                break;
            case Method::owmf:
                restored = owmf_denoise(noisy, cell.noise.sigma, cell.p_hint, cell.owmf,
                                        config.threads);
                row.params_digest = owmf_params_digest(cell.owmf, cell.p_hint);
                break;
            case Method::trif: {
                if (cell.trif_sweep) {
                    double best = -std::numeric_limits<double>::infinity();
                    Image best_img;
                    TrifParams best_params;
                    for (const TrifParams& p : trif_sweep_grid(cell.noise.sigma)) {
                        TrifParams q = p;
                        q.iterations = cell.trif.iterations;
                        Image candidate = trif_denoise(noisy, q, config.threads);
                        const double score =
                            psnr(clean, candidate).value_or(std::numeric_limits<double>::infinity());
                        if (score > best) {
                            best = score;
                            best_img = std::move(candidate);
                            best_params = q;
                        }
                    }
                    restored = std::move(best_img);
                    row.params_digest = trif_params_digest(best_params) + "+sweep";
                } else {
                    restored = trif_denoise(noisy, cell.trif, config.threads);
                    row.params_digest = trif_params_digest(cell.trif);
                }
                break;
            }
            }
            const auto t1 = std::chrono::steady_clock::now();
            row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

            const QualityReport q = quality(clean, restored);
            row.mse = q.mse;
            row.psnr_db = q.psnr_db ? *q.psnr_db : std::numeric_limits<double>::infinity();
            report.rows.push_back(std::move(row));
        } catch (const IoError& e) {
            log << "skipping " << cell.image_id << " (" << method_name(cell.method)
                << "): " << e.what() << "\n";
            ++failures;
        }
    }

    if (!config.cells.empty() && failures == config.cells.size()) {
        throw IoError("no benchmark cell could be run; checked corpus directory '" +
                      config.corpus_dir + "'");
    }
    return report;
}

std::string report_to_json(const BenchReport& report) {
    json j{{"schema", report.schema}, {"rows", json::array()}};
    for (const BenchRow& row : report.rows) {
        j["rows"].push_back(row_to_json(row));
    }
    return j.dump(2) + "\n";
}

BenchReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    BenchReport report;
    report.schema = j.at("schema").get<int>();
    for (const json& row : j.at("rows")) {
        report.rows.push_back(row_from_json(row));
    }
    return report;
}

std::string report_to_csv(const BenchReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "schema,image_id,width,height,sigma,p,impulse_lo,impulse_hi,method,"
           "params_digest,psnr_db,mse,wall_seconds,seed\n";
    for (const BenchRow& r : report.rows) {
        out << report.schema << ',' << r.image_id << ',' << r.width << ',' << r.height << ','
            << r.noise.sigma << ',' << r.noise.p << ',' << r.noise.impulse_lo << ','
            << r.noise.impulse_hi << ',' << r.method << ',' << r.params_digest << ',';
        if (std::isinf(r.psnr_db)) {
            out << "inf";
        } else {
            out << r.psnr_db;
        }
        out << ',' << r.mse << ',' << r.wall_seconds << ',' << r.seed << '\n';
    }
    return out.str();
}

std::string format_table(const BenchReport& report) {
    // rows keyed by (sigma, image, method), one column per impulse level,
    // cells averaged over seeds
    std::set<double> ps;
    std::map<std::tuple<double, std::string, std::string>, std::map<double, std::pair<double, int>>>
        grid;
    for (const BenchRow& r : report.rows) {
        ps.insert(r.noise.p);
        auto& cell = grid[{r.noise.sigma, r.image_id, r.method}][r.noise.p];
        cell.first += r.psnr_db;
        cell.second += 1;
    }

    std::ostringstream out;
    out << std::left << std::setw(8) << "sigma" << std::setw(14) << "image" << std::setw(16)
        << "method";
    for (double p : ps) {
        std::ostringstream head;
        head << "p=" << p;
        out << std::right << std::setw(10) << head.str();
    }
    out << "\n";
    for (const auto& [key, cols] : grid) {
        out << std::left << std::setw(8) << std::get<0>(key) << std::setw(14)
            << std::get<1>(key) << std::setw(16) << std::get<2>(key);
        for (double p : ps) {
            auto it = cols.find(p);
            if (it == cols.end()) {
                out << std::right << std::setw(10) << "-";
            } else {
                std::ostringstream cell;
                cell << std::fixed << std::setprecision(2)
                     << it->second.first / it->second.second;
                out << std::right << std::setw(10) << cell.str();
            }
        }
        out << "\n";
    }
    return out.str();
}

std::string noise_spec_to_json(const NoiseSpec& spec) {
    json j{{"sigma", spec.sigma},
           {"p", spec.p},
           {"impulse_lo", spec.impulse_lo},
           {"impulse_hi", spec.impulse_hi},
           {"seed", spec.seed}};
    return j.dump(2) + "\n";
}

NoiseSpec noise_spec_from_json(const std::string& text) {
    const json j = json::parse(text);
    NoiseSpec spec;
    spec.sigma = j.at("sigma").get<double>();
    spec.p = j.at("p").get<double>();
    spec.impulse_lo = j.at("impulse_lo").get<double>();
    spec.impulse_hi = j.at("impulse_hi").get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

} // namespace owmf
