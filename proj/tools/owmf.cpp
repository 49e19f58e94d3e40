// owmf: grayscale denoising toolbox around the optimal-weights mixed filter.
// Subcommands: add-noise, denoise, road-map, bench.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "owmf/bench.hpp"
#include "owmf/detect.hpp"
#include "owmf/filter.hpp"
#include "owmf/io.hpp"
#include "owmf/metrics.hpp"
#include "owmf/noise.hpp"
#include "owmf/trilateral.hpp"

namespace {

using namespace owmf;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

struct NoiseFlags {
    double sigma = 0.0;
    double p = 0.0;
    double impulse_lo = 0.0;
    double impulse_hi = 255.0;
    std::uint64_t seed = 0;

    NoiseSpec spec() const { return NoiseSpec{sigma, p, impulse_lo, impulse_hi, seed}; }
};

void add_noise_flags(CLI::App* cmd, NoiseFlags& flags) {
    cmd->add_option("--sigma", flags.sigma, "Gaussian noise std. dev.");
    cmd->add_option("--p", flags.p, "impulse probability in [0,1]");
    cmd->add_option("--impulse-lo", flags.impulse_lo, "lower end of the impulse range");
    cmd->add_option("--impulse-hi", flags.impulse_hi, "upper end of the impulse range");
    cmd->add_option("--seed", flags.seed, "RNG seed; identical seeds reproduce bit-identical noise");
}

struct FilterFlags {
    std::string method = "owmf";
    int search_radius = 6;
    int patch_radius = 12;
    int detect_radius = 2;
    int K = 12;
    std::optional<double> H1;
    std::optional<double> H2;
    std::string kernel = "kappa0";
    double kernel_bandwidth = 2.0;
    int iterations = 1;
    bool j_normalizer = false;
    double sigma_s = 0.5;
    double sigma_r = 40.0;
    double sigma_i = 50.0;
    double sigma_j = 50.0;
    int threads = 0;
};

void add_filter_flags(CLI::App* cmd, FilterFlags& f) {
    cmd->add_option("--method", f.method, "owmf | owf | trif")
        ->check(CLI::IsMember({"owmf", "owf", "trif"}));
    cmd->add_option("--search-radius", f.search_radius, "search window radius h");
    cmd->add_option("--patch-radius", f.patch_radius, "patch window radius eta");
    cmd->add_option("--detect-radius", f.detect_radius, "impulse detection radius d");
    cmd->add_option("--K", f.K, "number of smallest differences aggregated by ROAD/ROADG");
    cmd->add_option("--H1", f.H1, "detection bandwidth (default: formula from p and sigma)");
    cmd->add_option("--H2", f.H2, "averaging bandwidth (default: formula from p)");
    cmd->add_option("--kernel", f.kernel, "patch kernel: kappa0 | gaussian | uniform")
        ->check(CLI::IsMember({"kappa0", "gaussian", "uniform"}));
    cmd->add_option("--kernel-bandwidth", f.kernel_bandwidth, "h_g for the gaussian patch kernel");
    cmd->add_option("--iterations", f.iterations, "pipeline repetitions (1-5)");
    cmd->add_flag("--j-normalizer", f.j_normalizer,
                  "normalize the weighted patch distance by its own kappa*J*J mass");
    cmd->add_option("--sigma-s", f.sigma_s, "trilateral spatial sigma");
    cmd->add_option("--sigma-r", f.sigma_r, "trilateral radiometric sigma");
    cmd->add_option("--sigma-i", f.sigma_i, "trilateral impulse sigma");
    cmd->add_option("--sigma-j", f.sigma_j, "trilateral joint-impulsivity sigma");
    cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

PatchKernel parse_kernel(const std::string& name) {
    if (name == "kappa0") return PatchKernel::kappa0;
    if (name == "gaussian") return PatchKernel::gaussian;
    return PatchKernel::uniform;
}

OwmfParams owmf_params_from(const FilterFlags& f) {
    OwmfParams p;
    p.window.search_radius = f.search_radius;
    p.window.patch_radius = f.patch_radius;
    p.window.detection_radius = f.detect_radius;
    p.detect.d = f.detect_radius;
    p.detect.K = f.K;
    p.H1 = f.H1;
    p.H2 = f.H2;
    p.patch_kernel = parse_kernel(f.kernel);
    p.gauss_bandwidth = f.kernel_bandwidth;
    p.iterations = f.iterations;
    p.j_weighted_normalizer = f.j_normalizer;
    return p;
}

TrifParams trif_params_from(const FilterFlags& f) {
    TrifParams p;
    p.sigma_s = f.sigma_s;
    p.sigma_r = f.sigma_r;
    p.sigma_i = f.sigma_i;
    p.sigma_j = f.sigma_j;
    p.search_radius = f.search_radius;
    p.iterations = f.iterations;
    return p;
}

void warn_full_window_k(const DetectParams& det) {
    if (det.k_is_full_window()) {
        std::cerr << "warning: K=" << det.K
                  << " equals the full deleted neighborhood; the ROAD statistic "
                     "degenerates to a plain mean of all differences\n";
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out << text;
    if (!out) {
        throw IoError("failed writing " + path);
    }
}

// ---- add-noise ----

struct AddNoiseOpts {
    std::string input;
    std::string output;
    std::string mask_path;
    NoiseFlags noise;
    bool raw = false;
};

int run_add_noise(const AddNoiseOpts& opts) {
    const Image clean = load_image(opts.input);
    const NoiseSpec spec = opts.noise.spec();
    spec.validate();
    const NoisyImage noisy = add_mixed(clean, spec);

    const ImageFormat fmt = opts.raw ? ImageFormat::raw_float : ImageFormat::pgm_binary;
    save_image(noisy.image, opts.output, fmt);
    write_text(opts.output + ".json", noise_spec_to_json(spec));

    if (!opts.mask_path.empty()) {
        std::vector<double> mask(noisy.mask.size());
        for (std::size_t i = 0; i < mask.size(); ++i) {
            mask[i] = noisy.mask[i] ? 255.0 : 0.0;
        }
        save_image(Image(clean.width(), clean.height(), std::move(mask)), opts.mask_path);
    }
    std::cerr << "wrote " << opts.output << " (" << noisy.corrupted_count()
              << " impulse pixels)\n";
    return kExitOk;
}

// ---- denoise ----

struct DenoiseOpts {
    std::string input;
    std::string output;
    std::string truth;
    std::string report;
    std::string format = "json";
    double sigma = 0.0;
    double p = 0.0;
    FilterFlags filter;
    bool raw = false;
    bool quantized_psnr = false;
};

std::string quality_json(const QualityReport& q, std::optional<double> psnr_quantized) {
    std::ostringstream out;
    out.precision(17);
    out << "{\n  \"mse\": " << q.mse << ",\n  \"psnr_db\": ";
    if (q.psnr_db) {
        out << *q.psnr_db;
    } else {
        out << "null";
    }
    if (psnr_quantized) {
        out << ",\n  \"psnr_db_quantized\": " << *psnr_quantized;
    }
    out << "\n}\n";
    return out.str();
}

std::string quality_csv(const QualityReport& q, std::optional<double> psnr_quantized) {
    std::ostringstream out;
    out.precision(17);
    out << "mse,psnr_db";
    if (psnr_quantized) {
        out << ",psnr_db_quantized";
    }
    out << "\n" << q.mse << ",";
    if (q.psnr_db) {
        out << *q.psnr_db;
    } else {
        out << "inf";
    }
    if (psnr_quantized) {
        out << "," << *psnr_quantized;
    }
    out << "\n";
    return out.str();
}

int run_denoise(const DenoiseOpts& opts) {
    const Image noisy = load_image(opts.input);

    Image restored;
    if (opts.filter.method == "owf") {
        OwmfParams p = owmf_params_from(opts.filter);
        restored = owf_denoise(noisy, opts.sigma, p.window, opts.filter.threads);
    } else if (opts.filter.method == "owmf") {
        OwmfParams p = owmf_params_from(opts.filter);
        warn_full_window_k(p.detect);
        restored = owmf_denoise(noisy, opts.sigma, opts.p, p, opts.filter.threads);
    } else {
        TrifParams p = trif_params_from(opts.filter);
        warn_full_window_k(p.detect);
        restored = trif_denoise(noisy, p, opts.filter.threads);
    }

    const ImageFormat fmt = opts.raw ? ImageFormat::raw_float : ImageFormat::pgm_binary;
    save_image(restored, opts.output, fmt);
    std::cerr << "wrote " << opts.output << "\n";

    if (!opts.truth.empty()) {
        const Image truth = load_image(opts.truth);
        const QualityReport q = quality(truth, restored);
        std::optional<double> quantized_score;
        if (opts.quantized_psnr) {
            quantized_score = psnr(truth, quantized(restored));
        }
        const std::string text = opts.format == "csv" ? quality_csv(q, quantized_score)
                                                      : quality_json(q, quantized_score);
        std::cout << text;
        if (!opts.report.empty()) {
            write_text(opts.report, text);
        }
    }
    return kExitOk;
}

// ---- road-map ----

struct RoadMapOpts {
    std::string input;
    std::string output;
    std::string stat = "road";
    int detect_radius = 2;
    int K = 12;
    double sigma = 0.0;
    double H = 0.0;
};

int run_road_map(const RoadMapOpts& opts) {
    const Image img = load_image(opts.input);
    DetectParams det{opts.detect_radius, opts.K, opts.sigma};
    warn_full_window_k(det);

    ScalarField field;
    if (opts.stat == "road") {
        field = road_map(img, det.d, det.K);
    } else if (opts.stat == "roadg") {
        field = roadg_map(img, det);
    } else { // j
        if (!(opts.H > 0.0)) {
            throw ValidationError("--stat j requires --H > 0");
        }
        field = j_map(roadg_map(img, det), opts.H);
    }

    if (opts.output.size() >= 4 && opts.output.substr(opts.output.size() - 4) == ".csv") {
        save_field_csv(field, opts.output);
    } else {
        save_field_pgm(field, opts.output);
    }
    std::cerr << "wrote " << opts.output << "\n";
    return kExitOk;
}

// ---- bench ----

struct BenchOpts {
    std::string corpus;
    std::string suite = "custom";
    std::vector<std::string> images;
    std::vector<double> sigmas;
    std::vector<double> ps;
    std::vector<std::string> methods;
    std::vector<std::uint64_t> seeds;
    std::string report;
    std::string format = "json";
    int iterations = 0; // 0 = auto: 1 below p=0.25, 3 from there on
    bool no_trif_sweep = false;
    double impulse_lo = 0.0;
    double impulse_hi = 255.0;
    FilterFlags filter;
};

int auto_iterations(double p) {
    return p < 0.25 ? 1 : 3;
}

void apply_suite_defaults(BenchOpts& opts) {
    if (opts.suite == "gaussian") {
        if (opts.images.empty()) opts.images = {"lena", "barbara", "boat", "house"};
        if (opts.sigmas.empty()) opts.sigmas = {15, 20, 25};
        if (opts.ps.empty()) opts.ps = {0};
        if (opts.methods.empty()) opts.methods = {"owmf", "noisy-baseline"};
    } else if (opts.suite == "impulse") {
        if (opts.images.empty()) opts.images = {"baboon", "bridge", "lena", "pentagon"};
        if (opts.sigmas.empty()) opts.sigmas = {0};
        if (opts.ps.empty()) opts.ps = {0.2, 0.4};
        if (opts.methods.empty()) opts.methods = {"owmf", "noisy-baseline"};
    } else if (opts.suite == "mixed") {
        if (opts.images.empty()) opts.images = {"lena", "bridge", "boat", "barbara"};
        if (opts.sigmas.empty()) opts.sigmas = {10, 20, 30};
        if (opts.ps.empty()) opts.ps = {0.2, 0.3, 0.4, 0.5};
        if (opts.methods.empty()) opts.methods = {"owmf", "trif", "noisy-baseline"};
    } else {
        if (opts.methods.empty()) opts.methods = {"owmf"};
        if (opts.sigmas.empty()) opts.sigmas = {0};
        if (opts.ps.empty()) opts.ps = {0};
    }
    if (opts.seeds.empty()) {
        opts.seeds = {1};
    }
}

int run_bench_cmd(BenchOpts& opts) {
    apply_suite_defaults(opts);
    if (opts.images.empty()) {
        throw ValidationError("no images requested; pass --images or a --suite");
    }

    BenchConfig config;
    config.corpus_dir = opts.corpus;
    config.threads = opts.filter.threads;

    for (const std::string& image : opts.images) {
        for (double sigma : opts.sigmas) {
            for (double p : opts.ps) {
                for (std::uint64_t seed : opts.seeds) {
                    for (const std::string& method : opts.methods) {
                        CellRun cell;
                        cell.image_id = image;
                        cell.noise = NoiseSpec{sigma, p, opts.impulse_lo, opts.impulse_hi, seed};
                        cell.method = parse_method(method);
                        cell.p_hint = p;
                        cell.owmf = owmf_params_from(opts.filter);
                        // published table geometry: m = 25x25 up to sigma 15,
                        // 27x27 beyond, unless the user pinned a patch radius
                        if (opts.suite == "gaussian" && opts.filter.patch_radius == 12 &&
                            sigma > 15.0) {
                            cell.owmf.window.patch_radius = 13;
                        }
                        cell.owmf.iterations =
                            opts.iterations > 0 ? opts.iterations : auto_iterations(p);
                        cell.trif = trif_params_from(opts.filter);
                        cell.trif.iterations = cell.owmf.iterations;
                        cell.trif_sweep = !opts.no_trif_sweep;
                        config.cells.push_back(std::move(cell));
                    }
                }
            }
        }
    }

    const BenchReport report = run_bench(config, std::cerr);
    const std::string text =
        opts.format == "csv" ? report_to_csv(report) : report_to_json(report);
    if (!opts.report.empty()) {
        write_text(opts.report, text);
        std::cerr << "wrote " << opts.report << "\n";
    } else {
        std::cout << text;
    }
    std::cout << format_table(report);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal-weights mixed filter toolbox for grayscale images"};
    app.require_subcommand(1);

    AddNoiseOpts add_opts;
    CLI::App* add_cmd = app.add_subcommand(
        "add-noise", "corrupt an image with seeded gaussian/impulse/mixed noise");
    add_cmd->add_option("--input", add_opts.input, "clean image (PGM or raw)")->required();
    add_cmd->add_option("--output", add_opts.output, "noisy image to write")->required();
    add_cmd->add_option("--mask", add_opts.mask_path, "optional impulse mask image");
    add_cmd->add_flag("--raw", add_opts.raw, "write lossless float64 output");
    add_noise_flags(add_cmd, add_opts.noise);

    DenoiseOpts den_opts;
    CLI::App* den_cmd = app.add_subcommand("denoise", "restore a noisy image");
    den_cmd->add_option("--input", den_opts.input, "noisy image")->required();
    den_cmd->add_option("--output", den_opts.output, "restored image to write")->required();
    den_cmd->add_option("--sigma", den_opts.sigma, "gaussian noise level")->required();
    den_cmd->add_option("--p", den_opts.p, "impulse probability hint for H1/H2");
    den_cmd->add_option("--truth", den_opts.truth, "ground truth; prints a quality report");
    den_cmd->add_option("--report", den_opts.report, "also write the quality report here");
    den_cmd->add_option("--format", den_opts.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    den_cmd->add_flag("--raw", den_opts.raw, "write lossless float64 output");
    den_cmd->add_flag("--quantized-psnr", den_opts.quantized_psnr,
                      "also report PSNR after the 8-bit save rule");
    add_filter_flags(den_cmd, den_opts.filter);

    RoadMapOpts road_opts;
    CLI::App* road_cmd =
        app.add_subcommand("road-map", "dump ROAD/ROADG/J statistics as CSV or image");
    road_cmd->add_option("--input", road_opts.input, "image to analyze")->required();
    road_cmd->add_option("--output", road_opts.output, "*.csv for raw values, else PGM")
        ->required();
    road_cmd->add_option("--stat", road_opts.stat, "road | roadg | j")
        ->check(CLI::IsMember({"road", "roadg", "j"}));
    road_cmd->add_option("--detect-radius", road_opts.detect_radius, "detection radius d");
    road_cmd->add_option("--K", road_opts.K, "order count");
    road_cmd->add_option("--sigma", road_opts.sigma, "gaussian level for roadg/j");
    road_cmd->add_option("--H", road_opts.H, "bandwidth for --stat j");

    BenchOpts bench_opts;
    const char* corpus_env = std::getenv("OWMF_CORPUS");
    bench_opts.corpus = corpus_env != nullptr ? corpus_env : "corpus";
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "run PSNR benchmarks over a corpus directory");
    bench_cmd->add_option("--corpus", bench_opts.corpus,
                          "corpus directory (default: $OWMF_CORPUS or ./corpus)");
    bench_cmd->add_option("--suite", bench_opts.suite,
                          "gaussian | impulse | mixed | custom")
        ->check(CLI::IsMember({"gaussian", "impulse", "mixed", "custom"}));
    bench_cmd->add_option("--images", bench_opts.images, "image ids (corpus file stems)")
        ->delimiter(',');
    bench_cmd->add_option("--sigmas", bench_opts.sigmas, "gaussian levels")->delimiter(',');
    bench_cmd->add_option("--ps", bench_opts.ps, "impulse probabilities")->delimiter(',');
    bench_cmd->add_option("--methods", bench_opts.methods, "methods to run")->delimiter(',');
    bench_cmd->add_option("--seeds", bench_opts.seeds, "noise seeds")->delimiter(',');
    bench_cmd->add_option("--impulse-lo", bench_opts.impulse_lo, "impulse range low end");
    bench_cmd->add_option("--impulse-hi", bench_opts.impulse_hi, "impulse range high end");
    bench_cmd->add_option("--report", bench_opts.report, "report file (default: stdout)");
    bench_cmd->add_option("--format", bench_opts.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    bench_cmd->add_option("--iterations", bench_opts.iterations,
                          "filter iterations (default: 1 below p=0.25, 3 above)");
    bench_cmd->add_flag("--no-trif-sweep", bench_opts.no_trif_sweep,
                        "use the explicit trilateral sigmas instead of the sweep grid");
    add_filter_flags(bench_cmd, bench_opts.filter);

    try {
        app.parse(argc, argv);
        if (add_cmd->parsed()) {
            return run_add_noise(add_opts);
        }
        if (den_cmd->parsed()) {
            return run_denoise(den_opts);
        }
        if (road_cmd->parsed()) {
            return run_road_map(road_opts);
        }
        return run_bench_cmd(bench_opts);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
