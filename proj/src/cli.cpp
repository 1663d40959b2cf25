#include "structforge/cli.hpp"

#include "structforge/corpus.hpp"
#include "structforge/decoder.hpp"
#include "structforge/error.hpp"
#include "structforge/kernels.hpp"
#include "structforge/level.hpp"
#include "structforge/metrics.hpp"
#include "structforge/pgm.hpp"
#include "structforge/raster.hpp"
#include "structforge/stability.hpp"
#include "structforge/tensor_io.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>

namespace structforge::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
    double raster = 0.07;
    int grid = 128;
    double clip = 0.98;
    std::uint64_t seed = 1;
    int parallel = 0;
    std::string out;

    RasterConfig raster_config() const { return {raster, grid, grid}; }
    DecoderConfig decoder_config() const { return {raster_config(), clip, kDefaultPigDiameter}; }
};

std::string error_line(const std::string& kind, const std::string& message) {
    return "error[" + kind + "]: " + message + "\n";
}

std::string describe(const std::exception& e) {
    if (const auto* se = dynamic_cast<const Error*>(&e)) return error_line(se->kind(), se->what());
    return error_line("internal", e.what());
}

std::shared_ptr<spdlog::logger> logger() {
    static std::shared_ptr<spdlog::logger> log = [] {
        auto l = spdlog::stderr_color_mt("structforge");
        l->set_pattern("%l: %v");
        l->set_level(spdlog::level::warn);
        if (const char* env = std::getenv("STRUCTFORGE_LOG")) l->set_level(spdlog::level::from_str(env));
        return l;
    }();
    return log;
}

// Sorted files with the given extension, or the path itself if it is a file.
std::vector<fs::path> list_inputs(const fs::path& input, const std::string& ext) {
    if (fs::is_directory(input)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(input)) {
            if (entry.is_regular_file() && entry.path().extension() == ext) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        return files;
    }
    if (!fs::exists(input)) throw Error("input not found: " + input.string());
    return {input};
}

fs::path output_for(const fs::path& input, const fs::path& file, const std::string& out, const std::string& ext) {
    if (fs::is_directory(input)) {
        if (out.empty()) throw Error("directory input needs -o <dir>");
        return fs::path(out) / (file.stem().string() + ext);
    }
    if (!out.empty()) return out;
    auto p = file;
    return p.replace_extension(ext);
}

void prepare_output(const fs::path& input, const std::string& out) {
    if (fs::is_directory(input) && !out.empty()) fs::create_directories(out);
}

Structure load_structure(const fs::path& path) {
    auto parsed = parse_level(read_file(path));
    for (const auto& w : parsed.warnings) logger()->info("{}: {}", path.string(), w);
    return std::move(parsed.structure);
}

// Runs fn over files in parallel with per-file error isolation. Returns the
// number of failures; per-file output is emitted in path order.
struct FileOutcome {
    std::string text;
    std::string error;
    int status = kOk;
};

std::size_t for_each_file(const std::vector<fs::path>& files, std::ostream& out, std::ostream& err,
                          const std::function<FileOutcome(const fs::path&)>& fn, int* worst_status = nullptr) {
    std::vector<FileOutcome> results(files.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < files.size(); ++i) {
        try {
            results[i] = fn(files[i]);
        } catch (const std::exception& e) {
            results[i].error = files[i].string() + ": " + describe(e);
            results[i].status = kError;
        }
    }
    std::size_t failures = 0;
    for (const auto& r : results) {
        out << r.text;
        if (!r.error.empty()) {
            err << r.error;
            ++failures;
        }
        if (worst_status) *worst_status = std::max(*worst_status, r.status);
    }
    if (failures > 0) err << "summary: " << failures << " of " << files.size() << " files failed\n";
    return failures;
}

int cmd_encode(const Globals& g, const std::string& input, std::ostream& out, std::ostream& err) {
    const auto files = list_inputs(input, ".xml");
    prepare_output(input, g.out);
    const auto config = g.raster_config();
    const auto failures = for_each_file(files, out, err, [&](const fs::path& file) {
        const auto tensor = to_multilayer(rasterize(load_structure(file), config));
        const auto target = output_for(input, file, g.out, ".abg1");
        write_abg1_file(target, tensor);
        return FileOutcome{"encoded " + file.string() + " -> " + target.string() + "\n", {}};
    });
    return failures ? kError : kOk;
}

int cmd_decode(const Globals& g, const std::string& input, std::ostream& out, std::ostream& err) {
    const auto files = list_inputs(input, ".abg1");
    prepare_output(input, g.out);
    const auto config = g.decoder_config();
    const auto failures = for_each_file(files, out, err, [&](const fs::path& file) {
        const auto tensor = read_abg1_file(file);
        const auto structure = decode(tensor, config);
        const auto target = output_for(input, file, g.out, ".xml");
        write_file_atomic(target, serialize_level(structure));
        return FileOutcome{"decoded " + file.string() + " -> " + target.string() + " (" +
                           std::to_string(structure.blocks.size()) + " blocks, " +
                           std::to_string(structure.pigs.size()) + " pigs)\n", {}};
    });
    return failures ? kError : kOk;
}

struct CorpusOptions {
    std::size_t count = 0;
    int min_rows = 1;
    int max_rows = 6;
    double min_width = 1.0;
    double max_width = 6.0;
    double pig_probability = 0.6;
};

int cmd_gen_corpus(const Globals& g, const CorpusOptions& o, std::ostream& out) {
    if (g.out.empty()) throw Error("gen-corpus needs -o <dir>");
    GeneratorParams params;
    params.seed = g.seed;
    params.min_rows = o.min_rows;
    params.max_rows = o.max_rows;
    params.min_row_width = o.min_width;
    params.max_row_width = o.max_width;
    params.pig_probability = o.pig_probability;
    params.raster = g.raster_config();
    params.validate();

    const auto corpus = generate_corpus(params, o.count);
    fs::create_directories(g.out);
    std::vector<std::string> lines(corpus.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "level_%05zu.xml", i);
        write_file_atomic(fs::path(g.out) / name, serialize_level(corpus[i]));
        lines[i] = manifest_line(name, metadata_key(corpus[i]), shape_key(corpus[i], params.raster));
    }
    std::string manifest = "# path\twood\tice\tstone\twidth_bucket\theight_bucket\tshape_sha256\n";
    for (const auto& l : lines) manifest += l + "\n";
    write_file_atomic(fs::path(g.out) / "manifest.tsv", manifest);
    out << "generated " << corpus.size() << " structures in " << g.out << "\n";
    return kOk;
}

int cmd_filter(const Globals& g, const std::string& input, std::ostream& out, std::ostream& err) {
    if (g.out.empty()) throw Error("filter needs -o <dir>");
    const auto files = list_inputs(input, ".xml");
    std::vector<std::optional<Structure>> parsed(files.size());
    std::vector<std::string> errors(files.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < files.size(); ++i) {
        try {
            parsed[i] = load_structure(files[i]);
        } catch (const std::exception& e) {
            errors[i] = files[i].string() + ": " + describe(e);
        }
    }
    std::vector<Structure> structures;
    std::vector<fs::path> names;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (parsed[i]) {
            structures.push_back(std::move(*parsed[i]));
            names.push_back(files[i]);
        } else {
            err << errors[i];
            ++failures;
        }
    }

    const auto config = g.raster_config();
    const auto result = filter_corpus(structures, config);
    fs::create_directories(g.out);
    std::string manifest = "# path\twood\tice\tstone\twidth_bucket\theight_bucket\tshape_sha256\n";
    for (auto i : result.kept) {
        const auto name = names[i].filename();
        write_file_atomic(fs::path(g.out) / name, read_file(names[i]));
        manifest += manifest_line(name.string(), metadata_key(structures[i]), shape_key(structures[i], config)) + "\n";
    }
    write_file_atomic(fs::path(g.out) / "manifest.tsv", manifest);

    std::string report = "# path\treason\tduplicate_of\n";
    std::size_t by_meta = 0;
    for (const auto& d : result.drops) {
        const bool meta = d.reason == FilterDrop::Reason::Metadata;
        by_meta += meta ? 1 : 0;
        report += names[d.index].filename().string() + "\t" + (meta ? "metadata" : "shape") + "\t" +
                  names[d.duplicate_of].filename().string() + "\n";
    }
    write_file_atomic(fs::path(g.out) / "dropped.tsv", report);
    out << "kept " << result.kept.size() << " of " << structures.size() << " (dropped " << result.dropped() << ": "
        << by_meta << " metadata, " << result.dropped() - by_meta << " shape)\n";
    if (failures) err << "summary: " << failures << " of " << files.size() << " files failed\n";
    return failures ? kError : kOk;
}

int cmd_stats(const Globals& g, const std::string& input, const std::string& csv, std::ostream& out,
              std::ostream& err) {
    const auto files = list_inputs(input, ".xml");
    const auto config = g.raster_config();
    std::vector<std::optional<StructureMetrics>> metrics(files.size());
    const auto failures = for_each_file(files, out, err, [&](const fs::path& file) {
        const auto i = static_cast<std::size_t>(std::find(files.begin(), files.end(), file) - files.begin());
        metrics[i] = structure_metrics(load_structure(file), config);
        return FileOutcome{};
    });
    std::vector<StructureMetrics> ok;
    for (auto& m : metrics)
        if (m) ok.push_back(*m);
    const auto summary = corpus_summary(ok);
    out << format_summary_table(summary);
    if (!csv.empty()) write_file_atomic(csv, format_frequency_csv(summary));
    return failures ? kError : kOk;
}

int cmd_stability(const std::string& input, bool records, std::ostream& out, std::ostream& err) {
    const auto files = list_inputs(input, ".xml");
    int worst = kOk;
    for_each_file(
        files, out, err,
        [&](const fs::path& file) {
            const auto report = check_stability(load_structure(file));
            return FileOutcome{records ? format_report_records(file.string(), report)
                                       : format_report_text(file.string(), report),
                               "", report.stable ? kOk : kUnstable};
        },
        &worst);
    return worst;
}

int cmd_render(const Globals& g, const std::string& input, bool ranking, std::ostream& out) {
    if (g.out.empty()) throw Error("render needs -o <dir>");
    const fs::path in(input);
    if (!fs::exists(in)) throw Error("input not found: " + input);
    LayerTensor tensor = in.extension() == ".xml" ? to_multilayer(rasterize(load_structure(in), g.raster_config()))
                                                  : read_abg1_file(in);
    if (tensor.layers() != kLabelCount) throw ValidationError("render expects a 5-layer tensor");
    fs::create_directories(g.out);
    static constexpr const char* kLayerNames[] = {"air", "wood", "ice", "stone", "pig"};
    const std::size_t plane = std::size_t(tensor.height()) * tensor.width();
    std::size_t written = 0;
    for (int l = 0; l < tensor.layers(); ++l) {
        const auto layer = tensor.values().subspan(std::size_t(l) * plane, plane);
        write_file_atomic(fs::path(g.out) / ("layer_" + std::to_string(l) + "_" + kLayerNames[l] + ".pgm"),
                          encode_pgm(std::span<const float>(layer), tensor.width(), tensor.height()));
        ++written;
    }
    write_file_atomic(fs::path(g.out) / "flat.pgm", encode_label_pgm(from_multilayer(tensor)));
    ++written;
    if (ranking) {
        const auto masks = material_masks(tensor);
        const auto config = g.decoder_config();
        for (auto m : kMaterials) {
            if (masks.of(m).count() == 0) continue;
            const auto r = build_selection_ranking(masks.of(m), config);
            for (std::size_t k = 0; k < kDecoderLayerCount; ++k) {
                const auto name = "ranking_" + std::string(material_name(m)) + "_" + std::string(kDecoderLayers[k].id);
                write_file_atomic(fs::path(g.out) / (name + ".pgm"),
                                  encode_pgm(r.selection_layer(k), r.width(), r.height()));
                ++written;
            }
        }
    }
    out << "wrote " << written << " images to " << g.out << "\n";
    return kOk;
}

int cmd_validate(const Globals& g, const std::string& input, std::ostream& out, std::ostream& err) {
    const auto files = list_inputs(input, ".xml");
    int worst = kOk;
    const auto config = g.raster_config();
    for_each_file(
        files, out, err,
        [&](const fs::path& file) {
            const auto parsed = parse_level(read_file(file));
            const auto& s = parsed.structure;
            std::vector<std::string> issues;
            for (const auto& [i, j] : overlapping_pairs(s))
                issues.push_back("blocks " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
            for (std::size_t i = 0; i < s.blocks.size(); ++i) {
                if (s.blocks[i].bottom() < -kOverlapEpsilon)
                    issues.push_back("block " + std::to_string(i) + " extends below ground");
            }
            try {
                rasterize(s, config);
            } catch (const CapacityError& e) {
                issues.push_back(e.what());
            }
            std::ostringstream text;
            text << file.string() << ": " << (issues.empty() ? "valid" : "INVALID") << " (" << s.blocks.size()
                 << " blocks, " << s.pigs.size() << " pigs, " << parsed.warnings.size() << " warnings)\n";
            for (const auto& w : parsed.warnings) text << "  warning: " << w << "\n";
            for (const auto& issue : issues) text << "  " << issue << "\n";
            return FileOutcome{text.str(), "", issues.empty() ? kOk : kUnstable};
        },
        &worst);
    return worst;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"structforge: Science Birds structure encoding, decoding and analysis"};
    app.require_subcommand(1);
    Globals g;
    auto add_globals = [&g](CLI::App* sub) {
        sub->add_option("--raster", g.raster, "raster size in units per cell")->capture_default_str();
        sub->add_option("--grid", g.grid, "grid width and height in cells")->capture_default_str();
        sub->add_option("--clip", g.clip, "hit-probability clip threshold")->capture_default_str();
        sub->add_option("--seed", g.seed, "random seed")->capture_default_str();
        sub->add_option("--parallel", g.parallel, "worker threads (0 = OpenMP default)");
        sub->add_option("-o,--out", g.out, "output file or directory");
    };

    std::string input;
    auto* encode = app.add_subcommand("encode", "XML level(s) -> ABG1 one-hot tensor(s)");
    encode->add_option("input", input, "XML file or directory")->required();
    auto* decode_cmd = app.add_subcommand("decode", "ABG1 tensor(s) -> XML level(s)");
    decode_cmd->add_option("input", input, "ABG1 file or directory")->required();

    CorpusOptions corpus;
    auto* gen = app.add_subcommand("gen-corpus", "generate row-stacked structures");
    gen->add_option("--count", corpus.count, "number of structures")->required();
    gen->add_option("--min-rows", corpus.min_rows)->capture_default_str();
    gen->add_option("--max-rows", corpus.max_rows)->capture_default_str();
    gen->add_option("--min-width", corpus.min_width)->capture_default_str();
    gen->add_option("--max-width", corpus.max_width)->capture_default_str();
    gen->add_option("--pig-probability", corpus.pig_probability)->capture_default_str();

    auto* filter = app.add_subcommand("filter", "drop metadata and outline duplicates");
    filter->add_option("input", input, "directory of XML levels")->required();

    std::string csv;
    auto* stats = app.add_subcommand("stats", "corpus diversity statistics");
    stats->add_option("input", input, "XML file or directory")->required();
    stats->add_option("--csv", csv, "also write the frequency table as CSV");

    bool records = false;
    auto* stability = app.add_subcommand("stability", "static stability check");
    stability->add_option("input", input, "XML file or directory")->required();
    stability->add_flag("--records", records, "key=value records instead of text");

    bool ranking = false;
    auto* render = app.add_subcommand("render", "PGM images of a tensor or level");
    render->add_option("input", input, "ABG1 or XML file")->required();
    render->add_flag("--ranking", ranking, "also dump Selection-Ranking heatmaps");

    auto* validate = app.add_subcommand("validate", "check a level against structure invariants");
    validate->add_option("input", input, "XML file or directory")->required();

    for (auto* sub : {encode, decode_cmd, gen, filter, stats, stability, render, validate}) add_globals(sub);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << error_line("usage", e.what());
        return kError;
    }

    try {
        if (g.parallel < 0) throw ValidationError("--parallel must be >= 0");
        if (g.parallel > 0) kernels::set_threads(g.parallel);
        g.raster_config().validate();
        if (g.clip < 0.0 || g.clip > 1.0) throw ValidationError("--clip must lie in [0, 1]");
        logger()->debug("threads: {}", kernels::max_threads());

        if (encode->parsed()) return cmd_encode(g, input, out, err);
        if (decode_cmd->parsed()) return cmd_decode(g, input, out, err);
        if (gen->parsed()) return cmd_gen_corpus(g, corpus, out);
        if (filter->parsed()) return cmd_filter(g, input, out, err);
        if (stats->parsed()) return cmd_stats(g, input, csv, out, err);
        if (stability->parsed()) return cmd_stability(input, records, out, err);
        if (render->parsed()) return cmd_render(g, input, ranking, out);
        if (validate->parsed()) return cmd_validate(g, input, out, err);
    } catch (const std::exception& e) {
        err << describe(e);
        return kError;
    }
    return kError;
}

}  // namespace structforge::cli
