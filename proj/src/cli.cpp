#include "typdiv/cli.hpp"

#include "typdiv/csv.hpp"
#include "typdiv/distance.hpp"
#include "typdiv/error.hpp"
#include "typdiv/frame.hpp"
#include "typdiv/metrics.hpp"
#include "typdiv/persistence.hpp"
#include "typdiv/rng.hpp"
#include "typdiv/sampling.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#ifndef TYPDIV_VERSION
#define TYPDIV_VERSION "dev"
#endif

namespace typdiv {

namespace {

struct RunConfig {
    std::string subcommand;

    std::string frame;
    std::string cldf_values;
    std::string cldf_languages;
    std::string meta;
    std::string binmap;
    std::string matrix;
    std::string features;
    std::string freq_list;
    std::string scores;
    std::string sample;
    std::string base_sample;
    std::string candidates;
    std::string output;

    double crop = kDefaultCropThreshold;
    bool binarize = true;
    bool macro_filter = true;
    bool normalize = true;
    bool geo = false;
    bool drop_uncovered = false;
    unsigned threads = 0;

    std::vector<std::string> methods;
    std::size_t k = 0;
    std::string k_range;
    std::size_t runs = 10;
    std::uint64_t seed = 0;
    std::size_t additions = 1;
    bool aggregate = false;
};

// Everything a subcommand may need, derived from the inputs once.
struct Pipeline {
    std::optional<FeatureMatrix> features;
    LanguageTable records;
    bool have_records = false;
    DistanceMatrix dm;
    std::string frame_hash;
    std::vector<std::string> notes;
};

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool wants_features(const RunConfig& cfg)
{
    return !cfg.frame.empty() || !cfg.cldf_values.empty();
}

void load_records(const RunConfig& cfg, Pipeline& p, const LanguageTable* cldf_languages)
{
    if (!cfg.meta.empty()) {
        p.records = load_language_table(cfg.meta);
        p.have_records = true;
    } else if (cldf_languages != nullptr) {
        p.records = *cldf_languages;
        p.have_records = true;
    }
}

// Ingestion and preprocessing: macro-language removal, binarization, then
// cropping on the binarized coverage.
void load_features(const RunConfig& cfg, Pipeline& p)
{
    if (!cfg.frame.empty() && !cfg.cldf_values.empty()) {
        throw Error(ErrorKind::Config, "give either --frame or --cldf-values, not both");
    }
    if (!cfg.cldf_values.empty() && cfg.cldf_languages.empty()) {
        throw Error(ErrorKind::Config, "--cldf-values needs --cldf-languages");
    }

    std::optional<BinarizationMap> explicit_map;
    if (cfg.binarize && !cfg.binmap.empty()) explicit_map = load_binarization_map(cfg.binmap);
    const BinarizationMap* ingest_map = nullptr;
    if (cfg.binarize) ingest_map = explicit_map ? &*explicit_map : &default_binarization_map();

    FeatureMatrix matrix;
    if (!cfg.frame.empty()) {
        matrix = ingest_map ? load_wide_csv(cfg.frame, *ingest_map) : load_wide_csv(cfg.frame);
        load_records(cfg, p, nullptr);
    } else {
        CldfData data = load_cldf(cfg.cldf_values, cfg.cldf_languages, ingest_map);
        matrix = std::move(data.matrix);
        load_records(cfg, p, &data.languages);
    }

    if (cfg.macro_filter) {
        if (!p.have_records) {
            throw Error(ErrorKind::Config,
                        "macro-language filter needs --meta with a child_count column (or pass --no-macro-filter)");
        }
        matrix = remove_macrolanguages(matrix, p.records);
    }
    if (cfg.binarize) {
        const BinarizationMap map =
            explicit_map ? *explicit_map : default_binarization_map().restricted_to(matrix.feature_ids());
        if (map.size() > 0) matrix = binarize(matrix, map);
    }
    matrix = crop_languages(matrix, cfg.crop);
    if (!cfg.features.empty()) {
        const auto wanted = split_list(cfg.features);
        matrix = subselect_features(matrix, wanted);
    }
    if (!matrix.is_binary()) {
        throw Error(ErrorKind::Config, "frame still holds multistate values; enable binarization or subselect features");
    }
    if (matrix.empty()) throw Error(ErrorKind::Size, "no languages left after preprocessing");

    if (cfg.drop_uncovered) {
        CoverageRepair repaired = drop_zero_coverage_languages(matrix);
        for (const auto& id : repaired.dropped) p.notes.push_back("dropped " + id + " (no shared coverage)");
        matrix = std::move(repaired.matrix);
    }

    std::ostringstream canonical;
    save_wide_csv(canonical, matrix);
    p.frame_hash = hex64(fnv1a64(canonical.str()));
    p.features = std::move(matrix);
}

Pipeline build_pipeline(const RunConfig& cfg, bool need_features)
{
    Pipeline p;
    if (wants_features(cfg)) load_features(cfg, p);
    else if (!cfg.meta.empty()) load_records(cfg, p, nullptr);

    if (need_features && !p.features) {
        throw Error(ErrorKind::Config, "this command needs a feature frame (--frame or --cldf-values/--cldf-languages)");
    }

    if (!cfg.matrix.empty()) {
        p.dm = load_distance_matrix(cfg.matrix);
        if (p.frame_hash.empty()) {
            std::ostringstream text;
            save_distance_matrix(text, p.dm);
            p.frame_hash = hex64(fnv1a64(text.str()));
        }
    } else if (cfg.geo) {
        if (!p.have_records) throw Error(ErrorKind::Config, "--geo needs --meta with coordinates");
        if (p.features) {
            p.dm = build_geo_matrix(p.records, p.features->language_ids());
        } else {
            p.dm = build_geo_matrix(p.records);
            std::ostringstream text;
            for (const auto& r : p.records.records()) {
                text << r.glottocode << ',' << format_double(*r.latitude) << ',' << format_double(*r.longitude) << '\n';
            }
            p.frame_hash = hex64(fnv1a64(text.str()));
        }
    } else if (p.features) {
        p.dm = build_typ_matrix(*p.features, BuildOptions{cfg.threads});
    } else {
        throw Error(ErrorKind::Config, "no input: give --frame, --cldf-values/--cldf-languages, --matrix or --geo with --meta");
    }

    if (cfg.normalize && !p.dm.normalized() && p.dm.size() >= 2) p.dm = normalize_minmax(p.dm);
    return p;
}

Provenance provenance(const RunConfig& cfg, const Pipeline& p)
{
    Provenance out;
    out.emplace_back("typdiv_version", TYPDIV_VERSION);
    out.emplace_back("command", cfg.subcommand);
    out.emplace_back("frame_hash", p.frame_hash);
    out.emplace_back("distances", std::string(to_string(p.dm.kind())) + (p.dm.normalized() ? " normalized" : " raw"));
    std::string flags;
    if (p.features) {
        flags += std::string("binarize=") + (cfg.binarize ? "on" : "off");
        flags += std::string(" macro_filter=") + (cfg.macro_filter ? "on" : "off");
        flags += " crop=" + format_double(cfg.crop, 6);
        if (!cfg.features.empty()) flags += " features=" + cfg.features;
        if (cfg.drop_uncovered) flags += " drop_uncovered=on";
    }
    if (!cfg.matrix.empty()) flags += std::string(flags.empty() ? "" : " ") + "matrix=file";
    if (!flags.empty()) out.emplace_back("flags", flags);
    for (const auto& note : p.notes) out.emplace_back("note", note);
    return out;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text)
{
    if (cfg.output.empty()) out << text;
    else write_text_file(cfg.output, text);
}

SamplingFrame make_frame(const RunConfig& cfg, const Pipeline& p, Method method, std::ostream& err)
{
    std::vector<std::string> languages = p.dm.language_ids();
    std::map<std::string, std::string> groups;
    if (method == Method::RandomFamily || method == Method::RandomGenus) {
        if (!p.have_records) throw Error(ErrorKind::Config, "group sampling needs --meta with family/genus labels");
        for (const auto& id : languages) {
            const LanguageRecord* rec = p.records.find(id);
            if (rec == nullptr) continue;
            const auto& label = method == Method::RandomFamily ? rec->family : rec->genus;
            if (label) groups.emplace(id, *label);
        }
        if (groups.empty()) {
            throw Error(ErrorKind::Config, std::string("no ") + (method == Method::RandomFamily ? "family" : "genus") +
                                               " labels for the frame languages");
        }
    }
    std::vector<std::pair<std::string, long long>> frequencies;
    if (method == Method::Convenience) {
        if (cfg.freq_list.empty()) throw Error(ErrorKind::Config, "convenience sampling needs --freq-list");
        std::size_t dropped = 0;
        SamplingFrame probe(languages);
        for (auto& entry : load_frequency_list(cfg.freq_list)) {
            if (probe.contains(entry.first)) frequencies.push_back(std::move(entry));
            else ++dropped;
        }
        if (dropped > 0) err << "typdiv: note: " << dropped << " frequency-listed language(s) outside the frame ignored\n";
        if (frequencies.empty()) throw Error(ErrorKind::Config, "no frequency-listed language is in the frame");
    }
    return SamplingFrame(std::move(languages), std::move(groups), std::move(frequencies));
}

Sample draw(Method method, const DistanceMatrix& dm, const SamplingFrame& frame, std::size_t k, std::uint64_t seed)
{
    switch (method) {
    case Method::MaxSum: return sample_maxsum(dm, frame, k);
    case Method::MaxMin: return sample_maxmin(dm, frame, k);
    case Method::Random: return sample_random(frame, k, seed);
    case Method::RandomFamily: return sample_by_group(frame, k, seed, GroupLevel::Family);
    case Method::RandomGenus: return sample_by_group(frame, k, seed, GroupLevel::Genus);
    case Method::Convenience: return sample_convenience(frame, k, seed);
    case Method::Extension: break;
    }
    throw Error(ErrorKind::Argument, "method 'extension' is only available through the expand command");
}

Method single_method(const RunConfig& cfg)
{
    if (cfg.methods.size() != 1) throw Error(ErrorKind::Argument, "give exactly one --method");
    auto m = parse_method(cfg.methods.front());
    if (!m || *m == Method::Extension) {
        throw Error(ErrorKind::Argument, "unknown method '" + cfg.methods.front() +
                                             "' (maxsum, maxmin, random, random_family, random_genus, convenience)");
    }
    return *m;
}

std::string metric_row(const std::string& name, double value, std::size_t n, std::size_t d, const std::string& hash)
{
    return name + "," + format_fixed(value, 5) + "," + std::to_string(n) + "," + std::to_string(d) + "," + hash + "\n";
}

// --- subcommands ---------------------------------------------------------------

void cmd_matrix(const RunConfig& cfg, std::ostream& out)
{
    Pipeline p = build_pipeline(cfg, false);
    std::ostringstream text;
    save_distance_matrix(text, p.dm, provenance(cfg, p));
    emit(cfg, out, text.str());
}

void cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Method method = single_method(cfg);
    Pipeline p = build_pipeline(cfg, false);
    const SamplingFrame frame = make_frame(cfg, p, method, err);
    Sample s = draw(method, p.dm, frame, cfg.k, cfg.seed);
    std::ostringstream text;
    save_sample(text, s, provenance(cfg, p));
    emit(cfg, out, text.str());
}

void cmd_metrics(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.sample.empty()) throw Error(ErrorKind::Config, "metrics needs --sample");
    Pipeline p = build_pipeline(cfg, true);
    const Sample s = load_sample(cfg.sample);

    std::string missing;
    for (const auto& id : s.languages) {
        if (!p.features->language_index(id) || !p.dm.index_of(id)) missing += (missing.empty() ? "" : ", ") + id;
    }
    if (!missing.empty()) throw Error(ErrorKind::Coverage, "sample languages absent from the frame: " + missing);

    const DiversityReport r = diversity_report(s.languages, p.dm, *p.features);
    std::ostringstream text;
    write_provenance(text, provenance(cfg, p));
    text << "metric,value,sample_size,d,frame_hash\n";
    text << metric_row("mpd", r.mpd, r.sample_size, r.d, p.frame_hash);
    text << metric_row("fvo", r.fvo, r.sample_size, r.d, p.frame_hash);
    text << metric_row("fvi", r.fvi, r.sample_size, r.d, p.frame_hash);
    text << metric_row("entropy", r.entropy, r.sample_size, r.d, p.frame_hash);

    if (!cfg.scores.empty()) {
        const auto table = load_score_table(cfg.scores);
        const ScoreSummary sum = evaluate_sample_scores(s.languages, table);
        auto rows = [&](const std::string& prefix, const ScoreStats& st) {
            text << metric_row(prefix + "_mean", st.mean, st.n, r.d, p.frame_hash);
            text << metric_row(prefix + "_sd", st.sd, st.n, r.d, p.frame_hash);
            text << metric_row(prefix + "_min", st.min, st.n, r.d, p.frame_hash);
            text << metric_row(prefix + "_max", st.max, st.n, r.d, p.frame_hash);
        };
        rows("score_sample", sum.sample);
        rows("score_population", sum.population);
        for (const auto& id : sum.uncovered) text << "# unscored=" << id << '\n';
    }
    emit(cfg, out, text.str());
}

std::pair<std::size_t, std::size_t> parse_k_range(const std::string& text, std::size_t frame_size)
{
    auto colon = text.find(':');
    std::size_t lo = 0;
    std::size_t hi = 0;
    try {
        if (colon == std::string::npos) throw std::invalid_argument("no colon");
        std::size_t used = 0;
        lo = std::stoul(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("lo");
        hi = std::stoul(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) throw std::invalid_argument("hi");
    } catch (const std::exception&) {
        throw Error(ErrorKind::Argument, "--k-range must look like lo:hi, got '" + text + "'");
    }
    if (lo < 1 || lo > hi || hi > frame_size) {
        throw Error(ErrorKind::Argument, "--k-range needs 1 <= lo <= hi <= " + std::to_string(frame_size) +
                                             ", got " + text);
    }
    return {lo, hi};
}

void cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.runs < 1) throw Error(ErrorKind::Argument, "--runs must be at least 1");
    if (cfg.k_range.empty()) throw Error(ErrorKind::Argument, "sweep needs --k-range lo:hi");

    std::vector<Method> methods;
    for (const auto& name : cfg.methods) {
        for (const auto& part : split_list(name)) {
            auto m = parse_method(part);
            if (!m || *m == Method::Extension) throw Error(ErrorKind::Argument, "unknown method '" + part + "'");
            if (std::find(methods.begin(), methods.end(), *m) == methods.end()) methods.push_back(*m);
        }
    }
    if (methods.empty()) methods = {Method::MaxSum, Method::MaxMin, Method::Random};
    std::sort(methods.begin(), methods.end());

    Pipeline p = build_pipeline(cfg, true);
    const auto [lo, hi] = parse_k_range(cfg.k_range, p.dm.size());

    struct Row {
        Method method;
        std::size_t k;
        std::size_t run;
        DiversityReport report;
    };
    std::vector<Row> rows;
    for (Method method : methods) {
        const SamplingFrame frame = make_frame(cfg, p, method, err);
        const std::size_t runs = is_seeded(method) ? cfg.runs : 1;
        for (std::size_t k = lo; k <= hi; ++k) {
            for (std::size_t run = 0; run < runs; ++run) {
                const Sample s = draw(method, p.dm, frame, k, cfg.seed + run);
                rows.push_back({method, k, run, diversity_report(s.languages, p.dm, *p.features)});
            }
        }
    }

    std::ostringstream text;
    Provenance prov = provenance(cfg, p);
    prov.emplace_back("seed", std::to_string(cfg.seed));
    prov.emplace_back("runs", std::to_string(cfg.runs));
    write_provenance(text, prov);
    if (!cfg.aggregate) {
        text << "method,k,run,mpd,fvo,fvi,entropy\n";
        for (const auto& r : rows) {
            text << to_string(r.method) << ',' << r.k << ',' << r.run << ',' << format_fixed(r.report.mpd, 5) << ','
                 << format_fixed(r.report.fvo, 5) << ',' << format_fixed(r.report.fvi, 5) << ','
                 << format_fixed(r.report.entropy, 5) << '\n';
        }
    } else {
        text << "method,k,runs,mpd_mean,mpd_sd,fvo_mean,fvo_sd,fvi_mean,fvi_sd,entropy_mean,entropy_sd\n";
        for (std::size_t i = 0; i < rows.size();) {
            std::size_t j = i;
            while (j < rows.size() && rows[j].method == rows[i].method && rows[j].k == rows[i].k) ++j;
            text << to_string(rows[i].method) << ',' << rows[i].k << ',' << (j - i);
            for (auto field : {&DiversityReport::mpd, &DiversityReport::fvo, &DiversityReport::fvi,
                               &DiversityReport::entropy}) {
                double sum = 0.0;
                for (std::size_t r = i; r < j; ++r) sum += rows[r].report.*field;
                const double mean = sum / static_cast<double>(j - i);
                double sq = 0.0;
                for (std::size_t r = i; r < j; ++r) sq += std::pow(rows[r].report.*field - mean, 2);
                text << ',' << format_fixed(mean, 5) << ',' << format_fixed(std::sqrt(sq / static_cast<double>(j - i)), 5);
            }
            text << '\n';
            i = j;
        }
    }
    emit(cfg, out, text.str());
}

void cmd_expand(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.base_sample.empty()) throw Error(ErrorKind::Config, "expand needs --base-sample");
    Objective objective = Objective::MaxSum;
    if (!cfg.methods.empty()) {
        if (cfg.methods.size() == 1 && cfg.methods[0] == "maxsum") objective = Objective::MaxSum;
        else if (cfg.methods.size() == 1 && cfg.methods[0] == "maxmin") objective = Objective::MaxMin;
        else throw Error(ErrorKind::Argument, "expand objective must be maxsum or maxmin");
    }

    Pipeline p = build_pipeline(cfg, true);
    const Sample base = load_sample(cfg.base_sample);
    std::vector<std::string> candidates;
    if (!cfg.candidates.empty()) candidates = load_id_list(cfg.candidates);

    const SamplingFrame frame(p.dm.language_ids());
    Sample s = extend_sample(p.dm, frame, base.languages, cfg.additions, objective, candidates);
    s.seed.reset();

    std::vector<std::string> added(s.languages.begin() + static_cast<std::ptrdiff_t>(s.base_size), s.languages.end());
    Provenance prov = provenance(cfg, p);
    prov.emplace_back("objective", objective == Objective::MaxSum ? "maxsum" : "maxmin");
    std::string added_list;
    for (const auto& id : added) added_list += (added_list.empty() ? "" : ";") + id;
    prov.emplace_back("added", added_list);

    // Before/after metrics; pairwise metrics need two languages.
    auto fmt = [](std::optional<double> v) { return v ? format_fixed(*v, 5) : std::string("NA"); };
    auto pairwise = [&](auto fn, const std::vector<std::string>& ids) -> std::optional<double> {
        if (ids.size() < 2) return std::nullopt;
        return fn(ids);
    };
    const std::vector<std::string>& after = s.languages;
    const std::vector<std::string>& before = base.languages;
    auto mpd_of = [&](const std::vector<std::string>& ids) { return mpd(ids, p.dm); };
    auto fvo_of = [&](const std::vector<std::string>& ids) { return fvo(ids, *p.features); };
    struct Line {
        const char* name;
        std::optional<double> before;
        std::optional<double> after;
    };
    std::vector<Line> lines = {
        {"mpd", pairwise(mpd_of, before), pairwise(mpd_of, after)},
        {"fvo", pairwise(fvo_of, before), pairwise(fvo_of, after)},
        {"fvi", before.empty() ? std::nullopt : std::optional(fvi(before, *p.features)), fvi(after, *p.features)},
        {"entropy", before.empty() ? std::nullopt : std::optional(entropy(before, *p.features)),
         entropy(after, *p.features)},
    };
    for (const auto& l : lines) prov.emplace_back(std::string("metric_") + l.name, fmt(l.before) + " -> " + fmt(l.after));

    std::ostringstream text;
    save_sample(text, s, prov);
    emit(cfg, out, text.str());
    if (!cfg.output.empty()) {
        out << "added: " << added_list << '\n';
        out << "metric,before,after\n";
        for (const auto& l : lines) out << l.name << ',' << fmt(l.before) << ',' << fmt(l.after) << '\n';
    }
}

void cmd_audit(const RunConfig& cfg, std::ostream& out)
{
    Pipeline p = build_pipeline(cfg, true);
    if (!p.have_records) throw Error(ErrorKind::Config, "audit needs family labels (--meta or --cldf-languages)");
    const bool any_family = std::any_of(p.features->language_ids().begin(), p.features->language_ids().end(),
                                        [&](const std::string& id) {
                                            const LanguageRecord* rec = p.records.find(id);
                                            return rec != nullptr && rec->family.has_value();
                                        });
    if (!any_family) throw Error(ErrorKind::Config, "no family labels for the frame languages");

    const auto rows = family_coherence(*p.features, p.records);
    const double rate = nearest_neighbor_family_rate(p.dm, p.records);

    std::ostringstream text;
    Provenance prov = provenance(cfg, p);
    prov.emplace_back("nearest_neighbor_cross_family_rate", format_fixed(rate, 5));
    write_provenance(text, prov);
    text << "family,n_languages,mean_pairwise_overlap\n";
    for (const auto& r : rows) {
        text << csv_field(r.family) << ',' << r.n_languages << ',' << format_fixed(r.mean_pairwise_overlap, 5) << '\n';
    }
    emit(cfg, out, text.str());
    if (!cfg.output.empty()) {
        out << "families with >= 2 languages: " << rows.size() << '\n';
        out << "nearest neighbour in another family: " << format_fixed(100.0 * rate, 2) << "%\n";
    }
}

void add_shared_options(CLI::App* cmd, RunConfig& cfg)
{
    cmd->add_option("--frame", cfg.frame, "Wide feature CSV (glottocode column + feature columns)");
    cmd->add_option("--cldf-values", cfg.cldf_values, "CLDF values.csv (Language_ID, Parameter_ID, Value)");
    cmd->add_option("--cldf-languages", cfg.cldf_languages, "CLDF languages.csv");
    cmd->add_option("--meta", cfg.meta, "Language metadata CSV (family, genus, coordinates, child_count)");
    cmd->add_option("--binmap", cfg.binmap, "Binarization map CSV (default: built-in Grambank split)");
    cmd->add_option("--matrix", cfg.matrix, "Precomputed distance matrix CSV");
    cmd->add_option("--features", cfg.features, "Comma-separated feature ids to keep");
    cmd->add_option("--crop", cfg.crop, "Drop languages with more than this proportion missing")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("!--no-binarize", cfg.binarize, "Keep multistate features unbinarized");
    cmd->add_flag("!--no-macro-filter", cfg.macro_filter, "Keep macro-languages");
    cmd->add_flag("--normalize,!--no-normalize", cfg.normalize, "Min-max normalize distances (default on)");
    cmd->add_flag("--geo", cfg.geo, "Use great-circle distances from metadata coordinates");
    cmd->add_flag("--drop-uncovered-pairs", cfg.drop_uncovered,
                  "Drop the alphabetically later language of each pair without shared coverage");
    cmd->add_option("--threads", cfg.threads, "Worker threads for the distance matrix (0: all cores)");
    cmd->add_option("-o,--output", cfg.output, "Output file (default: stdout)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Typologically diverse language sampling", "typdiv"};
    app.require_subcommand(1);
    app.set_version_flag("--version", TYPDIV_VERSION);

    auto* matrix = app.add_subcommand("matrix", "Write the pairwise distance matrix");
    auto* sample = app.add_subcommand("sample", "Draw a language sample");
    auto* metrics = app.add_subcommand("metrics", "Diversity report (MPD, FVO, FVI, entropy) for a sample");
    auto* sweep = app.add_subcommand("sweep", "Metrics over a range of sample sizes and methods");
    auto* expand = app.add_subcommand("expand", "Extend a sample with the next most diverse languages");
    auto* audit = app.add_subcommand("audit", "Within-family overlap and cross-family nearest neighbours");

    for (auto* cmd : {matrix, sample, metrics, sweep, expand, audit}) add_shared_options(cmd, cfg);

    sample->add_option("--method", cfg.methods, "maxsum, maxmin, random, random_family, random_genus, convenience")
        ->required()
        ->expected(1);
    sample->add_option("-k,--k", cfg.k, "Sample size")->required();
    sample->add_option("--seed", cfg.seed, "Seed for the randomized baselines");
    sample->add_option("--freq-list", cfg.freq_list, "CSV of (language_id, count) for convenience sampling");

    metrics->add_option("--sample", cfg.sample, "Sample file")->required();
    metrics->add_option("--scores", cfg.scores, "CSV of (language_id, score) to summarize");

    sweep->add_option("--method", cfg.methods, "Methods, comma-separated or repeated");
    sweep->add_option("--k-range", cfg.k_range, "Sample sizes lo:hi")->required();
    sweep->add_option("--runs", cfg.runs, "Runs per randomized method");
    sweep->add_option("--seed", cfg.seed, "Base seed; run i uses seed + i");
    sweep->add_option("--freq-list", cfg.freq_list, "CSV of (language_id, count) for convenience sampling");
    sweep->add_flag("--aggregate", cfg.aggregate, "Emit mean and standard deviation per (method, k)");

    expand->add_option("--base-sample", cfg.base_sample, "Sample to extend")->required();
    expand->add_option("--method", cfg.methods, "Objective: maxsum (default) or maxmin")->expected(1);
    expand->add_option("-n,--additions", cfg.additions, "Languages to add");
    expand->add_option("--candidates", cfg.candidates, "Restrict additions to these ids (one per line)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion&) {
        out << TYPDIV_VERSION << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "typdiv: error[usage]: " << e.what() << '\n';
        err << "run 'typdiv --help' for usage\n";
        return 2;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    try {
        if (cfg.subcommand == "matrix") cmd_matrix(cfg, out);
        else if (cfg.subcommand == "sample") cmd_sample(cfg, out, err);
        else if (cfg.subcommand == "metrics") cmd_metrics(cfg, out);
        else if (cfg.subcommand == "sweep") cmd_sweep(cfg, out, err);
        else if (cfg.subcommand == "expand") cmd_expand(cfg, out);
        else if (cfg.subcommand == "audit") cmd_audit(cfg, out);
    } catch (const Error& e) {
        err << "typdiv: error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
        if (e.kind() == ErrorKind::Size || e.kind() == ErrorKind::Argument) {
            err << "run 'typdiv " << cfg.subcommand << " --help' for usage\n";
        }
        return 1;
    } catch (const std::exception& e) {
        err << "typdiv: error[internal]: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace typdiv
