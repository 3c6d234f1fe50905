// Command line front end. Every run prints one JSON report to stdout (keys in
// insertion order, doubles at 17 significant digits, non-finite values as
// null) and one human-readable summary line to stderr. Exit codes mirror the
// library error kinds so scripts can branch without parsing the report.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metrikit/metrikit.hpp"

namespace {

using metrikit::FiniteMetricSpace;
using metrikit::GridSet;
using metrikit::ScalarField;
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Deterministic JSON rendering.

void escape_to(const std::string& text, std::string& out) {
    out += '"';
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

std::string format17(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void render_to(const json& value, std::string& out, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
    const std::string inner(2 * static_cast<std::size_t>(depth + 1), ' ');
    switch (value.type()) {
        case json::value_t::null: out += "null"; break;
        case json::value_t::boolean: out += value.get<bool>() ? "true" : "false"; break;
        case json::value_t::number_integer:
            out += std::to_string(value.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(value.get<std::uint64_t>());
            break;
        case json::value_t::number_float: {
            const double d = value.get<double>();
            out += std::isfinite(d) ? format17(d) : "null";
            break;
        }
        case json::value_t::string: escape_to(value.get<std::string>(), out); break;
        case json::value_t::array: {
            if (value.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < value.size(); ++i) {
                out += inner;
                render_to(value[i], out, depth + 1);
                if (i + 1 < value.size()) out += ',';
                out += '\n';
            }
            out += pad + "]";
            break;
        }
        default: {  // object
            if (value.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            std::size_t i = 0;
            for (auto it = value.begin(); it != value.end(); ++it, ++i) {
                out += inner;
                escape_to(it.key(), out);
                out += ": ";
                render_to(it.value(), out, depth + 1);
                if (i + 1 < value.size()) out += ',';
                out += '\n';
            }
            out += pad + "}";
            break;
        }
    }
}

void emit(const std::string& command, const json& config, const json& result,
          const std::string& summary) {
    json report;
    report["command"] = command;
    report["version"] = metrikit::k_version;
    report["config"] = config;
    report["result"] = result;
    std::string text;
    render_to(report, text, 0);
    std::fputs(text.c_str(), stdout);
    std::fputc('\n', stdout);
    std::fputs((command + ": " + summary + "\n").c_str(), stderr);
}

void emit_error(const std::string& command, const std::string& kind, const std::string& message) {
    json report;
    report["command"] = command;
    report["version"] = metrikit::k_version;
    json error;
    error["kind"] = kind;
    error["message"] = message;
    report["error"] = error;
    std::string text;
    render_to(report, text, 0);
    std::fputs(text.c_str(), stdout);
    std::fputc('\n', stdout);
    std::fputs((command + ": error (" + kind + "): " + message + "\n").c_str(), stderr);
}

int code_for(const std::string& kind) {
    if (kind == "cli") return 2;
    if (kind == "parse") return 3;
    if (kind == "domain") return 4;
    if (kind == "structural") return 5;
    if (kind == "precondition") return 6;
    if (kind == "resolution") return 7;
    if (kind == "resource") return 8;
    if (kind == "invalid_data") return 9;
    if (kind == "degenerate_input") return 10;
    return 1;
}

// ---------------------------------------------------------------------------
// Shared pieces.

metrikit::io::MetricChoice choice_or_throw(const std::string& name) {
    const auto choice = metrikit::io::metric_choice_from(name);
    if (!choice)
        throw metrikit::DomainError("unknown metric '" + name +
                                    "' (euclidean, manhattan, rug, precomputed)");
    return *choice;
}

std::function<double(double)> profile(const std::string& name) {
    if (name == "identity") return [](double x) { return x; };
    if (name == "square") return [](double x) { return x * x; };
    if (name == "sqrtabs") return [](double x) { return std::sqrt(std::abs(x)); };
    if (name == "sin") return [](double x) { return std::sin(x); };
    if (name == "const1") return [](double) { return 1.0; };
    throw metrikit::DomainError("unknown profile '" + name +
                                "' (identity, square, sqrtabs, sin, const1)");
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
    const auto values = metrikit::io::parse_real_list(text);
    if (values.size() != 2)
        throw metrikit::DomainError(std::string(what) + " needs exactly two numbers");
    return {values[0], values[1]};
}

json violations_json(const std::vector<metrikit::Violation>& violations) {
    json list = json::array();
    for (const auto& v : violations) {
        json item;
        item["kind"] = metrikit::to_string(v.kind);
        item["witness"] = v.witness;
        item["defect"] = v.defect;
        list.push_back(std::move(item));
    }
    return list;
}

json witness_json(const std::optional<std::pair<std::size_t, std::size_t>>& witness) {
    if (!witness) return nullptr;
    return json::array({witness->first, witness->second});
}

json fit_json(const metrikit::LipschitzFit& fit) {
    json out;
    out["alpha"] = fit.alpha;
    out["constant"] = fit.constant;
    out["witness"] = witness_json(fit.witness);
    return out;
}

std::string yes_no(bool value) { return value ? "yes" : "no"; }

// ---------------------------------------------------------------------------
// Subcommand options.

struct CheckOpts {
    std::string input;
    std::string metric = "euclidean";
    double tol = 0.0;
};

struct SnowflakeOpts {
    std::string input;
    std::string metric = "euclidean";
    std::string qsum;
    std::string matrix_out;
    double q = 0.5;
};

struct DistortionOpts {
    std::string input1;
    std::string input2;
    std::string metric1 = "euclidean";
    std::string metric2 = "euclidean";
    std::string map;
};

struct FitOpts {
    std::string input;
    std::string metric = "euclidean";
    std::string field;
    std::string fn = "identity";
    std::string interval;
    std::string meshes;
    double alpha = 1.0;
    bool refine = false;
};

struct VerifyLipOpts {
    std::string input;
    std::string metric = "euclidean";
    std::string field;
    double alpha = 1.0;
    double constant = 0.0;
    double tol = 0.0;
};

struct DistFieldOpts {
    std::string input;
    std::string metric = "euclidean";
    std::string subset;
    std::string field_out;
};

struct RugBallOpts {
    double t = 1.0;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
};

struct RugProbeOpts {
    std::string point;
    std::string point2;
    std::string axis;
    std::string fn = "identity";
    double r = 0.0;
    double mesh = 0.25;
    std::size_t cells = 9;
    double alpha = 2.0;
    double beta = 1.0;
};

struct ChainOpts {
    std::string input;
    std::string metric = "euclidean";
    std::string points;
    std::string field;
    double epsilon = 1.0;
    double lambda = 1.0;
    double alpha = 2.0;
    std::size_t source = 0;
    std::size_t target = 0;
};

struct MinLambdaOpts {
    std::string input;
    std::string metric = "euclidean";
    double epsilon = 1.0;
    std::size_t source = 0;
    std::size_t target = 0;
};

struct CantorOpts {
    std::size_t depth = 3;
    double ratio = 1.0 / 3.0;
    std::string matrix_out;
};

struct PorosityOpts {
    std::string mask;
    std::string radii;
    double constant = 1.0;
};

struct SubdivOpts {
    std::string mask;
    std::string cube;
    std::size_t arity = 2;
};

struct BoxdimOpts {
    std::string mask;
    std::size_t arity = 2;
    std::size_t kmax = 3;
};

// ---------------------------------------------------------------------------
// Subcommand bodies.

void run_check(const std::string& command, const CheckOpts& opts, bool ultra) {
    json config;
    config["input"] = opts.input;
    config["metric"] = opts.metric;
    config["tol"] = opts.tol;
    const auto choice = choice_or_throw(opts.metric);
    const auto loaded = metrikit::io::load_space(opts.input, choice, opts.tol);
    const auto report = ultra ? metrikit::verify_ultrametric(loaded.space, opts.tol)
                              : metrikit::verify_metric(loaded.space, opts.tol);
    json result;
    result["n"] = loaded.space.size();
    result["is_metric"] = report.is_metric;
    result["is_ultrametric"] = report.is_ultrametric;
    result["violations"] = violations_json(report.violations);
    emit(command, config, result,
         "n=" + std::to_string(loaded.space.size()) + " metric=" + yes_no(report.is_metric) +
             " ultrametric=" + yes_no(report.is_ultrametric) +
             " violations=" + std::to_string(report.violations.size()));
}

void run_snowflake(const SnowflakeOpts& opts, bool have_input, bool have_qsum) {
    json config;
    config["q"] = opts.q;
    if (have_qsum) {
        config["qsum"] = opts.qsum;
        const auto [a, b] = parse_pair(opts.qsum, "--qsum");
        const double value = metrikit::qsum(a, b, opts.q);
        json result;
        result["a"] = a;
        result["b"] = b;
        result["q"] = opts.q;
        result["value"] = value;
        emit("snowflake", config, result, "qsum = " + format17(value));
        return;
    }
    if (!have_input)
        throw metrikit::Error("cli", "snowflake needs exactly one of --input or --qsum");
    config["input"] = opts.input;
    config["metric"] = opts.metric;
    if (!opts.matrix_out.empty()) config["matrix_out"] = opts.matrix_out;
    const auto loaded = metrikit::io::load_space(opts.input, choice_or_throw(opts.metric));
    const auto flaked = metrikit::snowflake(loaded.space, opts.q);
    const auto out_report = metrikit::verify_metric(flaked, 0.0);
    json result;
    result["n"] = flaked.size();
    result["q"] = opts.q;
    json input_flags;
    input_flags["is_metric"] = loaded.report.is_metric;
    input_flags["is_ultrametric"] = loaded.report.is_ultrametric;
    result["input"] = input_flags;
    json output_flags;
    output_flags["is_metric"] = out_report.is_metric;
    output_flags["is_ultrametric"] = out_report.is_ultrametric;
    result["output"] = output_flags;
    result["labels"] = flaked.labels();
    json matrix = json::array();
    for (std::size_t i = 0; i < flaked.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < flaked.size(); ++j) row.push_back(flaked.distance(i, j));
        matrix.push_back(std::move(row));
    }
    result["matrix"] = matrix;
    if (!opts.matrix_out.empty()) metrikit::io::save_matrix_csv(flaked, opts.matrix_out);
    emit("snowflake", config, result,
         "n=" + std::to_string(flaked.size()) + " q=" + format17(opts.q) +
             " metric=" + yes_no(out_report.is_metric) +
             " ultrametric=" + yes_no(out_report.is_ultrametric));
}

void run_distortion(const DistortionOpts& opts) {
    json config;
    config["input1"] = opts.input1;
    config["input2"] = opts.input2;
    config["metric1"] = opts.metric1;
    config["metric2"] = opts.metric2;
    config["map"] = opts.map.empty() ? json(nullptr) : json(opts.map);
    const auto first = metrikit::io::load_space(opts.input1, choice_or_throw(opts.metric1));
    const auto second = metrikit::io::load_space(opts.input2, choice_or_throw(opts.metric2));
    const auto corr = opts.map.empty()
                          ? metrikit::Correspondence::identity(first.space.size())
                          : metrikit::io::load_correspondence(opts.map, first.space.size());
    const double value = metrikit::distortion(first.space, second.space, corr);
    json result;
    result["distortion"] = value;
    emit("distortion", config, result, "distortion = " + format17(value));
}

void run_fit(const FitOpts& opts) {
    json config;
    config["alpha"] = opts.alpha;
    if (opts.refine) {
        config["refine"] = true;
        config["fn"] = opts.fn;
        config["interval"] = opts.interval;
        config["meshes"] = opts.meshes;
        const auto [a, b] = parse_pair(opts.interval, "--interval");
        const auto meshes = metrikit::io::parse_real_list(opts.meshes);
        const auto probe = metrikit::refinement_probe(a, b, profile(opts.fn), meshes, opts.alpha);
        json list = json::array();
        for (const auto& point : probe) {
            json item;
            item["mesh"] = point.mesh;
            item["constant"] = point.fit.constant;
            item["witness"] = witness_json(point.fit.witness);
            list.push_back(std::move(item));
        }
        json result;
        result["alpha"] = opts.alpha;
        result["probe"] = list;
        emit("lipschitz-fit", config, result,
             "meshes=" + std::to_string(probe.size()) +
                 " final constant=" + format17(probe.back().fit.constant));
        return;
    }
    if (opts.input.empty() || opts.field.empty())
        throw metrikit::Error("cli", "lipschitz-fit needs --input and --field (or --refine)");
    config["input"] = opts.input;
    config["metric"] = opts.metric;
    config["field"] = opts.field;
    const auto loaded = metrikit::io::load_space(opts.input, choice_or_throw(opts.metric));
    const auto field = metrikit::io::load_field(opts.field, loaded.space.size());
    const auto fit = metrikit::fit_constant(loaded.space, field, opts.alpha);
    emit("lipschitz-fit", config, fit_json(fit),
         "alpha=" + format17(fit.alpha) + " constant=" + format17(fit.constant));
}

void run_verify_lip(const VerifyLipOpts& opts) {
    json config;
    config["input"] = opts.input;
    config["metric"] = opts.metric;
    config["field"] = opts.field;
    config["alpha"] = opts.alpha;
    config["constant"] = opts.constant;
    config["tol"] = opts.tol;
    const auto loaded = metrikit::io::load_space(opts.input, choice_or_throw(opts.metric));
    const auto field = metrikit::io::load_field(opts.field, loaded.space.size());
    const auto violations =
        metrikit::verify_lipschitz(loaded.space, field, opts.alpha, opts.constant, opts.tol);
    json list = json::array();
    for (const auto& v : violations) {
        json item;
        item["pair"] = json::array({v.pair.first, v.pair.second});
        item["defect"] = v.defect;
        list.push_back(std::move(item));
    }
    json result;
    result["holds"] = violations.empty();
    result["violations"] = list;
    emit("lipschitz-verify", config, result,
         violations.empty() ? "holds=yes"
                            : "holds=no violations=" + std::to_string(violations.size()) +
                                  " worst=" + format17(violations.front().defect));
}

void run_dist_field(const DistFieldOpts& opts) {
    json config;
    config["input"] = opts.input;
    config["metric"] = opts.metric;
    config["subset"] = opts.subset;
    if (!opts.field_out.empty()) config["field_out"] = opts.field_out;
    const auto loaded = metrikit::io::load_space(opts.input, choice_or_throw(opts.metric));
    const auto subset = metrikit::io::parse_index_list(opts.subset);
    const auto field = metrikit::distance_field(loaded.space, subset);
    if (!opts.field_out.empty()) metrikit::io::save_field_csv(field, opts.field_out);
    json result;
    result["subset"] = subset;
    result["values"] = field.values;
    emit("dist-field", config, result,
         "anchors=" + std::to_string(subset.size()) +
             " values=" + std::to_string(field.values.size()));
}

void run_rug_ball(const RugBallOpts& opts) {
    json config;
    config["t"] = opts.t;
    config["samples"] = opts.samples;
    config["seed"] = opts.seed;
    const auto estimate = metrikit::ball_measure(opts.t, opts.samples, opts.seed);
    const double expected = (4.0 / 3.0) * opts.t * opts.t * opts.t;
    json result;
    result["t"] = estimate.t;
    result["samples"] = estimate.samples;
    result["seed"] = estimate.seed;
    result["estimate"] = estimate.estimate;
    result["stderr"] = estimate.std_error;
    result["expected"] = expected;
    emit("rug-ball", config, result,
         "estimate=" + format17(estimate.estimate) + " expected=" + format17(expected) +
             " stderr=" + format17(estimate.std_error));
}

void run_rug_probe(const RugProbeOpts& opts, bool have_point, bool have_axis) {
    json config;
    if (have_point == have_axis)
        throw metrikit::Error("cli", "rug-probe needs exactly one of --point or --axis");
    if (have_point) {
        config["point"] = opts.point;
        if (opts.r > 0.0) config["r"] = opts.r;
        if (!opts.point2.empty()) config["point2"] = opts.point2;
        const auto [x1, x2] = parse_pair(opts.point, "--point");
        const metrikit::RugPoint p{x1, x2};
        json result;
        result["point"] = json::array({p.x1, p.x2});
        result["norm"] = metrikit::rug_norm(p);
        if (opts.r > 0.0) {
            const auto d = metrikit::dilate(p, opts.r);
            json dilated;
            dilated["scale"] = opts.r;
            dilated["point"] = json::array({d.x1, d.x2});
            dilated["norm"] = metrikit::rug_norm(d);
            result["dilated"] = dilated;
        } else {
            result["dilated"] = nullptr;
        }
        if (!opts.point2.empty()) {
            const auto [y1, y2] = parse_pair(opts.point2, "--point2");
            result["distance"] = metrikit::rug_distance(p, {y1, y2});
        } else {
            result["distance"] = nullptr;
        }
        emit("rug-probe", config, result, "norm = " + format17(metrikit::rug_norm(p)));
        return;
    }
    config["axis"] = opts.axis;
    config["mesh"] = opts.mesh;
    config["cells"] = opts.cells;
    config["fn"] = opts.fn;
    config["beta"] = opts.beta;
    config["alpha"] = opts.alpha;
    if (opts.axis != "x1" && opts.axis != "x2")
        throw metrikit::DomainError("axis must be x1 or x2");
    const bool horizontal = opts.axis == "x1";
    const auto points = metrikit::rug_grid(opts.mesh, horizontal ? opts.cells : 1,
                                           horizontal ? 1 : opts.cells);
    const auto space = metrikit::rug_space(points);
    const auto field = metrikit::vertical_field(profile(opts.fn), opts.beta, points);
    const auto fit = metrikit::fit_constant(space, field, opts.alpha);
    emit("rug-probe", config, fit_json(fit),
         "axis=" + opts.axis + " constant=" + format17(fit.constant));
}

void run_chain(const ChainOpts& opts, bool have_points, bool have_field, bool have_endpoints) {
    json config;
    config["input"] = opts.input;
    config["metric"] = opts.metric;
    config["epsilon"] = opts.epsilon;
    config["lambda"] = opts.lambda;
    const auto loaded = metrikit::io::load_space(opts.input, choice_or_throw(opts.metric));
    if (have_points) {
        config["points"] = opts.points;
        const metrikit::Chain walk{metrikit::io::parse_index_list(opts.points)};
        if (have_field) {
            config["field"] = opts.field;
            config["alpha"] = opts.alpha;
            const auto field = metrikit::io::load_field(opts.field, loaded.space.size());
            const auto fit = metrikit::fit_constant(loaded.space, field, opts.alpha);
            const bool holds = metrikit::verify_chain_bound(loaded.space, field, fit, walk,
                                                            opts.epsilon, opts.lambda);
            double telescope = 0.0;
            for (std::size_t k = 0; k + 1 < walk.points.size(); ++k)
                telescope += fit.constant * std::pow(loaded.space.distance(walk.points[k],
                                                                           walk.points[k + 1]),
                                                     fit.alpha);
            const double bound =
                metrikit::oscillation_bound(fit.constant, fit.alpha, opts.epsilon, opts.lambda);
            const double move = std::abs(field.values[walk.points.front()] -
                                         field.values[walk.points.back()]);
            json result;
            result["alpha"] = fit.alpha;
            result["constant"] = fit.constant;
            result["move"] = move;
            result["telescope"] = telescope;
            result["bound"] = bound;
            result["holds"] = holds;
            emit("chain", config, result,
                 "move=" + format17(move) + " bound=" + format17(bound) +
                     " holds=" + yes_no(holds));
            return;
        }
        const bool admissible = metrikit::is_chain(loaded.space, walk, opts.epsilon, opts.lambda);
        json result;
        result["admissible"] = admissible;
        emit("chain", config, result, "admissible=" + yes_no(admissible));
        return;
    }
    if (!have_endpoints)
        throw metrikit::Error("cli", "chain needs either --points or --source and --target");
    config["source"] = opts.source;
    config["target"] = opts.target;
    metrikit::ChainQuery query{opts.epsilon, opts.lambda, opts.source, opts.target};
    const auto found = metrikit::chain_exists(loaded.space, query);
    json result;
    result["found"] = found.found;
    result["chain"] = found.chain ? json(found.chain->points) : json(nullptr);
    result["total_length"] = found.total_length;
    result["max_step"] = found.max_step;
    emit("chain", config, result,
         "found=" + yes_no(found.found) + " length=" +
             (std::isfinite(found.total_length) ? format17(found.total_length) : "inf"));
}

void run_min_lambda(const MinLambdaOpts& opts) {
    json config;
    config["input"] = opts.input;
    config["metric"] = opts.metric;
    config["epsilon"] = opts.epsilon;
    config["source"] = opts.source;
    config["target"] = opts.target;
    const auto loaded = metrikit::io::load_space(opts.input, choice_or_throw(opts.metric));
    const auto result = metrikit::min_lambda(loaded.space, opts.source, opts.target, opts.epsilon);
    json out;
    out["lambda_inf"] = result.lambda_inf;
    out["attained"] = result.attained;
    emit("min-lambda", config, out,
         "lambda_inf=" +
             (std::isfinite(result.lambda_inf) ? format17(result.lambda_inf) : "inf") +
             " attained=" + yes_no(result.attained));
}

void run_cantor(const CantorOpts& opts) {
    json config;
    config["depth"] = opts.depth;
    config["ratio"] = opts.ratio;
    if (!opts.matrix_out.empty()) config["matrix_out"] = opts.matrix_out;
    const auto dust = metrikit::cantor_space(opts.depth, opts.ratio);
    json result;
    result["depth"] = opts.depth;
    result["ratio"] = opts.ratio;
    result["n"] = dust.size();
    result["labels"] = dust.labels();
    json points = json::array();
    for (std::size_t i = 0; i < dust.size(); ++i) points.push_back(dust.distance(0, i));
    result["points"] = points;
    if (!opts.matrix_out.empty()) metrikit::io::save_matrix_csv(dust, opts.matrix_out);
    emit("cantor", config, result, "points=" + std::to_string(dust.size()));
}

void run_porosity(const PorosityOpts& opts) {
    json config;
    config["mask"] = opts.mask;
    config["constant"] = opts.constant;
    config["radii"] = opts.radii;
    const auto set = metrikit::io::load_mask(opts.mask);
    const auto radii = metrikit::io::parse_real_list(opts.radii);
    const auto report = metrikit::porosity_probe(set, opts.constant, radii);
    json failures = json::array();
    for (const auto& f : report.failures) {
        json item;
        item["cell"] = f.cell;
        item["radius"] = f.radius;
        failures.push_back(std::move(item));
    }
    json result;
    result["porous"] = report.porous;
    result["constant"] = report.constant;
    result["failures"] = failures;
    emit("porosity", config, result,
         "porous=" + yes_no(report.porous) + " constant=" +
             (std::isfinite(report.constant) ? format17(report.constant) : "inf"));
}

void run_subdiv(const SubdivOpts& opts, bool have_cube) {
    json config;
    config["mask"] = opts.mask;
    config["arity"] = opts.arity;
    const auto set = metrikit::io::load_mask(opts.mask);
    if (have_cube) {
        config["cube"] = opts.cube;
        const auto numbers = metrikit::io::parse_index_list(opts.cube);
        if (numbers.size() != set.dim() + 1)
            throw metrikit::DomainError("--cube needs " + std::to_string(set.dim()) +
                                        " offsets and a side length");
        metrikit::SubcubeSpec cube;
        cube.offset.assign(numbers.begin(), numbers.end() - 1);
        cube.side = numbers.back();
        const auto witness = metrikit::subcube_witness(set, opts.arity, cube);
        json result;
        result["witness"] = witness ? json(*witness) : json(nullptr);
        emit("subdiv", config, result,
             witness ? "witness=" + std::to_string(*witness) : "witness=none");
        return;
    }
    const bool porous = metrikit::porous_by_subdivision(set, opts.arity);
    json result;
    result["porous"] = porous;
    emit("subdiv", config, result, "porous=" + yes_no(porous));
}

void run_boxdim(const BoxdimOpts& opts) {
    json config;
    config["mask"] = opts.mask;
    config["arity"] = opts.arity;
    config["kmax"] = opts.kmax;
    const auto set = metrikit::io::load_mask(opts.mask);
    const auto estimate = metrikit::box_dimension_estimate(set, opts.arity, opts.kmax);
    const double ceiling = metrikit::dimension_upper_bound(opts.arity, set.dim());
    json records = json::array();
    for (const auto& rec : estimate.records) {
        json item;
        item["arity"] = rec.arity;
        item["depth"] = rec.depth;
        item["count"] = rec.count;
        item["bound"] = rec.bound;
        records.push_back(std::move(item));
    }
    json result;
    result["slope"] = estimate.slope;
    result["upper_bound"] = ceiling;
    result["records"] = records;
    emit("boxdim", config, result,
         "slope=" + format17(estimate.slope) + " ceiling=" + format17(ceiling));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite metric geometry toolkit"};
    app.require_subcommand(1);

    CheckOpts check_metric;
    auto* sub_check = app.add_subcommand("check-metric", "verify the metric axioms");
    sub_check->add_option("--input", check_metric.input, "points or matrix file")->required();
    sub_check->add_option("--metric", check_metric.metric,
                          "euclidean, manhattan, rug, or precomputed");
    sub_check->add_option("--tol", check_metric.tol, "absolute comparison tolerance");

    CheckOpts check_ultra;
    auto* sub_ultra = app.add_subcommand("check-ultra", "verify the ultrametric axioms");
    sub_ultra->add_option("--input", check_ultra.input, "points or matrix file")->required();
    sub_ultra->add_option("--metric", check_ultra.metric,
                          "euclidean, manhattan, rug, or precomputed");
    sub_ultra->add_option("--tol", check_ultra.tol, "absolute comparison tolerance");

    SnowflakeOpts snowflake;
    auto* sub_snow = app.add_subcommand("snowflake", "raise distances to a power");
    auto* snow_input = sub_snow->add_option("--input", snowflake.input, "points or matrix file");
    sub_snow->add_option("--metric", snowflake.metric,
                         "euclidean, manhattan, rug, or precomputed");
    sub_snow->add_option("--q", snowflake.q, "snowflake exponent")->required();
    auto* snow_qsum =
        sub_snow->add_option("--qsum", snowflake.qsum, "evaluate the q-sum of 'a,b' instead");
    sub_snow->add_option("--matrix-out", snowflake.matrix_out, "write the matrix as CSV");
    snow_qsum->excludes(snow_input);

    DistortionOpts distortion;
    auto* sub_dist = app.add_subcommand("distortion", "bilipschitz cost of a pairing");
    sub_dist->add_option("--input1", distortion.input1, "first space")->required();
    sub_dist->add_option("--input2", distortion.input2, "second space")->required();
    sub_dist->add_option("--metric1", distortion.metric1, "metric for the first space");
    sub_dist->add_option("--metric2", distortion.metric2, "metric for the second space");
    sub_dist->add_option("--map", distortion.map, "pairing file (default: identity)");

    FitOpts fit;
    auto* sub_fit = app.add_subcommand("lipschitz-fit", "fit the best order-alpha constant");
    auto* fit_input = sub_fit->add_option("--input", fit.input, "points or matrix file");
    sub_fit->add_option("--metric", fit.metric, "euclidean, manhattan, rug, or precomputed");
    auto* fit_field = sub_fit->add_option("--field", fit.field, "field file, one value per point");
    sub_fit->add_option("--alpha", fit.alpha, "Lipschitz order")->required();
    auto* fit_refine =
        sub_fit->add_flag("--refine", fit.refine, "probe shrinking meshes on an interval");
    sub_fit->add_option("--fn", fit.fn, "sample profile for --refine");
    auto* fit_interval = sub_fit->add_option("--interval", fit.interval, "'a,b' for --refine");
    auto* fit_meshes = sub_fit->add_option("--meshes", fit.meshes, "mesh sizes for --refine");
    fit_refine->excludes(fit_input);
    fit_refine->excludes(fit_field);
    fit_refine->needs(fit_interval);
    fit_refine->needs(fit_meshes);
    fit_interval->needs(fit_refine);
    fit_meshes->needs(fit_refine);

    VerifyLipOpts verify_lip;
    auto* sub_vlip = app.add_subcommand("lipschitz-verify", "check a claimed constant");
    sub_vlip->add_option("--input", verify_lip.input, "points or matrix file")->required();
    sub_vlip->add_option("--metric", verify_lip.metric,
                         "euclidean, manhattan, rug, or precomputed");
    sub_vlip->add_option("--field", verify_lip.field, "field file")->required();
    sub_vlip->add_option("--alpha", verify_lip.alpha, "Lipschitz order")->required();
    sub_vlip->add_option("--constant", verify_lip.constant, "claimed constant")->required();
    sub_vlip->add_option("--tol", verify_lip.tol, "absolute comparison tolerance");

    DistFieldOpts dist_field;
    auto* sub_dfield = app.add_subcommand("dist-field", "distance to an anchor subset");
    sub_dfield->add_option("--input", dist_field.input, "points or matrix file")->required();
    sub_dfield->add_option("--metric", dist_field.metric,
                           "euclidean, manhattan, rug, or precomputed");
    sub_dfield->add_option("--subset", dist_field.subset, "anchor indices '0,2,...'")->required();
    sub_dfield->add_option("--field-out", dist_field.field_out, "write the field as CSV");

    RugBallOpts rug_ball;
    auto* sub_ball = app.add_subcommand("rug-ball", "sample the parabolic ball area");
    sub_ball->add_option("--t", rug_ball.t, "ball radius")->required();
    sub_ball->add_option("--samples", rug_ball.samples, "sample count")->required();
    sub_ball->add_option("--seed", rug_ball.seed, "RNG seed");

    RugProbeOpts rug_probe;
    auto* sub_probe = app.add_subcommand("rug-probe", "norms, dilations, and grid fits");
    auto* probe_point = sub_probe->add_option("--point", rug_probe.point, "'x1,x2' to measure");
    sub_probe->add_option("--r", rug_probe.r, "dilation scale for --point");
    sub_probe->add_option("--point2", rug_probe.point2, "second point for a distance");
    auto* probe_axis =
        sub_probe->add_option("--axis", rug_probe.axis, "x1 or x2: fit along a grid line");
    sub_probe->add_option("--mesh", rug_probe.mesh, "grid mesh for --axis");
    sub_probe->add_option("--cells", rug_probe.cells, "grid points for --axis");
    sub_probe->add_option("--alpha", rug_probe.alpha, "fit order for --axis");
    sub_probe->add_option("--fn", rug_probe.fn, "vertical profile for --axis");
    sub_probe->add_option("--beta", rug_probe.beta, "profile order for --axis");
    probe_point->excludes(probe_axis);

    ChainOpts chain;
    auto* sub_chain = app.add_subcommand("chain", "search, verify, or bound chains");
    sub_chain->add_option("--input", chain.input, "points or matrix file")->required();
    sub_chain->add_option("--metric", chain.metric, "euclidean, manhattan, rug, or precomputed");
    sub_chain->add_option("--epsilon", chain.epsilon, "step budget factor")->required();
    sub_chain->add_option("--lambda", chain.lambda, "length budget")->required();
    auto* chain_points =
        sub_chain->add_option("--points", chain.points, "walk '0,1,...' to verify or bound");
    auto* chain_field =
        sub_chain->add_option("--field", chain.field, "field file: bound the walk's move");
    sub_chain->add_option("--alpha", chain.alpha, "fit order for --field");
    auto* chain_source = sub_chain->add_option("--source", chain.source, "search start");
    auto* chain_target = sub_chain->add_option("--target", chain.target, "search end");
    chain_points->excludes(chain_source);
    chain_points->excludes(chain_target);
    chain_field->needs(chain_points);
    chain_source->needs(chain_target);
    chain_target->needs(chain_source);

    MinLambdaOpts min_lambda;
    auto* sub_minl = app.add_subcommand("min-lambda", "smallest workable length budget");
    sub_minl->add_option("--input", min_lambda.input, "points or matrix file")->required();
    sub_minl->add_option("--metric", min_lambda.metric,
                         "euclidean, manhattan, rug, or precomputed");
    sub_minl->add_option("--epsilon", min_lambda.epsilon, "step budget factor")->required();
    sub_minl->add_option("--source", min_lambda.source, "start point")->required();
    sub_minl->add_option("--target", min_lambda.target, "end point")->required();

    CantorOpts cantor;
    auto* sub_cantor = app.add_subcommand("cantor", "finite Cantor construction stage");
    sub_cantor->add_option("--depth", cantor.depth, "construction depth")->required();
    sub_cantor->add_option("--ratio", cantor.ratio, "contraction ratio in (0, 1/2)");
    sub_cantor->add_option("--matrix-out", cantor.matrix_out, "write distances as CSV");

    PorosityOpts porosity;
    auto* sub_poro = app.add_subcommand("porosity", "ball-based porosity probe");
    sub_poro->add_option("--mask", porosity.mask, "grid mask file")->required();
    sub_poro->add_option("--constant", porosity.constant, "porosity constant")->required();
    sub_poro->add_option("--radii", porosity.radii, "radii '0.5,1,...'")->required();

    SubdivOpts subdiv;
    auto* sub_subdiv = app.add_subcommand("subdiv", "subdivision porosity test");
    sub_subdiv->add_option("--mask", subdiv.mask, "grid mask file")->required();
    sub_subdiv->add_option("--arity", subdiv.arity, "subdivision arity")->required();
    sub_subdiv->add_option("--cube", subdiv.cube, "probe one cube: 'offsets...,side'");

    BoxdimOpts boxdim;
    auto* sub_box = app.add_subcommand("boxdim", "box-counting dimension estimate");
    sub_box->add_option("--mask", boxdim.mask, "grid mask file")->required();
    sub_box->add_option("--arity", boxdim.arity, "subdivision arity")->required();
    sub_box->add_option("--kmax", boxdim.kmax, "deepest covering level")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        emit_error(app.get_subcommands().empty() ? "metrikit"
                                                 : app.get_subcommands().front()->get_name(),
                   "cli", e.what());
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (sub_check->parsed()) {
            run_check("check-metric", check_metric, false);
        } else if (sub_ultra->parsed()) {
            run_check("check-ultra", check_ultra, true);
        } else if (sub_snow->parsed()) {
            run_snowflake(snowflake, snow_input->count() > 0, snow_qsum->count() > 0);
        } else if (sub_dist->parsed()) {
            run_distortion(distortion);
        } else if (sub_fit->parsed()) {
            run_fit(fit);
        } else if (sub_vlip->parsed()) {
            run_verify_lip(verify_lip);
        } else if (sub_dfield->parsed()) {
            run_dist_field(dist_field);
        } else if (sub_ball->parsed()) {
            run_rug_ball(rug_ball);
        } else if (sub_probe->parsed()) {
            run_rug_probe(rug_probe, probe_point->count() > 0, probe_axis->count() > 0);
        } else if (sub_chain->parsed()) {
            run_chain(chain, chain_points->count() > 0, chain_field->count() > 0,
                      chain_source->count() > 0 && chain_target->count() > 0);
        } else if (sub_minl->parsed()) {
            run_min_lambda(min_lambda);
        } else if (sub_cantor->parsed()) {
            run_cantor(cantor);
        } else if (sub_poro->parsed()) {
            run_porosity(porosity);
        } else if (sub_subdiv->parsed()) {
            run_subdiv(subdiv, !subdiv.cube.empty());
        } else if (sub_box->parsed()) {
            run_boxdim(boxdim);
        }
    } catch (const metrikit::Error& e) {
        emit_error(command, e.kind(), e.what());
        return code_for(e.kind());
    } catch (const std::exception& e) {
        emit_error(command, "internal", e.what());
        return 1;
    }
    return 0;
}
