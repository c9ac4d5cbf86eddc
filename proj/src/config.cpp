#include "cabinseg/config.hpp"

#include <fstream>
#include <set>

namespace cabinseg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void expect_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

GmmParams parse_gmm(const json& j, const std::string& path) {
    expect_keys(j, path,
                {"history", "tau", "alpha", "match_k", "k_max", "sigma0_sq", "var_min",
                 "var_max", "complexity_prior", "rho_mode", "min_area"});
    GmmParams p;
    if (j.contains("history")) p.history = get_int(j["history"], path + ".history");
    if (j.contains("tau")) p.tau = get_number(j["tau"], path + ".tau");
    if (j.contains("alpha") && !j["alpha"].is_null())
        p.alpha = get_number(j["alpha"], path + ".alpha");
    if (j.contains("match_k")) p.match_k = get_number(j["match_k"], path + ".match_k");
    if (j.contains("k_max")) p.k_max = get_int(j["k_max"], path + ".k_max");
    if (j.contains("sigma0_sq")) p.sigma0_sq = get_number(j["sigma0_sq"], path + ".sigma0_sq");
    if (j.contains("var_min")) p.var_min = get_number(j["var_min"], path + ".var_min");
    if (j.contains("var_max")) p.var_max = get_number(j["var_max"], path + ".var_max");
    if (j.contains("complexity_prior"))
        p.complexity_prior = get_number(j["complexity_prior"], path + ".complexity_prior");
    if (j.contains("min_area")) p.min_area = get_int(j["min_area"], path + ".min_area");
    if (j.contains("rho_mode")) {
        const std::string mode = get_string(j["rho_mode"], path + ".rho_mode");
        if (mode == "adaptive")
            p.rho_mode = RhoMode::AdaptiveWeight;
        else if (mode == "paper")
            p.rho_mode = RhoMode::PaperDensity;
        else
            fail(path + ".rho_mode", "expected \"adaptive\" or \"paper\"");
    }
    try {
        p.validate();
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    return p;
}

ContourInit parse_circles(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of [cx, cy, r]");
    ContourInit init;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& c = j[i];
        const std::string cpath = path + "[" + std::to_string(i) + "]";
        if (!c.is_array() || c.size() != 3) fail(cpath, "expected [cx, cy, r]");
        init.circles.push_back({get_number(c[0], cpath), get_number(c[1], cpath),
                                get_number(c[2], cpath)});
    }
    return init;
}

}  // namespace

PccConfig parse_pcc_json(const json& j, const std::string& path) {
    expect_keys(j, path, {"channel", "enhancement", "clahe_clip", "clahe_tiles"});
    PccConfig cfg;
    if (j.contains("channel")) {
        const std::string c = get_string(j["channel"], path + ".channel");
        if (c == "V")
            cfg.channel = BrightnessChannel::V;
        else if (c == "L")
            cfg.channel = BrightnessChannel::L;
        else
            fail(path + ".channel", "expected \"V\" or \"L\"");
    }
    if (j.contains("enhancement")) {
        const std::string e = get_string(j["enhancement"], path + ".enhancement");
        if (e == "none")
            cfg.enhancement = Enhancement::None;
        else if (e == "HE")
            cfg.enhancement = Enhancement::HistogramEqualization;
        else if (e == "CLAHE")
            cfg.enhancement = Enhancement::Clahe;
        else
            fail(path + ".enhancement", "expected \"none\", \"HE\" or \"CLAHE\"");
    }
    if (j.contains("clahe_clip"))
        cfg.clahe_clip = get_number(j["clahe_clip"], path + ".clahe_clip");
    if (j.contains("clahe_tiles")) {
        const json& t = j["clahe_tiles"];
        if (!t.is_array() || t.size() != 2) fail(path + ".clahe_tiles", "expected [nx, ny]");
        cfg.clahe_tiles = {get_int(t[0], path + ".clahe_tiles"),
                           get_int(t[1], path + ".clahe_tiles")};
    }
    if (cfg.enhancement == Enhancement::Clahe) {
        if (!(cfg.clahe_clip > 0.0)) fail(path + ".clahe_clip", "must be positive");
        if (cfg.clahe_tiles[0] < 1 || cfg.clahe_tiles[1] < 1)
            fail(path + ".clahe_tiles", "must be at least 1x1");
    }
    return cfg;
}

void ExperimentConfig::validate() const {
    switch (method) {
        case Method::Gmm:
            gmm.validate();
            break;
        case Method::Macwe:
            macwe.validate();
            if (contour.circles.empty())
                throw ConfigError("macwe requires at least one contour circle");
            break;
        case Method::Mgac:
            mgac.validate();
            gimage.validate();
            if (contour.circles.empty())
                throw ConfigError("mgac requires at least one contour circle");
            break;
    }
    if (frames_dir.empty()) throw ConfigError("input.frames is required");
    if (output_dir.empty()) throw ConfigError("output is required");
    if (evaluate && gt_dir.empty())
        throw ConfigError("evaluation requested but input.gt is missing");
    for (int f : snake_frames)
        if (f < 0) throw ConfigError("snake frame indices must be >= 0");
    for (int f : eval_frames)
        if (f < 0) throw ConfigError("eval frame indices must be >= 0");
}

ExperimentConfig parse_config_json(const json& root) {
    expect_keys(root, "$",
                {"method", "gmm", "macwe", "mgac", "pcc", "post", "input", "output", "seed",
                 "evaluate", "eval_frames", "snake_frames", "joint_evolution"});
    ExperimentConfig cfg;

    if (!root.contains("method")) fail("$.method", "required");
    const std::string method = get_string(root["method"], "$.method");
    if (method == "gmm")
        cfg.method = Method::Gmm;
    else if (method == "macwe")
        cfg.method = Method::Macwe;
    else if (method == "mgac")
        cfg.method = Method::Mgac;
    else
        fail("$.method", "expected \"gmm\", \"macwe\" or \"mgac\"");

    for (const char* other : {"gmm", "macwe", "mgac"})
        if (root.contains(other) && other != method)
            fail(std::string("$.") + other, "method block does not match $.method");

    if (cfg.method == Method::Gmm) {
        cfg.gmm = root.contains("gmm") ? parse_gmm(root["gmm"], "$.gmm") : GmmParams{};
    } else if (cfg.method == Method::Macwe) {
        const json block = root.contains("macwe") ? root["macwe"] : json::object();
        expect_keys(block, "$.macwe",
                    {"lambda1", "lambda2", "iterations", "smoothing", "circles"});
        if (block.contains("lambda1"))
            cfg.macwe.lambda1 = get_number(block["lambda1"], "$.macwe.lambda1");
        if (block.contains("lambda2"))
            cfg.macwe.lambda2 = get_number(block["lambda2"], "$.macwe.lambda2");
        if (block.contains("iterations"))
            cfg.macwe.iterations = get_int(block["iterations"], "$.macwe.iterations");
        if (block.contains("smoothing"))
            cfg.macwe.smoothing = get_int(block["smoothing"], "$.macwe.smoothing");
        if (!block.contains("circles")) fail("$.macwe.circles", "required");
        cfg.contour = parse_circles(block["circles"], "$.macwe.circles");
        try {
            cfg.macwe.validate();
        } catch (const ConfigError& e) {
            fail("$.macwe", e.what());
        }
    } else {
        const json block = root.contains("mgac") ? root["mgac"] : json::object();
        expect_keys(block, "$.mgac",
                    {"balloon", "tau", "iterations", "smoothing", "gate_mode", "circles",
                     "sigma", "alpha_scale"});
        if (block.contains("balloon"))
            cfg.mgac.balloon = get_number(block["balloon"], "$.mgac.balloon");
        if (block.contains("tau")) cfg.mgac.tau = get_number(block["tau"], "$.mgac.tau");
        if (block.contains("iterations"))
            cfg.mgac.iterations = get_int(block["iterations"], "$.mgac.iterations");
        if (block.contains("smoothing"))
            cfg.mgac.smoothing = get_int(block["smoothing"], "$.mgac.smoothing");
        if (block.contains("gate_mode")) {
            const std::string mode = get_string(block["gate_mode"], "$.mgac.gate_mode");
            if (mode == "tau_over_v")
                cfg.mgac.gate_mode = BalloonGateMode::TauOverV;
            else if (mode == "tau")
                cfg.mgac.gate_mode = BalloonGateMode::Tau;
            else
                fail("$.mgac.gate_mode", "expected \"tau_over_v\" or \"tau\"");
        }
        if (block.contains("sigma"))
            cfg.gimage.sigma = get_number(block["sigma"], "$.mgac.sigma");
        if (block.contains("alpha_scale"))
            cfg.gimage.alpha_scale = get_number(block["alpha_scale"], "$.mgac.alpha_scale");
        if (!block.contains("circles")) fail("$.mgac.circles", "required");
        cfg.contour = parse_circles(block["circles"], "$.mgac.circles");
        try {
            cfg.mgac.validate();
            cfg.gimage.validate();
        } catch (const ConfigError& e) {
            fail("$.mgac", e.what());
        }
    }

    if (root.contains("pcc")) cfg.pcc = parse_pcc_json(root["pcc"], "$.pcc");

    if (root.contains("post")) {
        const json& p = root["post"];
        expect_keys(p, "$.post", {"op", "element"});
        PostConfig post;
        if (!p.contains("op")) fail("$.post.op", "required");
        const std::string op = get_string(p["op"], "$.post.op");
        if (op == "opening")
            post.op = PostOp::Opening;
        else if (op == "closing")
            post.op = PostOp::Closing;
        else
            fail("$.post.op", "expected \"opening\" or \"closing\"");
        if (p.contains("element")) {
            const json& el = p["element"];
            if (el.is_string()) {
                post.element = el.get<std::string>();
            } else if (el.is_array()) {
                post.element.clear();
                for (std::size_t i = 0; i < el.size(); ++i) {
                    const json& o = el[i];
                    if (!o.is_array() || o.size() != 2)
                        fail("$.post.element[" + std::to_string(i) + "]", "expected [dx, dy]");
                    post.offsets.emplace_back(get_int(o[0], "$.post.element"),
                                              get_int(o[1], "$.post.element"));
                }
            } else {
                fail("$.post.element", "expected a name or an offset list");
            }
        }
        try {
            post.structuring_element();
        } catch (const ConfigError& e) {
            fail("$.post.element", e.what());
        }
        cfg.post = post;
    }

    if (root.contains("input")) {
        const json& in = root["input"];
        expect_keys(in, "$.input", {"frames", "gt"});
        if (in.contains("frames"))
            cfg.frames_dir = get_string(in["frames"], "$.input.frames");
        if (in.contains("gt")) cfg.gt_dir = get_string(in["gt"], "$.input.gt");
    }
    if (root.contains("output")) cfg.output_dir = get_string(root["output"], "$.output");
    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer()) fail("$.seed", "expected an integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("evaluate")) {
        if (!root["evaluate"].is_boolean()) fail("$.evaluate", "expected a boolean");
        cfg.evaluate = root["evaluate"].get<bool>();
    } else {
        cfg.evaluate = !cfg.gt_dir.empty();
    }
    if (root.contains("eval_frames")) {
        if (!root["eval_frames"].is_array()) fail("$.eval_frames", "expected an array");
        cfg.eval_frames.clear();
        for (const json& f : root["eval_frames"]) cfg.eval_frames.push_back(get_int(f, "$.eval_frames"));
    }
    if (root.contains("snake_frames")) {
        if (!root["snake_frames"].is_array()) fail("$.snake_frames", "expected an array");
        cfg.snake_frames.clear();
        for (const json& f : root["snake_frames"])
            cfg.snake_frames.push_back(get_int(f, "$.snake_frames"));
        if (cfg.snake_frames.empty()) fail("$.snake_frames", "must not be empty");
    }
    if (root.contains("joint_evolution")) {
        if (!root["joint_evolution"].is_boolean())
            fail("$.joint_evolution", "expected a boolean");
        cfg.joint_evolution = root["joint_evolution"].get<bool>();
    }
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config_json(root);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["method"] = cfg.method == Method::Gmm ? "gmm" : cfg.method == Method::Macwe ? "macwe" : "mgac";
    if (cfg.method == Method::Gmm) {
        json g;
        g["history"] = cfg.gmm.history;
        g["tau"] = cfg.gmm.tau;
        if (cfg.gmm.alpha)
            g["alpha"] = *cfg.gmm.alpha;
        else
            g["alpha"] = nullptr;
        g["match_k"] = cfg.gmm.match_k;
        g["k_max"] = cfg.gmm.k_max;
        g["sigma0_sq"] = cfg.gmm.sigma0_sq;
        g["var_min"] = cfg.gmm.var_min;
        g["var_max"] = cfg.gmm.var_max;
        g["complexity_prior"] = cfg.gmm.complexity_prior;
        g["rho_mode"] = cfg.gmm.rho_mode == RhoMode::AdaptiveWeight ? "adaptive" : "paper";
        g["min_area"] = cfg.gmm.min_area;
        j["gmm"] = g;
    } else {
        json circles = json::array();
        for (const Circle& c : cfg.contour.circles)
            circles.push_back({c.cx, c.cy, c.radius});
        if (cfg.method == Method::Macwe) {
            j["macwe"] = {{"lambda1", cfg.macwe.lambda1},
                          {"lambda2", cfg.macwe.lambda2},
                          {"iterations", cfg.macwe.iterations},
                          {"smoothing", cfg.macwe.smoothing},
                          {"circles", circles}};
        } else {
            j["mgac"] = {{"balloon", cfg.mgac.balloon},
                         {"tau", cfg.mgac.tau},
                         {"iterations", cfg.mgac.iterations},
                         {"smoothing", cfg.mgac.smoothing},
                         {"gate_mode", cfg.mgac.gate_mode == BalloonGateMode::TauOverV
                                           ? "tau_over_v"
                                           : "tau"},
                         {"sigma", cfg.gimage.sigma},
                         {"alpha_scale", cfg.gimage.alpha_scale},
                         {"circles", circles}};
        }
        j["snake_frames"] = cfg.snake_frames;
        j["joint_evolution"] = cfg.joint_evolution;
    }
    if (cfg.pcc) {
        json p;
        p["channel"] = cfg.pcc->channel == BrightnessChannel::V ? "V" : "L";
        p["enhancement"] = cfg.pcc->enhancement == Enhancement::None ? "none"
                           : cfg.pcc->enhancement == Enhancement::HistogramEqualization
                               ? "HE"
                               : "CLAHE";
        p["clahe_clip"] = cfg.pcc->clahe_clip;
        p["clahe_tiles"] = cfg.pcc->clahe_tiles;
        j["pcc"] = p;
    }
    if (cfg.post) {
        j["post"] = {{"op", cfg.post->op == PostOp::Opening ? "opening" : "closing"}};
        if (cfg.post->offsets.empty()) {
            j["post"]["element"] = cfg.post->element;
        } else {
            json offsets = json::array();
            for (const auto& [dx, dy] : cfg.post->offsets) offsets.push_back({dx, dy});
            j["post"]["element"] = offsets;
        }
    }
    j["input"] = {{"frames", cfg.frames_dir.string()}};
    if (!cfg.gt_dir.empty()) j["input"]["gt"] = cfg.gt_dir.string();
    j["output"] = cfg.output_dir.string();
    j["seed"] = cfg.seed;
    j["evaluate"] = cfg.evaluate;
    if (!cfg.eval_frames.empty()) j["eval_frames"] = cfg.eval_frames;
    return j;
}

SynthJob parse_synth_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open synth spec: " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    expect_keys(root, "$", {"width", "height", "seed", "noise_sigma", "scenario", "frames"});
    SynthJob job;
    if (root.contains("width")) job.spec.width = get_int(root["width"], "$.width");
    if (root.contains("height")) job.spec.height = get_int(root["height"], "$.height");
    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer()) fail("$.seed", "expected an integer");
        job.spec.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("noise_sigma"))
        job.spec.noise_sigma = get_number(root["noise_sigma"], "$.noise_sigma");
    if (root.contains("scenario")) {
        try {
            job.spec.scenario = scenario_from_name(get_string(root["scenario"], "$.scenario"));
        } catch (const ConfigError& e) {
            fail("$.scenario", e.what());
        }
    }
    if (root.contains("frames")) job.frames = get_int(root["frames"], "$.frames");
    if (job.frames < 1) fail("$.frames", "must be >= 1");
    try {
        job.spec.validate();
    } catch (const ConfigError& e) {
        fail("$", e.what());
    }
    return job;
}

}  // namespace cabinseg
