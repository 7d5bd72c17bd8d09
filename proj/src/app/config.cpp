#include "uvwipe/app/config.hpp"
#include "uvwipe/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace uvwipe::app {

using nlohmann::json;

namespace {

// NaN coefficients mean "derive from the world"; JSON spells that null.
json optional_number(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

// Reads the keys of one JSON object, rejecting keys nobody asked for.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw Error(ErrorKind::parse, "config section '" + path_ + "' must be an object");
        }
    }
    Section(const Section&) = delete;
    Section& operator=(const Section&) = delete;

    ~Section() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) {
                throw Error(ErrorKind::parse, "unknown config key '" + qualified(item.key()) + "'");
            }
        }
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    template <typename T>
    void read(const std::string& key, T& out) {
        if (const json* v = find(key)) {
            try {
                out = v->get<T>();
            } catch (const json::exception&) {
                throw Error(ErrorKind::parse, "config key '" + qualified(key) + "' has the wrong type");
            }
        }
    }

    void read_nullable(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (v->is_null()) {
                out = std::numeric_limits<double>::quiet_NaN();
            } else if (v->is_number()) {
                out = v->get<double>();
            } else {
                throw Error(ErrorKind::parse, "config key '" + qualified(key) + "' must be a number or null");
            }
        }
    }

    template <typename Fn>
    void section(const std::string& key, Fn&& fn) {
        if (const json* v = find(key)) {
            Section s(*v, qualified(key));
            fn(s);
        }
    }

    std::string qualified(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

ZigzagAxis parse_axis(const std::string& s) {
    if (s == "u") return ZigzagAxis::u;
    if (s == "v") return ZigzagAxis::v;
    throw Error(ErrorKind::parse, "zigzag axis must be 'u' or 'v', got '" + s + "'");
}

}  // namespace

void ProjectConfig::resolve_paths(const std::filesystem::path& base) {
    auto fix = [&](std::filesystem::path& p) {
        if (!p.empty() && p.is_relative()) p = base / p;
    };
    fix(mesh);
    fix(region);
    fix(output_dir);
}

void ProjectConfig::validate(bool require_inputs) const {
    env.validate();
    train.validate();
    if (require_inputs) {
        if (mesh.empty() || !std::filesystem::exists(mesh)) {
            throw Error(ErrorKind::missing_artifact, "mesh file '" + mesh.string() + "' does not exist");
        }
        if (!region.empty() && !std::filesystem::exists(region)) {
            throw Error(ErrorKind::missing_artifact, "region file '" + region.string() + "' does not exist");
        }
    }
    if (!(baseline_spacing_factor > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "baseline spacing factor must be positive");
    }
    if (!(lift.dt > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "lift dt must be positive");
    }
    if (train.sac.extractor.obs_size != env.obs_size || train.sac.extractor.scales != env.obs_scales) {
        throw Error(ErrorKind::invalid_argument, "extractor input does not match the observation shape");
    }
}

json to_json(const ProjectConfig& c) {
    const rl::SacConfig& s = c.train.sac;
    json j;
    j["seed"] = c.seed;
    j["mesh"] = c.mesh.generic_string();
    j["region"] = c.region.generic_string();
    j["output_dir"] = c.output_dir.generic_string();
    j["parameterization"] = {
        {"domain", std::string(to_string(c.domain))},
        {"weights", std::string(to_string(c.weights))},
        {"boundary_start", c.boundary_start ? json(*c.boundary_start) : json(nullptr)},
    };
    j["environment"] = {
        {"resolution", c.env.resolution},
        {"footprint_radius", c.env.footprint_radius},
        {"speed", c.env.speed},
        {"obs_size", c.env.obs_size},
        {"obs_scales", c.env.obs_scales},
        {"obs_base_cell", c.env.obs_base_cell},
        {"reward",
         {{"lambda_c", optional_number(c.env.reward.lambda_c)},
          {"lambda_tv", optional_number(c.env.reward.lambda_tv)},
          {"r_const", optional_number(c.env.reward.r_const)},
          {"target_coverage", c.env.reward.target_coverage},
          {"max_steps", c.env.reward.max_steps}}},
    };
    j["planner"] = {
        {"spacing_factor", c.baseline_spacing_factor},
        {"zigzag_margin", c.zigzag.margin},
        {"zigzag_axis", c.zigzag.axis == ZigzagAxis::u ? "u" : "v"},
        {"max_step", c.zigzag.max_step},
        {"spiral_max_angle_step", c.spiral.max_angle_step},
        {"spiral_close_outer", c.spiral.close_outer},
    };
    j["sac"] = {
        {"learning_rate", s.learning_rate},
        {"batch_size", c.train.batch_size},
        {"replay_buffer_size", c.train.buffer_capacity},
        {"discount", s.discount},
        {"action_noise", c.train.action_noise},
        {"action_noise_enabled", c.train.action_noise_enabled},
        {"total_steps", c.train.total_steps},
        {"tau", s.tau},
        {"target_entropy", s.target_entropy},
        {"initial_temperature", s.initial_temperature},
        {"auto_temperature", s.auto_temperature},
        {"critic_only_extractor", s.critic_only_extractor},
        {"warmup_steps", c.train.warmup_steps},
        {"update_every", c.train.update_every},
        {"eval_interval", c.train.eval_interval},
        {"eval_episodes", c.train.eval_episodes},
        {"checkpoint_interval", c.train.checkpoint_interval},
        {"actor_hidden", s.actor_hidden},
        {"critic_hidden", s.critic_hidden},
        {"extractor",
         {{"conv_channels", s.extractor.conv_channels},
          {"kernel", s.extractor.kernel},
          {"stride", s.extractor.stride},
          {"fc_widths", s.extractor.fc_widths}}},
    };
    j["lift"] = {{"delta", c.lift.delta}, {"dt", c.lift.dt}, {"gamma0", c.lift.gamma0}};
    return j;
}

ProjectConfig config_from_json(const json& j) {
    ProjectConfig c;
    rl::SacConfig& s = c.train.sac;
    Section root(j, "");
    root.read("seed", c.seed);
    std::string text;
    if (root.find("mesh")) {
        root.read("mesh", text);
        c.mesh = text;
    }
    if (root.find("region")) {
        text.clear();
        root.read("region", text);
        c.region = text;
    }
    if (root.find("output_dir")) {
        root.read("output_dir", text);
        c.output_dir = text;
    }
    root.section("parameterization", [&](Section& p) {
        std::string v;
        if (p.find("domain")) {
            p.read("domain", v);
            c.domain = parse_domain_kind(v);
        }
        if (p.find("weights")) {
            p.read("weights", v);
            c.weights = parse_weight_scheme(v);
        }
        if (const json* b = p.find("boundary_start"); b && !b->is_null()) {
            int start = 0;
            p.read("boundary_start", start);
            c.boundary_start = start;
        }
    });
    root.section("environment", [&](Section& e) {
        e.read("resolution", c.env.resolution);
        e.read("footprint_radius", c.env.footprint_radius);
        e.read("speed", c.env.speed);
        e.read("obs_size", c.env.obs_size);
        e.read("obs_scales", c.env.obs_scales);
        e.read("obs_base_cell", c.env.obs_base_cell);
        e.section("reward", [&](Section& r) {
            r.read_nullable("lambda_c", c.env.reward.lambda_c);
            r.read_nullable("lambda_tv", c.env.reward.lambda_tv);
            r.read_nullable("r_const", c.env.reward.r_const);
            r.read("target_coverage", c.env.reward.target_coverage);
            r.read("max_steps", c.env.reward.max_steps);
        });
    });
    root.section("planner", [&](Section& p) {
        p.read("spacing_factor", c.baseline_spacing_factor);
        p.read("zigzag_margin", c.zigzag.margin);
        if (p.find("zigzag_axis")) {
            std::string axis;
            p.read("zigzag_axis", axis);
            c.zigzag.axis = parse_axis(axis);
        }
        p.read("max_step", c.zigzag.max_step);
        c.spiral.max_step = c.zigzag.max_step;
        p.read("spiral_max_angle_step", c.spiral.max_angle_step);
        p.read("spiral_close_outer", c.spiral.close_outer);
    });
    root.section("sac", [&](Section& a) {
        a.read("learning_rate", s.learning_rate);
        a.read("batch_size", c.train.batch_size);
        a.read("replay_buffer_size", c.train.buffer_capacity);
        a.read("discount", s.discount);
        a.read("action_noise", c.train.action_noise);
        a.read("action_noise_enabled", c.train.action_noise_enabled);
        a.read("total_steps", c.train.total_steps);
        a.read("tau", s.tau);
        a.read("target_entropy", s.target_entropy);
        a.read("initial_temperature", s.initial_temperature);
        a.read("auto_temperature", s.auto_temperature);
        a.read("critic_only_extractor", s.critic_only_extractor);
        a.read("warmup_steps", c.train.warmup_steps);
        a.read("update_every", c.train.update_every);
        a.read("eval_interval", c.train.eval_interval);
        a.read("eval_episodes", c.train.eval_episodes);
        a.read("checkpoint_interval", c.train.checkpoint_interval);
        a.read("actor_hidden", s.actor_hidden);
        a.read("critic_hidden", s.critic_hidden);
        a.section("extractor", [&](Section& x) {
            x.read("conv_channels", s.extractor.conv_channels);
            x.read("kernel", s.extractor.kernel);
            x.read("stride", s.extractor.stride);
            x.read("fc_widths", s.extractor.fc_widths);
        });
    });
    root.section("lift", [&](Section& l) {
        l.read("delta", c.lift.delta);
        l.read("dt", c.lift.dt);
        l.read("gamma0", c.lift.gamma0);
    });
    s.extractor.obs_size = c.env.obs_size;
    s.extractor.scales = c.env.obs_scales;
    c.train.seed = stage_seed(c.seed, "train");
    return c;
}

ProjectConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::missing_artifact, "cannot open config '" + path.string() + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::parse, "config '" + path.string() + "': " + e.what());
    }
    ProjectConfig c = config_from_json(j);
    c.resolve_paths(path.parent_path());
    return c;
}

void save_config(const std::filesystem::path& path, const ProjectConfig& config) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write config '" + path.string() + "'");
    }
    out << to_json(config).dump(2) << '\n';
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t config_hash(const ProjectConfig& config) {
    json j = to_json(config);
    j.erase("output_dir");
    // Seeds pick one run among equals; they do not change what an artifact means.
    j.erase("seed");
    j["sac"].erase("checkpoint_interval");
    // Hash the file names, not where the project happens to live.
    j["mesh"] = config.mesh.filename().generic_string();
    j["region"] = config.region.filename().generic_string();
    return fnv1a(j.dump());
}

std::string hash_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::uint64_t parse_hash_hex(std::string_view text) {
    if (text.size() != 16) {
        throw Error(ErrorKind::parse, "config hash must be 16 hex digits");
    }
    std::uint64_t h = 0;
    for (char ch : text) {
        int d;
        if (ch >= '0' && ch <= '9') d = ch - '0';
        else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
        else throw Error(ErrorKind::parse, "config hash must be 16 hex digits");
        h = (h << 4) | static_cast<std::uint64_t>(d);
    }
    return h;
}

std::uint64_t stage_seed(std::uint64_t seed, std::string_view stage) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
    std::uint64_t h = fnv1a(std::string_view(bytes, sizeof bytes));
    h = fnv1a("/", h);
    h = fnv1a(stage, h);
    // splitmix64 finalizer to spread nearby seeds.
    h += 0x9e3779b97f4a7c15ULL;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

}  // namespace uvwipe::app
