#include "cmrl/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cmrl {

using nlohmann::json;

namespace {

json nested_sa(const std::vector<double>& flat, int S, int A) {
    json rows = json::array();
    for (int s = 0; s < S; ++s) {
        json row = json::array();
        for (int a = 0; a < A; ++a) row.push_back(flat[static_cast<size_t>(s) * A + a]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> flat_sa(const json& j, int S, int A) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(S) * A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) out.push_back(j.at(s).at(a).get<double>());
    return out;
}

} // namespace

json to_json(const TabularCmdp& m) {
    json j;
    j["n_states"] = m.n_states;
    j["n_actions"] = m.n_actions;
    j["rho"] = m.rho;
    json P = json::array();
    for (int s = 0; s < m.n_states; ++s) {
        json per_a = json::array();
        for (int a = 0; a < m.n_actions; ++a) {
            json row = json::array();
            for (int s2 = 0; s2 < m.n_states; ++s2) row.push_back(m.p(s, a, s2));
            per_a.push_back(std::move(row));
        }
        P.push_back(std::move(per_a));
    }
    j["P"] = std::move(P);
    j["r"] = nested_sa(m.r, m.n_states, m.n_actions);
    j["c"] = nested_sa(m.c, m.n_states, m.n_actions);
    j["gamma"] = m.gamma;
    return j;
}

TabularCmdp cmdp_from_json(const json& j) {
    TabularCmdp m = TabularCmdp::zeros(j.at("n_states").get<int>(), j.at("n_actions").get<int>(),
                                       j.at("gamma").get<double>());
    m.rho = j.at("rho").get<std::vector<double>>();
    const json& P = j.at("P");
    for (int s = 0; s < m.n_states; ++s)
        for (int a = 0; a < m.n_actions; ++a)
            for (int s2 = 0; s2 < m.n_states; ++s2)
                m.p(s, a, s2) = P.at(s).at(a).at(s2).get<double>();
    m.r = flat_sa(j.at("r"), m.n_states, m.n_actions);
    m.c = flat_sa(j.at("c"), m.n_states, m.n_actions);
    return m;
}

json to_json(const Policy& pi) {
    json j;
    j["n_states"] = pi.n_states;
    j["n_actions"] = pi.n_actions;
    j["probs"] = nested_sa(pi.probs, pi.n_states, pi.n_actions);
    return j;
}

Policy policy_from_json(const json& j) {
    Policy pi;
    pi.n_states = j.at("n_states").get<int>();
    pi.n_actions = j.at("n_actions").get<int>();
    pi.probs = flat_sa(j.at("probs"), pi.n_states, pi.n_actions);
    return pi;
}

json to_json(const GridworldLayout& layout) {
    json j;
    j["width"] = layout.width;
    j["height"] = layout.height;
    j["start"] = {layout.start.col, layout.start.row};
    j["goal"] = {layout.goal.col, layout.goal.row};
    json cells = json::array();
    for (Cell cell : layout.unsafe_cells) cells.push_back({cell.col, cell.row});
    j["unsafe_cells"] = std::move(cells);
    j["reward"] = layout.reward;
    j["cost"] = layout.cost;
    j["budget"] = layout.budget;
    j["gamma"] = layout.gamma;
    return j;
}

GridworldLayout layout_from_json(const json& j) {
    GridworldLayout l;
    l.width = j.at("width").get<int>();
    l.height = j.at("height").get<int>();
    l.start = {j.at("start").at(0).get<int>(), j.at("start").at(1).get<int>()};
    l.goal = {j.at("goal").at(0).get<int>(), j.at("goal").at(1).get<int>()};
    l.unsafe_cells.clear();
    for (const auto& cell : j.at("unsafe_cells"))
        l.unsafe_cells.push_back({cell.at(0).get<int>(), cell.at(1).get<int>()});
    l.reward = j.at("reward").get<double>();
    l.cost = j.at("cost").get<double>();
    l.budget = j.at("budget").get<double>();
    l.gamma = j.at("gamma").get<double>();
    return l;
}

namespace {

json to_json(const TrainConfig& c) {
    json j;
    j["eps"] = c.eps;
    j["delta"] = c.delta;
    j["xi"] = c.xi;
    j["n_init"] = c.n_init;
    j["max_doublings"] = c.max_doublings;
    j["rng_seed"] = c.rng_seed;
    j["feasibility_mode"] = c.feasibility_mode == FeasibleMode::Structured ? "structured" : "generic";
    return j;
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig c;
    c.eps = j.at("eps").get<double>();
    c.delta = j.at("delta").get<double>();
    c.xi = j.at("xi").get<double>();
    c.n_init = j.at("n_init").get<int>();
    c.max_doublings = j.at("max_doublings").get<int>();
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    c.feasibility_mode = j.at("feasibility_mode").get<std::string>() == "structured"
                             ? FeasibleMode::Structured
                             : FeasibleMode::Generic;
    return c;
}

} // namespace

json to_json(const TrainingBundle& bundle) {
    json j;
    j["pi_s"] = to_json(bundle.pi_s);
    j["gamma"] = bundle.gamma;
    json tuples = json::array();
    for (const PolicyValueTuple& t : bundle.tuples) {
        json tj;
        tj["policy"] = to_json(t.policy);
        tj["u"] = t.u;
        tj["v"] = t.v;
        tj["u_s"] = t.u_s;
        tj["v_s"] = t.v_s;
        tj["task_meta"] = {{"param", t.task_param}};
        tuples.push_back(std::move(tj));
    }
    j["tuples"] = std::move(tuples);
    j["config"] = to_json(bundle.config);
    json log = json::array();
    for (const TrainRound& r : bundle.log)
        log.push_back({{"n_samples", r.n_samples}, {"cover_size", r.cover_size}, {"statistic", r.statistic}});
    j["log"] = std::move(log);
    return j;
}

TrainingBundle bundle_from_json(const json& j) {
    TrainingBundle b;
    b.pi_s = policy_from_json(j.at("pi_s"));
    b.gamma = j.at("gamma").get<double>();
    for (const auto& tj : j.at("tuples")) {
        PolicyValueTuple t;
        t.policy = policy_from_json(tj.at("policy"));
        t.u = tj.at("u").get<double>();
        t.v = tj.at("v").get<double>();
        t.u_s = tj.at("u_s").get<double>();
        t.v_s = tj.at("v_s").get<double>();
        t.task_param = tj.at("task_meta").at("param").get<double>();
        b.tuples.push_back(std::move(t));
    }
    b.config = train_config_from_json(j.at("config"));
    for (const auto& rj : j.at("log"))
        b.log.push_back({rj.at("n_samples").get<int>(), rj.at("cover_size").get<int>(),
                         rj.at("statistic").get<double>()});
    return b;
}

namespace {

const char* event_name(EpisodeEvent e) {
    switch (e) {
        case EpisodeEvent::Eliminated: return "eliminated";
        case EpisodeEvent::AlphaUpdated: return "alpha_updated";
        default: return "none";
    }
}

json to_json(const TestConfig& c) {
    json j;
    j["K"] = c.K;
    j["H"] = c.horizon();
    j["eps"] = c.eps;
    j["delta"] = c.delta;
    j["gamma"] = c.gamma;
    j["rng_seed"] = c.rng_seed;
    j["range_scale"] = c.range_scale;
    return j;
}

} // namespace

json to_json(const TestReport& report, const TestConfig& config) {
    json j;
    j["config"] = to_json(config);
    j["v_star"] = report.v_star;
    j["safety_violations"] = report.safety_violations;
    j["exhausted_candidates"] = report.exhausted_candidates;
    json eps = json::array();
    for (size_t i = 0; i < report.episodes.size(); ++i) {
        const EpisodeRecord& e = report.episodes[i];
        json ej;
        ej["k"] = e.k;
        ej["candidate"] = e.candidate;
        ej["stage"] = e.stage;
        ej["alpha"] = e.alpha;
        ej["component"] = e.component;
        ej["R"] = e.R;
        ej["C"] = e.C;
        ej["event"] = event_name(e.event);
        ej["true_Vr"] = e.true_values.v_reward;
        ej["true_Vc"] = e.true_values.v_constraint;
        ej["regret_r"] = report.regret_reward[i];
        ej["regret_c"] = report.regret_constraint[i];
        eps.push_back(std::move(ej));
    }
    j["episodes"] = std::move(eps);
    json mix;
    mix["weights"] = report.pi_out.weights;
    json comps = json::array();
    for (const Policy& p : report.pi_out.components) comps.push_back(to_json(p));
    mix["components"] = std::move(comps);
    j["pi_out"] = std::move(mix);
    return j;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string report_to_csv(const TestReport& report, const TestConfig& config,
                          const std::string& header_comment) {
    std::ostringstream out;
    if (!header_comment.empty()) out << header_comment;
    out << "# K=" << config.K << " H=" << config.horizon() << " eps=" << format_double(config.eps)
        << " delta=" << format_double(config.delta) << " gamma=" << format_double(config.gamma)
        << " range_scale=" << format_double(config.range_scale) << " seed=" << config.rng_seed
        << "\n";
    out << "k,l,m,alpha,R_k,C_k,event,true_Vr,true_Vc,regret_r,regret_c\n";
    for (size_t i = 0; i < report.episodes.size(); ++i) {
        const EpisodeRecord& e = report.episodes[i];
        out << e.k << ',' << e.candidate << ',' << e.stage << ',' << format_double(e.alpha) << ','
            << format_double(e.R) << ',' << format_double(e.C) << ',' << event_name(e.event) << ','
            << format_double(e.true_values.v_reward) << ','
            << format_double(e.true_values.v_constraint) << ','
            << format_double(report.regret_reward[i]) << ','
            << format_double(report.regret_constraint[i]) << "\n";
    }
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

} // namespace cmrl
