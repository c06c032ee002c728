#include "levyt/report.hpp"

#include <cstdio>
#include <set>

namespace levyt {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw std::invalid_argument("config: unknown key '" + item.key() + "' in " +
                                        where);
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Json config_to_json(const ExperimentConfig& cfg) {
    Json f;
    f["name"] = cfg.family.name;
    f["f"] = cfg.family.f;
    f["rho"] = cfg.family.rho;
    f["amplitude"] = cfg.family.amplitude;
    f["seed"] = cfg.family.seed;
    f["dim"] = cfg.family.dim;
    f["matrix_size"] = cfg.family.matrix_size;

    Json j;
    j["family"] = std::move(f);
    j["x"] = cfg.x;
    j["steps"] = cfg.steps;
    j["paths"] = cfg.paths;
    j["modes"] = cfg.modes;
    j["scheme"] = scheme_name(cfg.scheme);
    j["epsilon"] = cfg.epsilon;
    j["seed"] = cfg.seed;
    j["proposal_sigma"] = cfg.proposal_sigma;
    return j;
}

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
    // workers is execution plumbing, not part of the experiment, so the echo
    // stays identical across worker counts
    require_keys(j,
                 {"family", "x", "steps", "paths", "modes", "scheme", "epsilon", "seed",
                  "proposal_sigma"},
                 "config");
    ExperimentConfig cfg;
    if (j.contains("family")) {
        const Json& f = j.at("family");
        if (!f.is_object()) throw std::invalid_argument("config: family must be an object");
        require_keys(f, {"name", "f", "rho", "amplitude", "seed", "dim", "matrix_size"},
                     "family");
        if (f.contains("name")) cfg.family.name = f.at("name").get<std::string>();
        if (f.contains("f")) cfg.family.f = f.at("f").get<double>();
        if (f.contains("rho")) cfg.family.rho = f.at("rho").get<double>();
        if (f.contains("amplitude")) cfg.family.amplitude = f.at("amplitude").get<double>();
        if (f.contains("seed")) cfg.family.seed = f.at("seed").get<std::uint64_t>();
        if (f.contains("dim")) cfg.family.dim = f.at("dim").get<int>();
        if (f.contains("matrix_size")) cfg.family.matrix_size = f.at("matrix_size").get<int>();
    }
    if (j.contains("x")) cfg.x = j.at("x").get<std::vector<double>>();
    if (j.contains("steps")) cfg.steps = j.at("steps").get<int>();
    if (j.contains("paths")) cfg.paths = j.at("paths").get<int>();
    if (j.contains("modes")) cfg.modes = j.at("modes").get<std::vector<int>>();
    if (j.contains("scheme")) cfg.scheme = parse_scheme(j.at("scheme").get<std::string>());
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("proposal_sigma"))
        cfg.proposal_sigma = j.at("proposal_sigma").get<double>();
    return cfg;
}

Json matrix_to_json(const CMat& m) {
    Json data = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = std::move(data);
    return j;
}

CMat matrix_from_json(const Json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const Json& data = j.at("data");
    if (Eigen::Index(data.size()) != rows * cols)
        throw std::invalid_argument("matrix: data length does not match shape");
    CMat m(rows, cols);
    Eigen::Index i = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c, ++i)
            m(r, c) = Complex(data[i][0].get<double>(), data[i][1].get<double>());
    return m;
}

Json estimate_to_json(const ScalarEstimate& e) {
    Json j;
    j["mean"] = e.mean;
    j["stderr"] = e.stderr_;
    j["paths"] = e.paths;
    return j;
}

Json sweep_to_json(const SweepSummary& s) {
    Json points = Json::array();
    for (const auto& p : s.points) {
        Json q;
        q["n"] = p.n;
        q["rms"] = p.rms;
        q["stderr"] = p.stderr_;
        points.push_back(std::move(q));
    }
    Json j;
    j["points"] = std::move(points);
    j["closed_rms"] = s.closed_rms;
    j["closed_stderr"] = s.closed_stderr;
    j["paths"] = s.paths;
    return j;
}

std::string sweep_csv(const std::vector<int>& n, const std::vector<double>& rms,
                      const std::vector<double>& stderr_) {
    if (n.size() != rms.size() || n.size() != stderr_.size())
        throw std::invalid_argument("sweep_csv: column lengths differ");
    std::string out = "n,rms,stderr\n";
    for (std::size_t i = 0; i < n.size(); ++i)
        out += std::to_string(n[i]) + "," + num(rms[i]) + "," + num(stderr_[i]) + "\n";
    return out;
}

std::string build_fingerprint() {
#ifdef LEVYT_GIT_SHA
    const char* sha = LEVYT_GIT_SHA;
#else
    const char* sha = "unknown";
#endif
    return std::string("rev=") + sha + " compiler=" + __VERSION__ +
           " eigen=" + std::to_string(EIGEN_WORLD_VERSION) + "." +
           std::to_string(EIGEN_MAJOR_VERSION) + "." +
           std::to_string(EIGEN_MINOR_VERSION);
}

Json make_report(const std::string& experiment, const ExperimentConfig& cfg) {
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["experiment"] = experiment;
    j["config"] = config_to_json(cfg);
    j["build"] = build_fingerprint();
    return j;
}

}  // namespace levyt
