#include "krom/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "krom/errors.hpp"

namespace krom {

using nlohmann::json;

namespace {

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
    }
    return j;
}

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw ConfigError("write failure on '" + path.string() + "'");
}

json complex_to_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json cvector_to_json(const Eigen::VectorXcd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
    return arr;
}

Eigen::VectorXcd cvector_from_json(const json& j) {
    Eigen::VectorXcd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

json cmatrix_to_json(const Eigen::MatrixXcd& m) {
    json cols = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) cols.push_back(cvector_to_json(m.col(c)));
    return cols;
}

Eigen::MatrixXcd cmatrix_from_json(const json& j, Eigen::Index rows) {
    Eigen::MatrixXcd m(rows, static_cast<Eigen::Index>(j.size()));
    for (std::size_t c = 0; c < j.size(); ++c) {
        const Eigen::VectorXcd col = cvector_from_json(j[c]);
        if (col.size() != rows) throw ConfigError("ragged matrix in JSON");
        m.col(static_cast<Eigen::Index>(c)) = col;
    }
    return m;
}

const char* rep_kind_name(RepKind k) {
    switch (k) {
        case RepKind::raw: return "raw";
        case RepKind::complexified_angle: return "complexified_angle";
        case RepKind::hankel: return "hankel";
    }
    return "raw";
}

RepKind rep_kind_from(const std::string& s) {
    if (s == "raw") return RepKind::raw;
    if (s == "complexified_angle") return RepKind::complexified_angle;
    if (s == "hankel") return RepKind::hankel;
    throw ConfigError("unknown representation kind '" + s + "'");
}

json meta_to_json(const SnapshotMeta& meta) {
    json j;
    j["dt"] = meta.dt;
    j["t0"] = meta.t0;
    j["n_obs"] = meta.n_obs;
    j["n_t"] = meta.n_t;
    j["coord_names"] = meta.coord_names;
    json rep;
    rep["kind"] = rep_kind_name(meta.representation.kind);
    if (meta.representation.kind == RepKind::hankel) {
        rep["delay"] = meta.representation.delay;
        rep["base_n_obs"] = meta.representation.base_n_obs;
        rep["base_kind"] = rep_kind_name(meta.representation.base_kind);
    }
    j["representation"] = rep;
    if (meta.period) j["period"] = *meta.period;
    return j;
}

SnapshotMeta meta_from_json(const json& j) {
    SnapshotMeta meta;
    meta.dt = j.at("dt").get<double>();
    meta.t0 = j.at("t0").get<double>();
    meta.n_obs = j.at("n_obs").get<int>();
    meta.n_t = j.at("n_t").get<int>();
    meta.coord_names = j.at("coord_names").get<std::vector<std::string>>();
    const json& rep = j.at("representation");
    meta.representation.kind = rep_kind_from(rep.at("kind").get<std::string>());
    if (meta.representation.kind == RepKind::hankel) {
        meta.representation.delay = rep.at("delay").get<int>();
        meta.representation.base_n_obs = rep.at("base_n_obs").get<int>();
        if (rep.contains("base_kind"))
            meta.representation.base_kind = rep_kind_from(rep.at("base_kind").get<std::string>());
    }
    if (j.contains("period")) meta.period = j.at("period").get<double>();
    return meta;
}

json decomposition_to_json(const KoopmanDecomposition& d) {
    json j;
    j["eigenvalues"] = cvector_to_json(d.eigenvalues);
    j["modes"] = cmatrix_to_json(d.modes);
    j["raw_mode_norms"] = std::vector<double>(d.raw_mode_norms.begin(), d.raw_mode_norms.end());
    j["rank_used"] = d.rank_used;
    j["source_meta"] = meta_to_json(d.source_meta);
    return j;
}

KoopmanDecomposition decomposition_from_json(const json& j) {
    KoopmanDecomposition d;
    d.eigenvalues = cvector_from_json(j.at("eigenvalues"));
    d.source_meta = meta_from_json(j.at("source_meta"));
    d.modes = cmatrix_from_json(j.at("modes"), d.source_meta.n_obs);
    const auto norms = j.at("raw_mode_norms").get<std::vector<double>>();
    d.raw_mode_norms = Eigen::Map<const Eigen::VectorXd>(norms.data(),
                                                         static_cast<Eigen::Index>(norms.size()));
    d.rank_used = j.at("rank_used").get<int>();
    d.validate();
    return d;
}

// Noise trace CSV: header "t,<i>_re,<i>_im..." with the global snapshot index
// in t; mirrors the snapshot layout so the same readers work.
void save_trace_csv(const Eigen::MatrixXcd& m, int t_begin, const std::filesystem::path& path) {
    std::ofstream csv(path);
    if (!csv) throw ConfigError("cannot open '" + path.string() + "' for writing");
    csv << "t";
    for (Eigen::Index i = 0; i < m.rows(); ++i) csv << ",c" << i << "_re,c" << i << "_im";
    csv << "\n";
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
        csv << (t_begin + static_cast<int>(k));
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            csv << "," << fmt17(m(i, k).real()) << "," << fmt17(m(i, k).imag());
        csv << "\n";
    }
    if (!csv) throw ConfigError("write failure on '" + path.string() + "'");
}

Eigen::MatrixXcd load_trace_csv(const std::filesystem::path& path, Eigen::Index rows,
                                Eigen::Index cols) {
    std::ifstream csv(path);
    if (!csv) throw ConfigError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(csv, line)) throw ConfigError("empty trace CSV '" + path.string() + "'");
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index k = 0; k < cols; ++k) {
        if (!std::getline(csv, line))
            throw ConfigError("trace CSV '" + path.string() + "' ended early");
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');  // t column
        auto next_value = [&]() {
            if (!std::getline(ss, cell, ',')) throw ConfigError("short row in trace CSV");
            try {
                return std::stod(cell);
            } catch (const std::exception&) {
                throw ConfigError("malformed trace CSV cell '" + cell + "'");
            }
        };
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = next_value();
            const double im = next_value();
            m(i, k) = {re, im};
        }
    }
    return m;
}

}  // namespace

void save_decomposition(const KoopmanDecomposition& d, const std::filesystem::path& path) {
    d.validate();
    write_json(decomposition_to_json(d), path);
}

KoopmanDecomposition load_decomposition(const std::filesystem::path& path) {
    return decomposition_from_json(read_json(path));
}

void save_rom(const ReducedOrderModel& model, const std::filesystem::path& path) {
    model.validate();
    json j;
    j["decomposition"] = decomposition_to_json(model.decomposition);
    j["coefficients"] = cvector_to_json(model.coefficients);
    j["train_window"] = json::array({model.train_window.begin, model.train_window.end});
    j["dt"] = model.dt;
    write_json(j, path);
}

ReducedOrderModel load_rom(const std::filesystem::path& path) {
    const json j = read_json(path);
    ReducedOrderModel model;
    model.decomposition = decomposition_from_json(j.at("decomposition"));
    model.coefficients = cvector_from_json(j.at("coefficients"));
    const json& w = j.at("train_window");
    model.train_window = {w.at(0).get<int>(), w.at(1).get<int>()};
    model.dt = j.at("dt").get<double>();
    model.validate();
    return model;
}

void save_noise(const NoiseDecomposition& noise, const std::filesystem::path& path) {
    noise.validate();
    const std::filesystem::path dir = path.parent_path();
    const std::string stem = path.stem().string();

    json j;
    j["eval_window"] = json::array({noise.eval_window.begin, noise.eval_window.end});
    j["n_obs"] = static_cast<int>(noise.residual.rows());
    json fits = json::array();
    for (const GaussianFit& f : noise.gaussian_fits) {
        json g;
        g["mean_re"] = f.mean_re;
        g["std_re"] = f.std_re;
        g["mean_im"] = f.mean_im;
        g["std_im"] = f.std_im;
        fits.push_back(g);
    }
    j["gaussian_fits"] = fits;
    j["traces"] = {{"residual", stem + ".residual.csv"},
                   {"modal", stem + ".modal.csv"},
                   {"innovation", stem + ".innovation.csv"}};
    write_json(j, path);

    save_trace_csv(noise.residual, noise.eval_window.begin, dir / (stem + ".residual.csv"));
    save_trace_csv(noise.modal, noise.eval_window.begin, dir / (stem + ".modal.csv"));
    save_trace_csv(noise.innovation, noise.eval_window.begin, dir / (stem + ".innovation.csv"));
}

NoiseDecomposition load_noise(const std::filesystem::path& path) {
    const json j = read_json(path);
    NoiseDecomposition n;
    const json& w = j.at("eval_window");
    n.eval_window = {w.at(0).get<int>(), w.at(1).get<int>()};
    const auto rows = j.at("n_obs").get<Eigen::Index>();
    const Eigen::Index cols = n.eval_window.end - n.eval_window.begin;
    for (const json& g : j.at("gaussian_fits"))
        n.gaussian_fits.push_back({g.at("mean_re").get<double>(), g.at("std_re").get<double>(),
                                   g.at("mean_im").get<double>(), g.at("std_im").get<double>()});
    const std::filesystem::path dir = path.parent_path();
    const json& traces = j.at("traces");
    n.residual = load_trace_csv(dir / traces.at("residual").get<std::string>(), rows, cols);
    n.modal = load_trace_csv(dir / traces.at("modal").get<std::string>(), rows, cols);
    n.innovation = load_trace_csv(dir / traces.at("innovation").get<std::string>(), rows, cols);
    n.validate();
    return n;
}

void save_normality(const NormalityReport& report, const std::filesystem::path& path) {
    json j;
    j["model_sizes"] = report.model_sizes;
    json pv = json::array();
    for (const Eigen::VectorXd& p : report.p_values)
        pv.push_back(std::vector<double>(p.begin(), p.end()));
    j["p_values"] = pv;
    j["means"] = report.means;
    j["medians"] = report.medians;
    if (report.selected_J)
        j["selected_J"] = *report.selected_J;
    else
        j["selected_J"] = nullptr;
    j["threshold"] = report.threshold;
    write_json(j, path);
}

NormalityReport load_normality(const std::filesystem::path& path) {
    const json j = read_json(path);
    NormalityReport r;
    r.model_sizes = j.at("model_sizes").get<std::vector<int>>();
    for (const json& p : j.at("p_values")) {
        const auto v = p.get<std::vector<double>>();
        r.p_values.push_back(
            Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    r.means = j.at("means").get<std::vector<double>>();
    r.medians = j.at("medians").get<std::vector<double>>();
    if (!j.at("selected_J").is_null()) r.selected_J = j.at("selected_J").get<int>();
    r.threshold = j.at("threshold").get<double>();
    return r;
}

}  // namespace krom
