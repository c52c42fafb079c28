#include "krom/snapshots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "krom/errors.hpp"

namespace krom {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::filesystem::path manifest_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".manifest.json");
    return p;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& cell, const std::string& context) {
    try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("malformed CSV: cannot parse '" + cell + "' in " + context);
    }
}

}  // namespace

std::string to_string(const Representation& rep) {
    switch (rep.kind) {
        case RepKind::raw: return "raw";
        case RepKind::complexified_angle: return "complexified-angle";
        case RepKind::hankel:
            return "hankel(" + std::to_string(rep.delay) + "," + std::to_string(rep.base_n_obs) + ")";
    }
    return "raw";
}

SnapshotMeta SnapshotMatrix::meta() const {
    return SnapshotMeta{dt, t0, n_obs(), n_t(), coord_names, representation, period};
}

void SnapshotMatrix::validate() const {
    if (n_obs() < 1) throw ConfigError("snapshot matrix needs at least one observable");
    if (n_t() < 2) throw ConfigError("snapshot matrix needs at least two time steps");
    if (!values.allFinite()) throw NumericError("snapshot matrix contains non-finite entries");
    if (!coord_names.empty() && static_cast<int>(coord_names.size()) != n_obs())
        throw ConfigError("coord_names length does not match observable count");
    if (representation.kind == RepKind::hankel &&
        n_obs() != representation.delay * representation.base_n_obs)
        throw ConfigError("hankel representation inconsistent with row count");
    if (dt <= 0.0) throw ConfigError("dt must be positive");
}

SnapshotMatrix make_snapshots(Eigen::MatrixXcd values, double dt, double t0,
                              std::vector<std::string> coord_names) {
    SnapshotMatrix s;
    s.values = std::move(values);
    s.dt = dt;
    s.t0 = t0;
    if (coord_names.empty()) {
        coord_names.reserve(static_cast<std::size_t>(s.values.rows()));
        for (int i = 0; i < s.values.rows(); ++i) coord_names.push_back("x" + std::to_string(i));
    }
    s.coord_names = std::move(coord_names);
    s.validate();
    return s;
}

void save_snapshots(const SnapshotMatrix& snapshots, const std::filesystem::path& path) {
    if (snapshots.values.size() == 0) throw ConfigError("refusing to save an empty snapshot matrix");
    snapshots.validate();

    std::ofstream csv(path);
    if (!csv) throw ConfigError("cannot open '" + path.string() + "' for writing");

    csv << "t";
    for (const auto& name : snapshots.coord_names) csv << "," << name << "_re," << name << "_im";
    csv << "\n";
    for (int k = 0; k < snapshots.n_t(); ++k) {
        csv << fmt17(snapshots.t0 + k * snapshots.dt);
        for (int i = 0; i < snapshots.n_obs(); ++i) {
            const auto z = snapshots.values(i, k);
            csv << "," << fmt17(z.real()) << "," << fmt17(z.imag());
        }
        csv << "\n";
    }
    if (!csv) throw ConfigError("write failure on '" + path.string() + "'");

    json manifest;
    manifest["dt"] = snapshots.dt;
    manifest["t0"] = snapshots.t0;
    manifest["n_obs"] = snapshots.n_obs();
    manifest["n_t"] = snapshots.n_t();
    manifest["coord_names"] = snapshots.coord_names;
    json rep;
    rep["kind"] = to_string(Representation{snapshots.representation.kind});
    if (snapshots.representation.kind == RepKind::hankel) {
        rep["kind"] = "hankel";
        rep["d"] = snapshots.representation.delay;
        rep["base_n_obs"] = snapshots.representation.base_n_obs;
        rep["base_kind"] = to_string(Representation{snapshots.representation.base_kind});
    }
    manifest["representation"] = rep;
    if (snapshots.period) manifest["period"] = *snapshots.period;

    std::ofstream mf(manifest_path(path));
    if (!mf) throw ConfigError("cannot open manifest for '" + path.string() + "'");
    mf << manifest.dump(2) << "\n";
}

SnapshotMatrix load_snapshots(const std::filesystem::path& path) {
    std::ifstream csv(path);
    if (!csv) throw ConfigError("cannot open '" + path.string() + "'");
    std::ifstream mf(manifest_path(path));
    if (!mf) throw ConfigError("missing manifest for '" + path.string() + "'");

    json manifest;
    try {
        mf >> manifest;
    } catch (const json::exception& e) {
        throw ConfigError("malformed manifest for '" + path.string() + "': " + e.what());
    }

    SnapshotMatrix s;
    try {
        s.dt = manifest.at("dt").get<double>();
        s.t0 = manifest.at("t0").get<double>();
        s.coord_names = manifest.at("coord_names").get<std::vector<std::string>>();
        const auto& rep = manifest.at("representation");
        const std::string kind = rep.at("kind").get<std::string>();
        if (kind == "raw") {
            s.representation = Representation::raw();
        } else if (kind == "complexified-angle") {
            s.representation = Representation::complexified();
        } else if (kind == "hankel") {
            RepKind base_kind = RepKind::raw;
            if (rep.contains("base_kind") &&
                rep.at("base_kind").get<std::string>() == "complexified-angle")
                base_kind = RepKind::complexified_angle;
            s.representation = Representation::hankel_of(rep.at("d").get<int>(),
                                                         rep.at("base_n_obs").get<int>(), base_kind);
        } else {
            throw ConfigError("unknown representation kind '" + kind + "'");
        }
        if (manifest.contains("period")) s.period = manifest.at("period").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError("manifest for '" + path.string() + "' missing fields: " + e.what());
    }
    const int n_obs = manifest.at("n_obs").get<int>();
    const int n_t = manifest.at("n_t").get<int>();

    std::string header;
    if (!std::getline(csv, header)) throw ConfigError("empty CSV '" + path.string() + "'");
    const auto cols = split_csv_line(header);
    if (cols.empty() || cols[0] != "t")
        throw ConfigError("CSV header must start with 't' in '" + path.string() + "'");

    // Columns after t: <name>_re mandatory, <name>_im optional (zero imag).
    struct Slot { int re = -1; int im = -1; };
    std::vector<Slot> slots;
    std::vector<std::string> names;
    for (std::size_t c = 1; c < cols.size(); ++c) {
        const std::string& col = cols[c];
        const bool is_re = col.size() > 3 && col.ends_with("_re");
        const bool is_im = col.size() > 3 && col.ends_with("_im");
        if (!is_re && !is_im)
            throw ConfigError("CSV column '" + col + "' lacks _re/_im suffix");
        const std::string base = col.substr(0, col.size() - 3);
        auto it = std::find(names.begin(), names.end(), base);
        std::size_t idx;
        if (it == names.end()) {
            names.push_back(base);
            slots.push_back({});
            idx = names.size() - 1;
        } else {
            idx = static_cast<std::size_t>(it - names.begin());
        }
        (is_re ? slots[idx].re : slots[idx].im) = static_cast<int>(c);
    }
    for (std::size_t i = 0; i < slots.size(); ++i)
        if (slots[i].re < 0)
            throw ConfigError("CSV coordinate '" + names[i] + "' has no _re column");
    if (static_cast<int>(names.size()) != n_obs)
        throw ConfigError("manifest declares n_obs=" + std::to_string(n_obs) + " but CSV body has " +
                          std::to_string(names.size()) + " coordinates");

    Eigen::MatrixXcd values(n_obs, n_t);
    std::string line;
    int row = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        if (row >= n_t)
            throw ConfigError("CSV has more rows than manifest n_t=" + std::to_string(n_t));
        const auto cells = split_csv_line(line);
        if (cells.size() != cols.size())
            throw ConfigError("CSV row " + std::to_string(row) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(cols.size()));
        const std::string ctx = "row " + std::to_string(row);
        for (int i = 0; i < n_obs; ++i) {
            const double re = parse_double(cells[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)].re)], ctx);
            const double im = slots[static_cast<std::size_t>(i)].im >= 0
                                  ? parse_double(cells[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)].im)], ctx)
                                  : 0.0;
            values(i, row) = {re, im};
        }
        ++row;
    }
    if (row != n_t)
        throw ConfigError("CSV has " + std::to_string(row) + " rows, manifest declares n_t=" +
                          std::to_string(n_t));

    s.values = std::move(values);
    s.validate();
    return s;
}

SnapshotMatrix hankel_embed(const SnapshotMatrix& snapshots, int delay) {
    snapshots.validate();
    if (snapshots.representation.kind == RepKind::hankel)
        throw ConfigError("data is already delay-embedded");
    const int n = snapshots.n_obs();
    const int n_t = snapshots.n_t();
    if (delay < 1 || delay > n_t - 1)
        throw ConfigError("delay must be in [1, n_t-1], got " + std::to_string(delay));

    const int out_cols = n_t - delay + 1;
    Eigen::MatrixXcd emb(n * delay, out_cols);
    for (int k = 0; k < out_cols; ++k)
        for (int l = 0; l < delay; ++l)
            emb.block(l * n, k, n, 1) = snapshots.values.col(k + l);

    SnapshotMatrix out;
    out.values = std::move(emb);
    out.dt = snapshots.dt;
    out.t0 = snapshots.t0;
    out.period = snapshots.period;
    out.representation = Representation::hankel_of(delay, n, snapshots.representation.kind);
    out.coord_names.reserve(static_cast<std::size_t>(n * delay));
    for (int l = 0; l < delay; ++l)
        for (int i = 0; i < n; ++i)
            out.coord_names.push_back(snapshots.coord_names[static_cast<std::size_t>(i)] +
                                      (l == 0 ? std::string{} : "+lag" + std::to_string(l)));
    out.validate();
    return out;
}

SnapshotMatrix unembed_first_block(const SnapshotMatrix& snapshots) {
    if (snapshots.representation.kind != RepKind::hankel)
        throw ConfigError("unembed_first_block requires a hankel matrix");
    const int base = snapshots.representation.base_n_obs;
    SnapshotMatrix out;
    out.values = snapshots.values.topRows(base);
    out.dt = snapshots.dt;
    out.t0 = snapshots.t0;
    out.period = snapshots.period;
    out.representation = snapshots.representation.base_kind == RepKind::complexified_angle
                             ? Representation::complexified()
                             : Representation::raw();
    out.coord_names.assign(snapshots.coord_names.begin(), snapshots.coord_names.begin() + base);
    out.validate();
    return out;
}

SnapshotMatrix complexify_angles(const SnapshotMatrix& snapshots, double period) {
    snapshots.validate();
    if (snapshots.representation.kind != RepKind::raw)
        throw ConfigError("complexify_angles expects raw data (complexify before embedding)");
    if (period <= 0.0) throw ConfigError("period must be positive");
    if (snapshots.values.imag().cwiseAbs().maxCoeff() != 0.0)
        throw ConfigError("complexify_angles expects real-valued input");

    SnapshotMatrix out = snapshots;
    for (int k = 0; k < out.n_t(); ++k)
        for (int i = 0; i < out.n_obs(); ++i) {
            const double phase = kTwoPi * snapshots.values(i, k).real() / period;
            out.values(i, k) = {std::cos(phase), std::sin(phase)};
        }
    out.representation = Representation::complexified();
    out.period = period;
    return out;
}

SnapshotMatrix decomplexify_angles(const SnapshotMatrix& snapshots) {
    if (snapshots.representation.kind != RepKind::complexified_angle)
        throw ConfigError("decomplexify_angles requires a complexified-angle matrix");
    if (!snapshots.period) throw ConfigError("complexified-angle matrix lacks a period");
    const double period = *snapshots.period;

    SnapshotMatrix out = snapshots;
    for (int k = 0; k < out.n_t(); ++k)
        for (int i = 0; i < out.n_obs(); ++i) {
            const auto z = snapshots.values(i, k);
            double angle = (z == std::complex<double>{0.0, 0.0})
                               ? 0.0
                               : std::arg(z) * period / kTwoPi;
            angle = std::fmod(angle, period);
            if (angle < 0.0) angle += period;
            if (angle >= period) angle = 0.0;  // fmod rounding at the seam
            out.values(i, k) = {angle, 0.0};
        }
    out.representation = Representation::raw();
    return out;
}

}  // namespace krom
