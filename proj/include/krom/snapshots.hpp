#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace krom {

enum class RepKind { raw, complexified_angle, hankel };

struct Representation {
    RepKind kind = RepKind::raw;
    int delay = 0;                       // hankel only
    int base_n_obs = 0;                  // hankel only
    RepKind base_kind = RepKind::raw;    // hankel only: what the stacked blocks hold

    static Representation raw() { return {}; }
    static Representation complexified() { return {RepKind::complexified_angle, 0, 0}; }
    static Representation hankel_of(int d, int base, RepKind base_kind = RepKind::raw) {
        return {RepKind::hankel, d, base, base_kind};
    }

    bool operator==(const Representation&) const = default;
};

std::string to_string(const Representation& rep);

// Metadata of a snapshot matrix, detached from the values. Decompositions and
// models carry a copy so downstream artifacts stay self-describing.
struct SnapshotMeta {
    double dt = 1.0;
    double t0 = 0.0;
    int n_obs = 0;
    int n_t = 0;
    std::vector<std::string> coord_names;
    Representation representation;
    std::optional<double> period;  // set once angles were complexified
};

// Complex observable trajectory, one column per time step. Immutable by
// convention: every operation returns a new matrix.
struct SnapshotMatrix {
    Eigen::MatrixXcd values;  // n_obs x n_t
    double dt = 1.0;
    double t0 = 0.0;
    std::vector<std::string> coord_names;
    Representation representation;
    std::optional<double> period;

    int n_obs() const { return static_cast<int>(values.rows()); }
    int n_t() const { return static_cast<int>(values.cols()); }
    SnapshotMeta meta() const;

    // Throws unless n_obs >= 1, n_t >= 2, entries finite, names consistent,
    // and hankel row count matches delay * base_n_obs.
    void validate() const;
};

SnapshotMatrix make_snapshots(Eigen::MatrixXcd values, double dt, double t0 = 0.0,
                              std::vector<std::string> coord_names = {});

// CSV-plus-manifest persistence. `path` names the CSV; the manifest lives at
// `<path minus .csv>.manifest.json`. Floats are written with 17 significant
// digits so the round trip is bit-exact.
SnapshotMatrix load_snapshots(const std::filesystem::path& path);
void save_snapshots(const SnapshotMatrix& snapshots, const std::filesystem::path& path);

// Delay embedding: output column k stacks columns k..k+d-1, oldest on top.
// Result is (n_obs * d) x (n_t - d + 1) and tagged hankel(d, n_obs).
SnapshotMatrix hankel_embed(const SnapshotMatrix& snapshots, int delay);

// Drop the lagged blocks of a hankel matrix, keeping rows 0..base_n_obs-1.
// Column k of the result is the un-lagged snapshot at time index k, tagged
// with the pre-embedding representation.
SnapshotMatrix unembed_first_block(const SnapshotMatrix& snapshots);

// Angle -> unit circle: theta |-> exp(i * 2*pi * theta / period).
SnapshotMatrix complexify_angles(const SnapshotMatrix& snapshots, double period);

// Inverse map: z |-> arg(z) * period / (2*pi), normalized into [0, period).
// z = 0 maps to angle 0. The modulus is ignored, so reconstructed data that
// drifted off the unit circle still decodes.
SnapshotMatrix decomplexify_angles(const SnapshotMatrix& snapshots);

}  // namespace krom
