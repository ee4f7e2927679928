#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lorentz_lab/characterization.hpp"
#include "lorentz_lab/domain.hpp"
#include "lorentz_lab/maximal_sandbox.hpp"
#include "lorentz_lab/oracle.hpp"

namespace lorentz_lab::cli {

using nlohmann::json;

/// Bad or inconsistent configuration; maps to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridConfig {
    double t_min = 1e-3;
    double t_max = 1e3;
    std::size_t N = 1024;
    std::vector<double> edges;  // explicit edges win over (t_min, t_max, N)

    GridPtr build() const;
    GridPtr build(std::size_t cells) const;
};

/// One fully resolved run: the base document with a sweep point merged in.
struct RunConfig {
    json doc;
    std::filesystem::path base_dir;

    GridConfig grid() const;
    std::vector<std::size_t> levels() const;
    WeightSpec weight(const std::string& name, const GridPtr& g) const;
    WeightSpec phi(const GridPtr& g) const;
    std::optional<PowerLog> descriptor(const std::string& name) const;
    double exponent(const std::string& name) const;
    std::optional<double> exponent_if(const std::string& name) const;
    Target target() const;
    std::optional<Regime> regime() const;
    OracleOptions oracle_options(std::uint64_t seed, unsigned threads) const;
    SandboxOptions sandbox_options(unsigned threads) const;
    EquivalenceOptions equivalence_options() const;
    json label() const;
};

struct Settings {
    std::uint64_t seed = 1;
    double cap = kDefaultCap;
    unsigned threads = 1;
    std::filesystem::path out = ".";
};

struct Loaded {
    std::vector<RunConfig> runs;  // one per sweep point, or the base alone
    Settings settings;
};

/// Reads the document, applies each entry of "points" as a JSON merge patch
/// and resolves seed and cap. Flags and LORENTZ_LAB_CAP take precedence.
Loaded load(const std::filesystem::path& path, std::optional<std::uint64_t> seed_flag,
            std::optional<unsigned> threads_flag, const std::filesystem::path& out);

/// Two-column (t, value) CSV, interpolated linearly in (log t, log value) at
/// the cell midpoints and held constant past the ends.
GridFunction read_samples(const std::filesystem::path& path, const GridPtr& g);

PowerLog parse_powerlog(const json& j);

}  // namespace lorentz_lab::cli
