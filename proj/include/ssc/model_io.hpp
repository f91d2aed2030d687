#pragma once

#include "ssc/adaptive.hpp"
#include "ssc/oracle.hpp"

#include <iosfwd>
#include <memory>
#include <string>

namespace ssc {

/// Oracle selection: a test function by name, or "gas-network" with a
/// network file.
struct OracleSpec {
    std::string name = "clipped-sine";
    int d = 2;
    double threshold = 0.7;
    std::string network;
};

/// Constructs the oracle. For a gas network the dimension is taken from the
/// bindings and `spec.d` is ignored. Throws ConfigError.
std::unique_ptr<Oracle> make_oracle(const OracleSpec& spec);

/// A surrogate model together with the oracle it approximates.
struct StoredModel {
    OracleSpec oracle;
    SurrogateModel model;
};

/// Writes the "SSCMODEL1" text format: a header of key/value lines, then one
/// line per sample with coordinates, value, label and parent prediction.
void save_model(std::ostream& out, const OracleSpec& oracle, const SurrogateModel& model);
void save_model(const std::string& path, const OracleSpec& oracle, const SurrogateModel& model);

/// Reads a model and rebuilds triangulation and surrogates from the
/// samples. Throws ParseError.
StoredModel load_model(std::istream& in);
StoredModel load_model(const std::string& path);

} // namespace ssc
