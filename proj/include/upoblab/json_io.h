#ifndef UPOBLAB_JSON_IO_H
#define UPOBLAB_JSON_IO_H

#include <string>

#include <json.hpp>

#include "upoblab/locc.h"
#include "upoblab/product_basis.h"
#include "upoblab/unextendibility.h"

namespace upoblab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// Complex numbers are [re, im]; matrices are {"rows", "cols", "entries"} with
// row-major entries; sets are {"shape": [[r, c], ...], "members": [{"label",
// "factors"}]}. Every *_from_json throws ParseError on malformed input.

Json to_json(Complex z);
Complex complex_from_json(const Json& j);

Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json to_json(const ProductOperator& p);
ProductOperator product_operator_from_json(const Json& j);

Json to_json(const OperatorSet& s);
OperatorSet operator_set_from_json(const Json& j);

Json to_json(const ExtendibilityVerdict& v);
Json to_json(const Classification& c);
Json to_json(const ProtocolTrace& t);
Json to_json(const NonlocalityEvidence& e);

struct ReportEnvelope {
    std::string command;
    Json inputs;
    Tolerance tolerance;
    Json result;
    std::string version = kVersion;
};

Json to_json(const ReportEnvelope& r);

/// Reads and parses a UTF-8 JSON file; throws ParseError on I/O or syntax errors.
Json read_json_file(const std::string& path);
/// Writes with two-space indentation; throws ConfigError when the file
/// cannot be opened.
void write_json_file(const std::string& path, const Json& j);

}  // namespace upoblab

#endif
