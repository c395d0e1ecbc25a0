#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fliplab/scheme.hpp"

namespace fliplab {

// Scheme exchange file: one UTF-8 JSON object per file,
//
//   {"format":[n,m,p], "ring":{"kind":"Z2"|"Zp"|"Z2k"|"Q", "p":3, "k":20},
//    "orientation":"brent", "rank":r,
//    "triples":[{"u":[[...]], "v":[[...]], "w":[[...]]}, ...]}
//
// u is n x m, v is m x p, w is p x n (row-major nested arrays). Modular rings
// store canonical integer representatives, Q stores strings "a/b". A reader
// also accepts "orientation":"nxp", in which case w is given n x p and is
// transposed on input. Reading never verifies.

nlohmann::json ring_to_json(const Ring& r);
/// Throws UnsupportedRingError for unknown kinds or invalid parameters.
Ring ring_from_json(const nlohmann::json& j, const std::string& where = "ring");

/// Deterministic text: one triple per line, fixed key order, trailing newline.
std::string scheme_to_string(const Scheme& s);
/// Throws ParseError (line/column or field path) or UnsupportedRingError.
Scheme scheme_from_string(const std::string& text);
Scheme scheme_from_json(const nlohmann::json& j);

void write_scheme(const Scheme& s, const std::filesystem::path& path);
/// Throws ParseError also when the file cannot be opened.
Scheme read_scheme(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Writes via a temporary file and rename, so readers never see partial files.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace fliplab
