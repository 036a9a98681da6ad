#pragma once

#include <optional>
#include <string>

#include "finsheaf/spectral.hpp"

namespace finsheaf {

enum class FileKind { Space, Sheaf, Complex, Double };

struct WorkspaceFile {
    FileKind kind = FileKind::Space;
    SpacePtr space; // set for space, sheaf, and sheaf-complex files
    std::optional<Sheaf> sheaf;
    std::optional<SheafComplex> complex;
    std::optional<DoubleComplex> dcomplex;
};

// Parses and validates a workspace file. A sheaf or complex file may name a
// bundled space instead of inlining one. ParseError carries the byte
// position; SchemaError carries the offending path.
WorkspaceFile load_workspace_text(const std::string& text, const std::string& origin);
WorkspaceFile load_workspace(const std::string& path);

// Canonical serialization: sorted keys, two-space indent, trailing newline,
// restrictions listed for every comparable pair. serialize(load(f)) is
// byte-identical for files produced here.
std::string serialize(const WorkspaceFile& w);
std::string serialize_space(const FiniteSpace& x);
std::string serialize_sheaf(const Sheaf& f);
std::string serialize_complex(const SheafComplex& l);
std::string serialize_double_complex(const DoubleComplex& k);

// FNV-1a 64-bit content digest, for the report's input echo.
std::string digest_hex(const std::string& bytes);

} // namespace finsheaf
