#pragma once

#include "uvwipe/mesh.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace uvwipe {

struct ObjReadOptions {
    // Fan-triangulate polygons with more than three corners instead of
    // rejecting them.
    bool triangulate = false;
};

// ASCII OBJ; only `v` and `f` records are interpreted, normals recomputed.
TriangleMesh read_obj(std::istream& in, const ObjReadOptions& options = {});
TriangleMesh load_mesh(const std::filesystem::path& path, const ObjReadOptions& options = {});

void write_obj(std::ostream& out, const TriangleMesh& mesh);
void save_mesh(const std::filesystem::path& path, const TriangleMesh& mesh);

// Newline-separated face indices; blank lines and '#' comments ignored.
std::vector<int> read_face_selection(std::istream& in);
std::vector<int> load_face_selection(const std::filesystem::path& path);

}  // namespace uvwipe
