#include "uvwipe/obj_io.hpp"
#include "uvwipe/error.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace uvwipe {

namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
    throw Error(ErrorKind::parse, "OBJ line " + std::to_string(line_no) + ": " + what);
}

int parse_face_index(const std::string& token, std::size_t vertex_count, std::size_t line_no) {
    const std::string head = token.substr(0, token.find('/'));
    int value = 0;
    const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), value);
    if (ec != std::errc{} || ptr != head.data() + head.size() || value == 0) {
        parse_error(line_no, "bad face index '" + token + "'");
    }
    // OBJ indices are 1-based; negative values count back from the end.
    const long long idx = value > 0 ? value - 1LL : static_cast<long long>(vertex_count) + value;
    if (idx < 0 || idx >= static_cast<long long>(vertex_count)) {
        parse_error(line_no, "face index '" + token + "' out of range");
    }
    return static_cast<int>(idx);
}

}  // namespace

TriangleMesh read_obj(std::istream& in, const ObjReadOptions& options) {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') {
            continue;
        }
        if (tag == "v") {
            double x = 0, y = 0, z = 0;
            if (!(ls >> x >> y >> z)) {
                parse_error(line_no, "vertex needs three coordinates");
            }
            vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> corners;
            std::string token;
            while (ls >> token) {
                corners.push_back(parse_face_index(token, vertices.size(), line_no));
            }
            if (corners.size() < 3) {
                parse_error(line_no, "face needs at least three vertices");
            }
            if (corners.size() > 3 && !options.triangulate) {
                parse_error(line_no, "face has " + std::to_string(corners.size()) +
                                         " vertices and triangulation is disabled");
            }
            for (std::size_t k = 1; k + 1 < corners.size(); ++k) {
                faces.push_back({corners[0], corners[k], corners[k + 1]});
            }
        }
    }
    if (in.bad()) {
        throw Error(ErrorKind::io, "read failure while parsing OBJ");
    }
    return TriangleMesh(std::move(vertices), std::move(faces));
}

TriangleMesh load_mesh(const std::filesystem::path& path, const ObjReadOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open mesh file " + path.string());
    }
    return read_obj(in, options);
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
    out << std::setprecision(17);
    for (const Vec3& v : mesh.vertices()) {
        out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    }
    for (const Face& f : mesh.faces()) {
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    }
}

void save_mesh(const std::filesystem::path& path, const TriangleMesh& mesh) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write mesh file " + path.string());
    }
    write_obj(out, mesh);
}

std::vector<int> read_face_selection(std::istream& in) {
    std::vector<int> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        long long id = 0;
        if (!(ls >> id)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                throw Error(ErrorKind::parse, "selection line " + std::to_string(line_no) +
                                                  ": expected a face index");
            }
            continue;
        }
        if (id < 0) {
            throw Error(ErrorKind::parse, "selection line " + std::to_string(line_no) +
                                              ": negative face index");
        }
        ids.push_back(static_cast<int>(id));
    }
    return ids;
}

std::vector<int> load_face_selection(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open selection file " + path.string());
    }
    return read_face_selection(in);
}

}  // namespace uvwipe
