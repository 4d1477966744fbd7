#include "dpg/error.hpp"
#include "dpg/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace dpg::mesh {

namespace {

template <typename T>
T next_token(std::istream& in, const char* what)
{
    T value{};
    if (!(in >> value)) {
        throw Error(ErrorCode::Parse, std::string("mesh file: expected ") + what);
    }
    return value;
}

}  // namespace

Mesh read_mesh(const std::filesystem::path& path, OrientationPolicy policy)
{
    std::ifstream in(path);
    DPG_THROW_IF(!in, ErrorCode::Io, "cannot open mesh file " + path.string());

    std::string header_line;
    std::getline(in, header_line);
    std::istringstream header(header_line);
    std::string magic;
    int dim = 0;
    std::string extra;
    if (!(header >> magic >> dim) || magic != "dpgmesh" || (header >> extra)) {
        throw Error(ErrorCode::Parse, "mesh file: malformed header, expected \"dpgmesh 2\"");
    }
    DPG_THROW_IF(dim != 2, ErrorCode::Unsupported, "mesh file: only dimension 2 is supported");

    const long nv = next_token<long>(in, "vertex count");
    const long nt = next_token<long>(in, "triangle count");
    DPG_THROW_IF(nv < 3 || nt < 1, ErrorCode::Parse, "mesh file: invalid counts");

    std::vector<Vec2> vertices(static_cast<std::size_t>(nv));
    for (auto& v : vertices) {
        v.x() = next_token<double>(in, "vertex x coordinate");
        v.y() = next_token<double>(in, "vertex y coordinate");
    }
    std::vector<std::array<int, 3>> triangles(static_cast<std::size_t>(nt));
    for (auto& t : triangles) {
        for (int& i : t) i = next_token<int>(in, "triangle vertex index");
    }
    std::string trailing;
    DPG_THROW_IF(static_cast<bool>(in >> trailing), ErrorCode::Parse, "mesh file: unexpected trailing data");
    return Mesh(std::move(vertices), std::move(triangles), policy);
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path)
{
    std::ofstream out(path);
    DPG_THROW_IF(!out, ErrorCode::Io, "cannot write mesh file " + path.string());
    out << "dpgmesh 2\n" << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
    char buf[96];
    for (const Vec2& v : mesh.vertices()) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x(), v.y());
        out << buf;
    }
    for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace dpg::mesh
