#pragma once

#include <string>

#include "gwsurgery/geometry_io.hpp"

namespace fixtures {

inline std::string data_dir() { return GWSURGERY_DATA_DIR; }

inline const gwsurgery::GeometryFile& geometry() {
    static gwsurgery::GeometryFile g =
        gwsurgery::load_geometry(data_dir() + "/local_p1.geom");
    return g;
}

inline const gwsurgery::GWTable& table_x() {
    static gwsurgery::GWTable t =
        gwsurgery::load_gwtable(data_dir() + "/table_x.txt", geometry());
    return t;
}

inline const gwsurgery::GWTable& table_xsecond() {
    static gwsurgery::GWTable t =
        gwsurgery::load_gwtable(data_dir() + "/table_xsecond.txt", geometry());
    return t;
}

}  // namespace fixtures
